/**
 * @file filters.hpp
 * @brief 3x3 correlation, Sobel edge map, Laplacian texture map and
 *        separable Gaussian blur.
 *
 * All borders use reflect-101 extension. Kernels are applied as written
 * (correlation, no flip): the tap at matrix row r, column c weights the
 * sample at (x + c - 1, y + r - 1).
 */
#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "said/core.hpp"

namespace said {

struct Kernel3x3 {
  std::array<double, 9> taps{};

  double operator()(int row, int col) const noexcept { return taps[row * 3 + col]; }

  static constexpr Kernel3x3 identity() { return {{0, 0, 0, 0, 1, 0, 0, 0, 0}}; }
  static constexpr Kernel3x3 sobel_x() { return {{-1, 0, 1, -2, 0, 2, -1, 0, 1}}; }
  static constexpr Kernel3x3 sobel_y() { return {{-1, -2, -1, 0, 0, 0, 1, 2, 1}}; }
  static constexpr Kernel3x3 laplacian() { return {{0, 1, 0, 1, -4, 1, 0, 1, 0}}; }
};

/// Normalized gradient magnitude, every sample in [0,1].
template <std::floating_point T>
struct BasicEdgeMap {
  BasicPlane<T> plane;
};

/// Signed Laplacian response.
template <std::floating_point T>
struct BasicTextureMap {
  BasicPlane<T> plane;
};

template <std::floating_point T>
struct BasicGradientPair {
  BasicPlane<T> gx;
  BasicPlane<T> gy;
};

using EdgeMap = BasicEdgeMap<double>;
using TextureMap = BasicTextureMap<double>;
using GradientPair = BasicGradientPair<double>;

template <std::floating_point T>
BasicPlane<T> convolve3x3(const BasicPlane<T>& p, const Kernel3x3& k) {
  const std::size_t w = p.width(), h = p.height();
  std::vector<std::size_t> xl(w), xr(w);
  for (std::size_t x = 0; x < w; ++x) {
    xl[x] = reflect101(static_cast<std::ptrdiff_t>(x) - 1, w);
    xr[x] = reflect101(static_cast<std::ptrdiff_t>(x) + 1, w);
  }
  std::array<T, 9> kt;
  for (std::size_t i = 0; i < 9; ++i) kt[i] = static_cast<T>(k.taps[i]);

  BasicPlane<T> out(w, h);
  parallel_for(h, [&](std::size_t y0, std::size_t y1) {
    for (std::size_t y = y0; y < y1; ++y) {
      const auto up = p.row(reflect101(static_cast<std::ptrdiff_t>(y) - 1, h));
      const auto mid = p.row(y);
      const auto dn = p.row(reflect101(static_cast<std::ptrdiff_t>(y) + 1, h));
      auto o = out.row(y);
      for (std::size_t x = 0; x < w; ++x) {
        const std::size_t l = xl[x], r = xr[x];
        o[x] = up[l] * kt[0] + up[x] * kt[1] + up[r] * kt[2] +
               mid[l] * kt[3] + mid[x] * kt[4] + mid[r] * kt[5] +
               dn[l] * kt[6] + dn[x] * kt[7] + dn[r] * kt[8];
      }
    }
  });
  return out;
}

template <std::floating_point T>
BasicGradientPair<T> sobel_gradients(const BasicPlane<T>& p) {
  return {convolve3x3(p, Kernel3x3::sobel_x()), convolve3x3(p, Kernel3x3::sobel_y())};
}

/**
 * @brief Sobel magnitude sqrt(gx^2 + gy^2), min-max normalized to [0,1].
 *
 * A flat input (max == min) yields an all-zero map.
 */
template <std::floating_point T>
BasicEdgeMap<T> sobel_edge_map(const BasicPlane<T>& p) {
  auto [gx, gy] = sobel_gradients(p);
  BasicPlane<T> mag(p.width(), p.height());
  {
    const auto xs = gx.samples(), ys = gy.samples();
    auto ms = mag.samples();
    parallel_for(ms.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) ms[i] = std::sqrt(xs[i] * xs[i] + ys[i] * ys[i]);
    });
  }
  const auto [lo, hi] = min_max(mag);
  if (!(hi > lo)) return {BasicPlane<T>(p.width(), p.height(), T(0))};
  const T span = hi - lo;
  auto ms = mag.samples();
  parallel_for(ms.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ms[i] = (ms[i] - lo) / span;
  });
  return {std::move(mag)};
}

template <std::floating_point T>
BasicTextureMap<T> laplacian(const BasicPlane<T>& p) {
  return {convolve3x3(p, Kernel3x3::laplacian())};
}

/// Sampled 1-D Gaussian, radius ceil(3*sigma), renormalized to sum 1.
inline std::vector<double> gaussian_taps(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("gaussian sigma must be positive");
  const auto r = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * r + 1));
  double sum = 0.0;
  for (std::ptrdiff_t t = -r; t <= r; ++t) {
    const double v = std::exp(-static_cast<double>(t * t) / (2.0 * sigma * sigma));
    taps[static_cast<std::size_t>(t + r)] = v;
    sum += v;
  }
  for (auto& v : taps) v /= sum;
  return taps;
}

namespace detail {

// Index table for a 1-D pass: entry i is the reflected source index of i - r.
inline std::vector<std::size_t> padded_indices(std::size_t n, std::size_t r) {
  std::vector<std::size_t> idx(n + 2 * r);
  for (std::size_t i = 0; i < idx.size(); ++i)
    idx[i] = reflect101(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(r), n);
  return idx;
}

}  // namespace detail

template <std::floating_point T>
BasicPlane<T> gaussian_blur(const BasicPlane<T>& p, double sigma) {
  const auto taps64 = gaussian_taps(sigma);
  const std::vector<T> taps(taps64.begin(), taps64.end());
  const std::size_t r = taps.size() / 2;
  const std::size_t w = p.width(), h = p.height();
  const auto xi = detail::padded_indices(w, r);
  const auto yi = detail::padded_indices(h, r);

  BasicPlane<T> tmp(w, h);
  parallel_for(h, [&](std::size_t y0, std::size_t y1) {
    for (std::size_t y = y0; y < y1; ++y) {
      const auto src = p.row(y);
      auto dst = tmp.row(y);
      for (std::size_t x = 0; x < w; ++x) {
        T acc = 0;
        for (std::size_t t = 0; t < taps.size(); ++t) acc += taps[t] * src[xi[x + t]];
        dst[x] = acc;
      }
    }
  });

  BasicPlane<T> out(w, h);
  parallel_for(h, [&](std::size_t y0, std::size_t y1) {
    std::vector<T> acc(w);
    for (std::size_t y = y0; y < y1; ++y) {
      std::fill(acc.begin(), acc.end(), T(0));
      for (std::size_t t = 0; t < taps.size(); ++t) {
        const auto src = tmp.row(yi[y + t]);
        const T k = taps[t];
        for (std::size_t x = 0; x < w; ++x) acc[x] += k * src[x];
      }
      std::copy(acc.begin(), acc.end(), out.row(y).begin());
    }
  });
  return out;
}

template <std::floating_point T>
BasicImage<T> gaussian_blur(const BasicImage<T>& img, double sigma) {
  gaussian_taps(sigma);
  return map_channels(img, [sigma](const BasicPlane<T>& c) { return gaussian_blur(c, sigma); });
}

}  // namespace said
