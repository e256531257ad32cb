/**
 * @file metrics.hpp
 * @brief Full-reference quality metrics (PSNR, SSIM) under the unit-range convention.
 */
#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "said/core.hpp"

namespace said {

struct MetricReport {
  double psnr_db = 0.0;  // +inf for identical inputs
  double ssim = 0.0;
};

template <std::floating_point T>
double mean_squared_error(const BasicImage<T>& a, const BasicImage<T>& b) {
  if (!a.same_shape(b)) throw ContractError("metrics: image dimensions or channel counts differ");
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t c = 0; c < a.channels(); ++c) {
    const auto as = a.channel(c).samples(), bs = b.channel(c).samples();
    for (std::size_t i = 0; i < as.size(); ++i) {
      const double d = static_cast<double>(as[i]) - static_cast<double>(bs[i]);
      sum += d * d;
    }
    n += as.size();
  }
  return sum / static_cast<double>(n);
}

/// 10 log10(1 / MSE) in dB, MAX = 1; +inf when MSE is 0.
template <std::floating_point T>
double psnr(const BasicImage<T>& a, const BasicImage<T>& b) {
  const double mse = mean_squared_error(a, b);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

inline constexpr std::size_t kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

/// Normalized 11-tap Gaussian (sigma 1.5); the 2-D window is its outer product.
inline std::array<double, kSsimWindow> ssim_window_taps() {
  std::array<double, kSsimWindow> g{};
  double sum = 0.0;
  constexpr int r = static_cast<int>(kSsimWindow / 2);
  for (int t = -r; t <= r; ++t) {
    g[static_cast<std::size_t>(t + r)] = std::exp(-(t * t) / (2.0 * kSsimSigma * kSsimSigma));
    sum += g[static_cast<std::size_t>(t + r)];
  }
  for (auto& v : g) v /= sum;
  return g;
}

namespace detail {

// Valid-mode separable filtering with the SSIM window.
inline std::vector<double> ssim_filter_valid(const std::vector<double>& src, std::size_t w, std::size_t h,
                                             const std::array<double, kSsimWindow>& g) {
  const std::size_t ow = w - kSsimWindow + 1, oh = h - kSsimWindow + 1;
  std::vector<double> tmp(ow * h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (std::size_t t = 0; t < kSsimWindow; ++t) acc += g[t] * src[y * w + x + t];
      tmp[y * ow + x] = acc;
    }
  std::vector<double> out(ow * oh, 0.0);
  for (std::size_t y = 0; y < oh; ++y)
    for (std::size_t t = 0; t < kSsimWindow; ++t)
      for (std::size_t x = 0; x < ow; ++x) out[y * ow + x] += g[t] * tmp[(y + t) * ow + x];
  return out;
}

}  // namespace detail

/**
 * @brief Single-scale SSIM on luma.
 *
 * 11x11 Gaussian window (sigma 1.5), C1 = 0.01^2, C2 = 0.03^2 for L = 1,
 * averaged over window positions that fit entirely inside the image.
 */
template <std::floating_point T>
double ssim(const BasicImage<T>& a, const BasicImage<T>& b) {
  if (!a.same_shape(b)) throw ContractError("ssim: image dimensions or channel counts differ");
  if (a.width() < kSsimWindow || a.height() < kSsimWindow)
    throw ContractError("ssim: image smaller than the 11x11 window");

  const std::size_t w = a.width(), h = a.height(), n = w * h;
  const auto la = to_luma(a), lb = to_luma(b);
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(la.samples()[i]);
    y[i] = static_cast<double>(lb.samples()[i]);
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto g = ssim_window_taps();
  const auto mx = detail::ssim_filter_valid(x, w, h, g);
  const auto my = detail::ssim_filter_valid(y, w, h, g);
  const auto mxx = detail::ssim_filter_valid(xx, w, h, g);
  const auto myy = detail::ssim_filter_valid(yy, w, h, g);
  const auto mxy = detail::ssim_filter_valid(xy, w, h, g);

  constexpr double c1 = kSsimK1 * kSsimK1;
  constexpr double c2 = kSsimK2 * kSsimK2;
  double sum = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double ux = mx[i], uy = my[i];
    const double vx = mxx[i] - ux * ux;
    const double vy = myy[i] - uy * uy;
    const double cxy = mxy[i] - ux * uy;
    sum += ((2.0 * ux * uy + c1) * (2.0 * cxy + c2)) / ((ux * ux + uy * uy + c1) * (vx + vy + c2));
  }
  return sum / static_cast<double>(mx.size());
}

template <std::floating_point T>
MetricReport evaluate(const BasicImage<T>& a, const BasicImage<T>& b) {
  return {psnr(a, b), ssim(a, b)};
}

}  // namespace said
