/**
 * @file resample.hpp
 * @brief Separable bicubic (Keys) and Lanczos resampling at arbitrary factors.
 *
 * Output pixel X maps to source coordinate (X + 0.5) * in/out - 0.5 on each
 * axis. Coordinates are carried as exact integer fractions so that a
 * mirrored input produces the mirrored output bit for bit: tap offsets are
 * k / (2*out) with integer k, and each dot product sums symmetric tap pairs
 * first.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "said/core.hpp"

namespace said {

struct Size {
  std::size_t width = 0;
  std::size_t height = 0;
  friend bool operator==(const Size&, const Size&) = default;
};

/// Downscale by a divisor d (> 1) or to explicit output dimensions.
class ScaleSpec {
 public:
  static ScaleSpec by_factor(double d, bool antialias = false) {
    if (!std::isfinite(d) || !(d > 1.0)) throw ParameterError("scale factor must exceed 1");
    ScaleSpec s;
    s.factor_ = d;
    s.antialias_ = antialias;
    return s;
  }

  static ScaleSpec to_size(std::size_t width, std::size_t height, bool antialias = false) {
    if (width == 0 || height == 0) throw ParameterError("output dimensions must be at least 1x1");
    ScaleSpec s;
    s.size_ = Size{width, height};
    s.antialias_ = antialias;
    return s;
  }

  std::optional<double> factor() const noexcept { return factor_; }
  bool antialias() const noexcept { return antialias_; }
  ScaleSpec with_antialias(bool on) const noexcept {
    ScaleSpec s = *this;
    s.antialias_ = on;
    return s;
  }

  /// round(M/d) x round(N/d) for factor specs; throws when either rounds to 0.
  Size output_size(std::size_t in_w, std::size_t in_h) const {
    if (size_) return *size_;
    const auto w = std::llround(static_cast<double>(in_w) / *factor_);
    const auto h = std::llround(static_cast<double>(in_h) / *factor_);
    if (w < 1 || h < 1) throw ParameterError("scale factor yields a zero-size output");
    return {static_cast<std::size_t>(w), static_cast<std::size_t>(h)};
  }

 private:
  ScaleSpec() = default;
  std::optional<double> factor_;
  std::optional<Size> size_;
  bool antialias_ = false;
};

struct BicubicKernelParam {
  double a = -0.5;
};

/// Keys cubic convolution kernel at |t|.
inline double keys_weight(double t, double a = -0.5) noexcept {
  t = std::fabs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

inline double sinc(double t) noexcept {
  if (t == 0.0) return 1.0;
  const double x = std::numbers::pi * t;
  return std::sin(x) / x;
}

/// sinc(t) * sinc(t / lobes) on |t| < lobes; exactly 0 at nonzero integers.
inline double lanczos_weight(double t, int lobes) noexcept {
  t = std::fabs(t);
  if (t >= lobes) return 0.0;
  if (t == 0.0) return 1.0;
  if (t == std::floor(t)) return 0.0;
  return sinc(t) * sinc(t / lobes);
}

namespace detail {

// Per-output-sample taps along one axis, stored flat.
struct AxisTaps {
  std::vector<std::size_t> start;  // out_n + 1 offsets into index/weight
  std::vector<std::size_t> index;
  std::vector<double> weight;

  std::size_t count(std::size_t o) const noexcept { return start[o + 1] - start[o]; }
};

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Sum of v[i] over i in [0,n), pairing i with n-1-i so reversal leaves the result unchanged.
template <typename F>
double symmetric_sum(std::size_t n, F&& term) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n / 2; ++i) acc += term(i) + term(n - 1 - i);
  if (n % 2) acc += term(n / 2);
  return acc;
}

/**
 * Builds the taps for in_n -> out_n. `kernel(arg)` is evaluated at
 * arg = |offset| / stretch, with support arg < radius. With antialias on a
 * shrinking axis the stretch equals in/out, otherwise 1.
 */
template <typename Kernel>
AxisTaps build_axis(std::size_t in_n, std::size_t out_n, int radius, bool antialias,
                    bool renormalize, Kernel&& kernel) {
  const auto in = static_cast<std::int64_t>(in_n);
  const auto out = static_cast<std::int64_t>(out_n);
  const std::int64_t den = 2 * out;  // offsets are k / den source pixels
  const bool stretch = antialias && in > out;
  // kernel argument = |k| / arg_den
  const std::int64_t arg_den = stretch ? 2 * in : den;
  const std::int64_t reach = radius * arg_den;

  AxisTaps taps;
  taps.start.reserve(out_n + 1);
  taps.start.push_back(0);
  std::vector<double> w;
  std::vector<std::size_t> idx;
  for (std::int64_t o = 0; o < out; ++o) {
    const std::int64_t num = (2 * o + 1) * in - out;
    const std::int64_t jlo = floor_div(num - reach, den);
    const std::int64_t jhi = floor_div(num + reach, den) + 1;
    w.clear();
    idx.clear();
    for (std::int64_t j = jlo; j <= jhi; ++j) {
      const std::int64_t k = num - den * j;
      const std::int64_t ak = k < 0 ? -k : k;
      if (ak >= reach) continue;
      w.push_back(kernel(static_cast<double>(ak) / static_cast<double>(arg_den)));
      idx.push_back(reflect101(static_cast<std::ptrdiff_t>(j), in_n));
    }
    if (renormalize) {
      const double sum = symmetric_sum(w.size(), [&](std::size_t i) { return w[i]; });
      for (auto& v : w) v /= sum;
    }
    taps.index.insert(taps.index.end(), idx.begin(), idx.end());
    taps.weight.insert(taps.weight.end(), w.begin(), w.end());
    taps.start.push_back(taps.index.size());
  }
  return taps;
}

template <std::floating_point T>
BasicPlane<T> apply_separable(const BasicPlane<T>& p, const AxisTaps& tx, const AxisTaps& ty,
                              std::size_t out_w, std::size_t out_h) {
  const std::size_t in_h = p.height();
  BasicPlane<T> tmp(out_w, in_h);
  parallel_for(in_h, [&](std::size_t y0, std::size_t y1) {
    for (std::size_t y = y0; y < y1; ++y) {
      const auto src = p.row(y);
      auto dst = tmp.row(y);
      for (std::size_t x = 0; x < out_w; ++x) {
        const std::size_t s = tx.start[x];
        dst[x] = static_cast<T>(symmetric_sum(tx.count(x), [&](std::size_t i) {
          return tx.weight[s + i] * static_cast<double>(src[tx.index[s + i]]);
        }));
      }
    }
  });

  BasicPlane<T> out(out_w, out_h);
  parallel_for(out_h, [&](std::size_t y0, std::size_t y1) {
    std::vector<double> acc(out_w);
    for (std::size_t y = y0; y < y1; ++y) {
      std::fill(acc.begin(), acc.end(), 0.0);
      const std::size_t s = ty.start[y];
      const std::size_t n = ty.count(y);
      auto add_pair = [&](std::size_t a, std::size_t b) {
        const double wa = ty.weight[s + a], wb = ty.weight[s + b];
        const auto ra = tmp.row(ty.index[s + a]);
        const auto rb = tmp.row(ty.index[s + b]);
        for (std::size_t x = 0; x < out_w; ++x)
          acc[x] += wa * static_cast<double>(ra[x]) + wb * static_cast<double>(rb[x]);
      };
      for (std::size_t i = 0; i < n / 2; ++i) add_pair(i, n - 1 - i);
      if (n % 2) {
        const double wm = ty.weight[s + n / 2];
        const auto rm = tmp.row(ty.index[s + n / 2]);
        for (std::size_t x = 0; x < out_w; ++x) acc[x] += wm * static_cast<double>(rm[x]);
      }
      auto dst = out.row(y);
      for (std::size_t x = 0; x < out_w; ++x) dst[x] = static_cast<T>(acc[x]);
    }
  });
  return out;
}

}  // namespace detail

/**
 * @brief Keys bicubic resampling of a plane.
 *
 * Plain mode evaluates the 4x4 neighborhood with unnormalized Keys weights.
 * With antialias the kernel is stretched by the per-axis shrink factor
 * (4*s taps) and the weights renormalized. The result is not clamped.
 */
template <std::floating_point T>
BasicPlane<T> resize_bicubic(const BasicPlane<T>& p, const ScaleSpec& spec,
                             BicubicKernelParam param = {}) {
  const Size out = spec.output_size(p.width(), p.height());
  const bool aa = spec.antialias();
  auto kernel = [a = param.a](double t) { return keys_weight(t, a); };
  const auto tx = detail::build_axis(p.width(), out.width, 2, aa, aa && p.width() > out.width, kernel);
  const auto ty = detail::build_axis(p.height(), out.height, 2, aa, aa && p.height() > out.height, kernel);
  return detail::apply_separable(p, tx, ty, out.width, out.height);
}

template <std::floating_point T>
BasicImage<T> resize_bicubic(const BasicImage<T>& img, const ScaleSpec& spec,
                             BicubicKernelParam param = {}) {
  spec.output_size(img.width(), img.height());
  return map_channels(img, [&](const BasicPlane<T>& c) { return resize_bicubic(c, spec, param); });
}

/// Lanczos resampling; weights are always renormalized per output sample.
template <std::floating_point T>
BasicPlane<T> resize_lanczos(const BasicPlane<T>& p, const ScaleSpec& spec, int lobes = 3) {
  if (lobes < 1) throw ParameterError("lanczos lobes must be at least 1");
  const Size out = spec.output_size(p.width(), p.height());
  auto kernel = [lobes](double t) { return lanczos_weight(t, lobes); };
  const auto tx = detail::build_axis(p.width(), out.width, lobes, spec.antialias(), true, kernel);
  const auto ty = detail::build_axis(p.height(), out.height, lobes, spec.antialias(), true, kernel);
  return detail::apply_separable(p, tx, ty, out.width, out.height);
}

template <std::floating_point T>
BasicImage<T> resize_lanczos(const BasicImage<T>& img, const ScaleSpec& spec, int lobes = 3) {
  if (lobes < 1) throw ParameterError("lanczos lobes must be at least 1");
  spec.output_size(img.width(), img.height());
  return map_channels(img, [&](const BasicPlane<T>& c) { return resize_lanczos(c, spec, lobes); });
}

}  // namespace said
