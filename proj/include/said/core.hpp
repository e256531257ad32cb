/**
 * @file core.hpp
 * @brief Image containers and value-range helpers shared by every module.
 *
 * Intensities are normalized reals. 8-bit files map to [0,1] via v/255 on
 * decode (see io.hpp); filtering math may leave that range temporarily and
 * the pipeline clamps once at the end.
 */
#pragma once

#include <algorithm>
#include <cassert>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "said/errors.hpp"
#include "said/parallel.hpp"

namespace said {

/// Single-channel row-major grid of samples.
template <std::floating_point T>
class BasicPlane {
 public:
  using value_type = T;

  BasicPlane() = default;

  BasicPlane(std::size_t width, std::size_t height, T fill = T(0))
      : width_(width), height_(height), data_(width * height, fill) {
    if (width == 0 || height == 0) throw ParameterError("plane dimensions must be at least 1x1");
  }

  BasicPlane(std::size_t width, std::size_t height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width == 0 || height == 0) throw ParameterError("plane dimensions must be at least 1x1");
    if (data_.size() != width * height) throw ContractError("plane data length must equal width*height");
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t x, std::size_t y) noexcept {
    assert(x < width_ && y < height_);
    return data_[y * width_ + x];
  }
  const T& operator()(std::size_t x, std::size_t y) const noexcept {
    assert(x < width_ && y < height_);
    return data_[y * width_ + x];
  }

  std::span<T> row(std::size_t y) noexcept { return {data_.data() + y * width_, width_}; }
  std::span<const T> row(std::size_t y) const noexcept { return {data_.data() + y * width_, width_}; }

  std::span<T> samples() noexcept { return data_; }
  std::span<const T> samples() const noexcept { return data_; }

  bool same_shape(const BasicPlane& o) const noexcept {
    return width_ == o.width_ && height_ == o.height_;
  }

  friend bool operator==(const BasicPlane&, const BasicPlane&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

enum class ColorSpace { Gray, RGB };

inline std::size_t channel_count(ColorSpace cs) noexcept { return cs == ColorSpace::Gray ? 1 : 3; }

/// One (Gray) or three (RGB) planes of identical size.
template <std::floating_point T>
class BasicImage {
 public:
  using value_type = T;
  using plane_type = BasicPlane<T>;

  BasicImage() = default;

  BasicImage(std::size_t width, std::size_t height, ColorSpace cs, T fill = T(0))
      : colorspace_(cs), channels_(channel_count(cs), plane_type(width, height, fill)) {}

  /// Gray image wrapping a single plane.
  explicit BasicImage(plane_type gray) : colorspace_(ColorSpace::Gray) {
    channels_.push_back(std::move(gray));
  }

  BasicImage(std::vector<plane_type> channels, ColorSpace cs)
      : colorspace_(cs), channels_(std::move(channels)) {
    if (channels_.size() != channel_count(cs))
      throw ContractError("channel count does not match colorspace");
    for (const auto& c : channels_)
      if (!c.same_shape(channels_.front())) throw ContractError("channel planes differ in size");
  }

  std::size_t width() const noexcept { return channels_.empty() ? 0 : channels_.front().width(); }
  std::size_t height() const noexcept { return channels_.empty() ? 0 : channels_.front().height(); }
  std::size_t channels() const noexcept { return channels_.size(); }
  ColorSpace colorspace() const noexcept { return colorspace_; }
  bool empty() const noexcept { return channels_.empty(); }

  plane_type& channel(std::size_t c) noexcept { return channels_[c]; }
  const plane_type& channel(std::size_t c) const noexcept { return channels_[c]; }

  std::span<plane_type> planes() noexcept { return channels_; }
  std::span<const plane_type> planes() const noexcept { return channels_; }

  bool same_shape(const BasicImage& o) const noexcept {
    return channels() == o.channels() && width() == o.width() && height() == o.height();
  }

  friend bool operator==(const BasicImage&, const BasicImage&) = default;

 private:
  ColorSpace colorspace_ = ColorSpace::Gray;
  std::vector<plane_type> channels_;
};

using Plane = BasicPlane<double>;
using Image = BasicImage<double>;

struct ValueRange {
  double lo = 0.0;
  double hi = 1.0;
};

/// Applies fn to every channel and reassembles an image with the same colorspace.
template <std::floating_point T, typename Fn>
auto map_channels(const BasicImage<T>& img, Fn&& fn) {
  using Out = std::invoke_result_t<Fn&, const BasicPlane<T>&>;
  std::vector<Out> out;
  out.reserve(img.channels());
  for (const auto& c : img.planes()) out.push_back(fn(c));
  return BasicImage<typename Out::value_type>(std::move(out), img.colorspace());
}

/// BT.601 luma; a copy of the sole plane for Gray input.
template <std::floating_point T>
BasicPlane<T> to_luma(const BasicImage<T>& img) {
  if (img.colorspace() == ColorSpace::Gray) return img.channel(0);
  const auto& r = img.channel(0);
  const auto& g = img.channel(1);
  const auto& b = img.channel(2);
  BasicPlane<T> out(img.width(), img.height());
  const auto rs = r.samples(), gs = g.samples(), bs = b.samples();
  auto os = out.samples();
  for (std::size_t i = 0; i < os.size(); ++i)
    os[i] = T(0.299) * rs[i] + T(0.587) * gs[i] + T(0.114) * bs[i];
  return out;
}

template <std::floating_point T>
BasicPlane<T> clamp_unit(BasicPlane<T> p) {
  for (auto& s : p.samples()) s = std::clamp(s, T(0), T(1));
  return p;
}

template <std::floating_point T>
BasicImage<T> clamp_unit(BasicImage<T> img) {
  for (auto& c : img.planes()) c = clamp_unit(std::move(c));
  return img;
}

template <std::floating_point T>
std::pair<T, T> min_max(const BasicPlane<T>& p) {
  const auto [lo, hi] = std::minmax_element(p.samples().begin(), p.samples().end());
  return {*lo, *hi};
}

/// Reflect-101 border index: ... 2 1 | 0 1 2 ... n-1 | n-2 n-3 ...
inline std::size_t reflect101(std::ptrdiff_t i, std::size_t n) noexcept {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  i %= period;
  if (i < 0) i += period;
  if (i >= static_cast<std::ptrdiff_t>(n)) i = period - i;
  return static_cast<std::size_t>(i);
}

}  // namespace said
