/**
 * @file pipeline.hpp
 * @brief Structure-aware downscaling: edge map, edge-guided interpolation and
 *        Laplacian texture fusion, plus the plain resampling baselines.
 *
 * Stages, for an input I and scale spec d:
 *
 *   I_E      = normalized Sobel magnitude of luma(I)
 *   I_B      = bicubic(I, d)
 *   I_E_down = clamp(bicubic(I_E, d))
 *   I_s      = I + gamma * (I - gaussian(I, sigma))
 *   I'       = (1 - I_E_down) * I_B + I_E_down * bicubic(I_s, d)
 *   I_T      = laplacian(I), per channel
 *   I_D      = clamp(I' + (alpha * I_E_down + beta) * bicubic(I_T, d))
 *
 * One luma edge plane is shared by all channels.
 */
#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "said/core.hpp"
#include "said/filters.hpp"
#include "said/resample.hpp"

namespace said {

struct SaidParams {
  double sigma = 1.0;
  double gamma = 0.5;
  double alpha = 0.5;
  double beta = 0.1;
  bool antialias = false;
  /// Scale I_T by its largest magnitude before downsampling (off by default).
  bool texture_normalize = false;

  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(sigma) || !(sigma > 0.0)) throw ParameterError("sigma must be positive");
    if (!finite(gamma) || gamma < 0.0) throw ParameterError("gamma must be non-negative");
    if (!finite(alpha) || alpha < 0.0) throw ParameterError("alpha must be non-negative");
    if (!finite(beta) || beta < 0.0) throw ParameterError("beta must be non-negative");
    if (alpha + beta > 4.0) throw ParameterError("alpha + beta must not exceed 4");
  }
};

/// Intermediates retained on request. Full resolution: edge_map, blurred,
/// sharpened, texture. Output resolution: everything else.
template <std::floating_point T>
struct BasicSaidTrace {
  BasicEdgeMap<T> edge_map;
  BasicImage<T> blurred;
  BasicImage<T> sharpened;
  BasicImage<T> texture;
  BasicImage<T> bicubic;
  BasicPlane<T> edge_down;
  BasicImage<T> sharpened_down;
  BasicImage<T> blended;
  BasicImage<T> texture_down;
  BasicPlane<T> lambda_down;
};

using SaidTrace = BasicSaidTrace<double>;

template <std::floating_point T>
struct BasicSaidResult {
  BasicImage<T> image;
  std::optional<BasicSaidTrace<T>> trace;
};

using SaidResult = BasicSaidResult<double>;

namespace detail {

template <std::floating_point T>
void require_shape(const BasicImage<T>& a, std::size_t w, std::size_t h, const char* what) {
  if (a.width() != w || a.height() != h) throw ContractError(std::string(what) + ": dimension mismatch");
}

template <std::floating_point T>
BasicImage<T> unsharp_from_blur(const BasicImage<T>& img, const BasicImage<T>& blurred, double gamma) {
  BasicImage<T> out = img;
  const T g = static_cast<T>(gamma);
  for (std::size_t c = 0; c < img.channels(); ++c) {
    auto os = out.channel(c).samples();
    const auto bs = blurred.channel(c).samples();
    for (std::size_t i = 0; i < os.size(); ++i) os[i] = os[i] + g * (os[i] - bs[i]);
  }
  return out;
}

}  // namespace detail

/// I + gamma * (I - gaussian(I, sigma)) per channel, unclamped.
template <std::floating_point T>
BasicImage<T> unsharp_mask(const BasicImage<T>& img, double sigma, double gamma) {
  if (!std::isfinite(gamma) || gamma < 0.0) throw ParameterError("gamma must be non-negative");
  return detail::unsharp_from_blur(img, gaussian_blur(img, sigma), gamma);
}

/// (1 - I_E) * I_B + I_E * I_s with one edge plane broadcast over channels.
template <std::floating_point T>
BasicImage<T> edge_guided_blend(const BasicImage<T>& bicubic, const BasicImage<T>& sharpened_down,
                                const BasicEdgeMap<T>& edge_down) {
  const auto& e = edge_down.plane;
  if (!bicubic.same_shape(sharpened_down)) throw ContractError("edge_guided_blend: dimension mismatch");
  detail::require_shape(bicubic, e.width(), e.height(), "edge_guided_blend");
  BasicImage<T> out = bicubic;
  const auto es = e.samples();
  for (std::size_t c = 0; c < out.channels(); ++c) {
    auto os = out.channel(c).samples();
    const auto ss = sharpened_down.channel(c).samples();
    for (std::size_t i = 0; i < os.size(); ++i) os[i] = (T(1) - es[i]) * os[i] + es[i] * ss[i];
  }
  return out;
}

/// alpha * I_E + beta.
template <std::floating_point T>
BasicPlane<T> adaptive_lambda(const BasicEdgeMap<T>& edge_down, double alpha, double beta) {
  BasicPlane<T> lam = edge_down.plane;
  const T a = static_cast<T>(alpha), b = static_cast<T>(beta);
  for (auto& s : lam.samples()) s = a * s + b;
  return lam;
}

namespace detail {

template <std::floating_point T>
BasicImage<T> fuse_with_lambda(const BasicImage<T>& blended, const BasicImage<T>& texture_down,
                               const BasicPlane<T>& lambda) {
  if (!blended.same_shape(texture_down)) throw ContractError("texture_fuse: dimension mismatch");
  require_shape(blended, lambda.width(), lambda.height(), "texture_fuse");
  BasicImage<T> out = blended;
  const auto ls = lambda.samples();
  for (std::size_t c = 0; c < out.channels(); ++c) {
    auto os = out.channel(c).samples();
    const auto ts = texture_down.channel(c).samples();
    for (std::size_t i = 0; i < os.size(); ++i) os[i] = os[i] + ls[i] * ts[i];
  }
  return clamp_unit(std::move(out));
}

}  // namespace detail

/// clamp(I' + (alpha * I_E + beta) * I_T) per channel.
template <std::floating_point T>
BasicImage<T> texture_fuse(const BasicImage<T>& blended, const BasicImage<T>& texture_down,
                           const BasicEdgeMap<T>& edge_down, double alpha, double beta) {
  return detail::fuse_with_lambda(blended, texture_down, adaptive_lambda(edge_down, alpha, beta));
}

/// Per-channel Laplacian of an image.
template <std::floating_point T>
BasicImage<T> texture_map(const BasicImage<T>& img) {
  return map_channels(img, [](const BasicPlane<T>& c) { return laplacian(c).plane; });
}

/// Divides every channel by the largest |sample| over the whole image; zero maps stay zero.
template <std::floating_point T>
BasicImage<T> normalize_texture(BasicImage<T> tex) {
  T peak = 0;
  for (const auto& c : tex.planes())
    for (T s : c.samples()) peak = std::max(peak, std::abs(s));
  if (peak > T(0))
    for (auto& c : tex.planes())
      for (auto& s : c.samples()) s /= peak;
  return tex;
}

template <std::floating_point T>
BasicSaidResult<T> said_downscale(const BasicImage<T>& img, const ScaleSpec& scale,
                                  const SaidParams& params = {}, bool want_trace = false) {
  params.validate();
  if (img.empty()) throw ContractError("said_downscale: empty image");
  const Size out = scale.output_size(img.width(), img.height());
  if (out.width > img.width() || out.height > img.height())
    throw ParameterError("said_downscale: output must not be larger than the input");
  const ScaleSpec spec = scale.with_antialias(params.antialias);

  // Edge map computation.
  BasicEdgeMap<T> edge = sobel_edge_map(to_luma(img));

  // Edge-guided interpolation.
  BasicImage<T> bicubic = resize_bicubic(img, spec);
  BasicEdgeMap<T> edge_down{clamp_unit(resize_bicubic(edge.plane, spec))};
  BasicImage<T> blurred = gaussian_blur(img, params.sigma);
  BasicImage<T> sharpened = detail::unsharp_from_blur(img, blurred, params.gamma);
  BasicImage<T> sharpened_down = resize_bicubic(sharpened, spec);
  BasicImage<T> blended = edge_guided_blend(bicubic, sharpened_down, edge_down);

  // Texture enhancement.
  BasicImage<T> texture = texture_map(img);
  if (params.texture_normalize) texture = normalize_texture(std::move(texture));
  BasicImage<T> texture_down = resize_bicubic(texture, spec);
  BasicPlane<T> lambda = adaptive_lambda(edge_down, params.alpha, params.beta);
  BasicImage<T> fused = detail::fuse_with_lambda(blended, texture_down, lambda);

  BasicSaidResult<T> result{std::move(fused), std::nullopt};
  if (want_trace) {
    result.trace = BasicSaidTrace<T>{std::move(edge),           std::move(blurred),
                                     std::move(sharpened),      std::move(texture),
                                     std::move(bicubic),        std::move(edge_down.plane),
                                     std::move(sharpened_down), std::move(blended),
                                     std::move(texture_down),   std::move(lambda)};
  }
  return result;
}

enum class Method { Said, Bicubic, Lanczos };

inline std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::Said: return "said";
    case Method::Bicubic: return "bicubic";
    case Method::Lanczos: return "lanczos";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  if (s == "said") return Method::Said;
  if (s == "bicubic") return Method::Bicubic;
  if (s == "lanczos") return Method::Lanczos;
  throw ParameterError("unknown method '" + std::string(s) + "'");
}

/// Plain resampling followed by clamp_unit, for like-for-like comparisons.
template <std::floating_point T>
BasicImage<T> baseline_downscale(const BasicImage<T>& img, const ScaleSpec& spec, Method method,
                                 int lanczos_lobes = 3) {
  switch (method) {
    case Method::Bicubic: return clamp_unit(resize_bicubic(img, spec));
    case Method::Lanczos: return clamp_unit(resize_lanczos(img, spec, lanczos_lobes));
    case Method::Said: break;
  }
  throw ParameterError("baseline_downscale: method must be bicubic or lanczos");
}

template <std::floating_point T>
BasicImage<T> baseline_downscale(const BasicImage<T>& img, const ScaleSpec& spec, std::string_view method,
                                 int lanczos_lobes = 3) {
  return baseline_downscale(img, spec, parse_method(method), lanczos_lobes);
}

}  // namespace said
