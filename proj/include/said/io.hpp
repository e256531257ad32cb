/**
 * @file io.hpp
 * @brief 8-bit PNG and binary PGM/PPM (P5/P6, maxval 255) decode/encode.
 *
 * Bytes map to samples as v/255; samples map back with round-half-up,
 * floor(v*255 + 0.5). PNG goes through libpng's simplified API.
 */
#pragma once

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "said/core.hpp"

namespace said::io {

enum class ErrorKind { Unreadable, Unsupported, MalformedHeader, MalformedPayload, Unwritable };

inline const char* to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::Unreadable: return "unreadable";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::MalformedHeader: return "malformed header";
    case ErrorKind::MalformedPayload: return "malformed payload";
    case ErrorKind::Unwritable: return "unwritable";
  }
  return "?";
}

class IoError : public std::runtime_error {
 public:
  IoError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

enum class Format { PNG, PNM };

/// PNG for ".png", PNM for ".ppm"/".pgm"/".pnm" (case-insensitive).
inline Format format_from_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (ext == ".png") return Format::PNG;
  if (ext == ".ppm" || ext == ".pgm" || ext == ".pnm") return Format::PNM;
  throw IoError(ErrorKind::Unsupported, "unrecognized image extension '" + ext + "'");
}

inline std::uint8_t quantize(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw ContractError("io: sample outside [0,1] passed to encoder");
  return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
}

/// Interleaved 8-bit samples -> normalized image.
inline Image from_interleaved(std::span<const std::uint8_t> bytes, std::size_t w, std::size_t h,
                              std::size_t channels) {
  Image img(w, h, channels == 1 ? ColorSpace::Gray : ColorSpace::RGB);
  for (std::size_t c = 0; c < channels; ++c) {
    auto s = img.channel(c).samples();
    for (std::size_t i = 0; i < w * h; ++i) s[i] = bytes[i * channels + c] / 255.0;
  }
  return img;
}

inline std::vector<std::uint8_t> to_interleaved(const Image& img) {
  const std::size_t n = img.width() * img.height(), ch = img.channels();
  std::vector<std::uint8_t> bytes(n * ch);
  for (std::size_t c = 0; c < ch; ++c) {
    const auto s = img.channel(c).samples();
    for (std::size_t i = 0; i < n; ++i) bytes[i * ch + c] = quantize(s[i]);
  }
  return bytes;
}

namespace detail {

class PnmHeaderReader {
 public:
  explicit PnmHeaderReader(std::span<const std::uint8_t> buf) : buf_(buf) {}

  std::size_t next_uint() {
    skip_space_and_comments();
    std::size_t v = 0;
    std::size_t digits = 0;
    while (pos_ < buf_.size() && std::isdigit(buf_[pos_])) {
      v = v * 10 + (buf_[pos_++] - '0');
      if (++digits > 9) throw IoError(ErrorKind::MalformedHeader, "PNM header value too large");
    }
    if (digits == 0) throw IoError(ErrorKind::MalformedHeader, "expected a number in PNM header");
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t end_of_header() {
    if (pos_ >= buf_.size() || !std::isspace(buf_[pos_]))
      throw IoError(ErrorKind::MalformedHeader, "missing whitespace after PNM maxval");
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < buf_.size()) {
      if (std::isspace(buf_[pos_])) {
        ++pos_;
      } else if (buf_[pos_] == '#') {
        while (pos_ < buf_.size() && buf_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> buf_;
  std::size_t pos_ = 2;
};

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(ErrorKind::Unreadable, "cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(ErrorKind::Unreadable, "read failed for '" + path.string() + "'");
  return buf;
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(ErrorKind::Unwritable, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(ErrorKind::Unwritable, "write failed for '" + path.string() + "'");
}

}  // namespace detail

inline bool is_pnm(std::span<const std::uint8_t> buf) noexcept {
  return buf.size() >= 2 && buf[0] == 'P' && (buf[1] == '5' || buf[1] == '6');
}

inline Image decode_pnm(std::span<const std::uint8_t> buf) {
  if (buf.size() < 2 || buf[0] != 'P') throw IoError(ErrorKind::MalformedHeader, "not a PNM file");
  if (buf[1] != '5' && buf[1] != '6')
    throw IoError(ErrorKind::Unsupported, "only binary P5/P6 PNM files are supported");
  const std::size_t channels = buf[1] == '5' ? 1 : 3;
  detail::PnmHeaderReader hdr(buf);
  const std::size_t w = hdr.next_uint();
  const std::size_t h = hdr.next_uint();
  const std::size_t maxval = hdr.next_uint();
  if (w == 0 || h == 0) throw IoError(ErrorKind::MalformedHeader, "PNM dimensions must be positive");
  if (maxval != 255) throw IoError(ErrorKind::Unsupported, "only maxval 255 is supported");
  const std::size_t start = hdr.end_of_header();
  const std::size_t need = w * h * channels;
  if (buf.size() - start < need) throw IoError(ErrorKind::MalformedPayload, "PNM raster is truncated");
  return from_interleaved(buf.subspan(start, need), w, h, channels);
}

/// P5 for Gray, P6 for RGB.
inline std::vector<std::uint8_t> encode_pnm(const Image& img) {
  const std::string header = std::string(img.channels() == 1 ? "P5" : "P6") + "\n" +
                             std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const auto raster = to_interleaved(img);
  out.insert(out.end(), raster.begin(), raster.end());
  return out;
}

inline Image decode_png(std::span<const std::uint8_t> buf) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, buf.data(), buf.size()))
    throw IoError(ErrorKind::MalformedHeader, std::string("PNG: ") + png.message);
  if (png.format & PNG_FORMAT_FLAG_ALPHA) {
    png_image_free(&png);
    throw IoError(ErrorKind::Unsupported, "PNG with alpha channel");
  }
  if (png.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&png);
    throw IoError(ErrorKind::Unsupported, "16-bit PNG");
  }
  const bool color = png.format & PNG_FORMAT_FLAG_COLOR;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const std::size_t channels = color ? 3 : 1;
  std::vector<std::uint8_t> raster(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, raster.data(), 0, nullptr))
    throw IoError(ErrorKind::MalformedPayload, std::string("PNG: ") + png.message);
  return from_interleaved(raster, png.width, png.height, channels);
}

inline std::vector<std::uint8_t> encode_png(const Image& img) {
  const auto raster = to_interleaved(img);
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(img.width());
  png.height = static_cast<png_uint_32>(img.height());
  png.format = img.channels() == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(png, size, 0, raster.data(), 0, nullptr))
    throw IoError(ErrorKind::Unwritable, std::string("PNG: ") + png.message);
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, raster.data(), 0, nullptr))
    throw IoError(ErrorKind::Unwritable, std::string("PNG: ") + png.message);
  out.resize(size);
  return out;
}

/// Decodes by content: PNM magic "P5"/"P6", otherwise PNG.
inline Image load(const std::filesystem::path& path) {
  const auto buf = detail::read_file(path);
  if (buf.size() >= 2 && buf[0] == 'P' && std::isdigit(buf[1])) return decode_pnm(buf);
  static constexpr std::uint8_t png_sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (buf.size() >= 8 && std::equal(std::begin(png_sig), std::end(png_sig), buf.begin())) return decode_png(buf);
  throw IoError(ErrorKind::MalformedHeader, "'" + path.string() + "' is neither PNG nor PNM");
}

inline void save(const Image& img, const std::filesystem::path& path, Format format) {
  if (img.empty()) throw ContractError("io: cannot save an empty image");
  const auto bytes = format == Format::PNG ? encode_png(img) : encode_pnm(img);
  detail::write_file(path, bytes);
}

inline void save(const Image& img, const std::filesystem::path& path) {
  save(img, path, format_from_extension(path));
}

}  // namespace said::io
