#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include <png.h>

#include "ctinpaint/errors.hpp"
#include "ctinpaint/raster.hpp"

namespace ctinpaint::io {

namespace detail {

// Owns a png_image and releases libpng state on every exit path.
struct PngImage {
  png_image image{};
  PngImage() {
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

inline std::string png_message(const png_image& img) { return std::string(img.message); }

inline RasterImage finish_read(PngImage& png, const std::string& what) {
  if (png.image.format & PNG_FORMAT_FLAG_LINEAR)
    throw IoError(what + ": 16-bit PNG is not supported");
  const bool color = (png.image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  const auto w = static_cast<int>(png.image.width), h = static_cast<int>(png.image.height);
  std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(png.image));
  if (!png_image_finish_read(&png.image, nullptr, buf.data(), 0, nullptr))
    throw IoError(what + ": " + png_message(png.image));
  RasterImage img(w, h, channels);
  std::transform(buf.begin(), buf.end(), img.values().begin(),
                 [](std::uint8_t v) { return static_cast<double>(v); });
  return img;
}

inline std::vector<std::uint8_t> quantize(const RasterImage& img) {
  std::vector<std::uint8_t> buf(img.values().size());
  std::transform(img.values().begin(), img.values().end(), buf.begin(), [](double v) {
    if (std::isnan(v))
      return std::uint8_t{0};
    // std::round rounds halves away from zero
    return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
  });
  return buf;
}

inline void prepare_write(PngImage& png, const RasterImage& img) {
  if (img.channels() != 1 && img.channels() != 3)
    throw IoError("only gray and RGB images can be written as PNG");
  png.image.width = static_cast<png_uint_32>(img.width());
  png.image.height = static_cast<png_uint_32>(img.height());
  png.image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
}

} // namespace detail

/// Reads an 8-bit gray or RGB PNG (palette images are expanded to RGB, alpha
/// is composed away by libpng). Values are the 8-bit levels as reals.
inline RasterImage load_image(const std::string& path) {
  detail::PngImage png;
  if (!png_image_begin_read_from_file(&png.image, path.c_str()))
    throw IoError("cannot read PNG '" + path + "': " + detail::png_message(png.image));
  return detail::finish_read(png, "PNG '" + path + "'");
}

inline RasterImage decode_png(const std::vector<std::uint8_t>& bytes) {
  detail::PngImage png;
  if (bytes.empty() || !png_image_begin_read_from_memory(&png.image, bytes.data(), bytes.size()))
    throw IoError("cannot decode PNG: " + detail::png_message(png.image));
  return detail::finish_read(png, "PNG data");
}

/// Writes an 8-bit PNG; values are rounded half away from zero and clamped.
inline void save_image(const RasterImage& img, const std::string& path) {
  detail::PngImage png;
  detail::prepare_write(png, img);
  const auto buf = detail::quantize(img);
  if (!png_image_write_to_file(&png.image, path.c_str(), 0, buf.data(), 0, nullptr))
    throw IoError("cannot write PNG '" + path + "': " + detail::png_message(png.image));
}

inline std::vector<std::uint8_t> encode_png(const RasterImage& img) {
  detail::PngImage png;
  detail::prepare_write(png, img);
  const auto buf = detail::quantize(img);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png.image, nullptr, &size, 0, buf.data(), 0, nullptr))
    throw IoError("cannot encode PNG: " + detail::png_message(png.image));
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png.image, out.data(), &size, 0, buf.data(), 0, nullptr))
    throw IoError("cannot encode PNG: " + detail::png_message(png.image));
  out.resize(size);
  return out;
}

/// Mask from an image: a pixel is masked iff its luminance is at least 128
/// (Rec. 601 weights for RGB).
inline Mask mask_from_image(const RasterImage& img) {
  if (img.channels() != 1 && img.channels() != 3)
    throw InvalidArgument("mask image must be gray or RGB");
  Mask m(img.width(), img.height(), 0);
  for (int i = 0; i < img.height(); ++i)
    for (int j = 0; j < img.width(); ++j) {
      const double y = img.channels() == 1
                           ? img.at(i, j)
                           : 0.299 * img.at(i, j, 0) + 0.587 * img.at(i, j, 1) +
                                 0.114 * img.at(i, j, 2);
      m(i, j) = y >= 128.0 ? 1 : 0;
    }
  return m;
}

inline Mask load_mask(const std::string& path) { return mask_from_image(load_image(path)); }

/// Mask as a white-on-black gray image.
inline RasterImage mask_to_image(const Mask& m) {
  RasterImage img(m.width(), m.height(), 1);
  for (int i = 0; i < m.height(); ++i)
    for (int j = 0; j < m.width(); ++j)
      img.at(i, j) = m(i, j) ? 255.0 : 0.0;
  return img;
}

} // namespace ctinpaint::io
