#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

#include "ctinpaint/errors.hpp"
#include "ctinpaint/raster.hpp"

// TFLD distance raster: "TFLD", width and height as little-endian u32, four
// zero bytes, then width*height little-endian float32 values in row-major
// order. NaN marks pixels outside the inpainting domain.

namespace ctinpaint::io {

inline constexpr std::size_t kTfldHeaderSize = 16;

namespace detail {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k)
    out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

inline std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

} // namespace detail

inline std::vector<std::uint8_t> encode_tfld(const Grid<double>& field) {
  std::vector<std::uint8_t> out{'T', 'F', 'L', 'D'};
  out.reserve(kTfldHeaderSize + 4 * field.size());
  detail::put_u32(out, static_cast<std::uint32_t>(field.width()));
  detail::put_u32(out, static_cast<std::uint32_t>(field.height()));
  detail::put_u32(out, 0);
  for (double v : field.values()) {
    const float f = std::isnan(v) ? std::numeric_limits<float>::quiet_NaN() : static_cast<float>(v);
    detail::put_u32(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

inline Grid<double> decode_tfld(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kTfldHeaderSize || std::memcmp(bytes.data(), "TFLD", 4) != 0)
    throw IoError("not a TFLD raster");
  const std::uint32_t w = detail::get_u32(bytes.data() + 4);
  const std::uint32_t h = detail::get_u32(bytes.data() + 8);
  if (w == 0 || h == 0 || bytes.size() != kTfldHeaderSize + 4ull * w * h)
    throw IoError("TFLD raster size does not match its header");
  Grid<double> g(static_cast<int>(w), static_cast<int>(h));
  const std::uint8_t* p = bytes.data() + kTfldHeaderSize;
  for (double& v : g.values()) {
    v = std::bit_cast<float>(detail::get_u32(p));
    p += 4;
  }
  return g;
}

inline void save_tfld(const Grid<double>& field, const std::string& path) {
  const auto bytes = encode_tfld(field);
  std::ofstream f(path, std::ios::binary);
  if (!f || !f.write(reinterpret_cast<const char*>(bytes.data()),
                     static_cast<std::streamsize>(bytes.size())))
    throw IoError("cannot write '" + path + "'");
}

inline Grid<double> load_tfld(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw IoError("cannot read '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  return decode_tfld(bytes);
}

} // namespace ctinpaint::io
