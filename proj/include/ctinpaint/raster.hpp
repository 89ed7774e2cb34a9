#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ctinpaint/errors.hpp"

namespace ctinpaint {

/// Pixel address: i is the row, j the column. Grid spacing is one pixel and
/// pixels are identified with their integer midpoints.
struct PixelCoord {
  int i = 0;
  int j = 0;

  friend constexpr auto operator<=>(const PixelCoord&, const PixelCoord&) = default;
};

/// Dense row-major 2-D grid of values.
template <class T>
class Grid {
public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(checked_area(width, height)), fill) {}

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  [[nodiscard]] bool contains(int i, int j) const noexcept {
    return i >= 0 && j >= 0 && i < height_ && j < width_;
  }
  [[nodiscard]] bool contains(PixelCoord p) const noexcept { return contains(p.i, p.j); }

  [[nodiscard]] std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(j);
  }
  [[nodiscard]] std::size_t index(PixelCoord p) const noexcept { return index(p.i, p.j); }
  [[nodiscard]] PixelCoord coord(std::size_t idx) const noexcept {
    return {static_cast<int>(idx / static_cast<std::size_t>(width_)),
            static_cast<int>(idx % static_cast<std::size_t>(width_))};
  }

  T& operator()(int i, int j) noexcept { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const noexcept { return data_[index(i, j)]; }
  T& operator[](PixelCoord p) noexcept { return data_[index(p)]; }
  const T& operator[](PixelCoord p) const noexcept { return data_[index(p)]; }

  [[nodiscard]] std::span<T> values() noexcept { return data_; }
  [[nodiscard]] std::span<const T> values() const noexcept { return data_; }

  [[nodiscard]] bool same_shape(int width, int height) const noexcept {
    return width_ == width && height_ == height;
  }
  template <class U>
  [[nodiscard]] bool same_shape(const Grid<U>& other) const noexcept {
    return same_shape(other.width(), other.height());
  }

  friend bool operator==(const Grid&, const Grid&) = default;

private:
  static long long checked_area(int width, int height) {
    if (width < 1 || height < 1)
      throw InvalidArgument("grid dimensions must be at least 1x1");
    return static_cast<long long>(width) * height;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Boolean raster. Stored as bytes so spans and equality stay cheap.
using Mask = Grid<std::uint8_t>;

/// Multi-channel image with gray levels as reals in [0, 255], channel-interleaved.
class RasterImage {
public:
  RasterImage() = default;
  RasterImage(int width, int height, int channels, double fill = 0.0)
      : width_(width), height_(height), channels_(channels) {
    if (width < 1 || height < 1)
      throw InvalidArgument("image dimensions must be at least 1x1");
    if (channels < 1)
      throw InvalidArgument("image needs at least one channel");
    values_.assign(static_cast<std::size_t>(width) * height * channels, fill);
  }

  /// Single-channel image from a scalar grid.
  static RasterImage from_grid(const Grid<double>& g) {
    RasterImage img(g.width(), g.height(), 1);
    std::copy(g.values().begin(), g.values().end(), img.values_.begin());
    return img;
  }

  [[nodiscard]] int width() const noexcept { return width_; }
  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] int channels() const noexcept { return channels_; }
  [[nodiscard]] bool contains(int i, int j) const noexcept {
    return i >= 0 && j >= 0 && i < height_ && j < width_;
  }
  [[nodiscard]] bool contains(PixelCoord p) const noexcept { return contains(p.i, p.j); }

  double& at(int i, int j, int c = 0) noexcept { return values_[offset(i, j) + c]; }
  [[nodiscard]] double at(int i, int j, int c = 0) const noexcept {
    return values_[offset(i, j) + c];
  }

  /// All channel values of one pixel.
  [[nodiscard]] std::span<double> pixel(int i, int j) noexcept {
    return {values_.data() + offset(i, j), static_cast<std::size_t>(channels_)};
  }
  [[nodiscard]] std::span<const double> pixel(int i, int j) const noexcept {
    return {values_.data() + offset(i, j), static_cast<std::size_t>(channels_)};
  }

  [[nodiscard]] std::span<double> values() noexcept { return values_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  [[nodiscard]] Grid<double> channel(int c) const {
    Grid<double> g(width_, height_);
    for (int i = 0; i < height_; ++i)
      for (int j = 0; j < width_; ++j)
        g(i, j) = at(i, j, c);
    return g;
  }

  /// Throws unless every value is finite and inside [0, 255].
  void validate() const {
    for (double v : values_)
      if (!std::isfinite(v) || v < 0.0 || v > 255.0)
        throw InvalidArgument("image values must be finite and within [0,255]");
  }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

private:
  [[nodiscard]] std::size_t offset(int i, int j) const noexcept {
    return (static_cast<std::size_t>(i) * width_ + j) * channels_;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> values_;
};

inline constexpr PixelCoord kNeighbors4[4] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
inline constexpr PixelCoord kNeighbors8[8] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                              {0, 1},   {1, -1}, {1, 0},  {1, 1}};

} // namespace ctinpaint
