#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ctinpaint/errors.hpp"
#include "ctinpaint/raster.hpp"

namespace ctinpaint {

/// Inpainting domain: the masked pixels, their discrete boundary (masked
/// pixels with at least one 4-neighbor inside the image and outside the mask)
/// and the data domain as the complement.
class InpaintDomain {
public:
  InpaintDomain() = default;

  [[nodiscard]] int width() const noexcept { return mask_.width(); }
  [[nodiscard]] int height() const noexcept { return mask_.height(); }
  [[nodiscard]] std::size_t inpaint_count() const noexcept { return count_; }

  [[nodiscard]] bool contains(PixelCoord p) const noexcept { return mask_.contains(p); }
  [[nodiscard]] bool in_mask(PixelCoord p) const noexcept { return mask_[p] != 0; }
  [[nodiscard]] bool in_mask(int i, int j) const noexcept { return mask_(i, j) != 0; }
  [[nodiscard]] bool on_boundary(PixelCoord p) const noexcept { return boundary_[p] != 0; }
  [[nodiscard]] bool on_boundary(int i, int j) const noexcept { return boundary_(i, j) != 0; }
  /// Inside the image and not masked.
  [[nodiscard]] bool is_data(PixelCoord p) const noexcept {
    return mask_.contains(p) && mask_[p] == 0;
  }
  [[nodiscard]] bool is_data(int i, int j) const noexcept {
    return mask_.contains(i, j) && mask_(i, j) == 0;
  }

  [[nodiscard]] const Mask& mask() const noexcept { return mask_; }
  [[nodiscard]] const Mask& boundary() const noexcept { return boundary_; }

  /// Masked pixels in row-major order.
  [[nodiscard]] std::vector<PixelCoord> pixels() const {
    std::vector<PixelCoord> out;
    out.reserve(count_);
    for (int i = 0; i < height(); ++i)
      for (int j = 0; j < width(); ++j)
        if (mask_(i, j))
          out.push_back({i, j});
    return out;
  }

  /// Boundary pixels in row-major order.
  [[nodiscard]] std::vector<PixelCoord> boundary_pixels() const {
    std::vector<PixelCoord> out;
    for (int i = 0; i < height(); ++i)
      for (int j = 0; j < width(); ++j)
        if (boundary_(i, j))
          out.push_back({i, j});
    return out;
  }

  friend bool operator==(const InpaintDomain&, const InpaintDomain&) = default;

private:
  friend InpaintDomain build_domain(const Mask& mask);

  Mask mask_;
  Mask boundary_;
  std::size_t count_ = 0;
};

/// Derives boundary and pixel count from a mask (nonzero = inpaint).
inline InpaintDomain build_domain(const Mask& mask) {
  if (mask.empty())
    throw InvalidArgument("mask is empty");
  InpaintDomain d;
  d.mask_ = Mask(mask.width(), mask.height(), 0);
  d.boundary_ = Mask(mask.width(), mask.height(), 0);
  for (std::size_t k = 0; k < mask.size(); ++k)
    d.mask_.values()[k] = mask.values()[k] ? 1 : 0;

  std::size_t count = 0;
  for (int i = 0; i < mask.height(); ++i) {
    for (int j = 0; j < mask.width(); ++j) {
      if (!d.mask_(i, j))
        continue;
      ++count;
      for (PixelCoord o : kNeighbors4) {
        const int ni = i + o.i, nj = j + o.j;
        if (mask.contains(ni, nj) && !d.mask_(ni, nj)) {
          d.boundary_(i, j) = 1;
          break;
        }
      }
    }
  }
  if (count == 0)
    throw InvalidArgument("mask selects no pixel");
  if (count == mask.size())
    throw InvalidArgument("mask covers the whole image; no data to inpaint from");
  d.count_ = count;
  return d;
}

inline InpaintDomain build_domain(const RasterImage& image, const Mask& mask) {
  if (!mask.same_shape(image.width(), image.height()))
    throw InvalidArgument("mask and image dimensions differ");
  return build_domain(mask);
}

/// Integer offsets of the closed euclidean ball of radius `radius`, origin excluded.
struct BallStencil {
  double radius = 1.0;
  std::vector<PixelCoord> offsets;
};

inline BallStencil ball_offsets(double radius) {
  if (!(radius >= 1.0) || !std::isfinite(radius))
    throw InvalidArgument("ball radius must be >= 1");
  BallStencil s;
  s.radius = radius;
  const int r = static_cast<int>(std::floor(radius));
  const double r2 = radius * radius;
  for (int di = -r; di <= r; ++di)
    for (int dj = -r; dj <= r; ++dj)
      if ((di != 0 || dj != 0) && static_cast<double>(di * di + dj * dj) <= r2)
        s.offsets.push_back({di, dj});
  return s;
}

struct OrderEntry {
  PixelCoord pixel;
  double t = 0.0;

  friend bool operator==(const OrderEntry&, const OrderEntry&) = default;
};

/// Serialized fill order x_1..x_N with a rank lookup per pixel (-1 = not in the order).
class PixelOrder {
public:
  PixelOrder() = default;
  PixelOrder(int width, int height, std::vector<OrderEntry> entries)
      : entries_(std::move(entries)), rank_(width, height, -1) {
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      const PixelCoord p = entries_[k].pixel;
      if (!rank_.contains(p))
        throw InvalidArgument("order entry outside the image");
      if (rank_[p] != -1)
        throw InvalidArgument("pixel listed twice in order");
      rank_[p] = static_cast<long>(k);
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] const std::vector<OrderEntry>& entries() const noexcept { return entries_; }
  [[nodiscard]] const OrderEntry& operator[](std::size_t k) const noexcept { return entries_[k]; }
  /// Zero-based position of p, or -1.
  [[nodiscard]] long rank(PixelCoord p) const noexcept { return rank_[p]; }
  [[nodiscard]] const Grid<long>& ranks() const noexcept { return rank_; }

  friend bool operator==(const PixelOrder& a, const PixelOrder& b) {
    return a.entries_ == b.entries_;
  }

private:
  std::vector<OrderEntry> entries_;
  Grid<long> rank_;
};

/// Ball pixels of the k-th (zero-based) order entry that are data pixels or
/// were filled before it.
inline std::vector<PixelCoord> known_before(std::size_t k, const PixelOrder& order,
                                            const InpaintDomain& domain,
                                            const BallStencil& stencil) {
  std::vector<PixelCoord> out;
  const PixelCoord x = order[k].pixel;
  const long rank = static_cast<long>(k);
  for (PixelCoord o : stencil.offsets) {
    const PixelCoord y{x.i + o.i, x.j + o.j};
    if (!domain.contains(y))
      continue;
    if (!domain.in_mask(y)) {
      out.push_back(y);
      continue;
    }
    const long r = order.rank(y);
    if (r >= 0 && r < rank)
      out.push_back(y);
  }
  return out;
}

} // namespace ctinpaint
