#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "ctinpaint/distance_fields.hpp"
#include "ctinpaint/errors.hpp"
#include "ctinpaint/raster.hpp"

namespace ctinpaint {

enum class CaseId { Diagonal, TwoDiagonals, CrossJunction, Stripes };

inline std::string_view to_string(CaseId c) {
  switch (c) {
  case CaseId::Diagonal: return "diagonal";
  case CaseId::TwoDiagonals: return "two-diagonals";
  case CaseId::CrossJunction: return "cross-junction";
  case CaseId::Stripes: return "stripes";
  }
  return "?";
}

inline CaseId parse_case_id(std::string_view s) {
  if (s == "diagonal") return CaseId::Diagonal;
  if (s == "two-diagonals") return CaseId::TwoDiagonals;
  if (s == "cross-junction") return CaseId::CrossJunction;
  if (s == "stripes") return CaseId::Stripes;
  throw InvalidArgument("unknown case '" + std::string(s) + "'");
}

/// Synthetic test scene. Geometry is laid out on a 64x64 design grid and
/// scaled to `size`; images are square and single channel.
struct SyntheticCase {
  CaseId id = CaseId::Diagonal;
  int size = 64;
  int line_width = 0;      // 0: 3 for diagonals, 4 for bars
  double bright = 255.0;   // lines, the brighter bar, bright bands
  double secondary = 160.0; // the second bar of the cross junction
  double dark = 0.0;
  int period = 8;          // stripes, along a row

  [[nodiscard]] int width_or_default() const {
    if (line_width > 0)
      return line_width;
    return id == CaseId::CrossJunction ? 4 : 3;
  }
  [[nodiscard]] double scale() const { return size / 64.0; }

  void validate() const {
    if (size < 16)
      throw InvalidArgument("fixture size must be at least 16");
    if (line_width < 0)
      throw InvalidArgument("line width must be positive");
    if (period < 2 || period % 2 != 0)
      throw InvalidArgument("stripe period must be even and at least 2");
  }
};

struct SyntheticImage {
  RasterImage damaged; // mask pixels set to 255
  Mask mask;
  RasterImage truth;
};

namespace detail {

struct DesignRect {
  int i0, i1, j0, j1; // inclusive, 64x64 design grid
};

// The diagonal fixtures use a waist-shaped domain: two blocks joined by a
// short bar, so that one diagonal runs along the distance ridge.
inline constexpr DesignRect kWaist[] = {
    {18, 29, 18, 34}, {30, 33, 18, 45}, {34, 45, 29, 45}};
inline constexpr DesignRect kJunctionRect{22, 38, 13, 52};

inline int scale_lo(int v, double s) { return static_cast<int>(std::lround(v * s)); }
inline int scale_hi(int v, double s) { return static_cast<int>(std::lround((v + 1) * s)) - 1; }

inline bool in_rect(const DesignRect& r, int i, int j, double s) {
  return i >= scale_lo(r.i0, s) && i <= scale_hi(r.i1, s) && j >= scale_lo(r.j0, s) &&
         j <= scale_hi(r.j1, s);
}

inline PixelCoord scale_point(int i, int j, double s) {
  return {static_cast<int>(std::lround(i * s)), static_cast<int>(std::lround(j * s))};
}

} // namespace detail

/// Pixels of the main (top-left to bottom-right) diagonal line.
inline bool on_main_diagonal(int i, int j, int width) { return 2 * std::abs(i - j) < width + 1; }
/// Pixels of the anti-diagonal line (bottom-left to top-right).
inline bool on_anti_diagonal(int i, int j, int size, int width) {
  return 2 * std::abs(i + j - (size - 1)) < width + 1;
}

inline Mask synthetic_mask(const SyntheticCase& c) {
  c.validate();
  const int n = c.size;
  const double s = c.scale();
  Mask m(n, n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      bool in = false;
      switch (c.id) {
      case CaseId::Diagonal:
      case CaseId::TwoDiagonals:
        for (const auto& r : detail::kWaist)
          in = in || detail::in_rect(r, i, j, s);
        break;
      case CaseId::CrossJunction:
        in = detail::in_rect(detail::kJunctionRect, i, j, s);
        break;
      case CaseId::Stripes: {
        // parallelogram with two sides along the bands
        const int d = j - i;
        in = i >= detail::scale_lo(17, s) && i <= detail::scale_hi(46, s) &&
             d >= static_cast<int>(std::lround(-8 * s)) &&
             d <= static_cast<int>(std::lround(12 * s)) - 1;
        break;
      }
      }
      m(i, j) = in ? 1 : 0;
    }
  return m;
}

inline RasterImage synthetic_truth(const SyntheticCase& c) {
  c.validate();
  const int n = c.size, w = c.width_or_default();
  RasterImage img(n, n, 1, c.dark);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = c.dark;
      switch (c.id) {
      case CaseId::Diagonal:
        if (on_main_diagonal(i, j, w))
          v = c.bright;
        break;
      case CaseId::TwoDiagonals:
        if (on_main_diagonal(i, j, w) || on_anti_diagonal(i, j, n, w))
          v = c.bright;
        break;
      case CaseId::CrossJunction: {
        // bars centered on the image; the bright one is horizontal and on top
        const bool horizontal = std::abs(2 * i - (n - 1)) <= w;
        const bool vertical = std::abs(2 * j - (n - 1)) <= w;
        v = horizontal ? c.bright : vertical ? c.secondary : c.dark;
        break;
      }
      case CaseId::Stripes: {
        const int phase = ((j - i) % c.period + c.period) % c.period;
        v = phase < c.period / 2 ? c.bright : c.dark;
        break;
      }
      }
      img.at(i, j) = v;
    }
  return img;
}

/// Deterministic fixture: ground truth, mask, and the damaged image with the
/// domain painted white.
inline SyntheticImage generate_synthetic(const SyntheticCase& c) {
  SyntheticImage out{synthetic_truth(c), synthetic_mask(c), synthetic_truth(c)};
  for (int i = 0; i < c.size; ++i)
    for (int j = 0; j < c.size; ++j)
      if (out.mask(i, j))
        out.damaged.at(i, j) = 255.0;
  return out;
}

/// Stop set or skeleton that makes the fixture work: a short arc across the
/// diagonal at the center (t = 127), the junction center point, or a line
/// below the stripe domain parallel to its crossing sides.
inline StopSetSpec default_stopset(const SyntheticCase& c) {
  c.validate();
  const double s = c.scale();
  const int mid = (c.size - 1) / 2;
  switch (c.id) {
  case CaseId::Diagonal:
  case CaseId::TwoDiagonals:
    return {StopSetRole::Stop, {{{{mid + 1, mid - 1}, {mid - 1, mid + 1}}, 127.0}}};
  case CaseId::CrossJunction:
    return {StopSetRole::Skeleton, {{{{mid, mid}}, 0.0}}};
  case CaseId::Stripes: {
    const int row = detail::scale_lo(52, s);
    return {StopSetRole::Skeleton, {{{{row, 0}, {row, c.size - 1}}, 0.0}}};
  }
  }
  return {};
}

/// Three stop curves on the cross-junction domain: two long ones at t = 250
/// on the bar axis and a short one between them at t3.
inline StopSetSpec admissibility_stopset(double t3, int size = 64) {
  const double s = size / 64.0;
  using detail::scale_point;
  return {StopSetRole::Stop,
          {{{scale_point(30, 16, s), scale_point(30, 28, s)}, 250.0},
           {{scale_point(30, 37, s), scale_point(30, 49, s)}, 250.0},
           {{scale_point(30, 31, s), scale_point(30, 34, s)}, t3}}};
}

} // namespace ctinpaint
