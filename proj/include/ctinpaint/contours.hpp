#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ctinpaint/errors.hpp"
#include "ctinpaint/raster.hpp"

namespace ctinpaint {

struct ContourImage {
  RasterImage image;
  std::vector<double> levels;
  std::vector<std::string> warnings;
};

inline constexpr double kContourColor[3] = {255.0, 0.0, 0.0};

/// `n` levels equispaced strictly between the finite min and max of `field`.
inline std::vector<double> contour_levels(const Grid<double>& field, int n) {
  if (n < 1)
    throw InvalidArgument("need at least one contour level");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : field.values())
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  std::vector<double> levels;
  if (!(hi > lo))
    return levels;
  for (int k = 1; k <= n; ++k)
    levels.push_back(lo + (hi - lo) * k / (n + 1));
  return levels;
}

/// Marks in red the pixels on the lower side of every 4-neighbor pair that
/// straddles a level (T(p) < level <= T(q)). The base image is expanded to RGB;
/// other pixels keep their values. A field without finite spread yields the
/// base unchanged and a warning.
inline ContourImage render_contours(const Grid<double>& field, const RasterImage& base,
                                    int n_levels) {
  if (!field.same_shape(base.width(), base.height()))
    throw InvalidArgument("field and base image dimensions differ");
  if (base.channels() != 1 && base.channels() != 3)
    throw InvalidArgument("base image must be gray or RGB");
  ContourImage out{base, contour_levels(field, n_levels), {}};
  if (out.levels.empty()) {
    out.warnings.emplace_back("distance field is constant; no contours drawn");
    return out;
  }
  RasterImage rgb(base.width(), base.height(), 3);
  for (int i = 0; i < base.height(); ++i)
    for (int j = 0; j < base.width(); ++j)
      for (int c = 0; c < 3; ++c)
        rgb.at(i, j, c) = base.at(i, j, base.channels() == 3 ? c : 0);

  Mask marked(base.width(), base.height(), 0);
  for (int i = 0; i < base.height(); ++i)
    for (int j = 0; j < base.width(); ++j) {
      const double a = field(i, j);
      if (!std::isfinite(a))
        continue;
      // right and down neighbors cover every unordered pair once
      for (PixelCoord o : {PixelCoord{0, 1}, PixelCoord{1, 0}}) {
        const int ni = i + o.i, nj = j + o.j;
        if (!field.contains(ni, nj) || !std::isfinite(field(ni, nj)))
          continue;
        const double b = field(ni, nj);
        if (a == b)
          continue;
        const double lo = std::min(a, b), hi = std::max(a, b);
        for (double level : out.levels)
          if (lo < level && level <= hi) {
            if (a < b)
              marked(i, j) = 1;
            else
              marked(ni, nj) = 1;
            break;
          }
      }
    }
  for (int i = 0; i < base.height(); ++i)
    for (int j = 0; j < base.width(); ++j)
      if (marked(i, j))
        for (int c = 0; c < 3; ++c)
          rgb.at(i, j, c) = kContourColor[c];
  out.image = std::move(rgb);
  return out;
}

} // namespace ctinpaint
