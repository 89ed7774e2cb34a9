#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <vector>

#include "ctinpaint/domain.hpp"
#include "ctinpaint/errors.hpp"
#include "ctinpaint/raster.hpp"

namespace ctinpaint {

struct MismatchCount {
  std::size_t bad = 0;
  std::size_t total = 0;
  [[nodiscard]] double fraction() const { return total ? double(bad) / double(total) : 0.0; }
};

/// Counts domain pixels accepted by `select` whose value (any channel)
/// differs from the truth by more than `threshold`.
template <class Select>
MismatchCount count_mismatch(const RasterImage& result, const RasterImage& truth,
                             const InpaintDomain& domain, double threshold, Select&& select) {
  if (!(result.width() == truth.width() && result.height() == truth.height() &&
        result.channels() == truth.channels()))
    throw InvalidArgument("result and truth differ in shape");
  MismatchCount m;
  for (PixelCoord p : domain.pixels()) {
    if (!select(p))
      continue;
    ++m.total;
    for (int c = 0; c < result.channels(); ++c)
      if (std::abs(result.at(p.i, p.j, c) - truth.at(p.i, p.j, c)) > threshold) {
        ++m.bad;
        break;
      }
  }
  return m;
}

inline MismatchCount count_mismatch(const RasterImage& result, const RasterImage& truth,
                                    const InpaintDomain& domain, double threshold = 32.0) {
  return count_mismatch(result, truth, domain, threshold, [](PixelCoord) { return true; });
}

/// Corridor of one diagonal of a square image: pixels within `half_width` of
/// its axis, minus those within `exclusion` of the other diagonal's axis.
/// Pass exclusion < 0 to keep the crossing.
struct DiagonalCorridor {
  int size = 64;
  bool main = true; // top-left to bottom-right
  double half_width = 3.5;
  double exclusion = -1.0;

  [[nodiscard]] bool operator()(PixelCoord p) const {
    const double dm = std::abs(p.i - p.j) / std::numbers::sqrt2;
    const double da = std::abs(p.i + p.j - (size - 1)) / std::numbers::sqrt2;
    const double own = main ? dm : da, other = main ? da : dm;
    return own <= half_width && !(exclusion >= 0.0 && other <= exclusion);
  }
};

/// Pearson correlation between u(p) and u(p + (0, period)) over domain pixels
/// whose shifted partner lies inside the image. Channel 0.
inline double shift_autocorrelation(const RasterImage& u, const InpaintDomain& domain,
                                    int period) {
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  std::size_t n = 0;
  for (PixelCoord p : domain.pixels()) {
    if (!u.contains(p.i, p.j + period))
      continue;
    const double a = u.at(p.i, p.j), b = u.at(p.i, p.j + period);
    sx += a;
    sy += b;
    sxx += a * a;
    syy += b * b;
    sxy += a * b;
    ++n;
  }
  if (n < 2)
    throw InvalidArgument("too few pixel pairs for an autocorrelation");
  const double dn = static_cast<double>(n);
  const double cov = sxy / dn - (sx / dn) * (sy / dn);
  const double va = sxx / dn - (sx / dn) * (sx / dn);
  const double vb = syy / dn - (sy / dn) * (sy / dn);
  if (!(va > 0.0 && vb > 0.0))
    return 0.0;
  return cov / std::sqrt(va * vb);
}

/// True when an 8-connected path of pixels with value >= `level` inside rows
/// [row_lo, row_hi] joins column `col_from` to column `col_to`.
inline bool bright_path_exists(const RasterImage& u, int row_lo, int row_hi, int col_from,
                               int col_to, double level = 200.0) {
  if (row_lo > row_hi || col_from > col_to || !u.contains(row_lo, col_from) ||
      !u.contains(row_hi, col_to))
    throw InvalidArgument("path window lies outside the image");
  auto ok = [&](int i, int j) {
    return i >= row_lo && i <= row_hi && j >= col_from && j <= col_to && u.at(i, j) >= level;
  };
  Mask seen(u.width(), u.height(), 0);
  std::queue<PixelCoord> q;
  for (int i = row_lo; i <= row_hi; ++i)
    if (ok(i, col_from)) {
      seen(i, col_from) = 1;
      q.push({i, col_from});
    }
  while (!q.empty()) {
    const PixelCoord p = q.front();
    q.pop();
    if (p.j == col_to)
      return true;
    for (PixelCoord o : kNeighbors8) {
      const int ni = p.i + o.i, nj = p.j + o.j;
      if (ok(ni, nj) && !seen(ni, nj)) {
        seen(ni, nj) = 1;
        q.push({ni, nj});
      }
    }
  }
  return false;
}

} // namespace ctinpaint
