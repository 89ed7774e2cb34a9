#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "ctinpaint/errors.hpp"
#include "ctinpaint/raster.hpp"

namespace ctinpaint {

struct FastMarchingResult {
  /// Arrival times; +inf where the front never arrived.
  Grid<double> distance;
  /// Pixels in the order they were frozen.
  std::vector<PixelCoord> accepted;
};

namespace detail {

// First-order upwind solution of |grad T| = 1 given the smallest frozen
// neighbor value along each axis (+inf when none).
inline double eikonal_update(double a, double b) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (a == inf && b == inf)
    return inf;
  if (a == inf || b == inf || std::abs(a - b) >= 1.0)
    return std::min(a, b) + 1.0;
  const double diff = a - b;
  return 0.5 * (a + b + std::sqrt(2.0 - diff * diff));
}

} // namespace detail

/// Fast marching on the 4-neighborhood with unit speed. `passable(i, j)`
/// restricts where the front may travel; seeds are always frozen at 0.
/// Ties in the narrow band are broken by row-major index, so the result is
/// deterministic.
template <class Passable>
FastMarchingResult fast_marching(int width, int height, const std::vector<PixelCoord>& seeds,
                                 Passable&& passable) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  FastMarchingResult out{Grid<double>(width, height, inf), {}};
  Grid<std::uint8_t> frozen(width, height, 0);
  Grid<double>& dist = out.distance;

  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> band;

  for (PixelCoord s : seeds) {
    if (!dist.contains(s))
      throw InvalidArgument("fast marching seed outside the grid");
    if (dist[s] != 0.0) {
      dist[s] = 0.0;
      band.emplace(0.0, dist.index(s));
    }
  }
  out.accepted.reserve(seeds.size());

  auto frozen_value = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= height || j >= width)
      return inf;
    const auto k = static_cast<std::size_t>(i) * static_cast<std::size_t>(width) +
                   static_cast<std::size_t>(j);
    return frozen.values()[k] ? dist.values()[k] : inf;
  };

  while (!band.empty()) {
    const auto [value, idx] = band.top();
    band.pop();
    const PixelCoord p = dist.coord(idx);
    if (frozen[p] || value > dist[p])
      continue;
    frozen[p] = 1;
    out.accepted.push_back(p);

    for (PixelCoord o : kNeighbors4) {
      const int ni = p.i + o.i, nj = p.j + o.j;
      if (!dist.contains(ni, nj) || frozen(ni, nj) || !passable(ni, nj))
        continue;
      const double a = std::min(frozen_value(ni, nj - 1), frozen_value(ni, nj + 1));
      const double b = std::min(frozen_value(ni - 1, nj), frozen_value(ni + 1, nj));
      const double t = detail::eikonal_update(a, b);
      if (t < dist(ni, nj)) {
        dist(ni, nj) = t;
        band.emplace(t, dist.index(ni, nj));
      }
    }
  }
  return out;
}

} // namespace ctinpaint
