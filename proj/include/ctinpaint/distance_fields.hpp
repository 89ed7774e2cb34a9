#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctinpaint/domain.hpp"
#include "ctinpaint/errors.hpp"
#include "ctinpaint/fast_marching.hpp"
#include "ctinpaint/harmonic.hpp"
#include "ctinpaint/raster.hpp"
#include "ctinpaint/vec2.hpp"

namespace ctinpaint {

enum class DistanceKind { Boundary, Harmonic, ActiveBoundary, Skeleton };

inline std::string_view to_string(DistanceKind k) {
  switch (k) {
  case DistanceKind::Boundary: return "dtb";
  case DistanceKind::Harmonic: return "harmonic";
  case DistanceKind::ActiveBoundary: return "active-dtb";
  case DistanceKind::Skeleton: return "skeleton";
  }
  return "?";
}

inline DistanceKind parse_distance_kind(std::string_view s) {
  if (s == "dtb") return DistanceKind::Boundary;
  if (s == "harmonic") return DistanceKind::Harmonic;
  if (s == "active-dtb") return DistanceKind::ActiveBoundary;
  if (s == "skeleton") return DistanceKind::Skeleton;
  throw InvalidArgument("unknown distance kind '" + std::string(s) + "'");
}

/// Generalized distance T_h. `values` is defined (finite, >= 0) on the
/// inpainting domain and NaN elsewhere. The skeleton construction also keeps
/// T_{*,max} - T_* over the whole image in `ambient`.
struct DistanceField {
  DistanceKind kind = DistanceKind::Boundary;
  Grid<double> values;
  std::optional<Grid<double>> ambient;
};

enum class StopSetRole { Stop, Skeleton };

struct StopCurve {
  std::vector<PixelCoord> points; // polyline vertices
  double t = 0.0;                 // ignored for skeleton curves
};

struct StopSetSpec {
  StopSetRole role = StopSetRole::Stop;
  std::vector<StopCurve> curves;
};

/// 8-connected rasterization of a polyline (Bresenham per segment, shared
/// vertices emitted once).
inline std::vector<PixelCoord> rasterize_polyline(const std::vector<PixelCoord>& points) {
  std::vector<PixelCoord> out;
  if (points.empty())
    return out;
  out.push_back(points.front());
  for (std::size_t s = 1; s < points.size(); ++s) {
    PixelCoord a = points[s - 1];
    const PixelCoord b = points[s];
    const int di = std::abs(b.i - a.i), dj = std::abs(b.j - a.j);
    const int si = a.i < b.i ? 1 : -1, sj = a.j < b.j ? 1 : -1;
    int err = dj - di;
    while (a != b) {
      const int e2 = 2 * err;
      if (e2 > -di) {
        err -= di;
        a.j += sj;
      }
      if (e2 < dj) {
        err += dj;
        a.i += si;
      }
      if (out.back() != a)
        out.push_back(a);
    }
  }
  return out;
}

inline std::vector<std::vector<PixelCoord>> rasterize(const StopSetSpec& spec) {
  std::vector<std::vector<PixelCoord>> out;
  out.reserve(spec.curves.size());
  for (const auto& c : spec.curves)
    out.push_back(rasterize_polyline(c.points));
  return out;
}

namespace detail {

inline DistanceField field_from_arrival(DistanceKind kind, const InpaintDomain& domain,
                                        const Grid<double>& arrival) {
  DistanceField f{kind,
                  Grid<double>(domain.width(), domain.height(),
                               std::numeric_limits<double>::quiet_NaN()),
                  std::nullopt};
  for (int i = 0; i < domain.height(); ++i)
    for (int j = 0; j < domain.width(); ++j)
      if (domain.in_mask(i, j)) {
        if (!std::isfinite(arrival(i, j)))
          throw InvalidArgument("part of the inpainting domain is unreachable from the seed set");
        f.values(i, j) = arrival(i, j);
      }
  return f;
}

} // namespace detail

/// Fast-marching distance to the discrete boundary, restricted to the domain.
inline DistanceField distance_to_boundary(const InpaintDomain& domain) {
  const auto fm = fast_marching(domain.width(), domain.height(), domain.boundary_pixels(),
                                [&](int i, int j) { return domain.in_mask(i, j); });
  return detail::field_from_arrival(DistanceKind::Boundary, domain, fm.distance);
}

/// Harmonic interpolation: zero on the boundary, t_k on each stop curve and
/// five-point harmonic elsewhere in the domain.
inline DistanceField harmonic_distance(const InpaintDomain& domain, const StopSetSpec& stopset,
                                       double tolerance = 1e-8) {
  if (stopset.curves.empty())
    throw InvalidArgument("harmonic distance needs at least one stop curve");
  const int w = domain.width(), h = domain.height();
  HarmonicProblem problem{Grid<HarmonicNode>(w, h, HarmonicNode::Outside),
                          Grid<double>(w, h, 0.0)};
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j)
      if (domain.in_mask(i, j))
        problem.nodes(i, j) =
            domain.on_boundary(i, j) ? HarmonicNode::Dirichlet : HarmonicNode::Free;

  double t_max = 0.0;
  for (const auto& curve : stopset.curves) {
    if (!(curve.t > 0.0) || !std::isfinite(curve.t))
      throw InvalidArgument("stop curve distance value must be positive");
    if (curve.points.empty())
      throw InvalidArgument("stop curve has no points");
    for (PixelCoord p : rasterize_polyline(curve.points)) {
      if (!domain.contains(p) || !domain.in_mask(p))
        throw InvalidArgument("stop curve pixel lies outside the inpainting domain");
      if (domain.on_boundary(p))
        throw InvalidArgument("stop curve pixel lies on the domain boundary");
      if (problem.nodes[p] == HarmonicNode::Dirichlet && problem.dirichlet[p] != curve.t)
        throw InvalidArgument("stop curves cross with different distance values");
      problem.nodes[p] = HarmonicNode::Dirichlet;
      problem.dirichlet[p] = curve.t;
    }
    t_max = std::max(t_max, curve.t);
  }

  HarmonicSolution sol = solve_harmonic(problem, tolerance);
  DistanceField f{DistanceKind::Harmonic,
                  Grid<double>(w, h, std::numeric_limits<double>::quiet_NaN()), std::nullopt};
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j)
      if (domain.in_mask(i, j)) // clamp removes round-off beyond the max principle bounds
        f.values(i, j) = std::clamp(sol.values(i, j), 0.0, t_max);
  return f;
}

/// One boundary pixel with its guidance vector g and inward normal N.
struct BoundarySample {
  PixelCoord pixel;
  Vec2 guidance;
  Vec2 normal;
};

/// Boundary pixels where <g, N>^2 > gamma.
inline std::vector<PixelCoord> active_boundary(const InpaintDomain& domain,
                                               const std::vector<BoundarySample>& samples,
                                               double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw InvalidArgument("gamma must lie in (0, 1]");
  std::vector<PixelCoord> active;
  for (const auto& s : samples) {
    if (!domain.contains(s.pixel) || !domain.on_boundary(s.pixel))
      throw InvalidArgument("boundary sample is not a boundary pixel");
    const double c = dot(s.guidance, s.normal);
    if (c * c > gamma)
      active.push_back(s.pixel);
  }
  if (active.empty())
    throw InvalidArgument("active boundary is empty; gamma too large");
  std::sort(active.begin(), active.end());
  return active;
}

/// Fast-marching distance to a subset of the boundary. Inactive boundary
/// pixels get positive values and are filled like interior pixels.
inline DistanceField distance_to_active_boundary(const InpaintDomain& domain,
                                                 const std::vector<PixelCoord>& active) {
  if (active.empty())
    throw InvalidArgument("active boundary is empty");
  for (PixelCoord p : active)
    if (!domain.contains(p) || !domain.on_boundary(p))
      throw InvalidArgument("active set must be a subset of the boundary");
  const auto fm = fast_marching(domain.width(), domain.height(), active,
                                [&](int i, int j) { return domain.in_mask(i, j); });
  return detail::field_from_arrival(DistanceKind::ActiveBoundary, domain, fm.distance);
}

/// T = T_{*,max} - T_*, where T_* is the fast-marching distance over the
/// whole image to the rasterized skeleton curves and T_{*,max} its maximum
/// over the inpainting domain.
inline DistanceField skeleton_distance(const InpaintDomain& domain, const StopSetSpec& skeleton) {
  if (skeleton.curves.empty())
    throw InvalidArgument("skeleton distance needs at least one curve");
  std::vector<PixelCoord> seeds;
  for (const auto& curve : skeleton.curves) {
    if (curve.points.empty())
      throw InvalidArgument("skeleton curve has no points");
    for (PixelCoord p : rasterize_polyline(curve.points)) {
      if (!domain.contains(p))
        throw InvalidArgument("skeleton curve pixel lies outside the image");
      seeds.push_back(p);
    }
  }
  const auto fm =
      fast_marching(domain.width(), domain.height(), seeds, [](int, int) { return true; });
  double t_max = 0.0;
  for (int i = 0; i < domain.height(); ++i)
    for (int j = 0; j < domain.width(); ++j)
      if (domain.in_mask(i, j))
        t_max = std::max(t_max, fm.distance(i, j));

  DistanceField f{DistanceKind::Skeleton,
                  Grid<double>(domain.width(), domain.height(),
                               std::numeric_limits<double>::quiet_NaN()),
                  Grid<double>(domain.width(), domain.height(), 0.0)};
  for (int i = 0; i < domain.height(); ++i)
    for (int j = 0; j < domain.width(); ++j) {
      const double v = t_max - fm.distance(i, j);
      (*f.ambient)(i, j) = v;
      if (domain.in_mask(i, j))
        f.values(i, j) = v;
    }
  return f;
}

struct AdmissibilityReport {
  bool valid = true;
  std::vector<PixelCoord> offending; // row-major
};

/// A domain pixel is offending when none of its 8-neighbors is a data pixel
/// or carries a strictly smaller value.
inline AdmissibilityReport check_admissible(const DistanceField& field,
                                            const InpaintDomain& domain) {
  if (!field.values.same_shape(domain.width(), domain.height()))
    throw InvalidArgument("distance field and domain dimensions differ");
  AdmissibilityReport report;
  for (int i = 0; i < domain.height(); ++i) {
    for (int j = 0; j < domain.width(); ++j) {
      if (!domain.in_mask(i, j))
        continue;
      const double t = field.values(i, j);
      bool descends = false;
      if (std::isfinite(t) && t >= 0.0) {
        for (PixelCoord o : kNeighbors8) {
          const int ni = i + o.i, nj = j + o.j;
          if (!domain.contains({ni, nj}))
            continue;
          if (!domain.in_mask(ni, nj) || field.values(ni, nj) < t) {
            descends = true;
            break;
          }
        }
      }
      if (!descends)
        report.offending.push_back({i, j});
    }
  }
  report.valid = report.offending.empty();
  return report;
}

/// Sorts the domain by (T, row, column). Refuses inadmissible fields.
inline PixelOrder serialize_pixels(const DistanceField& field, const InpaintDomain& domain) {
  const auto report = check_admissible(field, domain);
  if (!report.valid)
    throw InadmissibleField("distance field has " + std::to_string(report.offending.size()) +
                            " local minima; refusing to serialize");
  std::vector<OrderEntry> entries;
  entries.reserve(domain.inpaint_count());
  for (PixelCoord p : domain.pixels())
    entries.push_back({p, field.values[p]});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const OrderEntry& a, const OrderEntry& b) { return a.t < b.t; });
  return PixelOrder(domain.width(), domain.height(), std::move(entries));
}

} // namespace ctinpaint
