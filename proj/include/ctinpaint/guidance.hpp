#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "ctinpaint/distance_fields.hpp"
#include "ctinpaint/domain.hpp"
#include "ctinpaint/errors.hpp"
#include "ctinpaint/raster.hpp"
#include "ctinpaint/vec2.hpp"

namespace ctinpaint {

/// Scales of the structure tensor: sigma pre-smooths the image, rho
/// averages the gradient outer products.
struct TensorParams {
  double sigma = 0.5;
  double rho = 5.0;

  void validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !(rho > 0.0) || !std::isfinite(rho))
      throw InvalidArgument("sigma and rho must be positive");
  }
  /// Truncation radius of the pre-smoothing Gaussian (4 sigma).
  [[nodiscard]] int smoothing_radius() const { return static_cast<int>(std::ceil(4.0 * sigma)); }
  /// Truncation radius of the tensor-averaging Gaussian (3 rho).
  [[nodiscard]] int tensor_radius() const { return static_cast<int>(std::ceil(3.0 * rho)); }
  /// Radius of the pixel window that influences the tensor at one pixel.
  [[nodiscard]] int window_radius() const { return smoothing_radius() + 1 + tensor_radius(); }
};

/// Symmetric 2x2 matrix [[a, b], [b, c]] in (row, column) coordinates.
struct SymTensor2 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  [[nodiscard]] double trace() const { return a + c; }
  [[nodiscard]] double lambda_max() const {
    return 0.5 * (a + c) + std::hypot(0.5 * (a - c), b);
  }
  [[nodiscard]] double lambda_min() const {
    return 0.5 * (a + c) - std::hypot(0.5 * (a - c), b);
  }
};

struct GuidanceVector {
  Vec2 g;                 // unit vector, or zero for "no guidance"
  double coherence = 0.0; // lambda_max - lambda_min
};

/// Sampled Gaussian exp(-d^2 / (2 s^2)) for d in [-radius, radius].
inline std::vector<double> gaussian_taps(double s, int radius) {
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  for (int d = -radius; d <= radius; ++d)
    taps[static_cast<std::size_t>(d + radius)] = std::exp(-(d * d) / (2.0 * s * s));
  return taps;
}

/// Result of smoothing over an axis-aligned rectangle of the image.
struct SmoothedWindow {
  int i0 = 0, j0 = 0;      // image coordinates of the window origin
  int rows = 0, cols = 0;
  int channels = 1;
  std::vector<double> v;   // rows*cols*channels, NaN where undefined

  [[nodiscard]] bool inside(int i, int j) const {
    return i >= i0 && j >= j0 && i < i0 + rows && j < j0 + cols;
  }
  [[nodiscard]] double at(int i, int j, int c) const {
    return v[(static_cast<std::size_t>(i - i0) * cols + (j - j0)) * channels + c];
  }
};

namespace detail {

// Normalized masked Gaussian smoothing on the rectangle [i0, i0+rows) x
// [j0, j0+cols) clipped to the image. Both passes are separable; the
// normalization uses the kernel mass over known pixels only.
inline SmoothedWindow smooth_window(const RasterImage& image, const Mask& known, double sigma,
                                    int i0, int j0, int rows, int cols) {
  const int r = static_cast<int>(std::ceil(4.0 * sigma));
  const auto taps = gaussian_taps(sigma, r);
  const int nc = image.channels();
  const int h = image.height(), w = image.width();

  const int ci0 = std::max(i0, 0), cj0 = std::max(j0, 0);
  const int ci1 = std::min(i0 + rows, h), cj1 = std::min(j0 + cols, w);
  SmoothedWindow out;
  out.i0 = ci0;
  out.j0 = cj0;
  out.rows = std::max(0, ci1 - ci0);
  out.cols = std::max(0, cj1 - cj0);
  out.channels = nc;
  out.v.assign(static_cast<std::size_t>(out.rows) * out.cols * nc,
               std::numeric_limits<double>::quiet_NaN());
  if (out.rows == 0 || out.cols == 0)
    return out;

  // Horizontal pass over the source rows that can reach the window.
  const int si0 = std::max(ci0 - r, 0), si1 = std::min(ci1 + r, h);
  const int srows = si1 - si0;
  const std::size_t stride = static_cast<std::size_t>(out.cols) * (nc + 1);
  std::vector<double> hpass(static_cast<std::size_t>(srows) * stride, 0.0);
  for (int i = si0; i < si1; ++i) {
    double* row = hpass.data() + static_cast<std::size_t>(i - si0) * stride;
    for (int j = cj0; j < cj1; ++j) {
      double* cell = row + static_cast<std::size_t>(j - cj0) * (nc + 1);
      const int lo = std::max(j - r, 0), hi = std::min(j + r, w - 1);
      for (int q = lo; q <= hi; ++q) {
        if (!known(i, q))
          continue;
        const double k = taps[static_cast<std::size_t>(q - j + r)];
        cell[nc] += k;
        for (int c = 0; c < nc; ++c)
          cell[c] += k * image.at(i, q, c);
      }
    }
  }

  std::vector<double> acc(static_cast<std::size_t>(nc + 1));
  for (int i = ci0; i < ci1; ++i) {
    const int lo = std::max(i - r, 0), hi = std::min(i + r, h - 1);
    for (int j = cj0; j < cj1; ++j) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int p = lo; p <= hi; ++p) {
        const double k = taps[static_cast<std::size_t>(p - i + r)];
        const double* cell =
            hpass.data() + static_cast<std::size_t>(p - si0) * stride +
            static_cast<std::size_t>(j - cj0) * (nc + 1);
        for (int c = 0; c <= nc; ++c)
          acc[static_cast<std::size_t>(c)] += k * cell[c];
      }
      if (acc[static_cast<std::size_t>(nc)] > 0.0) {
        double* dst = out.v.data() + (static_cast<std::size_t>(i - ci0) * out.cols + (j - cj0)) * nc;
        for (int c = 0; c < nc; ++c)
          dst[c] = acc[static_cast<std::size_t>(c)] / acc[static_cast<std::size_t>(nc)];
      }
    }
  }
  return out;
}

} // namespace detail

/// Normalized masked Gaussian smoothing of a scalar raster: the mean of the
/// known values weighted by K_sigma, truncated at 4 sigma. NaN where no known
/// pixel lies inside the truncation window.
inline Grid<double> masked_gaussian_smooth(const Grid<double>& values, const Mask& known,
                                           double sigma) {
  if (!(sigma > 0.0))
    throw InvalidArgument("sigma must be positive");
  if (!known.same_shape(values))
    throw InvalidArgument("known mask and raster dimensions differ");
  const auto img = RasterImage::from_grid(values);
  const auto win = detail::smooth_window(img, known, sigma, 0, 0, values.height(), values.width());
  Grid<double> out(values.width(), values.height());
  for (int i = 0; i < values.height(); ++i)
    for (int j = 0; j < values.width(); ++j)
      out(i, j) = win.at(i, j, 0);
  return out;
}

/// Boolean window around order entry k marking data pixels and pixels filled
/// strictly before it. Cells outside the image are false.
struct KnownWindow {
  PixelCoord origin; // image coordinates of cell (0, 0)
  Mask known;
};

inline KnownWindow known_mask_at(std::size_t k, const InpaintDomain& domain,
                                 const PixelOrder& order, const TensorParams& params) {
  params.validate();
  const int r = params.window_radius();
  const PixelCoord x = order[k].pixel;
  KnownWindow out{{x.i - r, x.j - r}, Mask(2 * r + 1, 2 * r + 1, 0)};
  for (int di = -r; di <= r; ++di)
    for (int dj = -r; dj <= r; ++dj) {
      const PixelCoord y{x.i + di, x.j + dj};
      if (!domain.contains(y))
        continue;
      const long rank = domain.in_mask(y) ? order.rank(y) : -2;
      const bool known = rank == -2 || (rank >= 0 && rank < static_cast<long>(k));
      out.known(di + r, dj + r) = known ? 1 : 0;
    }
  return out;
}

/// Structure tensor at x from the known pixels: gradients of the masked
/// pre-smoothed image by central differences (both axis neighbors must be
/// defined), K_rho-weighted over known samples and normalized by the weight
/// of the samples used. Channel tensors are summed. Returns the zero tensor
/// when no gradient sample is available.
inline SymTensor2 structure_tensor(const RasterImage& image, const Mask& known, PixelCoord x,
                                   const TensorParams& params) {
  params.validate();
  if (!known.same_shape(image.width(), image.height()))
    throw InvalidArgument("known mask and image dimensions differ");
  const int rt = params.tensor_radius();
  const auto v = detail::smooth_window(image, known, params.sigma, x.i - rt - 1, x.j - rt - 1,
                                       2 * rt + 3, 2 * rt + 3);
  const auto taps = gaussian_taps(params.rho, rt);
  const int nc = image.channels();

  double sa = 0.0, sb = 0.0, sc = 0.0, wsum = 0.0;
  for (int di = -rt; di <= rt; ++di) {
    const int i = x.i + di;
    for (int dj = -rt; dj <= rt; ++dj) {
      const int j = x.j + dj;
      if (!image.contains(i, j) || !known(i, j))
        continue;
      if (!v.inside(i - 1, j) || !v.inside(i + 1, j) || !v.inside(i, j - 1) ||
          !v.inside(i, j + 1))
        continue;
      double ta = 0.0, tb = 0.0, tc = 0.0;
      bool valid = true;
      for (int c = 0; c < nc && valid; ++c) {
        const double gi = 0.5 * (v.at(i + 1, j, c) - v.at(i - 1, j, c));
        const double gj = 0.5 * (v.at(i, j + 1, c) - v.at(i, j - 1, c));
        if (!std::isfinite(gi) || !std::isfinite(gj)) {
          valid = false;
          break;
        }
        ta += gi * gi;
        tb += gi * gj;
        tc += gj * gj;
      }
      if (!valid)
        continue;
      const double k = taps[static_cast<std::size_t>(di + rt)] *
                       taps[static_cast<std::size_t>(dj + rt)];
      sa += k * ta;
      sb += k * tb;
      sc += k * tc;
      wsum += k;
    }
  }
  if (wsum <= 0.0)
    return {};
  return {sa / wsum, sb / wsum, sc / wsum};
}

/// Unit eigenvector of the smaller eigenvalue, sign-normalized so that its
/// first nonzero component is positive. Nearly isotropic tensors give g = 0.
inline GuidanceVector coherence_vector(const SymTensor2& s) {
  const double lmax = s.lambda_max(), lmin = s.lambda_min();
  const double gap = lmax - lmin;
  GuidanceVector out{{}, std::max(gap, 0.0)};
  if (!(gap > 1e-10 * std::max(1.0, s.trace())))
    return out;
  // Rows of (S - lmin I) are orthogonal to the eigenvector; use the longer
  // one for stability.
  const Vec2 r1{s.a - lmin, s.b}, r2{s.b, s.c - lmin};
  const Vec2 row = norm(r1) >= norm(r2) ? r1 : r2;
  Vec2 g = normalized(perp(row));
  if (g.i < 0.0 || (g.i == 0.0 && g.j < 0.0))
    g = -1.0 * g;
  if (g.i == 0.0)
    g.i = 0.0; // no negative zero
  out.g = g;
  return out;
}

/// Normalized gradient of a scalar field by central differences, one-sided
/// where a neighbor is missing. `value(i, j)` returns NaN for missing pixels.
template <class ValueFn>
Vec2 field_gradient(int width, int height, PixelCoord p, ValueFn&& value) {
  auto diff = [&](int di, int dj) {
    const int ai = p.i - di, aj = p.j - dj, bi = p.i + di, bj = p.j + dj;
    const bool has_a = ai >= 0 && aj >= 0 && ai < height && aj < width &&
                       std::isfinite(value(ai, aj));
    const bool has_b = bi >= 0 && bj >= 0 && bi < height && bj < width &&
                       std::isfinite(value(bi, bj));
    const double c = value(p.i, p.j);
    if (has_a && has_b)
      return 0.5 * (value(bi, bj) - value(ai, aj));
    if (has_b)
      return value(bi, bj) - c;
    if (has_a)
      return c - value(ai, aj);
    return 0.0;
  };
  return normalized(Vec2{diff(1, 0), diff(0, 1)});
}

/// Guidance from the data pixels alone and the inward normal of the
/// distance-to-boundary map, for every boundary pixel (row-major).
inline std::vector<BoundarySample> boundary_guidance(const RasterImage& image,
                                                     const InpaintDomain& domain,
                                                     const TensorParams& params) {
  params.validate();
  if (image.width() != domain.width() || image.height() != domain.height())
    throw InvalidArgument("image and domain dimensions differ");
  Mask data(domain.width(), domain.height(), 0);
  for (int i = 0; i < domain.height(); ++i)
    for (int j = 0; j < domain.width(); ++j)
      data(i, j) = domain.in_mask(i, j) ? 0 : 1;
  const DistanceField dtb = distance_to_boundary(domain);
  auto t = [&](int i, int j) { return domain.in_mask(i, j) ? dtb.values(i, j) : 0.0; };

  std::vector<BoundarySample> out;
  for (PixelCoord p : domain.boundary_pixels()) {
    const auto g = coherence_vector(structure_tensor(image, data, p, params)).g;
    const Vec2 n = field_gradient(domain.width(), domain.height(), p, t);
    out.push_back({p, g, n});
  }
  return out;
}

} // namespace ctinpaint
