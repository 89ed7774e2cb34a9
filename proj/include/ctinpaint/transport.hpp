#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "ctinpaint/distance_fields.hpp"
#include "ctinpaint/domain.hpp"
#include "ctinpaint/errors.hpp"
#include "ctinpaint/guidance.hpp"
#include "ctinpaint/raster.hpp"
#include "ctinpaint/vec2.hpp"

namespace ctinpaint {

enum class KernelKind { Telea, Coherence };

inline std::string_view to_string(KernelKind k) {
  return k == KernelKind::Telea ? "telea" : "coherence";
}

inline KernelKind parse_kernel_kind(std::string_view s) {
  if (s == "telea") return KernelKind::Telea;
  if (s == "coherence") return KernelKind::Coherence;
  throw InvalidArgument("unknown kernel '" + std::string(s) + "'");
}

/// The four parameters of the fill plus the kernel choice.
struct FillParams {
  double epsilon = 3.0; // averaging radius
  double mu = 50.0;     // guidance strength
  double sigma = 0.5;
  double rho = 5.0;
  KernelKind kernel = KernelKind::Coherence;

  void validate() const {
    if (!(epsilon >= std::numbers::sqrt2) || !std::isfinite(epsilon))
      throw InvalidArgument("epsilon must be at least sqrt(2)");
    if (!(mu > 0.0) || !std::isfinite(mu))
      throw InvalidArgument("mu must be positive");
    tensor().validate();
  }
  [[nodiscard]] TensorParams tensor() const { return {sigma, rho}; }
};

/// Normal-transport kernel |<N, eta>| / |eta|; uniform (1) where N vanishes.
inline double telea_kernel(Vec2 n, Vec2 eta) {
  const double len = norm(eta);
  if (!(len > 0.0))
    throw InvalidArgument("telea kernel needs a nonzero offset");
  if (n.i == 0.0 && n.j == 0.0)
    return 1.0;
  return std::abs(dot(n, eta)) / len;
}

/// Coherence-transport kernel sqrt(pi/2) mu exp(-mu^2/2 <g_perp, eta>^2).
inline double coherence_kernel(Vec2 g, Vec2 eta, double mu) {
  const double s = dot(perp(g), eta);
  return std::sqrt(std::numbers::pi / 2.0) * mu * std::exp(-0.5 * mu * mu * s * s);
}

/// w(x, y) = kappa / |x - y|.
inline double weight(PixelCoord x, PixelCoord y, double kappa) {
  const double d = std::hypot(static_cast<double>(x.i - y.i), static_cast<double>(x.j - y.j));
  if (!(d > 0.0))
    throw InvalidArgument("weight needs distinct pixels");
  return kappa / d;
}

struct FillStats {
  std::size_t filled = 0;
  /// Telea pixels whose kernel weights summed to zero (uniform weights used).
  std::size_t fallback_count = 0;
  std::vector<std::string> warnings;
};

/// Mutable state of the sequential fill.
class FillState {
public:
  FillState(RasterImage image, const InpaintDomain& domain) : image_(std::move(image)) {
    if (image_.width() != domain.width() || image_.height() != domain.height())
      throw InvalidArgument("image and domain dimensions differ");
    known_ = Mask(domain.width(), domain.height(), 0);
    for (int i = 0; i < domain.height(); ++i)
      for (int j = 0; j < domain.width(); ++j)
        known_(i, j) = domain.in_mask(i, j) ? 0 : 1;
  }

  [[nodiscard]] const RasterImage& image() const noexcept { return image_; }
  [[nodiscard]] RasterImage&& take_image() noexcept { return std::move(image_); }
  [[nodiscard]] const Mask& known() const noexcept { return known_; }
  [[nodiscard]] std::size_t index() const noexcept { return index_; }
  [[nodiscard]] FillStats& stats() noexcept { return stats_; }
  [[nodiscard]] const FillStats& stats() const noexcept { return stats_; }

  /// Writes the final value of x and marks it known.
  void commit(PixelCoord x, std::span<const double> value) {
    auto dst = image_.pixel(x.i, x.j);
    std::copy(value.begin(), value.end(), dst.begin());
    known_[x] = 1;
    ++index_;
    ++stats_.filled;
  }

private:
  RasterImage image_;
  Mask known_;
  std::size_t index_ = 0;
  FillStats stats_;
};

namespace detail {

struct Neighbor {
  PixelCoord y;
  double dist = 0.0;
  Vec2 eta;
};

} // namespace detail

/// Fills the next pixel x of the order with the weighted mean over its known
/// ball neighbors. One weight set is shared by all channels.
///
/// For the coherence kernel all weights are divided by the largest kernel
/// value among the neighbors before summing; the factor cancels in the mean
/// and keeps sharply peaked kernels from underflowing to an all-zero sum.
inline void fill_pixel(FillState& state, PixelCoord x, const BallStencil& stencil,
                       const FillParams& params, const DistanceField* field = nullptr) {
  const RasterImage& img = state.image();
  const Mask& known = state.known();
  std::vector<detail::Neighbor> nbrs;
  nbrs.reserve(stencil.offsets.size());
  for (PixelCoord o : stencil.offsets) {
    const PixelCoord y{x.i + o.i, x.j + o.j};
    if (!img.contains(y) || !known[y])
      continue;
    const double d = std::hypot(static_cast<double>(o.i), static_cast<double>(o.j));
    // eta = (x - y) / epsilon
    nbrs.push_back({y, d, {-o.i / params.epsilon, -o.j / params.epsilon}});
  }
  if (nbrs.empty())
    throw StarvedPixel("pixel (" + std::to_string(x.i) + "," + std::to_string(x.j) +
                       ") has no known neighbor within epsilon");

  std::vector<double> w(nbrs.size());
  if (params.kernel == KernelKind::Coherence) {
    const Vec2 g = coherence_vector(structure_tensor(img, known, x, params.tensor())).g;
    const Vec2 gp = perp(g);
    double min_exponent = std::numeric_limits<double>::infinity();
    std::vector<double> exponent(nbrs.size());
    for (std::size_t n = 0; n < nbrs.size(); ++n) {
      const double s = dot(gp, nbrs[n].eta);
      exponent[n] = 0.5 * params.mu * params.mu * s * s;
      min_exponent = std::min(min_exponent, exponent[n]);
    }
    for (std::size_t n = 0; n < nbrs.size(); ++n)
      w[n] = std::exp(min_exponent - exponent[n]) / nbrs[n].dist;
  } else {
    if (field == nullptr)
      throw InvalidArgument("telea kernel needs the distance field");
    const Vec2 nvec = field_gradient(img.width(), img.height(), x,
                                     [&](int i, int j) { return field->values(i, j); });
    double sum = 0.0;
    for (std::size_t n = 0; n < nbrs.size(); ++n) {
      w[n] = weight(x, nbrs[n].y, telea_kernel(nvec, nbrs[n].eta));
      sum += w[n];
    }
    if (!(sum > 0.0)) {
      for (std::size_t n = 0; n < nbrs.size(); ++n)
        w[n] = 1.0 / nbrs[n].dist;
      ++state.stats().fallback_count;
      state.stats().warnings.push_back("zero telea weight sum at (" + std::to_string(x.i) +
                                       "," + std::to_string(x.j) +
                                       "); used uniform weights");
    }
  }

  // Mean written as ref + sum w (u - ref) / sum w so that equal inputs give
  // the input back exactly; the clamp removes round-off outside the hull.
  const int nc = img.channels();
  std::vector<double> value(static_cast<std::size_t>(nc));
  double wsum = 0.0;
  for (double wn : w)
    wsum += wn;
  for (int c = 0; c < nc; ++c) {
    const double ref = img.at(nbrs.front().y.i, nbrs.front().y.j, c);
    double lo = ref, hi = ref, acc = 0.0;
    for (std::size_t n = 0; n < nbrs.size(); ++n) {
      const double u = img.at(nbrs[n].y.i, nbrs[n].y.j, c);
      lo = std::min(lo, u);
      hi = std::max(hi, u);
      acc += w[n] * (u - ref);
    }
    value[static_cast<std::size_t>(c)] = std::clamp(ref + acc / wsum, lo, hi);
  }
  state.commit(x, value);
}

struct InpaintResult {
  RasterImage image;
  FillStats stats;
};

/// Single-pass fill of the domain in the given order. Data pixels are copied
/// through unchanged. The distance field is only read by the telea kernel.
inline InpaintResult inpaint(const RasterImage& image, const InpaintDomain& domain,
                             const PixelOrder& order, const FillParams& params,
                             const DistanceField* field = nullptr) {
  params.validate();
  if (order.size() != domain.inpaint_count())
    throw InvalidArgument("order does not cover the inpainting domain");
  const BallStencil stencil = ball_offsets(params.epsilon);
  FillState state(image, domain);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const PixelCoord x = order[k].pixel;
    if (!domain.in_mask(x))
      throw InvalidArgument("order lists a data pixel");
    fill_pixel(state, x, stencil, params, field);
  }
  InpaintResult out{state.take_image(), std::move(state.stats())};
  return out;
}

struct TransportDiagnostic {
  Vec2 c; // unit transport direction
};

/// Numerical transport direction of the coherence weights: the normalized
/// first moment sum w(eta) eta over the half ball {<eta, N> >= 0, |eta| <= 1}.
/// The radial integral is done in closed form; `resolution` is the number of
/// angular samples (midpoint rule). Mirror samples about N are summed in
/// pairs so that symmetric configurations cancel exactly.
inline TransportDiagnostic transport_field_estimate(Vec2 g, Vec2 n, double mu, double epsilon,
                                                    int resolution) {
  if (std::abs(norm(n) - 1.0) > 1e-9)
    throw InvalidArgument("normal must be a unit vector");
  if (resolution < 2)
    throw InvalidArgument("resolution must be at least 2");
  if (!(mu > 0.0) || !(epsilon > 0.0))
    throw InvalidArgument("mu and epsilon must be positive");
  const Vec2 nt = perp(n);
  const Vec2 gp = perp(g);
  const double a_n = dot(gp, n), a_t = dot(gp, nt);
  const int m = resolution % 2 == 0 ? resolution : resolution + 1;
  const double dtheta = std::numbers::pi / m;

  // integral_0^1 (k_mu / (eps r)) r * r dr along direction theta, up to the
  // common factor sqrt(pi/2) mu / eps.
  auto radial = [&](double s) {
    const double a = 0.5 * mu * mu * s * s;
    return a < 1e-12 ? 0.5 - a / 4.0 : -std::expm1(-a) / (2.0 * a);
  };

  double c_n = 0.0, c_t = 0.0;
  for (int k = 0; k < m / 2; ++k) {
    const double off = (k + 0.5 - m / 2.0) * dtheta; // < 0; mirror is -off
    const double co = std::cos(off), si = std::sin(off);
    const double f1 = radial(co * a_n + si * a_t);
    const double f2 = radial(co * a_n - si * a_t);
    c_n += (f1 + f2) * co;
    c_t += f1 * si - f2 * si;
  }
  return {normalized(c_n * n + c_t * nt)};
}

} // namespace ctinpaint
