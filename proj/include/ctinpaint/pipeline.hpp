#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctinpaint/contours.hpp"
#include "ctinpaint/distance_fields.hpp"
#include "ctinpaint/domain.hpp"
#include "ctinpaint/errors.hpp"
#include "ctinpaint/guidance.hpp"
#include "ctinpaint/io/png.hpp"
#include "ctinpaint/io/stopset_json.hpp"
#include "ctinpaint/io/tfld.hpp"
#include "ctinpaint/transport.hpp"

namespace ctinpaint {

/// Everything a run needs besides the rasters.
struct RunOptions {
  DistanceKind distance = DistanceKind::Boundary;
  FillParams fill;
  double gamma = 0.1; // active-dtb threshold
  int levels = 10;    // contour levels

  void validate(bool has_stopset) const {
    fill.validate();
    if ((distance == DistanceKind::Harmonic || distance == DistanceKind::Skeleton) &&
        !has_stopset)
      throw InvalidArgument(std::string(to_string(distance)) + " distance needs a stop-set");
    if (distance == DistanceKind::ActiveBoundary && !(gamma > 0.0 && gamma <= 1.0))
      throw InvalidArgument("gamma must lie in (0, 1]");
    if (levels < 1)
      throw InvalidArgument("levels must be at least 1");
  }
};

struct JobInputs {
  RasterImage image;
  Mask mask;
  std::optional<StopSetSpec> stopset;
};

struct JobResult {
  DistanceField field;
  AdmissibilityReport admissibility;
  std::optional<InpaintResult> fill; // absent when the field is inadmissible
  std::optional<ContourImage> contours;
  std::size_t active_boundary = 0;   // active-dtb only
  std::vector<std::string> warnings;
  double seconds = 0.0;

  [[nodiscard]] bool ok() const { return admissibility.valid && fill.has_value(); }
};

/// Builds the distance field selected by `opt`.
inline DistanceField build_distance(const RasterImage& image, const InpaintDomain& domain,
                                    const std::optional<StopSetSpec>& stopset,
                                    const RunOptions& opt, std::size_t* active_count = nullptr) {
  switch (opt.distance) {
  case DistanceKind::Boundary:
    return distance_to_boundary(domain);
  case DistanceKind::Harmonic:
    if (!stopset || stopset->role != StopSetRole::Stop)
      throw InvalidArgument("harmonic distance needs a stop-set with role \"stop\"");
    return harmonic_distance(domain, *stopset);
  case DistanceKind::ActiveBoundary: {
    const auto samples = boundary_guidance(image, domain, opt.fill.tensor());
    const auto active = active_boundary(domain, samples, opt.gamma);
    if (active_count)
      *active_count = active.size();
    return distance_to_active_boundary(domain, active);
  }
  case DistanceKind::Skeleton:
    if (!stopset || stopset->role != StopSetRole::Skeleton)
      throw InvalidArgument("skeleton distance needs a stop-set with role \"skeleton\"");
    return skeleton_distance(domain, *stopset);
  }
  throw InvalidArgument("unknown distance kind");
}

/// Distance field, admissibility check, fill and contour overlay. An
/// inadmissible field is reported, not thrown.
inline JobResult run_job(const JobInputs& in, const RunOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  opt.validate(in.stopset.has_value());
  in.image.validate();
  const InpaintDomain domain = build_domain(in.image, in.mask);

  JobResult r;
  r.field = build_distance(in.image, domain, in.stopset, opt, &r.active_boundary);
  r.admissibility = check_admissible(r.field, domain);
  if (r.admissibility.valid) {
    const PixelOrder order = serialize_pixels(r.field, domain);
    r.fill = inpaint(in.image, domain, order, opt.fill, &r.field);
    r.contours = render_contours(r.field.values, r.fill->image, opt.levels);
    r.warnings.insert(r.warnings.end(), r.fill->stats.warnings.begin(),
                      r.fill->stats.warnings.end());
    r.warnings.insert(r.warnings.end(), r.contours->warnings.begin(),
                      r.contours->warnings.end());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline nlohmann::json admissibility_json(const AdmissibilityReport& a) {
  nlohmann::json off = nlohmann::json::array();
  for (PixelCoord p : a.offending)
    off.push_back({p.i, p.j});
  return {{"valid", a.valid}, {"offending", off}};
}

/// One-line run report.
inline nlohmann::json report_json(const JobResult& r, const RunOptions& opt) {
  nlohmann::json j{{"status", r.ok() ? "ok" : "inadmissible"},
                   {"distance", to_string(opt.distance)},
                   {"kernel", to_string(opt.fill.kernel)},
                   {"params",
                    {{"epsilon", opt.fill.epsilon},
                     {"mu", opt.fill.mu},
                     {"sigma", opt.fill.sigma},
                     {"rho", opt.fill.rho},
                     {"gamma", opt.gamma}}},
                   {"admissibility", admissibility_json(r.admissibility)},
                   {"filled", r.fill ? r.fill->stats.filled : 0},
                   {"fallback_count", r.fill ? r.fill->stats.fallback_count : 0},
                   {"warnings", r.warnings},
                   {"seconds", r.seconds}};
  if (opt.distance == DistanceKind::ActiveBoundary)
    j["active_boundary"] = r.active_boundary;
  return j;
}

/// File-based job as driven from the command line.
struct JobConfig {
  std::string input;
  std::string mask;
  std::optional<std::string> stopset;
  RunOptions options;
  std::string out;
  std::string contours_out;
  std::string dump_distance;

  void validate() const {
    if (input.empty() || mask.empty())
      throw InvalidArgument("both an input image and a mask are required");
    options.validate(stopset.has_value());
  }
};

/// Reads image, mask and stop-set; warnings from the stop-set parser are
/// appended to `warnings`.
inline JobInputs load_job_inputs(const JobConfig& cfg, std::vector<std::string>& warnings) {
  JobInputs in{io::load_image(cfg.input), io::load_mask(cfg.mask), std::nullopt};
  if (in.mask.width() != in.image.width() || in.mask.height() != in.image.height())
    throw InvalidArgument("mask and image dimensions differ");
  if (cfg.stopset) {
    auto parsed = io::parse_stopset(*cfg.stopset, in.image.width(), in.image.height());
    warnings.insert(warnings.end(), parsed.warnings.begin(), parsed.warnings.end());
    in.stopset = std::move(parsed.spec);
  }
  return in;
}

/// Writes whichever outputs the config asks for. The distance dump is written
/// even for inadmissible fields.
inline void write_job_outputs(const JobConfig& cfg, const JobResult& r) {
  if (!cfg.dump_distance.empty())
    io::save_tfld(r.field.values, cfg.dump_distance);
  if (!r.ok())
    return;
  if (!cfg.out.empty())
    io::save_image(r.fill->image, cfg.out);
  if (!cfg.contours_out.empty())
    io::save_image(r.contours->image, cfg.contours_out);
}

} // namespace ctinpaint
