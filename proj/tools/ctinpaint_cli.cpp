// Command-line driver: inpaint an image/mask pair or a synthetic case, or
// serve the HTTP API.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ctinpaint/ctinpaint.hpp"
#include "ctinpaint/service.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitInadmissible = 3;
constexpr int kExitIo = 4;

int serve(const std::optional<std::string>& listen) {
  const auto addr = ctinpaint::service::resolve_listen(listen);
  httplib::Server srv;
  ctinpaint::service::InpaintService svc;
  svc.mount(srv);
  std::cerr << "listening on " << addr.host << ":" << addr.port << "\n";
  if (!srv.listen(addr.host, addr.port)) {
    std::cerr << "error: cannot listen on " << addr.host << ":" << addr.port << "\n";
    return kExitIo;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  using namespace ctinpaint;

  CLI::App app{"Coherence-transport inpainting with generalized distance orderings"};
  JobConfig cfg;
  std::string distance = "dtb", kernel = "coherence", case_id;
  std::optional<std::string> stopset, listen;
  int size = 64;
  bool serve_mode = false;

  app.add_option("--input", cfg.input, "damaged image (8-bit PNG)");
  app.add_option("--mask", cfg.mask, "inpainting domain, white = masked (PNG)");
  app.add_option("--distance", distance, "dtb | harmonic | active-dtb | skeleton")
      ->capture_default_str();
  app.add_option("--stopset", stopset, "stop-set or skeleton JSON");
  app.add_option("--epsilon", cfg.options.fill.epsilon)->capture_default_str();
  app.add_option("--mu", cfg.options.fill.mu)->capture_default_str();
  app.add_option("--sigma", cfg.options.fill.sigma)->capture_default_str();
  app.add_option("--rho", cfg.options.fill.rho)->capture_default_str();
  app.add_option("--gamma", cfg.options.gamma, "active-dtb threshold")->capture_default_str();
  app.add_option("--kernel", kernel, "coherence | telea")->capture_default_str();
  app.add_option("--out", cfg.out, "result PNG");
  app.add_option("--contours-out", cfg.contours_out, "result with distance contours (PNG)");
  app.add_option("--levels", cfg.options.levels, "number of contour levels")
      ->capture_default_str();
  app.add_option("--dump-distance", cfg.dump_distance, "distance field (TFLD)");
  app.add_option("--case", case_id, "diagonal | two-diagonals | cross-junction | stripes");
  app.add_option("--size", size, "synthetic case size")->capture_default_str();
  app.add_flag("--serve", serve_mode, "run the HTTP service");
  app.add_option("--listen", listen, "service address host:port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (serve_mode)
      return serve(listen);

    cfg.options.distance = parse_distance_kind(distance);
    cfg.options.fill.kernel = parse_kernel_kind(kernel);
    cfg.stopset = stopset;

    std::vector<std::string> warnings;
    JobInputs inputs;
    std::optional<SyntheticImage> fixture;
    if (!case_id.empty()) {
      if (!cfg.input.empty() || !cfg.mask.empty())
        throw InvalidArgument("--case cannot be combined with --input or --mask");
      SyntheticCase sc{parse_case_id(case_id)};
      sc.size = size;
      cfg.options.validate(stopset.has_value());
      fixture = generate_synthetic(sc);
      inputs = {fixture->damaged, fixture->mask, std::nullopt};
      if (stopset) {
        auto parsed = io::parse_stopset(*stopset, sc.size, sc.size);
        warnings = parsed.warnings;
        inputs.stopset = std::move(parsed.spec);
      }
    } else {
      cfg.validate();
      inputs = load_job_inputs(cfg, warnings);
    }

    JobResult result = run_job(inputs, cfg.options);
    result.warnings.insert(result.warnings.begin(), warnings.begin(), warnings.end());
    write_job_outputs(cfg, result);

    auto report = report_json(result, cfg.options);
    if (fixture && result.ok()) {
      const auto domain = build_domain(fixture->mask);
      report["case"] = case_id;
      report["mismatch"] = count_mismatch(result.fill->image, fixture->truth, domain).fraction();
    }
    std::cout << report.dump() << std::endl;
    return result.ok() ? 0 : kExitInadmissible;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InadmissibleField& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInadmissible;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
