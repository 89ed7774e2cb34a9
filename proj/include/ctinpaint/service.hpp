#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "ctinpaint/io/png.hpp"
#include "ctinpaint/io/stopset_json.hpp"
#include "ctinpaint/io/tfld.hpp"
#include "ctinpaint/pipeline.hpp"

namespace ctinpaint::service {

struct Session {
  std::string id;
  RasterImage image;
  Mask mask;

  std::mutex mutex; // guards the fields below
  std::optional<StopSetSpec> stopset;
  std::optional<RunOptions> last_options;
  std::shared_ptr<const JobResult> last_result;
  std::atomic<bool> running{false};
};

/// In-memory session table with least-recently-used eviction.
class SessionStore {
public:
  explicit SessionStore(std::size_t capacity = 16) : capacity_(capacity) {
    if (capacity == 0)
      throw InvalidArgument("session capacity must be positive");
  }

  std::shared_ptr<Session> create(RasterImage image, Mask mask) {
    auto s = std::make_shared<Session>();
    s->image = std::move(image);
    s->mask = std::move(mask);
    std::lock_guard lock(mutex_);
    s->id = new_id();
    lru_.push_front(s->id);
    table_[s->id] = {s, lru_.begin()};
    while (table_.size() > capacity_) {
      table_.erase(lru_.back());
      lru_.pop_back();
    }
    return s;
  }

  /// Looks a session up and marks it most recently used.
  std::shared_ptr<Session> find(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto it = table_.find(id);
    if (it == table_.end())
      return nullptr;
    lru_.splice(lru_.begin(), lru_, it->second.pos);
    return it->second.session;
  }

  [[nodiscard]] std::size_t size() const {
    std::lock_guard lock(mutex_);
    return table_.size();
  }
  [[nodiscard]] std::size_t capacity() const noexcept { return capacity_; }

private:
  struct Entry {
    std::shared_ptr<Session> session;
    std::list<std::string>::iterator pos;
  };

  std::string new_id() {
    static constexpr char hex[] = "0123456789abcdef";
    std::string id;
    do {
      id.clear();
      for (int k = 0; k < 2; ++k) {
        std::uint64_t v = rng_();
        for (int d = 0; d < 16; ++d, v >>= 4)
          id.push_back(hex[v & 15u]);
      }
    } while (table_.count(id));
    return id;
  }

  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::list<std::string> lru_;
  std::unordered_map<std::string, Entry> table_;
  std::mt19937_64 rng_{std::random_device{}()};
};

/// Parses run parameters; absent keys keep their defaults.
inline RunOptions parse_run_options(const nlohmann::json& body) {
  if (!body.is_object())
    throw InvalidArgument("run parameters must be a JSON object");
  RunOptions opt;
  auto number = [&](const char* key, double& dst) {
    if (!body.contains(key))
      return;
    if (!body[key].is_number())
      throw InvalidArgument(std::string("\"") + key + "\" must be a number");
    dst = body[key].get<double>();
  };
  if (body.contains("distance")) {
    if (!body["distance"].is_string())
      throw InvalidArgument("\"distance\" must be a string");
    opt.distance = parse_distance_kind(body["distance"].get<std::string>());
  }
  if (body.contains("kernel")) {
    if (!body["kernel"].is_string())
      throw InvalidArgument("\"kernel\" must be a string");
    opt.fill.kernel = parse_kernel_kind(body["kernel"].get<std::string>());
  }
  number("epsilon", opt.fill.epsilon);
  number("mu", opt.fill.mu);
  number("sigma", opt.fill.sigma);
  number("rho", opt.fill.rho);
  number("gamma", opt.gamma);
  if (body.contains("levels")) {
    if (!body["levels"].is_number_integer())
      throw InvalidArgument("\"levels\" must be an integer");
    opt.levels = body["levels"].get<int>();
  }
  return opt;
}

/// HTTP facade over the pipeline.
class InpaintService {
public:
  explicit InpaintService(std::size_t capacity = 16) : store_(capacity) {}

  SessionStore& store() noexcept { return store_; }

  void mount(httplib::Server& srv) {
    srv.Post("/session", [this](const httplib::Request& req, httplib::Response& res) {
      create_session(req, res);
    });
    srv.Put(R"(/session/([0-9a-f]+)/stopset)",
            [this](const httplib::Request& req, httplib::Response& res) { put_stopset(req, res); });
    srv.Post(R"(/session/([0-9a-f]+)/run)",
             [this](const httplib::Request& req, httplib::Response& res) { run(req, res); });
    srv.Get(R"(/session/([0-9a-f]+)/(result|contours|distance|report))",
            [this](const httplib::Request& req, httplib::Response& res) { artifact(req, res); });
  }

private:
  static void reply(httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }
  static void error(httplib::Response& res, int status, const std::string& message) {
    reply(res, status, {{"error", message}});
  }

  static std::vector<std::uint8_t> bytes_of(const std::string& s) {
    return {s.begin(), s.end()};
  }

  // multipart/form-data with PNG parts "image" and "mask"
  void create_session(const httplib::Request& req, httplib::Response& res) {
    if (!req.has_file("image") || !req.has_file("mask"))
      return error(res, 400, "expected multipart parts \"image\" and \"mask\"");
    try {
      RasterImage image = io::decode_png(bytes_of(req.get_file_value("image").content));
      Mask mask = io::mask_from_image(io::decode_png(bytes_of(req.get_file_value("mask").content)));
      if (mask.width() != image.width() || mask.height() != image.height())
        return error(res, 400, "mask and image dimensions differ");
      (void)build_domain(image, mask); // rejects empty or full masks
      const int w = image.width(), h = image.height();
      auto s = store_.create(std::move(image), std::move(mask));
      reply(res, 201, {{"id", s->id}, {"width", w}, {"height", h}});
    } catch (const Error& e) {
      error(res, 400, e.what());
    }
  }

  void put_stopset(const httplib::Request& req, httplib::Response& res) {
    auto s = store_.find(req.matches[1]);
    if (!s)
      return error(res, 404, "unknown session");
    try {
      auto parsed = io::parse_stopset_text(req.body, s->image.width(), s->image.height());
      nlohmann::json counts = nlohmann::json::array();
      const InpaintDomain domain = build_domain(s->mask);
      for (const auto& curve : parsed.spec.curves) {
        const auto pixels = rasterize_polyline(curve.points);
        if (parsed.spec.role == StopSetRole::Stop)
          for (PixelCoord p : pixels)
            if (!domain.in_mask(p) || domain.on_boundary(p))
              throw InvalidArgument("stop curve pixel (" + std::to_string(p.i) + "," +
                                    std::to_string(p.j) +
                                    ") lies outside the domain interior");
        counts.push_back(pixels.size());
      }
      std::lock_guard lock(s->mutex);
      s->stopset = std::move(parsed.spec);
      reply(res, 200, {{"curves", counts}, {"warnings", parsed.warnings}});
    } catch (const Error& e) {
      error(res, 422, e.what());
    }
  }

  void run(const httplib::Request& req, httplib::Response& res) {
    auto s = store_.find(req.matches[1]);
    if (!s)
      return error(res, 404, "unknown session");
    RunOptions opt;
    std::optional<StopSetSpec> stopset;
    try {
      opt = parse_run_options(req.body.empty() ? nlohmann::json::object()
                                               : nlohmann::json::parse(req.body));
      std::lock_guard lock(s->mutex);
      stopset = s->stopset;
      opt.validate(stopset.has_value());
    } catch (const nlohmann::json::exception& e) {
      return error(res, 400, std::string("malformed parameters: ") + e.what());
    } catch (const Error& e) {
      return error(res, 400, e.what());
    }

    bool expected = false;
    if (!s->running.compare_exchange_strong(expected, true))
      return error(res, 409, "a run is already in flight for this session");
    struct Release {
      std::atomic<bool>& flag;
      ~Release() { flag = false; }
    } release{s->running};

    try {
      auto result = std::make_shared<const JobResult>(run_job({s->image, s->mask, stopset}, opt));
      const auto report = report_json(*result, opt);
      {
        std::lock_guard lock(s->mutex);
        s->last_options = opt;
        s->last_result = result;
      }
      reply(res, result->ok() ? 200 : 422, report);
    } catch (const Error& e) {
      error(res, 422, e.what());
    }
  }

  void artifact(const httplib::Request& req, httplib::Response& res) {
    auto s = store_.find(req.matches[1]);
    if (!s)
      return error(res, 404, "unknown session");
    std::shared_ptr<const JobResult> r;
    std::optional<RunOptions> opt;
    {
      std::lock_guard lock(s->mutex);
      r = s->last_result;
      opt = s->last_options;
    }
    if (!r)
      return error(res, 404, "no run has completed for this session");
    const std::string which = req.matches[2];
    if (which == "report")
      return reply(res, 200, report_json(*r, *opt));
    if (which == "distance") {
      const auto bytes = io::encode_tfld(r->field.values);
      res.set_content(std::string(bytes.begin(), bytes.end()), "application/octet-stream");
      return;
    }
    if (!r->ok())
      return error(res, 404, "the last run was inadmissible and produced no images");
    const auto& img = which == "result" ? r->fill->image : r->contours->image;
    const auto bytes = io::encode_png(img);
    res.set_content(std::string(bytes.begin(), bytes.end()), "image/png");
  }

  SessionStore store_;
};

inline constexpr const char* kListenEnv = "CTINPAINT_LISTEN";
inline constexpr const char* kDefaultListen = "127.0.0.1:8080";

struct ListenAddress {
  std::string host;
  int port = 0;
};

/// "host:port" from the explicit flag, else the environment, else the default.
inline ListenAddress resolve_listen(const std::optional<std::string>& flag) {
  std::string spec = kDefaultListen;
  if (flag && !flag->empty())
    spec = *flag;
  else if (const char* env = std::getenv(kListenEnv); env && *env)
    spec = env;
  const auto colon = spec.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size())
    throw InvalidArgument("listen address must be host:port, got '" + spec + "'");
  ListenAddress a{spec.substr(0, colon), 0};
  try {
    std::size_t used = 0;
    a.port = std::stoi(spec.substr(colon + 1), &used);
    if (used != spec.size() - colon - 1)
      throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw InvalidArgument("bad port in listen address '" + spec + "'");
  }
  if (a.port < 0 || a.port > 65535)
    throw InvalidArgument("port out of range in '" + spec + "'");
  return a;
}

} // namespace ctinpaint::service
