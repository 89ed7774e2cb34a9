#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctinpaint/distance_fields.hpp"
#include "ctinpaint/errors.hpp"

namespace ctinpaint::io {

namespace detail {

[[noreturn]] inline void stopset_error(const std::string& m) {
  throw InvalidArgument("stop-set: " + m);
}

} // namespace detail

struct ParsedStopSet {
  StopSetSpec spec;
  std::vector<std::string> warnings;
};

/// Parses {"role": "stop"|"skeleton", "curves": [{"points": [[i,j],...],
/// "t": number}]}. Points must lie in a width x height image; stop curves
/// need t > 0. A "t" on a skeleton curve is ignored with a warning.
inline ParsedStopSet parse_stopset_json(const nlohmann::json& doc, int width, int height) {
  const auto fail = detail::stopset_error;
  if (!doc.is_object())
    fail("document must be a JSON object");
  ParsedStopSet out;
  if (!doc.contains("role") || !doc["role"].is_string())
    fail("missing \"role\"");
  const auto role = doc["role"].get<std::string>();
  if (role == "stop")
    out.spec.role = StopSetRole::Stop;
  else if (role == "skeleton")
    out.spec.role = StopSetRole::Skeleton;
  else
    fail("role must be \"stop\" or \"skeleton\"");

  if (!doc.contains("curves") || !doc["curves"].is_array())
    fail("missing \"curves\" array");
  if (doc["curves"].empty())
    fail("curves list is empty");
  std::size_t index = 0;
  for (const auto& c : doc["curves"]) {
    const std::string where = "curve " + std::to_string(index++);
    if (!c.is_object() || !c.contains("points") || !c["points"].is_array())
      fail(where + " needs a \"points\" array");
    StopCurve curve;
    for (const auto& p : c["points"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() ||
          !p[1].is_number_integer())
        fail(where + ": points must be [i, j] integer pairs");
      const PixelCoord q{p[0].get<int>(), p[1].get<int>()};
      if (q.i < 0 || q.j < 0 || q.i >= height || q.j >= width)
        fail(where + ": point [" + std::to_string(q.i) + "," + std::to_string(q.j) +
             "] lies outside the image");
      curve.points.push_back(q);
    }
    if (curve.points.empty())
      fail(where + " has no points");
    const bool has_t = c.contains("t");
    if (has_t && !c["t"].is_number())
      fail(where + ": \"t\" must be a number");
    if (out.spec.role == StopSetRole::Stop) {
      if (!has_t)
        fail(where + " needs a distance value \"t\"");
      curve.t = c["t"].get<double>();
      if (!(curve.t > 0.0) || !std::isfinite(curve.t))
        fail(where + ": \"t\" must be positive");
    } else if (has_t) {
      out.warnings.push_back(where + ": \"t\" is ignored for skeleton curves");
    }
    out.spec.curves.push_back(std::move(curve));
  }
  return out;
}

inline ParsedStopSet parse_stopset_text(const std::string& text, int width, int height) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("stop-set: malformed JSON: ") + e.what());
  }
  return parse_stopset_json(doc, width, height);
}

inline ParsedStopSet parse_stopset(const std::string& path, int width, int height) {
  std::ifstream f(path);
  if (!f)
    throw IoError("cannot read stop-set '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_stopset_text(ss.str(), width, height);
}

inline nlohmann::json stopset_to_json(const StopSetSpec& spec) {
  nlohmann::json curves = nlohmann::json::array();
  for (const auto& c : spec.curves) {
    nlohmann::json pts = nlohmann::json::array();
    for (PixelCoord p : c.points)
      pts.push_back({p.i, p.j});
    nlohmann::json jc{{"points", pts}};
    if (spec.role == StopSetRole::Stop)
      jc["t"] = c.t;
    curves.push_back(jc);
  }
  return {{"role", spec.role == StopSetRole::Stop ? "stop" : "skeleton"}, {"curves", curves}};
}

} // namespace ctinpaint::io
