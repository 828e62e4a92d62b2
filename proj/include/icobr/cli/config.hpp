#pragma once

// JSON ingestion of scenarios and sweep specifications.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "icobr/bandwidth.hpp"
#include "icobr/channel.hpp"
#include "icobr/error.hpp"

namespace icobr::cli {

using nlohmann::json;

inline constexpr std::array<std::string_view, 14> kScenarioKeys{
    "a12", "a21", "b1", "b2", "c1", "c2", "P1", "P2", "P1R", "P2R", "PR", "eta", "eta_mac", "eta_bc"};

/// Mutable access to a scalar scenario field by its config key.
inline double& scalar_field(Scenario& sc, std::string_view key) {
  auto& g = sc.gains;
  auto& p = sc.powers;
  if (key == "a12") return g.a12;
  if (key == "a21") return g.a21;
  if (key == "b1") return g.b1;
  if (key == "b2") return g.b2;
  if (key == "c1") return g.c1;
  if (key == "c2") return g.c2;
  if (key == "P1") return p.P1;
  if (key == "P2") return p.P2;
  if (key == "P1R") return p.P1R;
  if (key == "P2R") return p.P2R;
  if (key == "PR") return p.PR;
  if (key == "eta") return sc.bw.eta;
  if (key == "eta_mac") return sc.bw.eta_mac;
  if (key == "eta_bc") return sc.bw.eta_bc;
  throw ValidationError(std::string(key), "unknown scenario field");
}

/// Sets one field; the bandwidth fractions stay consistent with eta.
inline void set_field(Scenario& sc, std::string_view key, double value) {
  if (key == "eta_mac") {
    sc.bw.eta_mac = value;
    sc.bw.eta_bc = sc.bw.eta - value;
  } else if (key == "eta_bc") {
    sc.bw.eta_bc = value;
    sc.bw.eta_mac = sc.bw.eta - value;
  } else if (key == "eta") {
    const double frac = sc.bw.eta > 0.0 ? sc.bw.eta_mac / sc.bw.eta : 0.5;
    sc.bw = BandwidthSplit::from_mac(value, frac * value);
  } else {
    scalar_field(sc, key) = value;
  }
}

namespace detail {

inline double number_field(const json& j, std::string_view key) {
  const auto it = j.find(std::string(key));
  if (it == j.end()) throw ValidationError(std::string(key), "missing");
  if (!it->is_number()) throw ValidationError(std::string(key), "must be a number");
  return it->get<double>();
}

}  // namespace detail

/// Reads a scenario object. When `require_bandwidth` is false, eta_mac and
/// eta_bc may be omitted; the missing side is filled so the split sums to eta
/// (an even split when both are absent).
inline Scenario scenario_from_json(const json& j, bool require_bandwidth = true) {
  if (!j.is_object()) throw ValidationError("scenario", "must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(kScenarioKeys.begin(), kScenarioKeys.end(), key) == kScenarioKeys.end())
      throw ValidationError(key, "unknown key");
  }
  Scenario sc;
  for (const auto key : kScenarioKeys) {
    if (key == "eta_mac" || key == "eta_bc") continue;
    scalar_field(sc, key) = detail::number_field(j, key);
  }
  const bool has_mac = j.contains("eta_mac");
  const bool has_bc = j.contains("eta_bc");
  if (require_bandwidth || (has_mac && has_bc)) {
    sc.bw.eta_mac = detail::number_field(j, "eta_mac");
    sc.bw.eta_bc = detail::number_field(j, "eta_bc");
  } else if (has_mac) {
    sc.bw = BandwidthSplit::from_mac(sc.bw.eta, detail::number_field(j, "eta_mac"));
  } else if (has_bc) {
    const double bc = detail::number_field(j, "eta_bc");
    sc.bw = {sc.bw.eta, sc.bw.eta - bc, bc};
  } else {
    sc.bw = BandwidthSplit::from_mac(sc.bw.eta, 0.5 * sc.bw.eta);
  }
  sc.validate();
  return sc;
}

inline json scenario_to_json(const Scenario& sc) {
  json j = json::object();
  Scenario copy = sc;
  for (const auto key : kScenarioKeys) j[std::string(key)] = scalar_field(copy, key);
  return j;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path, std::string("JSON parse error: ") + e.what());
  }
}

inline Scenario load_scenario(const std::string& path) {
  return scenario_from_json(load_json_file(path));
}

// ---------------------------------------------------------------------------

struct SweepSpec {
  Scenario base;
  std::string param;
  std::vector<double> values;
  std::vector<bandwidth::Objective> objectives;
  bool optimize_bw = false;
  double eta = 1.0;
};

inline bandwidth::Objective parse_objective(const std::string& s) {
  using bandwidth::Objective;
  for (auto o : {Objective::AchievableSR, Objective::AchievableIF, Objective::UpperBound})
    if (s == bandwidth::to_string(o)) return o;
  throw ValidationError("objectives", "unknown objective '" + s + "'");
}

/// `values` is an explicit list, or `range` = {lo, hi, step} / {lo, hi, count}.
inline std::vector<double> parse_values(const json& j) {
  std::vector<double> out;
  if (j.contains("values")) {
    const auto& v = j.at("values");
    if (!v.is_array()) throw ValidationError("values", "must be an array");
    for (const auto& x : v) {
      if (!x.is_number()) throw ValidationError("values", "entries must be numbers");
      out.push_back(x.get<double>());
    }
  } else if (j.contains("range")) {
    const auto& r = j.at("range");
    const double lo = detail::number_field(r, "lo");
    const double hi = detail::number_field(r, "hi");
    if (!(hi >= lo)) throw ValidationError("range", "hi must be >= lo");
    if (r.contains("count")) {
      const double c = detail::number_field(r, "count");
      if (!(c >= 1.0)) throw ValidationError("range.count", "must be >= 1");
      const auto count = static_cast<std::size_t>(c);
      const double step = count > 1 ? (hi - lo) / static_cast<double>(count - 1) : 0.0;
      for (std::size_t i = 0; i < count; ++i)
        out.push_back(i + 1 == count && count > 1 ? hi : lo + step * static_cast<double>(i));
    } else {
      const double step = detail::number_field(r, "step");
      if (!(step > 0.0)) throw ValidationError("range.step", "must be > 0");
      const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
      for (std::size_t i = 0; i < count; ++i) out.push_back(lo + step * static_cast<double>(i));
    }
  } else {
    throw ValidationError("values", "need 'values' or 'range'");
  }
  if (out.empty()) throw ValidationError("values", "must be nonempty");
  for (double v : out)
    if (!std::isfinite(v)) throw ValidationError("values", "must be finite");
  return out;
}

inline SweepSpec sweep_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("sweep", "must be a JSON object");
  SweepSpec s;
  s.optimize_bw = j.value("optimize_bw", false);
  if (!j.contains("base")) throw ValidationError("base", "missing");
  s.base = scenario_from_json(j.at("base"), /*require_bandwidth=*/!s.optimize_bw);
  if (!j.contains("param") || !j.at("param").is_string())
    throw ValidationError("param", "missing or not a string");
  s.param = j.at("param").get<std::string>();
  (void)scalar_field(s.base, s.param);
  s.values = parse_values(j);
  if (!j.contains("objectives") || !j.at("objectives").is_array() || j.at("objectives").empty())
    throw ValidationError("objectives", "must be a nonempty array");
  for (const auto& o : j.at("objectives")) {
    if (!o.is_string()) throw ValidationError("objectives", "entries must be strings");
    s.objectives.push_back(parse_objective(o.get<std::string>()));
  }
  if (s.optimize_bw) {
    s.eta = j.contains("eta") ? detail::number_field(j, "eta") : s.base.bw.eta;
    if (!(s.eta > 0.0)) throw ValidationError("eta", "must be > 0");
  }
  return s;
}

/// 9 significant digits, `.` separator, independent of the global locale.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

}  // namespace icobr::cli
