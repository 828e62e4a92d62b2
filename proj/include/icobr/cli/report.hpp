#pragma once

// Single-scenario analysis: regime flags, separable-coding conditions,
// achievable sum rates in both relay modes, outer bound and verdict.

#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "icobr/achievability.hpp"
#include "icobr/channel.hpp"
#include "icobr/cli/config.hpp"
#include "icobr/outerbound.hpp"

namespace icobr::cli {

struct AnalysisReport {
  Scenario scenario;
  RegimeFlags flags;
  achievability::SeparableConditions conditions;
  std::optional<achievability::SeparableCapacity> separable_capacity;
  outerbound::GapReport gaps;
  std::string verdict;
};

inline std::string make_verdict(const AnalysisReport& r) {
  const auto& g = r.gaps;
  if (!g.upper) return "no capacity claim (outer bound undefined: " + g.regime_error + ")";
  if (g.capacity_established) {
    if (r.conditions.which != achievability::SeparableCase::None)
      return "sum-capacity established (separable signal relaying, " +
             std::string(achievability::to_string(r.conditions.which)) + ")";
    return "sum-capacity established (achievable meets outer bound)";
  }
  return "no capacity claim (gap " + format_number(std::min(g.gap_sr, g.gap_if)) + " bits/use)";
}

inline AnalysisReport analyze(const Scenario& sc) {
  sc.validate();
  AnalysisReport r;
  r.scenario = sc;
  r.flags = regime_flags(sc);
  r.conditions = achievability::separable_conditions(sc);
  if (r.conditions.which != achievability::SeparableCase::None)
    r.separable_capacity = achievability::separable_sum_capacity(sc);
  r.gaps = outerbound::gap_report(sc);
  r.verdict = make_verdict(r);
  return r;
}

namespace detail {

inline json split_json(const RateSplit& s) {
  return {{"r1p", s.r1p},   {"r1r", s.r1r}, {"r2cp", s.r2cp}, {"r2cpp", s.r2cpp},
          {"r2r", s.r2r},   {"r1", s.r1()}, {"r2", s.r2()}};
}

inline json achievable_json(const AchievableResult& a) {
  return {{"mode", std::string(to_string(a.mode))},
          {"sum_rate", a.sum_rate},
          {"xi", a.xi_star.xi},
          {"xi_bar", a.xi_star.xi_bar},
          {"split", split_json(a.split)}};
}

inline const char* term_name(int active) {
  switch (active) {
    case 0: return "T1 (relay-to-D1 + relay-to-D2 over worst-case-noise IC)";
    case 1: return "T2 (S1-relay cut + relay-to-D2 over worst-case-noise IC)";
    default: return "T3 (interference-free cut-set)";
  }
}

}  // namespace detail

inline json to_json(const AnalysisReport& r) {
  const auto& c = r.conditions;
  json j;
  j["scenario"] = scenario_to_json(r.scenario);
  j["regime"] = {{"weak_a12", r.flags.weak_a12},
                 {"bc_ordered", r.flags.bc_ordered},
                 {"strong_a21", r.flags.strong_a21},
                 {"a21_threshold", c.threshold}};
  j["separable"] = {{"applicable", c.applicable},
                    {"case", std::string(achievability::to_string(c.which))},
                    {"bc_condition", {{"lhs", c.bc_lhs}, {"rhs", c.bc_rhs}}},
                    {"mac_condition", {{"lhs", c.mac_lhs}, {"rhs", c.mac_rhs}, {"xi_star", c.xi_star}}},
                    {"failed", c.failed}};
  if (r.separable_capacity) j["separable"]["sum_capacity"] = r.separable_capacity->value;
  j["achievable"] = {detail::achievable_json(r.gaps.achievable_sr),
                     detail::achievable_json(r.gaps.achievable_if)};
  if (r.gaps.upper) {
    const auto& b = r.gaps.upper->breakdown;
    j["upper_bound"] = {{"value", r.gaps.upper->value},
                        {"xi", b.xi.xi},
                        {"t1", b.t1},
                        {"t2", b.t2},
                        {"t3", b.t3},
                        {"active", b.active + 1}};
    j["gap"] = {{"sr", r.gaps.gap_sr}, {"if", r.gaps.gap_if}};
  } else {
    j["upper_bound"] = {{"error", r.gaps.regime_error}};
  }
  j["capacity_established"] = r.gaps.capacity_established;
  j["verdict"] = r.verdict;
  return j;
}

inline void write_text(std::ostream& os, const AnalysisReport& r) {
  const auto f = format_number;
  const auto& c = r.conditions;
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  os << "Regime\n"
     << "  a12 <= 1                : " << yn(r.flags.weak_a12) << '\n'
     << "  c1 >= c2                : " << yn(r.flags.bc_ordered) << '\n'
     << "  a21 >= threshold        : " << yn(r.flags.strong_a21) << "  (threshold " << f(c.threshold)
     << ")\n";

  os << "Separable-coding conditions\n"
     << "  applicable              : " << yn(c.applicable) << '\n'
     << "  eta_mac C(b1^2 P1R) = " << f(c.bc_lhs) << "  vs  eta_bc C(c1^2 PR) = " << f(c.bc_rhs)
     << "  -> " << (c.bc_lhs >= c.bc_rhs ? ">=" : "<") << '\n'
     << "  eta_mac C(b2^2 P2R/(1+b1^2 P1R)) = " << f(c.mac_lhs)
     << "  vs  eta_bc C(c2^2 xi_bar* PR/(1+c2^2 xi* PR)) = " << f(c.mac_rhs) << "  (xi* = " << f(c.xi_star)
     << ")  -> " << (c.mac_lhs >= c.mac_rhs ? ">=" : "<") << '\n'
     << "  case                    : " << achievability::to_string(c.which) << '\n';
  if (r.separable_capacity) os << "  sum capacity            : " << f(r.separable_capacity->value) << '\n';
  for (const auto& why : c.failed) os << "  failed                  : " << why << '\n';

  for (const auto* a : {&r.gaps.achievable_sr, &r.gaps.achievable_if}) {
    const auto& s = a->split;
    os << "Achievable (" << to_string(a->mode) << ")\n"
       << "  sum rate                : " << f(a->sum_rate) << '\n'
       << "  xi*                     : " << f(a->xi_star.xi) << '\n'
       << "  split r1p r1r r2cp r2cpp r2r : " << f(s.r1p) << ' ' << f(s.r1r) << ' ' << f(s.r2cp) << ' '
       << f(s.r2cpp) << ' ' << f(s.r2r) << "  (R1 = " << f(s.r1()) << ", R2 = " << f(s.r2()) << ")\n";
  }

  os << "Outer bound\n";
  if (r.gaps.upper) {
    const auto& ub = *r.gaps.upper;
    os << "  value                   : " << f(ub.value) << "  at xi = " << f(ub.breakdown.xi.xi) << '\n'
       << "  T1 T2 T3                : " << f(ub.breakdown.t1) << ' ' << f(ub.breakdown.t2) << ' '
       << f(ub.breakdown.t3) << '\n'
       << "  active                  : " << detail::term_name(ub.breakdown.active) << '\n'
       << "  gap (SR, IF)            : " << f(r.gaps.gap_sr) << ' ' << f(r.gaps.gap_if) << '\n';
  } else {
    os << "  regime error            : " << r.gaps.regime_error << '\n';
  }
  os << "Verdict: " << r.verdict << '\n';
}

}  // namespace icobr::cli
