#pragma once

// Single-letter sum-rate upper bound for a12 <= 1, c1 >= c2.
//
// With W = C(P1) + C(P2/(1+a12^2 P1)) (worst-case-noise bound on the IC pair)
// and the relay BC split xi, three sum-rate combinations are valid:
//   T1 = W + eta_bc C(c1^2 xi PR) + eta_bc C(c2^2 xi_bar PR / (1 + c2^2 xi PR))
//   T2 = W + eta_mac C(b1^2 P1R)  + eta_bc C(c2^2 xi_bar PR / (1 + c2^2 xi PR))
//   T3 = C(P1) + C(P2) + eta_mac C(b1^2 P1R) + eta_mac C(b2^2 P2R)
// T1 pairs the D1 bound through the relay with the D2 bound, T2 replaces the
// relay-to-D1 term by the S1 cut-set term, T3 is the interference-free
// cut-set bound. The bound is max over xi of min{T1, T2, T3}.

#include <algorithm>
#include <array>
#include <optional>
#include <string>

#include "icobr/achievability.hpp"
#include "icobr/channel.hpp"
#include "icobr/error.hpp"
#include "icobr/numerics.hpp"

namespace icobr::outerbound {

struct BoundBreakdown {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  int active = 0;  ///< 0, 1, 2 for T1, T2, T3
  PowerSplit xi;

  double value() const noexcept { return std::min({t1, t2, t3}); }
};

inline void require_bound_regime(const Scenario& sc) {
  const auto f = regime_flags(sc);
  if (!f.weak_a12) throw RegimeError("outer bound requires a12 <= 1");
  if (!f.bc_ordered) throw RegimeError("outer bound requires c1 >= c2");
}

namespace detail {

inline BoundBreakdown assemble(const CapacityTerms& t, double cut_set, const PowerSplit& xi) {
  BoundBreakdown b;
  b.t1 = t.ic_sum() + t.bc_d1 + t.bc_d2;
  b.t2 = t.ic_sum() + t.mac_s1 + t.bc_d2;
  b.t3 = cut_set;
  b.xi = xi;
  const std::array<double, 3> v{b.t1, b.t2, b.t3};
  b.active = static_cast<int>(std::min_element(v.begin(), v.end()) - v.begin());
  return b;
}

inline double cut_set_term(const Scenario& sc, const CapacityTerms& t) {
  return gaussian_capacity(sc.powers.P1) + gaussian_capacity(sc.powers.P2) + t.mac_s1 + t.mac_s2;
}

}  // namespace detail

inline BoundBreakdown bound_terms(const Scenario& sc, const PowerSplit& xi) {
  sc.validate();
  xi.validate();
  require_bound_regime(sc);
  const auto t = capacity_terms(sc, xi);
  return detail::assemble(t, detail::cut_set_term(sc, t), xi);
}

struct UpperBound {
  double value = 0.0;
  BoundBreakdown breakdown;  ///< at the maximizing xi
  double grid_max = 0.0;     ///< best value on the optimizer's initial grid
};

inline UpperBound sum_rate_upper_bound(const Scenario& sc, numerics::ScalarSearchOptions opts = {}) {
  sc.validate();
  require_bound_regime(sc);
  const achievability::detail::XiObjective shape(sc, RelayMode::InterferenceForwarding);
  const double cut_set = detail::cut_set_term(sc, shape.terms(0.0));
  auto f = [&](double xi) {
    return detail::assemble(shape.terms(xi), cut_set, PowerSplit::full(xi)).value();
  };

  // Grid maximum recorded separately for the continuity check.
  double grid_max = -1.0;
  std::size_t calls = 0;
  auto tracking = [&](double xi) {
    const double v = f(xi);
    if (calls++ < opts.grid_n) grid_max = std::max(grid_max, v);
    return v;
  };
  const auto opt = numerics::maximize_scalar(tracking, 0.0, 1.0, opts);

  UpperBound ub;
  ub.value = opt.f_star;
  ub.breakdown = detail::assemble(shape.terms(opt.x_star), cut_set, PowerSplit::full(opt.x_star));
  ub.grid_max = grid_max;
  return ub;
}

struct GapReport {
  AchievableResult achievable_sr;
  AchievableResult achievable_if;
  std::optional<UpperBound> upper;
  std::string regime_error;  ///< set when the bound is not defined for this scenario
  double gap_sr = 0.0;
  double gap_if = 0.0;
  bool capacity_established = false;
};

inline constexpr double kCapacityGapTolerance = 1e-6;

inline GapReport gap_report(const Scenario& sc) {
  sc.validate();
  GapReport r;
  r.achievable_sr = achievability::max_sum_rate(sc, RelayMode::SignalRelayingOnly);
  r.achievable_if = achievability::max_sum_rate(sc, RelayMode::InterferenceForwarding);
  try {
    r.upper = sum_rate_upper_bound(sc);
  } catch (const RegimeError& e) {
    r.regime_error = e.what();
    return r;
  }
  r.gap_sr = r.upper->value - r.achievable_sr.sum_rate;
  r.gap_if = r.upper->value - r.achievable_if.sum_rate;
  r.capacity_established = std::min(r.gap_sr, r.gap_if) <= kCapacityGapTolerance;
  return r;
}

}  // namespace icobr::outerbound
