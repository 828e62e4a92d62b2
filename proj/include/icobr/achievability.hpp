#pragma once

// Achievable rates of the rate-splitting / decode-and-forward scheme.
//
// S1 sends a private IC message (r1p) plus an independent relay message
// (r1r). S2 sends common IC messages split into r2cp, which it also sends to
// the relay for interference forwarding, and r2cpp (IC only), plus an
// independent relay message r2r. The scheme's rate region is a system of
// eight linear constraints on these five rates; projecting it onto
// (R1, R2) = (r1p + r1r, r2cp + r2cpp + r2r) gives the achievable region.

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "icobr/channel.hpp"
#include "icobr/error.hpp"
#include "icobr/numerics.hpp"
#include "icobr/regions.hpp"

namespace icobr {

enum class RelayMode { SignalRelayingOnly, InterferenceForwarding };

inline std::string_view to_string(RelayMode m) {
  return m == RelayMode::SignalRelayingOnly ? "SignalRelayingOnly" : "InterferenceForwarding";
}

struct RateSplit {
  double r1p = 0.0;    ///< S1 private, IC
  double r1r = 0.0;    ///< S1 independent, via relay
  double r2cp = 0.0;   ///< S2 common, IC and relay (interference forwarding)
  double r2cpp = 0.0;  ///< S2 common, IC only
  double r2r = 0.0;    ///< S2 independent, via relay

  double r1() const noexcept { return r1p + r1r; }
  double r2c() const noexcept { return r2cp + r2cpp; }
  double r2() const noexcept { return r2c() + r2r; }
  double sum() const noexcept { return r1() + r2(); }

  std::array<double, 5> as_array() const noexcept { return {r1p, r1r, r2cp, r2cpp, r2r}; }
};

struct AchievableResult {
  double sum_rate = 0.0;
  PowerSplit xi_star;
  RateSplit split;
  RelayMode mode = RelayMode::InterferenceForwarding;
};

namespace achievability {

/// Variable order of the scheme system.
inline const std::vector<std::string>& split_vars() {
  static const std::vector<std::string> v{"r1p", "r1r", "r2cp", "r2cpp", "r2r"};
  return v;
}

inline constexpr std::size_t kSchemeRows = 8;

/// Right-hand sides of the eight scheme constraints, in row order.
inline std::array<double, kSchemeRows> scheme_rhs(const CapacityTerms& t) {
  return {t.ic_d1_private, t.ic_d1_joint, t.ic_d2_noisy, t.mac_s1,
          t.mac_s2,        t.mac_sum,     t.bc_d1,       t.bc_d2};
}

/// Builds the eight rows over split_vars() for any right-hand-side type.
/// In SignalRelayingOnly mode r2cp is pinned to zero by an equality pair.
template <class Rhs>
regions::BasicLinearSystem<Rhs> build_scheme_system(const std::array<Rhs, kSchemeRows>& rhs,
                                                    RelayMode mode, const Rhs& zero) {
  regions::BasicLinearSystem<Rhs> sys(split_vars());
  sys.add({{"r1p", 1}}, rhs[0]);                              // D1 decodes its private message alone
  sys.add({{"r2cpp", 1}, {"r1p", 1}}, rhs[1]);                // D1 joint decoding with the common IC stream
  sys.add({{"r2cp", 1}, {"r2cpp", 1}}, rhs[2]);               // D2, S1 treated as noise
  sys.add({{"r1r", 1}}, rhs[3]);                              // MAC, S1 alone
  sys.add({{"r2cp", 1}, {"r2r", 1}}, rhs[4]);                 // MAC, S2 alone
  sys.add({{"r1r", 1}, {"r2cp", 1}, {"r2r", 1}}, rhs[5]);     // MAC sum
  sys.add({{"r2cp", 1}, {"r1r", 1}}, rhs[6]);                 // BC to D1
  sys.add({{"r2r", 1}}, rhs[7]);                              // BC to D2
  if (mode == RelayMode::SignalRelayingOnly) sys.add_equality({{"r2cp", 1}}, zero);
  return sys;
}

/// The eight scheme constraints (plus r2cp = 0 in SignalRelayingOnly mode).
inline regions::LinearRateSystem pre_fm_system(const Scenario& sc, const PowerSplit& xi,
                                               RelayMode mode = RelayMode::InterferenceForwarding) {
  sc.validate();
  xi.validate();
  return build_scheme_system(scheme_rhs(capacity_terms(sc, xi)), mode, 0.0);
}

/// The scheme system with R1, R2 appended and tied to the split by equalities.
inline regions::LinearRateSystem with_sum_rates(regions::LinearRateSystem sys) {
  sys.add_var("R1");
  sys.add_var("R2");
  sys.add_equality({{"R1", 1}, {"r1p", -1}, {"r1r", -1}}, 0.0);
  sys.add_equality({{"R2", 1}, {"r2cp", -1}, {"r2cpp", -1}, {"r2r", -1}}, 0.0);
  return sys;
}

/// FM projection of the scheme system onto (R1, R2).
inline regions::LinearRateSystem projected_region(const Scenario& sc, const PowerSplit& xi,
                                                  RelayMode mode = RelayMode::InterferenceForwarding) {
  return regions::project(with_sum_rates(pre_fm_system(sc, xi, mode)), {"R1", "R2"});
}

/// The four-row closed-form region over (R1, R2):
///   R1      <= C(P1) + eta_mac C(b1^2 P1R)
///   R2      <= C(P2/(1+a12^2 P1)) + BC_D2
///   R1 + R2 <= C(P1 + a21^2 P2) + BC_D1 + BC_D2
///   R1 + R2 <= C(P1 + a21^2 P2) + eta_mac C(b1^2 P1R + b2^2 P2R)
/// It contains the projected scheme region; the two coincide when the
/// relay links are not the bottleneck.
inline regions::LinearRateSystem closed_form_region(const Scenario& sc, const PowerSplit& xi) {
  sc.validate();
  xi.validate();
  const auto t = capacity_terms(sc, xi);
  regions::LinearRateSystem sys({"R1", "R2"});
  sys.add({{"R1", 1}}, t.ic_d1_private + t.mac_s1);
  sys.add({{"R2", 1}}, t.ic_d2_noisy + t.bc_d2);
  sys.add({{"R1", 1}, {"R2", 1}}, t.ic_d1_joint + t.bc_d1 + t.bc_d2);
  sys.add({{"R1", 1}, {"R2", 1}}, t.ic_d1_joint + t.mac_sum);
  return sys;
}

/// max r1 + r2 over the scheme system as a closed-form min over parameter
/// combinations, derived once per mode by symbolic Fourier-Motzkin.
inline const regions::CompiledMaximum& compiled_sum_rate(RelayMode mode) {
  auto compile = [](RelayMode m) {
    std::array<regions::SymbolicRhs, kSchemeRows> rhs;
    for (std::size_t k = 0; k < kSchemeRows; ++k) rhs[k] = regions::SymbolicRhs::unit(kSchemeRows, k);
    const auto sys = build_scheme_system(rhs, m, regions::SymbolicRhs(kSchemeRows));
    const std::array<double, 5> ones{1, 1, 1, 1, 1};
    return regions::compile_max_linear(sys, ones);
  };
  static const regions::CompiledMaximum sr = compile(RelayMode::SignalRelayingOnly);
  static const regions::CompiledMaximum inf = compile(RelayMode::InterferenceForwarding);
  return mode == RelayMode::SignalRelayingOnly ? sr : inf;
}

namespace detail {

/// Sum rate as a function of xi with the xi-independent terms evaluated once.
class XiObjective {
public:
  XiObjective(const Scenario& sc, RelayMode mode)
      : sc_(sc), base_(capacity_terms(sc, PowerSplit::full(0.0))), program_(&compiled_sum_rate(mode)) {}

  CapacityTerms terms(double xi) const {
    CapacityTerms t = base_;
    const auto& g = sc_.gains;
    const double PR = sc_.powers.PR;
    t.bc_d1 = sc_.bw.eta_bc * gaussian_capacity(g.c1 * g.c1 * xi * PR);
    t.bc_d2 = sc_.bw.eta_bc *
              gaussian_capacity(g.c2 * g.c2 * (1.0 - xi) * PR / (1.0 + g.c2 * g.c2 * xi * PR));
    return t;
  }

  double operator()(double xi) const {
    const auto rhs = scheme_rhs(terms(xi));
    return program_->evaluate(rhs);
  }

private:
  Scenario sc_;
  CapacityTerms base_;
  const regions::CompiledMaximum* program_;
};

}  // namespace detail

/// Maximum of r1 + r2 over the scheme system at a fixed power split.
inline double sum_rate_at(const Scenario& sc, const PowerSplit& xi, RelayMode mode) {
  sc.validate();
  xi.validate();
  const auto rhs = scheme_rhs(capacity_terms(sc, xi));
  return compiled_sum_rate(mode).evaluate(rhs);
}

/// Same value through a fresh numeric Fourier-Motzkin run.
inline double sum_rate_at_fm(const Scenario& sc, const PowerSplit& xi, RelayMode mode) {
  const std::array<double, 5> ones{1, 1, 1, 1, 1};
  return regions::max_linear(pre_fm_system(sc, xi, mode), ones);
}

/// Optimizer result of sum_rate_at over xi in [0, 1], xi_bar = 1 - xi.
inline numerics::OptResult optimize_xi(const Scenario& sc, RelayMode mode,
                                       numerics::ScalarSearchOptions opts = {}) {
  sc.validate();
  return numerics::maximize_scalar(detail::XiObjective(sc, mode), 0.0, 1.0, opts);
}

/// Among the maximizers of r1 + r2 at `xi`, the lexicographically largest
/// (r1p, r2cpp, r2r, r1r, r2cp).
inline RateSplit optimal_split(const Scenario& sc, const PowerSplit& xi, RelayMode mode) {
  constexpr double kTieSlack = 1e-11;
  auto sys = pre_fm_system(sc, xi, mode);
  const std::array<double, 5> ones{1, 1, 1, 1, 1};
  const double best = regions::max_linear(sys, ones);
  sys.add({-1.0, -1.0, -1.0, -1.0, -1.0}, -(best - kTieSlack));

  std::array<double, 5> values{};
  for (const std::size_t var : {0u, 3u, 4u, 1u, 2u}) {
    std::array<double, 5> e{};
    e[var] = 1.0;
    values[var] = regions::max_linear(sys, e);
    std::vector<double> row(5, 0.0);
    row[var] = -1.0;
    sys.add(std::move(row), -(values[var] - kTieSlack));
  }
  // The tie slack lets otherwise-zero components pick up ~1e-11.
  for (auto& v : values)
    if (std::abs(v) < 1e-9) v = 0.0;
  return {values[0], values[1], values[2], values[3], values[4]};
}

/// Maximizes the sum rate over the relay power split.
inline AchievableResult max_sum_rate(const Scenario& sc, RelayMode mode,
                                     numerics::ScalarSearchOptions opts = {}) {
  const auto opt = optimize_xi(sc, mode, opts);
  AchievableResult r;
  r.sum_rate = opt.f_star;
  r.xi_star = PowerSplit::full(opt.x_star);
  r.split = optimal_split(sc, r.xi_star, mode);
  r.mode = mode;
  return r;
}

// ---------------------------------------------------------------------------
// Separable-coding sum capacity (strong interference at D1).

enum class SeparableCase { BCBottleneck, MACBottleneck, None };

inline std::string_view to_string(SeparableCase c) {
  switch (c) {
    case SeparableCase::BCBottleneck: return "BCBottleneck";
    case SeparableCase::MACBottleneck: return "MACBottleneck";
    case SeparableCase::None: return "None";
  }
  return "None";
}

struct SeparableConditions {
  bool applicable = false;
  SeparableCase which = SeparableCase::None;
  RegimeFlags flags;
  double threshold = 0.0;   ///< strong-interference threshold on a21
  double bc_lhs = 0.0;      ///< eta_mac C(b1^2 P1R)
  double bc_rhs = 0.0;      ///< eta_bc C(c1^2 PR)
  double mac_lhs = 0.0;     ///< eta_mac C(b2^2 P2R / (1 + b1^2 P1R))
  double mac_rhs = 0.0;     ///< eta_bc C(c2^2 xi_bar* PR / (1 + c2^2 xi* PR))
  double xi_star = 0.0;     ///< maximizer of the MAC-bottleneck sum rate
  double mac_value = 0.0;   ///< that maximum
  std::vector<std::string> failed;
};

/// W + min(eta_mac C(b1^2 P1R), eta_bc C(c1^2 xi PR)) + eta_bc C(c2^2 xi_bar PR / (1 + c2^2 xi PR)).
inline numerics::OptResult mac_bottleneck_optimum(const Scenario& sc,
                                                  numerics::ScalarSearchOptions opts = {}) {
  const detail::XiObjective shape(sc, RelayMode::SignalRelayingOnly);
  const auto base = shape.terms(0.0);
  auto f = [&](double xi) {
    const auto t = shape.terms(xi);
    return base.ic_sum() + std::min(base.mac_s1, t.bc_d1) + t.bc_d2;
  };
  return numerics::maximize_scalar(f, 0.0, 1.0, opts);
}

/// Ties between the BC-side inequality's two sides classify as BCBottleneck.
inline SeparableConditions separable_conditions(const Scenario& sc) {
  sc.validate();
  SeparableConditions c;
  const auto& g = sc.gains;
  const auto& p = sc.powers;
  c.flags = regime_flags(sc);
  c.threshold = strong_interference_threshold(p.P1, g.a12);
  c.applicable = c.flags.all();
  if (!c.flags.weak_a12) c.failed.emplace_back("a12 <= 1");
  if (!c.flags.bc_ordered) c.failed.emplace_back("c1 >= c2");
  if (!c.flags.strong_a21) c.failed.emplace_back("a21 >= sqrt((1+P1)/(1+a12^2 P1))");

  const double b1p = g.b1 * g.b1 * p.P1R;
  c.bc_lhs = sc.bw.eta_mac * gaussian_capacity(b1p);
  c.bc_rhs = sc.bw.eta_bc * gaussian_capacity(g.c1 * g.c1 * p.PR);
  c.mac_lhs = sc.bw.eta_mac * gaussian_capacity(g.b2 * g.b2 * p.P2R / (1.0 + b1p));
  const auto opt = mac_bottleneck_optimum(sc);
  c.xi_star = opt.x_star;
  c.mac_value = opt.f_star;
  const double c2sq = g.c2 * g.c2;
  c.mac_rhs = sc.bw.eta_bc *
              gaussian_capacity(c2sq * (1.0 - c.xi_star) * p.PR / (1.0 + c2sq * c.xi_star * p.PR));

  if (!c.applicable) return c;
  if (c.bc_lhs >= c.bc_rhs) {
    c.which = SeparableCase::BCBottleneck;
  } else if (c.mac_lhs >= c.mac_rhs) {
    c.which = SeparableCase::MACBottleneck;
  } else {
    c.failed.emplace_back("eta_mac C(b2^2 P2R/(1+b1^2 P1R)) >= eta_bc C(c2^2 xi_bar* PR/(1+c2^2 xi* PR))");
  }
  return c;
}

struct SeparableCapacity {
  double value = 0.0;
  SeparableCase which = SeparableCase::None;
  double xi_star = 1.0;  ///< 1 in the BC-bottleneck case (all relay power towards D1)
};

/// Separable-coding sum capacity; PreconditionError when no case applies.
inline SeparableCapacity separable_sum_capacity(const Scenario& sc) {
  const auto c = separable_conditions(sc);
  switch (c.which) {
    case SeparableCase::BCBottleneck: {
      const auto t = capacity_terms(sc, PowerSplit::full(1.0));
      return {t.ic_sum() + t.bc_d1, c.which, 1.0};
    }
    case SeparableCase::MACBottleneck:
      return {c.mac_value, c.which, c.xi_star};
    case SeparableCase::None:
      break;
  }
  throw PreconditionError("separable sum-capacity conditions do not hold", c.failed);
}

/// Sum capacity in the limit b2, c1 -> infinity:
/// C(P1) + C(P2/(1+a12^2 P1)) + eta_mac C(b1^2 P1R) + eta_bc C(c2^2 PR).
inline double asymptotic_sum_capacity(const Scenario& sc) {
  sc.validate();
  const auto t = capacity_terms(sc, PowerSplit::full(0.0));
  return t.ic_sum() + t.mac_s1 + t.bc_d2;
}

}  // namespace achievability
}  // namespace icobr
