#pragma once

// Randomized cross-module invariant suite behind `icobr verify`.
//
// Scenarios: gains log-uniform in [0.1, 10] with a12 <= 1 and c1 >= c2,
// powers log-uniform in [0.1, 100], eta = 1 with eta_mac ~ U[0, 1].

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "icobr/achievability.hpp"
#include "icobr/bandwidth.hpp"
#include "icobr/channel.hpp"
#include "icobr/cli/config.hpp"
#include "icobr/outerbound.hpp"
#include "icobr/regions.hpp"
#include "icobr/testing/oracles.hpp"

namespace icobr::cli {

class ScenarioSampler {
public:
  explicit ScenarioSampler(std::uint64_t seed) : rng_(seed) {}

  /// Uniform on [0, 1) from the top 53 bits; identical on every platform.
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  Scenario scenario() {
    Scenario sc;
    auto& g = sc.gains;
    g.a12 = log_uniform(0.1, 1.0);
    g.a21 = log_uniform(0.1, 10.0);
    g.b1 = log_uniform(0.1, 10.0);
    g.b2 = log_uniform(0.1, 10.0);
    g.c1 = log_uniform(0.1, 10.0);
    g.c2 = log_uniform(0.1, 10.0);
    if (g.c1 < g.c2) std::swap(g.c1, g.c2);
    auto& p = sc.powers;
    p.P1 = log_uniform(0.1, 100.0);
    p.P2 = log_uniform(0.1, 100.0);
    p.P1R = log_uniform(0.1, 100.0);
    p.P2R = log_uniform(0.1, 100.0);
    p.PR = log_uniform(0.1, 100.0);
    sc.bw = BandwidthSplit::from_mac(1.0, uniform());
    return sc;
  }

  std::mt19937_64& engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

struct InvariantOutcome {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::string first_counterexample;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::size_t n_scenarios = 0;
  std::vector<InvariantOutcome> invariants;

  bool ok() const {
    for (const auto& i : invariants)
      if (i.failed > 0) return false;
    return true;
  }

  const InvariantOutcome* find(const std::string& name) const {
    for (const auto& i : invariants)
      if (i.name == name) return &i;
    return nullptr;
  }
};

/// Replaceable evaluation path, so a corrupted implementation can be fed in
/// as a negative control.
struct VerifyHooks {
  std::function<double(const Scenario&, RelayMode)> achievable = [](const Scenario& sc, RelayMode m) {
    return achievability::optimize_xi(sc, m).f_star;
  };
};

struct VerifyOptions {
  std::size_t region_grid = 30;      ///< per-axis grid for region comparisons
  std::size_t oracle_every = 10;     ///< split-oracle check on every k-th scenario
  std::size_t oracle_grid = 15;
  std::size_t bandwidth_every = 50;  ///< bandwidth checks on every k-th scenario
};

namespace inv {
inline constexpr const char* kChainRule = "capacity chain rule";
inline constexpr const char* kCapacityShape = "capacity increasing and concave";
inline constexpr const char* kThreshold = "strong-interference threshold in [1, sqrt(1+P1)]";
inline constexpr const char* kModeOrder = "signal relaying <= interference forwarding";
inline constexpr const char* kBelowBound = "achievable <= outer bound";
inline constexpr const char* kBelowAsymptotic = "achievable <= asymptotic sum capacity";
inline constexpr const char* kCompiledMatchesFm = "compiled sum rate equals FM max_linear";
inline constexpr const char* kOrderInvariance = "max_linear independent of elimination order";
inline constexpr const char* kProjectionInside = "projection inside closed-form region";
inline constexpr const char* kProjectionEqual = "projection equals closed-form region";
inline constexpr const char* kProjectionSound = "projection agrees with split-feasibility oracle";
inline constexpr const char* kSeparableMatch = "separable sum capacity matches scheme and bound";
inline constexpr const char* kAchievableMonotone = "achievable monotone in relay gains and powers";
inline constexpr const char* kBoundMonotone = "outer bound monotone in gains and powers";
inline constexpr const char* kBoundContinuity = "outer bound grid and refined maxima agree";
inline constexpr const char* kSplitConsistent = "optimal split feasible and sums to the sum rate";
inline constexpr const char* kDeterministic = "optimizer deterministic";
inline constexpr const char* kBandwidthDominates = "optimized allocation beats the even split";
inline constexpr const char* kBandwidthOrder = "optimized achievable <= optimized bound";
inline constexpr const char* kBandwidthReeval = "allocation re-evaluation reproduces the rate";
}  // namespace inv

namespace detail {

class Tally {
public:
  explicit Tally(std::vector<InvariantOutcome>& out) : out_(out) {}

  template <class Describe>
  void check(const char* name, bool ok, Describe&& describe) {
    auto& o = slot(name);
    ++o.checked;
    if (ok) return;
    if (o.failed++ == 0) o.first_counterexample = describe();
  }

  void declare(const char* name) { (void)slot(name); }

private:
  InvariantOutcome& slot(const char* name) {
    for (auto& o : out_)
      if (o.name == name) return o;
    out_.push_back({name, 0, 0, {}});
    return out_.back();
  }

  std::vector<InvariantOutcome>& out_;
};

inline std::string describe(const Scenario& sc, const std::string& extra) {
  return scenario_to_json(sc).dump() + " " + extra;
}

inline std::string num(double v) { return format_number(v); }

}  // namespace detail

inline VerifyReport run_verify(std::uint64_t seed, std::size_t n, const VerifyHooks& hooks = {},
                               const VerifyOptions& opts = {}) {
  using achievability::kSchemeRows;
  VerifyReport rep;
  rep.seed = seed;
  rep.n_scenarios = n;
  detail::Tally tally(rep.invariants);
  for (const char* name :
       {inv::kChainRule, inv::kCapacityShape, inv::kThreshold, inv::kModeOrder, inv::kBelowBound,
        inv::kBelowAsymptotic, inv::kCompiledMatchesFm, inv::kOrderInvariance, inv::kProjectionInside,
        inv::kProjectionEqual, inv::kProjectionSound, inv::kSeparableMatch, inv::kAchievableMonotone,
        inv::kBoundMonotone, inv::kBoundContinuity, inv::kSplitConsistent, inv::kDeterministic,
        inv::kBandwidthDominates, inv::kBandwidthOrder, inv::kBandwidthReeval})
    tally.declare(name);

  ScenarioSampler sampler(seed);
  const std::array<const char*, 7> relay_fields{"PR", "P1R", "P2R", "b1", "b2", "c1", "c2"};
  const std::array<const char*, 10> bound_fields{"a21", "b1", "b2", "c1", "c2",
                                                 "P1",  "P2", "P1R", "P2R", "PR"};
  const std::array<double, 5> ones{1, 1, 1, 1, 1};

  for (std::size_t i = 0; i < n; ++i) {
    const Scenario sc = sampler.scenario();
    const auto& g = sc.gains;
    const auto& p = sc.powers;
    using detail::describe;
    using detail::num;

    // Capacity function.
    {
      const double a = p.P1, b = p.P2;
      const double lhs = gaussian_capacity(a) + gaussian_capacity(b / (1.0 + a));
      const double rhs = gaussian_capacity(a + b);
      tally.check(inv::kChainRule, std::abs(lhs - rhs) <= 1e-12,
                  [&] { return "a=" + num(a) + " b=" + num(b); });
      const double x = p.P1R, h = 0.25 * x;
      const double c0 = gaussian_capacity(x - h), c1 = gaussian_capacity(x), c2 = gaussian_capacity(x + h);
      tally.check(inv::kCapacityShape, c0 < c1 && c1 < c2 && c0 + c2 < 2.0 * c1,
                  [&] { return "x=" + num(x); });
      const double th = strong_interference_threshold(p.P1, g.a12);
      tally.check(inv::kThreshold, th >= 1.0 - 1e-15 && th <= std::sqrt(1.0 + p.P1) + 1e-15,
                  [&] { return describe(sc, "threshold=" + num(th)); });
    }

    // Achievable rates and the bound.
    const double sr = hooks.achievable(sc, RelayMode::SignalRelayingOnly);
    const double inf = hooks.achievable(sc, RelayMode::InterferenceForwarding);
    const auto ub = outerbound::sum_rate_upper_bound(sc);
    tally.check(inv::kModeOrder, sr <= inf + 1e-9,
                [&] { return describe(sc, "SR=" + num(sr) + " IF=" + num(inf)); });
    tally.check(inv::kBelowBound, inf <= ub.value + 1e-9 && sr <= ub.value + 1e-9, [&] {
      return describe(sc, "SR=" + num(sr) + " IF=" + num(inf) + " UB=" + num(ub.value));
    });
    const double asym = achievability::asymptotic_sum_capacity(sc);
    tally.check(inv::kBelowAsymptotic, inf <= asym + 1e-9,
                [&] { return describe(sc, "IF=" + num(inf) + " asymptotic=" + num(asym)); });
    tally.check(inv::kBoundContinuity, std::abs(ub.value - ub.grid_max) < 1e-6, [&] {
      return describe(sc, "refined=" + num(ub.value) + " grid=" + num(ub.grid_max));
    });

    // Compiled objective against a fresh FM run, and elimination order.
    const double xi_probe = sampler.uniform();
    const auto probe = PowerSplit::full(xi_probe);
    for (auto mode : {RelayMode::SignalRelayingOnly, RelayMode::InterferenceForwarding}) {
      const double compiled = achievability::sum_rate_at(sc, probe, mode);
      const double fm = achievability::sum_rate_at_fm(sc, probe, mode);
      tally.check(inv::kCompiledMatchesFm, std::abs(compiled - fm) <= 1e-9, [&] {
        return describe(sc, "xi=" + num(xi_probe) + " compiled=" + num(compiled) + " fm=" + num(fm));
      });
    }
    {
      const auto sys = achievability::pre_fm_system(sc, probe);
      const std::vector<std::string> order(sys.vars().rbegin(), sys.vars().rend());
      const double greedy = regions::max_linear(sys, ones);
      const double reversed = regions::max_linear(sys, ones, order);
      tally.check(inv::kOrderInvariance, std::abs(greedy - reversed) <= 1e-9, [&] {
        return describe(sc, "xi=" + num(xi_probe) + " greedy=" + num(greedy) + " reversed=" + num(reversed));
      });
    }

    // Region geometry at the probe split.
    {
      const auto projected = achievability::projected_region(sc, probe);
      const auto closed = achievability::closed_form_region(sc, probe);
      std::array<double, 2> box{};
      for (std::size_t k = 0; k < 2; ++k) {
        std::array<double, 2> e{};
        e[k] = 1.0;
        box[k] = std::max(1e-6, 1.05 * regions::max_linear(closed, e));
      }
      const auto cmp = regions::compare_membership(projected, closed, box, opts.region_grid, 1e-9);
      auto where = [&] {
        return describe(sc, "xi=" + num(xi_probe) + " R1=" + num(cmp.first_counterexample.at(0)) +
                                " R2=" + num(cmp.first_counterexample.at(1)));
      };
      tally.check(inv::kProjectionInside, cmp.only_in_first == 0, where);
      tally.check(inv::kProjectionEqual, cmp.equivalent(), where);

      if (opts.oracle_every > 0 && i % opts.oracle_every == 0) {
        const auto rhs = achievability::scheme_rhs(capacity_terms(sc, probe));
        std::size_t bad = 0;
        std::array<double, 2> first{};
        for (std::size_t a = 0; a < opts.oracle_grid; ++a)
          for (std::size_t b = 0; b < opts.oracle_grid; ++b) {
            const double R1 = box[0] * a / (opts.oracle_grid - 1.0);
            const double R2 = box[1] * b / (opts.oracle_grid - 1.0);
            const std::array<double, 2> pt{R1, R2};
            const bool in_strict = regions::detail::within(projected, pt, -1e-9);
            const bool out_strict = !regions::detail::within(projected, pt, 1e-9);
            const bool oracle = oracles::split_feasible(rhs, RelayMode::InterferenceForwarding, R1, R2, 1e-12);
            if ((in_strict && !oracle) || (out_strict && oracle)) {
              if (bad++ == 0) first = pt;
            }
          }
        tally.check(inv::kProjectionSound, bad == 0, [&] {
          return describe(sc, "xi=" + num(xi_probe) + " R1=" + num(first[0]) + " R2=" + num(first[1]));
        });
      }
    }

    // Separable-coding capacity.
    {
      const auto cond = achievability::separable_conditions(sc);
      if (cond.which != achievability::SeparableCase::None) {
        const double cap = achievability::separable_sum_capacity(sc).value;
        tally.check(inv::kSeparableMatch,
                    std::abs(sr - cap) <= 1e-6 && std::abs(cap - ub.value) <= 1e-6, [&] {
                      return describe(sc, std::string(achievability::to_string(cond.which)) +
                                              " SR=" + num(sr) + " capacity=" + num(cap) +
                                              " UB=" + num(ub.value));
                    });
      }
    }

    // Monotonicity under one scaled-up parameter.
    {
      Scenario up = sc;
      const char* field = relay_fields[static_cast<std::size_t>(sampler.uniform() * relay_fields.size())];
      scalar_field(up, field) *= 1.0 + sampler.uniform();
      for (auto mode : {RelayMode::SignalRelayingOnly, RelayMode::InterferenceForwarding}) {
        const double before = mode == RelayMode::SignalRelayingOnly ? sr : inf;
        const double after = hooks.achievable(up, mode);
        tally.check(inv::kAchievableMonotone, after >= before - 1e-9, [&] {
          return describe(sc, std::string(field) + " scaled: " + num(before) + " -> " + num(after));
        });
      }
      Scenario up_b = sc;
      const char* bfield = bound_fields[static_cast<std::size_t>(sampler.uniform() * bound_fields.size())];
      scalar_field(up_b, bfield) *= 1.0 + sampler.uniform();
      if (up_b.gains.c2 > up_b.gains.c1) up_b.gains.c2 = up_b.gains.c1;
      const double after = outerbound::sum_rate_upper_bound(up_b).value;
      tally.check(inv::kBoundMonotone, after >= ub.value - 1e-9, [&] {
        return describe(sc, std::string(bfield) + " scaled: " + num(ub.value) + " -> " + num(after));
      });
    }

    // Optimal split and determinism.
    for (auto mode : {RelayMode::SignalRelayingOnly, RelayMode::InterferenceForwarding}) {
      const auto r = achievability::max_sum_rate(sc, mode);
      const auto sys = achievability::pre_fm_system(sc, r.xi_star, mode);
      const auto pt = r.split.as_array();
      const bool ok = std::abs(r.split.sum() - r.sum_rate) <= 1e-9 && regions::contains(sys, pt, 1e-9);
      tally.check(inv::kSplitConsistent, ok, [&] {
        return describe(sc, std::string(to_string(mode)) + " sum=" + num(r.sum_rate) +
                                " split sum=" + num(r.split.sum()));
      });
      const auto again = achievability::optimize_xi(sc, mode);
      tally.check(inv::kDeterministic, again.x_star == r.xi_star.xi && again.f_star == r.sum_rate,
                  [&] { return describe(sc, std::string(to_string(mode))); });
    }

    // Bandwidth allocation (subsampled: each call runs a nested search).
    if (opts.bandwidth_every > 0 && i % opts.bandwidth_every == 0) {
      using bandwidth::Objective;
      const auto a = bandwidth::optimize_bandwidth(sc, 1.0, Objective::AchievableSR);
      const auto u = bandwidth::optimize_bandwidth(sc, 1.0, Objective::UpperBound);
      const double even_a = bandwidth::rate_at_allocation(sc, 1.0, 0.5, Objective::AchievableSR);
      const double even_u = bandwidth::rate_at_allocation(sc, 1.0, 0.5, Objective::UpperBound);
      tally.check(inv::kBandwidthDominates, a.rate >= even_a - 1e-9 && u.rate >= even_u - 1e-9, [&] {
        return describe(sc, "SR " + num(a.rate) + " vs " + num(even_a) + ", UB " + num(u.rate) + " vs " +
                                num(even_u));
      });
      tally.check(inv::kBandwidthOrder, a.rate <= u.rate + 1e-9,
                  [&] { return describe(sc, "SR " + num(a.rate) + " UB " + num(u.rate)); });
      const double re = bandwidth::rate_at_allocation(sc, 1.0, a.eta_mac_star, Objective::AchievableSR);
      tally.check(inv::kBandwidthReeval, std::abs(re - a.rate) <= 1e-9,
                  [&] { return describe(sc, "rate " + num(a.rate) + " re-evaluated " + num(re)); });
    }
  }
  return rep;
}

inline void write_verify_report(std::ostream& os, const VerifyReport& rep) {
  os << "verify: seed " << rep.seed << ", " << rep.n_scenarios << " scenarios\n";
  for (const auto& i : rep.invariants) {
    os << (i.failed == 0 ? "  PASS  " : "  FAIL  ") << i.name << "  (" << i.checked - i.failed << "/"
       << i.checked << ")\n";
    if (i.failed > 0) os << "        first counterexample: " << i.first_counterexample << '\n';
  }
  os << (rep.ok() ? "all invariants hold\n" : "invariant failures detected\n");
}

}  // namespace icobr::cli
