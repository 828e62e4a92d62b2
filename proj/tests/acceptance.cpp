// Acceptance checks. Each criterion prints one PASS/FAIL line; `--only N`
// runs a single criterion. Exit status is nonzero when any selected one fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "icobr/achievability.hpp"
#include "icobr/bandwidth.hpp"
#include "icobr/cli/config.hpp"
#include "icobr/cli/region_dump.hpp"
#include "icobr/cli/verify.hpp"
#include "icobr/outerbound.hpp"
#include "icobr/regions.hpp"
#include "icobr/testing/oracles.hpp"

using namespace icobr;
constexpr auto SR = RelayMode::SignalRelayingOnly;
constexpr auto IF = RelayMode::InterferenceForwarding;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

cli::SweepSpec preset(const std::string& name) {
  return cli::sweep_from_json(cli::load_json_file(std::string(ICOBR_PRESET_DIR) + "/" + name));
}

Outcome threshold() {
  const double t = strong_interference_threshold(10.0, 0.5);
  const bool rounds = std::abs(std::round(t * 100.0) / 100.0 - 1.78) < 1e-12;
  return {rounds && std::abs(t - 1.772811) <= 1e-5,
          fmt("threshold(10, 0.5) = %.9f", t) + fmt(", |t - 1.772811| = %.2g", std::abs(t - 1.772811)) +
              fmt(", two-decimal rounding %.2f (expected 1.78)", std::round(t * 100.0) / 100.0)};
}

Outcome separable_certificate() {
  const auto spec = preset("c1_sweep_a21_1.8.json");
  double worst = 0.0;
  int none = 0;
  for (double c1 : spec.values) {
    Scenario sc = spec.base;
    cli::set_field(sc, spec.param, c1);
    const double sr = achievability::optimize_xi(sc, SR).f_star;
    const double ub = outerbound::sum_rate_upper_bound(sc).value;
    worst = std::max(worst, std::abs(sr - ub));
    if (achievability::separable_conditions(sc).which == achievability::SeparableCase::None) ++none;
  }
  return {worst <= 1e-6 && none == 0, std::to_string(spec.values.size()) + " c1 values, max |SR - UB| = " +
                                          fmt("%.3g", worst) + ", case None at " + std::to_string(none)};
}

Outcome forwarding_advantage() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"c1_sweep_a21_0.1.json", "c1_sweep_a21_0.9.json"}) {
    const auto spec = preset(name);
    std::vector<double> c1s, diff;
    for (double c1 : spec.values) {
      Scenario sc = spec.base;
      cli::set_field(sc, spec.param, c1);
      c1s.push_back(c1);
      diff.push_back(achievability::optimize_xi(sc, IF).f_star - achievability::optimize_xi(sc, SR).f_star);
    }
    const double mid = 0.5 * (c1s.front() + c1s.back());
    double min_diff = diff[0], min_step = INFINITY;
    for (std::size_t i = 0; i < diff.size(); ++i) {
      min_diff = std::min(min_diff, diff[i]);
      if (i > 0 && c1s[i - 1] >= mid - 1e-12) min_step = std::min(min_step, diff[i] - diff[i - 1]);
    }
    const bool here = min_diff >= -1e-9 && min_step > 1e-9;
    ok = ok && here;
    detail += std::string(detail.empty() ? "" : "; ") + name + ": min(IF-SR) = " + fmt("%.3g", min_diff) +
              ", min increment over c1 >= " + fmt("%g", mid) + " = " + fmt("%.3g", min_step) +
              ", IF-SR at c1=" + fmt("%g", c1s.back()) + " = " + fmt("%.4f", diff.back());
  }
  return {ok, detail};
}

Outcome asymptotic() {
  bool ok = true;
  std::string detail;
  for (double a21 : {0.1, 0.9, 1.8}) {
    auto spec = preset("c1_sweep_a21_0.9.json");
    Scenario sc = spec.base;
    sc.gains.a21 = a21;
    sc.gains.b2 = sc.gains.c1 = 1e4;
    const auto r = achievability::max_sum_rate(sc, IF);
    const double gap = std::abs(r.sum_rate - achievability::asymptotic_sum_capacity(sc));
    ok = ok && gap <= 1e-3 && r.xi_star.xi <= 1e-3;
    detail += std::string(detail.empty() ? "" : "; ") + "a21=" + fmt("%g", a21) + ": |IF - limit| = " + fmt("%.3g", gap) +
              ", xi* = " + fmt("%.3g", r.xi_star.xi);
  }
  return {ok, detail};
}

Outcome fm_equivalence() {
  cli::ScenarioSampler sampler(2024);
  std::size_t failing_pairs = 0, points = 0, disagreements = 0;
  std::string first;
  for (int i = 0; i < 100; ++i) {
    const auto sc = sampler.scenario();
    for (double x : {0.25, 0.5, 0.75}) {
      const auto xi = PowerSplit::full(x);
      const auto proj = achievability::projected_region(sc, xi);
      const auto closed = achievability::closed_form_region(sc, xi);
      const auto box = cli::region_grid_box(closed);
      const auto cmp = regions::compare_membership(proj, closed, box, 100, 1e-9);
      points += cmp.points;
      disagreements += cmp.disagreements();
      if (!cmp.equivalent()) {
        if (failing_pairs++ == 0)
          first = " (first: scenario " + std::to_string(i) + ", xi=" + fmt("%g", x) + ")";
      }
    }
  }
  return {disagreements == 0, std::to_string(failing_pairs) + " of 300 (scenario, xi) pairs differ, " +
                                  std::to_string(disagreements) + " of " + std::to_string(points) +
                                  " grid points" + first};
}

Outcome bound_dominance() {
  cli::ScenarioSampler sampler(7);
  int violations = 0;
  double worst = -INFINITY;
  for (int i = 0; i < 10000; ++i) {
    const auto sc = sampler.scenario();
    const double d = achievability::optimize_xi(sc, IF).f_star - outerbound::sum_rate_upper_bound(sc).value;
    worst = std::max(worst, d);
    if (d > 1e-9) ++violations;
  }
  return {violations == 0, "10000 scenarios, violations " + std::to_string(violations) +
                               ", max(IF - UB) = " + fmt("%.3g", worst)};
}

Outcome bandwidth_coincidence() {
  const auto spec = preset("b1_bandwidth_sweep.json");
  double worst_gap = 0.0, worst_balance = 0.0;
  int n = 0;
  for (double b1 : spec.values) {
    if (b1 < 2.0 - 1e-12) continue;
    ++n;
    Scenario sc = spec.base;
    cli::set_field(sc, spec.param, b1);
    const auto a = bandwidth::optimize_bandwidth(sc, spec.eta, bandwidth::Objective::AchievableSR);
    const auto u = bandwidth::optimize_bandwidth(sc, spec.eta, bandwidth::Objective::UpperBound);
    worst_gap = std::max(worst_gap, std::abs(a.rate - u.rate));
    const auto& g = sc.gains;
    const double s1r = a.eta_mac_star * gaussian_capacity(g.b1 * g.b1 * sc.powers.P1R);
    const double rd1 = a.eta_bc_star * gaussian_capacity(g.c1 * g.c1 * a.xi_star() * sc.powers.PR);
    worst_balance = std::max(worst_balance, std::abs(s1r - rd1));
  }
  return {worst_gap <= 1e-3 && worst_balance <= 1e-3,
          std::to_string(n) + " b1 values >= 2, max |SR - UB| = " + fmt("%.3g", worst_gap) +
              ", max link imbalance = " + fmt("%.3g", worst_balance)};
}

// A grid maximum can only undershoot the true maximum, so the optimizer fails
// when it falls more than 2e-6 below the grid. Where it lands above, the
// reported value is re-evaluated by a fresh elimination to confirm it is a
// genuine objective value.
Outcome optimizer_oracle() {
  cli::ScenarioSampler sampler(99);
  double worst_below = 0.0, most_above = 0.0;
  int above = 0;
  bool genuine = true;
  for (int i = 0; i < 50; ++i) {
    const auto sc = sampler.scenario();
    const auto r = achievability::max_sum_rate(sc, IF);
    const auto objective = achievability::detail::XiObjective(sc, IF);
    const auto [arg, best] = oracles::dense_grid_max(objective, 1000001);
    worst_below = std::max(worst_below, best - r.sum_rate);
    if (r.sum_rate - best > 2e-6) {
      ++above;
      most_above = std::max(most_above, r.sum_rate - best);
      genuine = genuine && std::abs(achievability::sum_rate_at_fm(sc, r.xi_star, IF) - r.sum_rate) <= 1e-12;
    }
  }
  return {worst_below <= 2e-6 && genuine,
          "50 scenarios, max(grid - optimizer) = " + fmt("%.3g", worst_below) + "; optimizer above grid by > 2e-6 in " +
              std::to_string(above) + " (max " + fmt("%.3g", most_above) + ", grid too coarse for the kink)"};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {"strong-interference threshold", threshold},
      {"separable signal relaying meets the outer bound (a21 = 1.8)", separable_certificate},
      {"interference forwarding advantage grows with c1", forwarding_advantage},
      {"asymptotic sum capacity for large b2, c1", asymptotic},
      {"projection equals the closed-form region", fm_equivalence},
      {"achievable never exceeds the outer bound", bound_dominance},
      {"optimized bandwidth: achievable meets bound and links balance", bandwidth_coincidence},
      {"xi optimizer agrees with a dense grid", optimizer_oracle},
  };
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--only") == 0) only = std::atoi(argv[i + 1]);
  if (only < 0 || only > static_cast<int>(all.size())) {
    std::fprintf(stderr, "--only expects 1..%zu\n", all.size());
    return 2;
  }

  int failed = 0;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (only && static_cast<int>(k) + 1 != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[k].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu: %s | %s | %.2f s\n", o.pass ? "PASS" : "FAIL", k + 1, all[k].name,
                o.detail.c_str(), secs);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
