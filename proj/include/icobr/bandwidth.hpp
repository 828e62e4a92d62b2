#pragma once

// Relay-band allocation: choose eta_mac in [0, eta] (eta_bc = eta - eta_mac)
// to maximize an achievable sum rate or the outer bound. The inner xi search
// runs for every candidate allocation.

#include <string_view>
#include <variant>

#include "icobr/achievability.hpp"
#include "icobr/channel.hpp"
#include "icobr/error.hpp"
#include "icobr/numerics.hpp"
#include "icobr/outerbound.hpp"

namespace icobr::bandwidth {

enum class Objective { AchievableSR, AchievableIF, UpperBound };

inline std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::AchievableSR: return "AchievableSR";
    case Objective::AchievableIF: return "AchievableIF";
    case Objective::UpperBound: return "UpperBound";
  }
  return "";
}

struct BandwidthResult {
  double eta_mac_star = 0.0;
  double eta_bc_star = 0.0;
  double rate = 0.0;
  Objective objective = Objective::AchievableSR;
  std::variant<AchievableResult, outerbound::UpperBound> inner;

  double xi_star() const {
    if (const auto* a = std::get_if<AchievableResult>(&inner)) return a->xi_star.xi;
    return std::get<outerbound::UpperBound>(inner).breakdown.xi.xi;
  }
};

struct BandwidthOptions {
  numerics::ScalarSearchOptions outer{501, 1e-9};
  numerics::ScalarSearchOptions inner{};
};

/// Objective value at a fixed allocation (the function the outer search maximizes).
inline double rate_at_allocation(const Scenario& sc, double eta, double eta_mac, Objective obj,
                                 numerics::ScalarSearchOptions inner = {}) {
  const Scenario s = sc.with_bandwidth(eta, eta_mac);
  switch (obj) {
    case Objective::AchievableSR:
      return achievability::optimize_xi(s, RelayMode::SignalRelayingOnly, inner).f_star;
    case Objective::AchievableIF:
      return achievability::optimize_xi(s, RelayMode::InterferenceForwarding, inner).f_star;
    case Objective::UpperBound:
      return outerbound::sum_rate_upper_bound(s, inner).value;
  }
  return 0.0;
}

/// The scenario's own eta_mac/eta_bc are ignored.
inline BandwidthResult optimize_bandwidth(const Scenario& sc, double eta, Objective obj,
                                          BandwidthOptions opts = {}) {
  if (!std::isfinite(eta) || !(eta > 0.0)) throw ValidationError("eta", "must be > 0");
  const Scenario base = sc.with_bandwidth(eta, 0.0);
  base.validate();
  if (obj == Objective::UpperBound) outerbound::require_bound_regime(base);

  const auto opt = numerics::maximize_scalar(
      [&](double m) { return rate_at_allocation(base, eta, m, obj, opts.inner); }, 0.0, eta,
      opts.outer);

  BandwidthResult r;
  r.eta_mac_star = opt.x_star;
  r.eta_bc_star = eta - opt.x_star;
  r.objective = obj;
  const Scenario best = base.with_bandwidth(eta, opt.x_star);
  switch (obj) {
    case Objective::AchievableSR:
      r.inner = achievability::max_sum_rate(best, RelayMode::SignalRelayingOnly, opts.inner);
      r.rate = std::get<AchievableResult>(r.inner).sum_rate;
      break;
    case Objective::AchievableIF:
      r.inner = achievability::max_sum_rate(best, RelayMode::InterferenceForwarding, opts.inner);
      r.rate = std::get<AchievableResult>(r.inner).sum_rate;
      break;
    case Objective::UpperBound:
      r.inner = outerbound::sum_rate_upper_bound(best, opts.inner);
      r.rate = std::get<outerbound::UpperBound>(r.inner).value;
      break;
  }
  return r;
}

}  // namespace icobr::bandwidth
