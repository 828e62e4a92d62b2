#pragma once

// Gaussian interference channel with a half-duplex out-of-band relay.
//
// Two pairs S1->D1, S2->D2 share the IC band:
//   Y1 = X1 + a21 X2 + Z1,   Y2 = X2 + a12 X1 + Z2
// and a relay R works in an orthogonal band split into a MAC phase
// (fraction eta_mac, R hears b1 X1R + b2 X2R + ZR) and a BC phase
// (fraction eta_bc, Di hears ci XR + ZRi). All noises have unit power;
// gains are amplitudes, powers are linear SNR. Rates are bits per IC use.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "icobr/error.hpp"

namespace icobr {

struct ChannelGains {
  double a12 = 0.0;  ///< S1 -> D2 (IC cross link)
  double a21 = 0.0;  ///< S2 -> D1 (IC cross link)
  double b1 = 0.0;   ///< S1 -> R (MAC phase)
  double b2 = 0.0;   ///< S2 -> R (MAC phase)
  double c1 = 0.0;   ///< R -> D1 (BC phase)
  double c2 = 0.0;   ///< R -> D2 (BC phase)
};

struct Powers {
  double P1 = 0.0;
  double P2 = 0.0;
  double P1R = 0.0;
  double P2R = 0.0;
  double PR = 0.0;
};

/// Relay-band channel uses per IC channel use, split by the half-duplex constraint.
struct BandwidthSplit {
  double eta = 0.0;
  double eta_mac = 0.0;
  double eta_bc = 0.0;

  static BandwidthSplit from_mac(double eta, double eta_mac) {
    return {eta, eta_mac, eta - eta_mac};
  }
};

inline constexpr double kBandwidthTolerance = 1e-12;

namespace detail {

inline void require_nonnegative(const char* field, double v) {
  if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
  if (v < 0.0) throw ValidationError(field, "must be >= 0");
}

}  // namespace detail

struct Scenario {
  ChannelGains gains;
  Powers powers;
  BandwidthSplit bw;

  /// Throws ValidationError naming the first offending field.
  void validate() const {
    using detail::require_nonnegative;
    require_nonnegative("a12", gains.a12);
    require_nonnegative("a21", gains.a21);
    require_nonnegative("b1", gains.b1);
    require_nonnegative("b2", gains.b2);
    require_nonnegative("c1", gains.c1);
    require_nonnegative("c2", gains.c2);
    require_nonnegative("P1", powers.P1);
    require_nonnegative("P2", powers.P2);
    require_nonnegative("P1R", powers.P1R);
    require_nonnegative("P2R", powers.P2R);
    require_nonnegative("PR", powers.PR);
    require_nonnegative("eta", bw.eta);
    require_nonnegative("eta_mac", bw.eta_mac);
    require_nonnegative("eta_bc", bw.eta_bc);
    const double slack = kBandwidthTolerance * std::max(1.0, bw.eta);
    if (std::abs(bw.eta_mac + bw.eta_bc - bw.eta) > slack)
      throw ValidationError("eta", "eta_mac + eta_bc must equal eta");
  }

  Scenario with_bandwidth(double eta, double eta_mac) const {
    Scenario out = *this;
    out.bw = BandwidthSplit::from_mac(eta, eta_mac);
    return out;
  }
};

/// Relay BC power split: xi of PR carries the D1-bound stream, xi_bar the D2-bound one.
struct PowerSplit {
  double xi = 0.0;
  double xi_bar = 1.0;

  static PowerSplit full(double xi) { return {xi, 1.0 - xi}; }

  void validate() const {
    if (!std::isfinite(xi) || !std::isfinite(xi_bar))
      throw ValidationError("xi", "must be finite");
    if (xi < 0.0) throw ValidationError("xi", "must be >= 0");
    if (xi_bar < 0.0) throw ValidationError("xi_bar", "must be >= 0");
    if (xi + xi_bar > 1.0 + 1e-12) throw ValidationError("xi", "xi + xi_bar must be <= 1");
  }
};

/// C(snr) = 1/2 log2(1 + snr).
inline double gaussian_capacity(double snr) {
  if (!std::isfinite(snr) || snr < 0.0)
    throw DomainError("gaussian_capacity: snr must be finite and >= 0");
  return 0.5 * std::log2(1.0 + snr);
}

/// a21 at or above this value puts D1 in the strong-interference regime.
inline double strong_interference_threshold(double P1, double a12) {
  if (!std::isfinite(P1) || P1 < 0.0)
    throw DomainError("strong_interference_threshold: P1 must be finite and >= 0");
  if (!std::isfinite(a12) || a12 < 0.0)
    throw DomainError("strong_interference_threshold: a12 must be finite and >= 0");
  return std::sqrt((1.0 + P1) / (1.0 + a12 * a12 * P1));
}

struct RegimeFlags {
  bool weak_a12 = false;    ///< a12 <= 1
  bool bc_ordered = false;  ///< c1 >= c2
  bool strong_a21 = false;  ///< a21 >= strong_interference_threshold(P1, a12)

  bool bound_valid() const noexcept { return weak_a12 && bc_ordered; }
  bool all() const noexcept { return weak_a12 && bc_ordered && strong_a21; }
};

inline RegimeFlags regime_flags(const Scenario& sc) {
  const auto& g = sc.gains;
  return {g.a12 <= 1.0, g.c1 >= g.c2,
          g.a21 >= strong_interference_threshold(sc.powers.P1, g.a12)};
}

/// Every single-letter capacity term that appears in the achievable scheme
/// and the outer bound, already scaled by the relay-band fractions.
struct CapacityTerms {
  double ic_d1_private = 0.0;  ///< C(P1)
  double ic_d1_joint = 0.0;    ///< C(P1 + a21^2 P2)
  double ic_d2_noisy = 0.0;    ///< C(P2 / (1 + a12^2 P1))
  double mac_s1 = 0.0;         ///< eta_mac C(b1^2 P1R)
  double mac_s2 = 0.0;         ///< eta_mac C(b2^2 P2R)
  double mac_sum = 0.0;        ///< eta_mac C(b1^2 P1R + b2^2 P2R)
  double bc_d1 = 0.0;          ///< eta_bc C(c1^2 xi PR)
  double bc_d2 = 0.0;          ///< eta_bc C(c2^2 xi_bar PR / (1 + c2^2 xi PR))

  /// Worst-case-noise sum bound on the IC alone.
  double ic_sum() const noexcept { return ic_d1_private + ic_d2_noisy; }
};

inline CapacityTerms capacity_terms(const Scenario& sc, const PowerSplit& split) {
  const auto& g = sc.gains;
  const auto& p = sc.powers;
  const auto& bw = sc.bw;
  const auto C = gaussian_capacity;
  const double b1p = g.b1 * g.b1 * p.P1R;
  const double b2p = g.b2 * g.b2 * p.P2R;
  const double c1p = g.c1 * g.c1 * split.xi * p.PR;
  const double c2_self = g.c2 * g.c2 * split.xi * p.PR;
  const double c2_own = g.c2 * g.c2 * split.xi_bar * p.PR;

  CapacityTerms t;
  t.ic_d1_private = C(p.P1);
  t.ic_d1_joint = C(p.P1 + g.a21 * g.a21 * p.P2);
  t.ic_d2_noisy = C(p.P2 / (1.0 + g.a12 * g.a12 * p.P1));
  t.mac_s1 = bw.eta_mac * C(b1p);
  t.mac_s2 = bw.eta_mac * C(b2p);
  t.mac_sum = bw.eta_mac * C(b1p + b2p);
  t.bc_d1 = bw.eta_bc * C(c1p);
  t.bc_d2 = bw.eta_bc * C(c2_own / (1.0 + c2_self));
  return t;
}

}  // namespace icobr
