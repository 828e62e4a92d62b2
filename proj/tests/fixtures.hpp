#pragma once

#include <cmath>

#include "icobr/channel.hpp"

namespace fixtures {

// Reference capacity written out independently of the library.
inline double cap(double snr) { return 0.5 * std::log(1.0 + snr) / std::log(2.0); }

/// b1=1, b2=10, c2=1, all powers 10, eta_mac = eta_bc = 1.
inline icobr::Scenario c1_sweep_base(double a21, double c1) {
  icobr::Scenario sc;
  sc.gains = {0.5, a21, 1.0, 10.0, c1, 1.0};
  sc.powers = {10, 10, 10, 10, 10};
  sc.bw = {2.0, 1.0, 1.0};
  return sc;
}

/// b2=2, c1=2, c2=0.3, a12=0.5, a21=1.8, all powers 10, eta = 1 split evenly.
inline icobr::Scenario bandwidth_base(double b1) {
  icobr::Scenario sc;
  sc.gains = {0.5, 1.8, b1, 2.0, 2.0, 0.3};
  sc.powers = {10, 10, 10, 10, 10};
  sc.bw = {1.0, 0.5, 0.5};
  return sc;
}

inline icobr::Scenario zero_relay(icobr::Scenario sc) {
  sc.powers.P1R = sc.powers.P2R = sc.powers.PR = 0.0;
  return sc;
}

}  // namespace fixtures
