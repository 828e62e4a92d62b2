#pragma once

// Region dumps: the scheme constraints, their projection onto (R1, R2) and
// the four-row closed form, plus a grid membership comparison of the last two.

#include <algorithm>
#include <array>
#include <ostream>

#include "icobr/achievability.hpp"
#include "icobr/cli/config.hpp"
#include "icobr/regions.hpp"

namespace icobr::cli {

struct RegionDump {
  regions::LinearRateSystem scheme;
  regions::LinearRateSystem projected;
  regions::LinearRateSystem closed_form;
  regions::MembershipComparison check;
  std::array<double, 2> grid_upper{};
  std::size_t per_axis = 0;
};

inline constexpr std::size_t kRegionGridPerAxis = 100;
inline constexpr double kRegionBoundaryTolerance = 1e-9;

/// Grid box [0, 1.05 * max R1] x [0, 1.05 * max R2] of the closed-form region.
inline std::array<double, 2> region_grid_box(const regions::LinearRateSystem& closed_form) {
  std::array<double, 2> upper{};
  for (std::size_t i = 0; i < 2; ++i) {
    std::array<double, 2> e{};
    e[i] = 1.0;
    upper[i] = 1.05 * regions::max_linear(closed_form, e);
    if (!(upper[i] > 0.0)) upper[i] = 1.0;
  }
  return upper;
}

inline RegionDump make_region_dump(const Scenario& sc, double xi, RelayMode mode,
                                   std::size_t per_axis = kRegionGridPerAxis) {
  const auto split = PowerSplit::full(xi);
  RegionDump d;
  d.scheme = achievability::pre_fm_system(sc, split, mode);
  d.projected = regions::project(achievability::with_sum_rates(d.scheme), {"R1", "R2"});
  d.closed_form = achievability::closed_form_region(sc, split);
  d.grid_upper = region_grid_box(d.closed_form);
  d.per_axis = per_axis;
  d.check = regions::compare_membership(d.projected, d.closed_form, d.grid_upper, per_axis,
                                        kRegionBoundaryTolerance);
  return d;
}

inline void write_region_dump(std::ostream& os, const RegionDump& d, double xi, RelayMode mode) {
  os << "# scheme constraints (" << to_string(mode) << ", xi = " << format_number(xi) << ")\n";
  regions::write_text(os, d.scheme);
  os << "# projection onto (R1, R2)\n";
  regions::write_text(os, d.projected);
  os << "# closed form\n";
  regions::write_text(os, d.closed_form);
  os << "# membership check on a " << d.per_axis << "x" << d.per_axis << " grid over [0, "
     << format_number(d.grid_upper[0]) << "] x [0, " << format_number(d.grid_upper[1]) << "]: ";
  if (d.check.equivalent()) {
    os << "equivalent\n";
  } else {
    os << "NOT equivalent, " << d.check.disagreements() << " of " << d.check.points
       << " points differ (" << d.check.only_in_first << " only in projection, " << d.check.only_in_second
       << " only in closed form; first at R1 = " << format_number(d.check.first_counterexample[0])
       << ", R2 = " << format_number(d.check.first_counterexample[1]) << ")\n";
  }
}

}  // namespace icobr::cli
