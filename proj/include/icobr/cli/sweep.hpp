#pragma once

// Parameter sweeps: one CSV row per value of the swept field.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "icobr/achievability.hpp"
#include "icobr/bandwidth.hpp"
#include "icobr/cli/config.hpp"
#include "icobr/outerbound.hpp"

namespace icobr::cli {

/// Environment variable overriding the sweep worker count.
inline constexpr const char* kWorkersEnv = "ICOBR_WORKERS";

struct ObjectiveCell {
  std::optional<double> rate;
  std::optional<double> xi;
  std::optional<double> eta_mac;
  std::optional<double> eta_bc;
};

struct SweepRow {
  double value = 0.0;
  std::vector<ObjectiveCell> cells;  ///< aligned with SweepSpec::objectives
  std::string warning;
};

inline ObjectiveCell evaluate_objective(const Scenario& sc, bandwidth::Objective obj,
                                        bool optimize_bw, double eta) {
  using bandwidth::Objective;
  ObjectiveCell cell;
  if (optimize_bw) {
    const auto r = bandwidth::optimize_bandwidth(sc, eta, obj);
    cell.rate = r.rate;
    cell.xi = r.xi_star();
    cell.eta_mac = r.eta_mac_star;
    cell.eta_bc = r.eta_bc_star;
    return cell;
  }
  switch (obj) {
    case Objective::AchievableSR:
    case Objective::AchievableIF: {
      const auto mode = obj == Objective::AchievableSR ? RelayMode::SignalRelayingOnly
                                                       : RelayMode::InterferenceForwarding;
      const auto opt = achievability::optimize_xi(sc, mode);
      cell.rate = opt.f_star;
      cell.xi = opt.x_star;
      break;
    }
    case Objective::UpperBound: {
      const auto ub = outerbound::sum_rate_upper_bound(sc);
      cell.rate = ub.value;
      cell.xi = ub.breakdown.xi.xi;
      break;
    }
  }
  return cell;
}

/// Errors in one objective leave its cells empty and add a warning; the row continues.
inline SweepRow evaluate_row(const SweepSpec& spec, double value) {
  SweepRow row;
  row.value = value;
  row.cells.resize(spec.objectives.size());
  Scenario sc = spec.base;
  set_field(sc, spec.param, value);
  try {
    if (spec.optimize_bw) sc = sc.with_bandwidth(spec.eta, 0.5 * spec.eta);
    sc.validate();
  } catch (const Error& e) {
    row.warning = e.what();
    return row;
  }
  for (std::size_t k = 0; k < spec.objectives.size(); ++k) {
    try {
      row.cells[k] = evaluate_objective(sc, spec.objectives[k], spec.optimize_bw, spec.eta);
    } catch (const Error& e) {
      if (!row.warning.empty()) row.warning += "; ";
      row.warning += std::string(bandwidth::to_string(spec.objectives[k])) + ": " + e.what();
    }
  }
  return row;
}

inline unsigned resolve_workers(std::optional<unsigned> requested) {
  if (const char* env = std::getenv(kWorkersEnv)) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  if (requested && *requested > 0) return *requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Rows are computed independently, possibly concurrently, and returned in input order.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned workers = 1) {
  std::vector<SweepRow> rows(spec.values.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      try {
        rows[i] = evaluate_row(spec, spec.values[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(rows.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

/// Header: param, then per objective <name>_rate, <name>_xi (and
/// <name>_eta_mac, <name>_eta_bc when optimizing the allocation), then warning.
inline void write_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  os << spec.param;
  for (const auto o : spec.objectives) {
    const std::string n(bandwidth::to_string(o));
    os << ',' << n << "_rate," << n << "_xi";
    if (spec.optimize_bw) os << ',' << n << "_eta_mac," << n << "_eta_bc";
  }
  os << ",warning\n";
  auto cell = [&os](const std::optional<double>& v) {
    os << ',';
    if (v) os << format_number(*v);
  };
  for (const auto& r : rows) {
    os << format_number(r.value);
    for (const auto& c : r.cells) {
      cell(c.rate);
      cell(c.xi);
      if (spec.optimize_bw) {
        cell(c.eta_mac);
        cell(c.eta_bc);
      }
    }
    os << ',';
    if (!r.warning.empty()) {
      std::string w = r.warning;
      for (auto& ch : w)
        if (ch == '"') ch = '\'';
      os << '"' << w << '"';
    }
    os << '\n';
  }
}

}  // namespace icobr::cli
