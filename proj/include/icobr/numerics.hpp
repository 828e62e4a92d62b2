#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>

#include "icobr/error.hpp"

namespace icobr::numerics {

struct OptResult {
  double x_star = 0.0;
  double f_star = 0.0;
  std::size_t evals = 0;
};

struct ScalarSearchOptions {
  std::size_t grid_n = 1001;
  double tol = 1e-9;
};

namespace detail {

template <class F>
double checked_eval(F& f, double x, std::size_t& evals) {
  const double v = f(x);
  ++evals;
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "maximize_scalar: objective is not finite at x = " << x;
    throw DomainError(msg.str());
  }
  return v;
}

}  // namespace detail

// Uniform grid of grid_n points on [lo, hi], then golden-section refinement
// inside the two grid cells around the best grid point until the bracket is
// narrower than tol. f need not be unimodal; the grid gives global coverage
// at resolution (hi - lo)/(grid_n - 1) and the refinement only needs the
// objective to be unimodal inside the winning bracket.
//
// Ties on the grid keep the first (leftmost) point; the result is the best
// point ever evaluated, so f_star >= max over the grid.
template <class F>
OptResult maximize_scalar(F&& f, double lo, double hi, std::size_t grid_n, double tol) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("maximize_scalar: need finite lo < hi");
  if (grid_n < 3) throw DomainError("maximize_scalar: grid_n must be >= 3");
  if (!(tol > 0.0)) throw DomainError("maximize_scalar: tol must be > 0");

  OptResult best;
  const double step = (hi - lo) / static_cast<double>(grid_n - 1);
  std::size_t best_i = 0;
  best.f_star = -INFINITY;
  for (std::size_t i = 0; i < grid_n; ++i) {
    const double x = (i + 1 == grid_n) ? hi : lo + step * static_cast<double>(i);
    const double v = detail::checked_eval(f, x, best.evals);
    if (v > best.f_star) {
      best.f_star = v;
      best.x_star = x;
      best_i = i;
    }
  }

  double a = best_i == 0 ? lo : lo + step * static_cast<double>(best_i - 1);
  double b = best_i + 1 >= grid_n ? hi : lo + step * static_cast<double>(best_i + 1);
  if (b > hi) b = hi;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = detail::checked_eval(f, c, best.evals);
  double fd = detail::checked_eval(f, d, best.evals);
  auto consider = [&best](double x, double v) {
    if (v > best.f_star) {
      best.f_star = v;
      best.x_star = x;
    }
  };
  consider(c, fc);
  consider(d, fd);

  while (b - a >= tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = detail::checked_eval(f, c, best.evals);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = detail::checked_eval(f, d, best.evals);
      consider(d, fd);
    }
  }
  return best;
}

template <class F>
OptResult maximize_scalar(F&& f, double lo, double hi, ScalarSearchOptions opts = {}) {
  return maximize_scalar(std::forward<F>(f), lo, hi, opts.grid_n, opts.tol);
}

}  // namespace icobr::numerics
