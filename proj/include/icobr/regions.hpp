#pragma once

// Rate regions as systems of linear inequalities  coeffs . x <= rhs,
// with Fourier-Motzkin projection, linear maximization and membership.
//
// Variables are nonnegative unless declared free. The right-hand side is a
// template parameter: `double` for ordinary numeric systems, SymbolicRhs for
// systems whose right-hand sides are nonnegative combinations of named
// parameters. Eliminating on a symbolic system yields the projection for every
// parameter value at once, which is how the sum-rate objective is compiled.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <locale>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "icobr/error.hpp"

namespace icobr::regions {

/// Zero test for coefficients during pairing and duplicate detection.
inline constexpr double kCoeffTolerance = 1e-12;

/// Right-hand side  sum_k weight[k] * param[k]. Parameters are assumed >= 0,
/// which is what makes componentwise weight comparison a valid dominance test.
class SymbolicRhs {
public:
  SymbolicRhs() = default;
  explicit SymbolicRhs(std::size_t n_params) : w_(n_params, 0.0) {}

  static SymbolicRhs unit(std::size_t n_params, std::size_t k) {
    SymbolicRhs r(n_params);
    r.w_.at(k) = 1.0;
    return r;
  }

  std::size_t size() const noexcept { return w_.size(); }
  const std::vector<double>& weights() const noexcept { return w_; }

  double evaluate(std::span<const double> params) const {
    if (params.size() != w_.size())
      throw DomainError("SymbolicRhs::evaluate: parameter count mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < w_.size(); ++k) s += w_[k] * params[k];
    return s;
  }

  bool all_nonnegative() const {
    return std::all_of(w_.begin(), w_.end(), [](double v) { return v >= -kCoeffTolerance; });
  }

  /// True when this <= other for every nonnegative parameter vector.
  bool dominated_by_or_equal(const SymbolicRhs& other) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] > other.w_[k] + kCoeffTolerance) return false;
    return true;
  }

  friend SymbolicRhs combine(const SymbolicRhs& a, double sa, const SymbolicRhs& b, double sb) {
    SymbolicRhs r(a.size());
    for (std::size_t k = 0; k < r.w_.size(); ++k) {
      const double v = sa * a.w_[k] + sb * b.w_[k];
      r.w_[k] = std::abs(v) < kCoeffTolerance ? 0.0 : v;
    }
    return r;
  }

  friend SymbolicRhs scaled(const SymbolicRhs& a, double s) {
    SymbolicRhs r = a;
    for (auto& v : r.w_) v *= s;
    return r;
  }

private:
  std::vector<double> w_;
};

inline double combine(double a, double sa, double b, double sb) { return sa * a + sb * b; }
inline double scaled(double a, double s) { return a * s; }

template <class Rhs>
struct BasicInequality {
  std::vector<double> coeffs;
  Rhs rhs;
};

/// A named term for building rows: {"r1p", 1.0}.
struct Term {
  std::string_view var;
  double coeff;
};

template <class Rhs>
class BasicLinearSystem {
public:
  using Row = BasicInequality<Rhs>;

  BasicLinearSystem() = default;

  explicit BasicLinearSystem(std::vector<std::string> vars)
      : vars_(std::move(vars)), nonneg_(vars_.size(), true) {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (vars_[i] == vars_[j]) throw ValidationError(vars_[i], "duplicate variable name");
  }

  std::size_t dim() const noexcept { return vars_.size(); }
  const std::vector<std::string>& vars() const noexcept { return vars_; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  bool nonnegative(std::size_t i) const { return nonneg_.at(i); }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return i;
    return std::nullopt;
  }

  std::size_t index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw ValidationError(std::string(name), "unknown variable");
  }

  /// Appends a variable (nonnegative unless `nonnegative` is false); existing rows get a 0 coefficient.
  std::size_t add_var(std::string name, bool nonnegative = true) {
    if (find(name)) throw ValidationError(name, "duplicate variable name");
    vars_.push_back(std::move(name));
    nonneg_.push_back(nonnegative);
    for (auto& r : rows_) r.coeffs.push_back(0.0);
    return vars_.size() - 1;
  }

  void add(std::vector<double> coeffs, Rhs rhs) {
    if (coeffs.size() != vars_.size())
      throw ValidationError("coeffs", "length must equal the number of variables");
    for (double c : coeffs)
      if (!std::isfinite(c)) throw ValidationError("coeffs", "must be finite");
    if constexpr (std::is_same_v<Rhs, double>) {
      if (!std::isfinite(rhs)) throw ValidationError("rhs", "must be finite");
    }
    rows_.push_back({std::move(coeffs), std::move(rhs)});
  }

  void add(std::initializer_list<Term> terms, Rhs rhs) { add(dense(terms), std::move(rhs)); }

  /// Equality as two opposing inequalities.
  void add_equality(std::initializer_list<Term> terms, const Rhs& rhs) {
    auto c = dense(terms);
    auto neg = c;
    for (auto& v : neg) v = -v;
    add(std::move(c), rhs);
    add(std::move(neg), scaled(rhs, -1.0));
  }

  // Internal mutation used by the elimination routines.
  std::vector<Row>& mutable_rows() noexcept { return rows_; }

  BasicLinearSystem without_var(std::size_t k) const {
    BasicLinearSystem out;
    out.vars_ = vars_;
    out.nonneg_ = nonneg_;
    out.vars_.erase(out.vars_.begin() + static_cast<std::ptrdiff_t>(k));
    out.nonneg_.erase(out.nonneg_.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
  }

private:
  std::vector<double> dense(std::initializer_list<Term> terms) const {
    std::vector<double> c(vars_.size(), 0.0);
    for (const auto& t : terms) c[index_of(t.var)] += t.coeff;
    return c;
  }

  std::vector<std::string> vars_;
  std::vector<bool> nonneg_;
  std::vector<Row> rows_;
};

using LinearRateSystem = BasicLinearSystem<double>;
using SymbolicSystem = BasicLinearSystem<SymbolicRhs>;

namespace detail {

inline bool same_coeffs(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > kCoeffTolerance) return false;
  return true;
}

inline bool all_zero(const std::vector<double>& c) {
  return std::all_of(c.begin(), c.end(), [](double v) { return std::abs(v) <= kCoeffTolerance; });
}

inline bool rhs_le(double a, double b) { return a <= b; }
inline bool rhs_le(const SymbolicRhs& a, const SymbolicRhs& b) { return a.dominated_by_or_equal(b); }

// All coefficients <= 0 and only on nonnegative variables: lhs <= 0 always.
template <class Rhs>
bool implied_by_sign(const BasicLinearSystem<Rhs>& sys, const std::vector<double>& c) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] > 0.0 || (c[i] < 0.0 && !sys.nonnegative(i))) return false;
  return true;
}

template <class Rhs>
Rhs zero_like(const BasicLinearSystem<Rhs>& sys) {
  if constexpr (std::is_same_v<Rhs, double>) {
    return 0.0;
  } else {
    return sys.rows().empty() ? SymbolicRhs{} : SymbolicRhs(sys.rows().front().rhs.size());
  }
}

template <class Rhs>
std::pair<std::size_t, std::size_t> sign_counts(const BasicLinearSystem<Rhs>& sys, std::size_t k) {
  std::size_t pos = 0, neg = sys.nonnegative(k) ? 1 : 0;
  for (const auto& r : sys.rows()) {
    if (r.coeffs[k] > kCoeffTolerance) ++pos;
    else if (r.coeffs[k] < -kCoeffTolerance) ++neg;
  }
  return {pos, neg};
}

}  // namespace detail

/// Syntactic cleanup: drops vacuous rows (including rows whose left side is
/// nonpositive by the sign constraints alone) and rows dominated by a row with the
/// same coefficients and a smaller right-hand side. A row 0 <= rhs with
/// rhs < 0 raises InfeasibleError. No LP-based redundancy test is attempted.
template <class Rhs>
BasicLinearSystem<Rhs> prune_redundant(const BasicLinearSystem<Rhs>& sys) {
  BasicLinearSystem<Rhs> out = sys;
  auto& rows = out.mutable_rows();
  std::vector<BasicInequality<Rhs>> kept;
  kept.reserve(rows.size());
  for (auto& r : rows) {
    if (detail::all_zero(r.coeffs)) {
      if constexpr (std::is_same_v<Rhs, double>) {
        if (r.rhs < -kCoeffTolerance) {
          std::ostringstream msg;
          msg << "infeasible row 0 <= " << r.rhs;
          throw InfeasibleError(msg.str());
        }
        continue;
      } else {
        // Nonnegative weights on nonnegative parameters are always satisfied.
        if (r.rhs.all_nonnegative()) continue;
      }
    }
    if (detail::implied_by_sign(out, r.coeffs)) {
      bool vacuous;
      if constexpr (std::is_same_v<Rhs, double>) vacuous = r.rhs >= 0.0;
      else vacuous = r.rhs.all_nonnegative();
      if (vacuous) continue;
    }
    bool dominated = false;
    for (auto& k : kept) {
      if (!detail::same_coeffs(k.coeffs, r.coeffs)) continue;
      if (detail::rhs_le(k.rhs, r.rhs)) {
        dominated = true;
        break;
      }
      if (detail::rhs_le(r.rhs, k.rhs)) {
        k.rhs = r.rhs;
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(std::move(r));
  }
  rows = std::move(kept);
  return out;
}

/// One Fourier-Motzkin step. Every (positive, negative) pair of rows in `var`
/// yields one combined row; rows without `var` carry over. Implicit
/// nonnegativity of `var` joins the negative side as -var <= 0. The result is
/// not pruned.
template <class Rhs>
BasicLinearSystem<Rhs> fm_eliminate(const BasicLinearSystem<Rhs>& sys, std::string_view var) {
  const std::size_t k = sys.index_of(var);
  std::vector<const BasicInequality<Rhs>*> pos, neg;
  auto out = sys.without_var(k);
  auto drop_k = [k](const std::vector<double>& c) {
    std::vector<double> r;
    r.reserve(c.size() - 1);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (i != k) r.push_back(c[i]);
    return r;
  };

  for (const auto& r : sys.rows()) {
    if (r.coeffs[k] > kCoeffTolerance) pos.push_back(&r);
    else if (r.coeffs[k] < -kCoeffTolerance) neg.push_back(&r);
    else out.add(drop_k(r.coeffs), r.rhs);
  }

  std::optional<BasicInequality<Rhs>> nonneg_row;
  if (sys.nonnegative(k)) {
    BasicInequality<Rhs> row{std::vector<double>(sys.dim(), 0.0), detail::zero_like(sys)};
    row.coeffs[k] = -1.0;
    nonneg_row = std::move(row);
    neg.push_back(&*nonneg_row);
  }

  for (const auto* p : pos) {
    const double sp = 1.0 / p->coeffs[k];
    for (const auto* n : neg) {
      const double sn = 1.0 / -n->coeffs[k];
      std::vector<double> c(sys.dim() - 1);
      for (std::size_t i = 0, j = 0; i < sys.dim(); ++i) {
        if (i == k) continue;
        const double v = sp * p->coeffs[i] + sn * n->coeffs[i];
        c[j++] = std::abs(v) < kCoeffTolerance ? 0.0 : v;
      }
      out.add(std::move(c), combine(p->rhs, sp, n->rhs, sn));
    }
  }
  return out;
}

/// Eliminates the variables of `order` one at a time, pruning after each step.
template <class Rhs>
BasicLinearSystem<Rhs> project_in_order(const BasicLinearSystem<Rhs>& sys,
                                        std::span<const std::string> order) {
  BasicLinearSystem<Rhs> cur = prune_redundant(sys);
  for (const auto& v : order) cur = prune_redundant(fm_eliminate(cur, v));
  return cur;
}

/// Projection onto `keep`. Variables are eliminated greedily, fewest
/// positive x negative pairings first (ties by declared order).
template <class Rhs>
BasicLinearSystem<Rhs> project(const BasicLinearSystem<Rhs>& sys,
                               std::span<const std::string> keep) {
  for (const auto& k : keep) (void)sys.index_of(k);
  auto kept = [&keep](const std::string& v) {
    return std::find(keep.begin(), keep.end(), v) != keep.end();
  };
  BasicLinearSystem<Rhs> cur = prune_redundant(sys);
  for (;;) {
    std::optional<std::size_t> pick;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < cur.dim(); ++i) {
      if (kept(cur.vars()[i])) continue;
      const auto [p, n] = detail::sign_counts(cur, i);
      if (p * n < best) {
        best = p * n;
        pick = i;
      }
    }
    if (!pick) return cur;
    const std::string name = cur.vars()[*pick];
    cur = prune_redundant(fm_eliminate(cur, name));
  }
}

template <class Rhs>
BasicLinearSystem<Rhs> project(const BasicLinearSystem<Rhs>& sys,
                               std::initializer_list<std::string> keep) {
  std::vector<std::string> k(keep);
  return project(sys, std::span<const std::string>(k));
}

inline constexpr std::string_view kObjectiveVar = "__objective";

namespace detail {

template <class Rhs>
BasicLinearSystem<Rhs> with_objective(const BasicLinearSystem<Rhs>& sys,
                                      std::span<const double> objective, const Rhs& zero) {
  if (objective.size() != sys.dim())
    throw ValidationError("objective", "length must equal the number of variables");
  BasicLinearSystem<Rhs> aug = sys;
  const std::size_t s = aug.add_var(std::string(kObjectiveVar), /*nonnegative=*/false);
  std::vector<double> up(aug.dim(), 0.0), down(aug.dim(), 0.0);
  for (std::size_t i = 0; i < objective.size(); ++i) {
    up[i] = -objective[i];
    down[i] = objective[i];
  }
  up[s] = 1.0;
  down[s] = -1.0;
  aug.add(std::move(up), zero);
  aug.add(std::move(down), zero);
  return aug;
}

template <class Rhs>
BasicLinearSystem<Rhs> project_objective(const BasicLinearSystem<Rhs>& aug,
                                         std::span<const std::string> order) {
  const std::vector<std::string> keep{std::string(kObjectiveVar)};
  if (order.empty()) return project(aug, std::span<const std::string>(keep));
  auto out = project_in_order(aug, order);
  if (out.dim() != 1) throw ValidationError("order", "must eliminate every original variable");
  return out;
}

}  // namespace detail

/// max objective . x over the system. The objective enters as a free variable
/// s with s = objective . x; after projecting onto s the answer is the
/// smallest upper bound on s. `order` optionally fixes the elimination order.
inline double max_linear(const LinearRateSystem& sys, std::span<const double> objective,
                         std::span<const std::string> order = {}) {
  const auto proj = detail::project_objective(detail::with_objective(sys, objective, 0.0), order);
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  for (const auto& r : proj.rows()) {
    const double c = r.coeffs[0];
    if (c > kCoeffTolerance) upper = std::min(upper, r.rhs / c);
    else if (c < -kCoeffTolerance) lower = std::max(lower, r.rhs / c);
  }
  if (!std::isfinite(upper)) throw UnboundedError("max_linear: objective is unbounded");
  if (lower > upper + 1e-9) throw InfeasibleError("max_linear: system is infeasible");
  return upper;
}

inline double max_linear(const LinearRateSystem& sys, std::initializer_list<double> objective) {
  std::vector<double> o(objective);
  return max_linear(sys, std::span<const double>(o));
}

/// max objective . x as a closed-form function of the parameters of a
/// symbolic system: the minimum over a fixed list of parameter combinations.
class CompiledMaximum {
public:
  CompiledMaximum() = default;
  CompiledMaximum(std::size_t n_params, std::vector<SymbolicRhs> upper,
                  std::vector<SymbolicRhs> lower, std::vector<SymbolicRhs> conditions)
      : n_params_(n_params),
        upper_(std::move(upper)),
        lower_(std::move(lower)),
        conditions_(std::move(conditions)) {}

  std::size_t param_count() const noexcept { return n_params_; }
  const std::vector<SymbolicRhs>& upper_bounds() const noexcept { return upper_; }

  /// Index of the binding upper bound and the maximum value.
  std::pair<std::size_t, double> evaluate_with_index(std::span<const double> params) const {
    if (params.size() != n_params_) throw DomainError("CompiledMaximum: parameter count mismatch");
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < upper_.size(); ++i) {
      const double v = upper_[i].evaluate(params);
      if (v < best) {
        best = v;
        arg = i;
      }
    }
    for (const auto& l : lower_)
      if (l.evaluate(params) > best + 1e-9) throw InfeasibleError("CompiledMaximum: infeasible");
    for (const auto& c : conditions_)
      if (c.evaluate(params) < -1e-9) throw InfeasibleError("CompiledMaximum: infeasible");
    return {arg, best};
  }

  double evaluate(std::span<const double> params) const {
    return evaluate_with_index(params).second;
  }

private:
  std::size_t n_params_ = 0;
  std::vector<SymbolicRhs> upper_, lower_, conditions_;
};

/// Runs the max_linear projection once on a symbolic system.
inline CompiledMaximum compile_max_linear(const SymbolicSystem& sys,
                                          std::span<const double> objective,
                                          std::span<const std::string> order = {}) {
  if (sys.rows().empty()) throw ValidationError("rows", "symbolic system needs at least one row");
  const std::size_t n = sys.rows().front().rhs.size();
  const auto proj =
      detail::project_objective(detail::with_objective(sys, objective, SymbolicRhs(n)), order);
  std::vector<SymbolicRhs> upper, lower, conditions;
  for (const auto& r : proj.rows()) {
    const double c = r.coeffs[0];
    if (c > kCoeffTolerance) upper.push_back(scaled(r.rhs, 1.0 / c));
    else if (c < -kCoeffTolerance) lower.push_back(scaled(r.rhs, 1.0 / c));
    else conditions.push_back(r.rhs);
  }
  if (upper.empty()) throw UnboundedError("compile_max_linear: objective is unbounded");
  return {n, std::move(upper), std::move(lower), std::move(conditions)};
}

/// Substitutes parameter values into a symbolic system.
inline LinearRateSystem instantiate(const SymbolicSystem& sys, std::span<const double> params) {
  LinearRateSystem out(sys.vars());
  for (const auto& r : sys.rows()) out.add(r.coeffs, r.rhs.evaluate(params));
  return out;
}

namespace detail {

// Negative slack demands strict interior membership by |slack|.
inline bool within(const LinearRateSystem& sys, std::span<const double> point, double slack) {
  for (std::size_t i = 0; i < point.size(); ++i)
    if (sys.nonnegative(i) && point[i] < -slack) return false;
  for (const auto& r : sys.rows()) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < point.size(); ++i) lhs += r.coeffs[i] * point[i];
    if (lhs > r.rhs + slack) return false;
  }
  return true;
}

}  // namespace detail

/// True iff every row and every nonnegativity constraint holds with `tol` slack.
inline bool contains(const LinearRateSystem& sys, std::span<const double> point, double tol) {
  if (point.size() != sys.dim())
    throw ValidationError("point", "length must equal the number of variables");
  if (!(tol >= 0.0)) throw DomainError("contains: tol must be >= 0");
  return detail::within(sys, point, tol);
}

inline bool contains(const LinearRateSystem& sys, std::initializer_list<double> point, double tol) {
  std::vector<double> p(point);
  return contains(sys, std::span<const double>(p), tol);
}

struct MembershipComparison {
  std::size_t points = 0;
  std::size_t only_in_first = 0;   ///< inside the first system by tol, outside the second by tol
  std::size_t only_in_second = 0;
  std::vector<double> first_counterexample;

  std::size_t disagreements() const noexcept { return only_in_first + only_in_second; }
  bool equivalent() const noexcept { return disagreements() == 0; }
};

/// Compares membership of two systems over the same variables on a uniform
/// grid of `per_axis` points per axis covering [0, upper[i]]. Points within
/// `tol` of either boundary never count as disagreements.
inline MembershipComparison compare_membership(const LinearRateSystem& first,
                                               const LinearRateSystem& second,
                                               std::span<const double> upper, std::size_t per_axis,
                                               double tol) {
  if (first.vars() != second.vars()) throw ValidationError("vars", "systems must share variables");
  if (upper.size() != first.dim()) throw ValidationError("upper", "one bound per variable");
  if (per_axis < 2) throw ValidationError("per_axis", "must be >= 2");
  MembershipComparison out;
  const std::size_t d = first.dim();
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> p(d, 0.0);
  for (;;) {
    for (std::size_t i = 0; i < d; ++i)
      p[i] = upper[i] * static_cast<double>(idx[i]) / static_cast<double>(per_axis - 1);
    ++out.points;
    const bool a_in = detail::within(first, p, -tol), a_out = !detail::within(first, p, tol);
    const bool b_in = detail::within(second, p, -tol), b_out = !detail::within(second, p, tol);
    if ((a_in && b_out) || (b_in && a_out)) {
      (a_in ? out.only_in_first : out.only_in_second)++;
      if (out.first_counterexample.empty()) out.first_counterexample = p;
    }
    std::size_t k = 0;
    while (k < d && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == d) break;
  }
  return out;
}

namespace detail {

inline std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // no "-0" from negated zero right-hand sides
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(9);
  os << v;
  return os.str();
}

}  // namespace detail

/// One row per line: `1*r1p + 1*r2cpp <= 1.72971581`. Zero terms are skipped.
inline void write_text(std::ostream& os, const LinearRateSystem& sys) {
  for (const auto& r : sys.rows()) {
    bool first = true;
    for (std::size_t i = 0; i < sys.dim(); ++i) {
      const double c = r.coeffs[i];
      if (std::abs(c) <= kCoeffTolerance) continue;
      if (first) os << detail::format_number(c) << '*' << sys.vars()[i];
      else os << (c < 0 ? " - " : " + ") << detail::format_number(std::abs(c)) << '*' << sys.vars()[i];
      first = false;
    }
    if (first) os << '0';
    os << " <= " << detail::format_number(r.rhs) << '\n';
  }
}

inline std::string to_text(const LinearRateSystem& sys) {
  std::ostringstream os;
  write_text(os, sys);
  return os.str();
}

}  // namespace icobr::regions
