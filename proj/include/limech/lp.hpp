#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "limech/error.hpp"

namespace limech::optimize {

/// Linear program over the probability simplex: maximize objective . p
/// subject to the listed rows, p >= 0 and sum(p) = 1. The simplex membership
/// constraints are implicit and always enforced.
struct LinearProgram {
  int n_vars = 0;
  std::vector<double> objective;
  std::vector<std::pair<std::vector<double>, double>> leq;  // a . p <= b
  std::vector<std::pair<std::vector<double>, double>> eq;   // a . p == b
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double value = 0.0;
};

namespace detail {

constexpr double kCostTol = 1e-10;
constexpr double kPivotTol = 1e-11;
constexpr double kPhase1Tol = 1e-9;

/// Dense tableau with Bland's smallest-index rule for both the entering and
/// leaving choices. Deterministic and cycle-free; fine at this scale.
class SimplexTableau {
 public:
  SimplexTableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), t_(rows * cols, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * cols_ + c]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void drop_row(std::size_t r) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
             t_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    --rows_;
  }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c < cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      const double factor = at(r, pc);
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c < cols_; ++c) at(r, c) -= factor * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> t_;
};

}  // namespace detail

/// Two-phase primal simplex. Status optimal implies x is feasible and the
/// objective value equals objective . x.
inline LpSolution solve_lp(const LinearProgram& lp) {
  const int n = lp.n_vars;
  if (n <= 0) fail(errc::domain_error, "linear program needs at least one variable");
  if (static_cast<int>(lp.objective.size()) != n)
    fail(errc::domain_error, "objective length != n_vars");
  for (const auto& [a, b] : lp.leq)
    if (static_cast<int>(a.size()) != n) fail(errc::domain_error, "constraint row length != n_vars");
  for (const auto& [a, b] : lp.eq)
    if (static_cast<int>(a.size()) != n) fail(errc::domain_error, "constraint row length != n_vars");

  enum class Kind { le, ge, eq };
  struct Row {
    std::vector<double> a;
    double b;
    Kind kind;
  };
  std::vector<Row> rows;
  rows.reserve(lp.leq.size() + lp.eq.size() + 1);
  for (const auto& [a, b] : lp.leq) rows.push_back({a, b, Kind::le});
  for (const auto& [a, b] : lp.eq) rows.push_back({a, b, Kind::eq});
  rows.push_back({std::vector<double>(static_cast<std::size_t>(n), 1.0), 1.0, Kind::eq});

  // Normalize to nonnegative right-hand sides.
  for (auto& row : rows) {
    if (row.b < 0.0) {
      for (auto& v : row.a) v = -v;
      row.b = -row.b;
      if (row.kind == Kind::le)
        row.kind = Kind::ge;
      else if (row.kind == Kind::ge)
        row.kind = Kind::le;
    }
  }

  std::size_t n_slack = 0;
  std::size_t n_art = 0;
  for (const auto& row : rows) {
    if (row.kind != Kind::eq) ++n_slack;
    if (row.kind != Kind::le) ++n_art;
  }
  const std::size_t m = rows.size();
  const std::size_t n_cols = static_cast<std::size_t>(n) + n_slack + n_art;
  const std::size_t rhs = n_cols;
  const std::size_t art_begin = static_cast<std::size_t>(n) + n_slack;

  detail::SimplexTableau t(m + 1, n_cols + 1);  // last row holds reduced costs
  std::vector<std::size_t> basis(m);
  {
    std::size_t slack = static_cast<std::size_t>(n);
    std::size_t art = art_begin;
    for (std::size_t r = 0; r < m; ++r) {
      for (int j = 0; j < n; ++j) t.at(r, static_cast<std::size_t>(j)) = rows[r].a[static_cast<std::size_t>(j)];
      t.at(r, rhs) = rows[r].b;
      switch (rows[r].kind) {
        case Kind::le:
          t.at(r, slack) = 1.0;
          basis[r] = slack++;
          break;
        case Kind::ge:
          t.at(r, slack) = -1.0;
          ++slack;
          t.at(r, art) = 1.0;
          basis[r] = art++;
          break;
        case Kind::eq:
          t.at(r, art) = 1.0;
          basis[r] = art++;
          break;
      }
    }
  }

  const auto rebuild_costs = [&](const std::vector<double>& costs) {
    const std::size_t obj = t.rows() - 1;
    for (std::size_t c = 0; c <= n_cols; ++c) t.at(obj, c) = c < n_cols ? costs[c] : 0.0;
    for (std::size_t r = 0; r < t.rows() - 1; ++r) {
      const double cb = costs[basis[r]];
      if (cb == 0.0) continue;
      for (std::size_t c = 0; c <= n_cols; ++c) t.at(obj, c) -= cb * t.at(r, c);
    }
  };

  // Minimizes the cost row in place; returns false on an unbounded ray.
  const auto run_simplex = [&](bool allow_artificials) -> bool {
    const std::size_t obj = t.rows() - 1;
    const std::size_t col_limit = allow_artificials ? n_cols : art_begin;
    for (long iter = 0;; ++iter) {
      if (iter > 2'000'000) throw std::runtime_error("internal error: simplex did not terminate");
      std::size_t entering = n_cols;
      for (std::size_t c = 0; c < col_limit; ++c)
        if (t.at(obj, c) < -detail::kCostTol) {
          entering = c;
          break;  // Bland: smallest index
        }
      if (entering == n_cols) return true;

      double best_ratio = std::numeric_limits<double>::infinity();
      std::size_t leaving = t.rows();
      for (std::size_t r = 0; r < t.rows() - 1; ++r) {
        const double coef = t.at(r, entering);
        if (coef <= detail::kPivotTol) continue;
        const double ratio = t.at(r, rhs) / coef;
        if (ratio < best_ratio ||
            (ratio == best_ratio && leaving < t.rows() && basis[r] < basis[leaving])) {
          best_ratio = ratio;
          leaving = r;
        }
      }
      if (leaving == t.rows()) return false;
      t.pivot(leaving, entering);
      basis[leaving] = entering;
    }
  };

  // Phase 1: minimize the artificial mass.
  std::vector<double> phase1_costs(n_cols, 0.0);
  for (std::size_t c = art_begin; c < n_cols; ++c) phase1_costs[c] = 1.0;
  rebuild_costs(phase1_costs);
  run_simplex(true);
  double art_mass = 0.0;
  for (std::size_t r = 0; r < t.rows() - 1; ++r)
    if (basis[r] >= art_begin) art_mass += t.at(r, rhs);
  if (art_mass > detail::kPhase1Tol) return {LpStatus::infeasible, {}, 0.0};

  // Pivot remaining artificials out; rows with no real support are redundant.
  for (std::size_t r = 0; r < t.rows() - 1;) {
    if (basis[r] < art_begin) {
      ++r;
      continue;
    }
    std::size_t pc = n_cols;
    for (std::size_t c = 0; c < art_begin; ++c)
      if (std::fabs(t.at(r, c)) > detail::kPivotTol) {
        pc = c;
        break;
      }
    if (pc == n_cols) {
      t.drop_row(r);
      basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(r));
    } else {
      t.pivot(r, pc);
      basis[r] = pc;
      ++r;
    }
  }

  // Phase 2: maximize by minimizing the negated objective.
  std::vector<double> phase2_costs(n_cols, 0.0);
  for (int j = 0; j < n; ++j) phase2_costs[static_cast<std::size_t>(j)] = -lp.objective[static_cast<std::size_t>(j)];
  rebuild_costs(phase2_costs);
  if (!run_simplex(false)) return {LpStatus::unbounded, {}, 0.0};

  LpSolution sol;
  sol.status = LpStatus::optimal;
  sol.x.assign(static_cast<std::size_t>(n), 0.0);
  for (std::size_t r = 0; r < t.rows() - 1; ++r)
    if (basis[r] < static_cast<std::size_t>(n)) sol.x[basis[r]] = t.at(r, rhs);
  sol.value = 0.0;
  for (int j = 0; j < n; ++j) sol.value += lp.objective[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
  return sol;
}

}  // namespace limech::optimize
