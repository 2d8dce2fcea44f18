#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "limech/certify.hpp"
#include "limech/error.hpp"
#include "limech/lp.hpp"
#include "limech/mechanism.hpp"

namespace limech::optimize {

/// Optimum of the balanced binary instance restricted to independent
/// mechanisms, in closed form.
struct IndependentBinaryOptimum {
  double x_star = 0.0;
  double influence = 0.0;
  double utility = 0.0;
};

inline IndependentBinaryOptimum independent_binary_optimum(double epsilon, double delta) {
  PrivacyParams params(epsilon, delta);  // validates
  const double e = std::exp(params.epsilon);
  IndependentBinaryOptimum out;
  out.x_star = (e + delta) / (e + 1.0);
  out.influence = 1.0 - 2.0 * (1.0 - delta) * (e + delta) / ((e + 1.0) * (e + 1.0));
  out.utility = out.x_star;
  return out;
}

/// Same instance over all joint mechanisms, after also minimizing the
/// influence among utility-optimal solutions.
struct JointBinaryOptimum {
  double x_star = 0.0;  // Pr[M(d1)=1, M(d2)=2]
  double y_star = 0.0;  // Pr[M(d1)=2, M(d2)=1]
  double influence = 0.0;
  double utility = 0.0;
};

inline JointBinaryOptimum joint_binary_optimum(double epsilon, double delta) {
  PrivacyParams params(epsilon, delta);
  const double e = std::exp(params.epsilon);
  JointBinaryOptimum out;
  out.x_star = (e + 2.0 * delta - 1.0) / (e + 1.0);
  out.y_star = 0.0;
  out.influence = out.x_star;
  out.utility = (1.0 + out.x_star - out.y_star) / 2.0;
  return out;
}

/// Coefficient vector over outcome tuples selecting Pr[M(d_dataset) = value].
inline std::vector<double> marginal_indicator(const OutcomeIndexer& idx, int dataset, int value) {
  std::vector<double> c(idx.total(), 0.0);
  for (std::size_t t = 0; t < c.size(); ++t)
    if (idx.coordinate(t, dataset) == value) c[t] = 1.0;
  return c;
}

/// Coefficient vector selecting Pr[M(d_i) != M(d_k)].
inline std::vector<double> disagreement_indicator(const OutcomeIndexer& idx, int i, int k) {
  std::vector<double> c(idx.total(), 0.0);
  for (std::size_t t = 0; t < c.size(); ++t)
    if (idx.coordinate(t, i) != idx.coordinate(t, k)) c[t] = 1.0;
  return c;
}

/// Declarative form of the joint design problem: maximize a linear utility
/// under DP rows, an optional influence budget, and optional balance
/// equalities; optionally re-minimize the total influence afterwards.
struct JointLpSpec {
  std::vector<double> utility;
  double epsilon = 0.0;
  double delta = 0.0;
  std::optional<double> iota;
  std::vector<std::pair<std::vector<double>, double>> balance;
  bool lexicographic_min_influence = false;
};

namespace detail {

inline void add_dp_rows(LinearProgram& lp, const OutcomeIndexer& idx, const NeighborhoodGraph& graph,
                        double epsilon, double delta) {
  const double scale = std::exp(epsilon);
  const int nv = idx.n_values();
  const std::size_t total = idx.total();
  for (auto [i, k] : graph.edges()) {
    if (nv == 2) {
      // Binary alphabet: the four subset rows are the complete DP condition.
      for (int v = 0; v < 2; ++v) {
        std::vector<double> fwd(total, 0.0), bwd(total, 0.0);
        for (std::size_t t = 0; t < total; ++t) {
          const int vi = idx.coordinate(t, i);
          const int vk = idx.coordinate(t, k);
          if (vi == v) fwd[t] += 1.0;
          if (vk == v) fwd[t] -= scale;
          if (vk == v) bwd[t] += 1.0;
          if (vi == v) bwd[t] -= scale;
        }
        lp.leq.push_back({std::move(fwd), delta});
        lp.leq.push_back({std::move(bwd), delta});
      }
    } else {
      // Larger alphabets: per-value rows, refined against the full subset
      // condition after solving (see optimize_joint).
      for (int v = 0; v < nv; ++v) {
        std::vector<double> fwd(total, 0.0), bwd(total, 0.0);
        for (std::size_t t = 0; t < total; ++t) {
          const int vi = idx.coordinate(t, i);
          const int vk = idx.coordinate(t, k);
          if (vi == v) fwd[t] += 1.0;
          if (vk == v) fwd[t] -= scale;
          if (vk == v) bwd[t] += 1.0;
          if (vi == v) bwd[t] -= scale;
        }
        lp.leq.push_back({std::move(fwd), delta});
        lp.leq.push_back({std::move(bwd), delta});
      }
    }
  }
}

/// Subset row p(S) - e^eps q(S) <= delta for the worst subset of the ordered
/// marginal pair (from, to) at the given solution.
inline std::vector<double> violated_subset_row(const OutcomeIndexer& idx, int from, int to,
                                               const std::vector<double>& m_from,
                                               const std::vector<double>& m_to, double scale) {
  std::vector<double> row(idx.total(), 0.0);
  for (int v = 0; v < idx.n_values(); ++v) {
    if (m_from[static_cast<std::size_t>(v)] - scale * m_to[static_cast<std::size_t>(v)] <= 0.0) continue;
    for (std::size_t t = 0; t < idx.total(); ++t) {
      if (idx.coordinate(t, from) == v) row[t] += 1.0;
      if (idx.coordinate(t, to) == v) row[t] -= scale;
    }
  }
  return row;
}

inline JointMechanism mechanism_from_solution(const NeighborhoodGraph& graph,
                                              const OutputAlphabet& alphabet,
                                              std::vector<double> x, std::size_t cap) {
  for (auto& v : x) {
    if (v < 0.0 && v > -1e-9) v = 0.0;
    if (v > 1.0 && v < 1.0 + 1e-9) v = 1.0;
  }
  return JointMechanism(graph, alphabet, std::move(x), cap);
}

}  // namespace detail

/// Maximizes the utility over the joint simplex under DP (and optional
/// influence / balance) rows. With lexicographic_min_influence set, a second
/// stage re-minimizes the summed per-edge influence holding the utility at
/// its stage-1 optimum.
inline JointMechanism optimize_joint(const NeighborhoodGraph& graph, const OutputAlphabet& alphabet,
                                     const JointLpSpec& spec, std::size_t cap = kDefaultJointCap) {
  OutcomeIndexer idx(graph.size(), alphabet.size(), cap);
  PrivacyParams params(spec.epsilon, spec.delta);
  if (spec.utility.size() != idx.total()) fail(errc::domain_error, "utility length != |V|^|D|");

  LinearProgram lp;
  lp.n_vars = static_cast<int>(idx.total());
  lp.objective = spec.utility;
  detail::add_dp_rows(lp, idx, graph, params.epsilon, params.delta);
  if (spec.iota) {
    if (!(*spec.iota >= 0.0 && *spec.iota <= 1.0)) fail(errc::domain_error, "iota must be in [0,1]");
    for (auto [i, k] : graph.edges())
      lp.leq.push_back({disagreement_indicator(idx, i, k), *spec.iota});
  }
  lp.eq = spec.balance;

  const double scale = std::exp(params.epsilon);
  auto solve_refined = [&](LinearProgram& program) -> LpSolution {
    // Per-value rows under-approximate DP for |V| > 2; add the worst violated
    // subset row and re-solve until the solution certifies.
    for (int round = 0;; ++round) {
      LpSolution sol = solve_lp(program);
      if (sol.status != LpStatus::optimal || alphabet.size() == 2) return sol;
      JointMechanism candidate = detail::mechanism_from_solution(graph, alphabet, sol.x, cap);
      bool clean = true;
      for (auto [i, k] : graph.edges()) {
        const auto mi = marginal(candidate, i);
        const auto mk = marginal(candidate, k);
        if (certify::detail::hockey_stick_kernel(mi, mk, params.epsilon) > params.delta + 1e-9) {
          program.leq.push_back({detail::violated_subset_row(idx, i, k, mi, mk, scale), params.delta});
          clean = false;
        }
        if (certify::detail::hockey_stick_kernel(mk, mi, params.epsilon) > params.delta + 1e-9) {
          program.leq.push_back({detail::violated_subset_row(idx, k, i, mk, mi, scale), params.delta});
          clean = false;
        }
      }
      if (clean) return sol;
      if (round > (1 << alphabet.size())) fail(errc::infeasible, "subset refinement did not converge");
    }
  };

  LpSolution stage1 = solve_refined(lp);
  if (stage1.status == LpStatus::infeasible) fail(errc::infeasible, "joint design problem is infeasible");
  if (stage1.status == LpStatus::unbounded) fail(errc::unbounded, "joint design problem is unbounded");
  if (!spec.lexicographic_min_influence)
    return detail::mechanism_from_solution(graph, alphabet, std::move(stage1.x), cap);

  LinearProgram stage2 = lp;
  stage2.eq.push_back({spec.utility, stage1.value});
  std::vector<double> total_disagreement(idx.total(), 0.0);
  for (auto [i, k] : graph.edges()) {
    auto row = disagreement_indicator(idx, i, k);
    for (std::size_t t = 0; t < row.size(); ++t) total_disagreement[t] += row[t];
  }
  for (auto& v : total_disagreement) v = -v;  // minimize by maximizing the negation
  stage2.objective = std::move(total_disagreement);
  LpSolution refined = solve_refined(stage2);
  if (refined.status != LpStatus::optimal)
    fail(errc::infeasible, "influence minimization stage is infeasible");
  return detail::mechanism_from_solution(graph, alphabet, std::move(refined.x), cap);
}

/// The balanced binary instance as a 2-variable LP over (x, 1-x).
inline LinearProgram example_independent_lp(double epsilon, double delta) {
  PrivacyParams params(epsilon, delta);
  const double e = std::exp(params.epsilon);
  LinearProgram lp;
  lp.n_vars = 2;
  lp.objective = {1.0, 0.0};
  lp.leq.push_back({{1.0, -e}, delta});
  lp.leq.push_back({{-e, 1.0}, delta});
  return lp;
}

/// The balanced binary instance over joint mechanisms on a 2-node graph.
inline JointLpSpec example_joint_spec(double epsilon, double delta, bool lexicographic) {
  OutcomeIndexer idx(2, 2);
  JointLpSpec spec;
  spec.utility = marginal_indicator(idx, 0, 0);
  spec.epsilon = epsilon;
  spec.delta = delta;
  spec.lexicographic_min_influence = lexicographic;
  auto balance = marginal_indicator(idx, 0, 0);
  const auto other = marginal_indicator(idx, 1, 1);
  for (std::size_t t = 0; t < balance.size(); ++t) balance[t] -= other[t];
  spec.balance.push_back({std::move(balance), 0.0});
  return spec;
}

/// Independent mechanism realizing the example LP solution x.
inline IndependentMechanism balanced_binary_mechanism(double x) {
  return IndependentMechanism(NeighborhoodGraph::path(2), OutputAlphabet::numbered(2),
                              {x, 1.0 - x, 1.0 - x, x});
}

struct TradeoffRow {
  double utility = 0.0;
  double epsilon = 0.0;
  double independent_influence = 0.0;
  double joint_influence = 0.0;
};

/// Optimal (eps, 0)-DP frontier of the balanced binary instance as a function
/// of the target utility.
inline std::vector<TradeoffRow> tradeoff_curve(std::span<const double> u_grid) {
  std::vector<TradeoffRow> rows;
  rows.reserve(u_grid.size());
  for (double u : u_grid) {
    if (!(u > 0.5 && u < 1.0))
      fail(errc::domain_error, "utility " + std::to_string(u) + " outside (0.5, 1)");
    TradeoffRow row;
    row.utility = u;
    row.epsilon = std::log(u / (1.0 - u));
    row.independent_influence = 2.0 * u * u - 2.0 * u + 1.0;
    row.joint_influence = 2.0 * u - 1.0;
    rows.push_back(row);
  }
  return rows;
}

/// Evenly spaced utility grid, endpoints included.
inline std::vector<double> utility_grid(double from, double to, int points) {
  if (points < 1) fail(errc::domain_error, "need at least one grid point");
  if (points == 1 && from != to) fail(errc::domain_error, "single-point grid needs from == to");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    grid.push_back(points == 1 ? from : from + (to - from) * static_cast<double>(i) / (points - 1));
  return grid;
}

}  // namespace limech::optimize
