#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "limech/error.hpp"
#include "limech/mechanism.hpp"

namespace limech {

/// Values within this distance of a row maximum count as tied with it when
/// forming argmax sets.
inline constexpr double kTieTolerance = 1e-9;

struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;

  PrivacyParams() = default;
  PrivacyParams(double eps, double del) : epsilon(eps), delta(del) {
    if (!(epsilon >= 0.0)) fail(errc::domain_error, "epsilon must be nonnegative");
    if (!(delta >= 0.0 && delta <= 1.0)) fail(errc::domain_error, "delta must be in [0,1]");
  }
};

namespace certify {

namespace detail {

/// Sum of positive parts of p_v - e^eps * q_v, accumulated in value order.
/// The subset-enumeration oracle must observe the same arithmetic, so keep
/// the per-value expression and the accumulation order in sync with it.
inline double hockey_stick_kernel(std::span<const double> p, std::span<const double> q,
                                  double epsilon) {
  const double scale = std::exp(epsilon);
  double total = 0.0;
  for (std::size_t v = 0; v < p.size(); ++v) {
    const double gap = p[v] - scale * q[v];
    if (gap > 0.0) total += gap;
  }
  return total;
}

/// Largest single-value gap p_v - e^eps * q_v, clamped at zero.
inline double value_gap_kernel(std::span<const double> p, std::span<const double> q,
                               double epsilon) {
  const double scale = std::exp(epsilon);
  double best = 0.0;
  for (std::size_t v = 0; v < p.size(); ++v) best = std::max(best, p[v] - scale * q[v]);
  return best;
}

inline void check_distribution(std::span<const double> p, const char* name) {
  double s = 0.0;
  for (double v : p) s += v;
  if (std::fabs(s - 1.0) > kSumTolerance)
    fail(errc::not_stochastic, std::string(name) + " does not sum to 1");
}

inline std::vector<std::vector<double>> dataset_marginals(const IndependentMechanism& mech) {
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(mech.n_datasets()));
  for (int i = 0; i < mech.n_datasets(); ++i) {
    auto r = mech.row(i);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

inline std::vector<std::vector<double>> dataset_marginals(const JointMechanism& mech) {
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(mech.n_datasets()));
  for (int i = 0; i < mech.n_datasets(); ++i) out.push_back(marginal(mech, i));
  return out;
}

}  // namespace detail

/// Tightest delta making (eps, delta)-DP hold for the ordered pair (p, q).
inline double hockey_stick(std::span<const double> p, std::span<const double> q, double epsilon) {
  if (p.size() != q.size()) fail(errc::alphabet_mismatch, "distributions on different alphabets");
  detail::check_distribution(p, "first distribution");
  detail::check_distribution(q, "second distribution");
  return detail::hockey_stick_kernel(p, q, epsilon);
}

struct EdgeValue {
  int i = 0;  // 0-based dataset indices, i < k
  int k = 0;
  double value = 0.0;
};

/// Per-edge values plus their maximum.
struct EdgeReport {
  std::vector<EdgeValue> per_edge;
  double overall = 0.0;
};

namespace detail {

template <typename EdgeFn>
EdgeReport per_edge_max(const NeighborhoodGraph& graph, EdgeFn&& fn) {
  EdgeReport report;
  report.per_edge.reserve(graph.edges().size());
  for (auto [i, k] : graph.edges()) {
    const double v = fn(i, k);
    report.per_edge.push_back({i, k, v});
    report.overall = std::max(report.overall, v);
  }
  return report;
}

inline EdgeReport tightest_delta_from_marginals(const NeighborhoodGraph& graph,
                                                const std::vector<std::vector<double>>& m,
                                                double epsilon) {
  return per_edge_max(graph, [&](int i, int k) {
    const auto& a = m[static_cast<std::size_t>(i)];
    const auto& b = m[static_cast<std::size_t>(k)];
    return std::max(hockey_stick_kernel(a, b, epsilon), hockey_stick_kernel(b, a, epsilon));
  });
}

inline EdgeReport vdp_delta_from_marginals(const NeighborhoodGraph& graph,
                                           const std::vector<std::vector<double>>& m,
                                           double epsilon) {
  return per_edge_max(graph, [&](int i, int k) {
    const auto& a = m[static_cast<std::size_t>(i)];
    const auto& b = m[static_cast<std::size_t>(k)];
    return std::max(value_gap_kernel(a, b, epsilon), value_gap_kernel(b, a, epsilon));
  });
}

}  // namespace detail

/// Tightest DP delta at the given epsilon, per edge and overall. The
/// mechanism is (eps, delta)-DP iff delta >= overall.
inline EdgeReport tightest_delta(const IndependentMechanism& mech, double epsilon) {
  return detail::tightest_delta_from_marginals(mech.graph(), detail::dataset_marginals(mech),
                                               epsilon);
}

inline EdgeReport tightest_delta(const JointMechanism& mech, double epsilon) {
  return detail::tightest_delta_from_marginals(mech.graph(), detail::dataset_marginals(mech),
                                               epsilon);
}

/// Tightest per-value (VDP) delta at the given epsilon.
inline EdgeReport vdp_tightest_delta(const IndependentMechanism& mech, double epsilon) {
  return detail::vdp_delta_from_marginals(mech.graph(), detail::dataset_marginals(mech), epsilon);
}

inline EdgeReport vdp_tightest_delta(const JointMechanism& mech, double epsilon) {
  return detail::vdp_delta_from_marginals(mech.graph(), detail::dataset_marginals(mech), epsilon);
}

struct VdpCheck {
  bool satisfied = false;
  double tightest_delta = 0.0;
};

template <typename Mechanism>
VdpCheck check_vdp(const Mechanism& mech, double epsilon, double delta) {
  const auto report = vdp_tightest_delta(mech, epsilon);
  return {delta >= report.overall, report.overall};
}

/// A VDP guarantee transfers to DP at the cost of an (|V|-1) factor on delta.
inline PrivacyParams vdp_to_dp(double epsilon, double delta, int alphabet_size) {
  if (alphabet_size < 2) fail(errc::too_few_values, "alphabet needs at least 2 values");
  return PrivacyParams(epsilon, std::min(1.0, delta * (alphabet_size - 1)));
}

/// DP parameters implied by an influence bound iota.
inline PrivacyParams li_to_dp_bound(double iota, int alphabet_size) {
  if (!(iota >= 0.0 && iota <= 1.0)) fail(errc::domain_error, "iota must be in [0,1]");
  if (alphabet_size < 2) fail(errc::too_few_values, "alphabet needs at least 2 values");
  return PrivacyParams(0.0, std::min(1.0, iota * (alphabet_size - 1)));
}

/// Pr[M(d_i) != M(d_k)] per edge. Independent mechanisms couple their outputs
/// independently, so the edge value is 1 - sum_j M_ij * M_kj.
inline EdgeReport influence(const IndependentMechanism& mech) {
  return detail::per_edge_max(mech.graph(), [&](int i, int k) {
    auto a = mech.row(i);
    auto b = mech.row(k);
    double agree = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) agree += a[j] * b[j];
    return 1.0 - agree;
  });
}

/// For a joint mechanism the edge value is the total mass of outcome tuples
/// whose coordinates i and k disagree.
inline EdgeReport influence(const JointMechanism& mech) {
  const auto& idx = mech.indexer();
  const auto& p = mech.probs();
  return detail::per_edge_max(mech.graph(), [&](int i, int k) {
    double mass = 0.0;
    for (std::size_t t = 0; t < p.size(); ++t)
      if (idx.coordinate(t, i) != idx.coordinate(t, k)) mass += p[t];
    return mass;
  });
}

/// Indices of values within tie_tol of the maximum, ascending.
inline std::vector<int> argmax_set(std::span<const double> dist, double tie_tol) {
  double best = dist[0];
  for (double v : dist) best = std::max(best, v);
  std::vector<int> set;
  for (std::size_t j = 0; j < dist.size(); ++j)
    if (dist[j] >= best - tie_tol) set.push_back(static_cast<int>(j));
  return set;
}

struct Witness {
  int i = 0;  // edge, 0-based
  int k = 0;
  int value = 0;  // a value in the symmetric difference of the argmax sets
};

struct Nontriviality {
  bool nontrivial = false;
  std::optional<Witness> witness;
};

namespace detail {

inline Nontriviality nontrivial_from_marginals(const NeighborhoodGraph& graph,
                                               const std::vector<std::vector<double>>& m,
                                               double tie_tol) {
  std::vector<std::vector<int>> sets;
  sets.reserve(m.size());
  for (const auto& dist : m) sets.push_back(argmax_set(dist, tie_tol));
  for (auto [i, k] : graph.edges()) {
    const auto& a = sets[static_cast<std::size_t>(i)];
    const auto& b = sets[static_cast<std::size_t>(k)];
    if (a == b) continue;
    std::vector<int> diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
    return {true, Witness{i, k, diff.front()}};
  }
  return {false, std::nullopt};
}

}  // namespace detail

/// A mechanism is nontrivial when the set of most likely outputs differs
/// across some edge. Ties within tie_tol are kept in the set.
inline Nontriviality is_nontrivial(const IndependentMechanism& mech,
                                   double tie_tol = kTieTolerance) {
  return detail::nontrivial_from_marginals(mech.graph(), detail::dataset_marginals(mech), tie_tol);
}

inline Nontriviality is_nontrivial(const JointMechanism& mech, double tie_tol = kTieTolerance) {
  return detail::nontrivial_from_marginals(mech.graph(), detail::dataset_marginals(mech), tie_tol);
}

/// Lower bounds on the influence of an independent mechanism. The first two
/// hold only for nontrivial mechanisms and are absent otherwise; the
/// max-probability bound holds unconditionally.
struct InfluenceBounds {
  std::optional<double> nontrivial_half;
  std::optional<double> nontrivial_square;
  double max_prob = 0.0;
};

inline InfluenceBounds influence_lower_bounds(const IndependentMechanism& mech,
                                              double tie_tol = kTieTolerance) {
  InfluenceBounds bounds;
  if (is_nontrivial(mech, tie_tol).nontrivial) {
    bounds.nontrivial_half = 0.5;
    const double v = static_cast<double>(mech.n_values());
    bounds.nontrivial_square = 1.0 / (v * v);
  }
  double min_max = 1.0;
  for (int i = 0; i < mech.n_datasets(); ++i) {
    auto r = mech.row(i);
    min_max = std::min(min_max, *std::max_element(r.begin(), r.end()));
  }
  bounds.max_prob = 1.0 - min_max;
  return bounds;
}

struct CertificateEdge {
  int i = 0;
  int k = 0;
  double delta = 0.0;
  double influence = 0.0;
};

/// Everything the checker knows about one mechanism at one epsilon.
struct CertificateReport {
  double epsilon = 0.0;
  std::vector<CertificateEdge> edges;
  double delta = 0.0;      // max over edges
  double influence = 0.0;  // max over edges
  bool nontrivial = false;
  std::optional<Witness> witness;
  std::optional<InfluenceBounds> bounds;  // independent mechanisms only
};

namespace detail {

template <typename Mechanism>
CertificateReport report_common(const Mechanism& mech, double epsilon, double tie_tol) {
  CertificateReport report;
  report.epsilon = epsilon;
  const auto deltas = tightest_delta(mech, epsilon);
  const auto infl = influence(mech);
  report.edges.reserve(deltas.per_edge.size());
  for (std::size_t e = 0; e < deltas.per_edge.size(); ++e)
    report.edges.push_back({deltas.per_edge[e].i, deltas.per_edge[e].k, deltas.per_edge[e].value,
                            infl.per_edge[e].value});
  report.delta = deltas.overall;
  report.influence = infl.overall;
  const auto nt = is_nontrivial(mech, tie_tol);
  report.nontrivial = nt.nontrivial;
  report.witness = nt.witness;
  return report;
}

}  // namespace detail

inline CertificateReport certify(const IndependentMechanism& mech, double epsilon,
                                 double tie_tol = kTieTolerance) {
  auto report = detail::report_common(mech, epsilon, tie_tol);
  report.bounds = influence_lower_bounds(mech, tie_tol);
  return report;
}

inline CertificateReport certify(const JointMechanism& mech, double epsilon,
                                 double tie_tol = kTieTolerance) {
  return detail::report_common(mech, epsilon, tie_tol);
}

}  // namespace certify
}  // namespace limech
