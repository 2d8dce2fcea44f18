#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "limech/error.hpp"
#include "limech/graph.hpp"

namespace limech {

/// Row/total sums must match 1 within this tolerance. Inputs outside it are
/// rejected, never renormalized.
inline constexpr double kSumTolerance = 1e-9;

/// Hard cap on dense joint storage (|V|^|D| entries).
inline constexpr std::size_t kDefaultJointCap = 10'000'000;

/// Mixed-radix encoding of outcome tuples, dataset 1 most significant.
/// Tuples hold 0-based value indices.
class OutcomeIndexer {
 public:
  OutcomeIndexer(int n_datasets, int n_values, std::size_t cap = kDefaultJointCap)
      : n_datasets_(n_datasets), n_values_(n_values) {
    std::size_t total = 1;
    for (int i = 0; i < n_datasets_; ++i) {
      if (total > cap / static_cast<std::size_t>(n_values_))
        fail(errc::size_limit_exceeded,
             "joint outcome space exceeds cap of " + std::to_string(cap) + " entries");
      total *= static_cast<std::size_t>(n_values_);
    }
    total_ = total;
  }

  int n_datasets() const { return n_datasets_; }
  int n_values() const { return n_values_; }
  std::size_t total() const { return total_; }

  std::size_t index(std::span<const int> tuple) const {
    if (static_cast<int>(tuple.size()) != n_datasets_)
      fail(errc::index_out_of_range, "tuple length != number of datasets");
    std::size_t idx = 0;
    for (int v : tuple) {
      if (v < 0 || v >= n_values_) fail(errc::index_out_of_range, "value index out of range");
      idx = idx * static_cast<std::size_t>(n_values_) + static_cast<std::size_t>(v);
    }
    return idx;
  }

  std::vector<int> tuple(std::size_t index) const {
    if (index >= total_) fail(errc::index_out_of_range, "outcome index out of range");
    std::vector<int> t(static_cast<std::size_t>(n_datasets_));
    for (int i = n_datasets_ - 1; i >= 0; --i) {
      t[static_cast<std::size_t>(i)] = static_cast<int>(index % static_cast<std::size_t>(n_values_));
      index /= static_cast<std::size_t>(n_values_);
    }
    return t;
  }

  /// Value of coordinate `dataset` in the tuple encoded by `index`, without
  /// materializing the tuple.
  int coordinate(std::size_t index, int dataset) const {
    std::size_t divisor = 1;
    for (int i = n_datasets_ - 1; i > dataset; --i) divisor *= static_cast<std::size_t>(n_values_);
    return static_cast<int>((index / divisor) % static_cast<std::size_t>(n_values_));
  }

 private:
  int n_datasets_;
  int n_values_;
  std::size_t total_;
};

namespace detail {

inline void check_probability_entries(std::span<const double> values, const std::string& what) {
  for (double p : values)
    if (!(p >= 0.0 && p <= 1.0)) fail(errc::not_stochastic, what + " has entry outside [0,1]");
}

inline double sum(std::span<const double> values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

}  // namespace detail

/// Row-stochastic matrix M, one output distribution per dataset.
class IndependentMechanism {
 public:
  IndependentMechanism(NeighborhoodGraph graph, OutputAlphabet alphabet, std::vector<double> rows)
      : graph_(std::move(graph)), alphabet_(std::move(alphabet)), rows_(std::move(rows)) {
    const std::size_t expected =
        static_cast<std::size_t>(graph_.size()) * static_cast<std::size_t>(alphabet_.size());
    if (rows_.size() != expected) fail(errc::not_stochastic, "row matrix has wrong shape");
    for (int i = 0; i < graph_.size(); ++i) {
      auto r = row(i);
      detail::check_probability_entries(r, "row " + std::to_string(i + 1));
      const double s = detail::sum(r);
      if (std::fabs(s - 1.0) > kSumTolerance)
        fail(errc::not_stochastic,
             "row " + std::to_string(i + 1) + " sums to " + std::to_string(s) + ", not 1");
    }
  }

  const NeighborhoodGraph& graph() const { return graph_; }
  const OutputAlphabet& alphabet() const { return alphabet_; }
  int n_datasets() const { return graph_.size(); }
  int n_values() const { return alphabet_.size(); }

  std::span<const double> row(int i) const {
    if (i < 0 || i >= graph_.size()) fail(errc::index_out_of_range, "dataset index out of range");
    return {rows_.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(n_values()),
            static_cast<std::size_t>(n_values())};
  }

  const std::vector<double>& data() const { return rows_; }

 private:
  NeighborhoodGraph graph_;
  OutputAlphabet alphabet_;
  std::vector<double> rows_;  // row-major |D| x |V|
};

/// One distribution over all outcome tuples in V^|D|, stored densely in
/// mixed-radix order.
class JointMechanism {
 public:
  JointMechanism(NeighborhoodGraph graph, OutputAlphabet alphabet, std::vector<double> probs,
                 std::size_t cap = kDefaultJointCap)
      : graph_(std::move(graph)),
        alphabet_(std::move(alphabet)),
        indexer_(graph_.size(), alphabet_.size(), cap),
        probs_(std::move(probs)) {
    if (probs_.size() != indexer_.total()) fail(errc::not_stochastic, "joint vector has wrong length");
    detail::check_probability_entries(probs_, "joint vector");
    const double s = detail::sum(probs_);
    if (std::fabs(s - 1.0) > kSumTolerance)
      fail(errc::not_stochastic, "joint vector sums to " + std::to_string(s) + ", not 1");
  }

  const NeighborhoodGraph& graph() const { return graph_; }
  const OutputAlphabet& alphabet() const { return alphabet_; }
  const OutcomeIndexer& indexer() const { return indexer_; }
  int n_datasets() const { return graph_.size(); }
  int n_values() const { return alphabet_.size(); }
  const std::vector<double>& probs() const { return probs_; }

 private:
  NeighborhoodGraph graph_;
  OutputAlphabet alphabet_;
  OutcomeIndexer indexer_;
  std::vector<double> probs_;
};

/// Joint law of the outputs on one edge: Q[j][l] = Pr[M(d_i)=v_j, M(d_k)=v_l].
struct PairwiseJoint {
  int n_values = 0;
  std::vector<double> q;  // row-major |V| x |V|

  double operator()(int j, int l) const {
    return q[static_cast<std::size_t>(j) * static_cast<std::size_t>(n_values) +
             static_cast<std::size_t>(l)];
  }
};

/// Single-dataset output distribution of a joint mechanism.
inline std::vector<double> marginal(const JointMechanism& joint, int dataset) {
  const int n = joint.n_datasets();
  if (dataset < 0 || dataset >= n) fail(errc::index_out_of_range, "dataset index out of range");
  std::vector<double> m(static_cast<std::size_t>(joint.n_values()), 0.0);
  const auto& idx = joint.indexer();
  const auto& p = joint.probs();
  for (std::size_t t = 0; t < p.size(); ++t) m[static_cast<std::size_t>(idx.coordinate(t, dataset))] += p[t];
  return m;
}

inline PairwiseJoint pair_marginal(const JointMechanism& joint, int i, int k) {
  const int n = joint.n_datasets();
  if (i < 0 || i >= n || k < 0 || k >= n) fail(errc::index_out_of_range, "dataset index out of range");
  if (i == k) fail(errc::index_out_of_range, "pair marginal needs two distinct datasets");
  const int nv = joint.n_values();
  PairwiseJoint out;
  out.n_values = nv;
  out.q.assign(static_cast<std::size_t>(nv) * static_cast<std::size_t>(nv), 0.0);
  const auto& idx = joint.indexer();
  const auto& p = joint.probs();
  for (std::size_t t = 0; t < p.size(); ++t) {
    const int vi = idx.coordinate(t, i);
    const int vk = idx.coordinate(t, k);
    out.q[static_cast<std::size_t>(vi) * static_cast<std::size_t>(nv) + static_cast<std::size_t>(vk)] += p[t];
  }
  return out;
}

/// Lift a row-stochastic matrix onto the joint simplex: the product measure
/// of its rows.
inline JointMechanism embed_independent(const IndependentMechanism& ind,
                                        std::size_t cap = kDefaultJointCap) {
  OutcomeIndexer idx(ind.n_datasets(), ind.n_values(), cap);
  std::vector<double> probs(idx.total());
  std::vector<int> tuple(static_cast<std::size_t>(ind.n_datasets()), 0);
  for (std::size_t t = 0; t < probs.size(); ++t) {
    double prod = 1.0;
    for (int i = 0; i < ind.n_datasets(); ++i) prod *= ind.row(i)[static_cast<std::size_t>(tuple[static_cast<std::size_t>(i)])];
    probs[t] = prod;
    // mixed-radix increment, least significant digit last
    for (int i = ind.n_datasets() - 1; i >= 0; --i) {
      if (++tuple[static_cast<std::size_t>(i)] < ind.n_values()) break;
      tuple[static_cast<std::size_t>(i)] = 0;
    }
  }
  return JointMechanism(ind.graph(), ind.alphabet(), std::move(probs), cap);
}

/// True when every tuple probability factors into the product of the joint's
/// own marginals, entrywise within `tol`.
inline bool is_independent(const JointMechanism& joint, double tol) {
  std::vector<std::vector<double>> marginals;
  marginals.reserve(static_cast<std::size_t>(joint.n_datasets()));
  for (int i = 0; i < joint.n_datasets(); ++i) marginals.push_back(marginal(joint, i));
  const auto& p = joint.probs();
  std::vector<int> tuple(static_cast<std::size_t>(joint.n_datasets()), 0);
  for (std::size_t t = 0; t < p.size(); ++t) {
    double prod = 1.0;
    for (int i = 0; i < joint.n_datasets(); ++i)
      prod *= marginals[static_cast<std::size_t>(i)][static_cast<std::size_t>(tuple[static_cast<std::size_t>(i)])];
    if (std::fabs(p[t] - prod) > tol) return false;
    for (int i = joint.n_datasets() - 1; i >= 0; --i) {
      if (++tuple[static_cast<std::size_t>(i)] < joint.n_values()) break;
      tuple[static_cast<std::size_t>(i)] = 0;
    }
  }
  return true;
}

}  // namespace limech
