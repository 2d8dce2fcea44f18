#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "limech/error.hpp"

namespace limech {

/// An undirected edge between two dataset indices (0-based, first < second).
using Edge = std::pair<int, int>;

/// Finite dataset space with a symmetric neighbor relation. Connected by
/// construction; immutable afterwards.
class NeighborhoodGraph {
 public:
  NeighborhoodGraph(std::vector<std::string> labels, const std::vector<Edge>& edge_pairs)
      : labels_(std::move(labels)) {
    if (labels_.size() < 2) fail(errc::too_few_datasets, "need at least 2 datasets");
    std::set<std::string> seen;
    for (const auto& l : labels_) {
      if (!seen.insert(l).second) fail(errc::duplicate_label, "duplicate dataset label '" + l + "'");
    }
    const int n = static_cast<int>(labels_.size());
    std::set<Edge> normalized;
    for (auto [i, k] : edge_pairs) {
      if (i == k) fail(errc::self_loop, "dataset " + std::to_string(i + 1) + " paired with itself");
      if (i < 0 || k < 0 || i >= n || k >= n)
        fail(errc::index_out_of_range, "edge endpoint out of range");
      normalized.insert({std::min(i, k), std::max(i, k)});
    }
    edges_.assign(normalized.begin(), normalized.end());
    check_connected();
  }

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Path graph d1 - d2 - ... - dn with labels "d1".."dn".
  static NeighborhoodGraph path(int n) {
    if (n < 2) fail(errc::too_few_datasets, "path graph needs at least 2 nodes");
    std::vector<std::string> labels;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) labels.push_back("d" + std::to_string(i + 1));
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    return NeighborhoodGraph(std::move(labels), edges);
  }

  /// Hypercube of bitstrings of length n; neighbors differ in exactly one bit.
  static NeighborhoodGraph hamming(int n) {
    if (n < 1) fail(errc::too_few_datasets, "hamming graph needs n >= 1");
    if (n > 20) fail(errc::size_limit_exceeded, "hamming graph capped at n = 20");
    const std::uint32_t count = 1u << n;
    std::vector<std::string> labels(count);
    for (std::uint32_t v = 0; v < count; ++v) {
      std::string bits(n, '0');
      for (int b = 0; b < n; ++b)
        if (v & (1u << (n - 1 - b))) bits[b] = '1';
      labels[v] = bits;
    }
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * count / 2);
    for (std::uint32_t v = 0; v < count; ++v)
      for (int b = 0; b < n; ++b) {
        const std::uint32_t w = v ^ (1u << b);
        if (v < w) edges.push_back({static_cast<int>(v), static_cast<int>(w)});
      }
    return NeighborhoodGraph(std::move(labels), edges);
  }

 private:
  void check_connected() const {
    const int n = size();
    std::vector<std::vector<int>> adj(n);
    for (auto [i, k] : edges_) {
      adj[i].push_back(k);
      adj[k].push_back(i);
    }
    std::vector<char> reached(n, 0);
    std::queue<int> frontier;
    frontier.push(0);
    reached[0] = 1;
    int count = 1;
    while (!frontier.empty()) {
      int v = frontier.front();
      frontier.pop();
      for (int w : adj[v])
        if (!reached[w]) {
          reached[w] = 1;
          ++count;
          frontier.push(w);
        }
    }
    if (count != n) {
      for (int v = 0; v < n; ++v)
        if (!reached[v])
          fail(errc::disconnected_graph, "dataset '" + labels_[v] + "' unreachable from '" + labels_[0] + "'");
    }
  }

  std::vector<std::string> labels_;
  std::vector<Edge> edges_;
};

inline NeighborhoodGraph build_graph(std::vector<std::string> labels, const std::vector<Edge>& edges) {
  return NeighborhoodGraph(std::move(labels), edges);
}

inline NeighborhoodGraph hamming_graph(int n) { return NeighborhoodGraph::hamming(n); }

/// Finite output space; at least two distinct labels.
class OutputAlphabet {
 public:
  explicit OutputAlphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2) fail(errc::too_few_values, "need at least 2 output values");
    std::set<std::string> seen;
    for (const auto& l : labels_) {
      if (!seen.insert(l).second) fail(errc::duplicate_label, "duplicate value label '" + l + "'");
    }
  }

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Values labeled "1".."k", matching the usual enumeration of a finite range.
  static OutputAlphabet numbered(int k) {
    if (k < 2) fail(errc::too_few_values, "alphabet needs at least 2 values");
    std::vector<std::string> labels;
    for (int i = 0; i < k; ++i) labels.push_back(std::to_string(i + 1));
    return OutputAlphabet(std::move(labels));
  }

 private:
  std::vector<std::string> labels_;
};

}  // namespace limech
