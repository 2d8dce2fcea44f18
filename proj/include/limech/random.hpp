#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "limech/error.hpp"
#include "limech/graph.hpp"
#include "limech/mechanism.hpp"

namespace limech {

/// Reproducible randomness. The generator is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard, and doubles are derived by an
/// explicit 53-bit mapping rather than std::uniform_real_distribution, whose
/// output is implementation-defined.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in {0, ..., n-1} via rejection, bias-free.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

/// Uniform point on the probability simplex via exponential spacings:
/// g_i = -log(1 - U_i) normalized by their sum.
inline std::vector<double> random_simplex_point(SeededRng& rng, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& v : g) {
    v = -std::log(1.0 - rng.next_unit());
    total += v;
  }
  for (auto& v : g) v /= total;
  return g;
}

inline IndependentMechanism random_independent(const NeighborhoodGraph& graph,
                                               const OutputAlphabet& alphabet, std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<double> rows;
  rows.reserve(static_cast<std::size_t>(graph.size()) * static_cast<std::size_t>(alphabet.size()));
  for (int i = 0; i < graph.size(); ++i) {
    auto r = random_simplex_point(rng, alphabet.size());
    rows.insert(rows.end(), r.begin(), r.end());
  }
  return IndependentMechanism(graph, alphabet, std::move(rows));
}

inline JointMechanism random_joint(const NeighborhoodGraph& graph, const OutputAlphabet& alphabet,
                                   std::uint64_t seed, std::size_t cap = kDefaultJointCap) {
  OutcomeIndexer idx(graph.size(), alphabet.size(), cap);
  SeededRng rng(seed);
  auto probs = random_simplex_point(rng, static_cast<int>(idx.total()));
  return JointMechanism(graph, alphabet, std::move(probs), cap);
}

}  // namespace limech
