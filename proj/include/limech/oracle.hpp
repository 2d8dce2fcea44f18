#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "limech/certify.hpp"
#include "limech/error.hpp"
#include "limech/mechanism.hpp"
#include "limech/random.hpp"

namespace limech::oracle {

/// Ground truth for the hockey-stick shortcut: maximize p(S) - e^eps q(S)
/// over all 2^|V| subsets, clamped at zero. Sums run in ascending value
/// order so the result is bit-identical to the shortcut.
inline double dp_subset_oracle(std::span<const double> p, std::span<const double> q,
                               double epsilon) {
  if (p.size() != q.size()) fail(errc::alphabet_mismatch, "distributions on different alphabets");
  if (p.size() > 20) fail(errc::size_limit_exceeded, "subset enumeration capped at 20 values");
  const double scale = std::exp(epsilon);
  const std::uint32_t n = static_cast<std::uint32_t>(p.size());
  double best = 0.0;  // empty subset
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    double s = 0.0;
    for (std::uint32_t v = 0; v < n; ++v)
      if (mask & (1u << v)) {
        const double gap = p[v] - scale * q[v];
        s += gap;
      }
    best = std::max(best, s);
  }
  return best;
}

/// Boolean function given by its full truth table over {-1,+1}^n inputs.
/// Bit i of a table index is 1 exactly when x_{i+1} = +1.
struct BooleanFunction {
  int n = 0;
  std::vector<int> table;  // values in {-1, +1}, length 2^n

  BooleanFunction(int arity, std::vector<int> values) : n(arity), table(std::move(values)) {
    if (n < 1 || n > 20) fail(errc::size_limit_exceeded, "arity must be in [1, 20]");
    if (table.size() != (std::size_t{1} << n)) fail(errc::domain_error, "truth table has wrong length");
    for (int v : table)
      if (v != -1 && v != 1) fail(errc::domain_error, "truth table values must be -1 or +1");
  }
};

/// Probability over a uniform input that flipping coordinate i changes f.
inline double boolean_influence(const BooleanFunction& f, int i) {
  if (i < 0 || i >= f.n) fail(errc::index_out_of_range, "coordinate out of range");
  const std::size_t size = f.table.size();
  std::size_t changed = 0;
  for (std::size_t x = 0; x < size; ++x)
    if (f.table[x] != f.table[x ^ (std::size_t{1} << i)]) ++changed;
  return static_cast<double>(changed) / static_cast<double>(size);
}

/// Disagreement probability of two independently sampled outputs: 1 - u . v.
inline double pair_influence(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) fail(errc::alphabet_mismatch, "distributions on different alphabets");
  double dot = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) dot += u[j] * v[j];
  return 1.0 - dot;
}

/// Canonical form of a nontrivial pair: u peaks at the first value, v at the
/// second (ties allowed). Any nontrivial mechanism has a neighboring pair of
/// this shape after relabeling values.
inline bool is_argmax_split_pair(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size() || u.size() < 2) return false;
  const double u_max = *std::max_element(u.begin(), u.end());
  const double v_max = *std::max_element(v.begin(), v.end());
  return u[0] == u_max && v[1] == v_max;
}

/// Split pair supported entirely on the first two values.
inline bool is_argmax_split_binary_pair(std::span<const double> u, std::span<const double> v) {
  if (!is_argmax_split_pair(u, v)) return false;
  for (std::size_t j = 2; j < u.size(); ++j)
    if (u[j] != 0.0 || v[j] != 0.0) return false;
  return true;
}

/// Moves the tail mass (values 3..) of each distribution half onto each of
/// the two leading values. Never increases the pair influence, which is why
/// the binary boundary case carries the minimum.
inline std::pair<std::vector<double>, std::vector<double>> reduce_to_binary_support(
    std::span<const double> u, std::span<const double> v) {
  if (!is_argmax_split_pair(u, v))
    fail(errc::not_in_region, "pair is not in argmax-split form");
  auto collapse = [](std::span<const double> d) {
    double tail = 0.0;
    for (std::size_t j = 2; j < d.size(); ++j) tail += d[j];
    std::vector<double> out(d.size(), 0.0);
    out[0] = d[0] + tail / 2.0;
    out[1] = d[1] + tail / 2.0;
    return out;
  };
  return {collapse(u), collapse(v)};
}

struct GridMinimum {
  double value = 0.0;
  std::vector<std::pair<double, double>> argmin;
};

/// Exhaustive minimum of x + y - 2xy over the grid on [1/2,1] x [0,1/2] with
/// the simultaneous-tie point (1/2,1/2) excluded. This is the nontrivial
/// binary search space; the minimum is 1/2 on its inner boundary.
inline GridMinimum grid_min_influence_nontrivial(double step) {
  if (!(step > 0.0 && step <= 0.5)) fail(errc::bad_step, "step must be in (0, 0.5]");
  const double half_steps = 0.5 / step;
  const long n = std::lround(half_steps);
  if (n < 1 || std::fabs(half_steps - static_cast<double>(n)) > 1e-9)
    fail(errc::bad_step, "step must divide 0.5 exactly");
  GridMinimum out;
  out.value = std::numeric_limits<double>::infinity();
  for (long ix = n; ix <= 2 * n; ++ix)
    for (long iy = 0; iy <= n; ++iy) {
      if (ix == n && iy == n) continue;  // both exactly 1/2
      const double x = static_cast<double>(ix) / static_cast<double>(2 * n);
      const double y = static_cast<double>(iy) / static_cast<double>(2 * n);
      const double value = x + y - 2.0 * x * y;
      if (value < out.value) {
        out.value = value;
        out.argmin.clear();
      }
      if (value == out.value) out.argmin.push_back({x, y});
    }
  return out;
}

struct SuiteReport {
  std::string suite;
  int trials = 0;
  std::vector<std::string> violations;
  bool pass = true;
};

using AuditReport = std::vector<SuiteReport>;

inline bool audit_passed(const AuditReport& report) {
  return std::all_of(report.begin(), report.end(), [](const SuiteReport& s) { return s.pass; });
}

namespace detail {

inline void record(SuiteReport& suite, const std::string& what) {
  if (suite.violations.size() < 16) suite.violations.push_back(what);
  suite.pass = false;
}

}  // namespace detail

/// Randomized audit of the structural claims the library relies on.
/// Per-trial seeds are derived as seed + trial so runs reproduce regardless
/// of evaluation order.
inline AuditReport audit_theorems(int trials, std::uint64_t seed) {
  AuditReport report;

  {
    SuiteReport suite{"hockey-stick-vs-subset-oracle", trials, {}, true};
    const double eps_grid[] = {0.0, std::log(2.0), 1.0, 3.0};
    for (int t = 0; t < trials; ++t) {
      SeededRng rng(seed + static_cast<std::uint64_t>(t));
      const int nv = 2 + static_cast<int>(rng.next_below(5));  // 2..6
      const auto p = random_simplex_point(rng, nv);
      const auto q = random_simplex_point(rng, nv);
      for (double eps : eps_grid) {
        if (certify::hockey_stick(p, q, eps) != dp_subset_oracle(p, q, eps)) {
          detail::record(suite, "trial " + std::to_string(t) + ": shortcut != subset oracle at eps=" +
                                    std::to_string(eps));
          break;
        }
      }
    }
    report.push_back(std::move(suite));
  }

  {
    SuiteReport suite{"low-influence-implies-vdp-and-dp", trials, {}, true};
    const auto graph = NeighborhoodGraph::path(2);
    for (int t = 0; t < trials; ++t) {
      const int nv = 2 + t % 3;  // 2..4
      const auto alphabet = OutputAlphabet::numbered(nv);
      const auto mech = random_joint(graph, alphabet, seed + 1000003 + static_cast<std::uint64_t>(t));
      const auto infl = certify::influence(mech);
      const auto vdp = certify::vdp_tightest_delta(mech, 0.0);
      const auto dp = certify::tightest_delta(mech, 0.0);
      for (std::size_t e = 0; e < infl.per_edge.size(); ++e) {
        if (vdp.per_edge[e].value > infl.per_edge[e].value + 1e-12)
          detail::record(suite, "trial " + std::to_string(t) + ": vdp delta exceeds influence");
        if (dp.per_edge[e].value > (nv - 1) * infl.per_edge[e].value + 1e-12)
          detail::record(suite, "trial " + std::to_string(t) + ": dp delta exceeds (|V|-1) * influence");
      }
    }
    report.push_back(std::move(suite));
  }

  {
    SuiteReport suite{"nontrivial-independent-influence-half", trials, {}, true};
    const auto graph = NeighborhoodGraph::path(2);
    for (int t = 0; t < trials; ++t) {
      const int nv = 2 + t % 4;  // 2..5
      const auto alphabet = OutputAlphabet::numbered(nv);
      std::uint64_t draw = seed + 2000003 + static_cast<std::uint64_t>(t) * 1009;
      for (;;) {
        const auto mech = random_independent(graph, alphabet, draw);
        if (certify::is_nontrivial(mech).nontrivial) {
          if (certify::influence(mech).overall < 0.5 - 1e-12)
            detail::record(suite, "trial " + std::to_string(t) + ": nontrivial influence below 1/2");
          break;
        }
        ++draw;  // rejection sampling
      }
    }
    report.push_back(std::move(suite));
  }

  {
    SuiteReport suite{"independent-influence-quadratic-vs-joint-linear", trials, {}, true};
    const auto graph = NeighborhoodGraph::path(2);
    for (int t = 0; t < trials; ++t) {
      const int nv = 2 + t % 3;
      const auto alphabet = OutputAlphabet::numbered(nv);
      const auto mech = random_independent(graph, alphabet, seed + 3000017 + static_cast<std::uint64_t>(t));
      const auto direct = certify::influence(mech);
      const auto lifted = certify::influence(embed_independent(mech));
      for (std::size_t e = 0; e < direct.per_edge.size(); ++e)
        if (std::fabs(direct.per_edge[e].value - lifted.per_edge[e].value) > 1e-12)
          detail::record(suite, "trial " + std::to_string(t) + ": influence formulas disagree");
    }
    report.push_back(std::move(suite));
  }

  return report;
}

}  // namespace limech::oracle
