#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "limech/certify.hpp"
#include "limech/error.hpp"
#include "limech/mechanism.hpp"

namespace limech::construct {

/// Nontrivial independent mechanism whose influence is exactly 1/2: dataset 1
/// hedges between the first two values, every other dataset answers the
/// second value deterministically.
inline IndependentMechanism tight_half_mechanism(const NeighborhoodGraph& graph,
                                                 const OutputAlphabet& alphabet) {
  const int n = graph.size();
  const int nv = alphabet.size();
  std::vector<double> rows(static_cast<std::size_t>(n) * static_cast<std::size_t>(nv), 0.0);
  rows[0] = 0.5;
  rows[1] = 0.5;
  for (int i = 1; i < n; ++i) rows[static_cast<std::size_t>(i) * static_cast<std::size_t>(nv) + 1] = 1.0;
  return IndependentMechanism(graph, alphabet, std::move(rows));
}

/// Nontrivial joint mechanism with influence exactly alpha. Mass (1-alpha)/2
/// sits on each of the two constant outcome tuples, alpha on the tuple that
/// answers the second value for dataset 2 only. Requires d1 ~ d2.
inline JointMechanism low_influence_nontrivial(const NeighborhoodGraph& graph,
                                               const OutputAlphabet& alphabet, double alpha,
                                               std::size_t cap = kDefaultJointCap) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(errc::bad_alpha, "alpha must be in (0,1)");
  const auto& edges = graph.edges();
  if (std::find(edges.begin(), edges.end(), Edge{0, 1}) == edges.end())
    fail(errc::missing_edge, "construction needs datasets 1 and 2 to be neighbors");
  OutcomeIndexer idx(graph.size(), alphabet.size(), cap);
  std::vector<double> probs(idx.total(), 0.0);
  std::vector<int> all_ones(static_cast<std::size_t>(graph.size()), 0);
  std::vector<int> all_twos(static_cast<std::size_t>(graph.size()), 1);
  std::vector<int> split = all_ones;
  split[1] = 1;
  probs[idx.index(all_ones)] = (1.0 - alpha) / 2.0;
  probs[idx.index(all_twos)] = (1.0 - alpha) / 2.0;
  probs[idx.index(split)] = alpha;
  return JointMechanism(graph, alphabet, std::move(probs), cap);
}

/// One sampled point of a feasibility region, with membership flags for the
/// queried parameters.
struct RegionPoint {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> z;
  bool simplex = false;
  bool dp = false;
  bool li = false;
  bool nontrivial = false;
};

namespace detail {

/// Grid 0, step, ..., 1 with 0, 1/2 and 1 hit exactly; step must divide 1/2.
inline std::vector<double> unit_grid(double step) {
  if (!(step > 0.0 && step <= 0.5)) fail(errc::bad_step, "step must be in (0, 0.5]");
  const double half_steps = 0.5 / step;
  const long n_half = std::lround(half_steps);
  if (n_half < 1 || std::fabs(half_steps - static_cast<double>(n_half)) > 1e-9)
    fail(errc::bad_step, "step must divide 0.5 exactly");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(2 * n_half + 1));
  for (long i = 0; i <= 2 * n_half; ++i)
    grid.push_back(static_cast<double>(i) / static_cast<double>(2 * n_half));
  return grid;
}

}  // namespace detail

/// Samples (x, y) = (Pr[M(d1)=1], Pr[M(d2)=1]) for binary independent
/// mechanisms on one edge. dp checks the four subset inequalities, li the
/// hyperbola x + y - 2xy <= iota; nontrivial means the likelier output flips
/// strictly across the edge.
inline std::vector<RegionPoint> region_independent_binary(double epsilon, double delta, double iota,
                                                          double step) {
  PrivacyParams params(epsilon, delta);
  const double scale = std::exp(params.epsilon);
  const auto grid = detail::unit_grid(step);
  std::vector<RegionPoint> points;
  points.reserve(grid.size() * grid.size());
  for (double x : grid)
    for (double y : grid) {
      RegionPoint p;
      p.x = x;
      p.y = y;
      p.simplex = true;
      p.dp = x <= scale * y + delta && y <= scale * x + delta &&
             1.0 - x <= scale * (1.0 - y) + delta && 1.0 - y <= scale * (1.0 - x) + delta;
      p.li = x + y - 2.0 * x * y <= iota;
      p.nontrivial = (x > 0.5 && y < 0.5) || (x < 0.5 && y > 0.5);
      points.push_back(p);
    }
  return points;
}

/// Samples (x, y, z) = (P12, P21, P11) for binary joint mechanisms on one
/// edge; the fourth mass is 1-x-y-z. dp checks the marginal pair at
/// (epsilon, delta) -- at epsilon = 0 this collapses to |x - y| <= delta,
/// which is also exact at grid boundaries; li is the linear row x + y <= iota.
inline std::vector<RegionPoint> region_joint_binary(double epsilon, double delta, double iota,
                                                    double step) {
  PrivacyParams params(epsilon, delta);
  const auto grid = detail::unit_grid(step);
  std::vector<RegionPoint> points;
  points.reserve(grid.size() * grid.size() * grid.size());
  for (double x : grid)
    for (double y : grid)
      for (double z : grid) {
        RegionPoint p;
        p.x = x;
        p.y = y;
        p.z = z;
        p.simplex = x + y + z <= 1.0;
        if (params.epsilon == 0.0) {
          p.dp = std::fabs(x - y) <= delta;
        } else {
          const double m1[2] = {x + z, 1.0 - x - z};  // Pr[M(d1) = .]
          const double m2[2] = {y + z, 1.0 - y - z};  // Pr[M(d2) = .]
          p.dp = certify::detail::hockey_stick_kernel(m1, m2, params.epsilon) <= delta &&
                 certify::detail::hockey_stick_kernel(m2, m1, params.epsilon) <= delta;
        }
        p.li = x + y <= iota;
        p.nontrivial = (x + z > 0.5 && y + z < 0.5) || (x + z < 0.5 && y + z > 0.5);
        points.push_back(p);
      }
  return points;
}

}  // namespace limech::construct
