#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "limech/certify.hpp"
#include "limech/optimize.hpp"
#include "limech/random.hpp"

using namespace limech;
namespace opt = limech::optimize;

TEST_CASE("independent closed form") {
  auto at_zero = opt::independent_binary_optimum(0.0, 0.0);
  CHECK(at_zero.x_star == 0.5);
  CHECK(at_zero.influence == 0.5);

  auto at_ln2 = opt::independent_binary_optimum(std::log(2.0), 0.0);
  CHECK(at_ln2.x_star == Catch::Approx(2.0 / 3.0).margin(1e-12));
  CHECK(at_ln2.influence == Catch::Approx(5.0 / 9.0).margin(1e-12));

  auto relaxed = opt::independent_binary_optimum(0.0, 0.2);
  CHECK(relaxed.x_star == Catch::Approx(0.6).margin(1e-12));
  CHECK(relaxed.influence == Catch::Approx(0.52).margin(1e-12));

  // never below one half, with or without slack
  for (double eps : {0.0, 0.5, 1.0, 2.5})
    for (double delta : {0.0, 0.1, 0.3, 0.5})
      CHECK(opt::independent_binary_optimum(eps, delta).influence >= 0.5 - 1e-15);
}

TEST_CASE("joint closed form") {
  auto at_zero = opt::joint_binary_optimum(0.0, 0.0);
  CHECK(at_zero.x_star == 0.0);
  CHECK(at_zero.influence == 0.0);
  CHECK(at_zero.utility == 0.5);

  auto at_ln2 = opt::joint_binary_optimum(std::log(2.0), 0.0);
  CHECK(at_ln2.x_star == Catch::Approx(1.0 / 3.0).margin(1e-12));
  CHECK(at_ln2.influence == Catch::Approx(1.0 / 3.0).margin(1e-12));
  CHECK(at_ln2.utility == Catch::Approx(2.0 / 3.0).margin(1e-12));

  auto relaxed = opt::joint_binary_optimum(0.0, 0.2);
  CHECK(relaxed.x_star == Catch::Approx(0.2).margin(1e-12));
  CHECK(relaxed.influence == Catch::Approx(0.2).margin(1e-12));
}

TEST_CASE("joint never needs more influence than independent") {
  for (int ie = 0; ie <= 30; ++ie)
    for (int id = 0; id <= 5; ++id) {
      const double eps = ie / 10.0;
      const double delta = id / 10.0;
      CHECK(opt::joint_binary_optimum(eps, delta).influence <=
            opt::independent_binary_optimum(eps, delta).influence + 1e-15);
    }
}

TEST_CASE("example LP solutions match the closed forms") {
  for (double eps : {0.0, 0.3, std::log(2.0), 1.7}) {
    for (double delta : {0.0, 0.1, 0.4}) {
      const auto sol = opt::solve_lp(opt::example_independent_lp(eps, delta));
      REQUIRE(sol.status == opt::LpStatus::optimal);
      CHECK(sol.x[0] == Catch::Approx(opt::independent_binary_optimum(eps, delta).x_star).margin(1e-7));
    }
  }
}

TEST_CASE("lexicographic joint optimization reproduces the closed form") {
  const auto graph = NeighborhoodGraph::path(2);
  const auto alphabet = OutputAlphabet::numbered(2);
  const auto mech = opt::optimize_joint(graph, alphabet,
                                        opt::example_joint_spec(std::log(2.0), 0.0, true));
  const auto q = pair_marginal(mech, 0, 1);
  CHECK(q(0, 1) == Catch::Approx(1.0 / 3.0).margin(1e-7));  // x*
  CHECK(q(1, 0) == Catch::Approx(0.0).margin(1e-7));        // y*
  const auto utility = marginal(mech, 0)[0];
  CHECK(utility == Catch::Approx(2.0 / 3.0).margin(1e-7));
}

TEST_CASE("vacuous privacy constraints allow a point-mass coupling") {
  const auto mech = opt::optimize_joint(NeighborhoodGraph::path(2), OutputAlphabet::numbered(2),
                                        opt::example_joint_spec(30.0, 0.0, true));
  CHECK(marginal(mech, 0)[0] == Catch::Approx(1.0).margin(1e-7));
  // essentially all mass on the single disagreeing outcome
  CHECK(mech.probs()[1] == Catch::Approx(1.0).margin(1e-7));
}

TEST_CASE("zero influence budget forces the diagonal coupling") {
  auto spec = opt::example_joint_spec(0.0, 0.0, false);
  spec.iota = 0.0;
  const auto mech = opt::optimize_joint(NeighborhoodGraph::path(2), OutputAlphabet::numbered(2), spec);
  CHECK(marginal(mech, 0)[0] == Catch::Approx(0.5).margin(1e-7));
  CHECK(certify::influence(mech).overall <= 1e-9);
}

TEST_CASE("incompatible balance rows are infeasible") {
  OutcomeIndexer idx(2, 2);
  opt::JointLpSpec spec;
  spec.utility = opt::marginal_indicator(idx, 0, 0);
  spec.epsilon = 0.0;
  spec.delta = 0.0;
  spec.balance.push_back({opt::marginal_indicator(idx, 0, 0), 0.8});
  spec.balance.push_back({opt::marginal_indicator(idx, 1, 0), 0.2});
  CHECK_THROWS_AS(
      opt::optimize_joint(NeighborhoodGraph::path(2), OutputAlphabet::numbered(2), spec), error);
}

TEST_CASE("a larger joint design problem stays tractable and feasible") {
  // |D| = 4, |V| = 3: 81 variables, VDP rows refined against the subset check
  const auto graph = NeighborhoodGraph::path(4);
  const auto alphabet = OutputAlphabet::numbered(3);
  OutcomeIndexer idx(4, 3);
  opt::JointLpSpec spec;
  spec.utility = opt::marginal_indicator(idx, 0, 0);
  spec.epsilon = 0.5;
  spec.delta = 0.05;
  spec.iota = 0.4;
  const auto mech = opt::optimize_joint(graph, alphabet, spec);
  CHECK(certify::tightest_delta(mech, 0.5).overall <= 0.05 + 1e-7);
  CHECK(certify::influence(mech).overall <= 0.4 + 1e-7);
  // a fully coupled point mass satisfies every constraint at utility 1
  CHECK(marginal(mech, 0)[0] == Catch::Approx(1.0).margin(1e-7));
}

TEST_CASE("per-value rows alone would overshoot; subset refinement reins the solution in") {
  // Pin the second marginal to (0, 0, 1/2, 1/2) and chase mass on values 1-2
  // for the first. Per-value rows admit gaps (d, d, -d, -d), whose worst
  // subset {1,2} breaks the full privacy condition at 2d; the refined
  // program caps the utility at d.
  const auto graph = NeighborhoodGraph::path(2);
  const auto alphabet = OutputAlphabet::numbered(4);
  OutcomeIndexer idx(2, 4);
  opt::JointLpSpec spec;
  spec.epsilon = 0.0;
  spec.delta = 0.1;
  spec.utility.assign(idx.total(), 0.0);
  for (int v : {0, 1}) {
    const auto part = opt::marginal_indicator(idx, 0, v);
    for (std::size_t t = 0; t < part.size(); ++t) spec.utility[t] += part[t];
  }
  spec.balance.push_back({opt::marginal_indicator(idx, 1, 0), 0.0});
  spec.balance.push_back({opt::marginal_indicator(idx, 1, 1), 0.0});
  spec.balance.push_back({opt::marginal_indicator(idx, 1, 2), 0.5});
  const auto mech = opt::optimize_joint(graph, alphabet, spec);
  CHECK(certify::tightest_delta(mech, 0.0).overall <= 0.1 + 1e-7);
  double utility = 0.0;
  for (std::size_t t = 0; t < spec.utility.size(); ++t) utility += spec.utility[t] * mech.probs()[t];
  CHECK(utility == Catch::Approx(0.1).margin(1e-7));
}

TEST_CASE("optimized mechanisms re-certify within tolerance") {
  const auto graph = NeighborhoodGraph::path(2);
  for (int nv : {2, 3}) {
    const auto alphabet = OutputAlphabet::numbered(nv);
    OutcomeIndexer idx(2, nv);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      SeededRng rng(70'000 + seed);
      opt::JointLpSpec spec;
      spec.utility.resize(idx.total());
      for (auto& c : spec.utility) c = rng.next_unit();
      spec.epsilon = rng.next_unit();
      spec.delta = 0.3 * rng.next_unit();
      spec.iota = 0.2 + 0.8 * rng.next_unit();
      const auto mech = opt::optimize_joint(graph, alphabet, spec);
      CHECK(certify::tightest_delta(mech, spec.epsilon).overall <= spec.delta + 1e-7);
      CHECK(certify::influence(mech).overall <= *spec.iota + 1e-7);
    }
  }
}

TEST_CASE("tradeoff rows evaluate the frontier formulas") {
  const std::vector<double> grid{0.75, 0.9};
  const auto rows = opt::tradeoff_curve(grid);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].epsilon == Catch::Approx(std::log(3.0)).margin(1e-12));
  CHECK(rows[0].independent_influence == Catch::Approx(0.625).margin(1e-12));
  CHECK(rows[0].joint_influence == Catch::Approx(0.5).margin(1e-12));
  CHECK(rows[1].epsilon == Catch::Approx(std::log(9.0)).margin(1e-12));
  CHECK(rows[1].independent_influence == Catch::Approx(0.82).margin(1e-12));
  CHECK(rows[1].joint_influence == Catch::Approx(0.8).margin(1e-12));

  CHECK_THROWS_AS(opt::tradeoff_curve(std::vector<double>{0.5}), error);
  CHECK_THROWS_AS(opt::tradeoff_curve(std::vector<double>{1.0}), error);
  CHECK_THROWS_AS(opt::tradeoff_curve(std::vector<double>{0.3}), error);
}

TEST_CASE("tradeoff rows are consistent with the closed-form optima") {
  for (int i = 1; i <= 9; ++i) {
    const double u = 0.5 + 0.05 * i;  // 0.55 .. 0.95
    const double eps = std::log(u / (1.0 - u));
    const auto joint = opt::joint_binary_optimum(eps, 0.0);
    CHECK(joint.utility == Catch::Approx(u).margin(1e-9));
    CHECK(joint.influence == Catch::Approx(2.0 * u - 1.0).margin(1e-9));
    const auto ind = opt::independent_binary_optimum(eps, 0.0);
    CHECK(ind.influence == Catch::Approx(2.0 * u * u - 2.0 * u + 1.0).margin(1e-9));
  }
}

TEST_CASE("utility grid includes both endpoints") {
  const auto grid = opt::utility_grid(0.55, 0.95, 9);
  REQUIRE(grid.size() == 9);
  CHECK(grid.front() == 0.55);
  CHECK(grid.back() == 0.95);
  CHECK(grid[4] == Catch::Approx(0.75).margin(1e-12));
  CHECK_THROWS_AS(opt::utility_grid(0.6, 0.7, 0), error);
}
