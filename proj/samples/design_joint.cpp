// Design a joint mechanism by linear programming: maximize Pr[M(d1)=1] under
// a privacy budget and a balance constraint, then re-minimize its influence.
// Compare against the best independent mechanism at the same budget.

#include <cmath>
#include <iostream>

#include "limech/limech.hpp"

int main() {
  using namespace limech;
  namespace opt = limech::optimize;

  const double epsilon = std::log(2.0);
  const double delta = 0.0;

  const auto joint = opt::optimize_joint(NeighborhoodGraph::path(2), OutputAlphabet::numbered(2),
                                         opt::example_joint_spec(epsilon, delta, true));
  const auto independent = opt::independent_binary_optimum(epsilon, delta);

  std::cout << "utility (both classes): " << io::format_number(marginal(joint, 0)[0]) << "\n";
  std::cout << "independent influence:  " << io::format_number(independent.influence) << "\n";
  std::cout << "joint influence:        "
            << io::format_number(certify::influence(joint).overall) << "\n";
  std::cout << io::to_text(io::mechanism_to_json(joint));
  return 0;
}
