// Build a small mechanism, certify it, and print the certificate JSON.

#include <iostream>

#include "limech/limech.hpp"

int main() {
  using namespace limech;

  const auto graph = NeighborhoodGraph::path(2);
  const auto alphabet = OutputAlphabet::numbered(2);

  // randomized response with flip probability 1/3
  IndependentMechanism mech(graph, alphabet,
                            {2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0});

  const auto report = certify::certify(mech, /*epsilon=*/0.0);
  std::cout << io::to_text(io::certificate_to_json(report));

  std::cout << "is (ln 2, 0)-DP: "
            << (certify::tightest_delta(mech, std::log(2.0)).overall == 0.0 ? "yes" : "no")
            << "\n";
  return 0;
}
