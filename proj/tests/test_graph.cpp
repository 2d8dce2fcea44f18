#include <catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "limech/graph.hpp"

using limech::Edge;
using limech::NeighborhoodGraph;
using limech::OutputAlphabet;

namespace {

bool fails_with(limech::errc code, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const limech::error& e) {
    return e.code() == code;
  }
  return false;
}

// Independent count of Hamming-distance-1 pairs over n-bit labels.
int count_hamming_edges(const std::vector<std::string>& labels) {
  int count = 0;
  for (std::size_t a = 0; a < labels.size(); ++a)
    for (std::size_t b = a + 1; b < labels.size(); ++b) {
      int diff = 0;
      for (std::size_t c = 0; c < labels[a].size(); ++c)
        if (labels[a][c] != labels[b][c]) ++diff;
      if (diff == 1) ++count;
    }
  return count;
}

}  // namespace

TEST_CASE("two-node path is the minimal graph") {
  NeighborhoodGraph g({"d1", "d2"}, {{0, 1}});
  CHECK(g.size() == 2);
  CHECK(g.edges() == std::vector<Edge>{{0, 1}});
}

TEST_CASE("graph validation rejects bad input") {
  CHECK(fails_with(limech::errc::disconnected_graph,
                   [] { NeighborhoodGraph({"d1", "d2", "d3"}, {{0, 1}}); }));
  CHECK(fails_with(limech::errc::self_loop, [] { NeighborhoodGraph({"d1", "d2"}, {{0, 0}, {0, 1}}); }));
  CHECK(fails_with(limech::errc::duplicate_label, [] { NeighborhoodGraph({"d1", "d1"}, {{0, 1}}); }));
  CHECK(fails_with(limech::errc::too_few_datasets, [] { NeighborhoodGraph({"d1"}, {}); }));
  CHECK(fails_with(limech::errc::index_out_of_range, [] { NeighborhoodGraph({"d1", "d2"}, {{0, 2}}); }));
}

TEST_CASE("duplicate and reversed edge pairs normalize to one edge") {
  NeighborhoodGraph g({"a", "b", "c"}, {{1, 0}, {0, 1}, {1, 2}});
  CHECK(g.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
}

TEST_CASE("cube graph built from explicit Hamming pairs") {
  auto cube = NeighborhoodGraph::hamming(3);
  std::vector<Edge> pairs;
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b) {
      int diff = 0;
      for (int bit = 0; bit < 3; ++bit)
        if (((a >> bit) & 1) != ((b >> bit) & 1)) ++diff;
      if (diff == 1) pairs.push_back({a, b});
    }
  NeighborhoodGraph g(cube.labels(), pairs);
  CHECK(g.size() == 8);
  CHECK(g.edges().size() == 12);
}

TEST_CASE("hamming graph sizes") {
  auto g1 = NeighborhoodGraph::hamming(1);
  CHECK(g1.size() == 2);
  CHECK(g1.edges().size() == 1);

  auto g2 = NeighborhoodGraph::hamming(2);
  CHECK(g2.size() == 4);
  CHECK(g2.edges().size() == 4);

  auto g3 = NeighborhoodGraph::hamming(3);
  CHECK(g3.size() == 8);
  CHECK(g3.edges().size() == 12);
}

TEST_CASE("hamming edge set matches label enumeration up to n = 8") {
  for (int n = 1; n <= 8; ++n) {
    auto g = NeighborhoodGraph::hamming(n);
    CHECK(static_cast<int>(g.edges().size()) == count_hamming_edges(g.labels()));
  }
}

TEST_CASE("hamming graph size limit") {
  CHECK(fails_with(limech::errc::size_limit_exceeded, [] { NeighborhoodGraph::hamming(21); }));
  CHECK(fails_with(limech::errc::too_few_datasets, [] { NeighborhoodGraph::hamming(0); }));
}

TEST_CASE("alphabet validation") {
  OutputAlphabet a({"yes", "no"});
  CHECK(a.size() == 2);
  CHECK(fails_with(limech::errc::too_few_values, [] { OutputAlphabet({"only"}); }));
  CHECK(fails_with(limech::errc::duplicate_label, [] { OutputAlphabet({"x", "x"}); }));
  CHECK(OutputAlphabet::numbered(3).labels() == std::vector<std::string>{"1", "2", "3"});
}
