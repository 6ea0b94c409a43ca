#include <algorithm>
#include <limits>
#include <random>

#include "doctest.h"
#include "hampath/error.hpp"
#include "hampath/graph.hpp"
#include "oracles.hpp"

using namespace hampath;

TEST_CASE("parse_graph transcribes edge lists") {
  const Graph p3 = parse_graph("3\n1 2\n2 3");
  CHECK(p3 == path_graph(3));
  CHECK_FALSE(p3.directed());
  CHECK(p3.adjacent(2, 1));

  const Graph k3 = parse_graph("3\n1 2\n2 3\n1 3");
  CHECK(k3 == complete_graph(3));

  const Graph d = parse_graph("# arcs only\n3 directed\n\n1 2\n  # inner comment\n2 3\n");
  CHECK(d.directed());
  CHECK(d.adjacent(1, 2));
  CHECK_FALSE(d.adjacent(2, 1));

  CHECK(parse_graph("4\n1 2\n1 2\r\n2 1\n").arcs().size() == 2);
  CHECK(parse_graph("5\n").arcs().empty());
}

TEST_CASE("parse_graph errors carry the rule and line") {
  try {
    parse_graph("3\n2 2");
    FAIL("self-loop accepted");
  } catch (const SelfLoopError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("self-loop") != std::string::npos);
  }
  try {
    parse_graph("3\n1 2\n1 x\n");
    FAIL("malformed line accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_graph("3\n1 4"), BoundsError);
  CHECK_THROWS_AS(parse_graph("3\n0 1"), BoundsError);
  CHECK_THROWS_AS(parse_graph(""), ParseError);
  CHECK_THROWS_AS(parse_graph("0\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("3 undirected\n"), ParseError);
  CHECK_THROWS_AS(parse_graph("3\n1 2 3\n"), ParseError);
}

TEST_CASE("out_degree") {
  CHECK(out_degree(complete_graph(3), 1) == 2);
  CHECK(out_degree(path_graph(3), 2) == 2);
  CHECK(out_degree(path_graph(3), 1) == 1);
  CHECK_THROWS_AS(out_degree(path_graph(3), 4), BoundsError);
  CHECK_THROWS_AS(out_degree(path_graph(3), 0), BoundsError);
}

TEST_CASE("brute_force_hamiltonian_paths on the named graphs") {
  const auto k3 = brute_force_hamiltonian_paths(complete_graph(3));
  CHECK(k3.size() == 6);
  CHECK(k3 == oracle::permutation_paths(complete_graph(3)));

  const auto p3 = brute_force_hamiltonian_paths(path_graph(3));
  CHECK(p3 == std::vector<VertexSequence>{{1, 2, 3}, {3, 2, 1}});

  CHECK(brute_force_hamiltonian_paths(star_graph(4)).empty());
  CHECK(brute_force_hamiltonian_paths(Graph::from_edges(1, {})) == std::vector<VertexSequence>{{1}});
}

TEST_CASE("brute_force_hamiltonian_paths refuses graphs above the cap") {
  CHECK_THROWS_AS(brute_force_hamiltonian_paths(path_graph(13)), CapExceeded);
  try {
    brute_force_hamiltonian_paths(path_graph(6), 5);
    FAIL("cap ignored");
  } catch (const CapExceeded& e) {
    CHECK(e.cap() == 5);
  }
}

TEST_CASE("brute force matches the permutation oracle on random graphs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 1 + trial % 7;
    const Graph g = oracle::random_graph(n, 0.2 + 0.1 * (trial % 6), rng, trial % 3 == 0);
    const auto paths = brute_force_hamiltonian_paths(g);
    REQUIRE(paths == oracle::permutation_paths(g));
    for (const auto& p : paths) {
      CHECK(is_hamiltonian_path(g, p));
      if (!g.directed()) {
        VertexSequence r(p.rbegin(), p.rend());
        CHECK(std::binary_search(paths.begin(), paths.end(), r));
      }
    }
  }
}

TEST_CASE("walk and path predicates") {
  const Graph p3 = path_graph(3);
  CHECK(is_walk(p3, std::vector<Vertex>{1, 2, 1}));
  CHECK_FALSE(is_walk(p3, std::vector<Vertex>{1, 3}));
  CHECK_FALSE(is_walk(p3, std::vector<Vertex>{}));
  CHECK_FALSE(is_hamiltonian_path(p3, std::vector<Vertex>{1, 2, 1}));
  CHECK(is_hamiltonian_path(p3, std::vector<Vertex>{3, 2, 1}));
}

TEST_CASE("count_walks") {
  CHECK(count_walks(complete_graph(3), 2) == 12);
  CHECK(count_walks(path_graph(3), 2) == 6);
  CHECK(oracle::enumerate_walks(path_graph(3), 2).size() == 6);
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 6; ++n) CHECK(count_walks(oracle::random_graph(n, 0.5, rng), 0) == n);
  CHECK_THROWS_AS(count_walks(path_graph(3), -1), BoundsError);
}

TEST_CASE("count_walks equals walk-tree leaves for n <= 7") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 7;
    const Graph g = oracle::random_graph(n, 0.3 + 0.1 * (trial % 5), rng, trial % 2 == 0);
    CHECK(count_walks(g, n - 1) == oracle::count_walk_leaves(g, n - 1));
  }
}

TEST_CASE("count_walks is exact beyond 64 bits") {
  // K_n has n (n-1)^L walks of length L.
  const BigInt expected = BigInt(16) * boost::multiprecision::pow(BigInt(15), 20);
  CHECK(expected > BigInt(std::numeric_limits<std::uint64_t>::max()));
  CHECK(count_walks(complete_graph(16), 20) == expected);
  CHECK(count_walks(complete_graph(12), 11) == BigInt(12) * boost::multiprecision::pow(BigInt(11), 11));
}
