#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hampath {

using BigInt = boost::multiprecision::cpp_int;

// Vertices are numbered 1..n throughout the library.
using Vertex = int;
using VertexSequence = std::vector<Vertex>;
using Edge = std::pair<Vertex, Vertex>;

inline constexpr int kDefaultEnumerationCap = 12;

// Simple graph with a dense adjacency matrix. Undirected graphs are stored
// symmetrized, so every consumer can read the directed view.
class Graph {
 public:
  // Throws BoundsError for endpoints outside 1..n, SelfLoopError(0, v) for i == j.
  static Graph from_edges(int n, std::span<const Edge> edges, bool directed = false);

  int size() const noexcept { return n_; }
  bool directed() const noexcept { return directed_; }
  bool adjacent(Vertex from, Vertex to) const;
  std::vector<Vertex> successors(Vertex v) const;
  std::vector<Edge> arcs() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  Graph(int n, bool directed);

  int n_ = 0;
  bool directed_ = false;
  std::vector<std::uint8_t> adjacency_;  // row-major, n*n
};

Graph parse_graph(std::string_view text);
Graph read_graph_file(const std::filesystem::path& path);

int out_degree(const Graph& g, Vertex j);

bool is_walk(const Graph& g, std::span<const Vertex> seq);
bool is_hamiltonian_path(const Graph& g, std::span<const Vertex> seq);

// Every Hamiltonian path in lexicographic order. Refuses graphs above `cap`.
std::vector<VertexSequence> brute_force_hamiltonian_paths(const Graph& g,
                                                          int cap = kDefaultEnumerationCap);

// 1^T A^length 1, exactly.
BigInt count_walks(const Graph& g, int length);

Graph complete_graph(int n);
Graph path_graph(int n);
// Center is vertex 1.
Graph star_graph(int n);

}  // namespace hampath
