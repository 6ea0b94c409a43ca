#include "hampath/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "hampath/error.hpp"

namespace hampath {

Graph::Graph(int n, bool directed)
    : n_(n), directed_(directed), adjacency_(static_cast<std::size_t>(n) * n, 0) {}

Graph Graph::from_edges(int n, std::span<const Edge> edges, bool directed) {
  if (n < 1) throw BoundsError("vertex count must be at least 1, got " + std::to_string(n));
  Graph g(n, directed);
  for (auto [i, j] : edges) {
    if (i < 1 || i > n || j < 1 || j > n) {
      throw BoundsError("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") outside vertex range 1.." + std::to_string(n));
    }
    if (i == j) throw SelfLoopError(0, i);
    g.adjacency_[static_cast<std::size_t>(i - 1) * n + (j - 1)] = 1;
    if (!directed) g.adjacency_[static_cast<std::size_t>(j - 1) * n + (i - 1)] = 1;
  }
  return g;
}

bool Graph::adjacent(Vertex from, Vertex to) const {
  if (from < 1 || from > n_ || to < 1 || to > n_) {
    throw BoundsError("vertex outside 1.." + std::to_string(n_));
  }
  return adjacency_[static_cast<std::size_t>(from - 1) * n_ + (to - 1)] != 0;
}

std::vector<Vertex> Graph::successors(Vertex v) const {
  std::vector<Vertex> out;
  for (Vertex k = 1; k <= n_; ++k) {
    if (adjacent(v, k)) out.push_back(k);
  }
  return out;
}

std::vector<Edge> Graph::arcs() const {
  std::vector<Edge> out;
  for (Vertex i = 1; i <= n_; ++i) {
    for (Vertex k : successors(i)) out.emplace_back(i, k);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) break;
    auto end = s.find_first_of(" \t", start);
    if (end == std::string_view::npos) end = s.size();
    out.push_back(s.substr(start, end - start));
    pos = end;
  }
  return out;
}

bool parse_int(std::string_view tok, int& value) {
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

Graph parse_graph(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::optional<int> n;
  bool directed = false;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;

  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = trim(text.substr(pos, eol - pos));
    ++line_no;
    pos = eol + 1;

    if (line.empty() || line.front() == '#') {
      if (eol == text.size()) break;
      continue;
    }
    const auto toks = tokens(line);
    if (!n) {
      int count = 0;
      if (toks.empty() || toks.size() > 2 || !parse_int(toks[0], count)) {
        throw ParseError(line_no, "expected header 'N' or 'N directed'");
      }
      if (toks.size() == 2) {
        if (toks[1] != "directed") throw ParseError(line_no, "unknown header token '" + std::string(toks[1]) + "'");
        directed = true;
      }
      if (count < 1) throw ParseError(line_no, "vertex count must be at least 1");
      n = count;
    } else {
      int i = 0;
      int j = 0;
      if (toks.size() != 2 || !parse_int(toks[0], i) || !parse_int(toks[1], j)) {
        throw ParseError(line_no, "expected edge 'i j'");
      }
      if (i < 1 || i > *n || j < 1 || j > *n) {
        throw BoundsError("line " + std::to_string(line_no) + ": edge (" + std::to_string(i) + ", " +
                          std::to_string(j) + ") outside vertex range 1.." + std::to_string(*n));
      }
      if (i == j) throw SelfLoopError(line_no, i);
      edges.emplace_back(i, j);
    }
    if (eol == text.size()) break;
  }
  if (!n) throw ParseError(line_no, "missing header line");
  return Graph::from_edges(*n, edges, directed);
}

Graph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open graph file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

int out_degree(const Graph& g, Vertex j) {
  if (j < 1 || j > g.size()) {
    throw BoundsError("vertex " + std::to_string(j) + " outside 1.." + std::to_string(g.size()));
  }
  return static_cast<int>(g.successors(j).size());
}

bool is_walk(const Graph& g, std::span<const Vertex> seq) {
  if (seq.empty()) return false;
  for (Vertex v : seq) {
    if (v < 1 || v > g.size()) return false;
  }
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (!g.adjacent(seq[i], seq[i + 1])) return false;
  }
  return true;
}

bool is_hamiltonian_path(const Graph& g, std::span<const Vertex> seq) {
  if (static_cast<int>(seq.size()) != g.size() || !is_walk(g, seq)) return false;
  std::vector<bool> seen(static_cast<std::size_t>(g.size()) + 1, false);
  for (Vertex v : seq) {
    if (seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

namespace {

void extend_paths(const Graph& g, VertexSequence& prefix, std::uint32_t used,
                  std::vector<VertexSequence>& out) {
  if (static_cast<int>(prefix.size()) == g.size()) {
    out.push_back(prefix);
    return;
  }
  const Vertex last = prefix.back();
  for (Vertex k = 1; k <= g.size(); ++k) {
    const std::uint32_t bit = std::uint32_t{1} << (k - 1);
    if ((used & bit) || !g.adjacent(last, k)) continue;
    prefix.push_back(k);
    extend_paths(g, prefix, used | bit, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<VertexSequence> brute_force_hamiltonian_paths(const Graph& g, int cap) {
  if (g.size() > cap) throw CapExceeded(g.size(), cap);
  if (g.size() > 31) throw CapExceeded(g.size(), 31);
  std::vector<VertexSequence> out;
  VertexSequence prefix;
  prefix.reserve(static_cast<std::size_t>(g.size()));
  // Ascending start vertex and ascending successors give lexicographic order.
  for (Vertex start = 1; start <= g.size(); ++start) {
    prefix.assign(1, start);
    extend_paths(g, prefix, std::uint32_t{1} << (start - 1), out);
  }
  return out;
}

BigInt count_walks(const Graph& g, int length) {
  if (length < 0) throw BoundsError("walk length must be non-negative");
  const int n = g.size();
  // ends[v] = number of walks of the current length ending at v.
  std::vector<BigInt> ends(static_cast<std::size_t>(n), BigInt{1});
  std::vector<BigInt> next(static_cast<std::size_t>(n));
  const auto arcs = g.arcs();
  for (int step = 0; step < length; ++step) {
    std::fill(next.begin(), next.end(), BigInt{0});
    for (auto [i, k] : arcs) next[k - 1] += ends[i - 1];
    ends.swap(next);
  }
  BigInt total = 0;
  for (const auto& c : ends) total += c;
  return total;
}

Graph complete_graph(int n) {
  std::vector<Edge> edges;
  for (Vertex i = 1; i <= n; ++i) {
    for (Vertex j = i + 1; j <= n; ++j) edges.emplace_back(i, j);
  }
  return Graph::from_edges(n, edges);
}

Graph path_graph(int n) {
  std::vector<Edge> edges;
  for (Vertex i = 1; i < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::from_edges(n, edges);
}

Graph star_graph(int n) {
  std::vector<Edge> edges;
  for (Vertex i = 2; i <= n; ++i) edges.emplace_back(1, i);
  return Graph::from_edges(n, edges);
}

}  // namespace hampath
