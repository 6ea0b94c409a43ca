#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "hampath/delay.hpp"
#include "hampath/photon.hpp"

// Row-by-row dynamic programming over (vertex, arrival key) cells. Shared by
// the realizable-key census and the photon propagation engine.
namespace hampath::detail {

template <class W>
struct Bucket {
  std::vector<std::uint64_t> keys;  // sorted, unique
  std::vector<W> weights;
};

// Index v-1 holds the cells whose latest unit is in column v.
template <class W>
using RowState = std::vector<Bucket<W>>;

// Weight type for support-only runs.
struct Present {
  Present& operator+=(const Present&) noexcept { return *this; }
};

template <class W>
std::size_t cell_count(const RowState<W>& state) {
  std::size_t total = 0;
  for (const auto& b : state) total += b.keys.size();
  return total;
}

// Children reach each target column in a fixed order (source column, then key,
// then successor), and equal keys are summed in that order, so merges are
// deterministic. With `distinct_only`, children that would visit a column a
// second time are dropped.
template <class W, class Targets, class Child, class Lose>
RowState<W> advance(const RowState<W>& current, Targets&& targets, Child&& child, Lose&& lose,
                    PropagationStats& stats, bool distinct_only = false) {
  const int n = static_cast<int>(current.size());
  std::vector<std::vector<std::pair<std::uint64_t, W>>> incoming(current.size());
  for (Vertex v = 1; v <= n; ++v) {
    const auto& bucket = current[v - 1];
    if (bucket.keys.empty()) continue;
    const std::vector<Vertex>& succ = targets(v);
    stats.cells_expanded += bucket.keys.size();
    if (succ.empty()) {
      for (const auto& w : bucket.weights) lose(w);
      continue;
    }
    for (std::size_t i = 0; i < bucket.keys.size(); ++i) {
      for (Vertex k : succ) {
        if (distinct_only && ((bucket.keys[i] >> (4 * (k - 1))) & 0xF) != 0) continue;
        incoming[k - 1].emplace_back(bucket.keys[i] + ArrivalKey::unit(k),
                                     child(bucket.weights[i], v, k));
      }
    }
    stats.children += bucket.keys.size() * succ.size();
  }

  RowState<W> next(current.size());
  for (std::size_t c = 0; c < incoming.size(); ++c) {
    auto& in = incoming[c];
    std::stable_sort(in.begin(), in.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    auto& out = next[c];
    for (auto& [key, w] : in) {
      if (!out.keys.empty() && out.keys.back() == key) {
        out.weights.back() += w;
      } else {
        out.keys.push_back(key);
        out.weights.push_back(std::move(w));
      }
    }
    in.clear();
    in.shrink_to_fit();
  }
  stats.peak_cells = std::max(stats.peak_cells, cell_count(next));
  return next;
}

}  // namespace hampath::detail
