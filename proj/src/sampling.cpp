#include <algorithm>
#include <map>
#include <random>
#include <thread>

#include "hampath/error.hpp"
#include "hampath/photon.hpp"

namespace hampath {

std::uint64_t shot_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  // splitmix64 finalizer over (seed, index).
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ShotOutcome sample_photon(const Network& net, std::uint64_t seed) {
  if (net.source_slits() < 1) throw PreconditionError("source grating has no slits");
  std::mt19937_64 rng(seed);
  Vertex v = std::uniform_int_distribution<int>(1, net.source_slits())(rng);
  ArrivalKey key = ArrivalKey::zeros(net.n()).incremented(v);
  for (int step = 1; step < net.traversals(); ++step) {
    const auto& succ = net.unit_at_step(step, v).successors;
    if (succ.empty()) return {true, v, key};
    const auto pick = std::uniform_int_distribution<std::size_t>(0, succ.size() - 1)(rng);
    v = succ[pick].column;
    key = key.incremented(v);
  }
  return {false, v, key};
}

std::uint64_t SampleSummary::count(Vertex column, const ArrivalKey& key) const {
  const TerminalCell probe{column, key};
  auto it = std::lower_bound(cells.begin(), cells.end(), probe);
  if (it == cells.end() || *it != probe) return 0;
  return counts[static_cast<std::size_t>(it - cells.begin())];
}

SampleSummary sample_photons(const Network& net, std::uint64_t shots, std::uint64_t seed,
                             unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(shots, 1)));

  using Tally = std::map<TerminalCell, std::uint64_t>;
  std::vector<Tally> tallies(threads);
  std::vector<std::uint64_t> lost(threads, 0);
  auto work = [&](unsigned t) {
    const std::uint64_t begin = shots * t / threads;
    const std::uint64_t end = shots * (t + 1) / threads;
    for (std::uint64_t i = begin; i < end; ++i) {
      const auto shot = sample_photon(net, shot_seed(seed, i));
      if (shot.lost) {
        ++lost[t];
      } else {
        ++tallies[t][{shot.column, shot.key}];
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  Tally merged;
  SampleSummary s;
  s.shots = shots;
  for (unsigned t = 0; t < threads; ++t) {
    s.lost += lost[t];
    for (const auto& [cell, c] : tallies[t]) merged[cell] += c;
  }
  for (const auto& [cell, c] : merged) {
    s.cells.push_back(cell);
    s.counts.push_back(c);
  }
  return s;
}

}  // namespace hampath
