#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hampath/delay.hpp"
#include "hampath/network.hpp"

namespace hampath {

enum class Mode { incoherent, coherent, classical };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct TerminalCell {
  Vertex column = 0;
  ArrivalKey key;
  friend auto operator<=>(const TerminalCell&, const TerminalCell&) = default;
};

struct PropagationStats {
  int rows = 0;
  std::size_t cells_expanded = 0;  // (column, key) cells split into successors
  std::size_t children = 0;        // weight contributions before merging
  std::size_t peak_cells = 0;
};

struct PropagationOptions {
  // Coherent mode multiplies the amplitude by exp(i * phase_omega * delay_j)
  // at each unit.
  double phase_omega = 0.0;
  // Truncate to the first `steps` traversals; defaults to the full network.
  std::optional<int> steps;
  // Drop every cell whose key has an exponent above 1. Cells that are kept
  // carry their exact weight; dropped weight is not counted as lost.
  bool distinct_visits_only = false;
};

// Outcomes at the detectors, sorted by (column, key). Only the weight vector
// matching `mode` is populated.
struct TerminalDistribution {
  Mode mode = Mode::incoherent;
  Topology topology = Topology::feedforward;
  int n = 0;
  int steps = 0;
  bool distinct_visits_only = false;
  double time_offset = 0.0;

  std::vector<TerminalCell> cells;
  std::vector<double> mass;
  std::vector<std::complex<double>> amplitude;
  std::vector<BigInt> pulses;

  double lost_mass = 0.0;
  BigInt lost_pulses = 0;
  PropagationStats stats;

  // Detection probability of cell i (mass, |amplitude|^2 or pulse count).
  double probability(std::size_t i) const;
  double total_mass() const;
  std::optional<std::size_t> find(Vertex column, const ArrivalKey& key) const;
};

TerminalDistribution propagate(const Network& net, Mode mode, const PropagationOptions& opts = {});

// Terminal distributions of every truncation 1..traversals of the network,
// from one pass. Entry r-1 equals propagate(net, mode, {.steps = r}).
std::vector<TerminalDistribution> propagate_prefixes(const Network& net, Mode mode,
                                                     const PropagationOptions& opts = {});

struct WindowResult {
  std::vector<double> per_column;  // index v-1
  double total = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  std::optional<double> exact_gap;
  std::optional<std::string> warning;
};

// Weight arriving in [lambda, lambda + epsilon] at each detector.
WindowResult detection_probability(const TerminalDistribution& dist, const DelayTable& table,
                                   double epsilon);

struct BalanceReport {
  Mode mode = Mode::incoherent;
  double total_mass = 0.0;
  double lost_mass = 0.0;
  // |total + lost - 1| for incoherent runs, total + lost - 1 for coherent ones.
  std::optional<double> deviation;
  // total + lost; equals 1 only when the propagation conserves probability.
  double normalization = 0.0;
  BigInt total_pulses = 0;
  BigInt lost_pulses = 0;
};

BalanceReport probability_balance(const TerminalDistribution& dist);

// One CSV row per cell: vertex,exponents,time,weight,mode.
std::string distribution_csv(const TerminalDistribution& dist, const DelayTable& table);

struct ShotOutcome {
  bool lost = false;
  Vertex column = 0;
  ArrivalKey key;
  friend bool operator==(const ShotOutcome&, const ShotOutcome&) = default;
};

// Seed for shot `index` of a batch seeded with `seed`.
std::uint64_t shot_seed(std::uint64_t seed, std::uint64_t index) noexcept;

ShotOutcome sample_photon(const Network& net, std::uint64_t seed);

struct SampleSummary {
  std::uint64_t shots = 0;
  std::uint64_t lost = 0;
  std::vector<TerminalCell> cells;  // sorted
  std::vector<std::uint64_t> counts;
  std::uint64_t count(Vertex column, const ArrivalKey& key) const;
};

// Shot i uses shot_seed(seed, i); the summary does not depend on `threads`.
SampleSummary sample_photons(const Network& net, std::uint64_t shots, std::uint64_t seed,
                             unsigned threads = 0);

}  // namespace hampath
