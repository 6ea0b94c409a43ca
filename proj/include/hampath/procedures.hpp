#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hampath/delay.hpp"
#include "hampath/graph.hpp"
#include "hampath/photon.hpp"

namespace hampath {

enum class DetectionMode { exact, sampled };

struct DetectionOptions {
  DetectionMode mode = DetectionMode::exact;
  Mode propagation = Mode::incoherent;  // exact mode only
  std::uint64_t shots = 0;
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;  // defaults to default_epsilon
  double channel_delay = 0.0;
  double phase_omega = 0.0;
  int cap = kDefaultEnumerationCap;
};

struct DetectionOutcome {
  bool hamiltonian_detected = false;
  std::vector<Vertex> end_vertices;
  std::vector<double> per_vertex;  // probabilities (exact) or hit frequencies (sampled)
  double total = 0.0;
  DetectionMode mode = DetectionMode::exact;
  Mode propagation = Mode::incoherent;
  std::uint64_t shots = 0;
  std::uint64_t hits = 0;
  double epsilon = 0.0;
  double window_start = 0.0;
  // Set on a sampled miss: no hit does not mean no Hamiltonian path.
  bool inconclusive = false;
  std::optional<std::string> warning;
};

DetectionOutcome detect_hamiltonian(const Graph& g, const DetectionOptions& opts = {});

enum class ChoicePolicy { deterministic, sampled };

struct ConstructionPass {
  int index = 0;  // 1..n-1
  int rows = 0;   // rows of the truncated network
  Vertex head = 0;
  ArrivalKey target_key;
  double window_start = 0.0;
  std::vector<Vertex> candidates;
  std::vector<double> candidate_weights;
  Vertex chosen = 0;
};

struct Construction {
  VertexSequence path;
  std::vector<ConstructionPass> passes;
};

// Grows the path backwards from `end_vertex`, one truncated network per pass.
Construction construct_path(const Graph& g, Vertex end_vertex,
                            ChoicePolicy policy = ChoicePolicy::deterministic,
                            std::uint64_t seed = 0, int cap = kDefaultEnumerationCap);

struct CostReport {
  int passes = 0;
  std::vector<PropagationStats> per_pass;
  double n2_log_n = 0.0;
};

CostReport construction_cost(const Graph& g);

}  // namespace hampath
