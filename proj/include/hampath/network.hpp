#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hampath/delay.hpp"
#include "hampath/graph.hpp"

namespace hampath {

enum class Topology { feedforward, recurrent };

std::string to_string(Topology t);
Topology topology_from_string(const std::string& s);

// Row 0, column 0 names the Level-A source grating.
struct UnitId {
  int row = 0;
  int column = 0;
  friend auto operator<=>(const UnitId&, const UnitId&) = default;
};

inline constexpr UnitId kSource{0, 0};

struct Unit {
  int row = 0;
  Vertex column = 0;
  double delay = 0.0;
  int slit_count = 0;
  std::vector<UnitId> successors;

  bool absorbing() const noexcept { return successors.empty(); }
  friend bool operator==(const Unit&, const Unit&) = default;
};

struct Channel {
  UnitId from;
  UnitId to;
  double extra_delay = 0.0;
  friend bool operator==(const Channel&, const Channel&) = default;
};

// Compiled delay network. Feedforward networks hold n rows of n units; the
// recurrent variant holds one row whose successors are feedback channels,
// each adding `feedback_delay`. Immutable once built.
class Network {
 public:
  Network(int n, Topology topology, std::vector<Unit> units, int source_slits,
          double channel_delay, std::optional<double> feedback_delay);

  int n() const noexcept { return n_; }
  Topology topology() const noexcept { return topology_; }
  int rows() const noexcept { return topology_ == Topology::feedforward ? n_ : 1; }
  // Units a photon passes through between source and detector.
  int traversals() const noexcept { return n_; }
  int source_slits() const noexcept { return source_slits_; }
  double channel_delay() const noexcept { return channel_delay_; }
  std::optional<double> feedback_delay() const noexcept { return feedback_delay_; }

  const std::vector<Unit>& units() const noexcept { return units_; }
  const Unit& unit(int row, Vertex column) const;
  // Unit reached at the given traversal step (1-based); recurrent networks
  // reuse their single row.
  const Unit& unit_at_step(int step, Vertex column) const;

  std::vector<Channel> channels() const;
  // Added to every terminal arrival time beyond sum c_j delay_j.
  double arrival_offset(int steps) const noexcept;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  int n_;
  Topology topology_;
  std::vector<Unit> units_;
  int source_slits_;
  double channel_delay_;
  std::optional<double> feedback_delay_;
};

Network compile_feedforward(const Graph& g, const DelayTable& table);
// Throws ConstraintViolation unless feedback_delay > delay_n.
Network compile_recurrent(const Graph& g, const DelayTable& table, double feedback_delay);

// The feedforward network a recurrent one is equivalent to over n traversals.
Network unroll(const Network& recurrent);

struct ValidationReport {
  std::vector<std::string> violations;
  bool valid() const noexcept { return violations.empty(); }
};

ValidationReport validate_network(const Network& net, const Graph& g);

nlohmann::json to_json(const Network& net);
Network network_from_json(const nlohmann::json& doc);

}  // namespace hampath
