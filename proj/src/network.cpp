#include "hampath/network.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hampath/error.hpp"

namespace hampath {

std::string to_string(Topology t) {
  return t == Topology::feedforward ? "feedforward" : "recurrent";
}

Topology topology_from_string(const std::string& s) {
  if (s == "feedforward") return Topology::feedforward;
  if (s == "recurrent") return Topology::recurrent;
  throw Error("unknown topology '" + s + "'");
}

Network::Network(int n, Topology topology, std::vector<Unit> units, int source_slits,
                 double channel_delay, std::optional<double> feedback_delay)
    : n_(n),
      topology_(topology),
      units_(std::move(units)),
      source_slits_(source_slits),
      channel_delay_(channel_delay),
      feedback_delay_(feedback_delay) {
  if (n_ < 1 || n_ > kMaxVertices) {
    throw BoundsError("networks support 1.." + std::to_string(kMaxVertices) + " columns");
  }
  const auto expected = static_cast<std::size_t>(rows()) * n_;
  if (units_.size() != expected) {
    throw BoundsError("network needs " + std::to_string(expected) + " units, got " +
                      std::to_string(units_.size()));
  }
  std::sort(units_.begin(), units_.end(), [](const Unit& a, const Unit& b) {
    return UnitId{a.row, a.column} < UnitId{b.row, b.column};
  });
  for (int r = 1; r <= rows(); ++r) {
    for (Vertex c = 1; c <= n_; ++c) {
      const Unit& u = units_[static_cast<std::size_t>(r - 1) * n_ + (c - 1)];
      if (u.row != r || u.column != c) throw BoundsError("network units do not tile the grid");
      for (const auto& s : u.successors) {
        if (s.column < 1 || s.column > n_ || s.row < 1 || s.row > rows()) {
          throw BoundsError("channel target outside the unit grid");
        }
      }
    }
  }
  if (topology_ == Topology::recurrent && !feedback_delay_) {
    throw ConstraintViolation("recurrent network requires a feedback delay");
  }
}

const Unit& Network::unit(int row, Vertex column) const {
  if (row < 1 || row > rows() || column < 1 || column > n_) {
    throw BoundsError("unit (" + std::to_string(row) + ", " + std::to_string(column) +
                      ") outside the network");
  }
  return units_[static_cast<std::size_t>(row - 1) * n_ + (column - 1)];
}

const Unit& Network::unit_at_step(int step, Vertex column) const {
  return unit(topology_ == Topology::feedforward ? step : 1, column);
}

std::vector<Channel> Network::channels() const {
  std::vector<Channel> out;
  for (int s = 1; s <= source_slits_; ++s) {
    out.push_back({kSource, {1, s}, 0.0});
  }
  const double extra = topology_ == Topology::recurrent ? feedback_delay_.value_or(0.0) : 0.0;
  for (const auto& u : units_) {
    for (const auto& t : u.successors) out.push_back({{u.row, u.column}, t, extra});
  }
  return out;
}

double Network::arrival_offset(int steps) const noexcept {
  double offset = steps * channel_delay_;
  if (topology_ == Topology::recurrent && steps > 1) offset += (steps - 1) * feedback_delay_.value_or(0.0);
  return offset;
}

namespace {

void require_matching(const Graph& g, const DelayTable& table) {
  if (g.size() != table.n) throw PreconditionError("graph and delay table sizes differ");
  if (g.size() > kMaxVertices) throw BoundsError("networks support at most 16 columns");
}

}  // namespace

Network compile_feedforward(const Graph& g, const DelayTable& table) {
  require_matching(g, table);
  const int n = g.size();
  std::vector<Unit> units;
  units.reserve(static_cast<std::size_t>(n) * n);
  for (int row = 1; row <= n; ++row) {
    for (Vertex j = 1; j <= n; ++j) {
      Unit u{row, j, table.delay(j), 0, {}};
      if (row < n) {
        for (Vertex k : g.successors(j)) u.successors.push_back({row + 1, k});
        u.slit_count = static_cast<int>(u.successors.size());
      }
      units.push_back(std::move(u));
    }
  }
  return Network(n, Topology::feedforward, std::move(units), n, table.channel_delay, std::nullopt);
}

Network compile_recurrent(const Graph& g, const DelayTable& table, double feedback_delay) {
  require_matching(g, table);
  const int n = g.size();
  if (!(feedback_delay > table.delay(n))) {
    throw ConstraintViolation("feedback delay " + std::to_string(feedback_delay) +
                              " must exceed the largest unit delay " + std::to_string(table.delay(n)));
  }
  std::vector<Unit> units;
  for (Vertex j = 1; j <= n; ++j) {
    Unit u{1, j, table.delay(j), 0, {}};
    for (Vertex k : g.successors(j)) u.successors.push_back({1, k});
    u.slit_count = static_cast<int>(u.successors.size());
    units.push_back(std::move(u));
  }
  return Network(n, Topology::recurrent, std::move(units), n, table.channel_delay, feedback_delay);
}

Network unroll(const Network& recurrent) {
  if (recurrent.topology() != Topology::recurrent) throw PreconditionError("network is not recurrent");
  const int n = recurrent.n();
  std::vector<Unit> units;
  for (int row = 1; row <= n; ++row) {
    for (Vertex j = 1; j <= n; ++j) {
      const Unit& base = recurrent.unit(1, j);
      Unit u{row, j, base.delay, 0, {}};
      if (row < n) {
        for (const auto& t : base.successors) u.successors.push_back({row + 1, t.column});
        u.slit_count = base.slit_count;
      }
      units.push_back(std::move(u));
    }
  }
  return Network(n, Topology::feedforward, std::move(units), recurrent.source_slits(),
                 recurrent.channel_delay(), std::nullopt);
}

ValidationReport validate_network(const Network& net, const Graph& g) {
  ValidationReport report;
  auto& v = report.violations;
  auto name = [](UnitId id) {
    return "(" + std::to_string(id.row) + "," + std::to_string(id.column) + ")";
  };
  if (net.n() != g.size()) {
    v.push_back("network has " + std::to_string(net.n()) + " columns, graph has " +
                std::to_string(g.size()) + " vertices");
    return report;
  }
  const int n = net.n();
  if (net.source_slits() != n) {
    v.push_back("source grating has " + std::to_string(net.source_slits()) + " slits, expected " +
                std::to_string(n));
  }
  if (net.topology() == Topology::recurrent) {
    const double fb = net.feedback_delay().value_or(0.0);
    double largest = 0.0;
    for (const auto& u : net.units()) largest = std::max(largest, u.delay);
    if (!(fb > largest)) v.push_back("feedback delay does not exceed the largest unit delay");
  }

  for (const auto& u : net.units()) {
    const UnitId id{u.row, u.column};
    const bool terminal = net.topology() == Topology::feedforward && u.row == n;
    if (static_cast<std::size_t>(u.slit_count) != u.successors.size()) {
      v.push_back("unit " + name(id) + " has " + std::to_string(u.slit_count) + " slits but " +
                  std::to_string(u.successors.size()) + " channels");
    }
    if (terminal) {
      for (const auto& t : u.successors) {
        v.push_back("terminal unit " + name(id) + " has channel to " + name(t));
      }
      continue;
    }
    const int next_row = net.topology() == Topology::feedforward ? u.row + 1 : 1;
    std::set<UnitId> wired;
    for (const auto& t : u.successors) {
      if (!wired.insert(t).second) {
        v.push_back("duplicate channel " + name(id) + " -> " + name(t));
      } else if (t.row != next_row || !g.adjacent(u.column, t.column)) {
        v.push_back("unexpected channel " + name(id) + " -> " + name(t));
      }
    }
    for (Vertex k : g.successors(u.column)) {
      if (!wired.contains({next_row, k})) {
        v.push_back("missing channel " + name(id) + " -> " + name({next_row, k}));
      }
    }
  }
  return report;
}

nlohmann::json to_json(const Network& net) {
  nlohmann::json units = nlohmann::json::array();
  for (const auto& u : net.units()) {
    units.push_back({{"row", u.row}, {"column", u.column}, {"delay", u.delay}, {"slit_count", u.slit_count}});
  }
  nlohmann::json channels = nlohmann::json::array();
  for (const auto& c : net.channels()) {
    channels.push_back({{"from", {c.from.row, c.from.column}},
                        {"to", {c.to.row, c.to.column}},
                        {"extra_delay", c.extra_delay}});
  }
  nlohmann::json doc = {
      {"format", "hampath-network"},
      {"version", 1},
      {"n", net.n()},
      {"topology", to_string(net.topology())},
      {"channel_delay", net.channel_delay()},
      {"source_slits", net.source_slits()},
      {"units", std::move(units)},
      {"channels", std::move(channels)},
  };
  doc["feedback_delay"] = net.feedback_delay() ? nlohmann::json(*net.feedback_delay()) : nlohmann::json();
  return doc;
}

Network network_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format") != "hampath-network" || doc.at("version") != 1) {
      throw Error("not a version-1 hampath network document");
    }
    const int n = doc.at("n").get<int>();
    const Topology topology = topology_from_string(doc.at("topology").get<std::string>());
    std::map<UnitId, Unit> by_id;
    for (const auto& u : doc.at("units")) {
      Unit unit{u.at("row").get<int>(), u.at("column").get<int>(), u.at("delay").get<double>(),
                u.at("slit_count").get<int>(), {}};
      by_id[{unit.row, unit.column}] = unit;
    }
    for (const auto& c : doc.at("channels")) {
      const UnitId from{c.at("from").at(0).get<int>(), c.at("from").at(1).get<int>()};
      const UnitId to{c.at("to").at(0).get<int>(), c.at("to").at(1).get<int>()};
      if (from == kSource) continue;
      auto it = by_id.find(from);
      if (it == by_id.end()) throw Error("channel leaves an unknown unit");
      it->second.successors.push_back(to);
    }
    std::vector<Unit> units;
    for (auto& [id, u] : by_id) units.push_back(std::move(u));
    std::optional<double> feedback;
    if (doc.contains("feedback_delay") && !doc.at("feedback_delay").is_null()) {
      feedback = doc.at("feedback_delay").get<double>();
    }
    return Network(n, topology, std::move(units), doc.at("source_slits").get<int>(),
                   doc.at("channel_delay").get<double>(), feedback);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed network document: ") + e.what());
  }
}

}  // namespace hampath
