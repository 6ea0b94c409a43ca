#include "hampath/procedures.hpp"

#include <cmath>
#include <random>

#include "hampath/error.hpp"
#include "hampath/network.hpp"

namespace hampath {

namespace {

void check_cap(const Graph& g, int cap) {
  if (g.size() > cap) throw CapExceeded(g.size(), cap);
}

}  // namespace

DetectionOutcome detect_hamiltonian(const Graph& g, const DetectionOptions& opts) {
  check_cap(g, opts.cap);
  const int n = g.size();
  const DelayTable table = build_delay_table(n, opts.channel_delay);
  const Network net = compile_feedforward(g, table);

  DetectionOutcome out;
  out.mode = opts.mode;
  out.propagation = opts.propagation;
  out.epsilon = opts.epsilon ? *opts.epsilon : default_epsilon(g, table, opts.cap);
  if (!(out.epsilon > 0.0)) throw PreconditionError("detection window width must be positive");

  if (opts.mode == DetectionMode::exact) {
    PropagationOptions prop;
    prop.phase_omega = opts.phase_omega;
    const auto dist = propagate(net, opts.propagation, prop);
    const auto window = detection_probability(dist, table, out.epsilon);
    const ArrivalKey ham = hamiltonian_key(n);
    out.per_vertex.assign(static_cast<std::size_t>(n), 0.0);
    for (Vertex v = 1; v <= n; ++v) {
      if (const auto idx = dist.find(v, ham)) out.per_vertex[v - 1] = dist.probability(*idx);
      out.total += out.per_vertex[v - 1];
    }
    out.window_start = window.window_start;
    out.warning = window.warning;
  } else {
    if (opts.shots < 1) throw PreconditionError("sampled detection needs at least one shot");
    if (!opts.seed) throw PreconditionError("sampled detection needs an explicit seed");
    out.propagation = Mode::incoherent;
    out.shots = opts.shots;
    out.window_start = hamiltonian_instant(table);
    const ArrivalKey ham = hamiltonian_key(n);
    const auto summary = sample_photons(net, opts.shots, *opts.seed);
    std::vector<std::uint64_t> hits(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < summary.cells.size(); ++i) {
      if (summary.cells[i].key == ham) hits[summary.cells[i].column - 1] += summary.counts[i];
    }
    out.per_vertex.assign(static_cast<std::size_t>(n), 0.0);
    for (int v = 0; v < n; ++v) {
      out.hits += hits[v];
      out.per_vertex[v] = static_cast<double>(hits[v]) / static_cast<double>(opts.shots);
    }
    out.total = static_cast<double>(out.hits) / static_cast<double>(opts.shots);
  }

  for (Vertex v = 1; v <= n; ++v) {
    if (out.per_vertex[v - 1] > 0.0) out.end_vertices.push_back(v);
  }
  out.hamiltonian_detected = !out.end_vertices.empty();
  out.inconclusive = opts.mode == DetectionMode::sampled && !out.hamiltonian_detected;
  return out;
}

Construction construct_path(const Graph& g, Vertex end_vertex, ChoicePolicy policy,
                            std::uint64_t seed, int cap) {
  check_cap(g, cap);
  const int n = g.size();
  if (end_vertex < 1 || end_vertex > n) {
    throw BoundsError("end vertex " + std::to_string(end_vertex) + " outside 1.." + std::to_string(n));
  }
  const DelayTable table = build_delay_table(n);
  const Network net = compile_feedforward(g, table);
  // Entry r-1 is the terminal distribution of the network cut after row r.
  PropagationOptions prop;
  prop.distinct_visits_only = true;
  const auto prefixes = propagate_prefixes(net, Mode::incoherent, prop);

  ArrivalKey target = hamiltonian_key(n);
  {
    const auto& full = prefixes.back();
    const auto idx = full.find(end_vertex, target);
    if (!idx || !(full.mass[*idx] > 0.0)) {
      throw PreconditionError("no Hamiltonian path ends at vertex " + std::to_string(end_vertex));
    }
  }

  Construction out;
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  std::vector<Vertex> reversed{end_vertex};
  used[end_vertex] = true;
  target = target.with_exponent(end_vertex, 0);
  std::mt19937_64 rng(seed);

  for (int pass = 1; pass < n; ++pass) {
    ConstructionPass p;
    p.index = pass;
    p.rows = n - pass;
    p.head = reversed.back();
    p.target_key = target;
    p.window_start = key_time(target, table, p.rows);
    const auto& dist = prefixes[p.rows - 1];
    for (Vertex k = 1; k <= n; ++k) {
      if (used[k] || !g.adjacent(k, p.head)) continue;
      const auto idx = dist.find(k, target);
      if (idx && dist.mass[*idx] > 0.0) {
        p.candidates.push_back(k);
        p.candidate_weights.push_back(dist.mass[*idx]);
      }
    }
    if (p.candidates.empty()) {
      throw InternalError("construction pass " + std::to_string(pass) + " found no candidate vertex");
    }
    if (policy == ChoicePolicy::deterministic) {
      p.chosen = p.candidates.front();
    } else {
      std::discrete_distribution<std::size_t> pick(p.candidate_weights.begin(), p.candidate_weights.end());
      p.chosen = p.candidates[pick(rng)];
    }
    used[p.chosen] = true;
    reversed.push_back(p.chosen);
    target = target.with_exponent(p.chosen, 0);
    out.passes.push_back(std::move(p));
  }
  out.path.assign(reversed.rbegin(), reversed.rend());
  if (!is_hamiltonian_path(g, out.path)) {
    throw InternalError("constructed sequence is not a Hamiltonian path");
  }
  return out;
}

CostReport construction_cost(const Graph& g) {
  const int n = g.size();
  const DelayTable table = build_delay_table(n);
  const Network net = compile_feedforward(g, table);
  CostReport r;
  r.passes = n - 1;
  r.n2_log_n = static_cast<double>(n) * n * std::log(static_cast<double>(n));
  for (int pass = 1; pass < n; ++pass) {
    PropagationOptions prop;
    prop.steps = n - pass;
    r.per_pass.push_back(propagate(net, Mode::incoherent, prop).stats);
  }
  return r;
}

}  // namespace hampath
