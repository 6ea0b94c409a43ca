#include "hampath/photon.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "hampath/error.hpp"
#include "hampath/kernels.hpp"
#include "row_dp.hpp"

namespace hampath {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::incoherent: return "incoherent";
    case Mode::coherent: return "coherent";
    case Mode::classical: return "classical";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "incoherent") return Mode::incoherent;
  if (s == "coherent") return Mode::coherent;
  if (s == "classical") return Mode::classical;
  throw Error("unknown mode '" + s + "'");
}

double TerminalDistribution::probability(std::size_t i) const {
  switch (mode) {
    case Mode::incoherent: return mass.at(i);
    case Mode::coherent: return std::norm(amplitude.at(i));
    case Mode::classical: return pulses.at(i).convert_to<double>();
  }
  return 0.0;
}

double TerminalDistribution::total_mass() const {
  const auto& kern = kernels::active();
  switch (mode) {
    case Mode::incoherent: return kern.lane_sum(mass);
    case Mode::coherent: return kern.norm_sum(amplitude);
    case Mode::classical: {
      BigInt sum = 0;
      for (const auto& p : pulses) sum += p;
      return sum.convert_to<double>();
    }
  }
  return 0.0;
}

std::optional<std::size_t> TerminalDistribution::find(Vertex column, const ArrivalKey& key) const {
  const TerminalCell probe{column, key};
  auto it = std::lower_bound(cells.begin(), cells.end(), probe);
  if (it == cells.end() || *it != probe) return std::nullopt;
  return static_cast<std::size_t>(it - cells.begin());
}

namespace {

using Complex = std::complex<double>;

// Successor columns per traversal step, index [step-1][v-1].
std::vector<std::vector<std::vector<Vertex>>> successor_table(const Network& net, int steps) {
  const int n = net.n();
  std::vector<std::vector<std::vector<Vertex>>> table(static_cast<std::size_t>(std::max(steps - 1, 0)));
  for (int s = 1; s < steps; ++s) {
    auto& row = table[s - 1];
    row.resize(static_cast<std::size_t>(n));
    for (Vertex v = 1; v <= n; ++v) {
      for (const auto& t : net.unit_at_step(s, v).successors) {
        if (t.column == v) {
          throw PreconditionError("network wires column " + std::to_string(v) + " to itself");
        }
        row[v - 1].push_back(t.column);
      }
    }
  }
  return table;
}

int resolve_steps(const Network& net, const PropagationOptions& opts) {
  const int steps = opts.steps.value_or(net.traversals());
  if (steps < 1 || steps > net.traversals()) {
    throw BoundsError("steps must lie in 1.." + std::to_string(net.traversals()));
  }
  return steps;
}

template <class W>
void fill_weights(TerminalDistribution& d, std::vector<W>&& w);

template <>
void fill_weights(TerminalDistribution& d, std::vector<double>&& w) { d.mass = std::move(w); }
template <>
void fill_weights(TerminalDistribution& d, std::vector<Complex>&& w) { d.amplitude = std::move(w); }
template <>
void fill_weights(TerminalDistribution& d, std::vector<BigInt>&& w) { d.pulses = std::move(w); }

template <class W>
TerminalDistribution snapshot(const Network& net, Mode mode, int step, bool distinct_only,
                              const detail::RowState<W>& state, double lost_mass,
                              const BigInt& lost_pulses, const PropagationStats& stats) {
  TerminalDistribution d;
  d.mode = mode;
  d.topology = net.topology();
  d.n = net.n();
  d.steps = step;
  d.distinct_visits_only = distinct_only;
  d.time_offset = net.arrival_offset(step);
  d.lost_mass = lost_mass;
  d.lost_pulses = lost_pulses;
  d.stats = stats;
  d.stats.rows = step;
  std::vector<W> weights;
  weights.reserve(detail::cell_count(state));
  std::vector<std::size_t> order;
  std::vector<ArrivalKey> keys;
  for (Vertex v = 1; v <= net.n(); ++v) {
    const auto& b = state[v - 1];
    keys.clear();
    for (auto packed : b.keys) keys.push_back(ArrivalKey::from_packed(packed, net.n()));
    order.resize(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return keys[x] < keys[y]; });
    for (auto i : order) {
      d.cells.push_back({v, keys[i]});
      weights.push_back(b.weights[i]);
    }
  }
  fill_weights(d, std::move(weights));
  return d;
}

// Runs the row DP and hands every prefix state to `emit`.
template <class W, class Init, class Child, class Lose, class Emit>
void run(const Network& net, int steps, bool distinct_only, Init init, Child child, Lose lose,
         Emit emit) {
  const int n = net.n();
  const auto succ = successor_table(net, steps);
  detail::RowState<W> state(static_cast<std::size_t>(n));
  for (Vertex v = 1; v <= std::min(n, net.source_slits()); ++v) {
    state[v - 1].keys.push_back(ArrivalKey::unit(v));
    state[v - 1].weights.push_back(init(v));
  }
  PropagationStats stats;
  stats.peak_cells = detail::cell_count(state);
  emit(1, state, stats);
  for (int s = 1; s < steps; ++s) {
    const auto& row = succ[s - 1];
    state = detail::advance(
        state, [&](Vertex v) -> const std::vector<Vertex>& { return row[v - 1]; },
        [&](const W& w, Vertex from, Vertex to) {
          return child(w, static_cast<int>(row[from - 1].size()), to);
        },
        lose, stats, distinct_only);
    emit(s + 1, state, stats);
  }
}

template <class Sink>
void propagate_impl(const Network& net, Mode mode, const PropagationOptions& opts, bool all_prefixes,
                    Sink sink) {
  const int steps = resolve_steps(net, opts);
  const int n = net.n();
  const int slits = net.source_slits();
  if (slits < 1) throw PreconditionError("source grating has no slits");

  double lost = 0.0;
  BigInt lost_pulses = 0;

  // Gratings split equally over the channels actually wired at each unit.
  auto forward = [&](int step, const auto& state, const PropagationStats& stats) {
    if (all_prefixes || step == steps) sink(step, state, lost, lost_pulses, stats);
  };

  switch (mode) {
    case Mode::incoherent: {
      run<double>(
          net, steps, opts.distinct_visits_only, [&](Vertex) { return 1.0 / slits; },
          [](double w, int fanout, Vertex) { return w / fanout; },
          [&](double w) { lost += w; }, forward);
      break;
    }
    case Mode::coherent: {
      std::vector<Complex> phase(static_cast<std::size_t>(n) + 1);
      for (Vertex v = 1; v <= n; ++v) {
        phase[v] = opts.phase_omega == 0.0 ? Complex(1.0, 0.0)
                                           : std::polar(1.0, opts.phase_omega * net.unit(1, v).delay);
      }
      const double src = 1.0 / std::sqrt(static_cast<double>(slits));
      run<Complex>(
          net, steps, opts.distinct_visits_only, [&](Vertex v) { return src * phase[v]; },
          [&](const Complex& a, int fanout, Vertex to) {
            return a / std::sqrt(static_cast<double>(fanout)) * phase[to];
          },
          [&](const Complex& a) { lost += std::norm(a); }, forward);
      break;
    }
    case Mode::classical: {
      run<BigInt>(
          net, steps, opts.distinct_visits_only, [](Vertex) { return BigInt{1}; },
          [](const BigInt& c, int, Vertex) { return c; },
          [&](const BigInt& c) { lost_pulses += c; }, forward);
      break;
    }
  }
}

}  // namespace

TerminalDistribution propagate(const Network& net, Mode mode, const PropagationOptions& opts) {
  TerminalDistribution out;
  propagate_impl(net, mode, opts, false,
                 [&](int step, const auto& state, double lost, const BigInt& lost_pulses,
                     const PropagationStats& stats) {
                   out = snapshot(net, mode, step, opts.distinct_visits_only, state, lost, lost_pulses, stats);
                 });
  return out;
}

std::vector<TerminalDistribution> propagate_prefixes(const Network& net, Mode mode,
                                                     const PropagationOptions& opts) {
  std::vector<TerminalDistribution> out;
  propagate_impl(net, mode, opts, true,
                 [&](int step, const auto& state, double lost, const BigInt& lost_pulses,
                     const PropagationStats& stats) {
                   out.push_back(snapshot(net, mode, step, opts.distinct_visits_only, state, lost, lost_pulses, stats));
                 });
  return out;
}

WindowResult detection_probability(const TerminalDistribution& dist, const DelayTable& table,
                                   double epsilon) {
  if (dist.mode == Mode::classical) {
    throw PreconditionError("detection probabilities need incoherent or coherent propagation");
  }
  if (!(epsilon > 0.0)) throw PreconditionError("detection window width must be positive");
  if (dist.n != table.n) throw PreconditionError("distribution and delay table sizes differ");
  if (dist.steps != dist.n) throw PreconditionError("detection needs a full-length propagation");
  if (dist.distinct_visits_only) throw PreconditionError("detection needs an unpruned propagation");

  const auto& kern = kernels::active();
  const std::size_t count = dist.cells.size();
  std::vector<std::uint64_t> keys(count);
  for (std::size_t i = 0; i < count; ++i) keys[i] = dist.cells[i].key.packed();
  const double offset = dist.time_offset;
  std::vector<double> times(count);
  kern.key_times(keys, table.delays, offset, times);
  const std::uint64_t ham = hamiltonian_key(dist.n).packed();
  double lambda = 0.0;
  kern.key_times({&ham, 1}, table.delays, offset, {&lambda, 1});

  WindowResult r;
  r.window_start = lambda;
  r.window_end = lambda + epsilon;
  r.per_column.assign(static_cast<std::size_t>(dist.n), 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    if (times[i] >= r.window_start && times[i] <= r.window_end) {
      r.per_column[dist.cells[i].column - 1] += dist.probability(i);
    }
  }
  r.total = kern.lane_sum(r.per_column);
  const double gap = kern.min_gap_excluding(keys, times, ham, lambda);
  if (gap != std::numeric_limits<double>::infinity()) {
    r.exact_gap = gap;
    if (epsilon >= gap) {
      r.warning = "window width " + std::to_string(epsilon) +
                  " reaches a non-Hamiltonian arrival " + std::to_string(gap) + " after lambda";
    }
  }
  return r;
}

BalanceReport probability_balance(const TerminalDistribution& dist) {
  BalanceReport b;
  b.mode = dist.mode;
  b.lost_mass = dist.lost_mass;
  switch (dist.mode) {
    case Mode::incoherent:
      b.total_mass = dist.total_mass();
      b.normalization = b.total_mass + b.lost_mass;
      b.deviation = std::fabs(b.normalization - 1.0);
      break;
    case Mode::coherent:
      b.total_mass = dist.total_mass();
      b.normalization = b.total_mass + b.lost_mass;
      b.deviation = b.normalization - 1.0;
      break;
    case Mode::classical:
      for (const auto& p : dist.pulses) b.total_pulses += p;
      b.lost_pulses = dist.lost_pulses;
      b.total_mass = b.total_pulses.convert_to<double>();
      b.normalization = b.total_mass;
      break;
  }
  return b;
}

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string distribution_csv(const TerminalDistribution& dist, const DelayTable& table) {
  std::string out = "vertex,exponents,time,weight,mode\n";
  std::vector<std::uint64_t> keys(dist.cells.size());
  for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = dist.cells[i].key.packed();
  std::vector<double> times(keys.size());
  kernels::active().key_times(keys, table.delays, dist.time_offset, times);
  const std::string mode = to_string(dist.mode);
  for (std::size_t i = 0; i < dist.cells.size(); ++i) {
    const auto& c = dist.cells[i];
    std::string exps;
    for (int e : c.key.exponents()) {
      if (!exps.empty()) exps += ' ';
      exps += std::to_string(e);
    }
    std::string weight;
    switch (dist.mode) {
      case Mode::incoherent: weight = fmt_double(dist.mass[i]); break;
      case Mode::coherent: {
        const auto a = dist.amplitude[i];
        weight = fmt_double(a.real()) + (std::signbit(a.imag()) ? "" : "+") + fmt_double(a.imag()) + "i";
        break;
      }
      case Mode::classical: weight = dist.pulses[i].str(); break;
    }
    out += std::to_string(c.column) + ',' + exps + ',' + fmt_double(times[i]) + ',' + weight + ',' + mode + '\n';
  }
  return out;
}

}  // namespace hampath
