#include <cmath>
#include <random>

#include "doctest.h"
#include "hampath/error.hpp"
#include "hampath/photon.hpp"
#include "oracles.hpp"

using namespace hampath;

namespace {

constexpr double kTol = 1e-12;

Network ff(const Graph& g, double channel_delay = 0.0) {
  return compile_feedforward(g, build_delay_table(g.size(), channel_delay));
}

double ham_mass(const TerminalDistribution& d) {
  const auto ham = hamiltonian_key(d.n);
  double total = 0.0;
  for (std::size_t i = 0; i < d.cells.size(); ++i) {
    if (d.cells[i].key == ham) total += d.probability(i);
  }
  return total;
}

bool min_out_degree_positive(const Graph& g) {
  for (Vertex v = 1; v <= g.size(); ++v) {
    if (out_degree(g, v) == 0) return false;
  }
  return true;
}

// Checks every mode against explicit walk enumeration.
void check_against_walks(const Graph& g) {
  const auto want = oracle::terminal_weights(g);
  const Network net = ff(g);
  const auto inc = propagate(net, Mode::incoherent);
  const auto coh = propagate(net, Mode::coherent);
  const auto cls = propagate(net, Mode::classical);
  REQUIRE(inc.cells.size() == want.size());
  REQUIRE(coh.cells == inc.cells);
  REQUIRE(cls.cells == inc.cells);
  std::size_t i = 0;
  for (const auto& [cell, w] : want) {
    CHECK(inc.cells[i].column == cell.first);
    CHECK(inc.cells[i].key.exponents() == cell.second);
    CHECK(inc.mass[i] == doctest::Approx(w.mass).epsilon(kTol));
    CHECK(std::abs(coh.amplitude[i] - w.amplitude) < kTol);
    CHECK(cls.pulses[i] == w.pulses);
    ++i;
  }
  CHECK(inc.lost_mass == doctest::Approx(oracle::lost_mass(g)).epsilon(kTol));
}

}  // namespace

TEST_CASE("incoherent propagation on K3") {
  const auto d = propagate(ff(complete_graph(3)), Mode::incoherent);
  CHECK(d.cells.size() == 9);
  for (std::size_t i = 0; i < d.cells.size(); ++i) {
    const double want = is_hamiltonian_key(d.cells[i].key) ? 1.0 / 6.0 : 1.0 / 12.0;
    CHECK(d.mass[i] == doctest::Approx(want).epsilon(1e-15));
    CHECK(d.cells[i].key.total() == 3);
  }
  CHECK(ham_mass(d) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.lost_mass == 0.0);
}

TEST_CASE("coherent zero-phase propagation on K3") {
  const auto d = propagate(ff(complete_graph(3)), Mode::coherent);
  for (std::size_t i = 0; i < d.cells.size(); ++i) {
    const double want = is_hamiltonian_key(d.cells[i].key) ? 1.0 / std::sqrt(3.0) : 0.5 / std::sqrt(3.0);
    CHECK(d.amplitude[i].real() == doctest::Approx(want).epsilon(1e-15));
    CHECK(d.amplitude[i].imag() == 0.0);
  }
  CHECK(std::fabs(d.total_mass() - 1.5) < kTol);
  const auto bal = probability_balance(d);
  CHECK(std::fabs(bal.normalization - 1.5) < kTol);
  CHECK(std::fabs(*bal.deviation - 0.5) < kTol);
}

TEST_CASE("classical propagation on K3") {
  const auto d = propagate(ff(complete_graph(3)), Mode::classical);
  BigInt total = 0;
  BigInt ham = 0;
  for (std::size_t i = 0; i < d.cells.size(); ++i) {
    total += d.pulses[i];
    if (is_hamiltonian_key(d.cells[i].key)) ham += d.pulses[i];
  }
  CHECK(total == 12);
  CHECK(ham == 6);
  CHECK(total == count_walks(complete_graph(3), 2));
  CHECK(probability_balance(d).total_pulses == 12);
}

TEST_CASE("propagation matches walk enumeration") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 7;
    check_against_walks(oracle::random_graph(n, 0.25 + 0.1 * (trial % 6), rng, trial % 3 == 0));
  }
  check_against_walks(complete_graph(5));
  check_against_walks(star_graph(5));
}

TEST_CASE("detection_probability") {
  const auto t3 = build_delay_table(3);
  const double eps = 0.2027325540540822;

  const auto k3 = detection_probability(propagate(ff(complete_graph(3)), Mode::incoherent), t3, eps);
  for (double p : k3.per_column) CHECK(p == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(k3.total == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_FALSE(k3.warning);
  REQUIRE(k3.exact_gap);
  CHECK(*k3.exact_gap == doctest::Approx(0.4054651081081644).epsilon(1e-13));

  const auto p3 = detection_probability(propagate(ff(path_graph(3)), Mode::incoherent), t3, eps);
  CHECK(p3.per_column[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(p3.per_column[1] == 0.0);
  CHECK(p3.per_column[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(p3.total == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const auto t4 = build_delay_table(4);
  const auto s4 = detection_probability(propagate(ff(star_graph(4)), Mode::incoherent), t4, 0.18);
  for (double p : s4.per_column) CHECK(p == 0.0);
  CHECK(s4.total == 0.0);

  // A window reaching ln 45 also catches the 2,3,2 and 1,3,1 arrivals.
  const auto wide = detection_probability(propagate(ff(complete_graph(3)), Mode::incoherent), t3, 0.5);
  CHECK(wide.warning);
  CHECK(wide.total > 0.5);

  CHECK_THROWS_AS(detection_probability(propagate(ff(complete_graph(3)), Mode::classical), t3, eps),
                  PreconditionError);
  CHECK_THROWS_AS(detection_probability(propagate(ff(complete_graph(3)), Mode::incoherent), t3, 0.0),
                  PreconditionError);
}

TEST_CASE("detection windows follow the channel delay") {
  const auto t = build_delay_table(3, 0.4);
  const auto d = propagate(compile_feedforward(complete_graph(3), t), Mode::incoherent);
  CHECK(d.time_offset == doctest::Approx(1.2));
  const auto w = detection_probability(d, t, 0.1);
  CHECK(w.window_start == doctest::Approx(std::log(30.0) + 1.2).epsilon(1e-14));
  CHECK(w.total == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("absorbing units account lost mass") {
  // 3 is a sink: its row-1 share (1/3) and the 1->2->3 share stop early.
  const Graph g = Graph::from_edges(3, std::vector<Edge>{{1, 2}, {2, 3}, {2, 1}}, true);
  const auto d = propagate(ff(g), Mode::incoherent);
  const auto bal = probability_balance(d);
  CHECK(bal.lost_mass > 0.0);
  CHECK(bal.lost_mass == doctest::Approx(oracle::lost_mass(g)).epsilon(kTol));
  CHECK(*bal.deviation <= kTol);
  CHECK(bal.total_mass + bal.lost_mass == doctest::Approx(1.0).epsilon(kTol));

  const auto cls = propagate(ff(g), Mode::classical);
  CHECK(cls.lost_pulses > 0);
}

TEST_CASE("probability_balance on K3 incoherent") {
  const auto bal = probability_balance(propagate(ff(complete_graph(3)), Mode::incoherent));
  CHECK(bal.total_mass == doctest::Approx(1.0));
  CHECK(bal.lost_mass == 0.0);
  CHECK(*bal.deviation <= 1e-12);
}

TEST_CASE("conservation and the Hamiltonian mass formula") {
  std::mt19937_64 rng(103);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + trial % 7;
    const Graph g = oracle::random_graph(n, 0.3 + 0.1 * (trial % 5), rng, trial % 3 == 0);
    const auto d = propagate(ff(g), Mode::incoherent);
    if (min_out_degree_positive(g)) {
      CHECK(std::fabs(d.total_mass() - 1.0) <= kTol);
      ++checked;
    }
    CHECK(std::fabs(d.total_mass() + d.lost_mass - 1.0) <= kTol);

    double formula = 0.0;
    const auto paths = brute_force_hamiltonian_paths(g);
    for (const auto& p : paths) {
      double prod = 1.0;
      for (std::size_t i = 0; i + 1 < p.size(); ++i) prod /= out_degree(g, p[i]);
      formula += prod;
    }
    formula /= n;
    CHECK(std::fabs(ham_mass(d) - formula) <= kTol);
    CHECK((ham_mass(d) > 0.0) == !paths.empty());
  }
  CHECK(checked > 30);
}

TEST_CASE("classical counts equal walk counts") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 8;
    const Graph g = oracle::random_graph(n, 0.5, rng, trial % 2 == 0);
    const auto bal = probability_balance(propagate(ff(g), Mode::classical));
    CHECK(bal.total_pulses == count_walks(g, n - 1));
  }
}

TEST_CASE("phase rotation multiplies each cell by exp(i omega t)") {
  const Graph g = complete_graph(4);
  const Network net = ff(g);
  const auto table = build_delay_table(4);
  PropagationOptions opts;
  opts.phase_omega = 0.9;
  const auto plain = propagate(net, Mode::coherent);
  const auto rotated = propagate(net, Mode::coherent, opts);
  REQUIRE(plain.cells == rotated.cells);
  for (std::size_t i = 0; i < plain.cells.size(); ++i) {
    const double t = key_time(plain.cells[i].key, table, 4);
    CHECK(std::abs(rotated.amplitude[i] - plain.amplitude[i] * std::polar(1.0, 0.9 * t)) < kTol);
  }
  CHECK(std::fabs(rotated.total_mass() - plain.total_mass()) < kTol);
}

TEST_CASE("prefix propagation equals truncated propagation") {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 6;
    const Network net = ff(oracle::random_graph(n, 0.5, rng, trial % 2 == 1), 0.1);
    for (Mode mode : {Mode::incoherent, Mode::coherent, Mode::classical}) {
      const auto all = propagate_prefixes(net, mode);
      REQUIRE(all.size() == static_cast<std::size_t>(n));
      for (int r = 1; r <= n; ++r) {
        PropagationOptions opts;
        opts.steps = r;
        const auto one = propagate(net, mode, opts);
        const auto& pre = all[r - 1];
        CHECK(pre.cells == one.cells);
        CHECK(pre.mass == one.mass);
        CHECK(pre.amplitude == one.amplitude);
        CHECK(pre.pulses == one.pulses);
        CHECK(pre.lost_mass == one.lost_mass);
        CHECK(pre.time_offset == one.time_offset);
        for (const auto& c : one.cells) CHECK(c.key.total() == r);
      }
    }
  }
  PropagationOptions bad;
  bad.steps = 0;
  CHECK_THROWS_AS(propagate(ff(path_graph(3)), Mode::incoherent, bad), BoundsError);
}

TEST_CASE("recurrent and feedforward distributions agree") {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 24; ++trial) {
    const int n = 1 + trial % 8;
    const Graph g = oracle::random_graph(n, 0.3 + 0.1 * (trial % 5), rng, trial % 3 == 0);
    const auto table = build_delay_table(n);
    const double delta = table.delay(n) + 0.5;
    const Network rec = compile_recurrent(g, table, delta);
    const Network fwd = compile_feedforward(g, table);
    for (Mode mode : {Mode::incoherent, Mode::coherent, Mode::classical}) {
      const auto a = propagate(rec, mode);
      const auto b = propagate(fwd, mode);
      REQUIRE(a.cells == b.cells);
      CHECK(a.time_offset - (n - 1) * delta == doctest::Approx(b.time_offset));
      for (std::size_t i = 0; i < a.cells.size(); ++i) CHECK(std::fabs(a.probability(i) - b.probability(i)) <= kTol);
    }
    const auto w = detection_probability(propagate(rec, Mode::incoherent), table, 0.01);
    CHECK(w.window_start == doctest::Approx(hamiltonian_instant(table) + (n - 1) * delta));
  }
}

TEST_CASE("self-wired networks are rejected") {
  auto units = ff(path_graph(3)).units();
  units[0].successors = {{2, 1}};
  units[0].slit_count = 1;
  const Network bad(3, Topology::feedforward, units, 3, 0.0, std::nullopt);
  CHECK_THROWS_AS(propagate(bad, Mode::incoherent), PreconditionError);
}

TEST_CASE("distribution_csv") {
  const auto table = build_delay_table(3);
  const auto csv = distribution_csv(propagate(ff(complete_graph(3)), Mode::incoherent), table);
  CHECK(csv.rfind("vertex,exponents,time,weight,mode\n1,1 1 1,3.40119738166215", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
  const auto cls = distribution_csv(propagate(ff(complete_graph(3)), Mode::classical), table);
  CHECK(cls.find("1,2 0 1,2.99573227355399") != std::string::npos);
  CHECK(cls.find(",1,classical\n") != std::string::npos);
  const auto coh = distribution_csv(propagate(ff(path_graph(3)), Mode::coherent), table);
  CHECK(coh.find("+0i,coherent") != std::string::npos);
}

TEST_CASE("sample_photon support and reproducibility") {
  const Network p3 = ff(path_graph(3));
  const auto dist = propagate(p3, Mode::incoherent);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto shot = sample_photon(p3, seed);
    CHECK_FALSE(shot.lost);
    CHECK(dist.find(shot.column, shot.key).has_value());
    CHECK(sample_photon(p3, seed) == shot);
  }
  const Network s4 = ff(star_graph(4));
  const auto summary = sample_photons(s4, 5000, 77);
  for (const auto& c : summary.cells) CHECK_FALSE(is_hamiltonian_key(c.key));
  CHECK(summary.count(1, hamiltonian_key(4)) == 0);
}

TEST_CASE("sample batches are independent of thread count") {
  const Network net = ff(complete_graph(4));
  const auto a = sample_photons(net, 3000, 5, 1);
  const auto b = sample_photons(net, 3000, 5, 3);
  CHECK(a.cells == b.cells);
  CHECK(a.counts == b.counts);
  CHECK(shot_seed(5, 0) != shot_seed(5, 1));
  CHECK(shot_seed(5, 0) != shot_seed(6, 0));
}

TEST_CASE("sampled frequencies match incoherent masses within 4 sigma") {
  std::mt19937_64 rng(127);
  const std::uint64_t shots = 100000;
  for (int trial = 0; trial < 3; ++trial) {
    const Graph g = oracle::random_graph(5, 0.5, rng, trial == 2);
    const Network net = ff(g);
    const auto dist = propagate(net, Mode::incoherent);
    const auto s = sample_photons(net, shots, 1000 + trial);
    std::uint64_t seen = 0;
    for (std::size_t i = 0; i < dist.cells.size(); ++i) {
      const double p = dist.mass[i];
      const double count = static_cast<double>(s.count(dist.cells[i].column, dist.cells[i].key));
      seen += static_cast<std::uint64_t>(count);
      const double sigma = std::sqrt(shots * p * (1.0 - p));
      CHECK(std::fabs(count - shots * p) <= 4.0 * sigma + 1e-9);
    }
    const double pl = dist.lost_mass;
    CHECK(std::fabs(static_cast<double>(s.lost) - shots * pl) <= 4.0 * std::sqrt(shots * pl * (1.0 - pl)) + 1e-9);
    CHECK(seen + s.lost == shots);
  }
}

TEST_CASE("sampling lands at the K3 Hamiltonian instant half the time") {
  const auto s = sample_photons(ff(complete_graph(3)), 120000, 2024);
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < s.cells.size(); ++i) {
    if (is_hamiltonian_key(s.cells[i].key)) hits += s.counts[i];
  }
  CHECK(std::fabs(static_cast<double>(hits) / 120000.0 - 0.5) <= 0.005);
}

TEST_CASE("distinct-visit pruning keeps exact weights on 0/1 keys") {
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    const Network net = ff(oracle::random_graph(n, 0.6, rng, trial % 2 == 0));
    PropagationOptions prune;
    prune.distinct_visits_only = true;
    const auto full = propagate_prefixes(net, Mode::incoherent);
    const auto pruned = propagate_prefixes(net, Mode::incoherent, prune);
    REQUIRE(pruned.size() == full.size());
    for (std::size_t r = 0; r < full.size(); ++r) {
      std::vector<TerminalCell> want;
      std::vector<double> mass;
      for (std::size_t i = 0; i < full[r].cells.size(); ++i) {
        const auto e = full[r].cells[i].key.exponents();
        if (std::all_of(e.begin(), e.end(), [](int c) { return c <= 1; })) {
          want.push_back(full[r].cells[i]);
          mass.push_back(full[r].mass[i]);
        }
      }
      CHECK(pruned[r].cells == want);
      CHECK(pruned[r].mass == mass);
      CHECK(pruned[r].distinct_visits_only);
    }
    CHECK_THROWS_AS(detection_probability(pruned.back(), build_delay_table(n), 0.01), PreconditionError);
  }
}
