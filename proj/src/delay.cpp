#include "hampath/delay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hampath/error.hpp"
#include "hampath/kernels.hpp"
#include "row_dp.hpp"

namespace hampath {

namespace {

void check_dims(int dims) {
  if (dims < 1 || dims > kMaxVertices) {
    throw BoundsError("arrival keys support 1.." + std::to_string(kMaxVertices) +
                      " vertices, got " + std::to_string(dims));
  }
}

void check_vertex(Vertex j, int dims) {
  if (j < 1 || j > dims) {
    throw BoundsError("vertex " + std::to_string(j) + " outside 1.." + std::to_string(dims));
  }
}

}  // namespace

ArrivalKey ArrivalKey::zeros(int dims) {
  check_dims(dims);
  return ArrivalKey(0, dims);
}

ArrivalKey ArrivalKey::from_exponents(std::span<const int> exponents) {
  const int dims = static_cast<int>(exponents.size());
  check_dims(dims);
  std::uint64_t packed = 0;
  for (int j = 0; j < dims; ++j) {
    if (exponents[j] < 0 || exponents[j] > kMaxExponent) {
      throw BoundsError("exponent " + std::to_string(exponents[j]) + " outside 0.." +
                        std::to_string(kMaxExponent));
    }
    packed |= static_cast<std::uint64_t>(exponents[j]) << (4 * j);
  }
  return ArrivalKey(packed, dims);
}

ArrivalKey ArrivalKey::from_packed(std::uint64_t packed, int dims) {
  check_dims(dims);
  if (dims < 16 && (packed >> (4 * dims)) != 0) {
    throw BoundsError("packed key has exponents beyond dimension " + std::to_string(dims));
  }
  return ArrivalKey(packed, dims);
}

int ArrivalKey::exponent(Vertex j) const {
  check_vertex(j, dims_);
  return static_cast<int>((packed_ >> (4 * (j - 1))) & 0xF);
}

int ArrivalKey::total() const noexcept {
  int sum = 0;
  for (int j = 0; j < dims_; ++j) sum += static_cast<int>((packed_ >> (4 * j)) & 0xF);
  return sum;
}

ArrivalKey ArrivalKey::incremented(Vertex j) const { return with_exponent(j, exponent(j) + 1); }

ArrivalKey ArrivalKey::with_exponent(Vertex j, int value) const {
  check_vertex(j, dims_);
  if (value < 0 || value > kMaxExponent) {
    throw BoundsError("exponent " + std::to_string(value) + " outside 0.." + std::to_string(kMaxExponent));
  }
  const int shift = 4 * (j - 1);
  const std::uint64_t cleared = packed_ & ~(std::uint64_t{0xF} << shift);
  return ArrivalKey(cleared | (static_cast<std::uint64_t>(value) << shift), dims_);
}

std::vector<int> ArrivalKey::exponents() const {
  std::vector<int> out(static_cast<std::size_t>(dims_));
  for (int j = 0; j < dims_; ++j) out[j] = static_cast<int>((packed_ >> (4 * j)) & 0xF);
  return out;
}

std::string ArrivalKey::to_string() const {
  std::string s = "(";
  for (int j = 0; j < dims_; ++j) {
    if (j) s += ',';
    s += std::to_string((packed_ >> (4 * j)) & 0xF);
  }
  return s + ")";
}

std::vector<std::uint64_t> first_primes(int n) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t c = 2; static_cast<int>(primes.size()) < n; ++c) {
    bool prime = true;
    for (auto p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

DelayTable delay_table_from_primes(std::vector<std::uint64_t> primes, double channel_delay) {
  if (primes.empty()) throw BoundsError("delay table needs at least one prime");
  if (!(channel_delay >= 0.0)) throw ConstraintViolation("channel delay must be non-negative");
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const auto p = primes[i];
    bool prime = p >= 2;
    for (std::uint64_t d = 2; prime && d * d <= p; ++d) prime = p % d != 0;
    if (!prime) throw ConstraintViolation(std::to_string(p) + " is not prime");
    if (i > 0 && primes[i - 1] >= p) {
      throw ConstraintViolation("primes must be distinct and increasing");
    }
  }
  DelayTable table;
  table.n = static_cast<int>(primes.size());
  table.delays.reserve(primes.size());
  for (auto p : primes) table.delays.push_back(std::log(static_cast<double>(p)));
  table.primes = std::move(primes);
  table.channel_delay = channel_delay;
  return table;
}

DelayTable build_delay_table(int n, double channel_delay) {
  if (n < 1) throw BoundsError("delay table needs n >= 1");
  return delay_table_from_primes(first_primes(n), channel_delay);
}

double key_time(const ArrivalKey& key, const DelayTable& table, int rows_traversed) {
  if (key.dims() != table.n) {
    throw BoundsError("key has " + std::to_string(key.dims()) + " exponents, table has " +
                      std::to_string(table.n) + " delays");
  }
  if (rows_traversed != key.total()) {
    throw PreconditionError("rows traversed must equal the key's exponent sum");
  }
  const std::uint64_t packed = key.packed();
  double out = 0.0;
  kernels::active().key_times({&packed, 1}, table.delays, rows_traversed * table.channel_delay,
                              {&out, 1});
  return out;
}

BigInt key_product(const ArrivalKey& key, const DelayTable& table) {
  if (key.dims() != table.n) throw BoundsError("key and delay table dimensions differ");
  BigInt product = 1;
  for (Vertex j = 1; j <= key.dims(); ++j) {
    for (int e = 0; e < key.exponent(j); ++e) product *= table.primes[j - 1];
  }
  return product;
}

ArrivalKey hamiltonian_key(int n) {
  check_dims(n);
  std::uint64_t packed = 0;
  for (Vertex j = 1; j <= n; ++j) packed |= ArrivalKey::unit(j);
  return ArrivalKey::from_packed(packed, n);
}

bool is_hamiltonian_key(const ArrivalKey& key) {
  if (key.dims() == 0) return false;
  return key == hamiltonian_key(key.dims());
}

double hamiltonian_instant(const DelayTable& table) {
  return key_time(hamiltonian_key(table.n), table, table.n);
}

double delta_min_approx(int n) {
  if (n < 2) throw BoundsError("minimum gap approximation needs n >= 2");
  return 2.0 / (n * std::log(static_cast<double>(n)));
}

double last_delay_gap(const DelayTable& table) {
  if (table.n < 2) throw BoundsError("delay gaps need n >= 2");
  return table.delays[table.n - 1] - table.delays[table.n - 2];
}

double min_adjacent_delay_gap(const DelayTable& table) {
  if (table.n < 2) throw BoundsError("delay gaps need n >= 2");
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j + 1 < table.n; ++j) best = std::min(best, table.delays[j + 1] - table.delays[j]);
  return best;
}

std::size_t RealizableRow::cell_count() const {
  std::size_t total = 0;
  for (const auto& keys : keys_by_vertex) total += keys.size();
  return total;
}

std::vector<ArrivalKey> RealizableRow::distinct_keys() const {
  std::vector<ArrivalKey> all;
  for (const auto& keys : keys_by_vertex) all.insert(all.end(), keys.begin(), keys.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

std::vector<RealizableRow> realizable_keys(const Graph& g, int rows) {
  const int n = g.size();
  check_dims(n);
  if (rows < 1) throw BoundsError("realizable key census needs at least one row");

  std::vector<std::vector<Vertex>> succ(static_cast<std::size_t>(n));
  for (Vertex v = 1; v <= n; ++v) succ[v - 1] = g.successors(v);

  detail::RowState<detail::Present> state(static_cast<std::size_t>(n));
  for (Vertex v = 1; v <= n; ++v) {
    state[v - 1].keys.push_back(ArrivalKey::unit(v));
    state[v - 1].weights.emplace_back();
  }

  auto snapshot = [n](const detail::RowState<detail::Present>& s, int row) {
    RealizableRow r;
    r.row = row;
    r.keys_by_vertex.resize(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
      for (auto packed : s[c].keys) r.keys_by_vertex[c].push_back(ArrivalKey::from_packed(packed, n));
    }
    return r;
  };

  std::vector<RealizableRow> out;
  out.push_back(snapshot(state, 1));
  PropagationStats stats;
  for (int row = 2; row <= rows; ++row) {
    state = detail::advance(
        state, [&](Vertex v) -> const std::vector<Vertex>& { return succ[v - 1]; },
        [](const detail::Present& w, Vertex, Vertex) { return w; }, [](const detail::Present&) {},
        stats);
    out.push_back(snapshot(state, row));
  }
  return out;
}

std::optional<double> delta_min_exact(const Graph& g, const DelayTable& table, int cap) {
  if (g.size() > cap) throw CapExceeded(g.size(), cap);
  if (g.size() != table.n) throw PreconditionError("graph and delay table sizes differ");
  const int n = g.size();
  const auto last = realizable_keys(g, n).back().distinct_keys();

  const auto ham = hamiltonian_key(n).packed();
  std::vector<std::uint64_t> keys;
  keys.reserve(last.size());
  bool has_ham = false;
  for (const auto& k : last) {
    keys.push_back(k.packed());
    has_ham = has_ham || k.packed() == ham;
  }
  if (!has_ham) return std::nullopt;

  const auto& kern = kernels::active();
  std::vector<double> times(keys.size());
  kern.key_times(keys, table.delays, 0.0, times);
  double lambda = 0.0;
  kern.key_times({&ham, 1}, table.delays, 0.0, {&lambda, 1});
  const double gap = kern.min_gap_excluding(keys, times, ham, lambda);
  if (gap == std::numeric_limits<double>::infinity()) return std::nullopt;
  return gap;
}

double default_epsilon(const Graph& g, const DelayTable& table, int cap) {
  if (auto gap = delta_min_exact(g, table, cap)) return *gap / 2.0;
  return delta_min_approx(std::max(g.size(), 2)) / 2.0;
}

}  // namespace hampath
