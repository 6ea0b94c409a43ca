#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hampath/graph.hpp"

namespace hampath {

// Exponent vectors are packed four bits per vertex into one word, which bounds
// every network this library simulates.
inline constexpr int kMaxVertices = 16;
inline constexpr int kMaxExponent = 15;

// Exponent vector c over the n delays. The arrival time it stands for is
// sum_j c_j * delay_j, and two keys denote the same instant iff they are equal.
class ArrivalKey {
 public:
  ArrivalKey() = default;
  static ArrivalKey zeros(int dims);
  static ArrivalKey from_exponents(std::span<const int> exponents);
  static ArrivalKey from_packed(std::uint64_t packed, int dims);

  int dims() const noexcept { return dims_; }
  std::uint64_t packed() const noexcept { return packed_; }

  // j is a 1-based vertex index.
  int exponent(Vertex j) const;
  int total() const noexcept;
  ArrivalKey incremented(Vertex j) const;
  ArrivalKey with_exponent(Vertex j, int value) const;
  std::vector<int> exponents() const;
  std::string to_string() const;

  static constexpr std::uint64_t unit(Vertex j) noexcept {
    return std::uint64_t{1} << (4 * (j - 1));
  }

  // Lexicographic on the exponent vector (c_1 first) among equal dimensions.
  friend std::strong_ordering operator<=>(const ArrivalKey& a, const ArrivalKey& b) noexcept {
    if (a.dims_ != b.dims_) return a.dims_ <=> b.dims_;
    for (int j = 0; j < a.dims_; ++j) {
      const auto x = (a.packed_ >> (4 * j)) & 0xF;
      const auto y = (b.packed_ >> (4 * j)) & 0xF;
      if (x != y) return x <=> y;
    }
    return std::strong_ordering::equal;
  }
  friend bool operator==(const ArrivalKey&, const ArrivalKey&) = default;

 private:
  ArrivalKey(std::uint64_t packed, int dims) : packed_(packed), dims_(dims) {}

  std::uint64_t packed_ = 0;
  int dims_ = 0;
};

struct DelayTable {
  int n = 0;
  std::vector<std::uint64_t> primes;
  std::vector<double> delays;  // natural logs of `primes`
  double channel_delay = 0.0;

  // 1-based.
  double delay(Vertex j) const { return delays.at(static_cast<std::size_t>(j - 1)); }
};

std::vector<std::uint64_t> first_primes(int n);

DelayTable build_delay_table(int n, double channel_delay = 0.0);
// Any increasing list of distinct primes; throws ConstraintViolation otherwise.
DelayTable delay_table_from_primes(std::vector<std::uint64_t> primes, double channel_delay = 0.0);

// sum_j c_j delay_j + rows_traversed * channel_delay. Summation runs j = 1..n
// in order, so equal keys always give bit-identical times.
double key_time(const ArrivalKey& key, const DelayTable& table, int rows_traversed);

// prod_j p_j^{c_j}: the exact integer whose log is the channel-free time.
BigInt key_product(const ArrivalKey& key, const DelayTable& table);

ArrivalKey hamiltonian_key(int n);
bool is_hamiltonian_key(const ArrivalKey& key);

// Arrival instant of a full Hamiltonian traversal, including n channel hops.
double hamiltonian_instant(const DelayTable& table);

// Bound on any exponent for a walk through n units of a self-loop-free graph.
constexpr int exponent_bound(int n) noexcept { return (n + 1) / 2; }

double delta_min_approx(int n);

// delay_n - delay_{n-1}: where the classical construction places the smallest
// Hamiltonian gap. Exact enumeration can find a smaller one (n = 3).
double last_delay_gap(const DelayTable& table);
// min_j (delay_{j+1} - delay_j); an upper bound on delta_min_exact for K_n.
double min_adjacent_delay_gap(const DelayTable& table);

// Keys realized by walks through `rows` units, grouped by terminal vertex.
struct RealizableRow {
  int row = 0;
  std::vector<std::vector<ArrivalKey>> keys_by_vertex;  // index v-1, sorted
  std::size_t cell_count() const;
  std::vector<ArrivalKey> distinct_keys() const;
};

std::vector<RealizableRow> realizable_keys(const Graph& g, int rows);

std::optional<double> delta_min_exact(const Graph& g, const DelayTable& table,
                                      int cap = kDefaultEnumerationCap);

double default_epsilon(const Graph& g, const DelayTable& table, int cap = kDefaultEnumerationCap);

}  // namespace hampath
