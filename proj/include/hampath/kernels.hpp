#pragma once

#include <complex>
#include <cstdint>
#include <span>

// Batch arithmetic over arrival keys and weight arrays. Every variant must
// return results bit-identical to the scalar reference: the reference fixes
// the operation order (four interleaved accumulators for reductions) and the
// vector code reproduces it lane for lane.
namespace hampath::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  const char* name;

  // out[i] = (sum_{j<dims} c_j(keys[i]) * delays[j]) + offset, j ascending.
  void (*key_times)(std::span<const std::uint64_t> keys, std::span<const double> delays,
                    double offset, std::span<double> out);

  // min |times[i] - target| over i with keys[i] != excluded; +inf when empty.
  double (*min_gap_excluding)(std::span<const std::uint64_t> keys,
                              std::span<const double> times, std::uint64_t excluded,
                              double target);

  double (*lane_sum)(std::span<const double> values);

  // sum of re^2 + im^2, accumulated like lane_sum.
  double (*norm_sum)(std::span<const std::complex<double>> values);
};

bool available(Isa isa) noexcept;

// nullptr when the ISA is not compiled in or not supported by this CPU.
const KernelTable* table_for(Isa isa) noexcept;

// Widest available table, unless HAMPATH_KERNELS=scalar is set.
const KernelTable& active() noexcept;

}  // namespace hampath::kernels
