#include <cmath>
#include <limits>

#include "kernels/variants.hpp"

namespace hampath::kernels {
namespace {

void key_times(std::span<const std::uint64_t> keys, std::span<const double> delays, double offset,
               std::span<double> out) {
  for (std::size_t i = 0; i < keys.size(); ++i) {
    double t = 0.0;
    for (std::size_t j = 0; j < delays.size(); ++j) {
      const auto c = static_cast<double>((keys[i] >> (4 * j)) & 0xF);
      t = t + c * delays[j];
    }
    out[i] = t + offset;
  }
}

double min_gap_excluding(std::span<const std::uint64_t> keys, std::span<const double> times,
                         std::uint64_t excluded, double target) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i] == excluded) continue;
    best = std::fmin(best, std::fabs(times[i] - target));
  }
  return best;
}

double lane_sum(std::span<const double> values) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < values.size(); ++i) acc[i % 4] += values[i];
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

double norm_sum(std::span<const std::complex<double>> values) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double re = values[i].real();
    const double im = values[i].imag();
    acc[i % 4] += re * re + im * im;
  }
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

constexpr KernelTable kScalar{Isa::scalar, "scalar", key_times, min_gap_excluding, lane_sum,
                              norm_sum};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace hampath::kernels
