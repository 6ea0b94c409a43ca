#include <immintrin.h>

#include <cmath>
#include <limits>

#include "kernels/variants.hpp"

// Compiled with -mavx2 only; reached through dispatch after a CPU check.
namespace hampath::kernels {
namespace {

// Exact for 0 <= v < 2^52.
inline __m256d small_u64_to_pd(__m256i v) {
  const __m256i magic_bits = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);  // 2^52
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(v, magic_bits)), magic);
}

void key_times(std::span<const std::uint64_t> keys, std::span<const double> delays, double offset,
               std::span<double> out) {
  const __m256i nibble = _mm256_set1_epi64x(0xF);
  const __m256d off = _mm256_set1_pd(offset);
  std::size_t i = 0;
  for (; i + 4 <= keys.size(); i += 4) {
    const __m256i k = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(keys.data() + i));
    __m256d t = _mm256_setzero_pd();
    for (std::size_t j = 0; j < delays.size(); ++j) {
      const __m256i c = _mm256_and_si256(_mm256_srli_epi64(k, static_cast<int>(4 * j)), nibble);
      t = _mm256_add_pd(t, _mm256_mul_pd(small_u64_to_pd(c), _mm256_set1_pd(delays[j])));
    }
    _mm256_storeu_pd(out.data() + i, _mm256_add_pd(t, off));
  }
  for (; i < keys.size(); ++i) {
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
  const double inf = std::numeric_limits<double>::infinity();
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d tgt = _mm256_set1_pd(target);
  const __m256d infv = _mm256_set1_pd(inf);
  const __m256i ex = _mm256_set1_epi64x(static_cast<long long>(excluded));
  __m256d best = infv;
  std::size_t i = 0;
  for (; i + 4 <= keys.size(); i += 4) {
    const __m256i k = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(keys.data() + i));
    const __m256d gap = _mm256_andnot_pd(sign, _mm256_sub_pd(_mm256_loadu_pd(times.data() + i), tgt));
    const __m256d skip = _mm256_castsi256_pd(_mm256_cmpeq_epi64(k, ex));
    best = _mm256_min_pd(best, _mm256_blendv_pd(gap, infv, skip));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double out = std::fmin(std::fmin(lanes[0], lanes[1]), std::fmin(lanes[2], lanes[3]));
  for (; i < keys.size(); ++i) {
    if (keys[i] == excluded) continue;
    out = std::fmin(out, std::fabs(times[i] - target));
  }
  return out;
}

double lane_sum(std::span<const double> values) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= values.size(); i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(values.data() + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  for (; i < values.size(); ++i) lanes[i % 4] += values[i];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double norm_sum(std::span<const std::complex<double>> values) {
  // hadd leaves lane order (0, 2, 1, 3); undone when the lanes are stored.
  __m256d acc = _mm256_setzero_pd();
  const auto* raw = reinterpret_cast<const double*>(values.data());
  std::size_t i = 0;
  for (; i + 4 <= values.size(); i += 4) {
    const __m256d a = _mm256_loadu_pd(raw + 2 * i);
    const __m256d b = _mm256_loadu_pd(raw + 2 * i + 4);
    acc = _mm256_add_pd(acc, _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b)));
  }
  alignas(32) double permuted[4];
  _mm256_store_pd(permuted, acc);
  double lanes[4] = {permuted[0], permuted[2], permuted[1], permuted[3]};
  for (; i < values.size(); ++i) {
    const double re = values[i].real();
    const double im = values[i].imag();
    lanes[i % 4] += re * re + im * im;
  }
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

constexpr KernelTable kAvx2{Isa::avx2, "avx2", key_times, min_gap_excluding, lane_sum, norm_sum};

}  // namespace

const KernelTable& avx2_table() noexcept { return kAvx2; }

}  // namespace hampath::kernels
