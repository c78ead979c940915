#pragma once

// Seedable random streams and Kostlan coefficient vectors.
//
// Uniform bits come from Philox4x32-10 (Salmon et al., Random123). The key is
// the 64-bit seed and the 128-bit counter is (draw index, stream id), so a
// stream is a pure function of (seed, stream_id) and streams never overlap.
//
// Normal transform (version 1, frozen): Marsaglia's polar method. Two
// uniforms u, v in (-1, 1) are drawn from consecutive 64-bit outputs
// (top 53 bits, offset by half an ulp so 0 is never produced), rejected
// unless 0 < s = u^2 + v^2 < 1; the pair u*f, v*f with f = sqrt(-2 ln s / s)
// is returned in that order. Changing any of this changes every fixture.

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "linecount/exact_core.hpp"

namespace linecount {

inline constexpr int kNormalTransformVersion = 1;

/// Philox4x32 with 10 rounds; exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();
  /// Uniform in the open interval (0, 1).
  double next_uniform();
  double standard_normal();

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_index_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

inline double standard_normal(RngStream& rng) { return rng.standard_normal(); }

/// Per-entry variances binom(2n-4, j-1), j = 1..2n-3, and their square roots.
struct VarianceSchedule {
  explicit VarianceSchedule(const ProblemSpec& spec);

  std::vector<double> variances;
  std::vector<double> scales;
};

struct RealCoeffVector {
  int n = 0;
  std::vector<double> entries;
};

struct ComplexCoeffVector {
  int n = 0;
  std::vector<std::complex<double>> entries;
};

RealCoeffVector sample_real_vector(const ProblemSpec& spec, RngStream& rng);
ComplexCoeffVector sample_complex_vector(const ProblemSpec& spec, RngStream& rng);

// Allocation-free variants for the Monte Carlo hot loop.
void sample_real_into(std::span<double> out, const VarianceSchedule& schedule, RngStream& rng);
void sample_complex_into(std::span<std::complex<double>> out, const VarianceSchedule& schedule,
                         RngStream& rng);

}  // namespace linecount
