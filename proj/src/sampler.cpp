#include "linecount/sampler.hpp"

#include <cmath>

namespace linecount {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> philox_round(const std::array<std::uint32_t, 4>& c,
                                                 const std::array<std::uint32_t, 2>& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, c[0], hi0, lo0);
  mulhilo(kPhiloxM1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) {
  counter = philox_round(counter, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
    counter = philox_round(counter, key);
  }
  return counter;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {}

void RngStream::refill() {
  const std::array<std::uint32_t, 4> ctr{
      static_cast<std::uint32_t>(block_index_), static_cast<std::uint32_t>(block_index_ >> 32),
      static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                         static_cast<std::uint32_t>(seed_ >> 32)};
  const auto out = philox4x32_10(ctr, key);
  buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  buffered_ = 2;
  ++block_index_;
}

std::uint64_t RngStream::next_u64() {
  if (buffered_ == 0) {
    refill();
  }
  return buffer_[2 - buffered_--];
}

double RngStream::next_uniform() {
  constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(next_u64() >> 11) + 0.5) * kInv53;
}

double RngStream::standard_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_uniform() - 1.0;
    v = 2.0 * next_uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * f;
  has_spare_ = true;
  return u * f;
}

VarianceSchedule::VarianceSchedule(const ProblemSpec& spec) {
  const int len = spec.degree();
  variances.reserve(static_cast<std::size_t>(len));
  scales.reserve(static_cast<std::size_t>(len));
  for (int j = 1; j <= len; ++j) {
    // Exact in a double while 2n-4 <= 56.
    const double var = binomial(2 * spec.n() - 4, j - 1).get_d();
    variances.push_back(var);
    scales.push_back(std::sqrt(var));
  }
}

void sample_real_into(std::span<double> out, const VarianceSchedule& schedule, RngStream& rng) {
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = schedule.scales[j] * rng.standard_normal();
  }
}

void sample_complex_into(std::span<std::complex<double>> out, const VarianceSchedule& schedule,
                         RngStream& rng) {
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double s = schedule.scales[j] * std::sqrt(0.5);
    const double re = rng.standard_normal();
    const double im = rng.standard_normal();
    out[j] = {s * re, s * im};
  }
}

RealCoeffVector sample_real_vector(const ProblemSpec& spec, RngStream& rng) {
  const VarianceSchedule schedule(spec);
  RealCoeffVector v{spec.n(), std::vector<double>(static_cast<std::size_t>(spec.degree()))};
  sample_real_into(v.entries, schedule, rng);
  return v;
}

ComplexCoeffVector sample_complex_vector(const ProblemSpec& spec, RngStream& rng) {
  const VarianceSchedule schedule(spec);
  ComplexCoeffVector w{spec.n(),
                       std::vector<std::complex<double>>(static_cast<std::size_t>(spec.degree()))};
  sample_complex_into(w.entries, schedule, rng);
  return w;
}

}  // namespace linecount
