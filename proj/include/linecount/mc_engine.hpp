#pragma once

// Monte Carlo estimation of determinant functionals of Ĵ_n / Ĵ^C_n and their
// assembly into line counts.
//
// Work split: `streams` logical streams, stream s draws from RngStream(seed, s)
// and handles samples/streams samples (the first samples % streams streams
// take one extra). Each stream owns a one-pass accumulator; the accumulators
// are merged by a left fold in stream-id order. Hardware threads only decide
// which stream runs where, so results depend on (seed, streams, samples) alone.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "linecount/exact_core.hpp"

namespace linecount {

inline constexpr int kDefaultMonteCarloCap = 30;

/// Welford accumulator with Chan's pairwise merge.
class RunningStats {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }
  void merge(const RunningStats& other);

  std::uint64_t count() const { return count_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; 0 when count < 2.
  double variance() const {
    return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
  }

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct MCEstimate {
  double mean = 0.0;
  double variance = 0.0;
  std::uint64_t count = 0;
  double std_error = 0.0;
  std::pair<double, double> ci95{0.0, 0.0};
  std::uint64_t seed = 0;
  int streams = 1;
  /// Samples were accumulated as exp(log f - log_shift); 0 for plain runs.
  double log_shift = 0.0;

  static MCEstimate from_stats(const RunningStats& s, std::uint64_t seed, int streams,
                               double log_shift);
};

struct LineCountEstimate {
  int n = 0;
  MCEstimate raw;
  double prefactor_log = 0.0;
  double log_value = 0.0;
  double value = 0.0;
  /// prefactor * raw.std_error, in the units of value.
  double std_error = 0.0;
  std::pair<double, double> value_ci95{0.0, 0.0};
};

enum class Functional {
  abs_det_real,        ///< |det Ĵ_n|
  signed_det_real,     ///< det Ĵ_n
  det_sq_real,         ///< (det Ĵ_n)^2
  abs_det_sq_complex,  ///< |det Ĵ^C_n|^2
};

struct MonteCarloConfig {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  int streams = 1;
  int max_n = kDefaultMonteCarloCap;
};

/// Raises DomainError / CapacityError for invalid sample counts, stream counts or n.
void validate(const ProblemSpec& spec, const MonteCarloConfig& config);

/// Shift applied before averaging so that large-n runs stay inside double range.
double log_shift_for(const ProblemSpec& spec, Functional f);

MCEstimate estimate_functional(const ProblemSpec& spec, Functional f, const MonteCarloConfig& config);

/// Per-stream accumulators, before merging; exposed for merge-order tests.
std::vector<RunningStats> stream_accumulators(const ProblemSpec& spec, Functional f,
                                              const MonteCarloConfig& config);

MCEstimate estimate_abs_det_real(const ProblemSpec& spec, const MonteCarloConfig& config);
MCEstimate estimate_signed_det_real(const ProblemSpec& spec, const MonteCarloConfig& config);
MCEstimate estimate_abs_det_sq_complex(const ProblemSpec& spec, const MonteCarloConfig& config);

/// E_n = rho_n E|det Ĵ_n|.
LineCountEstimate estimate_en(const ProblemSpec& spec, const MonteCarloConfig& config);
/// C_n = rho^C_n E|det Ĵ^C_n|^2.
LineCountEstimate estimate_cn_mc(const ProblemSpec& spec, const MonteCarloConfig& config);

struct DensityReport {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double ks_statistic = 0.0;
  double p_value = 0.0;
  double char_fn_max_abs_dev = 0.0;
  double char_fn_dev_at_zero = 0.0;
};

/// Radial law F(r) = 1 - (1+r) e^{-r}.
double radial_cdf(double r);
/// Asymptotic Kolmogorov survival function P(K > lambda).
double kolmogorov_survival(double lambda);
/// The fixed 20-point grid of frequency vectors with |t| <= 3; the first is t = 0.
std::vector<std::array<double, 3>> char_fn_grid();

/// Distribution checks for (x, y, z) = (bf-ce, af-cd, ae-bd), a..f iid N(0,1).
DensityReport density_test_n3(std::uint64_t samples, std::uint64_t seed);

struct SqrtLawRow {
  int n = 0;
  double log_en = 0.0;
  double log_cn = 0.0;
  double ratio = 0.0;
  double lower_bound_ratio = 0.0;
  /// Propagated standard error of `ratio`.
  double std_error = 0.0;
};

std::vector<SqrtLawRow> sqrt_law_study(int n_min, int n_max, const MonteCarloConfig& config);

std::string functional_name(Functional f);

nlohmann::ordered_json to_json(const std::string& op, int n, const MCEstimate& est);
nlohmann::ordered_json to_json(const std::string& op, const LineCountEstimate& est);

/// `n,log_en,log_cn,ratio,lower_bound_ratio,std_error` plus one line per row.
std::string sqrt_law_csv(const std::vector<SqrtLawRow>& rows);

}  // namespace linecount
