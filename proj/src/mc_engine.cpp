#include "linecount/mc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "linecount/det_kernel.hpp"
#include "linecount/matrix_forge.hpp"
#include "linecount/sampler.hpp"

namespace linecount {

void RunningStats::merge(const RunningStats& other) {
  if (other.count_ == 0) {
    return;
  }
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * (nb / n);
  m2_ += other.m2_ + delta * delta * (na * nb / n);
  count_ += other.count_;
}

MCEstimate MCEstimate::from_stats(const RunningStats& s, std::uint64_t seed, int streams,
                                  double log_shift) {
  MCEstimate e;
  e.mean = s.mean();
  e.variance = s.variance();
  e.count = s.count();
  e.std_error = std::sqrt(e.variance / static_cast<double>(e.count));
  e.ci95 = {e.mean - 1.96 * e.std_error, e.mean + 1.96 * e.std_error};
  e.seed = seed;
  e.streams = streams;
  e.log_shift = log_shift;
  return e;
}

void validate(const ProblemSpec& spec, const MonteCarloConfig& config) {
  if (config.samples < 1000) {
    throw DomainError("Monte Carlo needs at least 1000 samples, got " +
                      std::to_string(config.samples));
  }
  if (config.streams < 1) {
    throw DomainError("stream count must be >= 1");
  }
  if (spec.n() > config.max_n) {
    throw CapacityError("Monte Carlo is capped at n = " + std::to_string(config.max_n) +
                        ", got n = " + std::to_string(spec.n()));
  }
}

double log_shift_for(const ProblemSpec& spec, Functional f) {
  // Below this the plain average is far from the double overflow threshold.
  constexpr double kPlainLimit = 600.0;
  double scale = 0.0;
  switch (f) {
    case Functional::abs_det_real:
    case Functional::signed_det_real:
      scale = log_big(expected_det_closed_form(spec));
      break;
    case Functional::det_sq_real:
      scale = 2.0 * log_big(expected_det_closed_form(spec));
      break;
    case Functional::abs_det_sq_complex:
      scale = log_big(zagier_cn(spec.n())) - prefactor_complex(spec).log();
      break;
  }
  return scale < kPlainLimit ? 0.0 : scale;
}

namespace {

RunningStats run_stream(const ProblemSpec& spec, Functional f, std::uint64_t seed,
                        std::uint64_t stream, std::uint64_t count, double shift) {
  const VarianceSchedule schedule(spec);
  const auto d = static_cast<std::size_t>(spec.matrix_size());
  const auto nvars = static_cast<std::size_t>(spec.variable_count());
  const auto len = static_cast<std::size_t>(spec.degree());
  RngStream rng(seed, stream);
  RunningStats stats;

  if (f == Functional::abs_det_sq_complex) {
    std::vector<std::complex<double>> coeffs(nvars);
    ComplexMatrix m(d);
    for (std::uint64_t s = 0; s < count; ++s) {
      for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(spec.n()); ++i) {
        sample_complex_into(std::span(coeffs).subspan(i * len, len), schedule, rng);
      }
      std::fill(m.data().begin(), m.data().end(), std::complex<double>{});
      fill_banded<std::complex<double>>(m, spec, coeffs);
      const auto ld = logabsdet_complex_inplace(m.data(), d);
      stats.add(std::exp(2.0 * ld.log_modulus - shift));
    }
    return stats;
  }

  std::vector<double> coeffs(nvars);
  RealMatrix m(d);
  for (std::uint64_t s = 0; s < count; ++s) {
    for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(spec.n()); ++i) {
      sample_real_into(std::span(coeffs).subspan(i * len, len), schedule, rng);
    }
    std::fill(m.data().begin(), m.data().end(), 0.0);
    fill_banded<double>(m, spec, coeffs);
    const auto ld = logabsdet_real_inplace(m.data(), d);
    switch (f) {
      case Functional::abs_det_real:
        stats.add(std::exp(ld.log_modulus - shift));
        break;
      case Functional::signed_det_real:
        stats.add(ld.sign * std::exp(ld.log_modulus - shift));
        break;
      case Functional::det_sq_real:
        stats.add(std::exp(2.0 * ld.log_modulus - shift));
        break;
      case Functional::abs_det_sq_complex:
        break;
    }
  }
  return stats;
}

}  // namespace

std::vector<RunningStats> stream_accumulators(const ProblemSpec& spec, Functional f,
                                              const MonteCarloConfig& config) {
  validate(spec, config);
  const double shift = log_shift_for(spec, f);
  const auto streams = static_cast<std::uint64_t>(config.streams);
  std::vector<RunningStats> per_stream(streams);

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<std::uint64_t>(std::min<std::uint64_t>(streams, hw));
  auto work = [&](std::uint64_t w) {
    for (std::uint64_t s = w; s < streams; s += workers) {
      const std::uint64_t count = config.samples / streams + (s < config.samples % streams ? 1 : 0);
      per_stream[s] = run_stream(spec, f, config.seed, s, count, shift);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      pool.emplace_back(work, w);
    }
  }
  return per_stream;
}

MCEstimate estimate_functional(const ProblemSpec& spec, Functional f,
                               const MonteCarloConfig& config) {
  const auto per_stream = stream_accumulators(spec, f, config);
  RunningStats total;
  for (const auto& s : per_stream) {
    total.merge(s);
  }
  return MCEstimate::from_stats(total, config.seed, config.streams, log_shift_for(spec, f));
}

MCEstimate estimate_abs_det_real(const ProblemSpec& spec, const MonteCarloConfig& config) {
  return estimate_functional(spec, Functional::abs_det_real, config);
}

MCEstimate estimate_signed_det_real(const ProblemSpec& spec, const MonteCarloConfig& config) {
  return estimate_functional(spec, Functional::signed_det_real, config);
}

MCEstimate estimate_abs_det_sq_complex(const ProblemSpec& spec, const MonteCarloConfig& config) {
  return estimate_functional(spec, Functional::abs_det_sq_complex, config);
}

namespace {

LineCountEstimate assemble(const ProblemSpec& spec, const MCEstimate& raw, double prefactor_log) {
  LineCountEstimate e;
  e.n = spec.n();
  e.raw = raw;
  e.prefactor_log = prefactor_log;
  const double scale_log = prefactor_log + raw.log_shift;
  e.log_value = raw.mean > 0.0 ? scale_log + std::log(raw.mean)
                               : -std::numeric_limits<double>::infinity();
  e.value = std::exp(e.log_value);
  const double scale = std::exp(scale_log);
  e.std_error = scale * raw.std_error;
  e.value_ci95 = {scale * raw.ci95.first, scale * raw.ci95.second};
  return e;
}

}  // namespace

LineCountEstimate estimate_en(const ProblemSpec& spec, const MonteCarloConfig& config) {
  return assemble(spec, estimate_abs_det_real(spec, config), prefactor_real(spec).log());
}

LineCountEstimate estimate_cn_mc(const ProblemSpec& spec, const MonteCarloConfig& config) {
  return assemble(spec, estimate_abs_det_sq_complex(spec, config), prefactor_complex(spec).log());
}

double radial_cdf(double r) {
  if (r <= 0.0) {
    return 0.0;
  }
  return -std::expm1(-r) - r * std::exp(-r);
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) {
    return 1.0;
  }
  constexpr double pi = std::numbers::pi;
  if (lambda < 1.18) {
    // P(K <= l) = sqrt(2 pi)/l sum_{j>=1} exp(-(2j-1)^2 pi^2 / (8 l^2))
    double cdf = 0.0;
    for (int j = 1; j <= 50; ++j) {
      const double k = 2.0 * j - 1.0;
      cdf += std::exp(-k * k * pi * pi / (8.0 * lambda * lambda));
    }
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  // P(K > l) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 l^2)
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1) ? term : -term;
    if (term < 1e-18) {
      break;
    }
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

std::vector<std::array<double, 3>> char_fn_grid() {
  // Magnitudes 3m/19 for m = 0..19 along golden-spiral directions.
  std::vector<std::array<double, 3>> grid;
  grid.reserve(20);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int m = 0; m < 20; ++m) {
    const double mag = 3.0 * m / 19.0;
    const double z = 1.0 - 2.0 * (m + 0.5) / 20.0;
    const double rho = std::sqrt(1.0 - z * z);
    const double theta = golden * m;
    grid.push_back({mag * rho * std::cos(theta), mag * rho * std::sin(theta), mag * z});
  }
  return grid;
}

DensityReport density_test_n3(std::uint64_t samples, std::uint64_t seed) {
  if (samples < 10000) {
    throw DomainError("density test needs at least 10000 samples, got " + std::to_string(samples));
  }
  RngStream rng(seed, 0);
  const auto grid = char_fn_grid();
  std::vector<double> radii;
  radii.reserve(samples);
  std::vector<double> cos_sums(grid.size(), 0.0);
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double a = rng.standard_normal();
    const double b = rng.standard_normal();
    const double c = rng.standard_normal();
    const double d = rng.standard_normal();
    const double e = rng.standard_normal();
    const double f = rng.standard_normal();
    const double x = b * f - c * e;
    const double y = a * f - c * d;
    const double z = a * e - b * d;
    radii.push_back(std::sqrt(x * x + y * y + z * z));
    for (std::size_t g = 0; g < grid.size(); ++g) {
      cos_sums[g] += std::cos(grid[g][0] * x + grid[g][1] * y + grid[g][2] * z);
    }
  }

  std::sort(radii.begin(), radii.end());
  const double nd = static_cast<double>(samples);
  double ks = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double cdf = radial_cdf(radii[i]);
    ks = std::max({ks, static_cast<double>(i + 1) / nd - cdf, cdf - static_cast<double>(i) / nd});
  }

  DensityReport report;
  report.samples = samples;
  report.seed = seed;
  report.ks_statistic = ks;
  report.p_value = kolmogorov_survival(std::sqrt(nd) * ks);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto& t = grid[g];
    const double target = 1.0 / (1.0 + t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
    const double dev = std::abs(cos_sums[g] / nd - target);
    report.char_fn_max_abs_dev = std::max(report.char_fn_max_abs_dev, dev);
    if (g == 0) {
      report.char_fn_dev_at_zero = dev;
    }
  }
  return report;
}

std::vector<SqrtLawRow> sqrt_law_study(int n_min, int n_max, const MonteCarloConfig& config) {
  if (n_min < 3 || n_min > n_max) {
    throw DomainError("sqrt law study requires 3 <= n_min <= n_max");
  }
  if (n_max > config.max_n) {
    throw CapacityError("sqrt law study is capped at n = " + std::to_string(config.max_n));
  }
  std::vector<SqrtLawRow> rows;
  for (int n = n_min; n <= n_max; ++n) {
    const ProblemSpec spec(n);
    const LineCountEstimate en = estimate_en(spec, config);
    SqrtLawRow row;
    row.n = n;
    row.log_en = en.log_value;
    row.log_cn = log_big(zagier_cn(n));
    row.ratio = row.log_en / row.log_cn;
    row.lower_bound_ratio = log_big(rn_signed_count(n)) / row.log_cn;
    // d(log E)/dE * sigma_E, then divided by log C_n.
    row.std_error = (en.raw.std_error / en.raw.mean) / row.log_cn;
    rows.push_back(row);
  }
  return rows;
}

std::string functional_name(Functional f) {
  switch (f) {
    case Functional::abs_det_real:
      return "absdet";
    case Functional::signed_det_real:
      return "signeddet";
    case Functional::det_sq_real:
      return "detsq";
    case Functional::abs_det_sq_complex:
      return "absdetsq";
  }
  return "unknown";
}

nlohmann::ordered_json to_json(const std::string& op, int n, const MCEstimate& est) {
  nlohmann::ordered_json j;
  j["op"] = op;
  j["n"] = n;
  j["mean"] = est.mean;
  j["std_error"] = est.std_error;
  j["ci95"] = {est.ci95.first, est.ci95.second};
  j["samples"] = est.count;
  j["seed"] = est.seed;
  j["streams"] = est.streams;
  j["prefactor_log"] = 0.0;
  j["value"] = est.mean;
  j["log_shift"] = est.log_shift;
  return j;
}

nlohmann::ordered_json to_json(const std::string& op, const LineCountEstimate& est) {
  nlohmann::ordered_json j;
  j["op"] = op;
  j["n"] = est.n;
  j["mean"] = est.raw.mean;
  j["std_error"] = est.raw.std_error;
  j["ci95"] = {est.raw.ci95.first, est.raw.ci95.second};
  j["samples"] = est.raw.count;
  j["seed"] = est.raw.seed;
  j["streams"] = est.raw.streams;
  j["prefactor_log"] = est.prefactor_log;
  j["value"] = est.value;
  j["log_shift"] = est.raw.log_shift;
  j["value_std_error"] = est.std_error;
  j["value_ci95"] = {est.value_ci95.first, est.value_ci95.second};
  return j;
}

std::string sqrt_law_csv(const std::vector<SqrtLawRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "n,log_en,log_cn,ratio,lower_bound_ratio,std_error\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.log_en << ',' << r.log_cn << ',' << r.ratio << ','
        << r.lower_bound_ratio << ',' << r.std_error << '\n';
  }
  return out.str();
}

}  // namespace linecount
