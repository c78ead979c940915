// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "linecount/cli.hpp"
#include "linecount/det_kernel.hpp"
#include "linecount/mc_engine.hpp"
#include "linecount/sym_poly.hpp"
#include "oracles.hpp"

using namespace linecount;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

MonteCarloConfig config(std::uint64_t samples, std::uint64_t seed, int streams) {
  MonteCarloConfig c;
  c.samples = samples;
  c.seed = seed;
  c.streams = streams;
  return c;
}

// JSON of every Monte Carlo result the suite produces, in order, for the rerun check.
std::vector<std::string> g_records;

Outcome exact_c3() {
  const auto t0 = Clock::now();
  std::ostringstream out, err;
  const int code = run_cli({"exact", "cn", "--n", "3", "--method", "both"}, out, err);
  const double secs = seconds_since(t0);
  const bool ok = code == 0 && out.str() == "zagier 27\nsymbolic 27\n" && secs < 1.0;
  std::string shown = out.str();
  std::replace(shown.begin(), shown.end(), '\n', ';');
  return {ok, fmt("exit %d, output \"%s\", %.3f s", code, shown.c_str(), secs)};
}

Outcome route_agreement() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (int n = 3; n <= 6; ++n) {
    const BigInt sym = cn_exact_symbolic(ProblemSpec(n));
    const BigInt zag = zagier_cn(n);
    ok = ok && sym == zag;
    detail += fmt("n=%d %s%s ", n, sym.get_str().c_str(), sym == zag ? "" : "(MISMATCH)");
  }
  ok = ok && zagier_cn(4) == 2875;
  const double secs = seconds_since(t0);
  ok = ok && secs < 120.0;
  return {ok, detail + fmt("in %.1f s", secs)};
}

Outcome bombieri_fixture() {
  const ProblemSpec spec(3);
  const SymbolicTemplate t(spec);
  const auto& q = cached_expansion(spec, ExpansionMode::determinant, kDefaultSymbolicCap);
  const ExactRational norm = bombieri_norm_sq(q, t.variances());
  const ExactRational moment = complex_second_moment(spec);
  const bool ok = norm == ExactRational(BigInt(3), BigInt(2)) && moment == ExactRational(BigInt(36));
  return {ok, "norm^2 = " + norm.str() + ", E|det|^2 = " + moment.str()};
}

Outcome signed_count() {
  bool ok = true;
  for (int n = 3; n <= 6; ++n) {
    const ProblemSpec spec(n);
    ok = ok && prefactor_real(spec) * expected_det_exact(spec) ==
                   ExactRational(oracle::product_double_factorial(2 * n - 3));
  }
  for (int n = 3; n <= 12; ++n) {
    const ProblemSpec spec(n);
    ok = ok && prefactor_real(spec) * ExactRational(expected_det_closed_form(spec)) ==
                   ExactRational(oracle::product_double_factorial(2 * n - 3));
  }
  return {ok, "symbolic n=3..6, closed form n=3..12"};
}

Outcome e3_monte_carlo() {
  const auto t0 = Clock::now();
  const auto c = config(1000000, 42, 4);
  const LineCountEstimate en = estimate_en(ProblemSpec(3), c);
  const double secs = seconds_since(t0);
  g_records.push_back(to_json("mc en", en).dump());
  const double e3 = e3_closed_form().to_double();
  const double raw = e3_abs_det_closed_form().to_double();
  const double z_value = (en.value - e3) / en.std_error;
  const double z_raw = (en.raw.mean - raw) / en.raw.std_error;
  const bool ok = std::abs(z_value) <= 4 && std::abs(z_raw) <= 4 && secs < 60.0;
  return {ok, fmt("E_3 ~ %.5f (z=%.2f), raw %.5f (z=%.2f), %.1f s", en.value, z_value, en.raw.mean,
                  z_raw, secs)};
}

Outcome complex_monte_carlo() {
  const auto c = config(1000000, 42, 4);
  const MCEstimate m3 = estimate_abs_det_sq_complex(ProblemSpec(3), c);
  const LineCountEstimate c4 = estimate_cn_mc(ProblemSpec(4), c);
  g_records.push_back(to_json("mc absdetsq", 3, m3).dump());
  g_records.push_back(to_json("mc cn", c4).dump());
  const double z3 = (m3.mean - 36.0) / m3.std_error;
  const double z4 = (c4.value - 2875.0) / c4.std_error;
  const bool ok = std::abs(z3) <= 4 && std::abs(z4) <= 4;
  return {ok, fmt("E|det J_3^C|^2 ~ %.3f (z=%.2f), C_4 ~ %.1f (z=%.2f)", m3.mean, z3, c4.value, z4)};
}

Outcome density_law() {
  const DensityReport r = density_test_n3(100000, 42);
  const double bound = 5.0 / std::sqrt(1e5);
  const bool ok = r.p_value > 1e-3 && r.char_fn_max_abs_dev < bound;
  return {ok, fmt("KS D=%.5f p=%.4f, char fn max dev %.5f < %.5f", r.ks_statistic, r.p_value,
                  r.char_fn_max_abs_dev, bound)};
}

Outcome lemma_suite() {
  bool ok = true;
  std::string detail;
  for (int n = 3; n <= 5; ++n) {
    const auto r1 = verify_lemma_i1(ProblemSpec(n));
    const auto r2 = verify_lemma_i2(ProblemSpec(n));
    ok = ok && r1.permanent_count_match && r1.count_mismatches == 0 && r1.min_abs_coefficient >= 1 &&
         r2.violations == 0;
    detail += fmt("n=%d support %zu mismatches %zu pairs %zu violations %zu; ", n, r1.support_size,
                  r1.count_mismatches, r2.pairs_checked, r2.violations);
  }
  return {ok, detail};
}

Outcome realification() {
  RngStream rng(9, 0);
  double worst = 0.0;
  int negative = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t m = 1 + static_cast<std::size_t>(t % 8);
    ComplexMatrix a(m);
    for (auto& z : a.data()) {
      z = {rng.standard_normal(), rng.standard_normal()};
    }
    const double target = std::norm(oracle::complex_lu_det({a.data().begin(), a.data().end()}, m));
    const SignedLogDet d = logabsdet_real(realify(a));
    if (d.sign < 0) {
      ++negative;
    }
    const double value = d.sign * std::exp(d.log_modulus);
    worst = std::max(worst, std::abs(value - target) / target);
  }
  return {worst <= 1e-9 && negative == 0,
          fmt("1000 matrices, max relative error %.2e, negative determinants %d", worst, negative)};
}

Outcome sqrt_law() {
  const auto rows = sqrt_law_study(3, 10, config(200000, 42, 4));
  const double target3 = std::log(6 * std::sqrt(2.0) - 3) / std::log(27.0);
  const bool first = std::abs(rows[0].ratio - target3) <= 0.01;
  bool above = true;
  for (const auto& r : rows) {
    above = above && r.ratio >= r.lower_bound_ratio - 3 * r.std_error;
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    decreasing = decreasing && rows[i].lower_bound_ratio < rows[i - 1].lower_bound_ratio;
  }
  std::string lower;
  for (const auto& r : rows) {
    lower += fmt("%.4f ", r.lower_bound_ratio);
  }
  return {first && above && decreasing,
          fmt("(i) ratio_3 = %.4f vs %.4f: %s; (ii) above lower bound: %s; (iii) lower-bound column "
              "strictly decreasing: %s [",
              rows[0].ratio, target3, first ? "ok" : "FAIL", above ? "ok" : "FAIL",
              decreasing ? "ok" : "FAIL") +
              lower + "]"};
}

Outcome reproducibility() {
  std::vector<std::string> first = g_records;
  g_records.clear();
  const auto c = config(1000000, 42, 4);
  g_records.push_back(to_json("mc en", estimate_en(ProblemSpec(3), c)).dump());
  g_records.push_back(to_json("mc absdetsq", 3, estimate_abs_det_sq_complex(ProblemSpec(3), c)).dump());
  g_records.push_back(to_json("mc cn", estimate_cn_mc(ProblemSpec(4), c)).dump());
  const auto d1 = density_test_n3(100000, 42);
  const auto d2 = density_test_n3(100000, 42);
  const auto s1 = sqrt_law_csv(sqrt_law_study(3, 5, config(20000, 42, 4)));
  const auto s2 = sqrt_law_csv(sqrt_law_study(3, 5, config(20000, 42, 4)));
  const bool ok = first.size() == 3 && first == g_records && d1.ks_statistic == d2.ks_statistic &&
                  d1.char_fn_max_abs_dev == d2.char_fn_max_abs_dev && s1 == s2;
  return {ok, fmt("%zu JSON records, density report and sqrt-law table compared byte for byte",
                  first.size())};
}

Outcome oracle_coherence() {
  RngStream rng(12, 0);
  int mismatches = 0;
  for (int n = 3; n <= 6; ++n) {
    const ProblemSpec spec(n);
    const SymbolicTemplate t(spec);
    const auto& q = cached_expansion(spec, ExpansionMode::determinant, kDefaultSymbolicCap);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<BigInt> pt;
      for (int k = 0; k < spec.variable_count(); ++k) {
        pt.emplace_back(static_cast<long>(rng.next_u64() % 41) - 20);
      }
      mismatches += q.evaluate(pt) != det_exact_integer(t.instantiate(pt));
    }
  }
  return {mismatches == 0, fmt("400 points over n=3..6, %d mismatches", mismatches)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exact C_3 from both routes", exact_c3},
      {"symbolic C_n equals Zagier for n=3..6", route_agreement},
      {"Bombieri fixture at n=3", bombieri_fixture},
      {"signed count (2n-3)!!", signed_count},
      {"E_3 Monte Carlo", e3_monte_carlo},
      {"complex Monte Carlo", complex_monte_carlo},
      {"density law at n=3", density_law},
      {"no-cancellation and midpoint lemmas", lemma_suite},
      {"realification determinant identity", realification},
      {"square-root law table", sqrt_law},
      {"bit-identical reruns", reproducibility},
      {"polynomial vs Bareiss oracle", oracle_coherence},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", index - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
