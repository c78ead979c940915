#include "linecount/det_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace linecount {

SignedLogDet logabsdet_real_inplace(std::span<double> a, std::size_t n) {
  int sign = 1;
  double log_mod = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a[k * n + k]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double v = std::abs(a[r * n + k]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) {
      return {};
    }
    if (piv != k) {
      for (std::size_t c = k; c < n; ++c) {
        std::swap(a[k * n + c], a[piv * n + c]);
      }
      sign = -sign;
    }
    const double p = a[k * n + k];
    if (p < 0.0) {
      sign = -sign;
    }
    log_mod += std::log(best);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = a[r * n + k] / p;
      if (f == 0.0) {
        continue;
      }
      for (std::size_t c = k + 1; c < n; ++c) {
        a[r * n + c] -= f * a[k * n + c];
      }
    }
  }
  return {sign, log_mod};
}

ComplexLogDet logabsdet_complex_inplace(std::span<std::complex<double>> a, std::size_t n) {
  std::complex<double> phase{1.0, 0.0};
  double log_mod = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a[k * n + k]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double v = std::abs(a[r * n + k]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) {
      return {};
    }
    if (piv != k) {
      for (std::size_t c = k; c < n; ++c) {
        std::swap(a[k * n + c], a[piv * n + c]);
      }
      phase = -phase;
    }
    const std::complex<double> p = a[k * n + k];
    phase *= p / best;
    log_mod += std::log(best);
    for (std::size_t r = k + 1; r < n; ++r) {
      const std::complex<double> f = a[r * n + k] / p;
      if (f == 0.0) {
        continue;
      }
      for (std::size_t c = k + 1; c < n; ++c) {
        a[r * n + c] -= f * a[k * n + c];
      }
    }
  }
  return {phase / std::abs(phase), log_mod};
}

SignedLogDet logabsdet_real(const RealMatrix& m) {
  std::vector<double> scratch(m.data().begin(), m.data().end());
  return logabsdet_real_inplace(scratch, m.size());
}

ComplexLogDet logabsdet_complex(const ComplexMatrix& m) {
  std::vector<std::complex<double>> scratch(m.data().begin(), m.data().end());
  return logabsdet_complex_inplace(scratch, m.size());
}

BigInt det_exact_integer(const IntegerMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) {
    return 1;
  }
  std::vector<BigInt> a(m.data().begin(), m.data().end());
  auto at = [&](std::size_t r, std::size_t c) -> BigInt& { return a[r * n + c]; };
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && at(swap_row, k) == 0) {
        ++swap_row;
      }
      if (swap_row == n) {
        return 0;
      }
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(at(k, c), at(swap_row, c));
      }
      sign = -sign;
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      for (std::size_t c = k + 1; c < n; ++c) {
        // Exact division is guaranteed by Sylvester's identity.
        BigInt t = at(r, c) * at(k, k) - at(r, k) * at(k, c);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        at(r, c) = std::move(t);
      }
      at(r, k) = 0;
    }
    prev = at(k, k);
  }
  BigInt det = at(n - 1, n - 1);
  return sign > 0 ? det : BigInt(-det);
}

RealifyReport check_realify(std::uint64_t trials, std::uint64_t seed) {
  RealifyReport report;
  report.trials = trials;
  RngStream rng(seed, 0);
  const double h = std::sqrt(0.5);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const std::size_t m = 1 + t % 8;
    ComplexMatrix a(m);
    for (auto& z : a.data()) {
      const double re = rng.standard_normal();
      const double im = rng.standard_normal();
      z = {h * re, h * im};
    }
    const ComplexLogDet dc = logabsdet_complex(a);
    const SignedLogDet dr = logabsdet_real(realify(a));
    if (dr.sign < 0) {
      ++report.negative_determinants;
    }
    const double rel = std::abs(std::expm1(dr.log_modulus - 2.0 * dc.log_modulus));
    report.max_relative_error = std::max(report.max_relative_error, rel);
  }
  return report;
}

}  // namespace linecount
