#include "linecount/exact_core.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace linecount {

ProblemSpec::ProblemSpec(int n) : n_(n) {
  if (n < 3) {
    throw DomainError("ambient dimension n must be >= 3, got " + std::to_string(n));
  }
}

ExactRational::ExactRational(const BigInt& num, const BigInt& den) : value_(num, den) {
  if (den == 0) {
    throw DomainError("zero denominator");
  }
  value_.canonicalize();
}

ExactRational::ExactRational(const mpq_class& q) : value_(q) { value_.canonicalize(); }

ExactRational operator/(const ExactRational& a, const ExactRational& b) {
  if (b.value_ == 0) {
    throw DomainError("division by zero rational");
  }
  return ExactRational(mpq_class(a.value_ / b.value_));
}

double ExactRational::log() const {
  if (value_ <= 0) {
    throw DomainError("log of non-positive rational " + str());
  }
  return log_big(value_.get_num()) - log_big(value_.get_den());
}

LogScalar LogScalar::from_log(double log_magnitude, int sign) {
  if (sign == 0 || log_magnitude == -std::numeric_limits<double>::infinity()) {
    return {};
  }
  return {sign > 0 ? 1 : -1, log_magnitude};
}

LogScalar LogScalar::from_double(double x) {
  if (x == 0.0) {
    return {};
  }
  return {x > 0 ? 1 : -1, std::log(std::abs(x))};
}

std::optional<double> LogScalar::value() const {
  if (sign == 0) {
    return 0.0;
  }
  const double m = std::exp(log_magnitude);
  if (!std::isfinite(m)) {
    return std::nullopt;
  }
  return sign * m;
}

double log_big(const BigInt& x) {
  if (x <= 0) {
    throw DomainError("log of non-positive integer");
  }
  // Top 53 bits as a mantissa in [0.5, 1) plus the binary exponent.
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, x.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::numbers::ln2;
}

BigInt binomial(int m, int k) {
  if (m < 0 || k < 0 || k > m) {
    throw DomainError("binomial(" + std::to_string(m) + ", " + std::to_string(k) +
                      ") requires 0 <= k <= m");
  }
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(k));
  return r;
}

BigInt double_factorial(int m) {
  if (m < -1 || m % 2 == 0) {
    throw DomainError("double_factorial requires odd m >= -1, got " + std::to_string(m));
  }
  BigInt r = 1;
  for (int f = m; f > 1; f -= 2) {
    r *= f;
  }
  return r;
}

BigInt factorial(int m) {
  if (m < 0) {
    throw DomainError("factorial of negative integer");
  }
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(m));
  return r;
}

namespace {

BigInt pow_int(const BigInt& base, int e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

// prod_{k=0}^{d} k!
BigInt superfactorial(int d) {
  BigInt r = 1;
  BigInt f = 1;
  for (int k = 1; k <= d; ++k) {
    f *= k;
    r *= f;
  }
  return r;
}

}  // namespace

ExactRational prefactor_real(const ProblemSpec& spec) {
  const int n = spec.n();
  const int d = spec.degree();
  // The half powers of the binomials pair k with d-k and cancel.
  const BigInt num = pow_int(d, n - 1) * superfactorial(d);
  const BigInt den = factorial(n - 1) * pow_int(factorial(d), n - 1);
  return ExactRational(num, den);
}

ExactRational prefactor_complex(const ProblemSpec& spec) {
  const int n = spec.n();
  const int d = spec.degree();
  const BigInt sf = superfactorial(d);
  const BigInt num = pow_int(d, 2 * n - 2) * sf * sf;
  const BigInt den = factorial(n - 1) * factorial(n) * pow_int(factorial(d), 2 * n - 2);
  return ExactRational(num, den);
}

BigInt zagier_cn(int n) {
  const ProblemSpec spec(n);
  const int d = spec.degree();
  std::vector<BigInt> poly{BigInt(1), BigInt(-1)};  // 1 - x
  for (int j = 0; j <= d; ++j) {
    std::vector<BigInt> next(poly.size() + 1, BigInt(0));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i] * (d - j);
      next[i + 1] += poly[i] * j;
    }
    poly = std::move(next);
  }
  return poly.at(static_cast<std::size_t>(n - 1));
}

LogScalar zagier_asymptotic(int n) {
  const ProblemSpec spec(n);
  const double log_value = 0.5 * std::log(27.0 / std::numbers::pi) +
                           (2.0 * n - 3.5) * std::log(static_cast<double>(spec.degree()));
  return LogScalar::from_log(log_value);
}

BigInt rn_signed_count(int n) {
  const ProblemSpec spec(n);
  return double_factorial(spec.degree());
}

BigInt expected_det_closed_form(const ProblemSpec& spec) {
  const int n = spec.n();
  BigInt r = factorial(n - 1);
  for (int k = 1; k <= n - 1; ++k) {
    r *= binomial(2 * n - 4, 2 * k - 2);
  }
  return r;
}

double PiMultiple::to_double() const {
  return coefficient.to_double() * std::pow(std::numbers::pi, 0.5 * half_pi_exponent);
}

PiMultiple operator*(const PiMultiple& a, const PiMultiple& b) {
  return {a.coefficient * b.coefficient, a.half_pi_exponent + b.half_pi_exponent};
}

PiMultiple operator/(const PiMultiple& a, const PiMultiple& b) {
  return {a.coefficient / b.coefficient, a.half_pi_exponent - b.half_pi_exponent};
}

namespace {

// Gamma(i/2) for i >= 1.
PiMultiple gamma_half(int i) {
  if (i % 2 == 0) {
    return {ExactRational(factorial(i / 2 - 1)), 0};
  }
  // Gamma(m + 1/2) = (2m)! / (4^m m!) sqrt(pi)
  const int m = (i - 1) / 2;
  return {ExactRational(factorial(2 * m), pow_int(4, m) * factorial(m)), 1};
}

}  // namespace

PiMultiple group_volume(int k, Field field) {
  if (k < 0) {
    throw DomainError("group dimension must be non-negative");
  }
  if (k == 0) {
    return {ExactRational(BigInt(1)), 0};
  }
  if (field == Field::real) {
    // |O(k)| = 2^k pi^{(k^2+k)/4} / prod_{i=1}^{k} Gamma(i/2)
    PiMultiple v{ExactRational(pow_int(2, k)), (k * k + k) / 2};
    for (int i = 1; i <= k; ++i) {
      v = v / gamma_half(i);
    }
    return v;
  }
  // |U(k)| = 2^k pi^{(k^2+k)/2} / prod_{i=1}^{k-1} i!
  BigInt den = 1;
  for (int i = 1; i <= k - 1; ++i) {
    den *= factorial(i);
  }
  return {ExactRational(pow_int(2, k), den), k * k + k};
}

PiMultiple grassmannian_volume_exact(int k, int m, Field field) {
  if (k < 1 || k >= m) {
    throw DomainError("grassmannian_volume requires 1 <= k < m");
  }
  return group_volume(m, field) / (group_volume(k, field) * group_volume(m - k, field));
}

double grassmannian_volume(int k, int m, Field field) {
  return grassmannian_volume_exact(k, m, field).to_double();
}

double SqrtTwoNumber::to_double() const {
  return static_cast<double>(rational_part) +
         static_cast<double>(sqrt2_part) * std::numbers::sqrt2;
}

SqrtTwoNumber e3_closed_form() { return {-3, 6}; }

SqrtTwoNumber e3_abs_det_closed_form() { return {-2, 4}; }

}  // namespace linecount
