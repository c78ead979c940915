#pragma once

// Exact combinatorics and closed-form constants for counting lines on
// hypersurfaces of degree 2n-3 in projective n-space.
//
// Everything here is a pure function. Big integers and rationals are GMP
// values (mpz_class / mpq_class); floating point only appears at the very
// end of an evaluation.

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace linecount {

using BigInt = mpz_class;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A request exceeds a documented size cap (symbolic expansion, Monte Carlo n).
struct CapacityError : std::length_error {
  using std::length_error::length_error;
};

/// Two independent routes to the same exact quantity disagreed.
struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Problem size for lines on a degree 2n-3 hypersurface in P^n.
class ProblemSpec {
 public:
  explicit ProblemSpec(int n);

  int n() const { return n_; }
  /// Degree of the hypersurface, 2n-3.
  int degree() const { return 2 * n_ - 3; }
  /// Side length of the Jacobian-type matrix, 2n-2.
  int matrix_size() const { return 2 * n_ - 2; }
  /// Number of independent Gaussian entries, (n-1)(2n-3).
  int variable_count() const { return (n_ - 1) * (2 * n_ - 3); }

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;

 private:
  int n_;
};

/// Rational number kept in lowest terms with a positive denominator.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(const BigInt& num, const BigInt& den = 1);
  explicit ExactRational(const mpq_class& q);

  BigInt numerator() const { return value_.get_num(); }
  BigInt denominator() const { return value_.get_den(); }
  const mpq_class& value() const { return value_; }

  bool is_integer() const { return value_.get_den() == 1; }
  double to_double() const { return value_.get_d(); }
  /// Natural log of a positive rational without converting it to a double.
  double log() const;
  std::string str() const { return value_.get_str(); }

  friend ExactRational operator+(const ExactRational& a, const ExactRational& b) {
    return ExactRational(mpq_class(a.value_ + b.value_));
  }
  friend ExactRational operator-(const ExactRational& a, const ExactRational& b) {
    return ExactRational(mpq_class(a.value_ - b.value_));
  }
  friend ExactRational operator*(const ExactRational& a, const ExactRational& b) {
    return ExactRational(mpq_class(a.value_ * b.value_));
  }
  friend ExactRational operator/(const ExactRational& a, const ExactRational& b);
  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return a.value_ == b.value_;
  }
  friend bool operator<(const ExactRational& a, const ExactRational& b) {
    return a.value_ < b.value_;
  }

 private:
  mpq_class value_{0};
};

/// sign * exp(log_magnitude); sign 0 iff log_magnitude == -inf.
struct LogScalar {
  int sign = 0;
  double log_magnitude = -std::numeric_limits<double>::infinity();

  static LogScalar from_log(double log_magnitude, int sign = 1);
  static LogScalar from_double(double x);

  /// The plain value, or nullopt when it does not fit a double.
  std::optional<double> value() const;
};

/// Natural log of a positive big integer from its bit length and top mantissa bits.
double log_big(const BigInt& x);

BigInt binomial(int m, int k);
/// m!! for odd m >= -1, with (-1)!! = 1.
BigInt double_factorial(int m);
BigInt factorial(int m);

/// rho_n = (2n-3)^{n-1}/(n-1)! * prod_{k=0}^{2n-3} k! / (2n-3)!^{n-1}.
ExactRational prefactor_real(const ProblemSpec& spec);
/// rho^C_n = (2n-3)^{2n-2}/((n-1)! n!) * prod_k binom(2n-3,k)^{-1}.
ExactRational prefactor_complex(const ProblemSpec& spec);

/// Coefficient of x^{n-1} in (1-x) prod_{j=0}^{2n-3} (2n-3-j + j x).
BigInt zagier_cn(int n);

/// sqrt(27/pi) (2n-3)^{2n-7/2}, evaluated in log space.
LogScalar zagier_asymptotic(int n);

/// Signed count of real lines, (2n-3)!!.
BigInt rn_signed_count(int n);

/// Closed form E det J_n = (n-1)! prod_{k=1}^{n-1} binom(2n-4, 2k-2).
BigInt expected_det_closed_form(const ProblemSpec& spec);

enum class Field { real, complex };

/// coefficient * pi^(half_pi_exponent / 2), kept exact until evaluated.
struct PiMultiple {
  ExactRational coefficient;
  int half_pi_exponent = 0;

  double to_double() const;
  friend PiMultiple operator*(const PiMultiple& a, const PiMultiple& b);
  friend PiMultiple operator/(const PiMultiple& a, const PiMultiple& b);
};

/// Volume of O(k) (real) or U(k) (complex) in the normalisation used for
/// the Grassmannian quotient formula.
PiMultiple group_volume(int k, Field field);
/// |Gr(k, m)| = |G(m)| / (|G(k)| |G(m-k)|).
PiMultiple grassmannian_volume_exact(int k, int m, Field field);
double grassmannian_volume(int k, int m, Field field);

/// a + b*sqrt(2) with integer a, b.
struct SqrtTwoNumber {
  std::int64_t rational_part = 0;
  std::int64_t sqrt2_part = 0;

  double to_double() const;
  friend bool operator==(const SqrtTwoNumber&, const SqrtTwoNumber&) = default;
};

/// Average number of real lines on a Kostlan cubic surface: 6 sqrt2 - 3.
SqrtTwoNumber e3_closed_form();
/// E|det J_3| = 4 sqrt2 - 2.
SqrtTwoNumber e3_abs_det_closed_form();

}  // namespace linecount
