#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <span>

#include "linecount/exact_core.hpp"
#include "linecount/matrix_forge.hpp"

namespace linecount {

/// det = sign * exp(log_modulus); sign 0 iff log_modulus == -inf.
struct SignedLogDet {
  int sign = 0;
  double log_modulus = -std::numeric_limits<double>::infinity();
};

/// det = phase * exp(log_modulus) with |phase| = 1, or phase 0 for a singular matrix.
struct ComplexLogDet {
  std::complex<double> phase{0.0, 0.0};
  double log_modulus = -std::numeric_limits<double>::infinity();
};

/// LU with partial pivoting. A zero pivot column yields sign 0, not an error.
SignedLogDet logabsdet_real(const RealMatrix& m);
ComplexLogDet logabsdet_complex(const ComplexMatrix& m);

/// In-place variants; `a` is an n x n row-major scratch buffer that is destroyed.
SignedLogDet logabsdet_real_inplace(std::span<double> a, std::size_t n);
ComplexLogDet logabsdet_complex_inplace(std::span<std::complex<double>> a, std::size_t n);

/// Fraction-free (Bareiss) elimination; exact.
BigInt det_exact_integer(const IntegerMatrix& m);

struct RealifyReport {
  std::uint64_t trials = 0;
  /// max |det(realify(A)) / |det A|^2 - 1| over the trials.
  double max_relative_error = 0.0;
  std::uint64_t negative_determinants = 0;
};

/// det(realify(A)) against |det A|^2 for standard complex Gaussian A of
/// sizes 1..8, cycling through the sizes.
RealifyReport check_realify(std::uint64_t trials, std::uint64_t seed);

}  // namespace linecount
