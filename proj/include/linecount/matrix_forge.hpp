#pragma once

// Structured matrices of the line-counting problem.
//
// Index convention: storage is 0-based row-major. A position (r, c) written
// with 1-based indices (as in the matrix displays and in every test) lives
// at storage (r-1, c-1). Column pair (2i-1, 2i), i = 1..n-1, holds the
// coefficient vector v^(i): column 2i-1 has v^(i)_j in row j, column 2i has
// v^(i)_j in row j+1. Every variable therefore occurs exactly twice, at
// (j, 2i-1) and (j+1, 2i).

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "linecount/exact_core.hpp"
#include "linecount/sampler.hpp"

namespace linecount {

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

template <typename T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t size) : size_(size), data_(size * size, T{}) {}
  DenseMatrix(std::size_t size, std::vector<T> row_major) : size_(size), data_(std::move(row_major)) {
    if (data_.size() != size * size) {
      throw ShapeError("row-major data does not match the matrix size");
    }
  }

  std::size_t size() const { return size_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * size_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * size_ + c]; }
  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<T> data_;
};

using RealMatrix = DenseMatrix<double>;
using ComplexMatrix = DenseMatrix<std::complex<double>>;
using IntegerMatrix = DenseMatrix<BigInt>;

/// Ĵ_n from n-1 real coefficient vectors.
RealMatrix build_real(const ProblemSpec& spec, std::span<const RealCoeffVector> vectors);
/// Ĵ^C_n from n-1 complex coefficient vectors.
ComplexMatrix build_complex(const ProblemSpec& spec, std::span<const ComplexCoeffVector> vectors);

/// Fill an existing D x D matrix from the concatenated coefficient vectors
/// v^(1) .. v^(n-1). Entries outside the band must already be zero.
template <typename T>
void fill_banded(DenseMatrix<T>& m, const ProblemSpec& spec, std::span<const T> concatenated) {
  const std::size_t len = static_cast<std::size_t>(spec.degree());
  for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(spec.n()); ++i) {
    for (std::size_t j = 0; j < len; ++j) {
      const T& x = concatenated[i * len + j];
      m(j, 2 * i) = x;
      m(j + 1, 2 * i + 1) = x;
    }
  }
}

/// B_n(u): each nonzero entry is a variable index in [1, N].
class SymbolicTemplate {
 public:
  explicit SymbolicTemplate(const ProblemSpec& spec);

  const ProblemSpec& spec() const { return spec_; }
  int size() const { return spec_.matrix_size(); }
  int variable_count() const { return spec_.variable_count(); }

  /// Variable at 0-based storage (r, c), or 0 for a structural zero.
  int variable_at(int r, int c) const {
    return entries_[static_cast<std::size_t>(r * size() + c)];
  }
  /// 1-based variable index of u_{i,j}: (i-1)(2n-3) + j.
  int variable_index(int i, int j) const { return (i - 1) * spec_.degree() + j; }
  /// Variance of u_k, binom(2n-4, j-1) for k <-> (i, j).
  const BigInt& variance(int k) const { return variances_[static_cast<std::size_t>(k - 1)]; }
  std::span<const BigInt> variances() const { return variances_; }
  std::size_t nonzero_count() const;

  /// Substitute integer values for u_1..u_N.
  IntegerMatrix instantiate(std::span<const BigInt> values) const;

 private:
  ProblemSpec spec_;
  std::vector<int> entries_;
  std::vector<BigInt> variances_;
};

inline SymbolicTemplate build_symbolic(const ProblemSpec& spec) { return SymbolicTemplate(spec); }

/// Each complex entry a+ib becomes the real block [[a, b], [-b, a]].
RealMatrix realify(const ComplexMatrix& a);

}  // namespace linecount
