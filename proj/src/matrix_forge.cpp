#include "linecount/matrix_forge.hpp"

#include <string>

namespace linecount {

namespace {

template <typename Vec>
void check_vectors(const ProblemSpec& spec, std::span<const Vec> vectors) {
  if (vectors.size() != static_cast<std::size_t>(spec.n() - 1)) {
    throw ShapeError("expected " + std::to_string(spec.n() - 1) + " coefficient vectors, got " +
                     std::to_string(vectors.size()));
  }
  for (const auto& v : vectors) {
    if (v.entries.size() != static_cast<std::size_t>(spec.degree())) {
      throw ShapeError("coefficient vector of length " + std::to_string(v.entries.size()) +
                       ", expected " + std::to_string(spec.degree()));
    }
  }
}

template <typename T, typename Vec>
DenseMatrix<T> build(const ProblemSpec& spec, std::span<const Vec> vectors) {
  check_vectors(spec, vectors);
  std::vector<T> flat;
  flat.reserve(static_cast<std::size_t>(spec.variable_count()));
  for (const auto& v : vectors) {
    flat.insert(flat.end(), v.entries.begin(), v.entries.end());
  }
  DenseMatrix<T> m(static_cast<std::size_t>(spec.matrix_size()));
  fill_banded<T>(m, spec, flat);
  return m;
}

}  // namespace

RealMatrix build_real(const ProblemSpec& spec, std::span<const RealCoeffVector> vectors) {
  return build<double>(spec, vectors);
}

ComplexMatrix build_complex(const ProblemSpec& spec,
                            std::span<const ComplexCoeffVector> vectors) {
  return build<std::complex<double>>(spec, vectors);
}

SymbolicTemplate::SymbolicTemplate(const ProblemSpec& spec)
    : spec_(spec),
      entries_(static_cast<std::size_t>(spec.matrix_size() * spec.matrix_size()), 0) {
  const int d = spec.matrix_size();
  variances_.reserve(static_cast<std::size_t>(spec.variable_count()));
  for (int i = 1; i <= spec.n() - 1; ++i) {
    for (int j = 1; j <= spec.degree(); ++j) {
      const int k = variable_index(i, j);
      entries_[static_cast<std::size_t>((j - 1) * d + (2 * i - 2))] = k;
      entries_[static_cast<std::size_t>(j * d + (2 * i - 1))] = k;
      variances_.push_back(binomial(2 * spec.n() - 4, j - 1));
    }
  }
}

std::size_t SymbolicTemplate::nonzero_count() const {
  std::size_t count = 0;
  for (int v : entries_) {
    count += v != 0 ? 1 : 0;
  }
  return count;
}

IntegerMatrix SymbolicTemplate::instantiate(std::span<const BigInt> values) const {
  if (values.size() != static_cast<std::size_t>(variable_count())) {
    throw ShapeError("instantiate expects " + std::to_string(variable_count()) + " values");
  }
  const auto d = static_cast<std::size_t>(size());
  IntegerMatrix m(d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const int k = entries_[r * d + c];
      if (k != 0) {
        m(r, c) = values[static_cast<std::size_t>(k - 1)];
      }
    }
  }
  return m;
}

RealMatrix realify(const ComplexMatrix& a) {
  const std::size_t m = a.size();
  RealMatrix out(2 * m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      const double re = a(r, c).real();
      const double im = a(r, c).imag();
      out(2 * r, 2 * c) = re;
      out(2 * r, 2 * c + 1) = im;
      out(2 * r + 1, 2 * c) = -im;
      out(2 * r + 1, 2 * c + 1) = re;
    }
  }
  return out;
}

}  // namespace linecount
