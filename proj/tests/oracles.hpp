#pragma once

// Reference implementations used only by the tests. Each one is deliberately
// slow and structurally different from the library route it checks.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Big = mpz_class;

/// Row m of Pascal's triangle by repeated addition.
inline std::vector<Big> pascal_row(int m) {
  std::vector<Big> row{1};
  for (int r = 1; r <= m; ++r) {
    std::vector<Big> next(static_cast<std::size_t>(r) + 1);
    next.front() = 1;
    next.back() = 1;
    for (int k = 1; k < r; ++k) {
      next[static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k - 1)] + row[static_cast<std::size_t>(k)];
    }
    row = std::move(next);
  }
  return row;
}

inline Big pascal(int m, int k) { return pascal_row(m)[static_cast<std::size_t>(k)]; }

inline Big product_double_factorial(int m) {
  Big r = 1;
  for (int i = m; i > 1; i -= 2) {
    r *= i;
  }
  return r;
}

/// Laplace expansion along the first row.
template <typename T>
T cofactor_det(const std::vector<std::vector<T>>& a) {
  const std::size_t n = a.size();
  if (n == 0) {
    return T(1);
  }
  if (n == 1) {
    return a[0][0];
  }
  T total = T(0);
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c] == T(0)) {
      continue;
    }
    std::vector<std::vector<T>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<T> row;
      for (std::size_t cc = 0; cc < n; ++cc) {
        if (cc != c) {
          row.push_back(a[r][cc]);
        }
      }
      minor.push_back(std::move(row));
    }
    const T term = a[0][c] * cofactor_det(minor);
    if (c % 2 == 0) {
      total = total + term;
    } else {
      total = total - term;
    }
  }
  return total;
}

/// Coefficient of x^{n-1} in (1-x) prod_{j=0}^{d} (d-j + j x), d = 2n-3,
/// by summing over subsets of factors that contribute their x term.
inline Big zagier_by_subsets(int n) {
  const int d = 2 * n - 3;
  const int factors = d + 1;
  // e[k] = sum over k-subsets S of prod_{j in S} j * prod_{j not in S} (d - j)
  std::vector<Big> e(static_cast<std::size_t>(factors) + 1, 0);
  for (std::uint32_t mask = 0; mask < (1u << factors); ++mask) {
    Big t = 1;
    for (int j = 0; j < factors && t != 0; ++j) {
      t *= (mask >> j) & 1u ? j : d - j;
    }
    e[static_cast<std::size_t>(__builtin_popcount(mask))] += t;
  }
  return e[static_cast<std::size_t>(n - 1)] - e[static_cast<std::size_t>(n - 2)];
}

/// 1-based variable index at 1-based position (r, c) of B_n, or 0. Written
/// straight from the band rule: column 2i-1 holds v^(i)_j at row j and
/// column 2i holds it at row j+1.
inline int band_variable(int n, int r, int c) {
  const int d = 2 * n - 3;
  const int i = (c + 1) / 2;
  const int j = (c % 2 == 1) ? r : r - 1;
  if (j < 1 || j > d) {
    return 0;
  }
  return (i - 1) * d + j;
}

/// Q_n as map exponent-vector -> coefficient, by enumerating every permutation.
using Poly = std::map<std::vector<int>, Big>;

inline Poly expand_by_permutations(int n, bool signless = false) {
  const int size = 2 * n - 2;
  const int nvars = (n - 1) * (2 * n - 3);
  std::vector<int> perm(static_cast<std::size_t>(size));
  std::iota(perm.begin(), perm.end(), 0);
  Poly p;
  do {
    std::vector<int> e(static_cast<std::size_t>(nvars), 0);
    bool zero = false;
    for (int r = 0; r < size && !zero; ++r) {
      const int v = band_variable(n, r + 1, perm[static_cast<std::size_t>(r)] + 1);
      if (v == 0) {
        zero = true;
      } else {
        ++e[static_cast<std::size_t>(v - 1)];
      }
    }
    if (zero) {
      continue;
    }
    int inversions = 0;
    for (int a = 0; a < size; ++a) {
      for (int b = a + 1; b < size; ++b) {
        inversions += perm[static_cast<std::size_t>(a)] > perm[static_cast<std::size_t>(b)];
      }
    }
    p[e] += (signless || inversions % 2 == 0) ? 1 : -1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (auto it = p.begin(); it != p.end();) {
    it = it->second == 0 ? p.erase(it) : std::next(it);
  }
  return p;
}

inline Big variance_of(int n, int var_index_1based) {
  const int d = 2 * n - 3;
  const int j = (var_index_1based - 1) % d + 1;
  return pascal(2 * n - 4, j - 1);
}

/// E[prod u_k^{e_k}] for independent u_k ~ N(0, s_k^2): prod (e_k - 1)!! s_k^{e_k}, 0 if any e_k is odd.
inline Big gaussian_moment(int n, const std::vector<int>& e) {
  Big m = 1;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] % 2 == 1) {
      return 0;
    }
    const Big s2 = variance_of(n, static_cast<int>(k) + 1);
    for (int p = 0; p < e[k] / 2; ++p) {
      m *= s2;
    }
    m *= product_double_factorial(e[k] - 1);
  }
  return m;
}

/// E Q_n(u)^2 by squaring the polynomial term by term.
inline Big second_moment_by_squaring(int n, const Poly& q) {
  Big total = 0;
  for (const auto& [a, ca] : q) {
    for (const auto& [b, cb] : q) {
      std::vector<int> s(a.size());
      for (std::size_t k = 0; k < a.size(); ++k) {
        s[k] = a[k] + b[k];
      }
      total += ca * cb * gaussian_moment(n, s);
    }
  }
  return total;
}

/// Plain complex LU with partial pivoting, returning the determinant itself.
inline std::complex<double> complex_lu_det(std::vector<std::complex<double>> a, std::size_t n) {
  std::complex<double> det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (std::abs(a[r * n + k]) > std::abs(a[piv * n + k])) {
        piv = r;
      }
    }
    if (a[piv * n + k] == 0.0) {
      return 0.0;
    }
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a[k * n + c], a[piv * n + c]);
      }
      det = -det;
    }
    det *= a[k * n + k];
    for (std::size_t r = k + 1; r < n; ++r) {
      const auto f = a[r * n + k] / a[k * n + k];
      for (std::size_t c = k; c < n; ++c) {
        a[r * n + c] -= f * a[k * n + c];
      }
    }
  }
  return det;
}

}  // namespace oracle
