#pragma once

// Exact expansion of Q_n(u) = det B_n(u) and the exact moments built on it.
//
// Variables are numbered k = (i-1)(2n-3) + j (1-based) project-wide. The
// entry scales sqrt(binom(2n-4, j-1)) are never folded into coefficients:
// Q_n has plain integer coefficients and u_k ~ N(0, sigma_k^2) with
// sigma_k^2 = binom(2n-4, j-1). Scales only enter through even powers, so
// every norm and moment below is rational.

#include <array>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <unordered_map>
#include <vector>

#include "linecount/exact_core.hpp"
#include "linecount/matrix_forge.hpp"

namespace linecount {

inline constexpr int kDefaultSymbolicCap = 6;
/// Largest n the packed exponent layout can address (N <= 128).
inline constexpr int kHardSymbolicCap = 9;

/// Exponents in [0, 3] packed two bits per variable.
class ExponentVector {
 public:
  static constexpr int kWords = 4;
  static constexpr int kMaxVariables = kWords * 32;

  int get(int k) const {
    return static_cast<int>((words_[static_cast<std::size_t>(k >> 5)] >> ((k & 31) * 2)) & 3u);
  }
  void set(int k, int e) {
    auto& w = words_[static_cast<std::size_t>(k >> 5)];
    const int shift = (k & 31) * 2;
    w = (w & ~(std::uint64_t{3} << shift)) | (static_cast<std::uint64_t>(e) << shift);
  }
  /// Increment exponent of 0-based variable k; the caller guarantees it stays <= 3.
  void bump(int k) { words_[static_cast<std::size_t>(k >> 5)] += std::uint64_t{1} << ((k & 31) * 2); }

  /// Raw packed word w, fields for variables 32w .. 32w+31.
  std::uint64_t word(int w) const { return words_[static_cast<std::size_t>(w)]; }

  /// Bit k set iff exponent k is odd.
  ExponentVector parity() const;
  /// Componentwise floor((a + b) / 2); exact when a and b have equal parity.
  static ExponentVector midpoint(const ExponentVector& a, const ExponentVector& b);
  int total_degree() const;
  std::size_t hash() const;

  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;
  /// Lexicographic on (e_1, e_2, ..., e_N).
  friend bool lex_less(const ExponentVector& a, const ExponentVector& b, int variable_count);

 private:
  std::array<std::uint64_t, kWords> words_{};
};

struct ExponentHash {
  std::size_t operator()(const ExponentVector& e) const { return e.hash(); }
};

struct Term {
  ExponentVector exponents;
  BigInt coefficient;
};

/// Homogeneous integer polynomial without stored zero coefficients.
class SparsePoly {
 public:
  SparsePoly(int variable_count, int degree) : variable_count_(variable_count), degree_(degree) {}

  int variable_count() const { return variable_count_; }
  int degree() const { return degree_; }
  std::size_t size() const { return terms_.size(); }

  /// Adds c to the coefficient of e, erasing it if it cancels.
  void add(const ExponentVector& e, const BigInt& c);
  /// Zero when absent.
  BigInt coefficient(const ExponentVector& e) const;
  bool contains(const ExponentVector& e) const { return terms_.contains(e); }

  /// Terms sorted lexicographically by exponent vector.
  std::vector<Term> sorted_terms() const;
  const std::unordered_map<ExponentVector, BigInt, ExponentHash>& terms() const { return terms_; }

  BigInt evaluate(std::span<const BigInt> point) const;

 private:
  int variable_count_;
  int degree_;
  std::unordered_map<ExponentVector, BigInt, ExponentHash> terms_;
};

enum class ExpansionMode {
  determinant,  ///< signed Laplace expansion
  permanent,    ///< signless: coefficient = number of permutations generating the monomial
};

/// Row-by-row dynamic programming over used-column bitmasks.
SparsePoly expand_determinant(const SymbolicTemplate& tmpl,
                              ExpansionMode mode = ExpansionMode::determinant,
                              int cap = kDefaultSymbolicCap);

/// Memoised expansion of Q_n for the given n (thread-safe).
const SparsePoly& cached_expansion(const ProblemSpec& spec, ExpansionMode mode, int cap);

/// sum_g Q_g^2 (prod_k sigma_k^{2 g_k}) g! / D!.
ExactRational bombieri_norm_sq(const SparsePoly& p, std::span<const BigInt> sigma2);

/// E|det Ĵ^C_n|^2 as D! times the Bombieri norm.
ExactRational complex_second_moment_bombieri(const SparsePoly& q, std::span<const BigInt> sigma2);
/// E|det Ĵ^C_n|^2 as sum_g Q_g^2 prod_k g_k! sigma_k^{2 g_k}.
ExactRational complex_second_moment_direct(const SparsePoly& q, std::span<const BigInt> sigma2);
/// Both routes, required to agree.
ExactRational complex_second_moment(const ProblemSpec& spec, int cap = kDefaultSymbolicCap);

/// C_n = rho^C_n * E|det Ĵ^C_n|^2, required to be an integer.
BigInt cn_exact_symbolic(const ProblemSpec& spec, int cap = kDefaultSymbolicCap);

/// E det Ĵ_n from the polynomial: even monomials weighted by prod sigma^2.
ExactRational expected_det_from_poly(const SparsePoly& q, std::span<const BigInt> sigma2);
/// Polynomial route, checked against the closed form.
ExactRational expected_det_exact(const ProblemSpec& spec, int cap = kDefaultSymbolicCap);

/// E (det Ĵ_n)^2 = sum over (a, b) with a+b even of Q_a Q_b prod E[u^{a_k+b_k}].
ExactRational expected_det_sq_exact(const ProblemSpec& spec, int cap = kDefaultSymbolicCap);

struct LemmaI1Report {
  std::size_t support_size = 0;
  BigInt min_abs_coefficient;
  BigInt max_abs_coefficient;
  /// Sum of permutation counts, i.e. permutations with a nonzero product.
  BigInt generating_permutations;
  std::size_t count_mismatches = 0;
  bool permanent_count_match = false;
};

/// No sign cancellation: |Q_g| equals the number of permutations generating g.
LemmaI1Report verify_lemma_i1(const ProblemSpec& spec, int cap = kDefaultSymbolicCap);

struct LemmaI2Report {
  std::size_t pairs_checked = 0;
  std::size_t violations = 0;
};

/// For all (a, b) in I1^2 with a+b componentwise even, (a+b)/2 lies in I1.
LemmaI2Report verify_lemma_i2(const ProblemSpec& spec, int cap = kDefaultSymbolicCap);

/// One line per monomial: `coeff e_1 ... e_N`, lexicographic order.
void write_poly_text(std::ostream& out, const SparsePoly& p);

}  // namespace linecount
