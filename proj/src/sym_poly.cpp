#include "linecount/sym_poly.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

namespace linecount {

__extension__ using int128 = __int128;
__extension__ using uint128 = unsigned __int128;

namespace {

BigInt to_big(int128 v) {
  const bool neg = v < 0;
  uint128 u = neg ? -static_cast<uint128>(v) : static_cast<uint128>(v);
  BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  BigInt r = (hi << 64) + lo;
  return neg ? BigInt(-r) : r;
}

}  // namespace

ExponentVector ExponentVector::parity() const {
  ExponentVector p;
  for (std::size_t w = 0; w < kWords; ++w) {
    // Low bit of every 2-bit field.
    p.words_[w] = words_[w] & 0x5555555555555555ull;
  }
  return p;
}

ExponentVector ExponentVector::midpoint(const ExponentVector& a, const ExponentVector& b) {
  ExponentVector m;
  for (std::size_t w = 0; w < kWords; ++w) {
    // Carry-free average within each 2-bit field.
    m.words_[w] = (a.words_[w] & b.words_[w]) + (((a.words_[w] ^ b.words_[w]) >> 1) & 0x5555555555555555ull);
  }
  return m;
}

int ExponentVector::total_degree() const {
  int total = 0;
  for (auto w : words_) {
    total += std::popcount(w & 0x5555555555555555ull) +
             2 * std::popcount(w & 0xAAAAAAAAAAAAAAAAull);
  }
  return total;
}

std::size_t ExponentVector::hash() const {
  std::uint64_t h = 0x9E3779B97F4A7C15ull;
  for (auto w : words_) {
    h ^= w + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    h *= 0xBF58476D1CE4E5B9ull;
  }
  return static_cast<std::size_t>(h ^ (h >> 31));
}

bool lex_less(const ExponentVector& a, const ExponentVector& b, int variable_count) {
  for (int k = 0; k < variable_count; ++k) {
    const int x = a.get(k);
    const int y = b.get(k);
    if (x != y) {
      return x < y;
    }
  }
  return false;
}

void SparsePoly::add(const ExponentVector& e, const BigInt& c) {
  if (c == 0) {
    return;
  }
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) {
      terms_.erase(it);
    }
  }
}

BigInt SparsePoly::coefficient(const ExponentVector& e) const {
  const auto it = terms_.find(e);
  return it == terms_.end() ? BigInt(0) : it->second;
}

std::vector<Term> SparsePoly::sorted_terms() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [e, c] : terms_) {
    out.push_back({e, c});
  }
  std::sort(out.begin(), out.end(), [this](const Term& a, const Term& b) {
    return lex_less(a.exponents, b.exponents, variable_count_);
  });
  return out;
}

BigInt SparsePoly::evaluate(std::span<const BigInt> point) const {
  if (point.size() != static_cast<std::size_t>(variable_count_)) {
    throw ShapeError("evaluation point has the wrong number of coordinates");
  }
  // powers[k][p] = point[k]^p, p <= 3; small copies when they fit 64 bits.
  std::vector<std::array<BigInt, 4>> powers(point.size());
  std::vector<std::array<std::int64_t, 4>> small(point.size());
  bool all_small = true;
  for (std::size_t k = 0; k < point.size(); ++k) {
    powers[k][0] = 1;
    for (std::size_t p = 1; p < 4; ++p) {
      powers[k][p] = powers[k][p - 1] * point[k];
    }
    for (std::size_t p = 0; p < 4; ++p) {
      all_small = all_small && powers[k][p].fits_slong_p();
      small[k][p] = all_small ? powers[k][p].get_si() : 0;
    }
  }

  BigInt total = 0;
  int128 acc = 0;
  BigInt t;
  for (const auto& [e, c] : terms_) {
    bool fast = all_small && c.fits_slong_p();
    int128 ft = fast ? c.get_si() : 0;
    if (fast) {
      for (int w = 0; w < ExponentVector::kWords && fast; ++w) {
        std::uint64_t bits = e.word(w);
        while (bits != 0) {
          const int shift = std::countr_zero(bits) & ~1;
          const auto k = static_cast<std::size_t>(w * 32 + shift / 2);
          const auto p = static_cast<std::size_t>((bits >> shift) & 3u);
          if (__builtin_mul_overflow(ft, small[k][p], &ft)) {
            fast = false;
            break;
          }
          bits &= ~(std::uint64_t{3} << shift);
        }
      }
      if (fast && !__builtin_add_overflow(acc, ft, &acc)) {
        continue;
      }
      if (fast) {
        total += to_big(acc);
        acc = ft;
        continue;
      }
    }
    t = c;
    for (int w = 0; w < ExponentVector::kWords; ++w) {
      std::uint64_t bits = e.word(w);
      while (bits != 0) {
        const int shift = std::countr_zero(bits) & ~1;
        const auto k = static_cast<std::size_t>(w * 32 + shift / 2);
        const auto p = static_cast<std::size_t>((bits >> shift) & 3u);
        mpz_mul(t.get_mpz_t(), t.get_mpz_t(), powers[k][p].get_mpz_t());
        bits &= ~(std::uint64_t{3} << shift);
      }
    }
    total += t;
  }
  return total + to_big(acc);
}

namespace {

void check_cap(const ProblemSpec& spec, int cap) {
  if (cap > kHardSymbolicCap) {
    throw CapacityError("symbolic cap " + std::to_string(cap) + " exceeds the packed layout limit n = " +
                        std::to_string(kHardSymbolicCap));
  }
  if (spec.n() > cap) {
    throw CapacityError("symbolic expansion is capped at n = " + std::to_string(cap) + ", got n = " +
                        std::to_string(spec.n()));
  }
}

using PartialMap = std::unordered_map<ExponentVector, std::int64_t, ExponentHash>;

// (k, e) pairs of the nonzero exponents, in increasing k.
using SparseExponents = std::vector<std::pair<int, int>>;

SparseExponents unpack(const ExponentVector& e, int variable_count) {
  SparseExponents out;
  for (int k = 0; k < variable_count; ++k) {
    if (const int x = e.get(k); x != 0) {
      out.emplace_back(k, x);
    }
  }
  return out;
}

BigInt pow_big(const BigInt& b, int e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
  return r;
}

// Exact E[u^e] for u ~ N(0, s2); e is 0, 2 or 4 in every use here.
BigInt gaussian_moment(int e, const BigInt& s2) {
  switch (e) {
    case 0:
      return 1;
    case 2:
      return s2;
    case 4:
      return 3 * s2 * s2;
    default:
      throw ConsistencyError("Gaussian moment requested for exponent " + std::to_string(e) +
                             "; structural bound is 4");
  }
}


// Terms grouped by parity pattern; only same-parity pairs have even sums.
struct ParityBuckets {
  std::vector<ExponentVector> exps;
  std::vector<SparseExponents> sparse;
  std::vector<BigInt> coeffs;
  std::vector<std::vector<std::size_t>> buckets;
};

ParityBuckets bucket_by_parity(const SparsePoly& q) {
  ParityBuckets pb;
  std::unordered_map<ExponentVector, std::size_t, ExponentHash> index;
  // Sorted order keeps the enumeration deterministic.
  for (auto& t : q.sorted_terms()) {
    const auto par = t.exponents.parity();
    auto [it, inserted] = index.try_emplace(par, pb.buckets.size());
    if (inserted) {
      pb.buckets.emplace_back();
    }
    pb.buckets[it->second].push_back(pb.exps.size());
    pb.sparse.push_back(unpack(t.exponents, q.variable_count()));
    pb.exps.push_back(t.exponents);
    pb.coeffs.push_back(std::move(t.coefficient));
  }
  return pb;
}

}  // namespace

SparsePoly expand_determinant(const SymbolicTemplate& tmpl, ExpansionMode mode, int cap) {
  check_cap(tmpl.spec(), cap);
  const int d = tmpl.size();
  const std::size_t states = std::size_t{1} << d;
  std::vector<PartialMap> level(states);
  level[0].emplace(ExponentVector{}, 1);

  for (int r = 0; r < d; ++r) {
    std::vector<PartialMap> next(states);
    for (std::size_t mask = 0; mask < states; ++mask) {
      if (level[mask].empty()) {
        continue;
      }
      for (int c = 0; c < d; ++c) {
        const int var = tmpl.variable_at(r, c);
        if (var == 0 || (mask >> c) & 1u) {
          continue;
        }
        // Columns already used by earlier rows and larger than c are inversions.
        const int inversions = std::popcount(mask >> (c + 1));
        const std::int64_t sign =
            (mode == ExpansionMode::determinant && (inversions & 1)) ? -1 : 1;
        auto& target = next[mask | (std::size_t{1} << c)];
        for (const auto& [e, coeff] : level[mask]) {
          ExponentVector e2 = e;
          e2.bump(var - 1);
          std::int64_t& slot = target[e2];
          if (__builtin_add_overflow(slot, sign * coeff, &slot)) {
            throw CapacityError("coefficient overflow during symbolic expansion");
          }
        }
      }
    }
    for (auto& m : next) {
      std::erase_if(m, [](const auto& kv) { return kv.second == 0; });
    }
    level = std::move(next);
  }

  SparsePoly poly(tmpl.variable_count(), d);
  for (const auto& [e, coeff] : level[states - 1]) {
    poly.add(e, BigInt(static_cast<long>(coeff)));
  }
  return poly;
}

const SparsePoly& cached_expansion(const ProblemSpec& spec, ExpansionMode mode, int cap) {
  check_cap(spec, cap);
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SparsePoly>> cache;
  const auto key = std::make_pair(spec.n(), static_cast<int>(mode));
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) {
      return *it->second;
    }
  }
  auto poly = std::make_shared<const SparsePoly>(expand_determinant(SymbolicTemplate(spec), mode, cap));
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(poly));
  return *it->second;
}

namespace {

// sum_g Q_g^2 prod_k g_k! sigma_k^{2 g_k}
BigInt weighted_square_sum(const SparsePoly& q, std::span<const BigInt> sigma2) {
  BigInt total = 0;
  for (const auto& [e, c] : q.terms()) {
    BigInt w = c * c;
    for (int k = 0; k < q.variable_count(); ++k) {
      const int g = e.get(k);
      if (g == 0) {
        continue;
      }
      w *= pow_big(sigma2[static_cast<std::size_t>(k)], g) * factorial(g);
    }
    total += w;
  }
  return total;
}

}  // namespace

ExactRational bombieri_norm_sq(const SparsePoly& p, std::span<const BigInt> sigma2) {
  return ExactRational(weighted_square_sum(p, sigma2), factorial(p.degree()));
}

ExactRational complex_second_moment_bombieri(const SparsePoly& q, std::span<const BigInt> sigma2) {
  return ExactRational(factorial(q.degree())) * bombieri_norm_sq(q, sigma2);
}

ExactRational complex_second_moment_direct(const SparsePoly& q, std::span<const BigInt> sigma2) {
  // E|z|^{2g} = g! sigma^{2g} for a circular complex Gaussian; cross terms vanish.
  BigInt total = 0;
  for (const auto& [e, c] : q.terms()) {
    BigInt w = c * c;
    for (int k = 0; k < q.variable_count(); ++k) {
      for (int g = e.get(k); g > 0; --g) {
        w *= sigma2[static_cast<std::size_t>(k)] * g;
      }
    }
    total += w;
  }
  return ExactRational(total);
}

ExactRational complex_second_moment(const ProblemSpec& spec, int cap) {
  const SparsePoly& q = cached_expansion(spec, ExpansionMode::determinant, cap);
  const SymbolicTemplate tmpl(spec);
  const auto via_norm = complex_second_moment_bombieri(q, tmpl.variances());
  const auto direct = complex_second_moment_direct(q, tmpl.variances());
  if (!(via_norm == direct)) {
    throw ConsistencyError("complex second moment routes disagree: Bombieri " + via_norm.str() +
                           " vs direct " + direct.str());
  }
  return direct;
}

BigInt cn_exact_symbolic(const ProblemSpec& spec, int cap) {
  const ExactRational cn = prefactor_complex(spec) * complex_second_moment(spec, cap);
  if (!cn.is_integer()) {
    throw ConsistencyError("symbolic C_n is not an integer: " + cn.str());
  }
  return cn.numerator();
}

ExactRational expected_det_from_poly(const SparsePoly& q, std::span<const BigInt> sigma2) {
  BigInt total = 0;
  for (const auto& [e, c] : q.terms()) {
    if (!(e.parity() == ExponentVector{})) {
      continue;
    }
    BigInt w = c;
    for (int k = 0; k < q.variable_count(); ++k) {
      w *= gaussian_moment(e.get(k), sigma2[static_cast<std::size_t>(k)]);
    }
    total += w;
  }
  return ExactRational(total);
}

ExactRational expected_det_exact(const ProblemSpec& spec, int cap) {
  const SparsePoly& q = cached_expansion(spec, ExpansionMode::determinant, cap);
  const SymbolicTemplate tmpl(spec);
  const ExactRational from_poly = expected_det_from_poly(q, tmpl.variances());
  const ExactRational closed(expected_det_closed_form(spec));
  if (!(from_poly == closed)) {
    throw ConsistencyError("E det disagreement: polynomial " + from_poly.str() + " vs closed form " +
                           closed.str());
  }
  return from_poly;
}

ExactRational expected_det_sq_exact(const ProblemSpec& spec, int cap) {
  const SparsePoly& q = cached_expansion(spec, ExpansionMode::determinant, cap);
  const SymbolicTemplate tmpl(spec);
  const auto sigma2 = tmpl.variances();
  const ParityBuckets pb = bucket_by_parity(q);

  // Per-variable moment tables E[u_k^0], E[u_k^2], E[u_k^4] as 128-bit ints.
  const int nv = q.variable_count();
  std::vector<std::array<int128, 5>> moment(static_cast<std::size_t>(nv));
  for (int k = 0; k < nv; ++k) {
    const auto s2 = sigma2[static_cast<std::size_t>(k)].get_si();
    moment[static_cast<std::size_t>(k)] = {1, 0, s2, 0, static_cast<int128>(3) * s2 * s2};
  }

  BigInt total = 0;
  int128 acc = 0;
  auto flush = [&] {
    total += to_big(acc);
    acc = 0;
  };
  auto accumulate = [&](int128 term) {
    if (__builtin_add_overflow(acc, term, &acc)) {
      flush();
      acc = term;
    }
  };

  for (const auto& bucket : pb.buckets) {
    for (std::size_t ia = 0; ia < bucket.size(); ++ia) {
      const auto a = bucket[ia];
      for (std::size_t ib = ia; ib < bucket.size(); ++ib) {
        const auto b = bucket[ib];
        // Merge the two sparse exponent lists.
        int128 w = static_cast<int128>(pb.coeffs[a].get_si()) * pb.coeffs[b].get_si();
        const auto& sa = pb.sparse[a];
        const auto& sb = pb.sparse[b];
        std::size_t i = 0, j = 0;
        while (w != 0 && (i < sa.size() || j < sb.size())) {
          int k, e;
          if (j == sb.size() || (i < sa.size() && sa[i].first < sb[j].first)) {
            k = sa[i].first;
            e = sa[i++].second;
          } else if (i == sa.size() || sb[j].first < sa[i].first) {
            k = sb[j].first;
            e = sb[j++].second;
          } else {
            k = sa[i].first;
            e = sa[i++].second + sb[j++].second;
          }
          if (__builtin_mul_overflow(w, moment[static_cast<std::size_t>(k)][static_cast<std::size_t>(e)], &w)) {
            throw CapacityError("128-bit overflow in the exact second moment");
          }
        }
        accumulate(ia == ib ? w : 2 * w);
      }
    }
  }
  flush();
  return ExactRational(total);
}

LemmaI1Report verify_lemma_i1(const ProblemSpec& spec, int cap) {
  const SparsePoly& signed_poly = cached_expansion(spec, ExpansionMode::determinant, cap);
  const SparsePoly& counts = cached_expansion(spec, ExpansionMode::permanent, cap);
  LemmaI1Report report;
  report.support_size = signed_poly.size();
  bool first = true;
  for (const auto& [e, c] : signed_poly.terms()) {
    const BigInt a = abs(c);
    if (first || a < report.min_abs_coefficient) {
      report.min_abs_coefficient = a;
    }
    if (first || a > report.max_abs_coefficient) {
      report.max_abs_coefficient = a;
    }
    first = false;
  }
  report.generating_permutations = 0;
  for (const auto& [e, count] : counts.terms()) {
    report.generating_permutations += count;
    if (abs(signed_poly.coefficient(e)) != count) {
      ++report.count_mismatches;
    }
  }
  // A monomial of the signed expansion absent from the count expansion is impossible,
  // but a count with no signed counterpart is exactly a cancellation.
  report.permanent_count_match =
      report.count_mismatches == 0 && counts.size() == signed_poly.size();
  return report;
}

LemmaI2Report verify_lemma_i2(const ProblemSpec& spec, int cap) {
  const SparsePoly& q = cached_expansion(spec, ExpansionMode::determinant, cap);
  const ParityBuckets pb = bucket_by_parity(q);
  LemmaI2Report report;
  for (const auto& bucket : pb.buckets) {
    for (std::size_t ia = 0; ia < bucket.size(); ++ia) {
      const auto& a = pb.exps[bucket[ia]];
      for (std::size_t ib = ia; ib < bucket.size(); ++ib) {
        const auto half = ExponentVector::midpoint(a, pb.exps[bucket[ib]]);
        ++report.pairs_checked;
        if (!q.contains(half)) {
          ++report.violations;
        }
      }
    }
  }
  return report;
}

void write_poly_text(std::ostream& out, const SparsePoly& p) {
  for (const auto& t : p.sorted_terms()) {
    out << t.coefficient.get_str();
    for (int k = 0; k < p.variable_count(); ++k) {
      out << ' ' << t.exponents.get(k);
    }
    out << '\n';
  }
}

}  // namespace linecount
