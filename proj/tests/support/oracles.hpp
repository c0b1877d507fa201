// Independent brute-force oracles used to pin expected values in tests.
// These are deliberately naive re-derivations that avoid the code paths they
// check.
#ifndef CORESET_TESTS_SUPPORT_ORACLES_HPP
#define CORESET_TESTS_SUPPORT_ORACLES_HPP

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "coreset/field.hpp"
#include "coreset/linalg.hpp"
#include "coreset/matpoly.hpp"
#include "coreset/rng.hpp"

namespace coreset::testing {

// Irreducibility by scanning every monic divisor candidate of lower degree.
inline bool brute_force_irreducible(const FpPoly& f) {
  if (f.degree() < 1) return false;
  const std::uint32_t q = f.leading().modulus();
  for (int d = 1; d < f.degree(); ++d) {
    const std::uint64_t total = *checked_pow(q, static_cast<std::uint64_t>(d), ~0ull >> 1);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      if (divides(monic_from_index(q, d, idx), f)) return false;
    }
  }
  return true;
}

// Number of nonzero matrix polynomials of degree < t annihilating every member
// of `set` under right evaluation, found by exhaustive enumeration of all
// q^(t*n*n) coefficient stacks.  Only feasible for tiny parameters; the caller
// asserts feasibility.
inline std::uint64_t brute_force_annihilator_count(const std::vector<Matrix<Fp>>& set,
                                                   std::size_t t) {
  const std::size_t n = set.at(0).rows();
  const std::uint32_t q = set[0].field_like().modulus();
  const std::uint64_t total = *checked_pow(q, t * n * n, ~0ull >> 1);
  std::uint64_t count = 0;
  for (std::uint64_t idx = 1; idx < total; ++idx) {
    auto digits = base_q_digits(idx, q, t * n * n);
    std::vector<Matrix<Fp>> coeffs;
    for (std::size_t k = 0; k < t; ++k) {
      Matrix<Fp> m(n, n, Fp(0, q));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = Fp(digits[k * n * n + i * n + j], q);
      }
      coeffs.push_back(std::move(m));
    }
    MatrixPoly<Fp> f{std::move(coeffs)};
    bool kills_all = true;
    for (const auto& a : set) {
      if (!right_eval(f, a).is_zero()) {
        kills_all = false;
        break;
      }
    }
    if (kills_all) ++count;
  }
  return count;
}

// Random monic polynomial of the given degree (for algebraic property tests).
inline FpPoly random_monic(SplitMix64& rng, std::uint32_t q, int degree) {
  std::vector<Fp> c;
  for (int i = 0; i < degree; ++i) c.emplace_back(static_cast<std::int64_t>(rng.below(q)), q);
  c.emplace_back(1, q);
  return FpPoly{std::move(c)};
}

inline FpPoly random_poly(SplitMix64& rng, std::uint32_t q, int max_degree) {
  std::vector<Fp> c;
  const std::uint64_t len = rng.below(static_cast<std::uint64_t>(max_degree) + 2);
  for (std::uint64_t i = 0; i < len; ++i) c.emplace_back(static_cast<std::int64_t>(rng.below(q)), q);
  return FpPoly{std::move(c)};
}

inline Matrix<Fp> random_matrix(SplitMix64& rng, std::size_t n, std::uint32_t q) {
  Matrix<Fp> m(n, n, Fp(0, q));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = Fp(static_cast<std::int64_t>(rng.below(q)), q);
  }
  return m;
}

inline Matrix<Fp> random_invertible(SplitMix64& rng, std::size_t n, std::uint32_t q) {
  for (;;) {
    Matrix<Fp> m = random_matrix(rng, n, q);
    if (rank(m) == n) return m;
  }
}

// Membership of a vector in the span of `gens` checked by enumerating all
// linear combinations (q^k of them).
inline bool brute_force_in_span(const std::vector<std::vector<Fp>>& gens,
                                const std::vector<Fp>& target, std::uint32_t q) {
  const std::uint64_t total = *checked_pow(q, gens.size(), ~0ull >> 1);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    auto digits = base_q_digits(idx, q, gens.size());
    std::vector<Fp> acc(target.size(), Fp(0, q));
    for (std::size_t g = 0; g < gens.size(); ++g) {
      for (std::size_t j = 0; j < target.size(); ++j) {
        acc[j] += Fp(digits[g], q) * gens[g][j];
      }
    }
    bool eq = true;
    for (std::size_t j = 0; j < target.size(); ++j) {
      if (!(acc[j] == target[j])) {
        eq = false;
        break;
      }
    }
    if (eq) return true;
  }
  return false;
}

// Determinant of a square polynomial matrix by Laplace expansion along the
// first row (fine for the tiny sizes used in tests).
inline FpPoly poly_det(const std::vector<std::vector<FpPoly>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  FpPoly out;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<FpPoly>> sub;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<FpPoly> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) row.push_back(m[i][k]);
      }
      sub.push_back(std::move(row));
    }
    FpPoly term = m[0][j] * poly_det(sub);
    out = (j % 2 == 0) ? out + term : out - term;
  }
  return out;
}

// Invariant factors of `a` from determinantal divisors: d_k = gcd of all k x k
// minors of xI - a, invariant factor k = d_k / d_{k-1}.  Completely
// independent of the Smith-normal-form elimination.
inline std::vector<FpPoly> invariant_factors_by_minors(const Matrix<Fp>& a) {
  const std::size_t n = a.rows();
  const Fp like = a.field_like();
  std::vector<std::vector<FpPoly>> m(n, std::vector<FpPoly>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Fp> cs{like.zero() - a.at(i, j)};
      if (i == j) cs.push_back(like.one());
      m[i][j] = FpPoly(cs);
    }
  }
  // index subsets of size k, in lex order
  auto subsets = [&](std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> pick(k);
    auto rec = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
      if (depth == k) {
        out.push_back(pick);
        return;
      }
      for (std::size_t i = start; i < n; ++i) {
        pick[depth] = i;
        self(self, i + 1, depth + 1);
      }
    };
    rec(rec, 0, 0);
    return out;
  };
  std::vector<FpPoly> dd;  // dd[k-1] = gcd of k x k minors
  for (std::size_t k = 1; k <= n; ++k) {
    FpPoly g;
    for (const auto& rows : subsets(k)) {
      for (const auto& cols : subsets(k)) {
        std::vector<std::vector<FpPoly>> sub(k, std::vector<FpPoly>(k));
        for (std::size_t i = 0; i < k; ++i) {
          for (std::size_t j = 0; j < k; ++j) sub[i][j] = m[rows[i]][cols[j]];
        }
        FpPoly minor = poly_det(sub);
        if (minor.is_zero()) continue;
        g = g.is_zero() ? minor.monic() : poly_gcd(g, minor);
      }
    }
    dd.push_back(g);
  }
  std::vector<FpPoly> chain;
  FpPoly prev = FpPoly::constant(like.one());
  for (std::size_t k = 0; k < n; ++k) {
    FpPoly f = dd[k] / prev;
    if (f.degree() >= 1) chain.push_back(f.monic());
    prev = dd[k];
  }
  return chain;
}

// Conjugation orbit of `a` as a set of canonical matrix keys, by scanning all
// invertible matrices of the ambient ring.
inline std::set<std::vector<std::uint64_t>> brute_force_orbit(const Matrix<Fp>& a) {
  const std::size_t n = a.rows();
  const std::uint32_t q = a.field_like().modulus();
  auto key_of = [&](const Matrix<Fp>& m) {
    std::vector<std::uint64_t> key;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) key.push_back(m.at(i, j).value());
    }
    return key;
  };
  std::set<std::vector<std::uint64_t>> orbit;
  const std::uint64_t total = *checked_pow(q, n * n, ~0ull >> 1);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Matrix<Fp> p = matrix_from_index(idx, n, q);
    if (rank(p) != n) continue;
    orbit.insert(key_of(p * a * invert(p)));
  }
  return orbit;
}

}  // namespace coreset::testing

#endif  // CORESET_TESTS_SUPPORT_ORACLES_HPP
