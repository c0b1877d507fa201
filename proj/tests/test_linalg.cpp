#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "coreset/linalg.hpp"
#include "support/oracles.hpp"

using namespace coreset;
using coreset::testing::brute_force_in_span;
using coreset::testing::random_invertible;
using coreset::testing::random_matrix;

namespace {

std::vector<Fp> vec(std::initializer_list<int> cs, std::uint32_t q) {
  std::vector<Fp> v;
  for (int c : cs) v.emplace_back(c, q);
  return v;
}

std::vector<std::vector<Fp>> all_vectors(std::size_t n, std::uint32_t q) {
  std::vector<std::vector<Fp>> out;
  const std::uint64_t total = *checked_pow(q, n, ~0ull >> 1);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    auto digits = base_q_digits(idx, q, n);
    std::vector<Fp> v;
    for (auto d : digits) v.emplace_back(d, q);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

TEST_CASE("reduced row echelon form") {
  SUBCASE("transform record reproduces the reduction and is invertible") {
    SplitMix64 rng(0x11a);
    for (int round = 0; round < 200; ++round) {
      const std::uint32_t q = (round % 3 == 0) ? 2 : ((round % 3 == 1) ? 3 : 5);
      const std::size_t n = 1 + rng.below(4);
      const std::size_t m = 1 + rng.below(4);
      Matrix<Fp> a(n, m, Fp(0, q));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) a.at(i, j) = Fp(static_cast<std::int64_t>(rng.below(q)), q);
      }
      auto r = rref(a);
      CHECK(r.transform * a == r.reduced);
      CHECK(rank(r.transform) == n);  // row ops are invertible
      CHECK(r.rank <= std::min(n, m));
      CHECK(r.pivot_cols.size() == r.rank);
      // idempotence: reducing the reduced form changes nothing
      CHECK(rref(r.reduced).reduced == r.reduced);
      // pivot columns are unit columns
      for (std::size_t i = 0; i < r.rank; ++i) {
        for (std::size_t row = 0; row < n; ++row) {
          CHECK(r.reduced.at(row, r.pivot_cols[i]) == ((row == i) ? Fp(1, q) : Fp(0, q)));
        }
      }
    }
  }

  SUBCASE("inverse via the transform record") {
    SplitMix64 rng(0x11b);
    for (int round = 0; round < 100; ++round) {
      const std::uint32_t q = (round % 2) ? 3 : 7;
      const std::size_t n = 1 + rng.below(3);
      Matrix<Fp> m = random_invertible(rng, n, q);
      CHECK(m * invert(m) == Matrix<Fp>::identity(n, Fp(0, q)));
    }
    CHECK_THROWS_AS(invert(Matrix<Fp>::zero(2, 2, Fp(0, 5))), std::domain_error);
  }
}

TEST_CASE("solve_linear") {
  SplitMix64 rng(0x50313);
  for (int round = 0; round < 150; ++round) {
    const std::uint32_t q = (round % 2) ? 2 : 3;
    const std::size_t n = 1 + rng.below(3), m = 1 + rng.below(3);
    Matrix<Fp> a(n, m, Fp(0, q));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) a.at(i, j) = Fp(static_cast<std::int64_t>(rng.below(q)), q);
    }
    // consistent rhs by construction
    std::vector<Fp> x0;
    for (std::size_t j = 0; j < m; ++j) x0.emplace_back(static_cast<std::int64_t>(rng.below(q)), q);
    auto sol = solve_linear(a, a * x0);
    REQUIRE(sol.has_value());
    CHECK(a * *sol == a * x0);
  }
  // inconsistent system
  Matrix<Fp> a(2, 1, Fp(0, 2));
  a.at(0, 0) = Fp(1, 2);
  CHECK_FALSE(solve_linear(a, vec({1, 1}, 2)).has_value());
}

TEST_CASE("subspaces are canonical") {
  SUBCASE("frozen complement example over F_3") {
    auto s = Subspace<Fp>::span(3, {vec({1, 1, 0}, 3)}, Fp(0, 3));
    auto c = orthocomplement(s);
    REQUIRE(c.dim() == 2);
    CHECK(c.basis()[0] == vec({1, 2, 0}, 3));
    CHECK(c.basis()[1] == vec({0, 0, 1}, 3));
  }

  SUBCASE("span is generator-order and scaling independent") {
    auto a = Subspace<Fp>::span(3, {vec({1, 2, 0}, 5), vec({0, 0, 3}, 5)}, Fp(0, 5));
    auto b = Subspace<Fp>::span(3, {vec({0, 0, 1}, 5), vec({2, 4, 0}, 5), vec({2, 4, 3}, 5)}, Fp(0, 5));
    CHECK(a == b);
    CHECK(a.key() == b.key());
  }

  SUBCASE("membership agrees with brute-force span enumeration") {
    SplitMix64 rng(0x77);
    for (int round = 0; round < 60; ++round) {
      const std::uint32_t q = (round % 2) ? 2 : 3;
      const std::size_t n = 2 + rng.below(2);
      std::vector<std::vector<Fp>> gens;
      const std::size_t g = 1 + rng.below(2);
      for (std::size_t i = 0; i < g; ++i) {
        std::vector<Fp> v;
        for (std::size_t j = 0; j < n; ++j) v.emplace_back(static_cast<std::int64_t>(rng.below(q)), q);
        gens.push_back(std::move(v));
      }
      auto s = Subspace<Fp>::span(n, gens, Fp(0, q));
      std::uint64_t members = 0;
      for (const auto& v : all_vectors(n, q)) {
        const bool in = s.contains(v);
        CHECK(in == brute_force_in_span(gens, v, q));
        if (in) ++members;
      }
      CHECK(members == *checked_pow(q, s.dim(), ~0ull >> 1));
    }
  }

  SUBCASE("zero and full") {
    auto z = Subspace<Fp>::zero(4, Fp(0, 3));
    auto f = Subspace<Fp>::full(4, Fp(0, 3));
    CHECK(z.dim() == 0);
    CHECK(f.dim() == 4);
    CHECK(orthocomplement(z) == f);
    CHECK(orthocomplement(f) == z);
    CHECK(subspace_sum(z, f) == f);
    CHECK(subspace_intersection(z, f) == z);
  }
}

TEST_CASE("subspace calculus") {
  SplitMix64 rng(0xca1c);
  for (int round = 0; round < 80; ++round) {
    const std::uint32_t q = (round % 2) ? 2 : 3;
    const std::size_t n = 2 + rng.below(2);
    auto rand_space = [&] {
      std::vector<std::vector<Fp>> gens;
      const std::size_t g = rng.below(3);
      for (std::size_t i = 0; i < g; ++i) {
        std::vector<Fp> v;
        for (std::size_t j = 0; j < n; ++j) v.emplace_back(static_cast<std::int64_t>(rng.below(q)), q);
        gens.push_back(std::move(v));
      }
      return Subspace<Fp>::span(n, gens, Fp(0, q));
    };
    Subspace<Fp> u = rand_space(), v = rand_space();
    Subspace<Fp> s = subspace_sum(u, v);
    Subspace<Fp> i = subspace_intersection(u, v);
    CHECK(s.contains(u));
    CHECK(s.contains(v));
    CHECK(u.contains(i));
    CHECK(v.contains(i));
    CHECK(s.dim() + i.dim() == u.dim() + v.dim());  // dimension formula
    CHECK(orthocomplement(orthocomplement(u)) == u);
    CHECK(orthocomplement(u).dim() + u.dim() == n);
    // intersection membership against elementwise check
    for (const auto& w : all_vectors(n, q)) {
      CHECK(i.contains(w) == (u.contains(w) && v.contains(w)));
    }
  }
}

TEST_CASE("column, row and set row spaces") {
  SplitMix64 rng(0xc015);
  for (int round = 0; round < 80; ++round) {
    const std::uint32_t q = (round % 2) ? 3 : 5;
    const std::size_t n = 1 + rng.below(3);
    Matrix<Fp> m = random_matrix(rng, n, q);
    auto cs = column_space(m);
    auto rs = row_space(m);
    CHECK(cs.dim() == rank(m));
    CHECK(rs.dim() == rank(m));
    for (std::size_t j = 0; j < n; ++j) CHECK(cs.contains(m.col(j)));
    for (std::size_t i = 0; i < n; ++i) CHECK(rs.contains(m.row(i)));
    // null space is the complement of the row space
    Subspace<Fp> ns = nullspace(m);
    CHECK(ns == orthocomplement(row_space(m)));
    for (const auto& v : ns.basis()) {
      std::vector<Fp> img = m * v;
      for (const Fp& k : img) CHECK(k.is_zero());
    }
    Matrix<Fp> m2 = random_matrix(rng, n, q);
    CHECK(row_space_of_set<Fp>({m, m2}) == subspace_sum(row_space(m), row_space(m2)));
  }
}

TEST_CASE("scalar extension of subspaces") {
  auto K = build_extension(2, FpPoly{{Fp(1, 2), Fp(1, 2), Fp(1, 2)}});  // F_4
  SplitMix64 rng(0xe7);
  for (int round = 0; round < 40; ++round) {
    const std::size_t n = 2 + rng.below(2);
    std::vector<std::vector<Fp>> gens;
    for (std::size_t i = 0; i < 1 + rng.below(2); ++i) {
      std::vector<Fp> v;
      for (std::size_t j = 0; j < n; ++j) v.emplace_back(static_cast<std::int64_t>(rng.below(2)), 2);
      gens.push_back(std::move(v));
    }
    auto s = Subspace<Fp>::span(n, gens, Fp(0, 2));
    auto sk = extend_scalars(s, K);
    CHECK(sk.dim() == s.dim());
    // same canonical basis, embedded entrywise
    REQUIRE(sk.basis().size() == s.basis().size());
    for (std::size_t i = 0; i < s.dim(); ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(sk.basis()[i][j] == K->from_base(s.basis()[i][j]));
        CHECK(sk.basis()[i][j].in_base());
      }
    }
    // embedded generators land inside
    for (const auto& g : gens) {
      std::vector<Ext> ge;
      for (const Fp& k : g) ge.push_back(K->from_base(k));
      CHECK(sk.contains(ge));
    }
  }
}

TEST_CASE("projective enumeration") {
  CHECK(all_lines(3, Fp(0, 2)).size() == 7);
  CHECK(all_hyperplanes(3, Fp(0, 2)).size() == 7);
  CHECK(all_lines(2, Fp(0, 3)).size() == 4);
  auto K = build_extension(2, FpPoly{{Fp(1, 2), Fp(1, 2), Fp(1, 2)}});
  CHECK(all_lines(2, K->zero()).size() == 5);        // (16-1)/(4-1)
  CHECK(all_hyperplanes(2, K->zero()).size() == 5);
  for (const auto& h : all_hyperplanes(3, Fp(0, 3))) CHECK(h.dim() == 2);
  // lines are pairwise distinct
  std::set<std::vector<std::uint64_t>> keys;
  for (const auto& l : all_lines(3, Fp(0, 3))) keys.insert(l.key());
  CHECK(keys.size() == 13);  // (27-1)/2
}

TEST_CASE("matrix ring enumeration") {
  std::set<std::vector<std::uint64_t>> seen;
  for (std::uint64_t idx = 0; idx < 16; ++idx) {
    Matrix<Fp> m = matrix_from_index(idx, 2, 2);
    std::vector<std::uint64_t> key;
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) key.push_back(m.at(i, j).value());
    }
    seen.insert(key);
  }
  CHECK(seen.size() == 16);
  CHECK(matrix_from_index(0, 2, 2).is_zero());
  // digit layout: index 1 sets entry (0,0), index q sets entry (0,1)
  CHECK(matrix_from_index(1, 2, 3).at(0, 0) == Fp(1, 3));
  CHECK(matrix_from_index(3, 2, 3).at(0, 1) == Fp(1, 3));
}

TEST_CASE("matrix arithmetic over extensions") {
  auto K = build_extension(3, FpPoly{{Fp(1, 3), Fp(0, 3), Fp(1, 3)}});  // F_9
  Matrix<Ext> a(2, 2, K->zero());
  a.at(0, 0) = K->alpha();
  a.at(0, 1) = K->one();
  a.at(1, 0) = K->one();
  a.at(1, 1) = K->alpha();
  // det = alpha^2 - 1 = -2 = 1 in F_3 terms: invertible
  Matrix<Ext> inv = invert(a);
  CHECK(a * inv == Matrix<Ext>::identity(2, K->zero()));
  CHECK(a.pow(2) == a * a);
  CHECK(a.transpose() == a);
  CHECK(column_space(a).is_full());
}
