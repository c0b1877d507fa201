#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coreset/field.hpp"
#include "support/oracles.hpp"

using namespace coreset;
using coreset::testing::brute_force_irreducible;
using coreset::testing::random_monic;
using coreset::testing::random_poly;

TEST_CASE("prime field arithmetic") {
  SUBCASE("frozen division example") { CHECK(Fp(3, 7) / Fp(5, 7) == Fp(2, 7)); }

  SUBCASE("negative inputs normalize into [0, q)") {
    CHECK(Fp(-1, 5) == Fp(4, 5));
    CHECK(Fp(-10, 5) == Fp(0, 5));
  }

  SUBCASE("non-prime modulus is rejected") {
    CHECK_THROWS_AS(Fp(1, 6), std::domain_error);
    CHECK_THROWS_AS(Fp(1, 1), std::domain_error);
    CHECK_THROWS_AS(Fp(1, 91), std::domain_error);  // 7*13, above the bitmask fast path
  }

  SUBCASE("mixed moduli are rejected") {
    CHECK_THROWS_AS(Fp(1, 2) + Fp(1, 3), std::domain_error);
    CHECK_THROWS_AS((void)(Fp(1, 2) == Fp(1, 3)), std::domain_error);
  }

  SUBCASE("division by zero is rejected") { CHECK_THROWS_AS(Fp(1, 5) / Fp(0, 5), std::domain_error); }

  SUBCASE("field axioms, exhaustive per modulus") {
    for (std::uint32_t q : {2u, 3u, 5u, 7u}) {
      for (std::uint32_t a = 0; a < q; ++a) {
        for (std::uint32_t b = 0; b < q; ++b) {
          Fp x(a, q), y(b, q);
          CHECK(x + y == y + x);
          CHECK(x * y == y * x);
          CHECK(x + (-x) == Fp(0, q));
          if (b != 0) CHECK((x / y) * y == x);
          for (std::uint32_t c = 0; c < q; ++c) {
            Fp z(c, q);
            CHECK((x + y) + z == x + (y + z));
            CHECK((x * y) * z == x * (y * z));
            CHECK(x * (y + z) == x * y + x * z);
          }
        }
      }
      for (std::uint32_t a = 1; a < q; ++a) CHECK(Fp(a, q) * Fp(a, q).inverse() == Fp(1, q));
    }
  }
}

TEST_CASE("dense polynomial arithmetic") {
  auto P = [](std::initializer_list<int> cs, std::uint32_t q) {
    std::vector<Fp> v;
    for (int c : cs) v.emplace_back(c, q);
    return FpPoly{std::move(v)};
  };

  SUBCASE("product over F_2: (x+1)^2 = x^2+1") {
    CHECK(P({1, 1}, 2) * P({1, 1}, 2) == P({1, 0, 1}, 2));
  }

  SUBCASE("zero polynomial has empty coefficients and degree -1") {
    FpPoly z;
    CHECK(z.is_zero());
    CHECK(z.degree() == -1);
    CHECK((P({1, 1}, 2) - P({1, 1}, 2)).is_zero());
  }

  SUBCASE("evaluation") {
    FpPoly f = P({1, 1, 1}, 2);  // x^2+x+1 has no roots in F_2
    CHECK(f.eval(Fp(0, 2)) == Fp(1, 2));
    CHECK(f.eval(Fp(1, 2)) == Fp(1, 2));
  }

  SUBCASE("divmod leaves a remainder smaller than the divisor") {
    SplitMix64 rng(0xfee1db01);
    for (int round = 0; round < 300; ++round) {
      const std::uint32_t q = (round % 2) ? 3 : 5;
      FpPoly a = random_poly(rng, q, 6);
      FpPoly b = random_monic(rng, q, 1 + static_cast<int>(rng.below(3)));
      auto [quot, rem] = divmod(a, b);
      CHECK(quot * b + rem == a);
      CHECK(rem.degree() < b.degree());
    }
  }

  SUBCASE("division by zero polynomial is rejected") {
    CHECK_THROWS_AS(divmod(P({1, 1}, 2), FpPoly{}), std::domain_error);
  }

  SUBCASE("gcd and lcm are monic and multiplicative") {
    SplitMix64 rng(0x5eed);
    for (int round = 0; round < 200; ++round) {
      const std::uint32_t q = (round % 2) ? 3 : 7;
      FpPoly a = random_monic(rng, q, 1 + static_cast<int>(rng.below(4)));
      FpPoly b = random_monic(rng, q, 1 + static_cast<int>(rng.below(4)));
      FpPoly g = poly_gcd(a, b);
      FpPoly l = poly_lcm(a, b);
      CHECK(g.is_monic());
      CHECK(l.is_monic());
      CHECK(divides(g, a));
      CHECK(divides(g, b));
      CHECK(divides(a, l));
      CHECK(divides(b, l));
      CHECK((g * l) == (a * b).monic());
      auto [gg, u, v] = poly_xgcd(a, b);
      CHECK(gg == g);
      CHECK(u * a + v * b == g);
    }
  }
}

TEST_CASE("irreducible enumeration") {
  SUBCASE("degree one, F_2, in coefficient-lex order") {
    auto irr = enumerate_irreducibles(2, 1);
    REQUIRE(irr.size() == 2);
    CHECK(irr[0].to_string() == "x");
    CHECK(irr[1].to_string() == "x + 1");
  }

  SUBCASE("monic irreducible quadratics over F_3") {
    auto irr = enumerate_irreducibles(3, 2);
    REQUIRE(irr.size() == 3);  // (q^2-q)/2
    CHECK(irr[0].to_string() == "x^2 + 1");
    CHECK(irr[1].to_string() == "x^2 + x + 2");
    CHECK(irr[2].to_string() == "x^2 + 2*x + 2");
  }

  SUBCASE("counts match (q^2-q)/2 and the brute-force divisor scan") {
    for (std::uint32_t q : {2u, 3u, 5u, 7u}) {
      auto irr = enumerate_irreducibles(q, 2);
      CHECK(irr.size() == (static_cast<std::size_t>(q) * q - q) / 2);
      for (const auto& p : irr) CHECK(brute_force_irreducible(p));
      // completeness: every brute-force irreducible monic quadratic is listed
      std::size_t brute_count = 0;
      for (std::uint64_t idx = 0; idx < static_cast<std::uint64_t>(q) * q; ++idx) {
        if (brute_force_irreducible(monic_from_index(q, 2, idx))) ++brute_count;
      }
      CHECK(brute_count == irr.size());
    }
  }

  SUBCASE("cubics over F_2") {
    auto irr = enumerate_irreducibles(2, 3);
    REQUIRE(irr.size() == 2);
    CHECK(irr[0].to_string() == "x^3 + x + 1");
    CHECK(irr[1].to_string() == "x^3 + x^2 + 1");
  }
}

TEST_CASE("factorization by trial division") {
  auto P = [](std::initializer_list<int> cs, std::uint32_t q) {
    std::vector<Fp> v;
    for (int c : cs) v.emplace_back(c, q);
    return FpPoly{std::move(v)};
  };

  SUBCASE("x^2 + x over F_2") {
    auto f = factorize(P({0, 1, 1}, 2));
    REQUIRE(f.size() == 2);
    CHECK(f[0].first.to_string() == "x");
    CHECK(f[0].second == 1);
    CHECK(f[1].first.to_string() == "x + 1");
    CHECK(f[1].second == 1);
  }

  SUBCASE("multiplicities: x^4 + x^2 = x^2 (x+1)^2 over F_2") {
    auto f = factorize(P({0, 0, 1, 0, 1}, 2));
    REQUIRE(f.size() == 2);
    CHECK(f[0].second == 2);
    CHECK(f[1].second == 2);
  }

  SUBCASE("rejects non-monic and constant input") {
    CHECK_THROWS_AS(factorize(P({1, 2}, 3)), std::invalid_argument);
    CHECK_THROWS_AS(factorize(P({1}, 3)), std::invalid_argument);
  }

  SUBCASE("random reassembly, factors irreducible, sorted by (degree, lex)") {
    SplitMix64 rng(0xabcdef);
    for (int round = 0; round < 120; ++round) {
      const std::uint32_t q = (round % 2) ? 2 : 3;
      FpPoly f = random_monic(rng, q, 1 + static_cast<int>(rng.below(6)));
      auto parts = factorize(f);
      FpPoly prod = FpPoly::constant(Fp(1, q));
      for (const auto& [p, mult] : parts) {
        CHECK(brute_force_irreducible(p));
        for (int i = 0; i < mult; ++i) prod = prod * p;
      }
      CHECK(prod == f);
      for (std::size_t i = 1; i < parts.size(); ++i) {
        CHECK(parts[i - 1].first.degree() <= parts[i].first.degree());
      }
    }
  }
}

TEST_CASE("extension fields") {
  auto P = [](std::initializer_list<int> cs, std::uint32_t q) {
    std::vector<Fp> v;
    for (int c : cs) v.emplace_back(c, q);
    return FpPoly{std::move(v)};
  };

  SUBCASE("F_4 = F_2[y]/(y^2+y+1): alpha^2 = alpha + 1") {
    auto K = build_extension(2, P({1, 1, 1}, 2));
    Ext a = K->alpha();
    CHECK(a * a == a + K->one());
    CHECK(a.pow(3) == K->one());
    CHECK(K->root(1) == a * a);  // Frobenius orbit (alpha, alpha^2)
    CHECK(embed(P({1, 1, 1}, 2), K).eval(a).is_zero());
    CHECK(embed(P({1, 1, 1}, 2), K).eval(K->root(1)).is_zero());
  }

  SUBCASE("F_9 = F_3[y]/(y^2+1): roots are (alpha, 2 alpha)") {
    auto K = build_extension(3, P({1, 0, 1}, 3));
    Ext a = K->alpha();
    CHECK(K->root(1) == K->from_base(Fp(2, 3)) * a);
    CHECK(a * a == K->from_base(Fp(-1, 3)));
    // exhaustive inverses
    int nonzero = 0;
    for (const Ext& x : all_field_elements(K->zero())) {
      if (x.is_zero()) continue;
      ++nonzero;
      CHECK(x * x.inverse() == K->one());
      CHECK(x.pow(8) == K->one());  // multiplicative group order q^2-1
    }
    CHECK(nonzero == 8);
  }

  SUBCASE("degenerate degree-one extension keeps the base field") {
    auto K = build_extension(2, P({1, 1}, 2));  // p = y + 1, root = 1
    CHECK(K->degree() == 1);
    CHECK(K->alpha() == K->one());
    CHECK(K->alpha().in_base());
  }

  SUBCASE("reducible modulus is rejected") {
    CHECK_THROWS_AS(build_extension(3, P({2, 0, 1}, 3)), std::domain_error);  // x^2+2 = (x+1)(x+2)
    CHECK_THROWS_AS(build_extension(2, P({0, 0, 1}, 2)), std::domain_error);  // x^2
  }

  SUBCASE("elements of distinct fields do not mix") {
    auto K4 = build_extension(2, P({1, 1, 1}, 2));
    auto K8 = build_extension(2, P({1, 1, 0, 1}, 2));
    CHECK_THROWS_AS(K4->alpha() + K8->alpha(), std::domain_error);
    // ... but two instances of the *same* field interoperate
    auto K4b = build_extension(2, P({1, 1, 1}, 2));
    CHECK(K4->alpha() + K4b->alpha() == K4->zero());
  }

  SUBCASE("embedding round-trips through coordinate zero") {
    auto K = build_extension(3, P({1, 0, 1}, 3));
    Ext e = embed(Fp(2, 3), K);
    CHECK(e.in_base());
    CHECK(e.coord(0) == Fp(2, 3));
  }

  SUBCASE("Frobenius orbit of F_8 is three distinct roots") {
    auto K = build_extension(2, P({1, 1, 0, 1}, 2));  // y^3+y+1
    auto roots = K->roots();
    REQUIRE(roots.size() == 3);
    auto lifted = embed(P({1, 1, 0, 1}, 2), K);
    for (const Ext& r : roots) CHECK(lifted.eval(r).is_zero());
    CHECK(roots[0] != roots[1]);
    CHECK(roots[1] != roots[2]);
    CHECK(roots[0] != roots[2]);
  }
}
