/**
 * Built-in invariant suite: fast, deterministic checks of the library's core
 * guarantees, runnable from the command line on any installation.  Each check
 * reports pass/fail with a diagnostic detail string; a failure means the
 * installation cannot be trusted.
 *
 * @copyright Apache License 2.0
 */
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "coreset/classes.hpp"
#include "coreset/decide.hpp"
#include "coreset/experiments.hpp"
#include "coreset/rng.hpp"

namespace coreset {

struct SelfTestResult {
  std::string name;
  bool pass = false;
  std::string detail;  ///< empty on success, diagnostic on failure
};

namespace detail {

inline void run_check(std::vector<SelfTestResult>& out, const std::string& name,
                      const std::function<void()>& body) {
  SelfTestResult r;
  r.name = name;
  try {
    body();
    r.pass = true;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = e.what();
  }
  out.push_back(std::move(r));
}

inline void expect(bool cond, const std::string& message) {
  if (!cond) throw std::logic_error(message);
}

}  // namespace detail

/// Runs every built-in invariant check; deterministic and seedless.
inline std::vector<SelfTestResult> selftest_all() {
  using detail::expect;
  std::vector<SelfTestResult> out;

  detail::run_check(out, "prime field arithmetic", [] {
    for (std::uint32_t q : {2u, 3u, 5u, 7u, 11u}) {
      for (std::uint32_t v = 1; v < q; ++v) {
        const Fp x(v, q);
        expect((x * x.inverse()).value() == 1, "inverse failed in F_" + std::to_string(q));
      }
    }
  });

  detail::run_check(out, "polynomial gcd identity", [] {
    SplitMix64 rng(101);
    for (int round = 0; round < 50; ++round) {
      const std::uint32_t q = std::vector<std::uint32_t>{2, 3, 5}[rng.below(3)];
      const FpPoly a = monic_from_index(q, 1 + rng.below(4), rng.below(8));
      const FpPoly b = monic_from_index(q, 1 + rng.below(4), rng.below(8));
      const FpPoly g = poly_gcd(a, b);
      expect(divides(g, a) && divides(g, b), "gcd does not divide its arguments");
      const auto [gg, u, v] = poly_xgcd(a, b);
      expect(u * a + v * b == gg, "extended gcd certificate failed");
    }
  });

  detail::run_check(out, "extension field root orbit", [] {
    for (std::uint32_t q : {2u, 3u}) {
      for (const auto& p : enumerate_irreducibles(q, 2)) {
        auto field = build_extension(q, p);
        for (std::size_t i = 0; i < 2; ++i) {
          const Ext r = field->root(i);
          expect(embed(p, field).eval(r).is_zero(), "listed root does not vanish");
        }
      }
    }
  });

  detail::run_check(out, "row reduction duality", [] {
    SplitMix64 rng(202);
    for (int round = 0; round < 30; ++round) {
      const std::uint32_t q = std::vector<std::uint32_t>{2, 3, 5}[rng.below(3)];
      const std::size_t n = 2 + rng.below(2);
      Matrix<Fp> m = Matrix<Fp>::zero(n, n, Fp(0, q));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          m.at(i, j) = Fp(static_cast<std::uint32_t>(rng.below(q)), q);
      const Subspace<Fp> ns = nullspace(m);
      expect(ns == orthocomplement(row_space(m)), "nullspace is not the row-space complement");
      expect(ns.dim() + rank(m) == n, "rank-nullity failed");
    }
  });

  detail::run_check(out, "minimal polynomial annihilates", [] {
    SplitMix64 rng(303);
    for (int round = 0; round < 30; ++round) {
      const std::uint32_t q = std::vector<std::uint32_t>{2, 3, 5}[rng.below(3)];
      const std::size_t n = 2 + rng.below(2);
      Matrix<Fp> m = Matrix<Fp>::zero(n, n, Fp(0, q));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          m.at(i, j) = Fp(static_cast<std::uint32_t>(rng.below(q)), q);
      const FpPoly mu = minimal_polynomial(m);
      expect(eval_at(mu, m).is_zero(), "minimal polynomial does not annihilate");
      expect(mu.degree() <= static_cast<int>(n), "minimal polynomial degree exceeds n");
    }
  });

  detail::run_check(out, "class sizes fill the ring", [] {
    for (auto [n, q] : std::vector<std::pair<std::size_t, std::uint32_t>>{{2, 2}, {2, 3}, {2, 5}}) {
      BigInt mass = 0;
      for (const auto& d : enumerate_classes(n, q)) mass += class_size(d);
      BigInt expected = 1;
      for (std::size_t i = 0; i < n * n; ++i) expected *= q;
      expect(mass == expected, "class sizes do not sum to q^(n^2)");
    }
  });

  detail::run_check(out, "image bucket formula", [] {
    for (const auto& d : enumerate_classes(2, 2)) {
      for (const auto& [p, mult] : factorize(d.mu())) {
        (void)mult;
        EquivClassStats stats = image_equivalence_partition(d, p);
        if (static_cast<std::size_t>(p.degree()) * stats.r <= d.n) {
          expect(BigInt(stats.class_count) == image_count_formula(d.n, d.q, stats.r, stats.s),
                 "bucket count disagrees with the counting formula");
        }
      }
    }
  });

  detail::run_check(out, "decision methods agree", [] {
    SplitMix64 rng(404);
    for (int round = 0; round < 40; ++round) {
      const std::size_t count = 1 + rng.below(4);
      std::vector<Matrix<Fp>> set;
      for (std::size_t i = 0; i < count; ++i) {
        Matrix<Fp> m = Matrix<Fp>::zero(2, 2, Fp(0, 3));
        for (std::size_t r = 0; r < 2; ++r)
          for (std::size_t c = 0; c < 2; ++c)
            m.at(r, c) = Fp(static_cast<std::uint32_t>(rng.below(3)), 3);
        set.push_back(std::move(m));
      }
      const CoreReport a = is_core_oracle(set);
      const CoreReport b = is_core_factorwise(set);
      expect(a.verdict == b.verdict, "oracle and factorwise disagree");
    }
  });

  detail::run_check(out, "witnesses annihilate", [] {
    for (std::uint32_t q : {2u, 3u}) {
      for (const auto& p : enumerate_irreducibles(q, 2)) {
        const std::vector<Matrix<Fp>> set{companion_matrix(p)};
        const CoreReport rep = is_core_oracle(set);
        expect(rep.verdict == Verdict::kNotCore, "irreducible companion singleton must be non-core");
        expect(rep.witness.has_value(), "non-core verdict lacks a witness");
        expect(right_eval(*rep.witness, set[0]).is_zero(), "witness does not annihilate");
      }
    }
  });

  detail::run_check(out, "tail bound and field constant", [] {
    const ChernoffRow row = chernoff_tail_check(100, 0.5);
    expect(row.holds, "binomial tail exceeds the sub-gaussian bound");
    const auto rows = constant_bound_prefixes(2, 40);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      expect(rows[i].exact > rows[i - 1].exact, "constant prefixes are not increasing");
      expect(rows[i].value < 4.0, "constant prefix crossed 4");
    }
  });

  detail::run_check(out, "monte carlo brackets the exact probability", [] {
    RandomSubsetModel model{2, 2, 0.5, 977, 400};
    const MonteCarloRow row = monte_carlo_pure_core(model);
    const double exact = 325.0 / 2048.0;
    expect(row.wilson_lo <= exact && exact <= row.wilson_hi,
           "95% interval misses the exactly computed probability");
  });

  return out;
}

}  // namespace coreset
