/**
 * Acceptance gate: one check per shipped guarantee, each printed as a single
 * [PASS]/[FAIL] line with a measured runtime; the process exits nonzero when
 * any criterion fails.  Criteria mirror the library's contract: agreement of
 * the three decision procedures, exact bucket-counting formulas, hyperplane
 * trap bounds, root independence, coordinate-expansion rank, the exact tail
 * and constant bounds, the Monte Carlo trend in q, and known verdicts for
 * full classes and singletons.
 *
 * @copyright Apache License 2.0
 */
#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coreset/classes.hpp"
#include "coreset/decide.hpp"
#include "coreset/experiments.hpp"
#include "coreset/rng.hpp"

using namespace coreset;

namespace {

struct Failure {
  std::string reason;
};

void expect(bool cond, const std::string& reason) {
  if (!cond) throw Failure{reason};
}

std::vector<Matrix<Fp>> subset_of(const std::vector<Matrix<Fp>>& members, std::uint64_t mask) {
  std::vector<Matrix<Fp>> out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (mask & (1ull << i)) out.push_back(members[i]);
  }
  return out;
}

FpPoly poly(std::initializer_list<int> ascending, std::uint32_t q) {
  std::vector<Fp> cs;
  for (int c : ascending) cs.emplace_back(c, q);
  return FpPoly(cs);
}

const std::vector<std::pair<std::size_t, std::uint32_t>> kRings{{2, 2}, {2, 3}, {3, 2}};

/// Union of the bucket image spaces selected by `included`; true when the sum
/// is the full space.  Works for both base-field and extension-field buckets.
template <typename K>
bool buckets_cover(const std::vector<Subspace<K>>& spaces, const std::set<std::size_t>& included) {
  std::optional<Subspace<K>> sum;
  for (std::size_t b : included) {
    sum = sum ? subspace_sum(*sum, spaces[b]) : spaces[b];
    if (sum->is_full()) return true;
  }
  return sum && sum->is_full();
}

int g_failures = 0;

void criterion(int number, const std::string& text, double limit_seconds,
               const std::function<std::string()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const std::string detail = body();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_seconds > 0 && secs > limit_seconds) {
      throw Failure{"runtime " + std::to_string(secs) + "s exceeds the " +
                    std::to_string(limit_seconds) + "s target"};
    }
    std::printf("[PASS] criterion %d: %s — %s (%.2fs)\n", number, text.c_str(), detail.c_str(),
                secs);
  } catch (const Failure& f) {
    ++g_failures;
    std::printf("[FAIL] criterion %d: %s — %s\n", number, text.c_str(), f.reason.c_str());
  } catch (const std::exception& e) {
    ++g_failures;
    std::printf("[FAIL] criterion %d: %s — unexpected error: %s\n", number, text.c_str(), e.what());
  }
  std::fflush(stdout);
}

}  // namespace

int main() {
  criterion(1,
            "the definitional, factorwise, and single-class deciders agree on every subset of "
            "every similarity class of M_2(F_2)",
            10.0, [] {
              const auto classes = enumerate_classes(2, 2);
              expect(classes.size() == 6, "expected 6 similarity classes, got " +
                                              std::to_string(classes.size()));
              std::size_t subsets = 0;
              for (const auto& d : classes) {
                const auto members = class_members(d);
                for (std::uint64_t mask = 0; mask < (1ull << members.size()); ++mask) {
                  const auto set = subset_of(members, mask);
                  const Verdict a = is_core_oracle(set, 2).verdict;
                  const Verdict b = is_core_factorwise(set, 2).verdict;
                  const Verdict c = is_core_structural(set, 2).verdict;
                  expect(a == b && b == c,
                         "disagreement on class " + d.to_string() + " mask " + std::to_string(mask));
                  ++subsets;
                }
              }
              return std::to_string(subsets) + " subsets across 6 classes, zero disagreements";
            });

  criterion(2,
            "for every linear factor of every class of M_2(F_2), M_2(F_3), M_3(F_2), the "
            "image-bucket count and size match the exact counting formula",
            0.0, [] {
              std::size_t pairs = 0;
              bool saw_named_example = false;
              for (const auto& [n, q] : kRings) {
                for (const auto& d : enumerate_classes(n, q)) {
                  const auto members = class_members(d);
                  for (const auto& [p, mult] : factorize(d.mu())) {
                    (void)mult;
                    if (p.degree() != 1) continue;
                    const EquivClassStats stats = image_equivalence_partition(d, p, members);
                    expect(stats.r * stats.s <= d.n, "linear factor produced r > n");
                    const BigInt predicted = image_count_formula(d.n, d.q, stats.r, stats.s);
                    expect(predicted == BigInt(stats.class_count),
                           "bucket count mismatch on " + d.to_string() + " factor " + p.to_string());
                    expect(stats.each_size * stats.class_count == members.size(),
                           "buckets do not tile the class " + d.to_string());
                    if (n == 2 && q == 2 && d.mu() == poly({0, 1, 1}, 2) && p == poly({0, 1}, 2)) {
                      expect(stats.class_count == 3 && stats.each_size == 2,
                             "split class must have 3 buckets of size 2");
                      saw_named_example = true;
                    }
                    ++pairs;
                  }
                }
              }
              expect(saw_named_example, "named split-class example never checked");
              return std::to_string(pairs) + " (class, linear factor) pairs, all exact";
            });

  criterion(3,
            "for every irreducible factor of degree >= 2 with r*s <= n, the extension-field "
            "bucket count and size match the exact counting formula",
            0.0, [] {
              std::size_t pairs = 0;
              bool saw_named_example = false;
              for (const auto& [n, q] : kRings) {
                for (const auto& d : enumerate_classes(n, q)) {
                  const auto members = class_members(d);
                  for (const auto& [p, mult] : factorize(d.mu())) {
                    (void)mult;
                    if (p.degree() < 2) continue;
                    const EquivClassStats stats = image_equivalence_partition(d, p, members);
                    if (stats.r * stats.s > d.n) continue;
                    const BigInt predicted = image_count_formula(d.n, d.q, stats.r, stats.s);
                    expect(predicted == BigInt(stats.class_count),
                           "bucket count mismatch on " + d.to_string() + " factor " + p.to_string());
                    expect(stats.each_size * stats.class_count == members.size(),
                           "buckets do not tile the class " + d.to_string());
                    if (n == 2 && q == 2 && d.mu() == poly({1, 1, 1}, 2)) {
                      expect(stats.class_count == 2 && stats.each_size == 1 && stats.r == 1 &&
                                 stats.s == 2,
                             "irreducible-quadratic class must have 2 singleton buckets");
                      saw_named_example = true;
                    }
                    ++pairs;
                  }
                }
              }
              expect(saw_named_example, "named irreducible-quadratic example never checked");
              return std::to_string(pairs) + " (class, higher factor) pairs, all exact";
            });

  criterion(4,
            "exhaustive subset scans of M_2(F_2) and hyperplane trap counts for M_2(F_3) and "
            "M_3(F_2) stay within four class sizes per field element",
            120.0, [] {
              for (const auto& d : enumerate_classes(2, 2)) {
                const auto members = class_members(d);
                std::uint64_t max_noncore = 0;
                for (std::uint64_t mask = 1; mask < (1ull << members.size()); ++mask) {
                  const auto set = subset_of(members, mask);
                  if (is_core_structural(set, 2).verdict == Verdict::kNotCore) {
                    max_noncore = std::max<std::uint64_t>(max_noncore, set.size());
                  }
                }
                expect(2 * max_noncore <= 4 * members.size(),
                       "class " + d.to_string() + ": largest non-core subset " +
                           std::to_string(max_noncore) + " breaks the bound");
              }
              std::size_t trap_checks = 0;
              for (const auto& [n, q] : std::vector<std::pair<std::size_t, std::uint32_t>>{{2, 3},
                                                                                           {3, 2}}) {
                for (const auto& d : enumerate_classes(n, q)) {
                  for (const auto& [p, mult] : factorize(d.mu())) {
                    (void)mult;
                    const TrapReport trap = trap_set_analysis(d, p, kDefaultScanBudget);
                    expect(trap.bound_holds, "trap bound broken on " + d.to_string() + " factor " +
                                                 p.to_string());
                    ++trap_checks;
                  }
                }
              }
              return "all M_2(F_2) exhaustive maxima and " + std::to_string(trap_checks) +
                     " trap counts within bound";
            });

  criterion(5,
            "for factors of degree >= 2, the image-sum verdict is identical under every "
            "conjugate root, on 100 random subsets per class",
            0.0, [] {
              SplitMix64 rng(1205);
              std::size_t checks = 0;
              for (const auto& [n, q] : std::vector<std::pair<std::size_t, std::uint32_t>>{{2, 3},
                                                                                           {3, 2}}) {
                for (const auto& d : enumerate_classes(n, q)) {
                  for (const auto& [p, mult] : factorize(d.mu())) {
                    (void)mult;
                    const std::size_t s = static_cast<std::size_t>(p.degree());
                    if (s < 2) continue;
                    const auto members = class_members(d);
                    std::vector<EquivClassStats> per_root;
                    for (std::size_t i = 0; i < s; ++i) {
                      per_root.push_back(image_equivalence_partition(d, p, members, i));
                    }
                    for (int trial = 0; trial < 100; ++trial) {
                      std::vector<bool> included(members.size());
                      for (std::size_t m = 0; m < members.size(); ++m) included[m] = rng.bernoulli(0.5);
                      std::optional<bool> verdict;
                      for (const auto& stats : per_root) {
                        std::set<std::size_t> ids;
                        for (std::size_t m = 0; m < members.size(); ++m) {
                          if (included[m]) ids.insert(stats.member_bucket[m]);
                        }
                        const bool full = stats.s == 1
                                              ? buckets_cover(stats.bucket_spaces_base, ids)
                                              : buckets_cover(stats.bucket_spaces_ext, ids);
                        expect(!verdict || *verdict == full,
                               "root-dependent verdict on " + d.to_string() + " factor " +
                                   p.to_string());
                        verdict = full;
                      }
                      ++checks;
                    }
                  }
                }
              }
              return std::to_string(checks) + " subset verdicts, identical across all roots";
            });

  criterion(6,
            "expanding each image basis over the extension's power basis always yields a full-rank "
            "coordinate matrix (rank r*s), for every class of all three rings",
            0.0, [] {
              std::size_t images = 0;
              for (const auto& [n, q] : kRings) {
                for (const auto& d : enumerate_classes(n, q)) {
                  for (const auto& [p, mult] : factorize(d.mu())) {
                    (void)mult;
                    const IndependenceReport rep = verify_rs_independence(d, p);
                    expect(rep.all_full_rank, "rank below r*s on " + d.to_string() + " factor " +
                                                  p.to_string());
                    expect(rep.images_checked >= 1, "no images examined on " + d.to_string());
                    images += rep.images_checked;
                  }
                }
              }
              return std::to_string(images) + " distinct images, all full rank";
            });

  criterion(7,
            "exact prefix products at q=2 increase and stay below 4 (30-term value in "
            "[3.46, 3.47]), and exact binomial tails never exceed exp(-c^2 N / 4) on the grid",
            0.0, [] {
              const auto rows = constant_bound_prefixes(2, 50);
              for (std::size_t i = 0; i < rows.size(); ++i) {
                expect(rows[i].value < 4.0, "prefix product crossed 4 at term " +
                                                std::to_string(i + 1));
                if (i > 0) expect(rows[i].exact > rows[i - 1].exact, "prefix products not increasing");
              }
              expect(rows[29].value >= 3.46 && rows[29].value <= 3.47,
                     "30-term value " + std::to_string(rows[29].value) + " outside [3.46, 3.47]");
              std::size_t grid = 0;
              for (std::uint64_t n : {10ull, 50ull, 100ull, 500ull, 1000ull}) {
                for (int ci = 1; ci <= 9; ++ci) {
                  const ChernoffRow row = chernoff_tail_check(n, ci / 10.0);
                  expect(row.holds, "tail exceeds the bound at N=" + std::to_string(n) +
                                        " c=" + std::to_string(ci / 10.0));
                  ++grid;
                }
              }
              return "50 prefix terms and " + std::to_string(grid) + " tail checks, all within bound";
            });

  criterion(8,
            "Monte Carlo pure-core estimates at n=2, q in {2,3,5,7}, rho=1/2, 2000 trials, seed 42 "
            "are non-decreasing up to interval overlap, with q=7 significantly above q=2",
            300.0, [] {
              std::vector<MonteCarloRow> rows;
              for (std::uint32_t q : {2u, 3u, 5u, 7u}) {
                RandomSubsetModel model{2, q, 0.5, 42, 2000};
                rows.push_back(monte_carlo_pure_core(model));
              }
              for (std::size_t i = 1; i < rows.size(); ++i) {
                const bool non_decreasing = rows[i].p_hat >= rows[i - 1].p_hat;
                const bool overlap = rows[i].wilson_hi >= rows[i - 1].wilson_lo &&
                                     rows[i - 1].wilson_hi >= rows[i].wilson_lo;
                expect(non_decreasing || overlap,
                       "estimate dropped from q=" + std::to_string(rows[i - 1].q) + " to q=" +
                           std::to_string(rows[i].q) + " beyond interval overlap");
              }
              expect(rows.back().wilson_lo > rows.front().wilson_hi,
                     "intervals for q=7 and q=2 are not disjoint");
              std::string detail = "estimates";
              for (const auto& r : rows) {
                detail += " q=" + std::to_string(r.q) + ":" + std::to_string(r.p_hat).substr(0, 5);
              }
              return detail;
            });

  criterion(9,
            "every full similarity class of the three rings is core, and every singleton whose "
            "minimal polynomial has degree >= 2 is non-core with a verified annihilator",
            0.0, [] {
              std::size_t class_checks = 0, singleton_checks = 0;
              for (const auto& [n, q] : kRings) {
                for (const auto& d : enumerate_classes(n, q)) {
                  const auto members = class_members(d);
                  expect(is_core_structural(members, q).verdict == Verdict::kCore,
                         "full class " + d.to_string() + " is not core");
                  ++class_checks;
                  for (const auto& a : members) {
                    const CoreReport rep = is_core_oracle({a}, q);
                    const FpPoly m = minimal_polynomial(a);
                    if (m.degree() >= 2) {
                      expect(rep.verdict == Verdict::kNotCore,
                             "singleton with non-linear minimal polynomial reported core");
                      expect(rep.witness.has_value(), "non-core singleton lacks a witness");
                      expect(!rep.witness->is_zero() && rep.witness->degree() < rep.mu.degree() &&
                                 right_eval(*rep.witness, a).is_zero(),
                             "witness fails re-verification");
                    } else {
                      expect(rep.verdict == Verdict::kCore,
                             "singleton with linear minimal polynomial reported non-core");
                    }
                    ++singleton_checks;
                  }
                }
              }
              return std::to_string(class_checks) + " full classes and " +
                     std::to_string(singleton_checks) + " singletons verified";
            });

  if (g_failures > 0) {
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
