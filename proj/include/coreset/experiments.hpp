/**
 * Reproducible desk-scale experiments: Monte Carlo estimation of the
 * probability that a random matrix subset is core on every similarity-class
 * slice, exact binomial tail checks against the sub-Gaussian bound used in
 * the asymptotic analysis, exact prefix products of the field constant
 * prod_{i>=1} (1 - q^{-i})^{-1}, and hyperplane-bound sweeps over all
 * classes of a small matrix ring.
 *
 * All randomness is counter-based (seed, trial, position), so results are
 * bit-reproducible and independent of evaluation order; all number theory is
 * exact (arbitrary-precision integers and rationals).
 *
 * @copyright Apache License 2.0
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "coreset/classes.hpp"
#include "coreset/decide.hpp"
#include "coreset/rng.hpp"

namespace coreset {

using BigRat = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_100;

/// 95% Wilson score interval (z fixed at the two-sided 0.95 quantile).
struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

inline WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: no trials");
  if (successes > trials) throw std::invalid_argument("wilson_interval: successes exceed trials");
  constexpr double z = 1.959963984540054;
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (p + z2 / (2.0 * nt)) / denom;
  const double half = (z / denom) * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt));
  WilsonInterval w{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (successes == 0) w.lo = 0.0;          // exact endpoints, immune to rounding
  if (successes == trials) w.hi = 1.0;
  return w;
}

/// Parameters of the random-subset model: every matrix of M_n(F_q) is
/// included independently with probability rho.
struct RandomSubsetModel {
  std::size_t n = 2;
  std::uint32_t q = 2;
  double rho = 0.5;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
};

/// Precomputed classification of the full matrix ring: class of every matrix
/// index, and for every (class, irreducible factor) the bucket id of every
/// member plus the bucket image subspaces.  A pure-core trial then only has
/// to union bucket images and check dimensions, memoized per bucket subset.
class ClassTable {
 public:
  ClassTable(std::size_t n, std::uint32_t q, std::uint64_t budget = kDefaultScanBudget)
      : n_(n), q_(q), total_(scan_size_or_throw(q, n * n, budget, "ClassTable")) {
    std::vector<ClassDescriptor> descriptors = enumerate_classes(n, q);
    std::map<std::string, std::uint32_t> index_of;
    for (std::uint32_t c = 0; c < descriptors.size(); ++c) {
      index_of.emplace(descriptors[c].to_string(), c);
    }
    classes_.resize(descriptors.size());
    class_of_index_.resize(total_);
    member_pos_of_index_.resize(total_);
    std::vector<std::vector<Matrix<Fp>>> members(descriptors.size());
    for (std::uint64_t idx = 0; idx < total_; ++idx) {
      Matrix<Fp> m = matrix_from_index(idx, n, q);
      const std::uint32_t c = index_of.at(class_of(m).to_string());
      class_of_index_[idx] = c;
      member_pos_of_index_[idx] = static_cast<std::uint32_t>(members[c].size());
      members[c].push_back(std::move(m));
    }
    for (std::size_t c = 0; c < descriptors.size(); ++c) {
      classes_[c].desc = descriptors[c];
      for (const auto& [p, mult] : factorize(descriptors[c].mu())) {
        (void)mult;
        EquivClassStats stats = image_equivalence_partition(descriptors[c], p, members[c]);
        FactorData fd;
        fd.bucket_count = stats.class_count;
        fd.bucket_of_member = std::move(stats.member_bucket);
        fd.spaces_base = std::move(stats.bucket_spaces_base);
        fd.spaces_ext = std::move(stats.bucket_spaces_ext);
        classes_[c].factors.push_back(std::move(fd));
      }
    }
  }

  std::size_t n() const { return n_; }
  std::uint32_t q() const { return q_; }
  std::uint64_t total() const { return total_; }
  std::size_t class_count() const { return classes_.size(); }
  const ClassDescriptor& descriptor(std::size_t c) const { return classes_.at(c).desc; }

  /// One counter-based trial of the random-subset model: true when every
  /// nonempty class slice passes the image-sum test for all of its factors.
  bool pure_core_trial(std::uint64_t seed, std::uint64_t trial, double rho) {
    for (auto& cd : classes_) {
      for (auto& fd : cd.factors) fd.scratch_mask.assign((fd.bucket_count + 63) / 64, 0);
      cd.scratch_nonempty = false;
    }
    for (std::uint64_t idx = 0; idx < total_; ++idx) {
      if (!indexed_bernoulli(seed, trial, idx, rho)) continue;
      ClassData& cd = classes_[class_of_index_[idx]];
      cd.scratch_nonempty = true;
      const std::uint32_t pos = member_pos_of_index_[idx];
      for (auto& fd : cd.factors) {
        const std::size_t b = fd.bucket_of_member[pos];
        fd.scratch_mask[b / 64] |= 1ull << (b % 64);
      }
    }
    for (auto& cd : classes_) {
      if (!cd.scratch_nonempty) continue;
      for (auto& fd : cd.factors) {
        if (!images_cover(fd)) return false;
      }
    }
    return true;
  }

 private:
  struct FactorData {
    std::size_t bucket_count = 0;
    std::vector<std::size_t> bucket_of_member;
    std::vector<Subspace<Fp>> spaces_base;
    std::vector<Subspace<Ext>> spaces_ext;
    std::vector<std::uint64_t> scratch_mask;
    std::map<std::vector<std::uint64_t>, bool> memo;
  };
  struct ClassData {
    ClassDescriptor desc;
    std::vector<FactorData> factors;
    bool scratch_nonempty = false;
  };

  bool images_cover(FactorData& fd) {
    auto it = fd.memo.find(fd.scratch_mask);
    if (it != fd.memo.end()) return it->second;
    bool full = false;
    auto fold = [&](const auto& spaces) {
      std::optional<std::decay_t<decltype(spaces[0])>> sum;
      for (std::size_t b = 0; b < fd.bucket_count; ++b) {
        if (!(fd.scratch_mask[b / 64] & (1ull << (b % 64)))) continue;
        sum = sum ? subspace_sum(*sum, spaces[b]) : spaces[b];
        if (sum->is_full()) break;
      }
      full = sum && sum->is_full();
    };
    if (!fd.spaces_base.empty()) {
      fold(fd.spaces_base);
    } else {
      fold(fd.spaces_ext);
    }
    fd.memo.emplace(fd.scratch_mask, full);
    return full;
  }

  std::size_t n_;
  std::uint32_t q_;
  std::uint64_t total_;
  std::vector<ClassData> classes_;
  std::vector<std::uint32_t> class_of_index_;
  std::vector<std::uint32_t> member_pos_of_index_;
};

/// Result of one Monte Carlo run of the random-subset model.
struct MonteCarloRow {
  std::size_t n = 0;
  std::uint32_t q = 0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double p_hat = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 1.0;
};

inline MonteCarloRow monte_carlo_pure_core(const RandomSubsetModel& model, ClassTable& table) {
  if (model.trials == 0) throw std::invalid_argument("monte_carlo_pure_core: trials must be positive");
  if (!(model.rho > 0.0) || !(model.rho < 1.0)) {
    throw std::invalid_argument("monte_carlo_pure_core: rho must be in (0, 1)");
  }
  if (table.n() != model.n || table.q() != model.q) {
    throw std::invalid_argument("monte_carlo_pure_core: table does not match the model");
  }
  MonteCarloRow row;
  row.n = model.n;
  row.q = model.q;
  row.rho = model.rho;
  row.seed = model.seed;
  row.trials = model.trials;
  for (std::uint64_t t = 0; t < model.trials; ++t) {
    if (table.pure_core_trial(model.seed, t, model.rho)) ++row.successes;
  }
  row.p_hat = static_cast<double>(row.successes) / static_cast<double>(row.trials);
  WilsonInterval w = wilson_interval(row.successes, row.trials);
  row.wilson_lo = w.lo;
  row.wilson_hi = w.hi;
  return row;
}

inline MonteCarloRow monte_carlo_pure_core(const RandomSubsetModel& model,
                                           std::uint64_t budget = kDefaultScanBudget) {
  ClassTable table(model.n, model.q, budget);
  return monte_carlo_pure_core(model, table);
}

/// Exact probability that a rho-random subset of M_n(F_q) is core on every
/// class slice, by enumerating all subsets of each class (independence across
/// classes turns the probability into a product).  Feasible only while every
/// class satisfies 2^|C| <= subset_cap.
inline BigRat exact_pure_core_probability(std::size_t n, std::uint32_t q, const BigRat& rho,
                                          std::uint64_t subset_cap = 1ull << 16,
                                          std::uint64_t budget = kDefaultScanBudget) {
  if (rho <= 0 || rho >= 1) throw std::invalid_argument("exact_pure_core_probability: rho in (0,1)");
  BigRat product = 1;
  for (const auto& d : enumerate_classes(n, q)) {
    auto members = class_members(d, budget);
    if (members.size() >= 63 || (1ull << members.size()) > subset_cap) {
      throw BudgetError("exact_pure_core_probability: class too large for subset enumeration");
    }
    BigRat class_prob = 0;
    const std::uint64_t subsets = 1ull << members.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      std::vector<Matrix<Fp>> subset;
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (mask & (1ull << i)) subset.push_back(members[i]);
      }
      if (is_core_structural(subset, q).verdict == Verdict::kCore) {
        BigRat weight = 1;
        for (std::size_t i = 0; i < members.size(); ++i) {
          weight *= (mask & (1ull << i)) ? rho : 1 - rho;
        }
        class_prob += weight;
      }
    }
    product *= class_prob;
  }
  return product;
}

/// Exact lower-tail check: P(X <= floor((1-c) N / 2)) for X ~ Bin(N, 1/2)
/// against the sub-Gaussian bound exp(-c^2 N / 4).  The tail is an exact
/// rational; the comparison is done in 100-digit floats.
struct ChernoffRow {
  std::uint64_t draws = 0;       ///< N
  double c = 0.0;                ///< deviation fraction in (0, 1)
  std::uint64_t cutoff = 0;      ///< floor((1-c) N / 2)
  double exact_tail = 0.0;
  double bound = 0.0;
  bool holds = false;            ///< exact tail <= bound
};

inline ChernoffRow chernoff_tail_check(std::uint64_t draws, double c) {
  if (draws == 0) throw std::invalid_argument("chernoff_tail_check: need at least one draw");
  if (!(c > 0.0) || !(c < 1.0)) throw std::invalid_argument("chernoff_tail_check: c must be in (0, 1)");
  ChernoffRow row;
  row.draws = draws;
  row.c = c;
  // floor((1 - c) N / 2) computed exactly from the binary value of c
  const BigRat cr(c);
  const BigRat cut = (1 - cr) * draws / 2;
  row.cutoff = static_cast<std::uint64_t>(boost::multiprecision::numerator(cut) /
                                          boost::multiprecision::denominator(cut));
  BigInt mass = 0, binom = 1;
  for (std::uint64_t k = 0; k <= row.cutoff; ++k) {
    mass += binom;
    binom = binom * (draws - k) / (k + 1);
  }
  const BigFloat tail = BigFloat(mass) / BigFloat(BigInt(1) << static_cast<unsigned>(draws));
  const BigFloat bound =
      boost::multiprecision::exp(-BigFloat(c) * BigFloat(c) * BigFloat(draws) / 4);
  row.exact_tail = static_cast<double>(tail);
  row.bound = static_cast<double>(bound);
  row.holds = tail <= bound;
  return row;
}

/// Exact prefix products prod_{i=1}^{t} (1 - q^{-i})^{-1} for t = 1..max_terms.
struct ConstantBoundRow {
  std::size_t terms = 0;
  BigRat exact;
  double value = 0.0;
};

inline std::vector<ConstantBoundRow> constant_bound_prefixes(std::uint32_t q,
                                                             std::size_t max_terms) {
  if (q < 2) throw std::invalid_argument("constant_bound_prefixes: q must be at least 2");
  std::vector<ConstantBoundRow> rows;
  BigRat product = 1;
  BigInt qi = 1;
  for (std::size_t t = 1; t <= max_terms; ++t) {
    qi *= q;
    product *= BigRat(qi, qi - 1);  // (1 - q^{-t})^{-1} = q^t / (q^t - 1)
    rows.push_back({t, product, static_cast<double>(BigFloat(product))});
  }
  return rows;
}

/// Per-class bound sweep: hyperplane trap statistics for every irreducible
/// factor, the exhaustive maximum size of a non-core subset when 2^|C| is
/// small enough, and the integer bound check q * count <= 4 |C|.
struct BoundRow {
  ClassDescriptor desc;
  std::uint64_t size = 0;
  std::vector<TrapReport> traps;
  std::optional<std::uint64_t> exhaustive_max_noncore;
  bool bound_holds = true;
};

inline std::vector<BoundRow> bound_sweep(std::size_t n, std::uint32_t q,
                                         std::uint64_t exhaustive_cap = 1ull << 12,
                                         std::uint64_t budget = kDefaultScanBudget) {
  std::vector<BoundRow> rows;
  for (const auto& d : enumerate_classes(n, q)) {
    BoundRow row;
    row.desc = d;
    auto members = class_members(d, budget);
    row.size = members.size();
    for (const auto& [p, mult] : factorize(d.mu())) {
      (void)mult;
      TrapReport trap = trap_set_analysis(d, p, budget);
      row.bound_holds = row.bound_holds && trap.bound_holds;
      row.traps.push_back(std::move(trap));
    }
    if (members.size() < 63 && (1ull << members.size()) <= exhaustive_cap) {
      std::uint64_t best = 0;
      const std::uint64_t subsets = 1ull << members.size();
      for (std::uint64_t mask = 1; mask < subsets; ++mask) {
        std::vector<Matrix<Fp>> subset;
        for (std::size_t i = 0; i < members.size(); ++i) {
          if (mask & (1ull << i)) subset.push_back(members[i]);
        }
        if (is_core_structural(subset, q).verdict == Verdict::kNotCore) {
          best = std::max<std::uint64_t>(best, subset.size());
        }
      }
      row.exhaustive_max_noncore = best;
      row.bound_holds = row.bound_holds && q * best <= 4 * row.size;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace coreset
