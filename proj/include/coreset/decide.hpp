/**
 * Core-set decision procedures.
 *
 * A finite set S of n x n matrices over F_q is a core set when its null
 * ideal N(S) = {f in M_n(F_q)[x] : f(A) = 0 for all A in S, right
 * evaluation} is two-sided.  Equivalently, S fails to be core exactly when
 * some nonzero matrix polynomial of degree below deg mu_S annihilates S,
 * where mu_S is the monic lcm of the members' minimal polynomials.  Three
 * deciders are provided:
 *
 *  - oracle: one stacked nullspace computation over all annihilator
 *    coefficients of degree < deg mu_S (definitional, no theory),
 *  - factorwise: for each irreducible factor p of mu_S, intersect the
 *    cofactor annihilator spaces B(A, m_A/p) over the members with maximal
 *    p-multiplicity,
 *  - structural: for subsets of a single similarity class, check that the
 *    images Im_K f_alpha(A) of the members sum to K^n for every irreducible
 *    factor (K the splitting field of the factor, f_alpha = mu/(x - alpha)).
 *
 * Every non-core verdict carries an explicit low-degree annihilator which is
 * re-verified against all members before the report is returned.
 *
 * @copyright Apache License 2.0
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coreset/classes.hpp"
#include "coreset/field.hpp"
#include "coreset/linalg.hpp"
#include "coreset/matpoly.hpp"

namespace coreset {

enum class Verdict { kCore, kNotCore };
enum class Method { kOracle, kFactorwise, kStructural };

inline std::string to_string(Verdict v) { return v == Verdict::kCore ? "core" : "not-core"; }
inline std::string to_string(Method m) {
  switch (m) {
    case Method::kOracle: return "oracle";
    case Method::kFactorwise: return "factorwise";
    default: return "structural";
  }
}

/// Per-irreducible-factor diagnostics accompanying a verdict.
struct FactorReport {
  FpPoly p;                     ///< monic irreducible factor of mu_S
  std::size_t multiplicity = 0; ///< multiplicity of p in mu_S
  std::size_t sp_size = 0;      ///< members with maximal p-multiplicity (all, for one class)
  std::optional<std::size_t> b_intersection_dim;  ///< factorwise: dim of the B-space intersection
  std::optional<std::size_t> image_sum_dim;       ///< structural: K-dim of the image sum
  bool passed = true;
};

struct CoreReport {
  Verdict verdict = Verdict::kCore;
  Method method = Method::kOracle;
  FpPoly mu;                               ///< lcm of member minimal polynomials (1 for the empty set)
  std::optional<MatrixPoly<Fp>> witness;   ///< on non-core: nonzero annihilator, deg < deg mu
  std::vector<FactorReport> factors;
};

namespace detail {

/// Throws unless `witness` is a nonzero annihilator of every member with
/// degree strictly below deg mu.  All non-core reports pass through here.
inline void verify_witness(const std::vector<Matrix<Fp>>& set, const MatrixPoly<Fp>& witness,
                           const FpPoly& mu) {
  if (witness.is_zero()) throw std::logic_error("witness verification: witness is zero");
  if (witness.degree() >= mu.degree()) {
    throw std::logic_error("witness verification: degree is not below deg mu");
  }
  for (const auto& a : set) {
    if (!right_eval(witness, a).is_zero()) {
      throw std::logic_error("witness verification: does not annihilate a member");
    }
  }
}

inline CoreReport empty_set_report(Method method, std::uint32_t q) {
  CoreReport rep;
  rep.verdict = Verdict::kCore;
  rep.method = method;
  rep.mu = FpPoly::constant(Fp(1, q));
  return rep;
}

inline std::uint32_t common_modulus(const std::vector<Matrix<Fp>>& set) {
  const std::uint32_t q = set.at(0).field_like().modulus();
  const std::size_t n = set[0].rows();
  for (const auto& a : set) {
    if (a.field_like().modulus() != q || a.rows() != n || a.cols() != n) {
      throw std::invalid_argument("core decision: members must share size and field");
    }
  }
  return q;
}

}  // namespace detail

/// Definitional decider: S is core iff no nonzero matrix polynomial of
/// degree < deg mu_S annihilates every member.
inline CoreReport is_core_oracle(const std::vector<Matrix<Fp>>& set, std::uint32_t q_if_empty = 2) {
  if (set.empty()) return detail::empty_set_report(Method::kOracle, q_if_empty);
  detail::common_modulus(set);
  NullIdealProbe<Fp> probe = null_ideal_low_degree(set);
  CoreReport rep;
  rep.method = Method::kOracle;
  rep.mu = probe.mu;
  if (probe.space.is_zero()) {
    rep.verdict = Verdict::kCore;
    return rep;
  }
  rep.verdict = Verdict::kNotCore;
  MatrixPoly<Fp> witness = unstack_matrix_poly(probe.space.basis().front(), probe.n);
  detail::verify_witness(set, witness, rep.mu);
  rep.witness = std::move(witness);
  return rep;
}

/// Factorwise decider: S is core iff for every irreducible factor p of mu_S
/// (multiplicity c), the spaces B(A, m_A/p) over the members with p^c | m_A
/// intersect trivially.
inline CoreReport is_core_factorwise(const std::vector<Matrix<Fp>>& set,
                                     std::uint32_t q_if_empty = 2) {
  if (set.empty()) return detail::empty_set_report(Method::kFactorwise, q_if_empty);
  detail::common_modulus(set);
  const std::size_t n = set[0].rows();

  std::vector<FpPoly> min_polys;
  min_polys.reserve(set.size());
  for (const auto& a : set) min_polys.push_back(minimal_polynomial(a));
  FpPoly mu = min_polys[0];
  for (std::size_t i = 1; i < min_polys.size(); ++i) mu = poly_lcm(mu, min_polys[i]);

  CoreReport rep;
  rep.method = Method::kFactorwise;
  rep.mu = mu;
  rep.verdict = Verdict::kCore;

  for (const auto& [p, mult] : factorize(mu)) {
    FpPoly pc = FpPoly::constant(p.leading().one());
    for (std::size_t e = 0; e < mult; ++e) pc = pc * p;

    std::vector<Subspace<Fp>> spaces;
    std::size_t sp_size = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (!divides(pc, min_polys[i])) continue;
      ++sp_size;
      spaces.push_back(b_space(set[i], min_polys[i] / p).space);
    }
    if (spaces.empty()) throw std::logic_error("is_core_factorwise: factor with empty member slice");

    Subspace<Fp> meet = subspace_intersection(spaces);
    FactorReport fr;
    fr.p = p;
    fr.multiplicity = mult;
    fr.sp_size = sp_size;
    fr.b_intersection_dim = meet.dim();
    fr.passed = meet.is_zero();
    rep.factors.push_back(fr);

    if (!meet.is_zero() && rep.verdict == Verdict::kCore) {
      rep.verdict = Verdict::kNotCore;
      MatrixPoly<Fp> f = unstack_matrix_poly(meet.basis().front(), n);
      MatrixPoly<Fp> witness = scalar_right_multiply(f, mu / p);
      detail::verify_witness(set, witness, mu);
      rep.witness = std::move(witness);
    }
  }
  return rep;
}

/// Image-sum test for a linear factor x - root of mu over the base field.
/// Returns the report entry; both the primal route (images of the cofactor
/// evaluations sum to F^n) and the dual route (the row-space forms of the
/// members' cofactor annihilator spaces intersect trivially) are computed
/// and must agree.
inline FactorReport linear_factor_test(const std::vector<Matrix<Fp>>& set, const Fp& root,
                                       const FpPoly& mu, std::size_t multiplicity) {
  const std::size_t n = set.at(0).rows();
  std::vector<Fp> pc{root.zero() - root, root.one()};
  const FpPoly cofactor = mu / FpPoly(pc);

  std::vector<Subspace<Fp>> images, duals;
  for (const auto& a : set) {
    images.push_back(column_space(eval_at(cofactor, a)));
    duals.push_back(b_space_row_space(a, root));
  }
  Subspace<Fp> sum = subspace_sum(images);
  Subspace<Fp> meet = subspace_intersection(duals);
  if (sum.is_full() != meet.is_zero() || orthocomplement(sum) != meet) {
    throw std::logic_error("linear_factor_test: primal and dual routes disagree");
  }

  FactorReport fr;
  fr.p = FpPoly(pc);
  fr.multiplicity = multiplicity;
  fr.sp_size = set.size();
  fr.image_sum_dim = sum.dim();
  fr.passed = sum.is_full();
  (void)n;
  return fr;
}

/// Image-sum test for an irreducible factor p of degree >= 2.  The test is
/// run once per root of p in K = F_q[y]/(p); the verdicts must coincide.
inline FactorReport higher_factor_test(const std::vector<Matrix<Fp>>& set, const FpPoly& p,
                                       const FpPoly& mu, std::size_t multiplicity) {
  const std::size_t n = set.at(0).rows();
  ExtFieldPtr k = build_extension(p.leading().modulus(), p);
  Poly<Ext> mu_k = embed(mu, k);

  std::optional<bool> verdict;
  std::size_t sum_dim = 0;
  for (std::size_t ri = 0; ri < k->degree(); ++ri) {
    const Ext alpha = k->root(ri);
    Poly<Ext> linear(std::vector<Ext>{k->zero() - alpha, k->one()});
    auto [cofactor, rem] = divmod(mu_k, linear);
    if (!rem.is_zero()) throw std::logic_error("higher_factor_test: root does not divide mu");
    std::vector<Subspace<Ext>> images;
    for (const auto& a : set) images.push_back(column_space(eval_at(cofactor, embed(a, k))));
    Subspace<Ext> sum = subspace_sum(images);
    const bool full = sum.is_full();
    if (!verdict) {
      verdict = full;
      sum_dim = sum.dim();
    } else if (*verdict != full) {
      throw std::logic_error("higher_factor_test: verdict differs between conjugate roots");
    }
  }

  FactorReport fr;
  fr.p = p;
  fr.multiplicity = multiplicity;
  fr.sp_size = set.size();
  fr.image_sum_dim = sum_dim;
  fr.passed = *verdict;
  (void)n;
  return fr;
}

namespace detail {

/// Witness for a failing linear factor: H f_a where H's first row is
/// orthogonal to every member image.
inline MatrixPoly<Fp> linear_factor_witness(const std::vector<Matrix<Fp>>& set, const Fp& root,
                                            const FpPoly& mu) {
  const std::size_t n = set.at(0).rows();
  std::vector<Fp> pc{root.zero() - root, root.one()};
  const FpPoly cofactor = mu / FpPoly(pc);
  std::vector<Subspace<Fp>> images;
  for (const auto& a : set) images.push_back(column_space(eval_at(cofactor, a)));
  Subspace<Fp> comp = orthocomplement(subspace_sum(images));
  if (comp.is_zero()) throw std::logic_error("linear_factor_witness: factor did not fail");
  Matrix<Fp> h(n, n, root.zero());
  for (std::size_t j = 0; j < n; ++j) h.at(0, j) = comp.basis().front()[j];
  return scalar_right_multiply(MatrixPoly<Fp>::constant(h), cofactor);
}

/// Witness for a failing factor of degree >= 2: expand H f_alpha over a
/// power basis of K and take the first nonzero base-field component.
inline MatrixPoly<Fp> higher_factor_witness(const std::vector<Matrix<Fp>>& set, const FpPoly& p,
                                            const FpPoly& mu) {
  const std::size_t n = set.at(0).rows();
  ExtFieldPtr k = build_extension(p.leading().modulus(), p);
  const Ext alpha = k->alpha();
  Poly<Ext> linear(std::vector<Ext>{k->zero() - alpha, k->one()});
  auto [cofactor, rem] = divmod(embed(mu, k), linear);
  if (!rem.is_zero()) throw std::logic_error("higher_factor_witness: root does not divide mu");

  std::vector<Subspace<Ext>> images;
  for (const auto& a : set) images.push_back(column_space(eval_at(cofactor, embed(a, k))));
  Subspace<Ext> comp = orthocomplement(subspace_sum(images));
  if (comp.is_zero()) throw std::logic_error("higher_factor_witness: factor did not fail");

  Matrix<Ext> h(n, n, k->zero());
  for (std::size_t j = 0; j < n; ++j) h.at(0, j) = comp.basis().front()[j];
  // g = H * cofactor as a matrix polynomial over K
  std::vector<Matrix<Ext>> gcoeffs;
  for (std::ptrdiff_t d = 0; d <= cofactor.degree(); ++d) {
    gcoeffs.push_back(cofactor.coeff(static_cast<std::size_t>(d)) * h);
  }
  // split g into base-field components along the power basis of K
  const std::size_t s = k->degree();
  for (std::size_t comp_idx = 0; comp_idx < s; ++comp_idx) {
    std::vector<Matrix<Fp>> coeffs;
    bool nonzero = false;
    for (const auto& gm : gcoeffs) {
      Matrix<Fp> c(n, n, Fp(0, p.leading().modulus()));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) c.at(i, j) = gm.at(i, j).coord(comp_idx);
      }
      if (!c.is_zero()) nonzero = true;
      coeffs.push_back(std::move(c));
    }
    if (nonzero) return MatrixPoly<Fp>(coeffs);
  }
  throw std::logic_error("higher_factor_witness: all components vanished");
}

}  // namespace detail

/// Structural decider for subsets of a single similarity class: S is core
/// iff the image-sum test passes for every irreducible factor of the common
/// minimal polynomial.  Throws std::invalid_argument on mixed-class input.
inline CoreReport is_core_structural(const std::vector<Matrix<Fp>>& set,
                                     std::uint32_t q_if_empty = 2) {
  if (set.empty()) return detail::empty_set_report(Method::kStructural, q_if_empty);
  detail::common_modulus(set);
  const std::vector<FpPoly> chain = invariant_factors(set[0]);
  for (const auto& a : set) {
    if (invariant_factors(a) != chain) {
      throw std::invalid_argument("is_core_structural: members are not all similar");
    }
  }
  const FpPoly mu = chain.back();

  CoreReport rep;
  rep.method = Method::kStructural;
  rep.mu = mu;
  rep.verdict = Verdict::kCore;

  for (const auto& [p, mult] : factorize(mu)) {
    FactorReport fr = p.degree() == 1
                          ? linear_factor_test(set, Fp(0, p.leading().modulus()) - p.coeff(0), mu, mult)
                          : higher_factor_test(set, p, mu, mult);
    rep.factors.push_back(fr);
    if (!fr.passed && rep.verdict == Verdict::kCore) {
      rep.verdict = Verdict::kNotCore;
      MatrixPoly<Fp> witness =
          p.degree() == 1
              ? detail::linear_factor_witness(set, Fp(0, p.leading().modulus()) - p.coeff(0), mu)
              : detail::higher_factor_witness(set, p, mu);
      detail::verify_witness(set, witness, mu);
      rep.witness = std::move(witness);
    }
  }
  return rep;
}

/// Slice-by-class analysis: each nonempty similarity-class slice of S is
/// tested on its own.  `all_core` holds iff every slice is a core set.
struct PureCoreReport {
  bool all_core = true;
  std::vector<std::pair<ClassDescriptor, CoreReport>> slices;
};

inline PureCoreReport is_pure_core(const std::vector<Matrix<Fp>>& set) {
  PureCoreReport out;
  if (set.empty()) return out;
  detail::common_modulus(set);
  std::map<std::string, std::pair<ClassDescriptor, std::vector<Matrix<Fp>>>> slices;
  for (const auto& a : set) {
    ClassDescriptor d = class_of(a);
    auto& slot = slices[d.to_string()];
    slot.first = d;
    slot.second.push_back(a);
  }
  for (auto& [name, slot] : slices) {
    (void)name;
    CoreReport rep = is_core_structural(slot.second);
    if (rep.verdict != Verdict::kCore) out.all_core = false;
    out.slices.emplace_back(std::move(slot.first), std::move(rep));
  }
  return out;
}

/// Hyperplane trapping statistics for one class and one irreducible factor:
/// how many members have their image inside a fixed hyperplane, and the
/// maximum of that count over all hyperplanes of K^n.  The classical bound
/// states q * max_count <= 4 * class size whenever deg mu >= 2.
struct TrapReport {
  FpPoly factor;
  std::size_t s = 0;
  std::uint64_t class_size = 0;
  std::uint64_t coordinate_count = 0;  ///< members trapped by {v : v_1 = 0}
  std::uint64_t max_count = 0;         ///< max over all hyperplanes
  bool applicable = false;             ///< deg mu >= 2
  bool bound_holds = true;             ///< q * max_count <= 4 * class_size
};

inline TrapReport trap_set_analysis(const ClassDescriptor& desc, const FpPoly& p,
                                    std::uint64_t budget = kDefaultScanBudget) {
  EquivClassStats stats = image_equivalence_partition(desc, p, budget);
  TrapReport rep;
  rep.factor = p;
  rep.s = stats.s;
  rep.class_size = stats.class_count * stats.each_size;
  rep.applicable = desc.mu().degree() >= 2;

  auto tally = [&](const auto& spaces, const auto& like) {
    using Scalar = std::decay_t<decltype(like)>;
    auto trapped_by = [&](const Subspace<Scalar>& h) {
      std::uint64_t count = 0;
      for (const auto& space : spaces) {
        if (h.contains(space)) count += stats.bucket_counts.at(space.key());
      }
      return count;
    };
    std::vector<Scalar> e1(desc.n, like.zero());
    e1[0] = like.one();
    rep.coordinate_count =
        trapped_by(orthocomplement(Subspace<Scalar>::span(desc.n, {e1}, like)));
    rep.max_count = 0;
    for (const auto& h : all_hyperplanes(desc.n, like)) {
      rep.max_count = std::max(rep.max_count, trapped_by(h));
    }
  };

  if (stats.s == 1) {
    tally(stats.bucket_spaces_base, Fp(0, desc.q));
  } else {
    tally(stats.bucket_spaces_ext, stats.ext->zero());
  }
  rep.bound_holds = desc.q * rep.max_count <= 4 * rep.class_size;
  return rep;
}

}  // namespace coreset
