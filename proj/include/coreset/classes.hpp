/**
 * Similarity classes of square matrices over a prime field.
 *
 * A class is identified by its invariant-factor chain f_1 | f_2 | ... | f_k
 * (monic, non-constant, ascending divisibility, degrees summing to n), the
 * diagonal of the Smith normal form of xI - A over F_q[x].  The last entry
 * is the minimal polynomial.  On top of the classification this header
 * provides representatives, exhaustive member scans, exact class sizes,
 * uniform in-class sampling, and the partition of a class by the image of
 * the cofactor evaluation A -> Im f_alpha(A) for an irreducible factor of
 * the minimal polynomial, together with the exact closed-form count of the
 * images that occur.
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

#include <boost/multiprecision/cpp_int.hpp>

#include "coreset/common.hpp"
#include "coreset/field.hpp"
#include "coreset/linalg.hpp"
#include "coreset/matpoly.hpp"
#include "coreset/rng.hpp"

namespace coreset {

using BigInt = boost::multiprecision::cpp_int;

/// A similarity class of n x n matrices over F_q, named by its
/// invariant-factor chain (ascending divisibility, last = minimal polynomial).
struct ClassDescriptor {
  std::size_t n = 0;
  std::uint32_t q = 0;
  std::vector<FpPoly> chain;

  const FpPoly& mu() const {
    if (chain.empty()) throw std::logic_error("ClassDescriptor: empty chain");
    return chain.back();
  }

  friend bool operator==(const ClassDescriptor& a, const ClassDescriptor& b) {
    return a.n == b.n && a.q == b.q && a.chain == b.chain;
  }
  friend bool operator!=(const ClassDescriptor& a, const ClassDescriptor& b) { return !(a == b); }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      if (i) out += " | ";
      out += chain[i].to_string("x");
    }
    return out;
  }
};

namespace detail {

/// Orders polynomials by degree, then by ascending-coefficient tuples.
inline bool poly_less(const FpPoly& a, const FpPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::ptrdiff_t i = 0; i <= a.degree(); ++i) {
    const std::uint64_t av = a.coeff(static_cast<std::size_t>(i)).value();
    const std::uint64_t bv = b.coeff(static_cast<std::size_t>(i)).value();
    if (av != bv) return av < bv;
  }
  return false;
}

/// Compares chains from the minimal polynomial downwards.
inline bool chain_less(const std::vector<FpPoly>& a, const std::vector<FpPoly>& b) {
  std::size_t i = a.size(), j = b.size();
  while (i > 0 && j > 0) {
    --i;
    --j;
    if (a[i] != b[j]) return poly_less(a[i], b[j]);
  }
  return a.size() < b.size();
}

}  // namespace detail

/// Invariant-factor chain of a: the non-constant diagonal entries of the
/// Smith normal form of xI - a over F_q[x], monic, in ascending divisibility
/// order.  Pivot selection is deterministic: lowest degree first, row-major
/// position as the tie break.
inline std::vector<FpPoly> invariant_factors(const Matrix<Fp>& a) {
  if (!a.is_square()) throw std::invalid_argument("invariant_factors: matrix must be square");
  const std::size_t n = a.rows();
  const Fp like = a.field_like();
  const FpPoly zero_poly;

  // m = xI - a
  std::vector<std::vector<FpPoly>> m(n, std::vector<FpPoly>(n, zero_poly));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Fp> cs{like.zero() - a.at(i, j)};
      if (i == j) cs.push_back(like.one());
      m[i][j] = FpPoly(cs);
    }
  }

  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      // deterministic pivot: lowest degree nonzero in the trailing block
      std::size_t pi = n, pj = n;
      std::ptrdiff_t best = -1;
      for (std::size_t i = t; i < n; ++i) {
        for (std::size_t j = t; j < n; ++j) {
          if (m[i][j].is_zero()) continue;
          if (best < 0 || m[i][j].degree() < best) {
            best = m[i][j].degree();
            pi = i;
            pj = j;
          }
        }
      }
      if (best < 0) {
        t = n;  // trailing block is identically zero
        break;
      }
      std::swap(m[pi], m[t]);
      for (std::size_t i = 0; i < n; ++i) std::swap(m[i][pj], m[i][t]);

      bool clean = true;
      for (std::size_t i = t + 1; i < n; ++i) {
        if (m[i][t].is_zero()) continue;
        auto [quot, rem] = divmod(m[i][t], m[t][t]);
        for (std::size_t j = t; j < n; ++j) m[i][j] = m[i][j] - quot * m[t][j];
        if (!rem.is_zero()) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (m[t][j].is_zero()) continue;
        auto [quot, rem] = divmod(m[t][j], m[t][t]);
        for (std::size_t i = t; i < n; ++i) m[i][j] = m[i][j] - m[i][t] * quot;
        if (!rem.is_zero()) clean = false;
      }
      if (!clean) continue;  // a lower-degree entry appeared; re-pivot

      // enforce divisibility of the trailing block by the pivot
      bool repaired = false;
      for (std::size_t i = t + 1; i < n && !repaired; ++i) {
        for (std::size_t j = t + 1; j < n && !repaired; ++j) {
          if (!(m[i][j] % m[t][t]).is_zero()) {
            for (std::size_t k = t; k < n; ++k) m[t][k] = m[t][k] + m[i][k];
            repaired = true;
          }
        }
      }
      if (!repaired) break;
    }
    if (t == n) break;
  }

  std::vector<FpPoly> chain;
  for (std::size_t t = 0; t < n; ++t) {
    if (m[t][t].degree() >= 1) chain.push_back(m[t][t].monic());
  }
  std::size_t total = 0;
  for (const auto& f : chain) total += static_cast<std::size_t>(f.degree());
  if (total != n) throw std::logic_error("invariant_factors: degrees do not sum to n");
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!divides(chain[i], chain[i + 1])) {
      throw std::logic_error("invariant_factors: chain is not a divisibility chain");
    }
  }
  return chain;
}

/// Descriptor of the similarity class containing a.
inline ClassDescriptor class_of(const Matrix<Fp>& a) {
  return ClassDescriptor{a.rows(), a.field_like().modulus(), invariant_factors(a)};
}

/// All monic divisors of f, sorted by degree then ascending-coefficient order.
inline std::vector<FpPoly> monic_divisors(const FpPoly& f) {
  if (f.degree() < 0) throw std::invalid_argument("monic_divisors: zero polynomial");
  std::vector<FpPoly> out{FpPoly::constant(f.leading().one())};
  if (f.degree() >= 1) {
    for (const auto& [p, mult] : factorize(f.monic())) {
      std::vector<FpPoly> next;
      for (const FpPoly& d : out) {
        FpPoly power = FpPoly::constant(f.leading().one());
        for (std::size_t e = 0; e <= mult; ++e) {
          next.push_back(d * power);
          power = power * p;
        }
      }
      out = std::move(next);
    }
  }
  std::sort(out.begin(), out.end(), detail::poly_less);
  return out;
}

/// All similarity classes of n x n matrices over F_q, in a deterministic
/// order (compared from the minimal polynomial downwards).
inline std::vector<ClassDescriptor> enumerate_classes(std::size_t n, std::uint32_t q) {
  if (n == 0) throw std::invalid_argument("enumerate_classes: n must be positive");
  const Fp like(0, q);
  std::vector<ClassDescriptor> out;
  // grow chains downwards from the minimal polynomial
  std::vector<FpPoly> chain_top_down;
  auto extend = [&](auto&& self, const FpPoly& prev, std::size_t remaining) -> void {
    if (remaining == 0) {
      std::vector<FpPoly> chain(chain_top_down.rbegin(), chain_top_down.rend());
      out.push_back(ClassDescriptor{n, q, std::move(chain)});
      return;
    }
    for (const FpPoly& d : monic_divisors(prev)) {
      if (d.degree() < 1 || static_cast<std::size_t>(d.degree()) > remaining) continue;
      chain_top_down.push_back(d);
      self(self, d, remaining - static_cast<std::size_t>(d.degree()));
      chain_top_down.pop_back();
    }
  };
  for (std::size_t d = 1; d <= n; ++d) {
    const std::uint64_t count = scan_size_or_throw(q, d, kDefaultScanBudget, "enumerate_classes");
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      FpPoly mu = monic_from_index(q, d, idx);
      chain_top_down = {mu};
      extend(extend, mu, n - d);
      chain_top_down.clear();
    }
  }
  std::sort(out.begin(), out.end(), [](const ClassDescriptor& a, const ClassDescriptor& b) {
    return detail::chain_less(a.chain, b.chain);
  });
  (void)like;
  return out;
}

/// Companion matrix of a monic polynomial f = x^d + c_{d-1} x^{d-1} + ... + c_0:
/// subdiagonal ones, last column -c_0, ..., -c_{d-1}.
inline Matrix<Fp> companion_matrix(const FpPoly& f) {
  if (f.degree() < 1 || !f.is_monic()) {
    throw std::invalid_argument("companion_matrix: need a monic polynomial of degree >= 1");
  }
  const std::size_t d = static_cast<std::size_t>(f.degree());
  const Fp like = f.leading().zero();
  Matrix<Fp> m(d, d, like);
  for (std::size_t j = 0; j + 1 < d; ++j) m.at(j + 1, j) = like.one();
  for (std::size_t i = 0; i < d; ++i) m.at(i, d - 1) = like.zero() - f.coeff(i);
  return m;
}

/// Canonical representative: block-diagonal sum of the companion matrices of
/// the chain entries, in ascending chain order.
inline Matrix<Fp> class_representative(const ClassDescriptor& desc) {
  Matrix<Fp> m(desc.n, desc.n, Fp(0, desc.q));
  std::size_t off = 0;
  for (const FpPoly& f : desc.chain) {
    Matrix<Fp> block = companion_matrix(f);
    for (std::size_t i = 0; i < block.rows(); ++i) {
      for (std::size_t j = 0; j < block.cols(); ++j) m.at(off + i, off + j) = block.at(i, j);
    }
    off += block.rows();
  }
  if (off != desc.n) throw std::invalid_argument("class_representative: chain degrees do not sum to n");
  return m;
}

/// Every member of the class, by exhaustive scan over all q^{n^2} matrices
/// (ascending matrix index).  Throws BudgetError if the scan exceeds budget.
inline std::vector<Matrix<Fp>> class_members(const ClassDescriptor& desc,
                                             std::uint64_t budget = kDefaultScanBudget) {
  const std::uint64_t total = scan_size_or_throw(desc.q, desc.n * desc.n, budget, "class_members");
  std::vector<Matrix<Fp>> out;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Matrix<Fp> m = matrix_from_index(idx, desc.n, desc.q);
    if (invariant_factors(m) == desc.chain) out.push_back(std::move(m));
  }
  if (out.empty()) throw std::invalid_argument("class_members: descriptor matches no matrix");
  return out;
}

/// |GL_n(F_q)| = prod_{i<n} (q^n - q^i).
inline BigInt general_linear_order(std::size_t n, std::uint32_t q) {
  BigInt qn = boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(n));
  BigInt out = 1, qi = 1;
  for (std::size_t i = 0; i < n; ++i) {
    out *= qn - qi;
    qi *= q;
  }
  return out;
}

/// Exact class size |GL_n(q)| / |centralizer|, with the centralizer counted
/// by enumerating the invertible elements of the commutant algebra of the
/// representative.
inline std::uint64_t class_size(const ClassDescriptor& desc,
                                std::uint64_t budget = kDefaultScanBudget) {
  const Matrix<Fp> r = class_representative(desc);
  const std::size_t n = desc.n;
  const Fp like(0, desc.q);
  // commutant: solutions X of XR - RX = 0, as an n^2 x n^2 linear system
  Matrix<Fp> sys(n * n, n * n, like);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      for (std::size_t l = 0; l < n; ++l) sys.at(row, i * n + l) += r.at(l, j);
      for (std::size_t k = 0; k < n; ++k) sys.at(row, k * n + j) -= r.at(i, k);
    }
  }
  Subspace<Fp> commutant = nullspace(sys);
  const std::uint64_t combos = scan_size_or_throw(desc.q, commutant.dim(), budget, "class_size");
  std::uint64_t invertible = 0;
  for (std::uint64_t idx = 0; idx < combos; ++idx) {
    auto digits = base_q_digits(idx, desc.q, commutant.dim());
    Matrix<Fp> x(n, n, like);
    for (std::size_t b = 0; b < commutant.dim(); ++b) {
      if (digits[b] == 0) continue;
      const Fp c(static_cast<std::int64_t>(digits[b]), desc.q);
      const auto& flat = commutant.basis()[b];
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) x.at(i, j) += c * flat[i * n + j];
      }
    }
    if (rank(x) == n) ++invertible;
  }
  if (invertible == 0) throw std::logic_error("class_size: empty centralizer");
  BigInt size = general_linear_order(n, desc.q);
  if (size % invertible != 0) throw std::logic_error("class_size: centralizer does not divide group order");
  size /= invertible;
  if (size > BigInt(~0ull)) throw std::overflow_error("class_size: does not fit in 64 bits");
  return static_cast<std::uint64_t>(size);
}

/// Uniform random member of the class: conjugate the representative by a
/// rejection-sampled invertible matrix (fibers are centralizer cosets, so the
/// result is uniform over the class).
inline Matrix<Fp> sample_class(const ClassDescriptor& desc, SplitMix64& rng) {
  const Matrix<Fp> r = class_representative(desc);
  const Fp like(0, desc.q);
  for (;;) {
    Matrix<Fp> p(desc.n, desc.n, like);
    for (std::size_t i = 0; i < desc.n; ++i) {
      for (std::size_t j = 0; j < desc.n; ++j) {
        p.at(i, j) = Fp(static_cast<std::int64_t>(rng.below(desc.q)), desc.q);
      }
    }
    if (rank(p) == desc.n) return p * r * invert(p);
  }
}

/// Partition of a class by the image Im_K f_alpha(A), where p is an
/// irreducible factor of the minimal polynomial, K = F_q[y]/(p) (the base
/// field when deg p = 1), alpha is the root of p in K selected by
/// root_index, and f_alpha = mu / (x - alpha) over K.
struct EquivClassStats {
  FpPoly factor;                  ///< the irreducible factor p
  std::size_t s = 0;              ///< deg p
  std::size_t r = 0;              ///< common K-dimension of the images
  std::uint64_t class_count = 0;  ///< number of distinct images (buckets)
  std::uint64_t each_size = 0;    ///< common bucket size
  std::map<std::vector<std::uint64_t>, std::uint64_t> bucket_counts;  ///< image key -> size
  std::vector<Subspace<Fp>> bucket_spaces_base;  ///< bucket id -> image, when s == 1
  std::vector<Subspace<Ext>> bucket_spaces_ext;  ///< bucket id -> image, when s >= 2
  std::vector<std::size_t> member_bucket;        ///< bucket id per member, in class_members order
  ExtFieldPtr ext;                               ///< the extension field, when s >= 2
};

inline EquivClassStats image_equivalence_partition(const ClassDescriptor& desc, const FpPoly& p,
                                                   const std::vector<Matrix<Fp>>& members,
                                                   std::size_t root_index = 0) {
  if (!is_irreducible(p) || !p.is_monic()) {
    throw std::invalid_argument("image_equivalence_partition: factor must be monic irreducible");
  }
  if (!divides(p, desc.mu())) {
    throw std::invalid_argument("image_equivalence_partition: factor does not divide the minimal polynomial");
  }
  if (members.empty()) throw std::invalid_argument("image_equivalence_partition: empty member list");
  EquivClassStats stats;
  stats.factor = p;
  stats.s = static_cast<std::size_t>(p.degree());

  std::map<std::vector<std::uint64_t>, std::size_t> bucket_ids;
  auto record = [&](std::size_t dim, std::vector<std::uint64_t> key, auto&& store_space) {
    if (stats.member_bucket.empty()) {
      stats.r = dim;
    } else if (dim != stats.r) {
      throw std::logic_error("image_equivalence_partition: image dimension varies inside a class");
    }
    auto [it, inserted] = bucket_ids.emplace(std::move(key), bucket_ids.size());
    if (inserted) store_space();
    ++stats.bucket_counts[it->first];
    stats.member_bucket.push_back(it->second);
  };

  if (stats.s == 1) {
    if (root_index != 0) throw std::invalid_argument("image_equivalence_partition: linear factor has one root");
    const FpPoly cofactor = desc.mu() / p;
    for (const Matrix<Fp>& m : members) {
      Subspace<Fp> image = column_space(eval_at(cofactor, m));
      record(image.dim(), image.key(), [&] { stats.bucket_spaces_base.push_back(image); });
    }
  } else {
    stats.ext = build_extension(desc.q, p);
    const Ext alpha = stats.ext->root(root_index);
    Poly<Ext> mu_k = embed(desc.mu(), stats.ext);
    Poly<Ext> linear(std::vector<Ext>{stats.ext->zero() - alpha, stats.ext->one()});
    auto [cofactor, rem] = divmod(mu_k, linear);
    if (!rem.is_zero()) throw std::logic_error("image_equivalence_partition: selected root is not a root");
    for (const Matrix<Fp>& m : members) {
      Subspace<Ext> image = column_space(eval_at(cofactor, embed(m, stats.ext)));
      record(image.dim(), image.key(), [&] { stats.bucket_spaces_ext.push_back(image); });
    }
  }

  stats.class_count = stats.bucket_counts.size();
  stats.each_size = members.size() / stats.class_count;
  for (const auto& [key, count] : stats.bucket_counts) {
    (void)key;
    if (count != stats.each_size) {
      throw std::logic_error("image_equivalence_partition: buckets are not equally sized");
    }
  }
  return stats;
}

/// Convenience overload that scans the class members itself.
inline EquivClassStats image_equivalence_partition(const ClassDescriptor& desc, const FpPoly& p,
                                                   std::uint64_t budget = kDefaultScanBudget,
                                                   std::size_t root_index = 0) {
  return image_equivalence_partition(desc, p, class_members(desc, budget), root_index);
}

/// Exact number of distinct images for a class whose partition has
/// parameters (r, s):  prod_{i=1}^{rs} (q^n - q^{i-1}) / prod_{i=1}^{r}
/// (q^{rs} - q^{(i-1)s}).  Requires 1 <= r and r*s <= n; no class realizes
/// parameters outside that range.
inline BigInt image_count_formula(std::size_t n, std::uint32_t q, std::size_t r, std::size_t s) {
  if (r == 0 || s == 0) throw std::invalid_argument("image_count_formula: r and s must be positive");
  if (r * s > n) throw std::domain_error("image_count_formula: requires r*s <= n");
  const BigInt bq(q);
  BigInt numerator = 1, denominator = 1;
  const BigInt qn = boost::multiprecision::pow(bq, static_cast<unsigned>(n));
  const BigInt qrs = boost::multiprecision::pow(bq, static_cast<unsigned>(r * s));
  for (std::size_t i = 1; i <= r * s; ++i) {
    numerator *= qn - boost::multiprecision::pow(bq, static_cast<unsigned>(i - 1));
  }
  for (std::size_t i = 1; i <= r; ++i) {
    denominator *= qrs - boost::multiprecision::pow(bq, static_cast<unsigned>((i - 1) * s));
  }
  if (numerator % denominator != 0) throw std::logic_error("image_count_formula: non-integral value");
  return numerator / denominator;
}

/// Finds a class member whose image subspace (for the linear factor x - root)
/// equals `target`, by conjugating the representative with a basis-exchange
/// matrix.  The target must have the dimension common to the class's images.
inline Matrix<Fp> realize_image(const ClassDescriptor& desc, const Fp& root,
                                const Subspace<Fp>& target) {
  std::vector<Fp> pc{Fp(0, desc.q) - root, Fp(1, desc.q)};
  const FpPoly p(pc);
  if (!divides(p, desc.mu())) throw std::invalid_argument("realize_image: root is not an eigenvalue");
  const FpPoly cofactor = desc.mu() / p;
  const Matrix<Fp> rep = class_representative(desc);
  const Subspace<Fp> rep_image = column_space(eval_at(cofactor, rep));
  if (target.ambient() != desc.n || target.dim() != rep_image.dim()) {
    throw std::invalid_argument("realize_image: target has the wrong dimension");
  }
  const Fp like(0, desc.q);

  auto complete_basis = [&](const Subspace<Fp>& s) {
    std::vector<std::vector<Fp>> rows = s.basis();
    Subspace<Fp> span = s;
    for (std::size_t i = 0; i < desc.n && rows.size() < desc.n; ++i) {
      std::vector<Fp> e(desc.n, like.zero());
      e[i] = like.one();
      if (!span.contains(e)) {
        rows.push_back(e);
        std::vector<std::vector<Fp>> gens = rows;
        span = Subspace<Fp>::span(desc.n, gens, like);
      }
    }
    return rows;  // columns of the change-of-basis matrix
  };

  auto to_columns = [&](const std::vector<std::vector<Fp>>& rows) {
    Matrix<Fp> m(desc.n, desc.n, like);
    for (std::size_t j = 0; j < desc.n; ++j) {
      for (std::size_t i = 0; i < desc.n; ++i) m.at(i, j) = rows[j][i];
    }
    return m;
  };

  Matrix<Fp> from = to_columns(complete_basis(rep_image));
  Matrix<Fp> to = to_columns(complete_basis(target));
  Matrix<Fp> qmat = to * invert(from);
  Matrix<Fp> out = qmat * rep * invert(qmat);
  if (column_space(eval_at(cofactor, out)) != target) {
    throw std::logic_error("realize_image: construction failed to hit the target");
  }
  return out;
}

/// Checks that for every member of the class, stacking the base-field
/// coordinate rows of the K-basis of Im f_alpha(A) (s rows per basis vector)
/// yields r*s linearly independent vectors in F^n.
struct IndependenceReport {
  std::size_t images_checked = 0;  ///< distinct images examined (covers every member)
  std::size_t r = 0;
  std::size_t s = 0;
  bool all_full_rank = true;
};

inline IndependenceReport verify_rs_independence(const ClassDescriptor& desc, const FpPoly& p,
                                                 std::uint64_t budget = kDefaultScanBudget) {
  EquivClassStats stats = image_equivalence_partition(desc, p, budget);
  IndependenceReport rep;
  rep.r = stats.r;
  rep.s = stats.s;
  const Fp like(0, desc.q);
  auto check_rows = [&](const std::vector<std::vector<Fp>>& rows) {
    if (rows.empty()) return stats.r == 0;
    Matrix<Fp> m = Matrix<Fp>::from_rows(rows);
    return rank(m) == stats.r * stats.s;
  };
  if (stats.s == 1) {
    for (const auto& space : stats.bucket_spaces_base) {
      ++rep.images_checked;
      if (!check_rows(space.basis())) rep.all_full_rank = false;
    }
  } else {
    for (const auto& space : stats.bucket_spaces_ext) {
      ++rep.images_checked;
      std::vector<std::vector<Fp>> rows;
      for (const auto& kr : space.basis()) {
        for (std::size_t j = 0; j < stats.s; ++j) {
          std::vector<Fp> row(desc.n, like.zero());
          for (std::size_t l = 0; l < desc.n; ++l) row[l] = kr[l].coord(j);
          rows.push_back(std::move(row));
        }
      }
      if (!check_rows(rows)) rep.all_full_rank = false;
    }
  }
  return rep;
}

}  // namespace coreset
