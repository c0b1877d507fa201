/**
 * @file coreset/matpoly.hpp
 * @brief Polynomials with matrix coefficients under the right evaluation rule
 *        f(A) = sum_k B_k A^k (coefficients stay left of the powers), minimal
 *        polynomials, low-degree annihilator spaces of matrix sets, and the
 *        finite annihilator spaces B(A, g).
 * @copyright Apache License 2.0
 */
#ifndef CORESET_MATPOLY_HPP
#define CORESET_MATPOLY_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coreset/field.hpp"
#include "coreset/linalg.hpp"

namespace coreset {

/// Polynomial with n x n matrix coefficients, ascending degree; the zero
/// polynomial has an empty coefficient list.
template <class K>
class MatrixPoly {
 public:
  MatrixPoly() = default;
  explicit MatrixPoly(std::vector<Matrix<K>> coeffs) : c_(std::move(coeffs)) {
    for (const auto& m : c_) {
      if (!m.is_square() || m.rows() != c_.front().rows()) {
        throw std::invalid_argument("MatrixPoly: coefficients must be square of one size");
      }
    }
    trim();
  }

  static MatrixPoly constant(const Matrix<K>& m) {
    return m.is_zero() ? MatrixPoly{} : MatrixPoly{std::vector<Matrix<K>>{m}};
  }
  /// Lift a scalar polynomial to matrix coefficients g_k * I.
  static MatrixPoly from_scalar(const Poly<K>& g, std::size_t n) {
    if (g.is_zero()) return MatrixPoly{};
    std::vector<Matrix<K>> out;
    out.reserve(g.coeffs().size());
    for (const K& k : g.coeffs()) out.push_back(k * Matrix<K>::identity(n, k));
    return MatrixPoly{std::move(out)};
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Matrix<K>>& coeffs() const { return c_; }
  const Matrix<K>& operator[](std::size_t i) const { return c_.at(i); }
  std::size_t n() const {
    if (c_.empty()) throw std::logic_error("MatrixPoly: n() on the zero polynomial");
    return c_.front().rows();
  }

  friend MatrixPoly operator+(const MatrixPoly& a, const MatrixPoly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    std::vector<Matrix<K>> out;
    const std::size_t sz = std::max(a.c_.size(), b.c_.size());
    for (std::size_t i = 0; i < sz; ++i) {
      if (i < a.c_.size() && i < b.c_.size()) {
        out.push_back(a.c_[i] + b.c_[i]);
      } else {
        out.push_back(i < a.c_.size() ? a.c_[i] : b.c_[i]);
      }
    }
    return MatrixPoly{std::move(out)};
  }
  MatrixPoly operator-() const {
    std::vector<Matrix<K>> out;
    out.reserve(c_.size());
    for (const auto& m : c_) out.push_back(-m);
    return MatrixPoly{std::move(out)};
  }
  friend MatrixPoly operator-(const MatrixPoly& a, const MatrixPoly& b) { return a + (-b); }

  friend bool operator==(const MatrixPoly& a, const MatrixPoly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (!(a.c_[i] == b.c_[i])) return false;
    }
    return true;
  }
  friend bool operator!=(const MatrixPoly& a, const MatrixPoly& b) { return !(a == b); }

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (!s.empty()) s += " + ";
      s += c_[i].to_string();
      if (i >= 1) s += "*x" + (i > 1 ? "^" + std::to_string(i) : std::string());
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Matrix<K>> c_;
};

/// Right evaluation f(A) = sum_k B_k A^k via a Horner scheme that keeps the
/// coefficients on the left: ((B_d A + B_{d-1}) A + ...) A + B_0.
template <class K>
Matrix<K> right_eval(const MatrixPoly<K>& f, const Matrix<K>& a) {
  if (!a.is_square()) throw std::invalid_argument("right_eval: argument must be square");
  if (f.is_zero()) return Matrix<K>::zero(a.rows(), a.cols(), a.field_like());
  if (f.n() != a.rows()) throw std::invalid_argument("right_eval: size mismatch");
  Matrix<K> acc = f[static_cast<std::size_t>(f.degree())];
  for (std::size_t i = static_cast<std::size_t>(f.degree()); i-- > 0;) {
    acc = acc * a + f[i];
  }
  return acc;
}

/// Evaluate a scalar polynomial at a square matrix.
template <class K>
Matrix<K> eval_at(const Poly<K>& g, const Matrix<K>& a) {
  return right_eval(MatrixPoly<K>::from_scalar(g, a.rows()), a);
}

/// Product f * g of a matrix polynomial by a scalar polynomial (x is central,
/// so (f g)_j = sum_k B_k g_{j-k}); satisfies (f g)(A) = f(A) g(A).
template <class K>
MatrixPoly<K> scalar_right_multiply(const MatrixPoly<K>& f, const Poly<K>& g) {
  if (f.is_zero() || g.is_zero()) return MatrixPoly<K>{};
  const std::size_t n = f.n();
  const K z = f[0].field_like();
  std::vector<Matrix<K>> out(f.coeffs().size() + g.coeffs().size() - 1, Matrix<K>::zero(n, n, z));
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    for (std::size_t j = 0; j < g.coeffs().size(); ++j) {
      out[i + j] = out[i + j] + g.coeffs()[j] * f[i];
    }
  }
  return MatrixPoly<K>{std::move(out)};
}

/// Flatten A into the coefficient-stacking order used by all linear systems
/// here: entries of B_0 row-major, then B_1, and so on.
template <class K>
std::vector<K> stack_matrix_poly(const MatrixPoly<K>& f, std::size_t coeff_count, std::size_t n,
                                 const K& like) {
  std::vector<K> out(coeff_count * n * n, like.zero());
  for (std::size_t k = 0; k < f.coeffs().size(); ++k) {
    if (k >= coeff_count) throw std::invalid_argument("stack_matrix_poly: degree exceeds window");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out[k * n * n + i * n + j] = f[k].at(i, j);
    }
  }
  return out;
}

template <class K>
MatrixPoly<K> unstack_matrix_poly(const std::vector<K>& v, std::size_t n) {
  if (n == 0 || v.size() % (n * n) != 0) {
    throw std::invalid_argument("unstack_matrix_poly: length is not a multiple of n^2");
  }
  const std::size_t count = v.size() / (n * n);
  std::vector<Matrix<K>> coeffs;
  coeffs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Matrix<K> m(n, n, v[0].zero());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m.at(i, j) = v[k * n * n + i * n + j];
    }
    coeffs.push_back(std::move(m));
  }
  return MatrixPoly<K>{std::move(coeffs)};
}

/// Monic minimal polynomial of a square matrix: the first power A^d that is
/// linearly dependent on {I, A, ..., A^{d-1}} yields the coefficients.
template <class K>
Poly<K> minimal_polynomial(const Matrix<K>& a) {
  if (!a.is_square()) throw std::invalid_argument("minimal_polynomial: matrix must be square");
  const std::size_t n = a.rows();
  const K like = a.field_like();
  std::vector<Matrix<K>> powers{Matrix<K>::identity(n, like)};
  for (std::size_t d = 1; d <= n; ++d) {
    powers.push_back(powers.back() * a);
    // Columns are vec(A^0), ..., vec(A^{d-1}); solve for vec(A^d).
    Matrix<K> sys(n * n, d, like.zero());
    std::vector<K> rhs;
    rhs.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < d; ++k) sys.at(i * n + j, k) = powers[k].at(i, j);
        rhs.push_back(powers[d].at(i, j));
      }
    }
    if (auto sol = solve_linear(sys, rhs)) {
      std::vector<K> coeffs(d + 1, like.zero());
      for (std::size_t k = 0; k < d; ++k) coeffs[k] = -(*sol)[k];
      coeffs[d] = like.one();
      return Poly<K>{std::move(coeffs)};
    }
  }
  throw std::logic_error("minimal_polynomial: no dependency up to degree n");
}

/// Monic lcm of the minimal polynomials of a nonempty set.
template <class K>
Poly<K> mu_of_set(const std::vector<Matrix<K>>& set) {
  if (set.empty()) throw std::invalid_argument("mu_of_set: empty set");
  Poly<K> mu = minimal_polynomial(set[0]);
  for (std::size_t i = 1; i < set.size(); ++i) mu = poly_lcm(mu, minimal_polynomial(set[i]));
  return mu;
}

/// Low-degree annihilator search for a set S: all matrix polynomials f with
/// deg f < deg mu_S and f(A) = 0 for every A in S, as a canonical subspace of
/// coefficient-stacked vectors.  S admits no such nonzero f exactly when the
/// subspace is zero.
template <class K>
struct NullIdealProbe {
  Poly<K> mu;            ///< monic lcm of member minimal polynomials
  std::size_t n = 0;     ///< matrix size
  Subspace<K> space;     ///< annihilators of degree < deg mu, stacked
};

template <class K>
NullIdealProbe<K> null_ideal_low_degree(const std::vector<Matrix<K>>& set) {
  if (set.empty()) throw std::invalid_argument("null_ideal_low_degree: empty set");
  const std::size_t n = set[0].rows();
  for (const auto& m : set) {
    if (!m.is_square() || m.rows() != n) {
      throw std::invalid_argument("null_ideal_low_degree: members must be square of one size");
    }
  }
  const K like = set[0].field_like();
  const Poly<K> mu = mu_of_set(set);
  const std::size_t t = static_cast<std::size_t>(mu.degree());
  const std::size_t unknowns = t * n * n;
  Matrix<K> sys(set.size() * n * n, unknowns, like.zero());
  for (std::size_t m = 0; m < set.size(); ++m) {
    std::vector<Matrix<K>> powers{Matrix<K>::identity(n, like)};
    for (std::size_t k = 1; k < t; ++k) powers.push_back(powers.back() * set[m]);
    // Equation (m, i, j): sum_{k,l} (B_k)_{i,l} (A^k)_{l,j} = 0.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t row = m * n * n + i * n + j;
        for (std::size_t k = 0; k < t; ++k) {
          for (std::size_t l = 0; l < n; ++l) {
            sys.at(row, k * n * n + i * n + l) = powers[k].at(l, j);
          }
        }
      }
    }
  }
  return NullIdealProbe<K>{mu, n, nullspace(sys)};
}

/// The finite annihilator space B(A, g) = {f : deg f < deg m_A - deg g and
/// (f g)(A) = 0} for a monic divisor g of m_A, as stacked coefficient vectors.
template <class K>
struct BSpace {
  Matrix<K> base;          ///< A
  Poly<K> cofactor;        ///< g
  std::size_t coeff_count; ///< deg m_A - deg g (coefficient window)
  Subspace<K> space;       ///< stacked solutions, ambient coeff_count * n^2
};

template <class K>
BSpace<K> b_space(const Matrix<K>& a, const Poly<K>& g) {
  const Poly<K> m = minimal_polynomial(a);
  if (g.is_zero() || !g.is_monic()) throw std::invalid_argument("b_space: cofactor must be monic");
  if (!divides(g, m)) {
    throw std::invalid_argument("b_space: cofactor must divide the minimal polynomial");
  }
  const std::size_t n = a.rows();
  const K like = a.field_like();
  const std::size_t d = static_cast<std::size_t>(m.degree() - g.degree());
  if (d == 0) {
    return BSpace<K>{a, g, 0, Subspace<K>::zero(0, like)};
  }
  // Precompute M_k = g(A) A^k; the constraint sum_k B_k M_k = 0 is linear in
  // the stacked entries of the B_k.
  std::vector<Matrix<K>> mk{eval_at(g, a)};
  for (std::size_t k = 1; k < d; ++k) mk.push_back(mk.back() * a);
  Matrix<K> sys(n * n, d * n * n, like.zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          sys.at(i * n + j, k * n * n + i * n + l) = mk[k].at(l, j);
        }
      }
    }
  }
  return BSpace<K>{a, g, d, nullspace(sys)};
}

/// Row space V of B(A, m_A/(x-a)) computed two independent ways — the span of the
/// rows of its members, and the orthocomplement of Im((m_A/(x-a))(A)) — which
/// must agree; their common value is returned.
template <class K>
Subspace<K> b_space_row_space(const Matrix<K>& a, const K& root) {
  const Poly<K> m = minimal_polynomial(a);
  const K like = a.field_like();
  std::vector<K> lin{-root, like.one()};
  const Poly<K> x_minus_root{std::move(lin)};
  if (!divides(x_minus_root, m)) {
    throw std::invalid_argument("b_space_row_space: root is not a root of the minimal polynomial");
  }
  const Poly<K> fa = m / x_minus_root;
  BSpace<K> b = b_space(a, fa);
  // Route 1: rows of members (the basis members' rows span the same space).
  const std::size_t n = a.rows();
  Subspace<K> via_rows = Subspace<K>::zero(n, like);
  if (b.space.dim() > 0) {
    std::vector<Matrix<K>> members;
    for (const auto& vec : b.space.basis()) {
      members.push_back(unstack_matrix_poly(vec, n)[0]);
    }
    via_rows = row_space_of_set(members);
  }
  // Route 2: complement of the image of f_a(A).
  Subspace<K> via_image = orthocomplement(column_space(eval_at(fa, a)));
  if (!(via_rows == via_image)) {
    throw std::logic_error("b_space_row_space: row-space and image-complement routes disagree");
  }
  return via_rows;
}

}  // namespace coreset

#endif  // CORESET_MATPOLY_HPP
