/**
 * @file coreset/linalg.hpp
 * @brief Dense exact linear algebra over field scalars: matrices, reduced row
 *        echelon form with transform tracking, and subspaces in canonical
 *        (RREF-basis) form with sum/intersection/orthocomplement calculus.
 * @copyright Apache License 2.0
 */
#ifndef CORESET_LINALG_HPP
#define CORESET_LINALG_HPP

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coreset/common.hpp"
#include "coreset/field.hpp"

namespace coreset {

/// Dense row-major matrix over a field scalar K.
template <class K>
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, const K& fill) : r_(rows), c_(cols), a_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("Matrix: dimensions must be positive");
  }

  static Matrix zero(std::size_t rows, std::size_t cols, const K& like) {
    return Matrix(rows, cols, like.zero());
  }
  static Matrix identity(std::size_t n, const K& like) {
    Matrix m(n, n, like.zero());
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = like.one();
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<K>>& rows) {
    if (rows.empty() || rows[0].empty()) throw std::invalid_argument("Matrix: from_rows needs data");
    Matrix m(rows.size(), rows[0].size(), rows[0][0].zero());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.c_) throw std::invalid_argument("Matrix: ragged rows");
      for (std::size_t j = 0; j < m.c_; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }

  K& at(std::size_t i, std::size_t j) { return a_.at(i * c_ + j); }
  const K& at(std::size_t i, std::size_t j) const { return a_.at(i * c_ + j); }

  /// A scalar carrying this matrix's field context.
  K field_like() const { return a_.front().zero(); }

  bool is_zero() const {
    for (const K& k : a_) {
      if (!k.is_zero()) return false;
    }
    return true;
  }
  bool is_square() const { return r_ == c_; }

  std::vector<K> row(std::size_t i) const {
    std::vector<K> out;
    out.reserve(c_);
    for (std::size_t j = 0; j < c_; ++j) out.push_back(at(i, j));
    return out;
  }
  std::vector<K> col(std::size_t j) const {
    std::vector<K> out;
    out.reserve(r_);
    for (std::size_t i = 0; i < r_; ++i) out.push_back(at(i, j));
    return out;
  }

  Matrix transpose() const {
    Matrix t(c_, r_, a_.front().zero());
    for (std::size_t i = 0; i < r_; ++i) {
      for (std::size_t j = 0; j < c_; ++j) t.at(j, i) = at(i, j);
    }
    return t;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b, "+");
    Matrix out(a);
    for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] += b.a_[i];
    return out;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.check_same_shape(b, "-");
    Matrix out(a);
    for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] -= b.a_[i];
    return out;
  }
  Matrix operator-() const {
    Matrix out(*this);
    for (K& k : out.a_) k = -k;
    return out;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) throw std::invalid_argument("Matrix: product shape mismatch");
    Matrix out(a.r_, b.c_, a.a_.front().zero());
    for (std::size_t i = 0; i < a.r_; ++i) {
      for (std::size_t k = 0; k < a.c_; ++k) {
        const K& aik = a.at(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.c_; ++j) out.at(i, j) += aik * b.at(k, j);
      }
    }
    return out;
  }
  friend Matrix operator*(const K& k, const Matrix& m) {
    Matrix out(m);
    for (K& x : out.a_) x = k * x;
    return out;
  }
  friend std::vector<K> operator*(const Matrix& m, const std::vector<K>& v) {
    if (v.size() != m.c_) throw std::invalid_argument("Matrix: vector length mismatch");
    std::vector<K> out(m.r_, m.a_.front().zero());
    for (std::size_t i = 0; i < m.r_; ++i) {
      for (std::size_t j = 0; j < m.c_; ++j) out[i] += m.at(i, j) * v[j];
    }
    return out;
  }

  Matrix pow(std::uint64_t e) const {
    if (!is_square()) throw std::invalid_argument("Matrix: pow needs a square matrix");
    Matrix acc = identity(r_, a_.front());
    Matrix base = *this;
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) return false;
    for (std::size_t i = 0; i < a.a_.size(); ++i) {
      if (!(a.a_[i] == b.a_[i])) return false;
    }
    return true;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < r_; ++i) {
      s += i ? ", [" : "[";
      for (std::size_t j = 0; j < c_; ++j) {
        if (j) s += ",";
        s += at(i, j).to_string();
      }
      s += "]";
    }
    return s + "]";
  }

 private:
  void check_same_shape(const Matrix& o, const char* op) const {
    if (r_ != o.r_ || c_ != o.c_) {
      throw std::invalid_argument(std::string("Matrix: shape mismatch in ") + op);
    }
  }
  std::size_t r_, c_;
  std::vector<K> a_;
};

/// Result of Gauss-Jordan elimination: reduced echelon form, rank, pivot
/// columns, and the invertible row-operation record T with T*input == reduced.
template <class K>
struct RrefResult {
  Matrix<K> reduced;
  Matrix<K> transform;
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
};

/// Deterministic reduced row echelon form: pivots are the first nonzero entry
/// scanning rows top-down per column (exact arithmetic needs no magnitude
/// pivoting).
template <class K>
RrefResult<K> rref(const Matrix<K>& input) {
  RrefResult<K> res{input, Matrix<K>::identity(input.rows(), input.field_like()), {}, 0};
  Matrix<K>& m = res.reduced;
  Matrix<K>& t = res.transform;
  std::size_t cur = 0;
  for (std::size_t col = 0; col < m.cols() && cur < m.rows(); ++col) {
    std::size_t piv = cur;
    while (piv < m.rows() && m.at(piv, col).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    if (piv != cur) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(cur, j));
      for (std::size_t j = 0; j < t.cols(); ++j) std::swap(t.at(piv, j), t.at(cur, j));
    }
    const K inv = m.at(cur, col).inverse();
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(cur, j) *= inv;
    for (std::size_t j = 0; j < t.cols(); ++j) t.at(cur, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == cur || m.at(i, col).is_zero()) continue;
      const K f = m.at(i, col);
      for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) -= f * m.at(cur, j);
      for (std::size_t j = 0; j < t.cols(); ++j) t.at(i, j) -= f * t.at(cur, j);
    }
    res.pivot_cols.push_back(col);
    ++cur;
  }
  res.rank = cur;
  return res;
}

template <class K>
std::size_t rank(const Matrix<K>& m) {
  return rref(m).rank;
}

/// Inverse of a square invertible matrix (throws on singular input).
template <class K>
Matrix<K> invert(const Matrix<K>& m) {
  if (!m.is_square()) throw std::invalid_argument("invert: matrix must be square");
  RrefResult<K> r = rref(m);
  if (r.rank != m.rows()) throw std::domain_error("invert: matrix is singular");
  return r.transform;
}

namespace detail {
template <class K>
inline void append_scalar_key(std::vector<std::uint64_t>& out, const K& k);

template <>
inline void append_scalar_key<Fp>(std::vector<std::uint64_t>& out, const Fp& k) {
  out.push_back(k.value());
}
template <>
inline void append_scalar_key<Ext>(std::vector<std::uint64_t>& out, const Ext& k) {
  for (const Fp& c : k.coords()) out.push_back(c.value());
}
}  // namespace detail

/// Linear subspace of K^ambient held in canonical form: the basis rows are the
/// nonzero rows of a reduced row echelon matrix, so equal subspaces have equal
/// representations (usable directly as map keys).
template <class K>
class Subspace {
 public:
  static Subspace zero(std::size_t ambient, const K& like) {
    return Subspace(ambient, {}, like.zero());
  }
  static Subspace full(std::size_t ambient, const K& like) {
    std::vector<std::vector<K>> rows;
    for (std::size_t i = 0; i < ambient; ++i) {
      std::vector<K> r(ambient, like.zero());
      r[i] = like.one();
      rows.push_back(std::move(r));
    }
    return Subspace(ambient, std::move(rows), like.zero());
  }
  /// Canonicalizing constructor: span of arbitrary generating vectors.
  static Subspace span(std::size_t ambient, const std::vector<std::vector<K>>& vectors, const K& like) {
    if (ambient == 0) throw std::invalid_argument("Subspace: ambient dimension must be positive");
    for (const auto& v : vectors) {
      if (v.size() != ambient) throw std::invalid_argument("Subspace: generator length mismatch");
    }
    std::vector<std::vector<K>> nonzero;
    for (const auto& v : vectors) {
      bool z = true;
      for (const K& k : v) {
        if (!k.is_zero()) {
          z = false;
          break;
        }
      }
      if (!z) nonzero.push_back(v);
    }
    if (nonzero.empty()) return zero(ambient, like);
    RrefResult<K> r = rref(Matrix<K>::from_rows(nonzero));
    std::vector<std::vector<K>> basis;
    for (std::size_t i = 0; i < r.rank; ++i) basis.push_back(r.reduced.row(i));
    return Subspace(ambient, std::move(basis), like.zero());
  }

  std::size_t ambient() const { return amb_; }
  std::size_t dim() const { return rows_.size(); }
  bool is_zero() const { return rows_.empty(); }
  bool is_full() const { return rows_.size() == amb_; }
  const std::vector<std::vector<K>>& basis() const { return rows_; }
  K field_like() const { return zero_; }

  bool contains(std::vector<K> v) const {
    if (v.size() != amb_) throw std::invalid_argument("Subspace: vector length mismatch");
    for (const auto& row : rows_) {
      const std::size_t p = leading_index(row);
      if (!v[p].is_zero()) {
        const K f = v[p];
        for (std::size_t j = 0; j < amb_; ++j) v[j] -= f * row[j];
      }
    }
    for (const K& k : v) {
      if (!k.is_zero()) return false;
    }
    return true;
  }
  bool contains(const Subspace& other) const {
    if (other.amb_ != amb_) throw std::invalid_argument("Subspace: ambient mismatch");
    for (const auto& row : other.rows_) {
      if (!contains(row)) return false;
    }
    return true;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    if (a.amb_ != b.amb_ || a.rows_.size() != b.rows_.size()) return false;
    for (std::size_t i = 0; i < a.rows_.size(); ++i) {
      for (std::size_t j = 0; j < a.amb_; ++j) {
        if (!(a.rows_[i][j] == b.rows_[i][j])) return false;
      }
    }
    return true;
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

  /// Stable serialization of the canonical basis; equal subspaces give equal
  /// keys, so this is a faithful bucket key.
  std::vector<std::uint64_t> key() const {
    std::vector<std::uint64_t> out;
    out.push_back(amb_);
    out.push_back(rows_.size());
    for (const auto& row : rows_) {
      for (const K& k : row) detail::append_scalar_key<K>(out, k);
    }
    return out;
  }

  std::string to_string() const {
    if (rows_.empty()) return "{0}";
    std::string s = "span{";
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      s += i ? ", (" : "(";
      for (std::size_t j = 0; j < amb_; ++j) {
        if (j) s += ",";
        s += rows_[i][j].to_string();
      }
      s += ")";
    }
    return s + "}";
  }

 private:
  Subspace(std::size_t ambient, std::vector<std::vector<K>> rows, K zero)
      : amb_(ambient), rows_(std::move(rows)), zero_(std::move(zero)) {}
  static std::size_t leading_index(const std::vector<K>& row) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j].is_zero()) return j;
    }
    throw std::logic_error("Subspace: zero row in canonical basis");
  }
  std::size_t amb_;
  std::vector<std::vector<K>> rows_;
  K zero_;
};

/// One particular solution of m x = b, or nullopt when inconsistent.
template <class K>
std::optional<std::vector<K>> solve_linear(const Matrix<K>& m, const std::vector<K>& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve_linear: rhs length mismatch");
  const K like = m.field_like();
  Matrix<K> aug(m.rows(), m.cols() + 1, like.zero());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols()) = b[i];
  }
  RrefResult<K> r = rref(aug);
  for (std::size_t c : r.pivot_cols) {
    if (c == m.cols()) return std::nullopt;  // pivot in the rhs column: inconsistent
  }
  std::vector<K> x(m.cols(), like.zero());
  for (std::size_t i = 0; i < r.pivot_cols.size(); ++i) {
    x[r.pivot_cols[i]] = r.reduced.at(i, m.cols());
  }
  return x;
}

/// Kernel {x : m x = 0} as a canonical subspace of K^cols.
template <class K>
Subspace<K> nullspace(const Matrix<K>& m) {
  const K like = m.field_like();
  RrefResult<K> r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : r.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<K>> gens;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (is_pivot[j]) continue;
    std::vector<K> v(m.cols(), like.zero());
    v[j] = like.one();
    for (std::size_t i = 0; i < r.rank; ++i) v[r.pivot_cols[i]] = -r.reduced.at(i, j);
    gens.push_back(std::move(v));
  }
  return Subspace<K>::span(m.cols(), gens, like);
}

/// Column space (image) of m as a subspace of K^rows.
template <class K>
Subspace<K> column_space(const Matrix<K>& m) {
  std::vector<std::vector<K>> cols;
  for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.col(j));
  return Subspace<K>::span(m.rows(), cols, m.field_like());
}

/// Row space of m as a subspace of K^cols.
template <class K>
Subspace<K> row_space(const Matrix<K>& m) {
  std::vector<std::vector<K>> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  return Subspace<K>::span(m.cols(), rows, m.field_like());
}

/// Span of all rows of all matrices in the family (family must be nonempty).
template <class K>
Subspace<K> row_space_of_set(const std::vector<Matrix<K>>& family) {
  if (family.empty()) throw std::invalid_argument("row_space_of_set: empty family");
  std::vector<std::vector<K>> rows;
  for (const Matrix<K>& m : family) {
    if (m.cols() != family[0].cols()) throw std::invalid_argument("row_space_of_set: width mismatch");
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  }
  return Subspace<K>::span(family[0].cols(), rows, family[0].field_like());
}

template <class K>
Subspace<K> subspace_sum(const Subspace<K>& a, const Subspace<K>& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("subspace_sum: ambient mismatch");
  std::vector<std::vector<K>> gens = a.basis();
  for (const auto& row : b.basis()) gens.push_back(row);
  return Subspace<K>::span(a.ambient(), gens, a.field_like());
}

template <class K>
Subspace<K> subspace_sum(const std::vector<Subspace<K>>& family) {
  if (family.empty()) throw std::invalid_argument("subspace_sum: empty family");
  Subspace<K> acc = family[0];
  for (std::size_t i = 1; i < family.size(); ++i) acc = subspace_sum(acc, family[i]);
  return acc;
}

/// Orthogonal complement w.r.t. the standard bilinear form x . y = sum x_i y_i.
template <class K>
Subspace<K> orthocomplement(const Subspace<K>& s) {
  const K like = s.field_like();
  if (s.is_zero()) return Subspace<K>::full(s.ambient(), like);
  return nullspace(Matrix<K>::from_rows(s.basis()));
}

/// Intersection computed through complements: (sum of V_i^perp)^perp.
template <class K>
Subspace<K> subspace_intersection(const Subspace<K>& a, const Subspace<K>& b) {
  return orthocomplement(subspace_sum(orthocomplement(a), orthocomplement(b)));
}

template <class K>
Subspace<K> subspace_intersection(const std::vector<Subspace<K>>& family) {
  if (family.empty()) throw std::invalid_argument("subspace_intersection: empty family");
  std::vector<Subspace<K>> comps;
  comps.reserve(family.size());
  for (const auto& s : family) comps.push_back(orthocomplement(s));
  return orthocomplement(subspace_sum(comps));
}

/// View an F_q-subspace inside K^ambient for an extension K; the canonical
/// basis embeds entrywise and stays canonical.
inline Subspace<Ext> extend_scalars(const Subspace<Fp>& s, const ExtFieldPtr& field) {
  std::vector<std::vector<Ext>> rows;
  for (const auto& row : s.basis()) {
    std::vector<Ext> r;
    r.reserve(row.size());
    for (const Fp& k : row) r.push_back(field->from_base(k));
    rows.push_back(std::move(r));
  }
  return Subspace<Ext>::span(s.ambient(), rows, field->zero());
}

/// Entrywise embedding of a base-field matrix into an extension field.
inline Matrix<Ext> embed(const Matrix<Fp>& m, const ExtFieldPtr& field) {
  Matrix<Ext> out(m.rows(), m.cols(), field->zero());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = field->from_base(m.at(i, j));
  }
  return out;
}

/// All elements of the scalar's field, in a fixed enumeration order.
inline std::vector<Fp> all_field_elements(const Fp& like) {
  std::vector<Fp> out;
  out.reserve(like.modulus());
  for (std::uint32_t v = 0; v < like.modulus(); ++v) out.emplace_back(v, like.modulus());
  return out;
}
inline std::vector<Ext> all_field_elements(const Ext& like) {
  const auto& f = like.field();
  const std::uint32_t q = f->q();
  const std::size_t s = f->degree();
  const std::uint64_t total = *checked_pow(q, s, ~0ull >> 1);
  std::vector<Ext> out;
  out.reserve(total);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    auto digits = base_q_digits(idx, q, s);
    std::vector<Fp> coords;
    coords.reserve(s);
    for (std::uint32_t d : digits) coords.emplace_back(d, q);
    out.push_back(f->from_coords(std::move(coords)));
  }
  return out;
}

/// Representatives of the projective space P(K^ambient): one vector per line,
/// normalized so the first nonzero coordinate is 1, in lex enumeration order.
template <class K>
std::vector<std::vector<K>> projective_points(std::size_t ambient, const K& like) {
  const std::vector<K> elems = all_field_elements(like);
  const std::uint64_t total = *checked_pow(elems.size(), ambient, ~0ull >> 1);
  std::vector<std::vector<K>> out;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t rest = idx;
    std::vector<K> v;
    v.reserve(ambient);
    for (std::size_t i = 0; i < ambient; ++i) {
      v.push_back(elems[rest % elems.size()]);
      rest /= elems.size();
    }
    std::size_t lead = ambient;
    for (std::size_t i = 0; i < ambient; ++i) {
      if (!v[i].is_zero()) {
        lead = i;
        break;
      }
    }
    if (lead == ambient) continue;                 // zero vector
    if (!(v[lead] == like.one())) continue;        // keep one representative per line
    out.push_back(std::move(v));
  }
  return out;
}

/// All 1-dimensional subspaces of K^ambient.
template <class K>
std::vector<Subspace<K>> all_lines(std::size_t ambient, const K& like) {
  std::vector<Subspace<K>> out;
  for (const auto& v : projective_points(ambient, like)) {
    out.push_back(Subspace<K>::span(ambient, {v}, like));
  }
  return out;
}

/// All hyperplanes ((ambient-1)-dimensional subspaces) of K^ambient, realized
/// as orthocomplements of the projective points of the dual space.
template <class K>
std::vector<Subspace<K>> all_hyperplanes(std::size_t ambient, const K& like) {
  std::vector<Subspace<K>> out;
  for (const auto& w : projective_points(ambient, like)) {
    out.push_back(orthocomplement(Subspace<K>::span(ambient, {w}, like)));
  }
  return out;
}

/// Decode matrix #index of M_n(F_q) under the row-major base-q indexing
/// (entry (i,j) is digit i*n+j of index).  With index running over
/// [0, q^(n*n)) this enumerates the full matrix ring once.
inline Matrix<Fp> matrix_from_index(std::uint64_t index, std::size_t n, std::uint32_t q) {
  Matrix<Fp> m(n, n, Fp(0, q));
  auto digits = base_q_digits(index, q, n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m.at(i, j) = Fp(digits[i * n + j], q);
  }
  return m;
}

}  // namespace coreset

#endif  // CORESET_LINALG_HPP
