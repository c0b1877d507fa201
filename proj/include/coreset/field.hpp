/**
 * @file coreset/field.hpp
 * @brief Exact arithmetic: prime fields with runtime modulus, dense univariate
 *        polynomials over any field scalar, irreducibility/factorization by
 *        trial division, and extension fields K = F_q[y]/(p(y)).
 * @copyright Apache License 2.0
 */
#ifndef CORESET_FIELD_HPP
#define CORESET_FIELD_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "coreset/common.hpp"

namespace coreset {

namespace detail {

constexpr bool is_prime_u32(std::uint32_t m) {
  if (m < 64) {
    // Bitmask of primes below 64; covers the hot path for desk-scale moduli.
    constexpr std::uint64_t mask = (1ull << 2) | (1ull << 3) | (1ull << 5) | (1ull << 7) |
                                   (1ull << 11) | (1ull << 13) | (1ull << 17) | (1ull << 19) |
                                   (1ull << 23) | (1ull << 29) | (1ull << 31) | (1ull << 37) |
                                   (1ull << 41) | (1ull << 43) | (1ull << 47) | (1ull << 53) |
                                   (1ull << 59) | (1ull << 61);
    return (mask >> m) & 1u;
  }
  for (std::uint32_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) return false;
  }
  return true;
}

}  // namespace detail

/// Element of the prime field F_q.  Carries its own modulus; operations on
/// mismatched moduli throw rather than silently coercing.
class Fp {
 public:
  Fp(std::int64_t value, std::uint32_t modulus) {
    if (!detail::is_prime_u32(modulus)) {
      throw std::domain_error("Fp: modulus " + std::to_string(modulus) + " is not prime");
    }
    q_ = modulus;
    std::int64_t r = value % static_cast<std::int64_t>(modulus);
    if (r < 0) r += static_cast<std::int64_t>(modulus);
    v_ = static_cast<std::uint32_t>(r);
  }

  std::uint32_t value() const { return v_; }
  std::uint32_t modulus() const { return q_; }
  bool is_zero() const { return v_ == 0; }

  Fp zero() const { return Fp(0, q_, Raw{}); }
  Fp one() const { return Fp(1, q_, Raw{}); }

  friend Fp operator+(const Fp& a, const Fp& b) {
    check_compat(a, b);
    std::uint32_t s = a.v_ + b.v_;
    if (s >= a.q_) s -= a.q_;
    return Fp(s, a.q_, Raw{});
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    check_compat(a, b);
    std::uint32_t s = a.v_ + (a.q_ - b.v_);
    if (s >= a.q_) s -= a.q_;
    return Fp(s, a.q_, Raw{});
  }
  Fp operator-() const { return Fp(v_ == 0 ? 0 : q_ - v_, q_, Raw{}); }
  friend Fp operator*(const Fp& a, const Fp& b) {
    check_compat(a, b);
    std::uint64_t p = static_cast<std::uint64_t>(a.v_) * b.v_;
    return Fp(static_cast<std::uint32_t>(p % a.q_), a.q_, Raw{});
  }
  friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inverse(); }

  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }
  Fp& operator/=(const Fp& o) { return *this = *this / o; }

  Fp inverse() const {
    if (v_ == 0) throw std::domain_error("Fp: division by zero (modulus " + std::to_string(q_) + ")");
    // Extended Euclid on (q, v); q prime guarantees a unit.
    std::int64_t t = 0, nt = 1;
    std::int64_t r = q_, nr = v_;
    while (nr != 0) {
      std::int64_t quot = r / nr;
      std::tie(t, nt) = std::make_tuple(nt, t - quot * nt);
      std::tie(r, nr) = std::make_tuple(nr, r - quot * nr);
    }
    if (t < 0) t += q_;
    return Fp(static_cast<std::uint32_t>(t), q_, Raw{});
  }

  Fp pow(std::uint64_t e) const {
    Fp acc = one(), base = *this;
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  friend bool operator==(const Fp& a, const Fp& b) {
    check_compat(a, b);
    return a.v_ == b.v_;
  }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

  std::string to_string() const { return std::to_string(v_); }

 private:
  struct Raw {};
  Fp(std::uint32_t v, std::uint32_t q, Raw) : v_(v), q_(q) {}
  static void check_compat(const Fp& a, const Fp& b) {
    if (a.q_ != b.q_) {
      throw std::domain_error("Fp: mixed moduli " + std::to_string(a.q_) + " and " +
                              std::to_string(b.q_));
    }
  }
  std::uint32_t v_ = 0;
  std::uint32_t q_ = 2;
};

/// Dense univariate polynomial over a field scalar K, coefficients ascending.
/// The zero polynomial has an empty coefficient list and degree() == -1.
template <class K>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly constant(const K& k) {
    return k.is_zero() ? Poly{} : Poly{std::vector<K>{k}};
  }
  /// lead * x^deg
  static Poly monomial(std::size_t deg, const K& lead) {
    if (lead.is_zero()) return Poly{};
    std::vector<K> c(deg + 1, lead.zero());
    c[deg] = lead;
    return Poly{std::move(c)};
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<K>& coeffs() const { return c_; }

  /// Coefficient of x^i; indices past the degree yield 0.  Requires a nonzero
  /// polynomial (the zero polynomial carries no field context to mint from).
  K coeff(std::size_t i) const {
    if (c_.empty()) throw std::logic_error("Poly: coeff() on the zero polynomial");
    return i < c_.size() ? c_[i] : c_[0].zero();
  }
  const K& operator[](std::size_t i) const { return c_.at(i); }
  const K& leading() const {
    if (c_.empty()) throw std::logic_error("Poly: leading() on the zero polynomial");
    return c_.back();
  }
  bool is_monic() const { return !c_.empty() && c_.back() == c_.back().one(); }

  K eval(const K& x) const {
    if (c_.empty()) return x.zero();
    K acc = c_.back();
    for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  Poly monic() const {
    if (c_.empty()) throw std::domain_error("Poly: cannot normalize the zero polynomial");
    if (is_monic()) return *this;
    K inv = c_.back().inverse();
    std::vector<K> out(c_);
    for (K& k : out) k *= inv;
    return Poly{std::move(out)};
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const K z = a.c_[0].zero();
    std::vector<K> out(std::max(a.c_.size(), b.c_.size()), z);
    for (std::size_t i = 0; i < a.c_.size(); ++i) out[i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
    return Poly{std::move(out)};
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  Poly operator-() const {
    std::vector<K> out(c_);
    for (K& k : out) k = -k;
    return Poly{std::move(out)};
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly{};
    const K z = a.c_[0].zero();
    std::vector<K> out(a.c_.size() + b.c_.size() - 1, z);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly{std::move(out)};
  }
  friend Poly operator*(const Poly& a, const K& k) { return a * Poly::constant(k); }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (!(a.c_[i] == b.c_[i])) return false;
    }
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  std::string to_string(std::string_view var = "x") const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      const bool unit = c_[i] == c_[i].one();
      if (i == 0) {
        s += c_[i].to_string();
      } else {
        if (!unit) s += c_[i].to_string() + "*";
        s += var;
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s.empty() ? "0" : s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<K> c_;
};

/// Quotient and remainder of a by b (b nonzero), so that a = q*b + r with
/// deg r < deg b.
template <class K>
std::pair<Poly<K>, Poly<K>> divmod(const Poly<K>& a, const Poly<K>& b) {
  if (b.is_zero()) throw std::domain_error("Poly: division by the zero polynomial");
  if (a.is_zero() || a.degree() < b.degree()) return {Poly<K>{}, a};
  const K z = b.leading().zero();
  const K lead_inv = b.leading().inverse();
  std::vector<K> rem(a.coeffs());
  std::vector<K> quot(static_cast<std::size_t>(a.degree() - b.degree()) + 1, z);
  for (std::size_t i = quot.size(); i-- > 0;) {
    const std::size_t top = i + static_cast<std::size_t>(b.degree());
    if (rem[top].is_zero()) continue;
    K f = rem[top] * lead_inv;
    quot[i] = f;
    for (int j = 0; j <= b.degree(); ++j) {
      rem[i + static_cast<std::size_t>(j)] -= f * b[static_cast<std::size_t>(j)];
    }
  }
  return {Poly<K>{std::move(quot)}, Poly<K>{std::move(rem)}};
}

template <class K>
Poly<K> operator/(const Poly<K>& a, const Poly<K>& b) {
  return divmod(a, b).first;
}
template <class K>
Poly<K> operator%(const Poly<K>& a, const Poly<K>& b) {
  return divmod(a, b).second;
}

template <class K>
bool divides(const Poly<K>& d, const Poly<K>& f) {
  return (f % d).is_zero();
}

/// Monic gcd; gcd(0, g) = monic g.  Both zero is an error.
template <class K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
  if (a.is_zero() && b.is_zero()) throw std::domain_error("Poly: gcd(0, 0) is undefined");
  while (!b.is_zero()) {
    Poly<K> r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic.
template <class K>
std::tuple<Poly<K>, Poly<K>, Poly<K>> poly_xgcd(const Poly<K>& a, const Poly<K>& b) {
  if (a.is_zero() && b.is_zero()) throw std::domain_error("Poly: xgcd(0, 0) is undefined");
  Poly<K> r0 = a, r1 = b;
  const K one = (a.is_zero() ? b : a).leading().one();
  Poly<K> u0 = Poly<K>::constant(one), u1{};
  Poly<K> v0{}, v1 = Poly<K>::constant(one);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly<K> nu = u0 - q * u1;
    Poly<K> nv = v0 - q * v1;
    u0 = std::move(u1);
    u1 = std::move(nu);
    v0 = std::move(v1);
    v1 = std::move(nv);
  }
  const K lead = r0.leading();
  if (!(lead == one)) {
    Poly<K> scale = Poly<K>::constant(lead.inverse());
    r0 = r0 * scale;
    u0 = u0 * scale;
    v0 = v0 * scale;
  }
  return {r0, u0, v0};
}

/// Monic lcm via f*g / gcd(f, g).
template <class K>
Poly<K> poly_lcm(const Poly<K>& a, const Poly<K>& b) {
  if (a.is_zero() || b.is_zero()) throw std::domain_error("Poly: lcm with the zero polynomial");
  return ((a * b) / poly_gcd(a, b)).monic();
}

using FpPoly = Poly<Fp>;

/// Monic polynomial of degree `width` - ... helper: decode a monic degree-d
/// polynomial over F_q from the base-q expansion of `index` (the d low digits
/// are the coefficients of x^0..x^{d-1}).
inline FpPoly monic_from_index(std::uint32_t q, int d, std::uint64_t index) {
  std::vector<Fp> c;
  c.reserve(static_cast<std::size_t>(d) + 1);
  auto digits = base_q_digits(index, q, static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) c.emplace_back(digits[static_cast<std::size_t>(i)], q);
  c.emplace_back(1, q);
  return FpPoly{std::move(c)};
}

/// All monic irreducibles of degree exactly d over F_q, ordered by the base-q
/// value of the coefficient tuple (c_0, ..., c_{d-1}) — i.e. coefficient-lex.
inline std::vector<FpPoly> enumerate_irreducibles(std::uint32_t q, int d) {
  if (d < 1) throw std::invalid_argument("enumerate_irreducibles: degree must be >= 1");
  Fp probe(0, q);  // validates the modulus
  std::vector<FpPoly> out;
  if (d == 1) {
    for (std::uint32_t c = 0; c < q; ++c) {
      out.push_back(FpPoly{std::vector<Fp>{Fp(c, q), Fp(1, q)}});
    }
    return out;
  }
  std::vector<std::vector<FpPoly>> small;  // irreducibles of degree 1..d/2
  for (int e = 1; 2 * e <= d; ++e) small.push_back(enumerate_irreducibles(q, e));
  const std::uint64_t total = *checked_pow(q, static_cast<std::uint64_t>(d), ~0ull >> 1);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    FpPoly f = monic_from_index(q, d, idx);
    bool irred = true;
    for (const auto& batch : small) {
      for (const FpPoly& p : batch) {
        if (divides(p, f)) {
          irred = false;
          break;
        }
      }
      if (!irred) break;
    }
    if (irred) out.push_back(std::move(f));
  }
  return out;
}

/// Trial-division check against all irreducibles of degree <= deg(f)/2.
inline bool is_irreducible(const FpPoly& f) {
  if (f.is_zero() || f.degree() < 1) return false;
  const std::uint32_t q = f.leading().modulus();
  for (int e = 1; 2 * e <= f.degree(); ++e) {
    for (const FpPoly& p : enumerate_irreducibles(q, e)) {
      if (divides(p, f)) return false;
    }
  }
  return true;
}

/// Complete factorization of a monic polynomial of degree >= 1 into monic
/// irreducibles with multiplicities, sorted by (degree, coefficient-lex).
inline std::vector<std::pair<FpPoly, int>> factorize(FpPoly f) {
  if (f.is_zero() || f.degree() < 1) {
    throw std::invalid_argument("factorize: need a polynomial of degree >= 1");
  }
  if (!f.is_monic()) throw std::invalid_argument("factorize: polynomial must be monic");
  const std::uint32_t q = f.leading().modulus();
  std::vector<std::pair<FpPoly, int>> out;
  for (int d = 1; 2 * d <= f.degree(); ++d) {
    for (const FpPoly& p : enumerate_irreducibles(q, d)) {
      if (2 * d > f.degree()) break;
      int mult = 0;
      while (divides(p, f)) {
        f = f / p;
        ++mult;
      }
      if (mult > 0) out.emplace_back(p, mult);
    }
  }
  if (f.degree() >= 1) out.emplace_back(f, 1);
  return out;
}

class Ext;
class ExtField;
using ExtFieldPtr = std::shared_ptr<const ExtField>;

/// Extension field K = F_q[y]/(p(y)) for monic irreducible p of degree s >= 1.
/// Elements are coordinate vectors in the power basis {1, y, ..., y^{s-1}};
/// s = 1 degenerates to the base field with the root of p as distinguished
/// element.  Construct through build_extension().
class ExtField : public std::enable_shared_from_this<ExtField> {
 public:
  static ExtFieldPtr make(std::uint32_t q, const FpPoly& modulus);

  std::uint32_t q() const { return q_; }
  const FpPoly& modulus() const { return mod_; }
  std::size_t degree() const { return s_; }

  Ext zero() const;
  Ext one() const;
  /// The distinguished root alpha of the modulus (class of y).
  Ext alpha() const;
  /// i-th element of the Frobenius orbit alpha^(q^i), 0 <= i < degree().
  Ext root(std::size_t i) const;
  std::vector<Ext> roots() const;
  Ext from_coords(std::vector<Fp> coords) const;
  Ext from_base(const Fp& a) const;
  /// Lift a reduced representative (deg < degree()) to an element.
  Ext from_poly(const FpPoly& reduced) const;

  bool same_field(const ExtField& o) const { return q_ == o.q_ && mod_ == o.mod_; }

 private:
  ExtField(std::uint32_t q, FpPoly m) : q_(q), mod_(std::move(m)), s_(static_cast<std::size_t>(mod_.degree())) {}
  std::uint32_t q_;
  FpPoly mod_;
  std::size_t s_;
  std::vector<std::vector<Fp>> root_coords_;
  friend class Ext;
};

/// Element of an extension field; a coordinate vector plus its field context.
class Ext {
 public:
  Ext(std::vector<Fp> coords, ExtFieldPtr field) : c_(std::move(coords)), f_(std::move(field)) {
    if (!f_) throw std::invalid_argument("Ext: null field context");
    if (c_.size() != f_->degree()) {
      throw std::invalid_argument("Ext: expected " + std::to_string(f_->degree()) +
                                  " coordinates, got " + std::to_string(c_.size()));
    }
    for (const Fp& k : c_) {
      if (k.modulus() != f_->q()) throw std::domain_error("Ext: coordinate from the wrong prime field");
    }
  }

  const ExtFieldPtr& field() const { return f_; }
  const std::vector<Fp>& coords() const { return c_; }
  const Fp& coord(std::size_t i) const { return c_.at(i); }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Fp& k) { return k.is_zero(); });
  }
  /// True when all coordinates above the base one vanish.
  bool in_base() const {
    for (std::size_t i = 1; i < c_.size(); ++i) {
      if (!c_[i].is_zero()) return false;
    }
    return true;
  }

  Ext zero() const { return f_->zero(); }
  Ext one() const { return f_->one(); }

  friend Ext operator+(const Ext& a, const Ext& b) {
    check_compat(a, b);
    std::vector<Fp> out(a.c_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.c_[i];
    return Ext(std::move(out), a.f_);
  }
  friend Ext operator-(const Ext& a, const Ext& b) {
    check_compat(a, b);
    std::vector<Fp> out(a.c_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.c_[i];
    return Ext(std::move(out), a.f_);
  }
  Ext operator-() const {
    std::vector<Fp> out(c_);
    for (Fp& k : out) k = -k;
    return Ext(std::move(out), f_);
  }
  friend Ext operator*(const Ext& a, const Ext& b) {
    check_compat(a, b);
    const std::size_t s = a.c_.size();
    const Fp z = a.c_[0].zero();
    std::vector<Fp> conv(2 * s - 1, z);
    for (std::size_t i = 0; i < s; ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < s; ++j) conv[i + j] += a.c_[i] * b.c_[j];
    }
    FpPoly rem = FpPoly{std::move(conv)} % a.f_->modulus();
    return a.f_->from_poly(rem);
  }
  friend Ext operator/(const Ext& a, const Ext& b) { return a * b.inverse(); }

  Ext& operator+=(const Ext& o) { return *this = *this + o; }
  Ext& operator-=(const Ext& o) { return *this = *this - o; }
  Ext& operator*=(const Ext& o) { return *this = *this * o; }
  Ext& operator/=(const Ext& o) { return *this = *this / o; }

  Ext inverse() const {
    if (is_zero()) throw std::domain_error("Ext: division by zero");
    // xgcd(rep, modulus) over F_q[y]; coprimality is automatic (modulus irreducible).
    auto [g, u, v] = poly_xgcd(to_poly(), f_->modulus());
    (void)v;
    if (g.degree() != 0) throw std::logic_error("Ext: inverse failed; modulus not irreducible?");
    return f_->from_poly(u % f_->modulus());
  }

  Ext pow(std::uint64_t e) const {
    Ext acc = one(), base = *this;
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  /// Frobenius endomorphism x -> x^q.
  Ext frobenius() const { return pow(f_->q()); }

  friend bool operator==(const Ext& a, const Ext& b) {
    check_compat(a, b);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (!(a.c_[i] == b.c_[i])) return false;
    }
    return true;
  }
  friend bool operator!=(const Ext& a, const Ext& b) { return !(a == b); }

  FpPoly to_poly() const { return FpPoly{c_}; }

  std::string to_string() const { return to_poly().to_string("y"); }

 private:
  static void check_compat(const Ext& a, const Ext& b) {
    if (a.f_ == b.f_) return;
    if (!a.f_->same_field(*b.f_)) {
      throw std::domain_error("Ext: elements of different extension fields");
    }
  }
  std::vector<Fp> c_;
  ExtFieldPtr f_;
  friend class ExtField;
};

inline Ext ExtField::zero() const {
  return Ext(std::vector<Fp>(s_, Fp(0, q_)), shared_from_this());
}
inline Ext ExtField::one() const {
  std::vector<Fp> c(s_, Fp(0, q_));
  c[0] = Fp(1, q_);
  return Ext(std::move(c), shared_from_this());
}
inline Ext ExtField::from_coords(std::vector<Fp> coords) const {
  return Ext(std::move(coords), shared_from_this());
}
inline Ext ExtField::from_base(const Fp& a) const {
  if (a.modulus() != q_) throw std::domain_error("ExtField: embedding from the wrong prime field");
  std::vector<Fp> c(s_, Fp(0, q_));
  c[0] = a;
  return Ext(std::move(c), shared_from_this());
}
inline Ext ExtField::alpha() const { return root(0); }
inline Ext ExtField::root(std::size_t i) const {
  return Ext(root_coords_.at(i), shared_from_this());
}
inline std::vector<Ext> ExtField::roots() const {
  std::vector<Ext> out;
  out.reserve(s_);
  for (std::size_t i = 0; i < s_; ++i) out.push_back(root(i));
  return out;
}

namespace detail {
/// Pad a reduced representative (deg < s) out to exactly s coordinates.
inline std::vector<Fp> pad_coords(const FpPoly& rep, std::uint32_t q, std::size_t s) {
  std::vector<Fp> c(s, Fp(0, q));
  for (std::size_t i = 0; i < rep.coeffs().size(); ++i) c[i] = rep.coeffs()[i];
  return c;
}
}  // namespace detail

inline Ext ExtField::from_poly(const FpPoly& reduced) const {
  if (reduced.degree() >= static_cast<int>(s_)) {
    throw std::invalid_argument("ExtField: representative is not reduced");
  }
  return Ext(detail::pad_coords(reduced, q_, s_), shared_from_this());
}

inline ExtFieldPtr ExtField::make(std::uint32_t q, const FpPoly& modulus) {
  Fp probe(0, q);
  if (modulus.degree() < 1 || !modulus.is_monic()) {
    throw std::invalid_argument("build_extension: modulus must be monic of degree >= 1");
  }
  if (modulus.leading().modulus() != q) {
    throw std::domain_error("build_extension: modulus polynomial is over the wrong prime field");
  }
  if (!is_irreducible(modulus)) {
    throw std::domain_error("build_extension: modulus " + modulus.to_string() + " is reducible over F_" +
                            std::to_string(q));
  }
  auto field = std::shared_ptr<ExtField>(new ExtField(q, modulus));
  const std::size_t s = field->s_;
  // Distinguished root: the class of y (s >= 2), or -c for the degree-one p = y + c.
  std::vector<Fp> a0(s, Fp(0, q));
  if (s == 1) {
    a0[0] = -modulus[0];
  } else {
    a0[1] = Fp(1, q);
  }
  field->root_coords_.push_back(a0);
  Ext alpha = field->from_coords(a0);
  Ext cur = alpha;
  for (std::size_t i = 1; i < s; ++i) {
    cur = cur.frobenius();
    field->root_coords_.push_back(cur.coords());
  }
  // The Frobenius orbit must consist of s distinct roots of the modulus.
  std::vector<Ext> rs = field->roots();
  Poly<Ext> lifted = [&] {
    std::vector<Ext> c;
    c.reserve(modulus.coeffs().size());
    for (const Fp& k : modulus.coeffs()) c.push_back(field->from_base(k));
    return Poly<Ext>{std::move(c)};
  }();
  for (std::size_t i = 0; i < s; ++i) {
    if (!lifted.eval(rs[i]).is_zero()) {
      throw std::logic_error("build_extension: Frobenius orbit produced a non-root");
    }
    for (std::size_t j = i + 1; j < s; ++j) {
      if (rs[i] == rs[j]) throw std::logic_error("build_extension: repeated root in Frobenius orbit");
    }
  }
  return field;
}

/// Public constructor for extension fields.
inline ExtFieldPtr build_extension(std::uint32_t q, const FpPoly& modulus) {
  return ExtField::make(q, modulus);
}

inline Ext embed(const Fp& a, const ExtFieldPtr& field) { return field->from_base(a); }

inline Poly<Ext> embed(const FpPoly& f, const ExtFieldPtr& field) {
  std::vector<Ext> c;
  c.reserve(f.coeffs().size());
  for (const Fp& k : f.coeffs()) c.push_back(field->from_base(k));
  return Poly<Ext>{std::move(c)};
}

}  // namespace coreset

#endif  // CORESET_FIELD_HPP
