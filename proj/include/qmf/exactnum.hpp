#pragma once

// Exact arithmetic over Q and real quadratic extensions Q[t]/(t^2 - p t - q),
// plus factorization of the small characteristic polynomials produced by the
// eigenform extraction.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qmf {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// "num/den" in lowest terms, or "num" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

inline Rational parse_rational(std::string_view text) {
  std::string s(trim(text));
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  if (s.front() == '+') s.erase(0, 1);
  auto valid = [](const std::string& part) {
    if (part.empty()) return false;
    std::size_t i = (part[0] == '-') ? 1 : 0;
    if (i == part.size()) return false;
    return std::all_of(part.begin() + static_cast<std::ptrdiff_t>(i), part.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  const auto slash = s.find('/');
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid(num) || !valid(den) || den[0] == '-') throw std::invalid_argument("bad rational literal: " + s);
  Integer d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: " + s);
  Rational r(Integer(num), d);
  r.canonicalize();
  return r;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// ---------------------------------------------------------------------------
// Quadratic extension descriptor: the field Q[t]/(t^2 - p t - q).

struct QuadDescriptor {
  Rational p;
  Rational q;

  Rational discriminant() const { return p * p + 4 * q; }
  bool totally_real() const { return sgn(discriminant()) > 0; }
  bool operator==(const QuadDescriptor& o) const { return p == o.p && q == o.q; }
};

/// nullptr stands for Q itself.
using Field = std::shared_ptr<const QuadDescriptor>;

inline bool is_perfect_square(const Rational& r) {
  if (sgn(r) < 0) return false;
  return mpz_perfect_square_p(r.get_num_mpz_t()) && mpz_perfect_square_p(r.get_den_mpz_t());
}

/// Builds the descriptor for X^2 - pX - q. The polynomial must be irreducible
/// over Q; real and imaginary fields are both accepted, totally_real() tells
/// them apart.
inline Field make_quad_field(const Rational& p, const Rational& q) {
  QuadDescriptor d{p, q};
  if (is_perfect_square(d.discriminant()))
    throw std::invalid_argument("X^2 - (" + to_string(p) + ")X - (" + to_string(q) + ") is reducible over Q");
  return std::make_shared<const QuadDescriptor>(std::move(d));
}

inline bool same_field(const Field& a, const Field& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

inline std::string field_name(const Field& f) {
  if (!f) return "Q";
  return "(" + to_string(f->p) + "," + to_string(f->q) + ")";
}

// ---------------------------------------------------------------------------
// FieldElement: a + b t over a descriptor, or a rational (b = 0, field Q).

class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  FieldElement(Rational a) : a_(std::move(a)) {}  // NOLINT(google-explicit-constructor)
  FieldElement(Field f, Rational a, Rational b) : field_(std::move(f)), a_(std::move(a)), b_(std::move(b)) {
    if (!field_ && sgn(b_) != 0) throw std::invalid_argument("irrational part over Q");
  }

  static FieldElement generator(const Field& f) {
    if (!f) throw std::invalid_argument("Q has no generator");
    return FieldElement(f, Rational(0), Rational(1));
  }

  const Field& field() const { return field_; }
  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_rational() const { return sgn(b_) == 0; }

  const Rational& rational() const {
    if (!is_rational()) throw std::domain_error("element " + str() + " is not rational");
    return a_;
  }

  /// The nontrivial automorphism t -> p - t.
  FieldElement conj() const {
    if (!field_ || sgn(b_) == 0) return *this;
    return FieldElement(field_, a_ + b_ * field_->p, -b_);
  }

  Rational trace() const {
    if (!field_) return 2 * a_;
    return 2 * a_ + b_ * field_->p;
  }

  Rational norm() const {
    if (!field_) return a_ * a_;
    return a_ * a_ + a_ * b_ * field_->p - b_ * b_ * field_->q;
  }

  FieldElement& operator+=(const FieldElement& o) {
    adopt(o);
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  FieldElement& operator-=(const FieldElement& o) {
    adopt(o);
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  FieldElement& operator*=(const FieldElement& o) {
    adopt(o);
    if (sgn(b_) == 0 && sgn(o.b_) == 0) {
      a_ *= o.a_;
      return *this;
    }
    // (a1 + b1 t)(a2 + b2 t) with t^2 = p t + q.
    Rational bb = b_ * o.b_;
    Rational a = a_ * o.a_ + bb * field_->q;
    Rational b = a_ * o.b_ + o.a_ * b_ + bb * field_->p;
    a_ = std::move(a);
    b_ = std::move(b);
    return *this;
  }
  FieldElement& operator/=(const FieldElement& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    adopt(o);
    if (sgn(o.b_) == 0) {
      a_ /= o.a_;
      b_ /= o.a_;
      return *this;
    }
    const Rational n = o.norm();
    *this *= o.conj();
    a_ /= n;
    b_ /= n;
    return *this;
  }

  FieldElement operator-() const {
    FieldElement r(*this);
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
  }

  friend FieldElement operator+(FieldElement x, const FieldElement& y) { return x += y; }
  friend FieldElement operator-(FieldElement x, const FieldElement& y) { return x -= y; }
  friend FieldElement operator*(FieldElement x, const FieldElement& y) { return x *= y; }
  friend FieldElement operator/(FieldElement x, const FieldElement& y) { return x /= y; }

  /// Values compare equal regardless of the declared field when both are rational.
  friend bool operator==(const FieldElement& x, const FieldElement& y) {
    if (x.a_ != y.a_ || x.b_ != y.b_) return false;
    if (sgn(x.b_) == 0) return true;
    return same_field(x.field_, y.field_);
  }
  friend bool operator!=(const FieldElement& x, const FieldElement& y) { return !(x == y); }

  /// Promotes a rational element into the field f (no-op when already there).
  FieldElement in(const Field& f) const {
    if (same_field(field_, f)) return *this;
    if (field_ && sgn(b_) != 0) throw std::invalid_argument("mismatched descriptors");
    return FieldElement(f, a_, b_);
  }

  /// Serialization: "a" or "a+b*t@(p,q)".
  std::string str() const {
    if (!field_ || sgn(b_) == 0) return to_string(a_);
    return to_string(a_) + "+" + to_string(b_) + "*t@" + field_name(field_);
  }
  friend std::ostream& operator<<(std::ostream& os, const FieldElement& x) { return os << x.str(); }

  static FieldElement parse(std::string_view text) {
    const std::string s(trim(text));
    const auto at = s.find('@');
    if (at == std::string::npos) return FieldElement(parse_rational(s));
    const std::string desc = s.substr(at + 1);
    if (desc.size() < 5 || desc.front() != '(' || desc.back() != ')')
      throw std::invalid_argument("bad field descriptor: " + desc);
    const auto comma = desc.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("bad field descriptor: " + desc);
    Field f = make_quad_field(parse_rational(desc.substr(1, comma - 1)),
                              parse_rational(desc.substr(comma + 1, desc.size() - comma - 2)));
    const std::string body = s.substr(0, at);
    const auto star = body.rfind("*t");
    if (star == std::string::npos || star + 2 != body.size()) throw std::invalid_argument("bad element: " + s);
    // split "a+b" at the last '+' that is not the sign of b
    const std::string ab = body.substr(0, star);
    std::size_t split = std::string::npos;
    for (std::size_t i = ab.size(); i-- > 1;) {
      if (ab[i] == '+' || (ab[i] == '-' && ab[i - 1] != '+')) {
        split = i;
        break;
      }
    }
    if (split == std::string::npos) return FieldElement(f, Rational(0), parse_rational(ab));
    Rational a = parse_rational(ab.substr(0, split));
    Rational b = parse_rational(ab.substr(split));
    return FieldElement(std::move(f), std::move(a), std::move(b));
  }

 private:
  void adopt(const FieldElement& o) {
    if (same_field(field_, o.field_)) return;
    if (!o.field_) return;
    if (!field_) {
      field_ = o.field_;
      return;
    }
    throw std::invalid_argument("mismatched descriptors " + field_name(field_) + " and " + field_name(o.field_));
  }

  Field field_;
  Rational a_;
  Rational b_;
};

inline FieldElement quad_mul(const FieldElement& x, const FieldElement& y) {
  if (x.field() && y.field() && !same_field(x.field(), y.field()))
    throw std::invalid_argument("mismatched descriptors");
  return x * y;
}
inline FieldElement conj(const FieldElement& x) { return x.conj(); }
inline Rational trace(const FieldElement& x) { return x.trace(); }

/// The common field of a set of elements; throws on two distinct quadratic fields.
template <typename Range>
Field common_field(const Range& elems) {
  Field f;
  for (const FieldElement& e : elems) {
    if (!e.field() || e.is_rational()) continue;
    if (!f) {
      f = e.field();
    } else if (!same_field(f, e.field())) {
      throw std::invalid_argument("mismatched descriptors");
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Univariate polynomials over Q.

class PolyQ {
 public:
  PolyQ() = default;
  explicit PolyQ(std::vector<Rational> low_to_high) : c_(std::move(low_to_high)) { normalize(); }
  static PolyQ monomial(const Rational& c, int deg) {
    std::vector<Rational> v(static_cast<std::size_t>(deg) + 1);
    v.back() = c;
    return PolyQ(std::move(v));
  }
  /// Monic linear factor X - r.
  static PolyQ linear(const Rational& r) { return PolyQ({-r, Rational(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const { return i >= 0 && i <= degree() ? c_[static_cast<std::size_t>(i)] : Rational(0); }
  const Rational& leading() const { return c_.back(); }

  Rational operator()(const Rational& x) const {
    Rational r(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }
  FieldElement operator()(const FieldElement& x) const {
    FieldElement r(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + FieldElement(*it);
    return r;
  }

  PolyQ monic() const {
    if (is_zero()) return *this;
    std::vector<Rational> v(c_);
    const Rational lc = leading();
    for (auto& x : v) x /= lc;
    return PolyQ(std::move(v));
  }

  PolyQ derivative() const {
    if (degree() < 1) return PolyQ();
    std::vector<Rational> v(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * static_cast<long>(i);
    return PolyQ(std::move(v));
  }

  friend PolyQ operator+(const PolyQ& x, const PolyQ& y) {
    std::vector<Rational> v(std::max(x.c_.size(), y.c_.size()));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = x.coeff(static_cast<int>(i)) + y.coeff(static_cast<int>(i));
    return PolyQ(std::move(v));
  }
  friend PolyQ operator-(const PolyQ& x, const PolyQ& y) {
    std::vector<Rational> v(std::max(x.c_.size(), y.c_.size()));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = x.coeff(static_cast<int>(i)) - y.coeff(static_cast<int>(i));
    return PolyQ(std::move(v));
  }
  friend PolyQ operator*(const PolyQ& x, const PolyQ& y) {
    if (x.is_zero() || y.is_zero()) return PolyQ();
    std::vector<Rational> v(x.c_.size() + y.c_.size() - 1);
    for (std::size_t i = 0; i < x.c_.size(); ++i)
      for (std::size_t j = 0; j < y.c_.size(); ++j) v[i + j] += x.c_[i] * y.c_[j];
    return PolyQ(std::move(v));
  }
  friend bool operator==(const PolyQ& x, const PolyQ& y) { return x.c_ == y.c_; }

  /// Euclidean division: returns (quotient, remainder).
  std::pair<PolyQ, PolyQ> divmod(const PolyQ& d) const {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Rational> r(c_);
    if (degree() < d.degree()) return {PolyQ(), *this};
    std::vector<Rational> q(static_cast<std::size_t>(degree() - d.degree() + 1));
    for (int i = degree(); i >= d.degree(); --i) {
      const Rational f = r[static_cast<std::size_t>(i)] / d.leading();
      q[static_cast<std::size_t>(i - d.degree())] = f;
      if (sgn(f) == 0) continue;
      for (int j = 0; j <= d.degree(); ++j) r[static_cast<std::size_t>(i - d.degree() + j)] -= f * d.c_[static_cast<std::size_t>(j)];
    }
    return {PolyQ(std::move(q)), PolyQ(std::move(r))};
  }

  std::string str(const char* var = "X") const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      const Rational& c = c_[static_cast<std::size_t>(i)];
      if (sgn(c) == 0) continue;
      if (!out.empty()) out += sgn(c) > 0 ? " + " : " - ";
      else if (sgn(c) < 0) out += "-";
      const Rational a = abs(c);
      if (i == 0 || a != 1) out += to_string(a);
      if (i > 0) out += (i == 0 || a != 1 ? std::string("*") : std::string()) + var + (i > 1 ? "^" + std::to_string(i) : "");
    }
    return out;
  }

 private:
  void normalize() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

inline PolyQ gcd(PolyQ a, PolyQ b) {
  while (!b.is_zero()) {
    PolyQ r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// ---------------------------------------------------------------------------
// factor_small

struct QuadraticFactor {
  Field descriptor;  // X^2 - pX - q
  bool totally_real = false;
  int multiplicity = 1;
};

struct Factorization {
  Rational leading;
  std::vector<std::pair<Rational, int>> roots;  // rational root, multiplicity
  std::vector<QuadraticFactor> quadratics;

  PolyQ expand() const {
    PolyQ r({leading});
    for (const auto& [root, m] : roots)
      for (int i = 0; i < m; ++i) r = r * PolyQ::linear(root);
    for (const auto& qf : quadratics)
      for (int i = 0; i < qf.multiplicity; ++i) r = r * PolyQ({-qf.descriptor->q, -qf.descriptor->p, Rational(1)});
    return r;
  }
};

namespace detail {

inline Integer ceil_root(const Integer& x, unsigned long k) {
  Integer r;
  const bool exact = mpz_root(r.get_mpz_t(), x.get_mpz_t(), k) != 0;
  return exact ? r : r + 1;
}

/// Integer roots of a monic integer polynomial (coefficients low to high).
inline std::vector<Integer> integer_roots(const std::vector<Integer>& g) {
  const int n = static_cast<int>(g.size()) - 1;
  std::vector<Integer> roots;
  auto eval = [&](const Integer& x) {
    Integer r = 0;
    for (int i = n; i >= 0; --i) r = r * x + g[static_cast<std::size_t>(i)];
    return r;
  };
  int low = 0;
  while (low < n && g[static_cast<std::size_t>(low)] == 0) ++low;
  if (low > 0) roots.emplace_back(0);
  if (low == n) return roots;
  // Fujiwara bound on |root|
  Integer bound = 1;
  for (int i = 1; i <= n - low; ++i) {
    Integer c = abs(g[static_cast<std::size_t>(n - i)]);
    if (c == 0) continue;
    Integer r = ceil_root(c, static_cast<unsigned long>(i));
    if (r > bound) bound = r;
  }
  bound *= 2;
  if (bound > Integer(100000000)) throw std::domain_error("factor_small: root bound too large");
  // divisors of the lowest nonzero coefficient up to the bound
  Integer c0 = abs(g[static_cast<std::size_t>(low)]);
  std::vector<std::pair<Integer, int>> primes;
  Integer rest = c0;
  for (Integer p = 2; p <= bound && p * p <= rest; ++p) {
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (e) primes.emplace_back(p, e);
  }
  if (rest > 1 && rest <= bound) primes.emplace_back(rest, 1);
  std::vector<Integer> divs{1};
  for (const auto& [p, e] : primes) {
    const std::size_t m = divs.size();
    Integer pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      if (pk > bound) break;
      for (std::size_t i = 0; i < m; ++i) {
        Integer d = divs[i] * pk;
        if (d <= bound) divs.push_back(d);
      }
    }
  }
  for (const Integer& d : divs) {
    if (eval(d) == 0) roots.push_back(d);
    if (eval(Integer(-d)) == 0) roots.push_back(-d);
  }
  return roots;
}

/// Rational roots of a nonzero polynomial, without multiplicity.
inline std::vector<Rational> rational_roots(const PolyQ& f) {
  const PolyQ m = f.monic();
  const int n = m.degree();
  if (n <= 0) return {};
  Integer L = 1;
  for (const Rational& c : m.coeffs()) L = lcm(L, c.get_den());
  // g(Y) = L^n m(Y/L) is monic with integer coefficients
  std::vector<Integer> g(static_cast<std::size_t>(n) + 1);
  Integer pw = 1;
  for (int i = n; i >= 0; --i) {
    Rational v = m.coeff(i) * pw;
    g[static_cast<std::size_t>(i)] = v.get_num();
    pw *= L;
  }
  std::vector<Rational> out;
  for (const Integer& r : integer_roots(g)) {
    Rational q(r, L);
    q.canonicalize();
    out.push_back(q);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Complete factorization over Q into rational linear factors and quadratic
/// factors. Any part that does not reduce to degree <= 2 after removing
/// rational roots is rejected.
inline Factorization factor_small(const PolyQ& poly) {
  if (poly.is_zero()) throw std::invalid_argument("factor_small: zero polynomial");
  Factorization out;
  out.leading = poly.leading();
  PolyQ rest = poly.monic();
  for (const Rational& r : detail::rational_roots(rest)) {
    int m = 0;
    for (;;) {
      auto [q, rem] = rest.divmod(PolyQ::linear(r));
      if (!rem.is_zero()) break;
      rest = q;
      ++m;
    }
    out.roots.emplace_back(r, m);
  }
  if (rest.degree() <= 0) return out;
  // Yun's squarefree decomposition of what is left: rest = prod a_i^i
  PolyQ a = rest;
  PolyQ b = gcd(a, a.derivative());
  PolyQ c = a.divmod(b).first;
  PolyQ d = c.derivative() - (a.derivative().divmod(b).first);
  for (int i = 1; c.degree() > 0; ++i) {
    PolyQ ai = gcd(c, d);
    if (ai.degree() > 0) {
      if (ai.degree() != 2)
        throw std::domain_error("factor_small: irreducible factor of degree " + std::to_string(ai.degree()) +
                                " in " + poly.str());
      QuadraticFactor qf;
      qf.descriptor = make_quad_field(-ai.coeff(1), -ai.coeff(0));
      qf.totally_real = qf.descriptor->totally_real();
      qf.multiplicity = i;
      out.quadratics.push_back(qf);
    }
    c = c.divmod(ai).first;
    d = d.divmod(ai).first - c.derivative();
  }
  return out;
}

/// Both roots t and p - t of an irreducible quadratic factor, in its own field.
inline std::pair<FieldElement, FieldElement> quadratic_roots(const Field& f) {
  FieldElement t = FieldElement::generator(f);
  return {t, t.conj()};
}

}  // namespace qmf
