#pragma once

// Truncated q-expansions over Q or a quadratic field, and the operators the
// linearization pipeline needs (products, D, z -> dz, n-th roots, eta quotients,
// Hecke operators, the degree-1 Rankin-Cohen bracket).

#include <qmf/exactnum.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qmf {

using IntSeries = std::vector<Integer>;

namespace detail {

inline Integer common_denominator(const std::vector<Rational>& v) {
  Integer l = 1;
  for (const Rational& x : v)
    if (x.get_den() != 1) l = lcm(l, x.get_den());
  return l;
}

inline IntSeries int_mul(const IntSeries& x, const IntSeries& y, int prec) {
  IntSeries r(static_cast<std::size_t>(prec) + 1, 0);
  const int nx = std::min<int>(static_cast<int>(x.size()) - 1, prec);
  for (int i = 0; i <= nx; ++i) {
    const Integer& xi = x[static_cast<std::size_t>(i)];
    if (xi == 0) continue;
    const int ny = std::min<int>(static_cast<int>(y.size()) - 1, prec - i);
    for (int j = 0; j <= ny; ++j) {
      const Integer& yj = y[static_cast<std::size_t>(j)];
      if (yj == 0) continue;
      mpz_addmul(r[static_cast<std::size_t>(i + j)].get_mpz_t(), xi.get_mpz_t(), yj.get_mpz_t());
    }
  }
  return r;
}

/// Inverse of an integer series with constant term 1.
inline IntSeries int_inverse(const IntSeries& x, int prec) {
  if (x.empty() || x[0] != 1) throw std::domain_error("int_inverse: constant term must be 1");
  IntSeries r(static_cast<std::size_t>(prec) + 1, 0);
  r[0] = 1;
  for (int n = 1; n <= prec; ++n) {
    Integer s = 0;
    const int top = std::min<int>(n, static_cast<int>(x.size()) - 1);
    for (int j = 1; j <= top; ++j) {
      const Integer& xj = x[static_cast<std::size_t>(j)];
      if (xj == 0) continue;
      mpz_addmul(s.get_mpz_t(), xj.get_mpz_t(), r[static_cast<std::size_t>(n - j)].get_mpz_t());
    }
    r[static_cast<std::size_t>(n)] = -s;
  }
  return r;
}

inline IntSeries int_pow(IntSeries base, unsigned m, int prec) {
  IntSeries r(static_cast<std::size_t>(prec) + 1, 0);
  r[0] = 1;
  base.resize(static_cast<std::size_t>(prec) + 1, 0);
  while (m) {
    if (m & 1U) r = int_mul(r, base, prec);
    m >>= 1U;
    if (m) base = int_mul(base, base, prec);
  }
  return r;
}

/// prod_{m>=1} (1 - q^m) by Euler's pentagonal number theorem.
inline IntSeries euler_product(int prec) {
  IntSeries r(static_cast<std::size_t>(prec) + 1, 0);
  for (long k = 0;; ++k) {
    bool any = false;
    for (long s : {k, -k}) {
      if (k == 0 && s < 0) continue;
      const long e = s * (3 * s - 1) / 2;
      if (e > prec) continue;
      any = true;
      r[static_cast<std::size_t>(e)] = (k % 2 == 0) ? 1 : -1;
    }
    if (!any && k > 0) break;
  }
  return r;
}

inline std::vector<Rational> rat_mul(const std::vector<Rational>& x, const std::vector<Rational>& y, int prec) {
  const Integer lx = common_denominator(x);
  const Integer ly = common_denominator(y);
  IntSeries xi(x.size());
  IntSeries yi(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) xi[i] = x[i].get_num() * (lx / x[i].get_den());
  for (std::size_t i = 0; i < y.size(); ++i) yi[i] = y[i].get_num() * (ly / y[i].get_den());
  const IntSeries z = int_mul(xi, yi, prec);
  const Integer l = lx * ly;
  std::vector<Rational> r(static_cast<std::size_t>(prec) + 1);
  for (int i = 0; i <= prec; ++i) {
    r[static_cast<std::size_t>(i)] = Rational(z[static_cast<std::size_t>(i)], l);
    r[static_cast<std::size_t>(i)].canonicalize();
  }
  return r;
}

}  // namespace detail

class QSeries {
 public:
  QSeries() = default;
  /// The zero series known to precision prec.
  explicit QSeries(int prec, Field f = nullptr) : field_(std::move(f)), prec_(prec) {
    if (prec < 0) throw std::invalid_argument("negative precision");
    a_.assign(static_cast<std::size_t>(prec) + 1, Rational(0));
  }

  static QSeries constant(const FieldElement& c, int prec) {
    QSeries r(prec, c.field());
    r.set(0, c);
    return r;
  }
  static QSeries from_rationals(std::vector<Rational> coeffs, Field f = nullptr) {
    if (coeffs.empty()) throw std::invalid_argument("empty coefficient list");
    QSeries r;
    r.prec_ = static_cast<int>(coeffs.size()) - 1;
    r.a_ = std::move(coeffs);
    r.field_ = std::move(f);
    return r;
  }
  static QSeries from_integers(const IntSeries& coeffs) {
    std::vector<Rational> v(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) v[i] = Rational(coeffs[i]);
    return from_rationals(std::move(v));
  }
  static QSeries from_elements(const std::vector<FieldElement>& coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("empty coefficient list");
    QSeries r(static_cast<int>(coeffs.size()) - 1, common_field(coeffs));
    for (std::size_t i = 0; i < coeffs.size(); ++i) r.set(static_cast<int>(i), coeffs[i]);
    return r;
  }

  int prec() const { return prec_; }
  const Field& field() const { return field_; }
  bool is_rational() const {
    for (const Rational& x : b_)
      if (sgn(x) != 0) return false;
    return true;
  }

  FieldElement coeff(int n) const {
    check(n);
    if (b_.empty() || !field_) return FieldElement(field_, a_[static_cast<std::size_t>(n)], Rational(0));
    return FieldElement(field_, a_[static_cast<std::size_t>(n)], b_[static_cast<std::size_t>(n)]);
  }
  FieldElement operator[](int n) const { return coeff(n); }

  /// Rational part a of the coefficient a + b t.
  const Rational& a(int n) const {
    check(n);
    return a_[static_cast<std::size_t>(n)];
  }
  Rational b(int n) const {
    check(n);
    return b_.empty() ? Rational(0) : b_[static_cast<std::size_t>(n)];
  }
  /// Coefficient as a rational; throws if it is irrational.
  const Rational& rat(int n) const {
    check(n);
    if (!b_.empty() && sgn(b_[static_cast<std::size_t>(n)]) != 0)
      throw std::domain_error("coefficient " + std::to_string(n) + " is irrational");
    return a_[static_cast<std::size_t>(n)];
  }
  const std::vector<Rational>& rational_parts() const { return a_; }

  void set(int n, const FieldElement& c) {
    check(n);
    if (c.field() && !c.is_rational()) {
      if (!field_) {
        field_ = c.field();
      } else if (!same_field(field_, c.field())) {
        throw std::invalid_argument("mismatched descriptors");
      }
      if (b_.empty()) b_.assign(a_.size(), Rational(0));
      b_[static_cast<std::size_t>(n)] = c.b();
    } else if (!b_.empty()) {
      b_[static_cast<std::size_t>(n)] = 0;
    }
    a_[static_cast<std::size_t>(n)] = c.a();
  }
  void set(int n, const Rational& c) { set(n, FieldElement(c)); }

  std::vector<FieldElement> coeffs() const {
    std::vector<FieldElement> v;
    v.reserve(a_.size());
    for (int i = 0; i <= prec_; ++i) v.push_back(coeff(i));
    return v;
  }

  QSeries truncate(int prec) const {
    if (prec > prec_) throw std::out_of_range("truncate beyond precision " + std::to_string(prec_));
    QSeries r(*this);
    r.prec_ = prec;
    r.a_.resize(static_cast<std::size_t>(prec) + 1);
    if (!r.b_.empty()) r.b_.resize(static_cast<std::size_t>(prec) + 1);
    return r;
  }

  /// Index of the first nonzero coefficient, or -1 for the zero series.
  int valuation() const {
    for (int i = 0; i <= prec_; ++i)
      if (sgn(a_[static_cast<std::size_t>(i)]) != 0 || (!b_.empty() && sgn(b_[static_cast<std::size_t>(i)]) != 0))
        return i;
    return -1;
  }
  bool is_zero() const { return valuation() < 0; }

  QSeries conj() const {
    QSeries r(prec_, field_);
    for (int i = 0; i <= prec_; ++i) r.set(i, coeff(i).conj());
    return r;
  }

  /// Declares the coefficient field (rational series may be promoted).
  QSeries in(const Field& f) const {
    if (same_field(field_, f)) return *this;
    if (!is_rational()) throw std::invalid_argument("mismatched descriptors");
    QSeries r(*this);
    r.field_ = f;
    r.b_.clear();
    return r;
  }

  QSeries& operator+=(const QSeries& o) { return combine(o, 1); }
  QSeries& operator-=(const QSeries& o) { return combine(o, -1); }
  friend QSeries operator+(QSeries x, const QSeries& y) { return x += y; }
  friend QSeries operator-(QSeries x, const QSeries& y) { return x -= y; }
  QSeries operator-() const { return scaled(FieldElement(-1)); }

  QSeries scaled(const FieldElement& c) const {
    if (c.is_rational() && (b_.empty() || is_rational())) {
      QSeries r(*this);
      r.b_.clear();
      if (c.field() && !r.field_) r.field_ = c.field();
      for (auto& x : r.a_) x *= c.a();
      return r;
    }
    QSeries r(prec_, field_ ? field_ : c.field());
    for (int i = 0; i <= prec_; ++i) r.set(i, coeff(i) * c);
    return r;
  }
  friend QSeries operator*(const FieldElement& c, const QSeries& f) { return f.scaled(c); }
  friend QSeries operator*(const Rational& c, const QSeries& f) { return f.scaled(FieldElement(c)); }
  friend QSeries operator*(long c, const QSeries& f) { return f.scaled(FieldElement(c)); }

  /// Coefficientwise equality on 0..min(prec) (precisions may differ).
  bool agrees_with(const QSeries& o) const {
    const int p = std::min(prec_, o.prec_);
    for (int i = 0; i <= p; ++i)
      if (coeff(i) != o.coeff(i)) return false;
    return true;
  }
  friend bool operator==(const QSeries& x, const QSeries& y) { return x.prec_ == y.prec_ && x.agrees_with(y); }

  /// "c0 + c1*q + ... + cQ*q^Q (prec Q, field F)"
  std::string str() const {
    std::string s;
    for (int i = 0; i <= prec_; ++i) {
      if (i) s += " + ";
      const FieldElement c = coeff(i);
      std::string cs = c.is_rational() ? to_string(c.a()) : "(" + to_string(c.a()) + "+" + to_string(c.b()) + "*t)";
      s += cs;
      if (i == 1) s += "*q";
      if (i > 1) s += "*q^" + std::to_string(i);
    }
    return s + " (prec " + std::to_string(prec_) + ", field " + field_name(field_) + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const QSeries& x) { return os << x.str(); }

 private:
  void check(int n) const {
    if (n < 0 || n > prec_)
      throw std::out_of_range("coefficient " + std::to_string(n) + " beyond precision " + std::to_string(prec_));
  }

  QSeries& combine(const QSeries& o, int sign) {
    const int p = std::min(prec_, o.prec_);
    if (p < prec_) *this = truncate(p);
    if (o.field_ && !o.b_.empty()) {
      if (!field_) field_ = o.field_;
      else if (!same_field(field_, o.field_)) throw std::invalid_argument("mismatched descriptors");
      if (b_.empty()) b_.assign(a_.size(), Rational(0));
    } else if (o.field_ && !field_) {
      field_ = o.field_;
    }
    for (int i = 0; i <= p; ++i) {
      auto idx = static_cast<std::size_t>(i);
      if (sign > 0) a_[idx] += o.a_[idx];
      else a_[idx] -= o.a_[idx];
      if (!o.b_.empty()) {
        if (sign > 0) b_[idx] += o.b_[idx];
        else b_[idx] -= o.b_[idx];
      }
    }
    return *this;
  }

  friend QSeries mul(const QSeries& f, const QSeries& g);

  Field field_;
  int prec_ = 0;
  std::vector<Rational> a_{Rational(0)};
  std::vector<Rational> b_;  // empty when every coefficient is rational
};

inline QSeries one(int prec) { return QSeries::constant(FieldElement(1), prec); }

/// Monomial c q^e.
inline QSeries monomial(const FieldElement& c, int e, int prec) {
  QSeries r(prec, c.field());
  if (e <= prec) r.set(e, c);
  return r;
}

inline QSeries mul(const QSeries& f, const QSeries& g) {
  const int p = std::min(f.prec_, g.prec_);
  Field field;
  if (f.field_ && g.field_ && !same_field(f.field_, g.field_)) {
    if (!f.is_rational() && !g.is_rational()) throw std::invalid_argument("mismatched descriptors");
    field = f.is_rational() ? g.field_ : f.field_;
  } else {
    field = f.field_ ? f.field_ : g.field_;
  }
  const bool fr = f.b_.empty() || f.is_rational();
  const bool gr = g.b_.empty() || g.is_rational();
  if (fr && gr) return QSeries::from_rationals(detail::rat_mul(f.a_, g.a_, p), field);
  const std::vector<Rational> zero(static_cast<std::size_t>(p) + 1, Rational(0));
  const std::vector<Rational>& fb = fr ? zero : f.b_;
  const std::vector<Rational>& gb = gr ? zero : g.b_;
  // (fa + fb t)(ga + gb t) with t^2 = P t + Q
  std::vector<Rational> aa = detail::rat_mul(f.a_, g.a_, p);
  std::vector<Rational> ab = fr ? zero : detail::rat_mul(fb, g.a_, p);
  std::vector<Rational> ba = gr ? zero : detail::rat_mul(f.a_, gb, p);
  std::vector<Rational> bb = (fr || gr) ? zero : detail::rat_mul(fb, gb, p);
  QSeries r = QSeries::from_rationals(std::move(aa), field);
  r.b_.assign(static_cast<std::size_t>(p) + 1, Rational(0));
  for (int i = 0; i <= p; ++i) {
    auto idx = static_cast<std::size_t>(i);
    r.a_[idx] += bb[idx] * field->q;
    r.b_[idx] = ab[idx] + ba[idx] + bb[idx] * field->p;
  }
  return r;
}

inline QSeries operator*(const QSeries& f, const QSeries& g) { return mul(f, g); }

/// f(z) -> f(dz); precision grows to prec*d.
inline QSeries rescale(const QSeries& f, int d) {
  if (d < 1) throw std::invalid_argument("rescale by a non-positive factor");
  QSeries r(f.prec() * d, f.field());
  for (int i = 0; i <= f.prec(); ++i) r.set(i * d, f.coeff(i));
  return r;
}

/// (q d/dq)^i
inline QSeries derive(const QSeries& f, int i = 1) {
  if (i < 0) throw std::invalid_argument("negative derivative order");
  QSeries r(f.prec(), f.field());
  for (int n = 0; n <= f.prec(); ++n) {
    Integer w;
    mpz_ui_pow_ui(w.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(i));
    r.set(n, f.coeff(n) * FieldElement(Rational(w)));
  }
  return r;
}

inline QSeries power(const QSeries& f, int m) {
  if (m < 0) throw std::invalid_argument("negative power");
  QSeries r = one(f.prec());
  QSeries base = f;
  while (m) {
    if (m & 1) r = mul(r, base);
    m >>= 1;
    if (m) base = mul(base, base);
  }
  return r;
}

/// g with g^n = f, for f = q^v (1 + ...) and n | v. Precision P - v + v/n.
inline QSeries root(const QSeries& f, int n) {
  if (n <= 0) throw std::invalid_argument("root of order " + std::to_string(n));
  if (n == 1) return f;
  const int v = f.valuation();
  if (v < 0) throw std::domain_error("root of the zero series");
  if (f.coeff(v) != FieldElement(1)) throw std::domain_error("root: leading coefficient is not 1");
  if (v % n != 0) throw std::domain_error("root: valuation not divisible by the order");
  const int m = f.prec() - v;
  const Rational alpha(1, n);
  std::vector<FieldElement> h(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) h[static_cast<std::size_t>(j)] = f.coeff(v + j);
  std::vector<FieldElement> g(static_cast<std::size_t>(m) + 1, FieldElement(0));
  g[0] = FieldElement(1);
  for (int k = 1; k <= m; ++k) {
    FieldElement s(0);
    for (int j = 1; j <= k; ++j) {
      const FieldElement& hj = h[static_cast<std::size_t>(j)];
      if (hj.is_zero()) continue;
      s += FieldElement(alpha * j - (k - j)) * hj * g[static_cast<std::size_t>(k - j)];
    }
    g[static_cast<std::size_t>(k)] = s / FieldElement(k);
  }
  const int shift = v / n;
  QSeries r(m + shift, f.field());
  for (int k = 0; k <= m; ++k) r.set(k + shift, g[static_cast<std::size_t>(k)]);
  return r;
}

struct EtaFactor {
  int d;
  int r;
};

/// Leading exponent sum d r / 24 of an eta quotient; throws when fractional.
inline int eta_order(const std::vector<EtaFactor>& spec) {
  long s = 0;
  for (const auto& [d, r] : spec) {
    if (d < 1) throw std::invalid_argument("eta quotient with non-positive d");
    s += static_cast<long>(d) * r;
  }
  if (s % 24 != 0) throw std::domain_error("eta quotient has fractional leading exponent");
  if (s < 0) throw std::domain_error("eta quotient has negative leading exponent");
  return static_cast<int>(s / 24);
}

/// prod eta(d z)^r expanded to precision prec.
inline QSeries eta_quotient(const std::vector<EtaFactor>& spec, int prec) {
  const int v = eta_order(spec);
  if (v > prec) return QSeries(prec);
  const int m = prec - v;
  const IntSeries e = detail::euler_product(m);
  IntSeries acc(static_cast<std::size_t>(m) + 1, 0);
  acc[0] = 1;
  for (const auto& [d, r] : spec) {
    if (r == 0) continue;
    IntSeries ed(static_cast<std::size_t>(m) + 1, 0);
    for (int i = 0; i * d <= m; ++i) ed[static_cast<std::size_t>(i * d)] = e[static_cast<std::size_t>(i)];
    if (r < 0) ed = detail::int_inverse(ed, m);
    acc = detail::int_mul(acc, detail::int_pow(ed, static_cast<unsigned>(r < 0 ? -r : r), m), m);
  }
  IntSeries out(static_cast<std::size_t>(prec) + 1, 0);
  for (int i = 0; i <= m; ++i) out[static_cast<std::size_t>(i + v)] = acc[static_cast<std::size_t>(i)];
  return QSeries::from_integers(out);
}

/// T_p on weight k, level N. Precision floor(P/p).
inline QSeries hecke(const QSeries& f, int p, int k, int N) {
  const int prec = f.prec() / p;
  QSeries r(prec, f.field());
  const bool coprime = N % p != 0;
  Integer pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k - 1));
  const FieldElement w{Rational(pk)};
  for (int n = 0; n <= prec; ++n) {
    FieldElement c = f.coeff(p * n);
    if (coprime && n % p == 0) c += w * f.coeff(n / p);
    r.set(n, c);
  }
  return r;
}

/// [f, g]_1 = k_f f Dg - k_g (Df) g
inline QSeries rc_bracket1(const QSeries& f, int kf, const QSeries& g, int kg) {
  return kf * mul(f, derive(g)) - kg * mul(derive(f), g);
}

}  // namespace qmf
