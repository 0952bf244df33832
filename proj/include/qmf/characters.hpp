#pragma once

// Real Dirichlet characters, generalized Bernoulli numbers, twisted divisor
// sums and the twist operator on q-expansions.

#include <qmf/exactnum.hpp>
#include <qmf/qseries.hpp>

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmf {

class DirichletCharacter {
 public:
  enum class Kind { Trivial, Principal, Quadratic };

  static DirichletCharacter trivial() { return DirichletCharacter(Kind::Trivial, 1, {1}, "one"); }

  static DirichletCharacter principal(int n) {
    if (n < 1) throw std::invalid_argument("principal character of modulus " + std::to_string(n));
    if (n == 1) return trivial();
    std::vector<int> v(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) v[static_cast<std::size_t>(c)] = std::gcd(c, n) == 1 ? 1 : 0;
    return DirichletCharacter(Kind::Principal, n, std::move(v), "chi0_" + std::to_string(n));
  }

  /// Legendre symbol modulo an odd prime.
  static DirichletCharacter quadratic(int m) {
    if (m < 3 || m % 2 == 0) throw std::invalid_argument("unsupported modulus " + std::to_string(m));
    for (int d = 3; d * d <= m; d += 2)
      if (m % d == 0) throw std::invalid_argument("unsupported modulus " + std::to_string(m));
    std::vector<int> v(static_cast<std::size_t>(m), -1);
    v[0] = 0;
    for (int x = 1; x < m; ++x) v[static_cast<std::size_t>((x * x) % m)] = 1;
    return DirichletCharacter(Kind::Quadratic, m, std::move(v), "chi" + std::to_string(m));
  }

  /// "one", "chi<p>" or "chi0_<N>".
  static DirichletCharacter parse(const std::string& name) {
    if (name == "one" || name == "1") return trivial();
    if (name.rfind("chi0_", 0) == 0) return principal(std::stoi(name.substr(5)));
    if (name.rfind("chi", 0) == 0 && name.size() > 3) return quadratic(std::stoi(name.substr(3)));
    throw std::invalid_argument("unknown character " + name);
  }

  Kind kind() const { return kind_; }
  int modulus() const { return modulus_; }
  const std::string& name() const { return name_; }
  const std::vector<int>& values() const { return values_; }
  bool is_trivial() const { return kind_ == Kind::Trivial; }
  bool primitive() const { return kind_ != Kind::Principal; }
  int parity() const { return (*this)(-1); }

  int operator()(long n) const {
    long r = n % modulus_;
    if (r < 0) r += modulus_;
    return values_[static_cast<std::size_t>(r)];
  }

  friend bool operator==(const DirichletCharacter& x, const DirichletCharacter& y) {
    return x.modulus_ == y.modulus_ && x.values_ == y.values_;
  }

  /// Pointwise product (values are real, so this stays in the family).
  DirichletCharacter operator*(const DirichletCharacter& o) const {
    const int m = std::lcm(modulus_, o.modulus_);
    std::vector<int> v(static_cast<std::size_t>(m));
    bool all_units = true;
    for (int c = 0; c < m; ++c) {
      v[static_cast<std::size_t>(c)] = (*this)(c) * o(c);
      if (std::gcd(c, m) == 1 && v[static_cast<std::size_t>(c)] != 1) all_units = false;
    }
    if (all_units) return principal(m);
    return DirichletCharacter(Kind::Quadratic, m, std::move(v), name_ + "*" + o.name_);
  }

  /// {"modulus": M, "values": [...]}
  std::string json() const {
    std::string s = "{\"modulus\":" + std::to_string(modulus_) + ",\"values\":[";
    for (std::size_t i = 0; i < values_.size(); ++i) s += (i ? "," : "") + std::to_string(values_[i]);
    return s + "]}";
  }

 private:
  DirichletCharacter(Kind k, int m, std::vector<int> v, std::string name)
      : kind_(k), modulus_(m), values_(std::move(v)), name_(std::move(name)) {}

  Kind kind_;
  int modulus_;
  std::vector<int> values_;
  std::string name_;
};

inline DirichletCharacter make_character(const std::string& name) { return DirichletCharacter::parse(name); }

/// B_k^phi from sum_{c=0}^{M-1} phi(c) t e^{ct}/(e^{Mt}-1), by exact series division.
inline Rational gen_bernoulli(const DirichletCharacter& phi, int k) {
  if (k < 0) throw std::invalid_argument("negative Bernoulli index");
  const int M = phi.modulus();
  const int n = k + 1;
  // (e^{Mt}-1)/t = sum_j M^{j+1} t^j/(j+1)!
  std::vector<Rational> den(static_cast<std::size_t>(n));
  Integer fact = 1;
  Integer mp = M;
  for (int j = 0; j < n; ++j) {
    fact *= j + 1;
    den[static_cast<std::size_t>(j)] = Rational(mp, fact);
    den[static_cast<std::size_t>(j)].canonicalize();
    mp *= M;
  }
  std::vector<Rational> inv(static_cast<std::size_t>(n));
  inv[0] = 1 / den[0];
  for (int i = 1; i < n; ++i) {
    Rational s = 0;
    for (int j = 1; j <= i; ++j) s += den[static_cast<std::size_t>(j)] * inv[static_cast<std::size_t>(i - j)];
    inv[static_cast<std::size_t>(i)] = -s / den[0];
  }
  // sum_c phi(c) e^{ct}
  std::vector<Rational> num(static_cast<std::size_t>(n), Rational(0));
  for (int c = 0; c < M; ++c) {
    const int v = phi(c);
    if (v == 0) continue;
    Integer cp = 1;
    Integer f = 1;
    for (int j = 0; j < n; ++j) {
      if (j > 0) {
        cp *= c;
        f *= j;
      }
      Rational term(cp * v, f);
      term.canonicalize();
      num[static_cast<std::size_t>(j)] += term;
    }
  }
  Rational coeff = 0;
  for (int j = 0; j <= k; ++j) coeff += num[static_cast<std::size_t>(j)] * inv[static_cast<std::size_t>(k - j)];
  Integer kf = 1;
  for (int j = 2; j <= k; ++j) kf *= j;
  return coeff * Rational(kf);
}

/// sum_{d | n} psi(n/d) phi(d) d^k; zero for n <= 0.
inline Integer sigma_twisted(const DirichletCharacter& psi, const DirichletCharacter& phi, int k, long n) {
  if (n <= 0) return 0;
  Integer s = 0;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    const long e = n / d;
    for (long x : {d, e}) {
      const int c = psi(n / x) * phi(x);
      if (c != 0) {
        Integer p;
        mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(x), static_cast<unsigned long>(k));
        if (c > 0) s += p;
        else s -= p;
      }
      if (d == e) break;
    }
  }
  return s;
}

/// Coefficientwise twist f (x) chi.
inline QSeries twist(const QSeries& f, const DirichletCharacter& chi) {
  QSeries r(f.prec(), f.field());
  for (int n = 0; n <= f.prec(); ++n) {
    const int c = chi(n);
    if (c == 0) continue;
    r.set(n, c > 0 ? f.coeff(n) : -f.coeff(n));
  }
  return r;
}

}  // namespace qmf
