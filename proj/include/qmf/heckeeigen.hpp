#pragma once

// Newform bases of cusp spaces, by Hecke eigen-decomposition and by solving
// the multiplicativity constraints on the coefficients.

#include <qmf/forms.hpp>
#include <qmf/linalg.hpp>
#include <qmf/mpoly.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmf {

struct Newform {
  std::string label;
  int weight = 0;
  int level = 0;
  Field field;  // nullptr: rational coefficients
  QSeries expansion{0};
  std::map<long, FieldElement> ap_cache;

  int prec() const { return expansion.prec(); }
};

class HeckeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<std::pair<long, int>> factor_int(long n) {
  std::vector<std::pair<long, int>> f;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

inline FieldElement prime_power_term(long p, int k, int N) {
  if (N % p == 0) return FieldElement(0);
  Integer v;
  mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k - 1));
  return FieldElement(Rational(v));
}

}  // namespace detail

/// a_p for a prime p, cached.
inline FieldElement prime_coefficient(Newform& nf, long p) {
  auto it = nf.ap_cache.find(p);
  if (it != nf.ap_cache.end()) return it->second;
  if (p > nf.prec())
    throw std::out_of_range("coefficient at prime " + std::to_string(p) + " beyond stored precision " +
                            std::to_string(nf.prec()));
  const FieldElement v = nf.expansion.coeff(static_cast<int>(p));
  nf.ap_cache[p] = v;
  return v;
}

/// a_n, read from the expansion or extended through the Hecke relations.
inline FieldElement coefficient(Newform& nf, long n) {
  if (n < 1) throw std::invalid_argument("coefficient index must be positive");
  if (n <= nf.prec()) return nf.expansion.coeff(static_cast<int>(n));
  FieldElement r(1);
  for (const auto& [p, e] : detail::factor_int(n)) {
    long pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    if (pe <= nf.prec()) {
      r *= nf.expansion.coeff(static_cast<int>(pe));
      continue;
    }
    const FieldElement ap = prime_coefficient(nf, p);
    const FieldElement c = detail::prime_power_term(p, nf.weight, nf.level);
    FieldElement prev(1), cur = ap;
    for (int i = 1; i < e; ++i) {
      FieldElement next = ap * cur - c * prev;
      prev = cur;
      cur = next;
    }
    r *= cur;
  }
  return r;
}

inline FieldElement coefficient(const Newform& nf, long n) {
  Newform copy = nf;
  return coefficient(copy, n);
}

/// Checks a_m a_n = sum_{d | (m,n)} [d coprime to N] d^{k-1} a_{mn/d^2} for all
/// m n <= bound; returns the first failing (m, n) or (0, 0).
inline std::pair<int, int> check_hecke_relations(const Newform& nf, int bound) {
  const QSeries& f = nf.expansion;
  bound = std::min(bound, f.prec());
  for (int m = 1; m <= bound; ++m)
    for (int n = m; m * n <= bound; ++n) {
      FieldElement rhs(0);
      for (int d = 1; d <= std::min(m, n); ++d) {
        if (m % d != 0 || n % d != 0 || std::gcd(d, nf.level) != 1) continue;
        Integer w;
        mpz_ui_pow_ui(w.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(nf.weight - 1));
        rhs += FieldElement(Rational(w)) * f.coeff(m * n / (d * d));
      }
      if (!(f.coeff(m) * f.coeff(n) == rhs)) return {m, n};
    }
  return {0, 0};
}

/// Matrix of T_p (U_p when p | N) on the echelon basis, column j holding the
/// coordinates of T_p applied to element j.
inline Matrix<FieldElement> hecke_matrix(const SpaceBasis& basis, int p) {
  if (!is_prime(p)) throw std::invalid_argument("hecke_matrix: p must be prime");
  const int n = basis.dimension();
  Matrix<FieldElement> m(n, n);
  if (n == 0) return m;
  const int need = basis.pivots.back();
  if (basis.prec / p < need)
    throw std::out_of_range("hecke_matrix: precision " + std::to_string(basis.prec) + " too small for T_" +
                            std::to_string(p));
  const SeriesEchelon ech = basis.echelon();
  for (int j = 0; j < n; ++j) {
    const QSeries img = hecke(basis.elements[static_cast<std::size_t>(j)].second, p, basis.weight, basis.level);
    const auto c = ech.coordinates(img);
    if (!c) throw HeckeError("space is not stable under T_" + std::to_string(p));
    for (int i = 0; i < n; ++i) m(i, j) = (*c)[static_cast<std::size_t>(i)];
  }
  return m;
}

namespace detail {

// Rational column-basis helpers: a subspace is a list of coordinate vectors.
using RVec = std::vector<Rational>;

inline Matrix<Rational> columns(const std::vector<RVec>& vs, int n) {
  Matrix<Rational> m(n, static_cast<int>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j)
    for (int i = 0; i < n; ++i) m(i, static_cast<int>(j)) = vs[j][static_cast<std::size_t>(i)];
  return m;
}

inline Matrix<Rational> poly_at(const PolyQ& f, const Matrix<Rational>& a) {
  const int n = a.rows();
  Matrix<Rational> r(n, n);
  for (int i = f.degree(); i >= 0; --i) {
    r = r * a;
    for (int d = 0; d < n; ++d) r(d, d) += f.coeff(i);
  }
  return r;
}

/// Restriction of T to the T-stable span of the columns of B.
inline Matrix<Rational> restrict_to(const Matrix<Rational>& T, const Matrix<Rational>& B) {
  const Matrix<Rational> TB = T * B;
  const int d = B.cols();
  Matrix<Rational> r(d, d);
  for (int j = 0; j < d; ++j) {
    std::vector<Rational> col(static_cast<std::size_t>(B.rows()));
    for (int i = 0; i < B.rows(); ++i) col[static_cast<std::size_t>(i)] = TB(i, j);
    const auto x = solve(B, col);
    for (int i = 0; i < d; ++i) r(i, j) = x[static_cast<std::size_t>(i)];
  }
  return r;
}

inline bool contained_in(const Matrix<Rational>& B, const Matrix<Rational>& span, int span_rank) {
  if (span.cols() == 0) return false;
  Matrix<Rational> both(B.rows(), B.cols() + span.cols());
  for (int i = 0; i < B.rows(); ++i) {
    for (int j = 0; j < span.cols(); ++j) both(i, j) = span(i, j);
    for (int j = 0; j < B.cols(); ++j) both(i, span.cols() + j) = B(i, j);
  }
  return rank(both) == span_rank;
}

inline std::vector<RVec> image_columns(const Matrix<Rational>& B, const std::vector<RVec>& sub) {
  std::vector<RVec> out;
  for (const auto& v : sub) {
    RVec w(static_cast<std::size_t>(B.rows()), Rational(0));
    for (int i = 0; i < B.rows(); ++i)
      for (int j = 0; j < B.cols(); ++j) w[static_cast<std::size_t>(i)] += B(i, j) * v[static_cast<std::size_t>(j)];
    out.push_back(std::move(w));
  }
  return out;
}

inline QSeries normalized_eigenform(const SpaceBasis& space, const std::vector<FieldElement>& coords) {
  QSeries s(space.prec);
  for (int i = 0; i < space.dimension(); ++i)
    if (!coords[static_cast<std::size_t>(i)].is_zero())
      s += space.elements[static_cast<std::size_t>(i)].second.scaled(coords[static_cast<std::size_t>(i)]);
  const FieldElement a1 = s.coeff(1);
  if (a1.is_zero()) throw HeckeError("eigenform with vanishing first coefficient");
  return s.scaled(FieldElement(1) / a1);
}

inline int first_negative_b(const QSeries& s) {
  for (int n = 1; n <= s.prec(); ++n) {
    const Rational b = s.b(n);
    if (sgn(b) != 0) return sgn(b);
  }
  return 0;
}

}  // namespace detail

/// Orders newforms and assigns labels k.N.i: rational forms by descending
/// (a_2, a_3, ...), then each conjugate pair with the member whose first
/// irrational coefficient has negative generator part first. A lone newform
/// is labelled k.N.
inline void label_newforms(std::vector<Newform>& forms) {
  std::vector<Newform> rat, quad;
  for (auto& f : forms) (f.field ? quad : rat).push_back(std::move(f));
  std::stable_sort(rat.begin(), rat.end(), [](const Newform& x, const Newform& y) {
    for (int n = 2; n <= std::min(x.prec(), y.prec()); ++n) {
      const Rational a = x.expansion.rat(n), b = y.expansion.rat(n);
      if (a != b) return a > b;
    }
    return false;
  });
  std::stable_sort(quad.begin(), quad.end(), [](const Newform& x, const Newform& y) {
    const auto kx = std::make_pair(x.field->p, x.field->q);
    const auto ky = std::make_pair(y.field->p, y.field->q);
    if (kx != ky) return kx < ky;
    return detail::first_negative_b(x.expansion) < detail::first_negative_b(y.expansion);
  });
  forms.clear();
  for (auto& f : rat) forms.push_back(std::move(f));
  for (auto& f : quad) forms.push_back(std::move(f));
  for (std::size_t i = 0; i < forms.size(); ++i) {
    std::string base = std::to_string(forms[i].weight) + "." + std::to_string(forms[i].level);
    forms[i].label = forms.size() == 1 ? base : base + "." + std::to_string(i + 1);
  }
}

/// Splits the cusp space into Hecke eigenspaces with T_2, T_3, ..., T_13 and
/// returns the eigenforms outside old_span, normalized and labelled.
inline std::vector<Newform> extract_newforms(const SpaceBasis& space, const std::vector<QSeries>& old_span) {
  using detail::RVec;
  const int n = space.dimension();
  std::vector<Newform> out;
  if (n == 0) return out;
  const SeriesEchelon ech = space.echelon();
  std::vector<RVec> old_cols;
  for (const auto& s : old_span) {
    const auto c = ech.coordinates(s);
    if (!c) throw HeckeError("old form outside the cusp space");
    RVec v;
    for (const auto& x : *c) v.push_back(x.rational());
    old_cols.push_back(std::move(v));
  }
  const Matrix<Rational> old = detail::columns(old_cols, n);
  const int old_rank = rank(old);

  struct Block {
    std::vector<RVec> basis;
  };
  std::vector<Block> pending;
  {
    std::vector<RVec> id;
    for (int i = 0; i < n; ++i) {
      RVec v(static_cast<std::size_t>(n), Rational(0));
      v[static_cast<std::size_t>(i)] = 1;
      id.push_back(std::move(v));
    }
    pending.push_back({std::move(id)});
  }

  auto finish_rational = [&](const RVec& v) {
    std::vector<FieldElement> c;
    for (const auto& x : v) c.emplace_back(x);
    Newform nf;
    nf.weight = space.weight;
    nf.level = space.level;
    nf.expansion = detail::normalized_eigenform(space, c);
    out.push_back(std::move(nf));
  };
  auto finish_quadratic = [&](const Matrix<Rational>& B, const Matrix<Rational>& M, const Field& K) {
    const FieldElement t = FieldElement::generator(K);
    Matrix<FieldElement> shifted = field_matrix(M);
    for (int i = 0; i < M.rows(); ++i) shifted(i, i) -= t;
    const auto ker = kernel(shifted);
    if (ker.size() != 1) throw HeckeError("unexpected eigenspace dimension over a quadratic field");
    std::vector<FieldElement> c(static_cast<std::size_t>(n), FieldElement(0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < B.cols(); ++j) c[static_cast<std::size_t>(i)] += FieldElement(B(i, j)) * ker[0][static_cast<std::size_t>(j)].in(K);
    Newform a;
    a.weight = space.weight;
    a.level = space.level;
    a.field = K;
    a.expansion = detail::normalized_eigenform(space, c);
    Newform b = a;
    b.expansion = a.expansion.conj();
    out.push_back(std::move(a));
    out.push_back(std::move(b));
  };

  for (int p = 2; p <= 13 && !pending.empty(); ++p) {
    if (!is_prime(p)) continue;
    const Matrix<Rational> T = rational_matrix(hecke_matrix(space, p));
    std::vector<Block> next;
    for (const Block& blk : pending) {
      const Matrix<Rational> B = detail::columns(blk.basis, n);
      if (detail::contained_in(B, old, old_rank)) continue;
      if (blk.basis.size() == 1) {
        finish_rational(blk.basis[0]);
        continue;
      }
      const Matrix<Rational> M = detail::restrict_to(T, B);
      const Factorization f = factor_small(charpoly(M));
      for (const auto& [lambda, mult] : f.roots) {
        Matrix<Rational> S = M;
        for (int i = 0; i < S.rows(); ++i) S(i, i) -= lambda;
        Matrix<Rational> P = S;
        for (int e = 1; e < mult; ++e) P = P * S;
        next.push_back({detail::image_columns(B, kernel(P))});
      }
      for (const auto& q : f.quadratics) {
        PolyQ g({-q.descriptor->q, -q.descriptor->p, Rational(1)});
        Matrix<Rational> G = detail::poly_at(g, M);
        Matrix<Rational> P = G;
        for (int e = 1; e < q.multiplicity; ++e) P = P * G;
        const std::vector<RVec> sub = detail::image_columns(B, kernel(P));
        const Matrix<Rational> SB = detail::columns(sub, n);
        if (detail::contained_in(SB, old, old_rank)) continue;
        if (!q.totally_real)
          throw HeckeError("non-real eigenvalue field outside the old space: X^2 - (" + to_string(q.descriptor->p) +
                           ")X - (" + to_string(q.descriptor->q) + ")");
        if (sub.size() == 2) finish_quadratic(SB, detail::restrict_to(T, SB), q.descriptor);
        else next.push_back({sub});
      }
    }
    pending = std::move(next);
  }
  for (const Block& blk : pending) {
    const Matrix<Rational> B = detail::columns(blk.basis, n);
    if (detail::contained_in(B, old, old_rank)) continue;
    if (blk.basis.size() == 1) {
      finish_rational(blk.basis[0]);
      continue;
    }
    throw HeckeError("eigenspace does not split with primes up to 13");
  }
  label_newforms(out);
  return out;
}

/// Normalized eigenforms f = V_1 + sum x_i V_i in the cusp space whose
/// coefficients satisfy the Hecke recursions at composite indices. Branches
/// with non-real coefficients are dropped.
inline std::vector<Newform> multiplicativity_solve(const SpaceBasis& space, int weight, int level,
                                                   std::vector<std::string>* rejected = nullptr) {
  const int dim = space.dimension();
  if (dim == 0) return {};
  if (dim > 5) throw std::invalid_argument("multiplicativity_solve supports dimension at most 5");
  if (space.pivots.front() != 1) throw HeckeError("cusp space has no form with nonzero q coefficient");
  const int nv = dim - 1;
  const int nmax = std::min(space.prec, 64);
  // linear coefficient forms a_n = c_n + sum x_i d_{n,i}
  std::vector<MPoly> a(static_cast<std::size_t>(nmax) + 1, MPoly(nv));
  for (int m = 1; m <= nmax; ++m) {
    MPoly e = MPoly::constant(nv, space.elements[0].second.coeff(m));
    for (int i = 1; i < dim; ++i) {
      const FieldElement c = space.elements[static_cast<std::size_t>(i)].second.coeff(m);
      if (!c.is_zero()) e += c * MPoly::var(nv, i - 1);
    }
    a[static_cast<std::size_t>(m)] = e;
  }
  std::vector<MPoly> eqs;
  for (int m = 4; m <= nmax; ++m) {
    const auto f = detail::factor_int(m);
    if (f.size() == 1 && f[0].second == 1) continue;
    if (f.size() > 1) {
      long pe = 1;
      for (int i = 0; i < f[0].second; ++i) pe *= f[0].first;
      const long rest = m / pe;
      eqs.push_back(a[static_cast<std::size_t>(m)] - a[static_cast<std::size_t>(pe)] * a[static_cast<std::size_t>(rest)]);
    } else {
      const long p = f[0].first;
      const FieldElement c = detail::prime_power_term(p, weight, level);
      MPoly rhs = a[static_cast<std::size_t>(p)] * a[static_cast<std::size_t>(m / p)];
      if (!c.is_zero()) rhs -= c * a[static_cast<std::size_t>(m / p / p)];
      eqs.push_back(a[static_cast<std::size_t>(m)] - rhs);
    }
  }
  PolySystemSolver solver(nv);
  const SolveResult res = solver.solve(eqs);
  if (res.underdetermined) throw HeckeError("multiplicativity constraints leave free parameters");
  if (rejected) *rejected = res.rejected;
  std::vector<Newform> out;
  std::set<std::string> fields_seen;
  for (const auto& sol : res.solutions) {
    std::vector<FieldElement> c{FieldElement(1)};
    c.insert(c.end(), sol.begin(), sol.end());
    const Field K = common_field(c);
    if (K && !K->totally_real()) {
      if (rejected) rejected->push_back("solution over " + field_name(K));
      continue;
    }
    Newform nf;
    nf.weight = weight;
    nf.level = level;
    nf.field = K;
    nf.expansion = detail::normalized_eigenform(space, c);
    out.push_back(std::move(nf));
  }
  if (out.empty() && res.rejected.empty()) throw HeckeError("multiplicativity constraints are inconsistent");
  label_newforms(out);
  return out;
}

/// Newforms of every supported space, extracted in order of increasing
/// weight and level so that lower-level forms supply the old spaces.
class NewformRegistry {
 public:
  static constexpr int kDefaultPrec = 512;

  explicit NewformRegistry(int prec = kDefaultPrec) : ctx_(std::make_unique<FormContext>(prec)) {
    for (const auto& [k, N] : spaces()) build(k, N);
  }

  static const NewformRegistry& shared() {
    static const NewformRegistry r;
    return r;
  }

  static const std::vector<std::pair<int, int>>& spaces() {
    static const std::vector<std::pair<int, int>> s{{2, 11}, {2, 14}, {4, 5},  {4, 6},  {4, 7}, {4, 8},
                                                   {4, 9},  {4, 10}, {4, 11}, {4, 13}, {4, 14}, {6, 5},
                                                   {6, 10}, {8, 2},  {8, 5},  {12, 1}};
    return s;
  }

  int prec() const { return ctx_->prec(); }
  const std::vector<Newform>& all() const { return forms_; }
  FormContext& context() const { return *ctx_; }

  const Newform& get(const std::string& label) const {
    for (const auto& f : forms_)
      if (f.label == label) return f;
    if (label.size() > 2 && label.compare(label.size() - 2, 2, ".1") == 0) return get(label.substr(0, label.size() - 2));
    throw std::out_of_range("unknown newform label " + label);
  }
  std::vector<const Newform*> at(int k, int N) const {
    std::vector<const Newform*> v;
    for (const auto& f : forms_)
      if (f.weight == k && f.level == N) v.push_back(&f);
    return v;
  }
  /// Rescaled lower-level newforms of the same weight.
  std::vector<QSeries> old_span(int k, int N) const {
    std::vector<QSeries> v;
    for (const auto& f : forms_) {
      if (f.weight != k || f.level == N || N % f.level != 0) continue;
      const int m = N / f.level;
      for (int d = 1; d <= m; ++d)
        if (m % d == 0) v.push_back(detail::rescale_to(f.expansion, d, ctx_->prec()));
    }
    return v;
  }

 private:
  void build(int k, int N) {
    const SpaceBasis cusp = ctx_->space(k, N, true);
    std::vector<Newform> found = extract_newforms(cusp, old_span(k, N));
    for (auto& f : found) {
      ctx_->register_newform(f.label, f.weight, f.level, f.expansion);
      forms_.push_back(std::move(f));
    }
  }

  std::unique_ptr<FormContext> ctx_;
  std::vector<Newform> forms_;
};

}  // namespace qmf
