#pragma once

// Evaluation of form expressions, the catalog of named forms, the dimension
// table, and echelonized bases of M_k(Gamma_0(N)) and its cuspidal subspace.

#include <qmf/characters.hpp>
#include <qmf/echelon.hpp>
#include <qmf/formexpr.hpp>
#include <qmf/linalg.hpp>
#include <qmf/qseries.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qmf {

// ---------------------------------------------------------------------------
// Eisenstein series

namespace detail {

inline std::vector<Integer> divisor_power_sums(int j, int n_max) {
  std::vector<Integer> s(static_cast<std::size_t>(n_max) + 1, 0);
  for (int d = 1; d <= n_max; ++d) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(j));
    for (int m = d; m <= n_max; m += d) s[static_cast<std::size_t>(m)] += p;
  }
  return s;
}

/// f(z) -> f(dz) known to exactly precision prec.
inline QSeries rescale_to(const QSeries& f, int d, int prec) {
  QSeries r(prec, f.field());
  for (int i = 0; i * d <= prec; ++i) r.set(i * d, f.coeff(i));
  return r;
}

}  // namespace detail

/// E_k(N z) = 1 - (2k/B_k) sum sigma_{k-1}(n) q^{nN}
inline QSeries eisenstein(int k, int N, int prec) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("eisenstein: weight must be even and >= 2");
  if (N < 1) throw std::invalid_argument("eisenstein: level must be positive");
  const Rational c = Rational(-2 * k) / gen_bernoulli(DirichletCharacter::trivial(), k);
  const int m = prec / N;
  const auto s = detail::divisor_power_sums(k - 1, m);
  QSeries r(prec);
  r.set(0, Rational(1));
  for (int n = 1; n <= m; ++n) r.set(n * N, Rational(c * s[static_cast<std::size_t>(n)]));
  return r;
}

inline QSeries eisenstein(int k, int prec) { return eisenstein(k, 1, prec); }

/// Phi_{a,b} = (b E_2(bz) - a E_2(az)) / (b - a)
inline QSeries phi_series(int a, int b, int prec) {
  if (a < 1 || b <= 1 || b % a != 0 || a == b) throw std::invalid_argument("phi(a,b) needs a | b, 1 < b, a != b");
  QSeries r = Rational(b) * eisenstein(2, b, prec) - Rational(a) * eisenstein(2, a, prec);
  return Rational(1, b - a) * r;
}

/// E_{k,t}^{psi,phi}
inline QSeries char_eisenstein(int k, const DirichletCharacter& psi, const DirichletCharacter& phi, int t, int prec) {
  if (psi.parity() * phi.parity() != (k % 2 == 0 ? 1 : -1))
    throw std::invalid_argument("char_eisenstein: parity mismatch");
  if (k == 2 && psi.is_trivial() && phi.is_trivial()) {
    if (t == 1) throw std::invalid_argument("char_eisenstein: (2,1,1,1) is excluded");
    return eisenstein(2, 1, prec) - Rational(t) * eisenstein(2, t, prec);
  }
  const Rational c = Rational(-2 * k) / gen_bernoulli(phi, k);
  QSeries r(prec);
  if (psi.is_trivial()) r.set(0, Rational(1));
  for (int n = 1; n * t <= prec; ++n) r.set(n * t, Rational(c * sigma_twisted(psi, phi, k - 1, n)));
  return r;
}

// ---------------------------------------------------------------------------
// Dimension table

struct SpaceInfo {
  int dim_full = 0;
  int dim_cusp = 0;
  std::vector<std::string> eisenstein;  // Eisenstein subspace generators
  std::vector<std::string> extra;       // additional pool members
};

class DimensionTable {
 public:
  static const DimensionTable& builtin() {
    static const DimensionTable t = make_builtin();
    return t;
  }

  bool contains(int k, int N) const { return entries_.count({k, N}) > 0; }
  const SpaceInfo& at(int k, int N) const {
    auto it = entries_.find({k, N});
    if (it == entries_.end())
      throw std::out_of_range("unsupported (weight, level) = (" + std::to_string(k) + "," + std::to_string(N) + ")");
    return it->second;
  }
  int dimension(int k, int N, bool cuspidal) const {
    const SpaceInfo& s = at(k, N);
    return cuspidal ? s.dim_cusp : s.dim_full;
  }
  void set(int k, int N, SpaceInfo info) { entries_[{k, N}] = std::move(info); }
  const std::map<std::pair<int, int>, SpaceInfo>& entries() const { return entries_; }

 private:
  static std::vector<std::string> eis_divisors(int k, int N) {
    std::vector<std::string> v;
    for (int d = 1; d <= N; ++d)
      if (N % d == 0) v.push_back(d == 1 ? "E(" + std::to_string(k) + ")" : "E(" + std::to_string(k) + "," + std::to_string(d) + ")");
    return v;
  }

  static DimensionTable make_builtin() {
    DimensionTable t;
    const std::map<int, std::vector<std::string>> weight2 = {
        {1, {}},
        {2, {"phi(1,2)"}},
        {3, {"phi(1,3)"}},
        {4, {"phi(1,2)", "phi(1,4)"}},
        {5, {"phi(1,5)"}},
        {6, {"phi(1,2)", "phi(1,3)", "phi(3,6)"}},
        {7, {"phi(1,7)"}},
        {8, {"phi(1,4)", "phi(1,8)", "rescale(phi(1,4),2)"}},
        {9, {"phi(1,3)", "twist(phi(1,3),chi3)", "phi(1,9)"}},
        {10, {"phi(1,10)", "phi(1,5)", "rescale(phi(1,5),2)"}},
        {11, {"phi(1,11)"}},
        {13, {"phi(1,13)"}},
        {14, {"phi(1,7)", "phi(1,14)", "phi(2,14)"}},
    };
    const std::map<std::pair<int, int>, std::pair<int, int>> dims = {
        {{2, 1}, {0, 0}},   {{4, 1}, {1, 0}},   {{6, 1}, {1, 0}},   {{8, 1}, {1, 0}},  {{10, 1}, {1, 0}},
        {{12, 1}, {2, 1}},  {{14, 1}, {1, 0}},  {{2, 2}, {1, 0}},   {{4, 2}, {2, 0}},  {{6, 2}, {2, 0}},
        {{8, 2}, {3, 1}},   {{2, 3}, {1, 0}},   {{4, 3}, {2, 0}},   {{2, 4}, {2, 0}},  {{4, 4}, {3, 0}},
        {{2, 5}, {1, 0}},   {{4, 5}, {3, 1}},   {{6, 5}, {3, 1}},   {{8, 5}, {5, 3}},  {{2, 6}, {3, 0}},
        {{4, 6}, {5, 1}},   {{2, 7}, {1, 0}},   {{4, 7}, {3, 1}},   {{2, 8}, {3, 0}},  {{4, 8}, {5, 1}},
        {{2, 9}, {3, 0}},   {{4, 9}, {5, 1}},   {{2, 10}, {3, 0}},  {{4, 10}, {7, 3}}, {{6, 10}, {9, 5}},
        {{2, 11}, {2, 1}},  {{4, 11}, {4, 2}},  {{2, 13}, {1, 0}},  {{4, 13}, {5, 3}}, {{2, 14}, {4, 1}},
        {{4, 14}, {8, 4}},
    };
    for (const auto& [kn, d] : dims) {
      const auto [k, N] = kn;
      SpaceInfo info;
      info.dim_full = d.first;
      info.dim_cusp = d.second;
      info.eisenstein = k == 2 ? weight2.at(N) : eis_divisors(k, N);
      if (k == 4 && N == 9) info.eisenstein.push_back("twist(E(4),chi3)");
      if (k == 4 && N == 13)
        info.extra = {"phi(1,13)^2", "Ech(2,one,chi13,1)*Ech(2,chi13,one,1)", "Ech(2,one,chi13,1)^2",
                      "Ech(2,chi13,one,1)^2"};
      t.set(k, N, std::move(info));
    }
    return t;
  }

  std::map<std::pair<int, int>, SpaceInfo> entries_;
};

// ---------------------------------------------------------------------------
// Catalog of named forms

struct CatalogEntry {
  std::string label;
  std::string definition;
};

inline const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"Delta", "eta(1^24)"},
      {"Delta_4_5", "eta(1^4*5^4)"},
      {"Delta_4_6", "eta(1^2*2^2*3^2*6^2)"},
      {"Delta_4_7", "root(eta(1^16*7^8)+13*eta(1^12*7^12)+49*eta(1^8*7^16),3)"},
      {"Delta_4_8", "eta(2^4*4^4)"},
      {"Delta_4_9", "eta(3^8)"},
      {"Delta_8_2", "eta(1^8*2^8)"},
      {"Delta_2_11", "eta(1^2*11^2)"},
      {"Delta_2_14", "eta(1*2*7*14)"},
      {"Delta_6_5", "Delta_4_5*phi(1,5)"},
      {"F_4_5_2", "rescale(Delta_4_5,2)"},
      {"F_4_7_2", "rescale(Delta_4_7,2)"},
      {"F_6_5_2", "rescale(Delta_6_5,2)"},
      {"F1_11", "eta(1^4*11^4)"},
      {"F2_11", "hecke(F1_11,2)"},
      {"F_10", "3*Delta_4_5*phi(1,10)"},
      {"F1_10", "Delta_4_5*phi(1,2)"},
      {"F2_10", "hecke(F_10,2)"},
      {"G1", "eta(1^8*5^8)"},
      {"G2", "Delta_4_5*phi(1,5)^2"},
      {"G3", "-1/24*rc1(E(4),phi(1,5))"},
  };
  return entries;
}

// ---------------------------------------------------------------------------
// Space bases

struct SpaceBasis {
  int weight = 0;
  int level = 0;
  bool cuspidal = false;
  int prec = 0;
  /// Independent named members of the generator pool spanning the space.
  std::vector<std::pair<ExprPtr, QSeries>> generators;
  /// Echelonized basis: element i is 1 at pivots[i] and 0 at the other pivots.
  std::vector<std::pair<ExprPtr, QSeries>> elements;
  std::vector<int> pivots;

  int dimension() const { return static_cast<int>(elements.size()); }
  std::vector<QSeries> element_series() const {
    std::vector<QSeries> v;
    for (const auto& [e, s] : elements) v.push_back(s);
    return v;
  }
  SeriesEchelon echelon() const {
    SeriesEchelon ech(prec);
    for (const auto& [e, s] : elements) ech.add(s);
    return ech;
  }
};

struct RegisteredNewform {
  std::string label;
  int weight;
  int level;
  QSeries series;
};

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline int smallest_prime_not_dividing(int N) {
  for (int p = 2;; ++p)
    if (is_prime(p) && N % p != 0) return p;
}

/// Expression evaluation with caching, the catalog, registered newforms, and
/// the space builder. Not thread-safe while building; read-only use of
/// already-built results is safe.
class FormContext {
 public:
  explicit FormContext(int prec = 256, DimensionTable table = DimensionTable::builtin())
      : prec_(prec), table_(std::move(table)) {
    if (prec < 16) throw std::invalid_argument("working precision too small");
  }

  int prec() const { return prec_; }
  const DimensionTable& table() const { return table_; }

  ExprPtr parse(const std::string& text) {
    return ExprParser(text, [this](const std::string& id) { return named(id); }).parse();
  }

  /// Catalog entry by label; nullptr when unknown.
  ExprPtr named(const std::string& label) {
    auto it = named_cache_.find(label);
    if (it != named_cache_.end()) return it->second;
    for (const auto& c : catalog_entries()) {
      if (c.label != label) continue;
      ExprPtr e = expr::named(label, parse(c.definition));
      named_cache_[label] = e;
      return e;
    }
    return nullptr;
  }

  std::pair<ExprPtr, QSeries> named_form(const std::string& label) {
    ExprPtr e = named(label);
    if (!e) throw ExprError("unknown label " + label);
    return {e, eval(e)};
  }

  void register_newform(const std::string& label, int weight, int level, const QSeries& series) {
    newforms_[label] = RegisteredNewform{label, weight, level, series};
    spaces_.clear();
  }
  const std::map<std::string, RegisteredNewform>& newforms() const { return newforms_; }
  const RegisteredNewform& newform(const std::string& label) const {
    auto it = newforms_.find(label);
    if (it != newforms_.end()) return it->second;
    if (label.size() > 2 && label.compare(label.size() - 2, 2, ".1") == 0) {
      auto jt = newforms_.find(label.substr(0, label.size() - 2));
      if (jt != newforms_.end()) return jt->second;
    }
    throw ExprError("unknown newform " + label);
  }

  QSeries eval(const ExprPtr& e) { return eval(e, prec_); }

  QSeries eval(const ExprPtr& e, int prec) {
    const std::string key = e->str();
    auto it = cache_.find(key);
    if (it != cache_.end() && it->second.prec() >= prec) return it->second.truncate(prec);
    QSeries s = compute(*e, prec);
    if (s.prec() < prec) throw std::logic_error("evaluation of " + key + " came back short");
    if (s.prec() > prec) s = s.truncate(prec);
    cache_[key] = s;
    return s;
  }

  QSeries eval(const std::string& text, int prec) { return eval(parse(text), prec); }

  /// Members of the generator pool for M_k(Gamma_0(N)), in insertion order.
  std::vector<ExprPtr> pool(int k, int N) {
    const SpaceInfo& info = table_.at(k, N);
    std::vector<ExprPtr> out;
    for (const auto& s : info.eisenstein) out.push_back(parse(s));
    for (const auto& [label, nf] : newforms_) {
      (void)label;
      if (nf.weight != k || N % nf.level != 0) continue;
      for (int d = 1; d <= N / nf.level; ++d)
        if ((N / nf.level) % d == 0) out.push_back(expr::rescale(expr::newform(nf.label), d));
    }
    for (const auto& c : catalog_entries()) {
      ExprPtr e = named(c.label);
      if (e->weight == k && N % e->level == 0 && e->depth == 0 && e->homogeneous) out.push_back(e);
    }
    for (int a = 2; 2 * a <= k; a += 2) {
      if (!table_.contains(a, N) || !table_.contains(k - a, N)) continue;
      if (table_.at(a, N).dim_full == 0 || table_.at(k - a, N).dim_full == 0) continue;
      const auto ga = space(a, N, false).generators;
      const auto gb = space(k - a, N, false).generators;
      for (std::size_t i = 0; i < ga.size(); ++i)
        for (std::size_t j = (a == k - a ? i : 0); j < gb.size(); ++j)
          out.push_back(i == j && a == k - a ? expr::power(ga[i].first, 2) : expr::product({ga[i].first, gb[j].first}));
    }
    for (const auto& s : info.extra) out.push_back(parse(s));
    return out;
  }

  /// Echelonized basis of M_k(Gamma_0(N)) or of its cuspidal subspace.
  const SpaceBasis& space(int k, int N, bool cuspidal) {
    const auto key = std::make_tuple(k, N, cuspidal);
    auto it = spaces_.find(key);
    if (it != spaces_.end()) return it->second;
    SpaceBasis b = cuspidal ? build_cusp(k, N) : build_full(k, N);
    return spaces_.emplace(key, std::move(b)).first->second;
  }

 private:
  QSeries compute(const FormExpr& e, int prec) {
    using K = FormExpr::Kind;
    switch (e.kind) {
      case K::Const:
        return QSeries::constant(e.scalar, prec);
      case K::Eta:
        return eta_quotient(e.eta, prec);
      case K::Eis:
        return eisenstein(e.k, e.b, prec);
      case K::Phi:
        return phi_series(e.a, e.b, prec);
      case K::CharEis:
        return char_eisenstein(e.k, make_character(e.psi), make_character(e.phi), e.a, prec);
      case K::Rescale:
        return detail::rescale_to(eval(e.args[0], prec / e.a), e.a, prec);
      case K::Derive:
        return qmf::derive(eval(e.args[0], prec), e.a);
      case K::Product: {
        QSeries r = eval(e.args[0], prec);
        for (std::size_t i = 1; i < e.args.size(); ++i) r = mul(r, eval(e.args[i], prec));
        return r;
      }
      case K::Power:
        return qmf::power(eval(e.args[0], prec), e.a);
      case K::Root: {
        QSeries f = eval(e.args[0], prec);
        const int v = f.valuation();
        if (v > 0 && v % e.a == 0) f = eval(e.args[0], prec + v - v / e.a);
        return qmf::root(f, e.a);
      }
      case K::RC1:
        return rc_bracket1(eval(e.args[0], prec), e.k, eval(e.args[1], prec), e.b);
      case K::Twist:
        return qmf::twist(eval(e.args[0], prec), make_character(e.psi));
      case K::Scale:
        return eval(e.args[0], prec).scaled(e.scalar);
      case K::Sum: {
        QSeries r = eval(e.args[0], prec);
        for (std::size_t i = 1; i < e.args.size(); ++i) r += eval(e.args[i], prec);
        return r;
      }
      case K::Named:
        return eval(e.args[0], prec);
      case K::Hecke: {
        const ExprPtr& f = e.args[0];
        return qmf::hecke(eval(f, prec * e.a), e.a, f->weight, f->level);
      }
      case K::Newform: {
        const RegisteredNewform& nf = newform(e.label);
        if (nf.series.prec() < prec)
          throw std::out_of_range("newform " + e.label + " is only known to precision " +
                                  std::to_string(nf.series.prec()));
        return nf.series.truncate(prec);
      }
    }
    throw std::logic_error("unhandled expression kind");
  }

  static ExprPtr combination_expr(const std::vector<ExprPtr>& inputs, const std::vector<FieldElement>& c) {
    std::vector<ExprPtr> terms;
    for (std::size_t j = 0; j < c.size(); ++j)
      if (!c[j].is_zero()) terms.push_back(expr::scale(c[j], inputs[j]));
    return expr::sum(std::move(terms));
  }

  SpaceBasis build_full(int k, int N) {
    const int dim = table_.dimension(k, N, false);
    SpaceBasis b;
    b.weight = k;
    b.level = N;
    b.prec = prec_;
    SeriesEchelon ech(prec_);
    std::vector<ExprPtr> inputs;
    std::set<std::string> seen;
    for (const ExprPtr& g : pool(k, N)) {
      if (!seen.insert(g->str()).second) continue;
      QSeries s = eval(g);
      inputs.push_back(g);
      if (ech.add(s)) {
        if (ech.rank() > dim)
          throw std::runtime_error("dimension table violated for (" + std::to_string(k) + "," + std::to_string(N) +
                                   "): " + g->str() + " is independent");
        b.generators.emplace_back(g, s);
      }
    }
    if (ech.rank() < dim)
      throw std::runtime_error("insufficient generator pool for (" + std::to_string(k) + "," + std::to_string(N) +
                               "): rank " + std::to_string(ech.rank()) + " < " + std::to_string(dim));
    for (int i = 0; i < ech.rank(); ++i)
      b.elements.emplace_back(combination_expr(inputs, ech.combination(i)), ech.row(i));
    b.pivots = ech.pivots();
    return b;
  }

  /// Cusp forms as the image of prod (T_p - lambda) over the Eisenstein
  /// eigenvalues lambda of T_p, p the least prime not dividing N.
  SpaceBasis build_cusp(int k, int N) {
    const SpaceBasis& full = space(k, N, false);
    const SpaceInfo& info = table_.at(k, N);
    const int dim = info.dim_cusp;
    SpaceBasis b;
    b.weight = k;
    b.level = N;
    b.cuspidal = true;
    b.prec = prec_;
    if (dim == 0) return b;
    const int p = smallest_prime_not_dividing(N);
    const int n = full.dimension();
    const SeriesEchelon fech = full.echelon();
    auto tp_matrix = [&](const SeriesEchelon& basis) {
      Matrix<Rational> m(basis.rank(), basis.rank());
      for (int j = 0; j < basis.rank(); ++j) {
        const auto c = basis.coordinates(qmf::hecke(basis.row(j), p, k, N));
        if (!c) throw std::runtime_error("space is not stable under T_" + std::to_string(p));
        for (int i = 0; i < basis.rank(); ++i) m(i, j) = (*c)[static_cast<std::size_t>(i)].rational();
      }
      return m;
    };
    SeriesEchelon eech(prec_);
    for (const auto& s : info.eisenstein) eech.add(eval(parse(s)));
    if (eech.rank() != n - dim) throw std::runtime_error("Eisenstein generators do not have the expected rank");
    const Factorization ef = factor_small(charpoly(tp_matrix(eech)));
    if (!ef.quadratics.empty()) throw std::runtime_error("irrational Eisenstein eigenvalue");
    const Matrix<Rational> A = tp_matrix(fech);
    Matrix<Rational> P = Matrix<Rational>::identity(n);
    for (const auto& [lambda, m] : ef.roots) {
      (void)m;
      Matrix<Rational> shifted = A;
      for (int i = 0; i < n; ++i) shifted(i, i) -= lambda;
      P = shifted * P;
    }
    SeriesEchelon cech(prec_);
    std::vector<ExprPtr> inputs;
    for (int j = 0; j < n; ++j) {
      std::vector<FieldElement> col(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = FieldElement(P(i, j));
      QSeries s = fech.combine(col);
      inputs.push_back(combination_expr(
          [&] {
            std::vector<ExprPtr> v;
            for (const auto& [e, ser] : full.elements) v.push_back(e);
            return v;
          }(),
          col));
      cech.add(s);
    }
    if (cech.rank() != dim)
      throw std::runtime_error("cusp space rank " + std::to_string(cech.rank()) + " differs from table dimension " +
                               std::to_string(dim));
    for (int i = 0; i < cech.rank(); ++i) {
      if (!cech.row(i).coeff(0).is_zero()) throw std::runtime_error("cusp form with nonzero constant term");
      b.elements.emplace_back(combination_expr(inputs, cech.combination(i)), cech.row(i));
    }
    b.pivots = cech.pivots();
    SeriesEchelon gech(prec_);
    for (const auto& [e, s] : full.generators)
      if (cech.coordinates(s) && gech.add(s)) b.generators.emplace_back(e, s);
    for (const auto& el : b.elements)
      if (static_cast<int>(b.generators.size()) < dim && gech.add(el.second)) b.generators.push_back(el);
    return b;
  }

  int prec_;
  DimensionTable table_;
  std::map<std::string, QSeries> cache_;
  std::map<std::string, ExprPtr> named_cache_;
  std::map<std::string, RegisteredNewform> newforms_;
  std::map<std::tuple<int, int, bool>, SpaceBasis> spaces_;
};

}  // namespace qmf
