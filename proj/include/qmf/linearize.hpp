#pragma once

// Decomposition of quasimodular q-expansions in the graded bases
// D^i M_{k-2i}(Gamma_0(N)) + C D^{k/2-1} E_2.

#include <qmf/forms.hpp>
#include <qmf/linalg.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace qmf {

struct QMBasis {
  std::vector<std::pair<ExprPtr, QSeries>> elements;
  std::vector<int> weights;
  int level = 1;
  int prec = 0;

  std::size_t size() const { return elements.size(); }
  std::vector<std::string> names() const {
    std::vector<std::string> v;
    for (const auto& [e, s] : elements) v.push_back(e->str());
    return v;
  }
  int max_weight() const { return weights.empty() ? 0 : *std::max_element(weights.begin(), weights.end()); }
};

struct Decomposition {
  std::vector<FieldElement> coefficients;
  int verified_to = 0;
};

class DecompositionError : public std::runtime_error {
 public:
  DecompositionError(const std::string& what, int first_bad = -1) : std::runtime_error(what), first_bad_(first_bad) {}
  int first_bad() const { return first_bad_; }

 private:
  int first_bad_;
};

/// N prod_{p | N} (1 + 1/p), the index of Gamma_0(N) in SL(2, Z).
inline Rational gamma0_index(int N) {
  Rational mu = N;
  int m = N;
  for (int p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    mu *= Rational(p + 1, p);
    while (m % p == 0) m /= p;
  }
  if (m > 1) mu *= Rational(m + 1, m);
  return mu;
}

/// Number of coefficients decompose always checks: max(64, 2 k mu(N) / 12).
inline int sturm_margin(int k, int N) {
  const Rational b = Rational(2 * k) * gamma0_index(N) / 12;
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
  return std::max(64, static_cast<int>(c.get_si()));
}

namespace detail {

inline void check_independent(const QMBasis& b) {
  SeriesEchelon ech(b.prec);
  for (const auto& [e, s] : b.elements)
    if (!ech.add(s)) throw DecompositionError("basis element " + e->str() + " is dependent on the previous ones");
}

}  // namespace detail

/// D^i applied to generators of M_{k-2i}(Gamma_0(N)) for i < k/2, and
/// D^{k/2-1} E_2, keeping elements of depth at most depth_cap.
inline QMBasis qm_basis(FormContext& ctx, int k, int N, int depth_cap) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("qm_basis: weight must be even and >= 2");
  QMBasis b;
  b.level = N;
  b.prec = ctx.prec();
  for (int i = 0; i < k / 2; ++i) {
    if (i > depth_cap) break;
    const int w = k - 2 * i;
    if (!ctx.table().contains(w, N))
      throw std::out_of_range("qm_basis: no dimension data for (" + std::to_string(w) + "," + std::to_string(N) + ")");
    if (ctx.table().dimension(w, N, false) == 0) continue;
    for (const auto& [g, s] : ctx.space(w, N, false).generators) {
      ExprPtr e = i == 0 ? g : expr::derive(g, i);
      b.elements.emplace_back(e, i == 0 ? s : derive(s, i));
      b.weights.push_back(k);
    }
  }
  if (k / 2 <= depth_cap) {
    ExprPtr e = k == 2 ? expr::eis(2, 1) : expr::derive(expr::eis(2, 1), k / 2 - 1);
    b.elements.emplace_back(e, ctx.eval(e));
    b.weights.push_back(k);
  }
  detail::check_independent(b);
  return b;
}

/// Union of bases of possibly different weights on a common level.
inline QMBasis qm_basis_union(const std::vector<QMBasis>& parts) {
  QMBasis b;
  b.prec = 0;
  for (const auto& p : parts) {
    b.level = std::lcm(b.level, p.level);
    b.prec = b.prec == 0 ? p.prec : std::min(b.prec, p.prec);
    b.elements.insert(b.elements.end(), p.elements.begin(), p.elements.end());
    b.weights.insert(b.weights.end(), p.weights.begin(), p.weights.end());
  }
  for (auto& [e, s] : b.elements)
    if (s.prec() > b.prec) s = s.truncate(b.prec);
  detail::check_independent(b);
  return b;
}

/// Basis given by expressions in the context's grammar.
inline QMBasis custom_basis(FormContext& ctx, const std::vector<std::string>& exprs) {
  QMBasis b;
  b.prec = ctx.prec();
  for (const auto& text : exprs) {
    ExprPtr e = ctx.parse(text);
    b.elements.emplace_back(e, ctx.eval(e));
    b.weights.push_back(e->weight);
    b.level = std::lcm(b.level, e->level);
  }
  detail::check_independent(b);
  return b;
}

/// Solves target = sum c_i basis_i on the first independent coefficient rows,
/// then checks every coefficient up to the common precision.
inline Decomposition decompose(const QSeries& target, const QMBasis& basis) {
  const int m = static_cast<int>(basis.size());
  const int prec = std::min(target.prec(), basis.prec);
  const int margin = sturm_margin(std::max(basis.max_weight(), 2), basis.level);
  if (prec < 2 * m || prec < margin)
    throw DecompositionError("precision " + std::to_string(prec) + " below the verification margin " +
                             std::to_string(std::max(2 * m, margin)));
  Decomposition d;
  if (m == 0) {
    const int bad = target.truncate(prec).valuation();
    if (bad >= 0) throw DecompositionError("target is not zero", bad);
    d.verified_to = prec;
    return d;
  }
  // greedy row selection with an incrementally reduced copy
  std::vector<int> rows;
  std::vector<std::vector<FieldElement>> reduced;
  std::vector<int> piv;
  for (int n = 0; n <= prec && static_cast<int>(rows.size()) < m; ++n) {
    std::vector<FieldElement> r(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) r[static_cast<std::size_t>(j)] = basis.elements[static_cast<std::size_t>(j)].second.coeff(n);
    for (std::size_t i = 0; i < reduced.size(); ++i) {
      const FieldElement c = r[static_cast<std::size_t>(piv[i])];
      if (c.is_zero()) continue;
      for (int j = 0; j < m; ++j) r[static_cast<std::size_t>(j)] -= c * reduced[i][static_cast<std::size_t>(j)];
    }
    int p = -1;
    for (int j = 0; j < m; ++j)
      if (!r[static_cast<std::size_t>(j)].is_zero()) {
        p = j;
        break;
      }
    if (p < 0) continue;
    const FieldElement inv = FieldElement(1) / r[static_cast<std::size_t>(p)];
    for (auto& x : r) x *= inv;
    reduced.push_back(std::move(r));
    piv.push_back(p);
    rows.push_back(n);
  }
  if (static_cast<int>(rows.size()) < m) throw DecompositionError("basis is singular to the available precision");
  Matrix<FieldElement> A(m, m);
  std::vector<FieldElement> rhs(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) A(i, j) = basis.elements[static_cast<std::size_t>(j)].second.coeff(rows[static_cast<std::size_t>(i)]);
    rhs[static_cast<std::size_t>(i)] = target.coeff(rows[static_cast<std::size_t>(i)]);
  }
  d.coefficients = solve(A, rhs);
  for (int n = 0; n <= prec; ++n) {
    FieldElement s(0);
    for (int j = 0; j < m; ++j)
      if (!d.coefficients[static_cast<std::size_t>(j)].is_zero())
        s += d.coefficients[static_cast<std::size_t>(j)] * basis.elements[static_cast<std::size_t>(j)].second.coeff(n);
    if (!(s == target.coeff(n)))
      throw DecompositionError("target is not in the span: first discrepancy at q^" + std::to_string(n), n);
  }
  d.verified_to = prec;
  return d;
}

/// E_2(z) E_2(N z).
inline QSeries build_H(int N, int prec) { return mul(eisenstein(2, prec), eisenstein(2, N, prec)); }

struct LahiriProduct {
  QSeries series{0};
  FieldElement normalization;
  ExprPtr expression;
};

/// prod_{a_j = 0} (E_{b_j+1, N_j} - 1) prod_{a_j > 0} D^{a_j} E_{b_j+1, N_j}, whose
/// n-th coefficient is normalization * S[a, b, N](n).
inline LahiriProduct build_lahiri(std::vector<int> a, std::vector<int> b, std::vector<int> N, int prec) {
  const std::size_t r = a.size();
  if (r == 0 || b.size() != r || N.size() != r) throw std::invalid_argument("build_lahiri: parameter lengths differ");
  std::vector<std::tuple<int, int, int>> t;
  for (std::size_t j = 0; j < r; ++j) {
    if (b[j] < 1 || b[j] % 2 == 0) throw std::invalid_argument("build_lahiri: b entries must be odd and positive");
    if (a[j] < 0 || N[j] < 1) throw std::invalid_argument("build_lahiri: need a >= 0 and N >= 1");
    t.emplace_back(a[j], b[j], N[j]);
  }
  std::stable_sort(t.begin(), t.end(), [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });
  LahiriProduct out;
  out.series = one(prec);
  Rational norm = 1;
  std::vector<ExprPtr> factors;
  for (const auto& [aj, bj, Nj] : t) {
    const int k = bj + 1;
    norm *= Rational(-2 * k) / gen_bernoulli(DirichletCharacter::trivial(), k);
    QSeries e = eisenstein(k, Nj, prec);
    ExprPtr ex = expr::eis(k, Nj);
    if (aj == 0) {
      e -= one(prec);
      ex = expr::sum({ex, expr::constant(FieldElement(-1))});
    } else {
      e = derive(e, aj);
      ex = expr::derive(ex, aj);
    }
    out.series = mul(out.series, e);
    factors.push_back(ex);
  }
  out.normalization = FieldElement(norm);
  out.expression = factors.size() == 1 ? factors[0] : expr::product(factors);
  return out;
}

}  // namespace qmf
