#pragma once

// Sparse multivariate polynomials over a FieldElement base and a small
// elimination solver for zero-dimensional systems whose solutions lie in Q or
// a quadratic extension.

#include <qmf/exactnum.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qmf {

class MPoly {
 public:
  using Monomial = std::vector<int>;

  MPoly() = default;
  explicit MPoly(int nvars) : n_(nvars) {}

  static MPoly constant(int nvars, const FieldElement& c) {
    MPoly p(nvars);
    if (!c.is_zero()) p.t_[Monomial(static_cast<std::size_t>(nvars), 0)] = c;
    return p;
  }
  static MPoly var(int nvars, int i) {
    MPoly p(nvars);
    Monomial m(static_cast<std::size_t>(nvars), 0);
    m[static_cast<std::size_t>(i)] = 1;
    p.t_[m] = FieldElement(1);
    return p;
  }

  int nvars() const { return n_; }
  bool is_zero() const { return t_.empty(); }
  const std::map<Monomial, FieldElement>& terms() const { return t_; }

  bool is_constant() const {
    if (t_.empty()) return true;
    return t_.size() == 1 && total(t_.begin()->first) == 0;
  }
  FieldElement constant_value() const {
    if (t_.empty()) return FieldElement(0);
    if (!is_constant()) throw std::logic_error("polynomial is not constant");
    return t_.begin()->second;
  }

  int degree_in(int i) const {
    int d = 0;
    for (const auto& [m, c] : t_) d = std::max(d, m[static_cast<std::size_t>(i)]);
    return d;
  }
  std::set<int> variables() const {
    std::set<int> v;
    for (const auto& [m, c] : t_)
      for (int i = 0; i < n_; ++i)
        if (m[static_cast<std::size_t>(i)] > 0) v.insert(i);
    return v;
  }

  /// Coefficient of x_i^e as a polynomial in the remaining variables.
  MPoly coeff_in(int i, int e) const {
    MPoly r(n_);
    for (const auto& [m, c] : t_) {
      if (m[static_cast<std::size_t>(i)] != e) continue;
      Monomial mm = m;
      mm[static_cast<std::size_t>(i)] = 0;
      r.t_[mm] = c;
    }
    return r;
  }

  MPoly& operator+=(const MPoly& o) {
    for (const auto& [m, c] : o.t_) add_term(m, c);
    return *this;
  }
  MPoly& operator-=(const MPoly& o) {
    for (const auto& [m, c] : o.t_) add_term(m, -c);
    return *this;
  }
  friend MPoly operator+(MPoly x, const MPoly& y) { return x += y; }
  friend MPoly operator-(MPoly x, const MPoly& y) { return x -= y; }
  friend MPoly operator*(const MPoly& x, const MPoly& y) {
    MPoly r(std::max(x.n_, y.n_));
    for (const auto& [mx, cx] : x.t_)
      for (const auto& [my, cy] : y.t_) {
        Monomial m(mx);
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += my[i];
        r.add_term(m, cx * cy);
      }
    return r;
  }
  friend MPoly operator*(const FieldElement& c, const MPoly& x) {
    MPoly r(x.n_);
    if (c.is_zero()) return r;
    for (const auto& [m, v] : x.t_) r.t_[m] = c * v;
    return r;
  }

  MPoly pow(int e) const {
    MPoly r = constant(n_, FieldElement(1));
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  /// Replaces x_i by q.
  MPoly substitute(int i, const MPoly& q) const {
    MPoly r(n_);
    const int d = degree_in(i);
    MPoly qp = constant(n_, FieldElement(1));
    for (int e = 0; e <= d; ++e) {
      if (e > 0) qp = qp * q;
      MPoly c = coeff_in(i, e);
      if (!c.is_zero()) r += c * qp;
    }
    return r;
  }

  FieldElement evaluate(const std::vector<FieldElement>& x) const {
    FieldElement s(0);
    for (const auto& [m, c] : t_) {
      FieldElement term = c;
      for (int i = 0; i < n_; ++i)
        for (int e = 0; e < m[static_cast<std::size_t>(i)]; ++e) term *= x[static_cast<std::size_t>(i)];
      s += term;
    }
    return s;
  }

  /// Coefficients low to high of a polynomial in x_i alone.
  std::vector<FieldElement> univariate(int i) const {
    std::vector<FieldElement> c(static_cast<std::size_t>(degree_in(i)) + 1, FieldElement(0));
    for (const auto& [m, v] : t_) {
      for (int j = 0; j < n_; ++j)
        if (j != i && m[static_cast<std::size_t>(j)] != 0) throw std::logic_error("polynomial is not univariate");
      c[static_cast<std::size_t>(m[static_cast<std::size_t>(i)])] = v;
    }
    return c;
  }

  std::string str() const {
    if (t_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : t_) {
      if (!s.empty()) s += " + ";
      s += "(" + c.str() + ")";
      for (int i = 0; i < n_; ++i)
        if (m[static_cast<std::size_t>(i)] > 0)
          s += "*x" + std::to_string(i) + (m[static_cast<std::size_t>(i)] > 1 ? "^" + std::to_string(m[static_cast<std::size_t>(i)]) : "");
    }
    return s;
  }

 private:
  static int total(const Monomial& m) {
    int s = 0;
    for (int e : m) s += e;
    return s;
  }
  void add_term(const Monomial& m, const FieldElement& c) {
    if (c.is_zero()) return;
    auto it = t_.find(m);
    if (it == t_.end()) {
      t_[m] = c;
      return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }

  int n_ = 0;
  std::map<Monomial, FieldElement> t_;
};

namespace detail {

using PolyK = std::vector<FieldElement>;  // low to high

inline void trim_poly(PolyK& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline PolyK poly_mod(PolyK a, const PolyK& b) {
  trim_poly(a);
  while (a.size() >= b.size() && !a.empty()) {
    const FieldElement f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    trim_poly(a);
  }
  return a;
}

inline PolyK poly_gcd(PolyK a, PolyK b) {
  trim_poly(a);
  trim_poly(b);
  while (!b.empty()) {
    PolyK r = poly_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const FieldElement lc = a.back();
    for (auto& x : a) x /= lc;
  }
  return a;
}

}  // namespace detail

struct SolveResult {
  std::vector<std::vector<FieldElement>> solutions;
  std::vector<std::string> rejected;  // descriptions of discarded non-real branches
  bool underdetermined = false;
};

/// Finds all solutions of a polynomial system with coordinates in Q or in a
/// totally real quadratic field. Non-real branches are discarded and reported.
class PolySystemSolver {
 public:
  explicit PolySystemSolver(int nvars) : n_(nvars) {}

  SolveResult solve(const std::vector<MPoly>& eqs) {
    SolveResult res;
    std::set<int> free;
    for (int i = 0; i < n_; ++i) free.insert(i);
    std::vector<std::vector<FieldElement>> kept;
    for (const Partial& p : recurse(eqs, free, res, 0)) {
      std::vector<FieldElement> s;
      for (const auto& v : p) s.push_back(v ? *v : FieldElement(0));
      bool ok = true;
      for (const auto& e : eqs)
        if (!e.evaluate(s).is_zero()) {
          ok = false;
          break;
        }
      if (!ok) continue;
      if (std::find(kept.begin(), kept.end(), s) == kept.end()) kept.push_back(std::move(s));
    }
    res.solutions = std::move(kept);
    return res;
  }

 private:
  using Partial = std::vector<std::optional<FieldElement>>;

  std::vector<FieldElement> values(const Partial& p) const {
    std::vector<FieldElement> x;
    for (const auto& v : p) x.push_back(v ? *v : FieldElement(0));
    return x;
  }

  // Solutions for the variables in `free`; each level assigns the variable it
  // eliminated after the recursive call returns.
  std::vector<Partial> recurse(std::vector<MPoly> eqs, std::set<int> free, SolveResult& res, int depth) {
    if (depth > 64) throw std::runtime_error("polynomial solver recursion too deep");
    std::vector<MPoly> live;
    for (auto& e : eqs) {
      if (e.is_zero()) continue;
      if (e.is_constant()) return {};
      live.push_back(std::move(e));
    }
    if (live.empty()) {
      if (!free.empty()) {
        res.underdetermined = true;
        return {};
      }
      return {Partial(static_cast<std::size_t>(n_))};
    }
    std::vector<Partial> out;
    // 1. an equation linear in y with a constant coefficient
    int best = -1;
    int best_var = -1;
    std::size_t best_size = 0;
    for (std::size_t i = 0; i < live.size(); ++i)
      for (int y : live[i].variables()) {
        if (live[i].degree_in(y) != 1 || !live[i].coeff_in(y, 1).is_constant()) continue;
        if (best < 0 || live[i].terms().size() < best_size) {
          best = static_cast<int>(i);
          best_var = y;
          best_size = live[i].terms().size();
        }
      }
    if (best >= 0) {
      const MPoly& e = live[static_cast<std::size_t>(best)];
      const FieldElement A = e.coeff_in(best_var, 1).constant_value();
      const MPoly expr_y = (FieldElement(-1) / A) * e.coeff_in(best_var, 0);
      std::vector<MPoly> next;
      for (std::size_t i = 0; i < live.size(); ++i)
        if (static_cast<int>(i) != best) next.push_back(live[i].substitute(best_var, expr_y));
      free.erase(best_var);
      for (Partial& s : recurse(std::move(next), free, res, depth + 1)) {
        s[static_cast<std::size_t>(best_var)] = expr_y.evaluate(values(s));
        out.push_back(std::move(s));
      }
      return out;
    }
    // 2. a univariate equation: branch on its roots
    for (const auto& e : live) {
      const auto vars = e.variables();
      if (vars.size() != 1) continue;
      const int y = *vars.begin();
      detail::PolyK g = e.univariate(y);
      for (const auto& o : live)
        if (o.variables() == vars) g = detail::poly_gcd(g, o.univariate(y));
      std::set<int> f = free;
      f.erase(y);
      for (const FieldElement& r : roots(g, res)) {
        std::vector<MPoly> next;
        for (const auto& o : live) next.push_back(substitute_value(o, y, r));
        for (Partial& s : recurse(std::move(next), f, res, depth + 1)) {
          s[static_cast<std::size_t>(y)] = r;
          out.push_back(std::move(s));
        }
      }
      return out;
    }
    // 3. an equation A y + B = 0 with non-constant A: split on A
    for (std::size_t i = 0; i < live.size(); ++i)
      for (int y : live[i].variables()) {
        if (live[i].degree_in(y) != 1) continue;
        const MPoly A = live[i].coeff_in(y, 1);
        const MPoly B = live[i].coeff_in(y, 0);
        // (a) A != 0: clear denominators after y = -B/A
        {
          std::vector<MPoly> next;
          const MPoly minus_b = FieldElement(-1) * B;
          for (std::size_t j = 0; j < live.size(); ++j) {
            if (j == i) continue;
            const int d = live[j].degree_in(y);
            MPoly acc(n_);
            for (int k = 0; k <= d; ++k) {
              const MPoly c = live[j].coeff_in(y, k);
              if (!c.is_zero()) acc += c * minus_b.pow(k) * A.pow(d - k);
            }
            next.push_back(acc);
          }
          std::set<int> f = free;
          f.erase(y);
          for (Partial& s : recurse(std::move(next), f, res, depth + 1)) {
            const auto x = values(s);
            const FieldElement av = A.evaluate(x);
            if (av.is_zero()) continue;
            s[static_cast<std::size_t>(y)] = -B.evaluate(x) / av;
            out.push_back(std::move(s));
          }
        }
        // (b) A = 0 and B = 0
        {
          std::vector<MPoly> next;
          for (std::size_t j = 0; j < live.size(); ++j)
            if (j != i) next.push_back(live[j]);
          next.push_back(A);
          next.push_back(B);
          for (Partial& s : recurse(std::move(next), free, res, depth + 1)) out.push_back(std::move(s));
        }
        return out;
      }
    throw std::runtime_error("polynomial system outside the supported shapes");
  }

  static MPoly substitute_value(const MPoly& p, int i, const FieldElement& v) {
    return p.substitute(i, MPoly::constant(p.nvars(), v));
  }
  /// Roots of a univariate polynomial in Q or in a totally real quadratic field.
  static std::vector<FieldElement> roots(detail::PolyK g, SolveResult& res) {
    detail::trim_poly(g);
    if (g.size() <= 1) {
      if (g.empty()) throw std::runtime_error("degenerate univariate constraint");
      return {};
    }
    bool rational = true;
    for (const auto& c : g)
      if (!c.is_rational()) rational = false;
    std::vector<FieldElement> out;
    if (rational) {
      std::vector<Rational> c;
      for (const auto& x : g) c.push_back(x.a());
      const Factorization f = factor_small(PolyQ(c));
      for (const auto& [r, m] : f.roots) {
        (void)m;
        out.emplace_back(r);
      }
      for (const auto& q : f.quadratics) {
        if (!q.totally_real) {
          res.rejected.push_back("X^2 - (" + to_string(q.descriptor->p) + ")X - (" + to_string(q.descriptor->q) + ")");
          continue;
        }
        const auto [t, tc] = quadratic_roots(q.descriptor);
        out.push_back(t);
        out.push_back(tc);
      }
      return out;
    }
    if (g.size() != 2) throw std::runtime_error("nonlinear constraint over a quadratic field");
    out.push_back(-g[0] / g[1]);
    return out;
  }

  int n_;
};

}  // namespace qmf
