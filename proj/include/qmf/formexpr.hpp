#pragma once

// Symbolic descriptions of (quasi)modular forms with weight/depth/level
// metadata, and their textual expression language.

#include <qmf/characters.hpp>
#include <qmf/exactnum.hpp>
#include <qmf/qseries.hpp>

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qmf {

struct FormExpr;
using ExprPtr = std::shared_ptr<const FormExpr>;

struct FormExpr {
  enum class Kind { Const, Eta, Eis, Phi, CharEis, Rescale, Derive, Product, Power, Root, RC1, Twist, Scale, Sum, Named, Hecke, Newform };

  Kind kind = Kind::Const;
  std::vector<EtaFactor> eta;
  int k = 0;      // Eis, CharEis
  int a = 0;      // Phi a; Rescale d; Derive i; Power m; Root n; Hecke p; CharEis t
  int b = 0;      // Phi b; Eis level N
  std::string psi, phi;  // CharEis characters; Twist character in psi
  std::string label;     // Named / Newform
  FieldElement scalar{0};  // Const, Scale
  std::vector<ExprPtr> args;

  int weight = 0;
  int depth = 0;
  int level = 1;
  bool homogeneous = true;

  std::string str() const;
};

struct ExprError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Level of an eta quotient: the least multiple N of lcm(d) with
/// sum (N/d) r_d = 0 mod 24.
inline int eta_level(const std::vector<EtaFactor>& spec) {
  int L = 1;
  for (const auto& f : spec) L = std::lcm(L, f.d);
  for (int N = L;; N += L) {
    long s = 0;
    for (const auto& f : spec) s += static_cast<long>(N / f.d) * f.r;
    if (s % 24 == 0) return N;
    if (N > 24 * L) throw ExprError("eta quotient has no level");
  }
}

namespace expr {

inline std::shared_ptr<FormExpr> node(FormExpr::Kind k) {
  auto e = std::make_shared<FormExpr>();
  e->kind = k;
  return e;
}

inline ExprPtr constant(const FieldElement& c) {
  auto e = node(FormExpr::Kind::Const);
  e->scalar = c;
  return e;
}

inline ExprPtr eta(std::vector<EtaFactor> spec) {
  eta_order(spec);
  int r = 0;
  for (const auto& f : spec) r += f.r;
  if (r % 2 != 0) throw ExprError("eta quotient of odd weight");
  auto e = node(FormExpr::Kind::Eta);
  e->weight = r / 2;
  e->level = eta_level(spec);
  e->eta = std::move(spec);
  return e;
}

/// E_k(N z)
inline ExprPtr eis(int k, int N = 1) {
  if (k < 2 || k % 2 != 0) throw ExprError("Eisenstein series of weight " + std::to_string(k));
  if (N < 1) throw ExprError("Eisenstein series at level " + std::to_string(N));
  auto e = node(FormExpr::Kind::Eis);
  e->k = k;
  e->b = N;
  e->weight = k;
  e->depth = k == 2 ? 1 : 0;
  e->level = N;
  return e;
}

inline ExprPtr phi(int a, int b) {
  if (a < 1 || b <= 1 || b % a != 0 || a == b) throw ExprError("phi(a,b) needs a | b, 1 < b, a != b");
  auto e = node(FormExpr::Kind::Phi);
  e->a = a;
  e->b = b;
  e->weight = 2;
  e->level = b;
  return e;
}

inline ExprPtr char_eis(int k, const std::string& psi, const std::string& phi, int t) {
  const DirichletCharacter p = make_character(psi);
  const DirichletCharacter f = make_character(phi);
  if (k < 1 || t < 1) throw ExprError("bad character Eisenstein parameters");
  if (p.parity() * f.parity() != (k % 2 == 0 ? 1 : -1)) throw ExprError("character parity does not match the weight");
  if (k == 2 && p.is_trivial() && f.is_trivial() && t == 1) throw ExprError("E_{2,1}^{1,1} is excluded");
  auto e = node(FormExpr::Kind::CharEis);
  e->k = k;
  e->psi = p.name();
  e->phi = f.name();
  e->a = t;
  e->weight = k;
  e->level = p.modulus() * f.modulus() * t;
  return e;
}

inline ExprPtr rescale(ExprPtr f, int d) {
  if (d < 1) throw ExprError("rescale by " + std::to_string(d));
  if (d == 1) return f;
  auto e = node(FormExpr::Kind::Rescale);
  e->a = d;
  e->weight = f->weight;
  e->depth = f->depth;
  e->level = f->level * d;
  e->homogeneous = f->homogeneous;
  e->args = {std::move(f)};
  return e;
}

inline ExprPtr derive(ExprPtr f, int i = 1) {
  if (i < 0) throw ExprError("negative derivative order");
  if (i == 0) return f;
  if (f->kind == FormExpr::Kind::Derive) return derive(f->args[0], f->a + i);
  auto e = node(FormExpr::Kind::Derive);
  e->a = i;
  e->weight = f->weight + 2 * i;
  e->depth = f->depth + i;
  e->level = f->level;
  e->homogeneous = f->homogeneous;
  e->args = {std::move(f)};
  return e;
}

inline ExprPtr product(std::vector<ExprPtr> fs) {
  if (fs.empty()) return constant(FieldElement(1));
  if (fs.size() == 1) return fs[0];
  auto e = node(FormExpr::Kind::Product);
  e->level = 1;
  for (const auto& f : fs) {
    e->weight += f->weight;
    e->depth += f->depth;
    e->level = std::lcm(e->level, f->level);
    e->homogeneous = e->homogeneous && f->homogeneous;
  }
  e->args = std::move(fs);
  return e;
}

inline ExprPtr power(ExprPtr f, int m) {
  if (m < 0) throw ExprError("negative power");
  if (m == 0) return constant(FieldElement(1));
  if (m == 1) return f;
  auto e = node(FormExpr::Kind::Power);
  e->a = m;
  e->weight = f->weight * m;
  e->depth = f->depth * m;
  e->level = f->level;
  e->homogeneous = f->homogeneous;
  e->args = {std::move(f)};
  return e;
}

inline ExprPtr root(ExprPtr f, int n) {
  if (n < 1) throw ExprError("root of order " + std::to_string(n));
  if (n == 1) return f;
  if (f->weight % n != 0) throw ExprError("root: weight not divisible by the order");
  auto e = node(FormExpr::Kind::Root);
  e->a = n;
  e->weight = f->weight / n;
  e->depth = f->depth / n;
  e->level = f->level;
  e->homogeneous = f->homogeneous;
  e->args = {std::move(f)};
  return e;
}

inline ExprPtr rc1(ExprPtr f, ExprPtr g, int kf = -1, int kg = -1) {
  auto e = node(FormExpr::Kind::RC1);
  e->k = kf < 0 ? f->weight : kf;
  e->b = kg < 0 ? g->weight : kg;
  e->weight = e->k + e->b + 2;
  e->depth = std::max(f->depth, g->depth);
  e->level = std::lcm(f->level, g->level);
  e->homogeneous = f->homogeneous && g->homogeneous;
  e->args = {std::move(f), std::move(g)};
  return e;
}

inline ExprPtr twist(ExprPtr f, const std::string& chi) {
  const DirichletCharacter c = make_character(chi);
  if (c.is_trivial()) return f;
  auto e = node(FormExpr::Kind::Twist);
  e->psi = c.name();
  e->weight = f->weight;
  e->depth = f->depth;
  e->level = std::lcm(f->level, c.modulus() * c.modulus());
  e->homogeneous = f->homogeneous;
  e->args = {std::move(f)};
  return e;
}

inline ExprPtr scale(const FieldElement& c, ExprPtr f) {
  if (c == FieldElement(1)) return f;
  if (f->kind == FormExpr::Kind::Const) return constant(c * f->scalar);
  if (f->kind == FormExpr::Kind::Scale) return scale(c * f->scalar, f->args[0]);
  auto e = node(FormExpr::Kind::Scale);
  e->scalar = c;
  e->weight = f->weight;
  e->depth = f->depth;
  e->level = f->level;
  e->homogeneous = f->homogeneous;
  e->args = {std::move(f)};
  return e;
}

inline ExprPtr sum(std::vector<ExprPtr> terms) {
  if (terms.empty()) return constant(FieldElement(0));
  if (terms.size() == 1) return terms[0];
  auto e = node(FormExpr::Kind::Sum);
  e->level = 1;
  e->weight = terms[0]->weight;
  for (const auto& t : terms) {
    if (t->weight != e->weight || !t->homogeneous) e->homogeneous = false;
    e->weight = std::max(e->weight, t->weight);
    e->depth = std::max(e->depth, t->depth);
    e->level = std::lcm(e->level, t->level);
  }
  e->args = std::move(terms);
  return e;
}

inline ExprPtr hecke(ExprPtr f, int p) {
  if (p < 2) throw ExprError("hecke: bad prime");
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) throw ExprError("hecke: " + std::to_string(p) + " is not prime");
  auto e = node(FormExpr::Kind::Hecke);
  e->a = p;
  e->weight = f->weight;
  e->depth = f->depth;
  e->level = f->level;
  e->homogeneous = f->homogeneous;
  e->args = {std::move(f)};
  return e;
}

/// "k.N" or "k.N.i"
inline ExprPtr newform(const std::string& label) {
  auto e = node(FormExpr::Kind::Newform);
  const auto dot = label.find('.');
  if (dot == std::string::npos) throw ExprError("bad newform label " + label);
  try {
    e->weight = std::stoi(label.substr(0, dot));
    e->level = std::stoi(label.substr(dot + 1));
  } catch (const std::exception&) {
    throw ExprError("bad newform label " + label);
  }
  e->label = label;
  return e;
}

inline ExprPtr named(const std::string& label, const ExprPtr& definition) {
  auto e = node(FormExpr::Kind::Named);
  e->label = label;
  e->weight = definition->weight;
  e->depth = definition->depth;
  e->level = definition->level;
  e->homogeneous = definition->homogeneous;
  e->args = {definition};
  return e;
}

}  // namespace expr

namespace detail {

inline bool is_atomic(const FormExpr& e) {
  switch (e.kind) {
    case FormExpr::Kind::Sum:
    case FormExpr::Kind::Product:
    case FormExpr::Kind::Scale:
      return false;
    case FormExpr::Kind::Const:
      return e.scalar.is_rational() && sgn(e.scalar.a()) >= 0 && e.scalar.a().get_den() == 1;
    default:
      return true;
  }
}

inline std::string scalar_text(const FieldElement& c) {
  if (c.is_rational()) return to_string(c.a());
  return "[" + c.str() + "]";
}

}  // namespace detail

inline std::string FormExpr::str() const {
  auto wrap = [](const ExprPtr& e) { return detail::is_atomic(*e) ? e->str() : "(" + e->str() + ")"; };
  switch (kind) {
    case Kind::Const:
      return detail::scalar_text(scalar);
    case Kind::Eta: {
      std::string s = "eta(";
      for (std::size_t i = 0; i < eta.size(); ++i) {
        if (i) s += "*";
        s += std::to_string(eta[i].d);
        if (eta[i].r != 1) s += "^" + std::to_string(eta[i].r);
      }
      return s + ")";
    }
    case Kind::Eis:
      return b == 1 ? "E(" + std::to_string(k) + ")" : "E(" + std::to_string(k) + "," + std::to_string(b) + ")";
    case Kind::Phi:
      return "phi(" + std::to_string(a) + "," + std::to_string(b) + ")";
    case Kind::CharEis:
      return "Ech(" + std::to_string(k) + "," + psi + "," + phi + "," + std::to_string(a) + ")";
    case Kind::Rescale:
      return "rescale(" + args[0]->str() + "," + std::to_string(a) + ")";
    case Kind::Derive:
      return (a == 1 ? std::string("D(") : "D^" + std::to_string(a) + "(") + args[0]->str() + ")";
    case Kind::Product: {
      std::string s;
      for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "*" : "") + wrap(args[i]);
      return s;
    }
    case Kind::Power:
      return wrap(args[0]) + "^" + std::to_string(a);
    case Kind::Root:
      return "root(" + args[0]->str() + "," + std::to_string(a) + ")";
    case Kind::RC1:
      return "rc1(" + args[0]->str() + "," + args[1]->str() + ")";
    case Kind::Twist:
      return "twist(" + args[0]->str() + "," + psi + ")";
    case Kind::Scale:
      return detail::scalar_text(scalar) + "*" + wrap(args[0]);
    case Kind::Sum: {
      std::string s;
      for (std::size_t i = 0; i < args.size(); ++i) {
        std::string t = args[i]->kind == Kind::Sum ? "(" + args[i]->str() + ")" : args[i]->str();
        if (i && !t.empty() && t[0] == '-') s += t;
        else s += (i ? "+" : "") + t;
      }
      return s;
    }
    case Kind::Named:
      return label;
    case Kind::Hecke:
      return "hecke(" + args[0]->str() + "," + std::to_string(a) + ")";
    case Kind::Newform:
      return "nf(" + label + ")";
  }
  return "?";
}

/// Parser for the expression language, e.g. "eta(1^4*11^4)", "E(4,3)",
/// "D^2(E(2))", "twist(E(4),chi3)", "-1/24*rc1(E(4),phi(1,5))", "E(2)-1".
/// Identifiers that are not builtins are resolved through `lookup`.
class ExprParser {
 public:
  using Lookup = std::function<ExprPtr(const std::string&)>;

  ExprParser(std::string text, Lookup lookup) : s_(std::move(text)), lookup_(std::move(lookup)) {}

  ExprPtr parse() {
    ExprPtr e = parse_sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ExprError("parse error at " + std::to_string(pos_) + " in \"" + s_ + "\": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }
  long integer() {
    skip();
    std::size_t start = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_ || (pos_ == start + 1 && s_[start] == '-')) fail("expected integer");
    return std::stol(s_.substr(start, pos_ - start));
  }
  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '.'))
      ++pos_;
    if (start == pos_) fail("expected identifier");
    return s_.substr(start, pos_ - start);
  }

  ExprPtr parse_sum() {
    std::vector<ExprPtr> terms;
    bool neg = eat('-');
    if (!neg) eat('+');
    for (;;) {
      ExprPtr t = parse_product();
      terms.push_back(neg ? expr::scale(FieldElement(-1), t) : t);
      if (eat('+')) neg = false;
      else if (eat('-')) neg = true;
      else break;
    }
    return expr::sum(std::move(terms));
  }

  ExprPtr parse_product() {
    FieldElement c(1);
    std::vector<ExprPtr> factors;
    do {
      skip();
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        c *= FieldElement(parse_number());
      } else if (pos_ < s_.size() && s_[pos_] == '[') {
        ++pos_;
        const auto close = s_.find(']', pos_);
        if (close == std::string::npos) fail("unterminated field literal");
        c *= FieldElement::parse(s_.substr(pos_, close - pos_));
        pos_ = close + 1;
      } else {
        factors.push_back(parse_power());
      }
    } while (eat('*'));
    if (factors.empty()) return expr::constant(c);
    return expr::scale(c, expr::product(std::move(factors)));
  }

  Rational parse_number() {
    Rational r(integer());
    skip();
    if (pos_ < s_.size() && s_[pos_] == '/') {
      ++pos_;
      const long d = integer();
      if (d == 0) fail("zero denominator");
      r /= d;
    }
    return r;
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (eat('^')) return expr::power(base, static_cast<int>(integer()));
    return base;
  }

  ExprPtr parse_atom() {
    if (eat('(')) {
      ExprPtr e = parse_sum();
      expect(')');
      return e;
    }
    const std::string id = ident();
    if (id == "D") {
      int order = 1;
      if (eat('^')) order = static_cast<int>(integer());
      expect('(');
      ExprPtr e = parse_sum();
      expect(')');
      return expr::derive(e, order);
    }
    if (id == "eta") {
      expect('(');
      std::vector<EtaFactor> spec;
      do {
        const int d = static_cast<int>(integer());
        int r = 1;
        if (eat('^')) r = static_cast<int>(integer());
        spec.push_back({d, r});
      } while (eat('*'));
      expect(')');
      try {
        return expr::eta(std::move(spec));
      } catch (const std::domain_error& e) {
        throw ExprError(e.what());
      }
    }
    if (id == "E") {
      expect('(');
      const int k = static_cast<int>(integer());
      int N = 1;
      if (eat(',')) N = static_cast<int>(integer());
      expect(')');
      return expr::eis(k, N);
    }
    if (id == "phi") {
      expect('(');
      const int a = static_cast<int>(integer());
      expect(',');
      const int b = static_cast<int>(integer());
      expect(')');
      return expr::phi(a, b);
    }
    if (id == "Ech") {
      expect('(');
      const int k = static_cast<int>(integer());
      expect(',');
      const std::string p = ident();
      expect(',');
      const std::string f = ident();
      int t = 1;
      if (eat(',')) t = static_cast<int>(integer());
      expect(')');
      return expr::char_eis(k, p, f, t);
    }
    if (id == "rescale" || id == "root" || id == "hecke") {
      expect('(');
      ExprPtr e = parse_sum();
      expect(',');
      const int n = static_cast<int>(integer());
      expect(')');
      if (id == "rescale") return expr::rescale(e, n);
      if (id == "root") return expr::root(e, n);
      return expr::hecke(e, n);
    }
    if (id == "rc1") {
      expect('(');
      ExprPtr f = parse_sum();
      expect(',');
      ExprPtr g = parse_sum();
      expect(')');
      return expr::rc1(f, g);
    }
    if (id == "twist") {
      expect('(');
      ExprPtr f = parse_sum();
      expect(',');
      const std::string chi = ident();
      expect(')');
      return expr::twist(f, chi);
    }
    if (id == "nf") {
      expect('(');
      const std::string label = ident();
      expect(')');
      return expr::newform(label);
    }
    if (!lookup_) fail("unknown identifier " + id);
    ExprPtr e = lookup_(id);
    if (!e) fail("unknown identifier " + id);
    return e;
  }

  std::string s_;
  std::size_t pos_ = 0;
  Lookup lookup_;
};

}  // namespace qmf
