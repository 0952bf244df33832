#pragma once

// Declarative catalog of convolution identities and the verifier comparing
// their closed forms with the brute-force oracle.

#include <qmf/characters.hpp>
#include <qmf/heckeeigen.hpp>
#include <qmf/oracle.hpp>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace qmf {

struct SumDescriptor {
  enum class Kind { W, SMod, Lahiri };
  Kind kind = Kind::W;
  long N = 1;
  long a = 0, b = 1;
  std::vector<int> va, vb, vN;

  static SumDescriptor w(long N) {
    SumDescriptor d;
    d.kind = Kind::W;
    d.N = N;
    return d;
  }
  static SumDescriptor s_mod(long a, long b) {
    SumDescriptor d;
    d.kind = Kind::SMod;
    d.a = a;
    d.b = b;
    return d;
  }
  static SumDescriptor lahiri(std::vector<int> a, std::vector<int> b, std::vector<int> N) {
    if (a.empty() || a.size() != b.size() || a.size() != N.size())
      throw std::invalid_argument("lahiri descriptor: parameter lengths differ");
    for (std::size_t j = 0; j < a.size(); ++j)
      if (b[j] < 1 || b[j] % 2 == 0 || N[j] < 1 || a[j] < 0)
        throw std::invalid_argument("lahiri descriptor: need odd positive b, positive N, nonnegative a");
    SumDescriptor d;
    d.kind = Kind::Lahiri;
    d.va = std::move(a);
    d.vb = std::move(b);
    d.vN = std::move(N);
    return d;
  }

  Integer eval(long n) const {
    switch (kind) {
      case Kind::W: return oracle::W(N, n);
      case Kind::SMod: return oracle::S_mod(a, b, n);
      case Kind::Lahiri: return oracle::lahiri(va, vb, vN, n);
    }
    return 0;
  }

  std::string str() const {
    auto vec = [](const std::vector<int>& v) {
      std::string s = "(";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
      return s + ")";
    };
    switch (kind) {
      case Kind::W: return "W_" + std::to_string(N);
      case Kind::SMod: return "S[" + std::to_string(a) + "," + std::to_string(b) + "]";
      case Kind::Lahiri: return "S[" + vec(va) + "," + vec(vb) + "," + vec(vN) + "]";
    }
    return "";
  }

  /// Sweep bound used when none is requested.
  long default_nmax() const {
    if (kind != Kind::Lahiri || va.size() <= 2) return 500;
    return va.size() == 3 ? 300 : 100;
  }
};

struct RHSTerm {
  enum class Kind { Sigma, NSigma, ChiSigma, ChiNSigma, Tau, NTau, DeltaSigma };
  FieldElement scalar;
  Kind kind = Kind::Sigma;
  int j = 1;           // sigma index
  long t = 1;          // argument n / t
  int pow = 0;         // power of n in front
  std::string chi;     // character name
  std::string label;   // newform label
  long mod = 1, res = 0;
  std::string group;

  bool is_tau() const { return kind == Kind::Tau || kind == Kind::NTau; }
  bool uses_chi() const { return kind == Kind::ChiSigma || kind == Kind::ChiNSigma; }

  static Kind kind_from(const std::string& s) {
    if (s == "sigma") return Kind::Sigma;
    if (s == "n_sigma") return Kind::NSigma;
    if (s == "chi_sigma") return Kind::ChiSigma;
    if (s == "chi_n_sigma") return Kind::ChiNSigma;
    if (s == "tau") return Kind::Tau;
    if (s == "n_tau") return Kind::NTau;
    if (s == "delta_sigma") return Kind::DeltaSigma;
    throw std::invalid_argument("unknown rhs term kind " + s);
  }
  static std::string kind_name(Kind k) {
    switch (k) {
      case Kind::Sigma: return "sigma";
      case Kind::NSigma: return "n_sigma";
      case Kind::ChiSigma: return "chi_sigma";
      case Kind::ChiNSigma: return "chi_n_sigma";
      case Kind::Tau: return "tau";
      case Kind::NTau: return "n_tau";
      case Kind::DeltaSigma: return "delta_sigma";
    }
    return "";
  }

  std::string str() const {
    const std::string arg = t == 1 ? "n" : "n/" + std::to_string(t);
    std::string s = "(" + scalar.str() + ")";
    if (pow == 1) s += "*n";
    if (pow > 1) s += "*n^" + std::to_string(pow);
    if (uses_chi()) s += "*" + chi + "(n)";
    if (kind == Kind::DeltaSigma) s += "*[n=" + std::to_string(res) + " mod " + std::to_string(mod) + "]";
    if (is_tau()) return s + "*tau_" + label + "(" + arg + ")";
    return s + "*sigma_" + std::to_string(j) + "(" + arg + ")";
  }
};

struct IdentitySpec {
  std::string id;
  std::string statement;
  SumDescriptor lhs;
  Rational lhs_scalar = 1;
  std::vector<RHSTerm> rhs;
};

namespace detail {

inline std::vector<int> int_list(const nlohmann::json& j) {
  std::vector<int> v;
  for (const auto& x : j) v.push_back(x.get<int>());
  return v;
}

inline FieldElement scalar_from(const nlohmann::json& j) {
  if (j.is_number_integer()) return FieldElement(Rational(j.get<long>()));
  return FieldElement::parse(j.get<std::string>());
}

inline RHSTerm term_from_json(const nlohmann::json& j) {
  RHSTerm t;
  t.kind = RHSTerm::kind_from(j.at("kind").get<std::string>());
  t.scalar = scalar_from(j.at("c"));
  t.j = j.value("j", 1);
  t.t = j.value("t", 1L);
  const bool n_kind = t.kind == RHSTerm::Kind::NSigma || t.kind == RHSTerm::Kind::ChiNSigma || t.kind == RHSTerm::Kind::NTau;
  t.pow = j.value("pow", n_kind ? 1 : 0);
  t.chi = j.value("chi", std::string());
  t.label = j.value("label", std::string());
  t.mod = j.value("mod", 1L);
  t.res = j.value("res", 0L);
  t.group = j.value("group", std::string());
  if (t.t < 1) throw std::invalid_argument("rhs term divisor must be positive");
  if (n_kind != (t.pow > 0)) throw std::invalid_argument("rhs term power does not match its kind");
  if (t.is_tau() && t.label.empty()) throw std::invalid_argument("tau term without label");
  if (t.uses_chi()) make_character(t.chi);
  if (t.kind == RHSTerm::Kind::DeltaSigma && (t.mod < 1 || t.res < 0 || t.res >= t.mod))
    throw std::invalid_argument("delta term needs 0 <= res < mod");
  return t;
}

inline nlohmann::json term_to_json(const RHSTerm& t) {
  nlohmann::json j{{"kind", RHSTerm::kind_name(t.kind)}, {"c", t.scalar.str()}};
  if (t.is_tau()) j["label"] = t.label;
  else j["j"] = t.j;
  if (t.t != 1) j["t"] = t.t;
  if (t.pow > 1) j["pow"] = t.pow;
  if (t.uses_chi()) j["chi"] = t.chi;
  if (t.kind == RHSTerm::Kind::DeltaSigma) {
    j["mod"] = t.mod;
    j["res"] = t.res;
  }
  if (!t.group.empty()) j["group"] = t.group;
  return j;
}

}  // namespace detail

inline IdentitySpec identity_from_json(const nlohmann::json& j) {
  IdentitySpec s;
  s.id = j.at("id").get<std::string>();
  s.statement = j.value("statement", std::string());
  const std::string kind = j.at("lhs_kind").get<std::string>();
  const auto& p = j.at("lhs_params");
  if (kind == "W") s.lhs = SumDescriptor::w(p.at("N").get<long>());
  else if (kind == "S_mod") s.lhs = SumDescriptor::s_mod(p.at("a").get<long>(), p.at("b").get<long>());
  else if (kind == "lahiri")
    s.lhs = SumDescriptor::lahiri(detail::int_list(p.at("a")), detail::int_list(p.at("b")), detail::int_list(p.at("N")));
  else throw std::invalid_argument("unknown lhs kind " + kind);
  const auto& sc = j.value("lhs_scalar", nlohmann::json("1"));
  s.lhs_scalar = sc.is_number_integer() ? Rational(sc.get<long>()) : parse_rational(sc.get<std::string>());
  for (const auto& t : j.at("rhs_terms")) s.rhs.push_back(detail::term_from_json(t));
  return s;
}

inline nlohmann::json identity_to_json(const IdentitySpec& s) {
  nlohmann::json j{{"id", s.id}, {"statement", s.statement}, {"lhs_scalar", to_string(s.lhs_scalar)}};
  switch (s.lhs.kind) {
    case SumDescriptor::Kind::W:
      j["lhs_kind"] = "W";
      j["lhs_params"] = {{"N", s.lhs.N}};
      break;
    case SumDescriptor::Kind::SMod:
      j["lhs_kind"] = "S_mod";
      j["lhs_params"] = {{"a", s.lhs.a}, {"b", s.lhs.b}};
      break;
    case SumDescriptor::Kind::Lahiri:
      j["lhs_kind"] = "lahiri";
      j["lhs_params"] = {{"a", s.lhs.va}, {"b", s.lhs.vb}, {"N", s.lhs.vN}};
      break;
  }
  j["rhs_terms"] = nlohmann::json::array();
  for (const auto& t : s.rhs) j["rhs_terms"].push_back(detail::term_to_json(t));
  return j;
}

inline std::vector<IdentitySpec> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open identity catalog " + path);
  const nlohmann::json j = nlohmann::json::parse(in);
  std::vector<IdentitySpec> out;
  for (const auto& r : j.at("identities")) out.push_back(identity_from_json(r));
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (out[i].id == out[k].id) throw std::invalid_argument("duplicate identity id " + out[i].id);
  return out;
}

inline const std::vector<IdentitySpec>& catalog() {
  static const std::vector<IdentitySpec> c = load_catalog(std::string(QMF_DATA_DIR) + "/identities.json");
  return c;
}

inline const IdentitySpec& find_identity(const std::string& id, const std::vector<IdentitySpec>& cat = catalog()) {
  for (const auto& s : cat)
    if (s.id == id) return s;
  throw std::out_of_range("no identity " + id);
}

/// Newform label of a fixture table name: "tau_4_11_1" -> "4.11.1".
inline std::string fixture_label(const std::string& name) {
  if (name.rfind("tau_", 0) != 0) throw std::invalid_argument("fixture name must start with tau_: " + name);
  std::string s = name.substr(4);
  std::replace(s.begin(), s.end(), '_', '.');
  return s;
}

namespace detail {

inline FieldElement newform_coeff(const Newform& nf, long m) {
  if (m <= nf.prec()) return nf.expansion.coeff(static_cast<int>(m));
  return coefficient(nf, m);
}

inline Integer npow(long n, int e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(e));
  return r;
}

}  // namespace detail

/// Value of a single term at n, before multiplication by its scalar.
inline FieldElement evaluate_term(const RHSTerm& t, long n, const NewformRegistry& reg = NewformRegistry::shared()) {
  if (n % t.t != 0) return FieldElement(0);
  const long m = n / t.t;
  const Integer front = detail::npow(n, t.pow);
  if (t.is_tau()) return FieldElement(Rational(front)) * detail::newform_coeff(reg.get(t.label), m);
  Integer v = oracle::sigma(t.j, m) * front;
  if (t.uses_chi()) v *= make_character(t.chi)(n);
  if (t.kind == RHSTerm::Kind::DeltaSigma && ((n - t.res) % t.mod + t.mod) % t.mod != 0) v = 0;
  return FieldElement(Rational(v));
}

/// Sum of the RHS terms at n; throws if the total is not rational.
inline FieldElement evaluate_rhs(const IdentitySpec& spec, long n, const NewformRegistry& reg = NewformRegistry::shared()) {
  if (n < 1) throw std::invalid_argument("evaluate_rhs: n must be positive");
  FieldElement s(0);
  for (const auto& t : spec.rhs) {
    FieldElement v = evaluate_term(t, n, reg);
    if (!v.is_zero()) s += t.scalar * v;
  }
  if (!s.is_rational())
    throw std::domain_error(spec.id + ": right-hand side at n=" + std::to_string(n) + " is not rational: " + s.str());
  return s;
}

/// Symbolic check that quadratic scalars come in conjugate pairs attached to
/// conjugate newforms (or to identical terms). Returns a description of the
/// first unpaired term, or nullopt.
inline std::optional<std::string> check_trace_pairs(const IdentitySpec& spec,
                                                    const NewformRegistry& reg = NewformRegistry::shared()) {
  std::vector<bool> used(spec.rhs.size(), false);
  for (std::size_t i = 0; i < spec.rhs.size(); ++i) {
    const RHSTerm& x = spec.rhs[i];
    if (x.scalar.is_rational() || used[i]) continue;
    bool found = false;
    for (std::size_t k = i + 1; k < spec.rhs.size() && !found; ++k) {
      const RHSTerm& y = spec.rhs[k];
      if (used[k] || y.kind != x.kind || y.t != x.t || y.pow != x.pow || y.j != x.j || y.chi != x.chi ||
          y.mod != x.mod || y.res != x.res)
        continue;
      if (!(y.scalar == x.scalar.conj())) continue;
      if (x.is_tau() && x.label != y.label) {
        const Newform& f = reg.get(x.label);
        const Newform& g = reg.get(y.label);
        if (!same_field(f.field, x.scalar.field()) || !same_field(g.field, x.scalar.field())) continue;
        const int prec = std::min(f.prec(), g.prec());
        bool conj = true;
        for (int n = 0; n <= prec && conj; ++n) conj = f.expansion.coeff(n).conj() == g.expansion.coeff(n);
        if (!conj) continue;
      }
      used[i] = used[k] = true;
      found = true;
    }
    if (!found) return spec.id + ": term " + x.str() + " has no conjugate partner";
  }
  return std::nullopt;
}

struct VerifyFailure {
  long n = 0;
  Rational lhs;
  FieldElement rhs;
  std::string error;
};

struct VerifyReport {
  std::string id;
  long n_max = 0;
  long passed = 0;
  std::vector<VerifyFailure> failures;

  bool ok() const { return failures.empty(); }

  nlohmann::json json() const {
    nlohmann::json f = nlohmann::json::array();
    for (const auto& x : failures) {
      nlohmann::json e{{"n", x.n}, {"lhs", to_string(x.lhs)}, {"rhs", x.rhs.str()}};
      if (!x.error.empty()) e["error"] = x.error;
      f.push_back(e);
    }
    return {{"id", id}, {"n_max", n_max}, {"passed", passed}, {"failures", f}};
  }
};

/// Compares lhs_scalar * oracle(n) with the closed form for 1 <= n <= n_max,
/// sharding the range over `jobs` threads; the report is independent of jobs.
inline VerifyReport verify(const IdentitySpec& spec, long n_max, int jobs = 1,
                           const NewformRegistry& reg = NewformRegistry::shared()) {
  VerifyReport rep;
  rep.id = spec.id;
  rep.n_max = n_max;
  if (n_max < 1) return rep;
  if (auto bad = check_trace_pairs(spec, reg)) {
    rep.failures.push_back({0, 0, FieldElement(0), *bad});
    return rep;
  }
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(n_max)));
  std::vector<std::vector<VerifyFailure>> parts(static_cast<std::size_t>(jobs));
  auto work = [&](int w) {
    for (long n = 1 + w; n <= n_max; n += jobs) {
      const Rational lhs = spec.lhs_scalar * Rational(spec.lhs.eval(n));
      try {
        const FieldElement rhs = evaluate_rhs(spec, n, reg);
        if (!(rhs == FieldElement(lhs))) parts[static_cast<std::size_t>(w)].push_back({n, lhs, rhs, ""});
      } catch (const std::exception& e) {
        parts[static_cast<std::size_t>(w)].push_back({n, lhs, FieldElement(0), e.what()});
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (auto& p : parts) rep.failures.insert(rep.failures.end(), p.begin(), p.end());
  std::sort(rep.failures.begin(), rep.failures.end(), [](const auto& x, const auto& y) { return x.n < y.n; });
  rep.passed = n_max - static_cast<long>(rep.failures.size());
  return rep;
}

}  // namespace qmf
