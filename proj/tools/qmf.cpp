// qmf: command line front end for the quasimodular form engine.

#include <qmf/identities.hpp>
#include <qmf/linearize.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace qmf;

enum class Format { Human, Jsonl, Csv };

struct RunConfig {
  int precision = 256;
  std::string format = "human";
  std::string catalog = std::string(QMF_DATA_DIR) + "/identities.json";
  std::string fixtures = std::string(QMF_DATA_DIR) + "/tables.txt";

  Format fmt() const {
    if (format == "jsonl") return Format::Jsonl;
    if (format == "csv") return Format::Csv;
    return Format::Human;
  }
};

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
  return o + "\"";
}

std::vector<int> int_list(const std::string& text) {
  std::vector<int> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    try {
      v.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw UsageError("not an integer list: " + text);
    }
  }
  return v;
}

std::pair<long, long> n_range(const std::string& text) {
  try {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
      const long n = std::stol(text);
      return {n, n};
    }
    return {std::stol(text.substr(0, dots)), std::stol(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("expected n or a..b, got " + text);
  }
}

void print_series(const std::string& name, const QSeries& s, int upto, Format f) {
  for (int n = 0; n <= upto; ++n) {
    const std::string c = s.coeff(n).str();
    switch (f) {
      case Format::Human: std::cout << "q^" << n << "  " << c << "\n"; break;
      case Format::Jsonl: std::cout << nlohmann::json{{"expr", name}, {"n", n}, {"coeff", c}}.dump() << "\n"; break;
      case Format::Csv:
        if (n == 0) std::cout << "expr,n,coeff\n";
        std::cout << csv_quote(name) << "," << n << "," << csv_quote(c) << "\n";
        break;
    }
  }
}

void print_named_series(const std::vector<std::pair<std::string, QSeries>>& rows, int terms, Format f) {
  if (f == Format::Csv) std::cout << "name,n,coeff\n";
  for (const auto& [name, s] : rows) {
    if (f == Format::Human) {
      std::cout << name << ":";
      for (int n = 0; n <= terms; ++n) std::cout << " " << s.coeff(n).str();
      std::cout << "\n";
      continue;
    }
    for (int n = 0; n <= terms; ++n) {
      if (f == Format::Jsonl) std::cout << nlohmann::json{{"name", name}, {"n", n}, {"coeff", s.coeff(n).str()}}.dump() << "\n";
      else std::cout << csv_quote(name) << "," << n << "," << csv_quote(s.coeff(n).str()) << "\n";
    }
  }
}

int cmd_expand(const RunConfig& cfg, const std::string& text, int q) {
  if (q < 0) throw UsageError("--prec must be nonnegative");
  FormContext ctx(std::max(q, 16));
  const ExprPtr e = ctx.parse(text);
  print_series(e->str(), ctx.eval(e, std::max(q, 16)), q, cfg.fmt());
  return 0;
}

int cmd_basis(const RunConfig& cfg, int k, int N, bool cusp, int terms) {
  NewformRegistry reg(cfg.precision);
  const SpaceBasis& b = reg.context().space(k, N, cusp);
  std::vector<std::pair<std::string, QSeries>> rows;
  for (const auto& [e, s] : b.generators) rows.emplace_back(e->str(), s);
  if (cfg.fmt() == Format::Human)
    std::cout << (cusp ? "S_" : "M_") << k << "(Gamma_0(" << N << ")): dimension " << b.dimension() << "\n";
  print_named_series(rows, terms, cfg.fmt());
  return 0;
}

int cmd_newforms(const RunConfig& cfg, int k, int N, int terms) {
  NewformRegistry reg(cfg.precision);
  std::vector<Newform> forms;
  const auto known = reg.at(k, N);
  if (!known.empty()) {
    for (const auto* f : known) forms.push_back(*f);
  } else {
    forms = extract_newforms(reg.context().space(k, N, true), reg.old_span(k, N));
    label_newforms(forms);
  }
  const Format f = cfg.fmt();
  if (f == Format::Csv) std::cout << "label,field,n,coeff\n";
  for (const auto& nf : forms) {
    const std::string field = field_name(nf.field);
    if (f == Format::Human) {
      std::cout << nf.label << " [" << field << "]:";
      for (int n = 1; n <= terms; ++n) std::cout << " " << nf.expansion.coeff(n).str();
      std::cout << "\n";
      continue;
    }
    for (int n = 1; n <= terms; ++n) {
      const std::string c = nf.expansion.coeff(n).str();
      if (f == Format::Jsonl)
        std::cout << nlohmann::json{{"label", nf.label}, {"field", field}, {"n", n}, {"coeff", c}}.dump() << "\n";
      else std::cout << nf.label << "," << csv_quote(field) << "," << n << "," << csv_quote(c) << "\n";
    }
  }
  return 0;
}

int cmd_linearize(const RunConfig& cfg, const std::string& text, int k, int N, const std::string& weights,
                  int depth, const std::vector<std::string>& custom) {
  NewformRegistry reg(cfg.precision);
  FormContext& ctx = reg.context();
  const ExprPtr e = ctx.parse(text);
  QMBasis basis;
  if (!custom.empty()) {
    basis = custom_basis(ctx, custom);
  } else {
    std::vector<int> ks = weights.empty() ? std::vector<int>{k} : int_list(weights);
    std::vector<QMBasis> parts;
    for (int w : ks) parts.push_back(qm_basis(ctx, w, N, depth < 0 ? w : depth));
    basis = qm_basis_union(parts);
  }
  const Decomposition d = decompose(ctx.eval(e), basis);
  const auto names = basis.names();
  const Format f = cfg.fmt();
  if (f == Format::Human) std::cout << e->str() << " (verified to q^" << d.verified_to << ")\n";
  if (f == Format::Csv) std::cout << "element,coeff\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::string c = d.coefficients[i].str();
    if (f == Format::Human) std::cout << "  " << c << "  " << names[i] << "\n";
    else if (f == Format::Jsonl) std::cout << nlohmann::json{{"element", names[i]}, {"coeff", c}}.dump() << "\n";
    else std::cout << csv_quote(names[i]) << "," << csv_quote(c) << "\n";
  }
  return 0;
}

int cmd_convolve(const RunConfig& cfg, const std::string& kind, long N, long a, long b, const std::string& va,
                 const std::string& vb, const std::string& vN, const std::string& range) {
  SumDescriptor d;
  if (kind == "W") d = SumDescriptor::w(N);
  else if (kind == "Smod") d = SumDescriptor::s_mod(a, b);
  else if (kind == "lahiri") d = SumDescriptor::lahiri(int_list(va), int_list(vb), int_list(vN));
  else throw UsageError("--kind must be W, Smod or lahiri");
  const auto [lo, hi] = n_range(range);
  if (lo < 1 || hi < lo) throw UsageError("bad range " + range);
  const Format f = cfg.fmt();
  if (f == Format::Csv) std::cout << "sum,n,value\n";
  for (long n = lo; n <= hi; ++n) {
    const std::string v = d.eval(n).get_str();
    if (f == Format::Human) {
      if (lo == hi) std::cout << v << "\n";
      else std::cout << d.str() << "(" << n << ") = " << v << "\n";
    } else if (f == Format::Jsonl) {
      std::cout << nlohmann::json{{"sum", d.str()}, {"n", n}, {"value", v}}.dump() << "\n";
    } else {
      std::cout << csv_quote(d.str()) << "," << n << "," << v << "\n";
    }
  }
  return 0;
}

int cmd_tables(const RunConfig& cfg, const std::string& name, bool check) {
  const oracle::FixtureTable tab = oracle::FixtureTable::load(cfg.fixtures);
  std::vector<std::string> names = name.empty() ? tab.names() : std::vector<std::string>{name};
  const NewformRegistry* reg = check ? &NewformRegistry::shared() : nullptr;
  const Format f = cfg.fmt();
  bool all_ok = true;
  if (f == Format::Csv) std::cout << (check ? "table,n,expected,computed,match\n" : "table,n,expected\n");
  for (const auto& t : names) {
    const auto& entries = tab.entries(t);
    const Newform* nf = reg ? &reg->get(fixture_label(t)) : nullptr;
    std::size_t good = 0;
    for (const auto& [n, v] : entries) {
      std::string computed;
      bool ok = true;
      if (nf) {
        const FieldElement c = coefficient(*nf, n);
        ok = c == v;
        computed = c.str();
        good += ok;
      }
      if (f == Format::Jsonl) {
        nlohmann::json j{{"table", t}, {"n", n}, {"expected", v.str()}};
        if (nf) {
          j["computed"] = computed;
          j["match"] = ok;
        }
        std::cout << j.dump() << "\n";
      } else if (f == Format::Csv) {
        std::cout << t << "," << n << "," << csv_quote(v.str());
        if (nf) std::cout << "," << csv_quote(computed) << "," << (ok ? "true" : "false");
        std::cout << "\n";
      } else if (!check) {
        std::cout << t << "(" << n << ") = " << v.str() << "\n";
      } else if (!ok) {
        std::cout << t << "(" << n << "): expected " << v.str() << ", computed " << computed << "\n";
      }
    }
    if (check) {
      all_ok = all_ok && good == entries.size();
      if (f == Format::Human)
        std::cout << (names.size() > 1 ? t + ": " : std::string()) << good << "/" << entries.size() << " match\n";
    }
  }
  return all_ok ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, const std::string& id, bool all, long nmax, int jobs) {
  if (all == !id.empty()) throw UsageError("verify needs exactly one of --id or --all");
  const std::vector<IdentitySpec> cat = load_catalog(cfg.catalog);
  std::vector<const IdentitySpec*> todo;
  if (all) {
    for (const auto& s : cat) todo.push_back(&s);
  } else {
    try {
      todo.push_back(&find_identity(id, cat));
    } catch (const std::out_of_range& e) {
      throw UsageError(e.what());
    }
  }
  const Format f = cfg.fmt();
  if (f == Format::Csv) std::cout << "id,n_max,passed,failed\n";
  bool ok = true;
  for (const auto* s : todo) {
    const VerifyReport r = verify(*s, nmax > 0 ? nmax : s->lhs.default_nmax(), jobs);
    ok = ok && r.ok();
    if (f == Format::Jsonl) {
      std::cout << r.json().dump() << "\n";
    } else if (f == Format::Csv) {
      std::cout << r.id << "," << r.n_max << "," << r.passed << "," << r.failures.size() << "\n";
    } else {
      std::cout << r.id << " " << (r.ok() ? "PASS" : "FAIL") << " " << r.passed << "/" << r.n_max << "\n";
      for (std::size_t i = 0; i < r.failures.size() && i < 5; ++i) {
        const auto& x = r.failures[i];
        std::cout << "  n=" << x.n << " lhs=" << to_string(x.lhs) << " rhs=" << x.rhs.str();
        if (!x.error.empty()) std::cout << " (" << x.error << ")";
        std::cout << "\n";
      }
    }
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact quasimodular form engine and convolution identity verifier"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value configuration file");

  RunConfig cfg;
  app.add_option("--precision", cfg.precision, "working q-adic precision")->check(CLI::Range(64, 1 << 16));
  app.add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"human", "jsonl", "csv"}));
  app.add_option("--catalog", cfg.catalog, "identity catalog file");
  app.add_option("--fixtures", cfg.fixtures, "coefficient table file");

  std::function<int()> run;

  auto* expand = app.add_subcommand("expand", "print the q-expansion of a form expression");
  std::string expr_text;
  int q = 20;
  expand->add_option("expr", expr_text, "form expression")->required();
  expand->add_option("--prec", q, "print coefficients up to q^Q");
  expand->callback([&] { run = [&] { return cmd_expand(cfg, expr_text, q); }; });

  auto* basis = app.add_subcommand("basis", "generators of M_k(Gamma_0(N)) or S_k(Gamma_0(N))");
  int k = 0, level = 0, terms = 10;
  bool cusp = false;
  basis->add_option("--weight", k)->required();
  basis->add_option("--level", level)->required();
  basis->add_flag("--cuspidal", cusp);
  basis->add_option("--terms", terms, "number of coefficients shown");
  basis->callback([&] { run = [&] { return cmd_basis(cfg, k, level, cusp, terms); }; });

  auto* newforms = app.add_subcommand("newforms", "normalized Hecke eigenforms of S_k(Gamma_0(N))");
  newforms->add_option("--weight", k)->required();
  newforms->add_option("--level", level)->required();
  newforms->add_option("--terms", terms, "number of coefficients shown");
  newforms->callback([&] { run = [&] { return cmd_newforms(cfg, k, level, terms); }; });

  auto* linearize = app.add_subcommand("linearize", "decompose an expression in a quasimodular basis");
  std::string weights;
  int depth = -1;
  std::vector<std::string> custom;
  linearize->add_option("expr", expr_text, "form expression")->required();
  linearize->add_option("--weight", k)->required();
  linearize->add_option("--level", level)->required();
  linearize->add_option("--weights", weights, "comma separated weights for a union basis");
  linearize->add_option("--depth", depth, "maximal depth of basis elements");
  linearize->add_option("--basis", custom, "explicit basis expressions (repeatable)");
  linearize->callback([&] { run = [&] { return cmd_linearize(cfg, expr_text, k, level, weights, depth, custom); }; });

  auto* convolve = app.add_subcommand("convolve", "brute-force convolution sums");
  std::string kind, va, vb, vN, range;
  long cN = 1, ca = 0, cb = 1;
  convolve->add_option("--kind", kind)->required()->check(CLI::IsMember({"W", "Smod", "lahiri"}));
  convolve->add_option("--N", cN, "level for W");
  convolve->add_option("--a", ca, "residue for Smod");
  convolve->add_option("--b", cb, "modulus for Smod");
  convolve->add_option("--avec", va, "lahiri exponents, comma separated");
  convolve->add_option("--bvec", vb, "lahiri sigma indices, comma separated");
  convolve->add_option("--Nvec", vN, "lahiri levels, comma separated");
  convolve->add_option("--n", range, "n or a..b")->required();
  convolve->callback([&] { run = [&] { return cmd_convolve(cfg, kind, cN, ca, cb, va, vb, vN, range); }; });

  auto* tables = app.add_subcommand("tables", "print or check the coefficient tables");
  std::string tname;
  bool check = false;
  tables->add_option("--name", tname, "table name, all tables when omitted");
  tables->add_flag("--check", check, "compare with computed newforms");
  tables->callback([&] { run = [&] { return cmd_tables(cfg, tname, check); }; });

  auto* verify_cmd = app.add_subcommand("verify", "check identities against the oracle");
  std::string id;
  bool all = false;
  long nmax = 0;
  int jobs = 1;
  verify_cmd->add_option("--id", id);
  verify_cmd->add_flag("--all", all);
  verify_cmd->add_option("--nmax", nmax, "sweep bound, per-class default when omitted");
  verify_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256));
  verify_cmd->callback([&] { run = [&] { return cmd_verify(cfg, id, all, nmax, jobs); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    return run();
  } catch (const DecompositionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.first_bad() >= 0 ? 1 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
