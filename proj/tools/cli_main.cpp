// Command-line front end: evaluates the operators on grids, runs the
// verification suites, runs convergence studies, and lists the catalog.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric
// failure (domain / pole / non-convergence).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psifrac/catalog.hpp"
#include "psifrac/expr.hpp"
#include "psifrac/operators.hpp"
#include "psifrac/psi.hpp"
#include "psifrac/specialfn.hpp"
#include "psifrac/verify.hpp"

using namespace psifrac;
using operators::OrderSpec;
using operators::Side;

namespace {

struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

const char kUsage[] =
    "usage: psifrac <command> [flags]\n"
    "\n"
    "commands:\n"
    "  eval      evaluate an operator at a point or on a grid\n"
    "  catalog   evaluate a named classical operator (or --list the registry)\n"
    "  verify    run the verification suites\n"
    "  converge  report the observed quadrature convergence order\n"
    "  list      show commands, operators, psi choices and suites\n"
    "\n"
    "eval flags:\n"
    "  --op integral|rl|caputo|hilfer   operator (required)\n"
    "  --side left|right                base side (default left)\n"
    "  --alpha <real>                   order, > 0 (required)\n"
    "  --beta <real>                    type in [0,1], hilfer only (default 0)\n"
    "  --psi identity|log|pow:<rho>|expr:<text>   (required)\n"
    "  --f <expr>                       integrand (required)\n"
    "  --a <real> --b <real>            interval, a < b (required)\n"
    "  --x <real> | --grid <N>          one point, or N >= 2 uniform points\n"
    "                                   over (a, b] (one of the two required)\n"
    "  --out <path>                     output file (default standard output)\n"
    "  --format csv|json                (default csv)\n"
    "  --quad-nodes <N> --quad-tol <t>  quadrature overrides\n"
    "\n"
    "catalog flags: --list, or --name <id> --kind integral|derivative\n"
    "  [--param k=v ...] plus the eval flags except --op/--side/--beta\n"
    "  (--psi defaults to identity)\n"
    "\n"
    "verify flags: --suite power|ml|semigroup|inversion|bounds|catalog|all\n"
    "  (default all), --tol <t> overrides every case tolerance\n"
    "\n"
    "converge flags: the eval flags with --x only (no --grid); --levels <n>\n"
    "  mesh doublings (default 4)\n";

// ---- flag parsing --------------------------------------------------------

struct Args {
  std::map<std::string, std::string> flags;
  std::vector<std::string> params;  // repeatable --param k=v
  bool list = false;
};

Args parse_args(int argc, char** argv) {
  Args out;
  for (int i = 2; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--list") {
      out.list = true;
      continue;
    }
    if (a.size() < 3 || a.compare(0, 2, "--") != 0)
      throw UsageError("unexpected argument '" + a + "'");
    if (i + 1 >= argc) throw UsageError("flag '" + a + "' needs a value");
    const std::string value = argv[++i];
    if (a == "--param") {
      out.params.push_back(value);
    } else {
      if (!out.flags.emplace(a.substr(2), value).second)
        throw UsageError("flag '" + a + "' given twice");
    }
  }
  return out;
}

std::optional<std::string> get(const Args& args, const std::string& key) {
  auto it = args.flags.find(key);
  if (it == args.flags.end()) return std::nullopt;
  return it->second;
}

std::string require(const Args& args, const std::string& key) {
  auto v = get(args, key);
  if (!v) throw UsageError("missing required flag '--" + key + "'");
  return *v;
}

double to_real(const std::string& key, const std::string& text) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("flag '--" + key + "': '" + text + "' is not a number");
}

int to_int(const std::string& key, const std::string& text) {
  const double v = to_real(key, text);
  if (v != std::floor(v) || std::fabs(v) > 1e9)
    throw UsageError("flag '--" + key + "': '" + text + "' is not an integer");
  return static_cast<int>(v);
}

void reject_unknown(const Args& args, std::initializer_list<const char*> ok) {
  for (const auto& [key, value] : args.flags) {
    bool found = false;
    for (const char* k : ok) found = found || key == k;
    if (!found) throw UsageError("unknown flag '--" + key + "'");
  }
}

// ---- shared job pieces ---------------------------------------------------

psi::PsiSpec make_psi(const std::string& text, double a, double b) {
  if (text == "identity") return psi::make_identity(a, b);
  if (text == "log") return psi::make_log(a, b);
  if (text.compare(0, 4, "pow:") == 0)
    return psi::make_power(to_real("psi", text.substr(4)), a, b);
  if (text.compare(0, 5, "expr:") == 0)
    return psi::make_custom(text.substr(5), a, b);
  throw UsageError("flag '--psi': unknown selector '" + text + "'");
}

Fn make_f(const std::string& text) {
  try {
    return Fn(expr::parse(text));
  } catch (const expr::ParseError& e) {
    throw UsageError(std::string("flag '--f': ") + e.what());
  }
}

quad::QuadConfig make_config(const Args& args) {
  quad::QuadConfig cfg;
  if (auto v = get(args, "quad-nodes")) {
    cfg.nodes = to_int("quad-nodes", *v);
    if (cfg.nodes < 9) throw UsageError("flag '--quad-nodes': need >= 9");
  }
  if (auto v = get(args, "quad-tol")) {
    cfg.tol = to_real("quad-tol", *v);
    if (cfg.tol <= 0) throw UsageError("flag '--quad-tol': need > 0");
  }
  return cfg;
}

// The evaluation points: --x alone, or --grid N uniform over (a, b]
// (endpoint-exclusive at a).
std::vector<double> make_points(const Args& args, double a, double b) {
  const auto x = get(args, "x");
  const auto grid = get(args, "grid");
  if (static_cast<bool>(x) == static_cast<bool>(grid))
    throw UsageError("exactly one of --x and --grid is required");
  if (x) return {to_real("x", *x)};
  const int n = to_int("grid", *grid);
  if (n < 2) throw UsageError("flag '--grid': need >= 2 points");
  std::vector<double> pts(n);
  for (int i = 1; i <= n; ++i) pts[i - 1] = a + (b - a) * i / n;
  return pts;
}

// ---- output --------------------------------------------------------------

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "\\u%04x", c);
      out += buf;
    } else {
      out += c;
    }
  }
  return out;
}

struct Row {
  double x, value, err_est;
};

std::string render(const std::string& format,
                   const std::vector<std::pair<std::string, std::string>>&
                       inputs,  // key, already-rendered JSON value
                   const std::vector<Row>& rows) {
  std::string out;
  if (format == "csv") {
    out = "x,value,err_est\n";
    for (const auto& r : rows)
      out += num(r.x) + "," + num(r.value) + "," + num(r.err_est) + "\n";
    return out;
  }
  out = "{\n  \"inputs\": {";
  for (size_t i = 0; i < inputs.size(); ++i)
    out += std::string(i ? "," : "") + "\n    \"" + inputs[i].first +
           "\": " + inputs[i].second;
  out += "\n  },\n  \"results\": [";
  for (size_t i = 0; i < rows.size(); ++i)
    out += std::string(i ? "," : "") + "\n    {\"x\": " + num(rows[i].x) +
           ", \"value\": " + num(rows[i].value) +
           ", \"err_est\": " + num(rows[i].err_est) + "}";
  out += "\n  ]\n}\n";
  return out;
}

void emit(const Args& args, const std::string& text) {
  const auto path = get(args, "out");
  if (!path) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::FILE* f = std::fopen(path->c_str(), "wb");
  if (!f) throw UsageError("cannot open output file '" + *path + "'");
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

std::string check_format(const Args& args) {
  const std::string fmt = get(args, "format").value_or("csv");
  if (fmt != "csv" && fmt != "json")
    throw UsageError("flag '--format': expected csv or json");
  return fmt;
}

std::string quoted(const std::string& s) {
  return "\"" + json_escape(s) + "\"";
}

// ---- commands ------------------------------------------------------------

int cmd_eval(const Args& args) {
  reject_unknown(args, {"op", "side", "alpha", "beta", "psi", "f", "a", "b",
                        "x", "grid", "out", "format", "quad-nodes",
                        "quad-tol"});
  const std::string op = require(args, "op");
  if (op != "integral" && op != "rl" && op != "caputo" && op != "hilfer")
    throw UsageError("flag '--op': expected integral, rl, caputo or hilfer");
  const std::string side_text = get(args, "side").value_or("left");
  if (side_text != "left" && side_text != "right")
    throw UsageError("flag '--side': expected left or right");
  const Side side = side_text == "left" ? Side::kLeft : Side::kRight;
  const double alpha = to_real("alpha", require(args, "alpha"));
  if (alpha <= 0) throw UsageError("flag '--alpha': need > 0");
  const double beta = to_real("beta", get(args, "beta").value_or("0"));
  if (get(args, "beta") && op != "hilfer")
    throw UsageError("flag '--beta' only applies to --op hilfer");
  if (beta < 0 || beta > 1) throw UsageError("flag '--beta': need in [0, 1]");
  const double a = to_real("a", require(args, "a"));
  const double b = to_real("b", require(args, "b"));
  if (!(a < b)) throw UsageError("need a < b");
  const std::string psi_text = require(args, "psi");
  const std::string f_text = require(args, "f");
  const std::string fmt = check_format(args);
  const auto points = make_points(args, a, b);
  const auto cfg = make_config(args);

  const auto ps = make_psi(psi_text, a, b);
  const Fn f = make_f(f_text);

  std::vector<Row> rows;
  for (double x : points) {
    quad::EvalResult r;
    if (op == "integral") {
      r = operators::frac_integral(ps, alpha, side, f, x, cfg);
    } else {
      const double type = op == "rl" ? 0.0 : op == "caputo" ? 1.0 : beta;
      r = operators::hilfer_derivative(ps, OrderSpec::make(alpha, type), side,
                                       f, x, cfg);
    }
    rows.push_back({x, r.value, r.err_est});
  }
  emit(args, render(fmt,
                    {{"command", quoted("eval")},
                     {"op", quoted(op)},
                     {"side", quoted(side_text)},
                     {"alpha", num(alpha)},
                     {"beta", num(beta)},
                     {"psi", quoted(psi_text)},
                     {"f", quoted(f_text)},
                     {"a", num(a)},
                     {"b", num(b)}},
                    rows));
  return 0;
}

int cmd_catalog(const Args& args) {
  if (args.list) {
    reject_unknown(args, {});
    for (const auto& e : catalog::registry()) {
      std::string params;
      for (const auto& p : e.required) params += " " + p;
      for (const auto& p : e.optional) params += " [" + p + "]";
      std::printf("%-10s %-20s%-28s %s\n",
                  e.kind == catalog::OpKind::kIntegral ? "integral"
                                                       : "derivative",
                  e.name.c_str(), params.c_str(), e.note.c_str());
    }
    return 0;
  }
  reject_unknown(args, {"name", "kind", "alpha", "psi", "f", "a", "b", "x",
                        "grid", "out", "format", "quad-nodes", "quad-tol"});
  const std::string name = require(args, "name");
  const std::string kind_text = get(args, "kind").value_or("integral");
  if (kind_text != "integral" && kind_text != "derivative")
    throw UsageError("flag '--kind': expected integral or derivative");
  const auto kind = kind_text == "integral" ? catalog::OpKind::kIntegral
                                            : catalog::OpKind::kDerivative;
  const double alpha = to_real("alpha", require(args, "alpha"));
  if (alpha <= 0) throw UsageError("flag '--alpha': need > 0");
  const double a = to_real("a", require(args, "a"));
  const double b = to_real("b", require(args, "b"));
  if (!(a < b)) throw UsageError("need a < b");
  const std::string psi_text = get(args, "psi").value_or("identity");
  const std::string f_text = require(args, "f");
  const std::string fmt = check_format(args);
  const auto points = make_points(args, a, b);
  const auto cfg = make_config(args);

  catalog::ParamMap params;
  for (const auto& p : args.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("flag '--param': expected k=v, got '" + p + "'");
    params[p.substr(0, eq)] = to_real("param", p.substr(eq + 1));
  }

  catalog::Preset preset;
  try {
    preset = catalog::resolve(kind, name, params);
  } catch (const DomainError& e) {
    throw UsageError(e.what());  // bad name / parameters: a usage problem
  }
  const auto ps = make_psi(psi_text, a, b);
  const Fn f = make_f(f_text);

  std::vector<Row> rows;
  for (double x : points) {
    const auto r = catalog::apply(preset, alpha, f, ps, x, cfg);
    rows.push_back({x, r.value, r.err_est});
  }
  std::string params_json = "{";
  bool first = true;
  for (const auto& [k, v] : preset.params) {
    params_json += std::string(first ? "" : ", ") + "\"" + k +
                   "\": " + num(v);
    first = false;
  }
  params_json += "}";
  emit(args, render(fmt,
                    {{"command", quoted("catalog")},
                     {"name", quoted(name)},
                     {"kind", quoted(kind_text)},
                     {"params", params_json},
                     {"alpha", num(alpha)},
                     {"psi", quoted(psi_text)},
                     {"f", quoted(f_text)},
                     {"a", num(a)},
                     {"b", num(b)}},
                    rows));
  return 0;
}

int cmd_verify(const Args& args) {
  reject_unknown(args, {"suite", "tol"});
  const std::string suite = get(args, "suite").value_or("all");
  double tol = 0.0;
  if (auto v = get(args, "tol")) {
    tol = to_real("tol", *v);
    if (tol <= 0) throw UsageError("flag '--tol': need > 0");
  }
  std::vector<verify::SuiteReport> reports;
  try {
    reports = verify::run(suite, tol);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  bool all_pass = true;
  for (const auto& rep : reports) {
    for (const auto& c : rep.cases)
      std::printf("%s  %s/%s  error=%.3e  tol=%.1e\n",
                  c.pass ? "pass" : "FAIL", rep.suite.c_str(), c.name.c_str(),
                  c.error, c.tol);
    std::printf("%s  suite %s: %zu cases\n", rep.pass ? "pass" : "FAIL",
                rep.suite.c_str(), rep.cases.size());
    all_pass = all_pass && rep.pass;
  }
  return all_pass ? 0 : 1;
}

int cmd_converge(const Args& args) {
  reject_unknown(args, {"op", "side", "alpha", "beta", "psi", "f", "a", "b",
                        "x", "levels", "quad-nodes", "quad-tol"});
  if (get(args, "grid"))
    throw UsageError("converge takes --x, not --grid");
  const int levels =
      get(args, "levels") ? to_int("levels", *get(args, "levels")) : 4;
  if (levels < 3) throw UsageError("flag '--levels': need >= 3");

  // Re-run the eval job at doubled node counts with Richardson refinement
  // switched off, then report the observed order between mesh levels.
  Args sub = args;
  sub.flags.erase("levels");
  sub.flags["format"] = "csv";
  sub.flags.erase("out");

  const double alpha = to_real("alpha", require(args, "alpha"));
  const double a = to_real("a", require(args, "a"));
  const double b = to_real("b", require(args, "b"));
  if (!(a < b)) throw UsageError("need a < b");
  const std::string op = require(args, "op");
  const std::string side_text = get(args, "side").value_or("left");
  const Side side = side_text == "left" ? Side::kLeft : Side::kRight;
  const double x = to_real("x", require(args, "x"));
  const auto ps = make_psi(require(args, "psi"), a, b);
  const Fn f = make_f(require(args, "f"));
  quad::QuadConfig cfg = make_config(args);
  cfg.refinement = 1;
  if (!get(args, "quad-nodes")) cfg.nodes = 64;

  std::vector<double> values;
  for (int level = 0; level < levels; ++level) {
    quad::QuadConfig c = cfg;
    c.nodes = cfg.nodes << level;
    double v;
    if (op == "integral") {
      v = operators::frac_integral(ps, alpha, side, f, x, c).value;
    } else if (op == "rl" || op == "caputo" || op == "hilfer") {
      const double beta = op == "rl" ? 0.0 : op == "caputo" ? 1.0
                          : to_real("beta", get(args, "beta").value_or("0"));
      v = operators::hilfer_derivative(ps, OrderSpec::make(alpha, beta), side,
                                       f, x, c)
              .value;
    } else {
      throw UsageError("flag '--op': expected integral, rl, caputo or hilfer");
    }
    values.push_back(v);
    std::printf("nodes=%-7d value=%s\n", c.nodes, num(v).c_str());
  }
  for (int level = 0; level + 2 < levels; ++level) {
    const double e1 = std::fabs(values[level] - values[level + 1]);
    const double e2 = std::fabs(values[level + 1] - values[level + 2]);
    if (e2 == 0.0) {
      std::printf("order[%d->%d]=inf (converged)\n", level, level + 2);
    } else {
      std::printf("order[%d->%d]=%.3f\n", level, level + 2,
                  std::log2(e1 / e2));
    }
  }
  return 0;
}

int cmd_list() {
  std::printf("commands: eval catalog verify converge list\n");
  std::printf("operators (--op): integral rl caputo hilfer\n");
  std::printf("psi (--psi): identity log pow:<rho> expr:<text>\n");
  std::printf("verify suites (--suite): ");
  for (const auto& s : verify::suite_names()) std::printf("%s ", s.c_str());
  std::printf("all\n");
  std::printf("catalog: %zu named operators; see 'catalog --list'\n",
              catalog::registry().size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fputs(kUsage, stderr);
    return 2;
  }
  const std::string command = argv[1];
  try {
    const Args args = parse_args(argc, argv);
    if (command == "eval") return cmd_eval(args);
    if (command == "catalog") return cmd_catalog(args);
    if (command == "verify") return cmd_verify(args);
    if (command == "converge") return cmd_converge(args);
    if (command == "list") return cmd_list();
    if (command == "--help" || command == "help") {
      std::fputs(kUsage, stdout);
      return 0;
    }
    throw UsageError("unknown command '" + command + "'");
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
