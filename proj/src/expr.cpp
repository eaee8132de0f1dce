#include "psifrac/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

#include "psifrac/specialfn.hpp"

namespace psifrac {
namespace expr {

namespace {

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

int function_arity(const std::string& name) {
  static const std::map<std::string, int> kArity = {
      {"exp", 1}, {"ln", 1},  {"sin", 1},   {"cos", 1},
      {"sqrt", 1}, {"pow", 2}, {"gamma", 1}, {"mlf", 2}};
  auto it = kArity.find(name);
  return it == kArity.end() ? -1 : it->second;
}

}  // namespace

NodePtr constant(double v) {
  Node n;
  n.kind = Kind::kConstant;
  n.value = v;
  return make_node(std::move(n));
}

NodePtr variable() {
  Node n;
  n.kind = Kind::kVariable;
  return make_node(std::move(n));
}

NodePtr unary_minus(NodePtr a) {
  Node n;
  n.kind = Kind::kUnary;
  n.op = '-';
  n.args = {std::move(a)};
  return make_node(std::move(n));
}

NodePtr binary(char op, NodePtr a, NodePtr b) {
  Node n;
  n.kind = Kind::kBinary;
  n.op = op;
  n.args = {std::move(a), std::move(b)};
  return make_node(std::move(n));
}

NodePtr call(std::string name, std::vector<NodePtr> args) {
  Node n;
  n.kind = Kind::kCall;
  n.func = std::move(name);
  n.args = std::move(args);
  return make_node(std::move(n));
}

// ---------------------------------------------------------------------------
// Parsing: Pratt parser over a byte cursor. Precedence low to high:
// +,- (10) < *,/ (20) < unary - (30) < ^ (40, right assoc) < call/atom.

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr run() {
    NodePtr e = parse_expr(0);
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError(pos_, "unexpected trailing input, expected end of expression");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr parse_expr(int min_bp) {
    NodePtr lhs = parse_prefix();
    for (;;) {
      const char c = peek();
      int lbp = 0;
      if (c == '+' || c == '-') lbp = 10;
      else if (c == '*' || c == '/') lbp = 20;
      else if (c == '^') lbp = 40;
      else break;
      if (lbp < min_bp) break;
      ++pos_;
      // Right associativity for ^: recurse with the same binding power.
      NodePtr rhs = parse_expr(c == '^' ? lbp : lbp + 1);
      lhs = binary(c, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  NodePtr parse_prefix() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      return unary_minus(parse_expr(30));
    }
    if (c == '+') {  // tolerate unary plus
      ++pos_;
      return parse_expr(30);
    }
    return parse_atom();
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size())
      throw ParseError(pos_, "unexpected end of input, expected a value");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr(0);
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    throw ParseError(pos_, std::string("unexpected character '") + c +
                               "', expected number, name, or '('");
  }

  NodePtr parse_number() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc())
      throw ParseError(pos_, "malformed numeric literal");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return constant(v);
  }

  NodePtr parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (peek() == '(') {
      const int arity = function_arity(name);
      if (arity < 0)
        throw ParseError(start, "unknown function '" + name + "'");
      ++pos_;  // consume '('
      std::vector<NodePtr> args;
      args.push_back(parse_expr(0));
      while (peek() == ',') {
        ++pos_;
        args.push_back(parse_expr(0));
      }
      expect(')');
      if (static_cast<int>(args.size()) != arity)
        throw ParseError(start, "function '" + name + "' expects " +
                                    std::to_string(arity) + " argument(s), got " +
                                    std::to_string(args.size()));
      return call(std::move(name), std::move(args));
    }
    if (name == "x") return variable();
    throw ParseError(start, "unknown identifier '" + name + "'");
  }

  void expect(char c) {
    if (peek() != c)
      throw ParseError(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

NodePtr parse(std::string_view text) {
  if (text.empty()) throw ParseError(0, "empty expression");
  if (text.size() > 64 * 1024) throw ParseError(0, "expression exceeds 64 KiB");
  return Parser(text).run();
}

// ---------------------------------------------------------------------------
// Evaluation.

namespace {

[[noreturn]] void eval_domain_error(const char* func, double arg) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "eval: %s undefined at argument %.17g", func, arg);
  throw DomainError(buf);
}

double eval_pow(double base, double e) {
  const double r = std::pow(base, e);
  if (std::isnan(r) && !std::isnan(base) && !std::isnan(e))
    eval_domain_error("pow (negative base, fractional exponent)", base);
  return r;
}

double eval_call(const Node& n, double x) {
  if (n.func == "exp") return std::exp(eval(*n.args[0], x));
  if (n.func == "ln") {
    const double a = eval(*n.args[0], x);
    if (!(a > 0.0)) eval_domain_error("ln", a);
    return std::log(a);
  }
  if (n.func == "sin") return std::sin(eval(*n.args[0], x));
  if (n.func == "cos") return std::cos(eval(*n.args[0], x));
  if (n.func == "sqrt") {
    const double a = eval(*n.args[0], x);
    if (a < 0.0) eval_domain_error("sqrt", a);
    return std::sqrt(a);
  }
  if (n.func == "pow")
    return eval_pow(eval(*n.args[0], x), eval(*n.args[1], x));
  if (n.func == "gamma") return specialfn::gamma(eval(*n.args[0], x));
  if (n.func == "mlf") {
    const double alpha = eval(*n.args[0], x);
    return specialfn::mittag_leffler(alpha, eval(*n.args[1], x));
  }
  throw DomainError("eval: unknown function '" + n.func + "'");
}

}  // namespace

double eval(const Node& n, double x) {
  switch (n.kind) {
    case Kind::kConstant:
      return n.value;
    case Kind::kVariable:
      return x;
    case Kind::kUnary:
      return -eval(*n.args[0], x);
    case Kind::kBinary: {
      const double a = eval(*n.args[0], x);
      const double b = eval(*n.args[1], x);
      switch (n.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/':
          if (b == 0.0) eval_domain_error("division", b);
          return a / b;
        case '^': return eval_pow(a, b);
      }
      throw DomainError("eval: unknown operator");
    }
    case Kind::kCall:
      return eval_call(n, x);
  }
  throw DomainError("eval: corrupt node");
}

bool is_constant(const Node& n) {
  if (n.kind == Kind::kVariable) return false;
  for (const auto& c : n.args)
    if (!is_constant(*c)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Simplification: constant folding plus 0/1 identities. Folding only happens
// when the subtree evaluates cleanly; domain errors leave the tree symbolic.

namespace {

bool const_value(const NodePtr& n, double* out) {
  if (n->kind == Kind::kConstant) {
    *out = n->value;
    return true;
  }
  return false;
}

bool is_const(const NodePtr& n, double v) {
  double c;
  return const_value(n, &c) && c == v;
}

NodePtr simplify_children(const NodePtr& n) {
  if (n->args.empty()) return n;
  Node copy = *n;
  for (auto& c : copy.args) c = simplify(c);
  return make_node(std::move(copy));
}

}  // namespace

NodePtr simplify(const NodePtr& n) {
  NodePtr s = simplify_children(n);
  if (s->kind != Kind::kConstant && is_constant(*s)) {
    try {
      return constant(eval(*s, 0.0));
    } catch (const std::exception&) {
      // e.g. gamma at a pole inside an unreachable branch: keep symbolic.
    }
  }
  if (s->kind == Kind::kUnary) {
    const NodePtr& a = s->args[0];
    if (a->kind == Kind::kUnary) return a->args[0];
    double c;
    if (const_value(a, &c)) return constant(-c);
    return s;
  }
  if (s->kind != Kind::kBinary) return s;
  const NodePtr& a = s->args[0];
  const NodePtr& b = s->args[1];
  switch (s->op) {
    case '+':
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      break;
    case '-':
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return simplify(unary_minus(b));
      break;
    case '*':
      if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      break;
    case '/':
      if (is_const(a, 0.0) && !is_const(b, 0.0)) return constant(0.0);
      if (is_const(b, 1.0)) return a;
      break;
    case '^':
      if (is_const(b, 1.0)) return a;
      if (is_const(b, 0.0)) return constant(1.0);
      break;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Symbolic differentiation.

namespace {

NodePtr diff(const NodePtr& n);

NodePtr diff_pow(const NodePtr& u, const NodePtr& v) {
  // d(u^v): constant exponent and constant base get the short forms.
  if (is_constant(*v)) {
    // v * u^(v-1) * u'
    return binary('*', binary('*', v, binary('^', u, binary('-', v, constant(1.0)))),
                  diff(u));
  }
  if (is_constant(*u)) {
    // u^v * ln(u) * v'
    return binary('*', binary('*', binary('^', u, v), call("ln", {u})), diff(v));
  }
  // u^v * (v' ln u + v u'/u)
  NodePtr t1 = binary('*', diff(v), call("ln", {u}));
  NodePtr t2 = binary('/', binary('*', v, diff(u)), u);
  return binary('*', binary('^', u, v), binary('+', t1, t2));
}

NodePtr diff_call(const NodePtr& n) {
  const NodePtr& u = n->args[0];
  const std::string& f = n->func;
  if (f == "gamma" || f == "mlf") {
    if (is_constant(*n)) return constant(0.0);
    throw NonDifferentiableError("differentiate: no derivative rule for '" + f +
                                 "' with non-constant argument");
  }
  if (f == "pow") return diff_pow(n->args[0], n->args[1]);
  NodePtr du = diff(u);
  if (f == "exp") return binary('*', call("exp", {u}), du);
  if (f == "ln") return binary('/', du, u);
  if (f == "sin") return binary('*', call("cos", {u}), du);
  if (f == "cos") return unary_minus(binary('*', call("sin", {u}), du));
  if (f == "sqrt")
    return binary('/', du, binary('*', constant(2.0), call("sqrt", {u})));
  throw NonDifferentiableError("differentiate: unknown function '" + f + "'");
}

NodePtr diff(const NodePtr& n) {
  switch (n->kind) {
    case Kind::kConstant:
      return constant(0.0);
    case Kind::kVariable:
      return constant(1.0);
    case Kind::kUnary:
      return unary_minus(diff(n->args[0]));
    case Kind::kBinary: {
      const NodePtr& a = n->args[0];
      const NodePtr& b = n->args[1];
      switch (n->op) {
        case '+': return binary('+', diff(a), diff(b));
        case '-': return binary('-', diff(a), diff(b));
        case '*': return binary('+', binary('*', diff(a), b), binary('*', a, diff(b)));
        case '/':
          return binary('/',
                        binary('-', binary('*', diff(a), b), binary('*', a, diff(b))),
                        binary('^', b, constant(2.0)));
        case '^': return diff_pow(a, b);
      }
      throw NonDifferentiableError("differentiate: unknown operator");
    }
    case Kind::kCall:
      return diff_call(n);
  }
  throw NonDifferentiableError("differentiate: corrupt node");
}

}  // namespace

NodePtr differentiate(const NodePtr& n) { return simplify(diff(n)); }

NodePtr substitute(const NodePtr& n, const NodePtr& replacement) {
  if (n->kind == Kind::kVariable) return replacement;
  if (n->args.empty()) return n;
  Node copy = *n;
  for (auto& c : copy.args) c = substitute(c, replacement);
  return make_node(std::move(copy));
}

// ---------------------------------------------------------------------------
// Printing: fully parenthesized except atoms, so reparse is unambiguous.

std::string to_string(const Node& n) {
  switch (n.kind) {
    case Kind::kConstant: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", n.value);
      if (n.value < 0.0) return std::string("(") + buf + ")";
      return buf;
    }
    case Kind::kVariable:
      return "x";
    case Kind::kUnary:
      return "(-" + to_string(*n.args[0]) + ")";
    case Kind::kBinary:
      return "(" + to_string(*n.args[0]) + n.op + to_string(*n.args[1]) + ")";
    case Kind::kCall: {
      std::string out = n.func + "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ",";
        out += to_string(*n.args[i]);
      }
      return out + ")";
    }
  }
  return "?";
}

}  // namespace expr
}  // namespace psifrac
