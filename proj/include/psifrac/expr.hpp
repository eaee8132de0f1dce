#ifndef PSIFRAC_EXPR_HPP_
#define PSIFRAC_EXPR_HPP_

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace psifrac {
namespace expr {

enum class Kind { kConstant, kVariable, kUnary, kBinary, kCall };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

// Immutable expression tree in one free variable `x`.
struct Node {
  Kind kind = Kind::kConstant;
  double value = 0.0;        // kConstant
  char op = 0;               // kUnary: '-'; kBinary: one of + - * / ^
  std::string func;          // kCall: exp ln sin cos sqrt pow gamma mlf
  std::vector<NodePtr> args;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& msg)
      : std::runtime_error("parse error at byte " + std::to_string(offset) +
                           ": " + msg),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class NonDifferentiableError : public std::runtime_error {
 public:
  explicit NonDifferentiableError(const std::string& what)
      : std::runtime_error(what) {}
};

// Node builders.
NodePtr constant(double v);
NodePtr variable();
NodePtr unary_minus(NodePtr a);
NodePtr binary(char op, NodePtr a, NodePtr b);
NodePtr call(std::string name, std::vector<NodePtr> args);

NodePtr parse(std::string_view text);

double eval(const Node& n, double x);
inline double eval(const NodePtr& n, double x) { return eval(*n, x); }

// d/dx with constant folding and 0/1 identities applied on the way out.
NodePtr differentiate(const NodePtr& n);

NodePtr simplify(const NodePtr& n);

// Replace the free variable by another expression.
NodePtr substitute(const NodePtr& n, const NodePtr& replacement);

// True when no kVariable node occurs in the tree.
bool is_constant(const Node& n);

std::string to_string(const Node& n);
inline std::string to_string(const NodePtr& n) { return to_string(*n); }

}  // namespace expr
}  // namespace psifrac

#endif  // PSIFRAC_EXPR_HPP_
