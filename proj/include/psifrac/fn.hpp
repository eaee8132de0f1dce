#ifndef PSIFRAC_FN_HPP_
#define PSIFRAC_FN_HPP_

#include <functional>
#include <utility>

#include "psifrac/expr.hpp"

namespace psifrac {

// A real function of one variable, optionally carrying an expression tree
// (for symbolic differentiation) or an explicit derivative closure.
class Fn {
 public:
  using Closure = std::function<double(double)>;

  Fn() = default;

  explicit Fn(Closure f) : f_(std::move(f)) {}

  Fn(Closure f, Closure df) : f_(std::move(f)), df_(std::move(df)) {}

  explicit Fn(expr::NodePtr tree)
      : f_([tree](double x) { return expr::eval(tree, x); }), tree_(std::move(tree)) {}

  static Fn constant(double c) {
    Fn fn([c](double) { return c; }, [](double) { return 0.0; });
    fn.tree_ = expr::constant(c);
    return fn;
  }

  double operator()(double x) const { return f_(x); }

  bool valid() const { return static_cast<bool>(f_); }
  bool has_tree() const { return static_cast<bool>(tree_); }
  bool has_derivative_closure() const { return static_cast<bool>(df_); }
  const expr::NodePtr& tree() const { return tree_; }

  // The mirrored function y -> f(c - y); keeps the expression tree when
  // present so symbolic paths survive reflection.
  Fn reflected(double c) const {
    if (tree_)
      return Fn(expr::substitute(
          tree_, expr::binary('-', expr::constant(c), expr::variable())));
    Closure f = f_;
    Fn out([f, c](double y) { return f(c - y); });
    if (df_) {
      Closure df = df_;
      out.df_ = [df, c](double y) { return -df(c - y); };
    }
    return out;
  }

  // d/dx. Symbolic when a tree is attached, the explicit closure when given,
  // otherwise a central difference with the supplied step.
  Fn derivative(double fd_step = 1e-6) const {
    if (tree_) return Fn(expr::differentiate(tree_));
    if (df_) return Fn(df_);
    Closure f = f_;
    return Fn([f, fd_step](double x) {
      return (f(x + fd_step) - f(x - fd_step)) / (2.0 * fd_step);
    });
  }

 private:
  Closure f_;
  Closure df_;          // explicit first derivative, optional
  expr::NodePtr tree_;  // expression form, optional
};

}  // namespace psifrac

#endif  // PSIFRAC_FN_HPP_
