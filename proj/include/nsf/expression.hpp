#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsf {

class ExpressionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed-form scalar expression in x, y and t.
///
/// Grammar: numbers, the variables x, y, t, the constants pi and e, binary
/// + - * / ^ (right associative), unary minus, parentheses, and the functions
/// sin cos tan sinh cosh tanh exp log sqrt abs (one argument), pow min max (two).
class Expression {
 public:
  Expression();
  /// Throws ExpressionError naming the column of the first problem.
  static Expression parse(const std::string& text);
  static Expression constant(double v);

  double operator()(double x, double y = 0.0, double t = 0.0) const;
  const std::string& text() const { return text_; }
  /// True when the expression mentions the variable ('x', 'y' or 't').
  bool uses(char var) const;

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace nsf
