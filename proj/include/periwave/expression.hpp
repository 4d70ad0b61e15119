#pragma once

#include <memory>
#include <string>

namespace periwave {

// Parsed scalar expression in the variables x1, x2. Grammar: numeric
// literals, x1, x2, + - * /, unary minus, parentheses, and the functions
// sin, cos, exp, sqrt, abs. Parse errors throw InvalidParameter.
class Expression {
 public:
  explicit Expression(const std::string& text);
  ~Expression();
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;
  Expression(const Expression&) = delete;
  Expression& operator=(const Expression&) = delete;

  double eval(double x1, double x2) const;
  const std::string& text() const { return text_; }

  struct Node;  // exposed for the out-of-line parser, not part of the API

 private:
  std::unique_ptr<Node> root_;
  std::string text_;
};

}  // namespace periwave
