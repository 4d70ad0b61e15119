#include "periwave/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "periwave/errors.hpp"

namespace periwave {

namespace {

enum class Op { kConst, kX1, kX2, kAdd, kSub, kMul, kDiv, kNeg, kSin, kCos, kExp, kSqrt, kAbs };

}  // namespace

struct Expression::Node {
  Op op;
  double value = 0.0;
  std::unique_ptr<Node> lhs, rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::unique_ptr<Node>;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_unique<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    auto n = parse_sum();
    skip_ws();
    if (pos_ != s_.size())
      fail("unexpected trailing input");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& why) {
    throw InvalidParameter("expression: " + why + " at offset " + std::to_string(pos_) +
                           " in \"" + s_ + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    auto lhs = parse_product();
    for (;;) {
      if (consume('+'))
        lhs = make(Op::kAdd, std::move(lhs), parse_product());
      else if (consume('-'))
        lhs = make(Op::kSub, std::move(lhs), parse_product());
      else
        return lhs;
    }
  }

  NodePtr parse_product() {
    auto lhs = parse_unary();
    for (;;) {
      if (consume('*'))
        lhs = make(Op::kMul, std::move(lhs), parse_unary());
      else if (consume('/'))
        lhs = make(Op::kDiv, std::move(lhs), parse_unary());
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (consume('-'))
      return make(Op::kNeg, parse_unary());
    if (consume('+'))
      return parse_unary();
    return parse_atom();
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= s_.size())
      fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto n = parse_sum();
      if (!consume(')'))
        fail("missing ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      const double v = std::strtod(s_.c_str() + pos_, &end);
      if (end == s_.c_str() + pos_)
        fail("bad number");
      pos_ = static_cast<std::size_t>(end - s_.c_str());
      auto n = make(Op::kConst);
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "x1") return make(Op::kX1);
      if (name == "x2") return make(Op::kX2);
      Op fn;
      if (name == "sin") fn = Op::kSin;
      else if (name == "cos") fn = Op::kCos;
      else if (name == "exp") fn = Op::kExp;
      else if (name == "sqrt") fn = Op::kSqrt;
      else if (name == "abs") fn = Op::kAbs;
      else fail("unknown identifier \"" + name + "\"");
      if (!consume('('))
        fail("expected '(' after function name");
      auto arg = parse_sum();
      if (!consume(')'))
        fail("missing ')'");
      return make(fn, std::move(arg));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, double x1, double x2) {
  switch (n.op) {
    case Op::kConst: return n.value;
    case Op::kX1: return x1;
    case Op::kX2: return x2;
    case Op::kAdd: return eval_node(*n.lhs, x1, x2) + eval_node(*n.rhs, x1, x2);
    case Op::kSub: return eval_node(*n.lhs, x1, x2) - eval_node(*n.rhs, x1, x2);
    case Op::kMul: return eval_node(*n.lhs, x1, x2) * eval_node(*n.rhs, x1, x2);
    case Op::kDiv: return eval_node(*n.lhs, x1, x2) / eval_node(*n.rhs, x1, x2);
    case Op::kNeg: return -eval_node(*n.lhs, x1, x2);
    case Op::kSin: return std::sin(eval_node(*n.lhs, x1, x2));
    case Op::kCos: return std::cos(eval_node(*n.lhs, x1, x2));
    case Op::kExp: return std::exp(eval_node(*n.lhs, x1, x2));
    case Op::kSqrt: return std::sqrt(eval_node(*n.lhs, x1, x2));
    case Op::kAbs: return std::abs(eval_node(*n.lhs, x1, x2));
  }
  return 0.0;
}

}  // namespace

Expression::Expression(const std::string& text) : text_(text) {
  root_ = Parser(text).parse();
}

Expression::~Expression() = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

double Expression::eval(double x1, double x2) const {
  return eval_node(*root_, x1, x2);
}

}  // namespace periwave
