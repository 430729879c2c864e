#include <cctype>
#include <cmath>
#include <numbers>

#include "plab/errors.hpp"
#include "plab/lab.hpp"

namespace plab::lab {

struct Expression::Node {
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
  double number = 0.0;
  std::string func;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr l = nullptr, NodePtr r = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

// Recursive descent:
//   sum   := prod (('+' | '-') prod)*
//   prod  := unary (('*' | '/') unary)*
//   unary := '-' unary | '+' unary | power
//   power := atom ('^' unary)?
//   atom  := number | name | name '(' sum ')' | '(' sum ')'
class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ArgumentError("expression '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " + what);
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

  NodePtr sum() {
    NodePtr n = prod();
    for (;;) {
      if (eat('+')) {
        n = make(Kind::Add, n, prod());
      } else if (eat('-')) {
        n = make(Kind::Sub, n, prod());
      } else {
        return n;
      }
    }
  }
  NodePtr prod() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*')) {
        n = make(Kind::Mul, n, unary());
      } else if (eat('/')) {
        n = make(Kind::Div, n, unary());
      } else {
        return n;
      }
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Kind::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make(Kind::Pow, base, unary());
    return base;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (eat('(')) {
      NodePtr n = sum();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Number;
      n->number = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (eat('(')) {
        if (name != "sqrt" && name != "log" && name != "log2" && name != "exp") {
          pos_ = start;
          fail("unknown function '" + name + "'");
        }
        NodePtr arg = sum();
        if (!eat(')')) fail("expected ')'");
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::Call;
        n->func = name;
        n->lhs = std::move(arg);
        return n;
      }
      auto n = std::make_shared<Expression::Node>();
      if (name == "x") {
        n->kind = Kind::Var;
      } else if (name == "e") {
        n->kind = Kind::Number;
        n->number = std::numbers::e;
      } else if (name == "pi") {
        n->kind = Kind::Number;
        n->number = std::numbers::pi;
      } else {
        pos_ = start;
        fail("unknown name '" + name + "'");
      }
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval_node(const Expression::Node& n, double x) {
  switch (n.kind) {
    case Kind::Number:
      return n.number;
    case Kind::Var:
      return x;
    case Kind::Neg:
      return -eval_node(*n.lhs, x);
    case Kind::Add:
      return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
    case Kind::Sub:
      return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
    case Kind::Mul:
      return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
    case Kind::Div:
      return eval_node(*n.lhs, x) / eval_node(*n.rhs, x);
    case Kind::Pow:
      return std::pow(eval_node(*n.lhs, x), eval_node(*n.rhs, x));
    case Kind::Call: {
      const double a = eval_node(*n.lhs, x);
      if (n.func == "sqrt") return std::sqrt(a);
      if (n.func == "log") return std::log(a);
      if (n.func == "log2") return std::log(std::log(a));
      return std::exp(a);
    }
  }
  return NAN;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

double Expression::eval(double x) const { return eval_node(*root_, x); }

}  // namespace plab::lab
