#include "corforge/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "corforge/errors.hpp"

namespace corforge {

struct Expr::Node {
  enum class Kind { constant, time, add, sub, mul, div, pow, sin, cos, exp, sqrt, neg };

  Kind kind;
  double value = 0.0;  // constant
  int exponent = 0;    // pow
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::constant;
  n->value = v;
  return n;
}

bool is_const(const NodePtr& n, double v) {
  return n->kind == Node::Kind::constant && n->value == v;
}

// Light simplification so differentiated trees stay readable and cheap.
NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return make(Node::Kind::add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(b, 0.0)) return a;
  return make(Node::Kind::sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return make(Node::Kind::mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_const(a, 0.0)) return make_const(0.0);
  if (is_const(b, 1.0)) return a;
  return make(Node::Kind::div, std::move(a), std::move(b));
}

NodePtr powi(NodePtr base, int e) {
  if (e == 0) return make_const(1.0);
  if (e == 1) return base;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::pow;
  n->exponent = e;
  n->lhs = std::move(base);
  return n;
}

double eval_node(const Node& n, double t) {
  switch (n.kind) {
    case Node::Kind::constant: return n.value;
    case Node::Kind::time: return t;
    case Node::Kind::add: return eval_node(*n.lhs, t) + eval_node(*n.rhs, t);
    case Node::Kind::sub: return eval_node(*n.lhs, t) - eval_node(*n.rhs, t);
    case Node::Kind::mul: return eval_node(*n.lhs, t) * eval_node(*n.rhs, t);
    case Node::Kind::div: return eval_node(*n.lhs, t) / eval_node(*n.rhs, t);
    case Node::Kind::pow: return std::pow(eval_node(*n.lhs, t), n.exponent);
    case Node::Kind::sin: return std::sin(eval_node(*n.lhs, t));
    case Node::Kind::cos: return std::cos(eval_node(*n.lhs, t));
    case Node::Kind::exp: return std::exp(eval_node(*n.lhs, t));
    case Node::Kind::sqrt: return std::sqrt(eval_node(*n.lhs, t));
    case Node::Kind::neg: return -eval_node(*n.lhs, t);
  }
  return 0.0;
}

NodePtr diff_node(const NodePtr& n) {
  switch (n->kind) {
    case Node::Kind::constant: return make_const(0.0);
    case Node::Kind::time: return make_const(1.0);
    case Node::Kind::add: return add(diff_node(n->lhs), diff_node(n->rhs));
    case Node::Kind::sub: return sub(diff_node(n->lhs), diff_node(n->rhs));
    case Node::Kind::mul:
      return add(mul(diff_node(n->lhs), n->rhs), mul(n->lhs, diff_node(n->rhs)));
    case Node::Kind::div:
      // (u/v)' = (u'v - uv') / v^2
      return div(sub(mul(diff_node(n->lhs), n->rhs), mul(n->lhs, diff_node(n->rhs))),
                 powi(n->rhs, 2));
    case Node::Kind::pow:
      return mul(mul(make_const(n->exponent), powi(n->lhs, n->exponent - 1)),
                 diff_node(n->lhs));
    case Node::Kind::sin:
      return mul(make(Node::Kind::cos, n->lhs), diff_node(n->lhs));
    case Node::Kind::cos:
      return mul(make(Node::Kind::neg, make(Node::Kind::sin, n->lhs)),
                 diff_node(n->lhs));
    case Node::Kind::exp:
      return mul(make(Node::Kind::exp, n->lhs), diff_node(n->lhs));
    case Node::Kind::sqrt:
      return div(diff_node(n->lhs), mul(make_const(2.0), make(Node::Kind::sqrt, n->lhs)));
    case Node::Kind::neg:
      return make(Node::Kind::neg, diff_node(n->lhs));
  }
  return make_const(0.0);
}

void print_node(const Node& n, std::ostream& os) {
  switch (n.kind) {
    case Node::Kind::constant: os << n.value; break;
    case Node::Kind::time: os << "t"; break;
    case Node::Kind::add: os << "("; print_node(*n.lhs, os); os << "+"; print_node(*n.rhs, os); os << ")"; break;
    case Node::Kind::sub: os << "("; print_node(*n.lhs, os); os << "-"; print_node(*n.rhs, os); os << ")"; break;
    case Node::Kind::mul: os << "("; print_node(*n.lhs, os); os << "*"; print_node(*n.rhs, os); os << ")"; break;
    case Node::Kind::div: os << "("; print_node(*n.lhs, os); os << "/"; print_node(*n.rhs, os); os << ")"; break;
    case Node::Kind::pow: print_node(*n.lhs, os); os << "^" << n.exponent; break;
    case Node::Kind::sin: os << "sin("; print_node(*n.lhs, os); os << ")"; break;
    case Node::Kind::cos: os << "cos("; print_node(*n.lhs, os); os << ")"; break;
    case Node::Kind::exp: os << "exp("; print_node(*n.lhs, os); os << ")"; break;
    case Node::Kind::sqrt: os << "sqrt("; print_node(*n.lhs, os); os << ")"; break;
    case Node::Kind::neg: os << "(-"; print_node(*n.lhs, os); os << ")"; break;
  }
}

// --- recursive-descent parser ------------------------------------------

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    std::ostringstream os;
    os << "expression error at offset " << pos_ << ": " << what;
    if (pos_ < src_.size()) os << " (near '" << src_.substr(pos_, 8) << "')";
    throw ParseError(os.str());
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  NodePtr parse_sum() {
    NodePtr e = parse_product();
    for (;;) {
      if (consume('+')) e = add(e, parse_product());
      else if (consume('-')) e = sub(e, parse_product());
      else return e;
    }
  }

  NodePtr parse_product() {
    NodePtr e = parse_unary();
    for (;;) {
      if (consume('*')) e = mul(e, parse_unary());
      else if (consume('/')) e = div(e, parse_unary());
      else return e;
    }
  }

  NodePtr parse_unary() {
    if (consume('-')) return make(Node::Kind::neg, parse_unary());
    if (consume('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (consume('^')) {
      skip_ws();
      bool neg = consume('-');
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
      if (pos_ == start) fail("expected integer exponent after '^'");
      int e = std::atoi(std::string(src_.substr(start, pos_ - start)).c_str());
      if (neg) e = -e;
      if (e < 0) return div(make_const(1.0), powi(base, -e));
      return powi(base, e);
    }
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of expression");
    const char c = src_[pos_];

    if (c == '(') {
      ++pos_;
      NodePtr e = parse_sum();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             std::isalpha(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
      const std::string name(src_.substr(start, pos_ - start));
      if (name == "t") return make(Node::Kind::time);
      Node::Kind kind;
      if (name == "sin") kind = Node::Kind::sin;
      else if (name == "cos") kind = Node::Kind::cos;
      else if (name == "exp") kind = Node::Kind::exp;
      else if (name == "sqrt") kind = Node::Kind::sqrt;
      else {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!consume('(')) fail("expected '(' after function name");
      NodePtr arg = parse_sum();
      if (!consume(')')) fail("expected ')'");
      return make(kind, std::move(arg));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const std::string text(src_.substr(pos_));
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make_const(v);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::constant(double value) { return Expr(make_const(value)); }
Expr Expr::time() { return Expr(make(Node::Kind::time)); }

Expr operator+(const Expr& a, const Expr& b) { return Expr(add(a.node_, b.node_)); }
Expr operator-(const Expr& a, const Expr& b) { return Expr(sub(a.node_, b.node_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(mul(a.node_, b.node_)); }
Expr operator/(const Expr& a, const Expr& b) { return Expr(div(a.node_, b.node_)); }
Expr Expr::operator-() const { return Expr(make(Node::Kind::neg, node_)); }

Expr Expr::pow(const Expr& base, int exponent) {
  if (exponent < 0)
    return Expr(div(make_const(1.0), powi(base.node_, -exponent)));
  return Expr(powi(base.node_, exponent));
}
Expr Expr::sin(const Expr& arg) { return Expr(make(Node::Kind::sin, arg.node_)); }
Expr Expr::cos(const Expr& arg) { return Expr(make(Node::Kind::cos, arg.node_)); }
Expr Expr::exp(const Expr& arg) { return Expr(make(Node::Kind::exp, arg.node_)); }
Expr Expr::sqrt(const Expr& arg) { return Expr(make(Node::Kind::sqrt, arg.node_)); }

double Expr::eval(double t) const { return eval_node(*node_, t); }
Expr Expr::derivative() const { return Expr(diff_node(node_)); }

std::string Expr::str() const {
  std::ostringstream os;
  os.precision(17);
  print_node(*node_, os);
  return os.str();
}

Expr parse_expression(std::string_view source) { return Expr(Parser(source).parse()); }

CoefficientFn::CoefficientFn(std::string_view source)
    : expr_(parse_expression(source)),
      deriv_(expr_.derivative()),
      source_(source) {}

CoefficientFn::CoefficientFn(Expr expr, std::string label)
    : expr_(std::move(expr)), deriv_(expr_.derivative()), source_(std::move(label)) {
  if (source_.empty()) source_ = expr_.str();
}

CoefficientFn CoefficientFn::derivative_fn() const {
  return CoefficientFn(deriv_);
}

}  // namespace corforge
