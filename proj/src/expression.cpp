#include "nsf/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace nsf {

struct Expression::Node {
  enum class Kind { number, var, neg, add, sub, mul, div, pow, call } kind;
  double value = 0.0;
  char var = 0;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->args = std::move(args);
  return n;
}

int arity(const std::string& fn) {
  static const char* one[] = {"sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt", "abs"};
  static const char* two[] = {"pow", "min", "max"};
  for (const char* f : one)
    if (fn == f) return 1;
  for (const char* f : two)
    if (fn == f) return 2;
  return -1;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "expression \"" << s_ << "\", column " << pos_ + 1 << ": " << what;
    throw ExpressionError(os.str());
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr l = term();
    for (;;) {
      if (accept('+')) l = make(Kind::add, {l, term()});
      else if (accept('-')) l = make(Kind::sub, {l, term()});
      else return l;
    }
  }

  NodePtr term() {
    NodePtr l = unary();
    for (;;) {
      if (accept('*')) l = make(Kind::mul, {l, unary()});
      else if (accept('/')) l = make(Kind::div, {l, unary()});
      else return l;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::neg, {unary()});
    if (accept('+')) return unary();
    NodePtr base = primary();
    if (accept('^')) return make(Kind::pow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::number;
    n->value = v;
    return n;
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    auto n = std::make_shared<Expression::Node>();
    if (id == "x" || id == "y" || id == "t") {
      n->kind = Kind::var;
      n->var = id[0];
      return n;
    }
    if (id == "pi" || id == "e") {
      n->kind = Kind::number;
      n->value = id == "pi" ? std::numbers::pi : std::numbers::e;
      return n;
    }
    const int k = arity(id);
    if (k < 0) {
      pos_ = start;
      fail("unknown name '" + id + "'");
    }
    if (!accept('(')) fail("expected '(' after " + id);
    n->kind = Kind::call;
    n->fn = id;
    n->args.push_back(expr());
    for (int i = 1; i < k; ++i) {
      if (!accept(',')) fail(id + " takes " + std::to_string(k) + " arguments");
      n->args.push_back(expr());
    }
    if (!accept(')')) fail("expected ')' closing " + id);
    return n;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, double x, double y, double t) {
  auto a = [&](std::size_t i) { return eval(*n.args[i], x, y, t); };
  switch (n.kind) {
    case Kind::number: return n.value;
    case Kind::var: return n.var == 'x' ? x : n.var == 'y' ? y : t;
    case Kind::neg: return -a(0);
    case Kind::add: return a(0) + a(1);
    case Kind::sub: return a(0) - a(1);
    case Kind::mul: return a(0) * a(1);
    case Kind::div: return a(0) / a(1);
    case Kind::pow: return std::pow(a(0), a(1));
    case Kind::call: break;
  }
  const std::string& f = n.fn;
  if (f == "sin") return std::sin(a(0));
  if (f == "cos") return std::cos(a(0));
  if (f == "tan") return std::tan(a(0));
  if (f == "sinh") return std::sinh(a(0));
  if (f == "cosh") return std::cosh(a(0));
  if (f == "tanh") return std::tanh(a(0));
  if (f == "exp") return std::exp(a(0));
  if (f == "log") return std::log(a(0));
  if (f == "sqrt") return std::sqrt(a(0));
  if (f == "abs") return std::abs(a(0));
  if (f == "pow") return std::pow(a(0), a(1));
  if (f == "min") return std::min(a(0), a(1));
  return std::max(a(0), a(1));
}

bool mentions(const Expression::Node& n, char v) {
  if (n.kind == Kind::var && n.var == v) return true;
  for (const auto& c : n.args)
    if (mentions(*c, v)) return true;
  return false;
}

}  // namespace

Expression::Expression() : text_("0") {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::number;
  root_ = n;
}

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).parse();
  return e;
}

Expression Expression::constant(double v) {
  Expression e;
  std::ostringstream os;
  os << v;
  e.text_ = os.str();
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::number;
  n->value = v;
  e.root_ = n;
  return e;
}

double Expression::operator()(double x, double y, double t) const { return eval(*root_, x, y, t); }

bool Expression::uses(char var) const { return mentions(*root_, var); }

}  // namespace nsf
