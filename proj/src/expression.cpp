#include "wigner/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>

#include "wigner/errors.hpp"

namespace wigner {

void Discontinuities::merge(const Discontinuities& other) {
  cuts.insert(cuts.end(), other.cuts.begin(), other.cuts.end());
  lines.insert(lines.end(), other.lines.begin(), other.lines.end());
  unresolved = unresolved || other.unresolved;
}

enum class Op {
  Number, X, Y, N,
  Neg, Add, Sub, Mul, Div, Pow,
  Sin, Cos, Exp, Log, Sqrt, Abs,
  Min, Max,
  Less, LessEq, Greater, GreaterEq,
};

struct Expression::Node {
  Op op;
  double value = 0.0;
  int lhs = -1;
  int rhs = -1;
};

namespace {

using Node = Expression::Node;

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  std::vector<Node> nodes;

  int parse_all() {
    const int root = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ValidationError("expression '" + std::string(s_) + "': " + msg + " at offset " +
                          std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  int add(Op op, int lhs = -1, int rhs = -1, double value = 0.0) {
    nodes.push_back(Node{op, value, lhs, rhs});
    return static_cast<int>(nodes.size()) - 1;
  }

  int expr() {
    int lhs = term();
    while (true) {
      if (accept("+")) {
        lhs = add(Op::Add, lhs, term());
      } else if (accept("-")) {
        lhs = add(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  int term() {
    int lhs = unary();
    while (true) {
      if (accept("*")) {
        lhs = add(Op::Mul, lhs, unary());
      } else if (accept("/")) {
        lhs = add(Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  int unary() {
    if (accept("-")) return add(Op::Neg, unary());
    if (accept("+")) return unary();
    return power();
  }

  int power() {
    const int base = atom();
    if (accept("^")) return add(Op::Pow, base, unary());
    return base;
  }

  std::string identifier() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  int atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(std::string(s_.substr(pos_)), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return add(Op::Number, -1, -1, v);
    }
    if (accept("(")) {
      const int inner = expr();
      expect(")");
      return inner;
    }
    const std::string id = identifier();
    if (id.empty()) fail("unexpected '" + std::string(1, c) + "'");
    if (id == "x") return add(Op::X);
    if (id == "y") return add(Op::Y);
    if (id == "n") return add(Op::N);
    if (id == "pi") return add(Op::Number, -1, -1, std::numbers::pi);
    if (id == "e") return add(Op::Number, -1, -1, std::numbers::e);
    static const std::pair<const char*, Op> unary_fns[] = {
        {"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp},
        {"log", Op::Log}, {"sqrt", Op::Sqrt}, {"abs", Op::Abs},
    };
    for (const auto& [name, op] : unary_fns) {
      if (id == name) {
        expect("(");
        const int arg = expr();
        expect(")");
        return add(op, arg);
      }
    }
    if (id == "min" || id == "max") {
      expect("(");
      const int a = expr();
      expect(",");
      const int b = expr();
      expect(")");
      return add(id == "min" ? Op::Min : Op::Max, a, b);
    }
    if (id == "ind") {
      expect("(");
      const int a = expr();
      Op op;
      if (accept("<=")) {
        op = Op::LessEq;
      } else if (accept(">=")) {
        op = Op::GreaterEq;
      } else if (accept("<")) {
        op = Op::Less;
      } else if (accept(">")) {
        op = Op::Greater;
      } else {
        fail("expected comparison inside ind()");
      }
      const int b = expr();
      expect(")");
      return add(op, a, b);
    }
    fail("unknown identifier '" + id + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

double eval(const std::vector<Node>& nodes, int i, double x, double y, double n) {
  const Node& node = nodes[static_cast<std::size_t>(i)];
  auto L = [&] { return eval(nodes, node.lhs, x, y, n); };
  auto R = [&] { return eval(nodes, node.rhs, x, y, n); };
  switch (node.op) {
    case Op::Number: return node.value;
    case Op::X: return x;
    case Op::Y: return y;
    case Op::N: return n;
    case Op::Neg: return -L();
    case Op::Add: return L() + R();
    case Op::Sub: return L() - R();
    case Op::Mul: return L() * R();
    case Op::Div: return L() / R();
    case Op::Pow: return std::pow(L(), R());
    case Op::Sin: return std::sin(L());
    case Op::Cos: return std::cos(L());
    case Op::Exp: return std::exp(L());
    case Op::Log: return std::log(L());
    case Op::Sqrt: return std::sqrt(L());
    case Op::Abs: return std::abs(L());
    case Op::Min: return std::min(L(), R());
    case Op::Max: return std::max(L(), R());
    case Op::Less: return L() < R() ? 1.0 : 0.0;
    case Op::LessEq: return L() <= R() ? 1.0 : 0.0;
    case Op::Greater: return L() > R() ? 1.0 : 0.0;
    case Op::GreaterEq: return L() >= R() ? 1.0 : 0.0;
  }
  return 0.0;
}

// a*x + b*y + c
struct Affine {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  bool constant() const { return a == 0.0 && b == 0.0; }
};

std::optional<Affine> affine(const std::vector<Node>& nodes, int i) {
  const Node& node = nodes[static_cast<std::size_t>(i)];
  switch (node.op) {
    case Op::Number: return Affine{0, 0, node.value};
    case Op::X: return Affine{1, 0, 0};
    case Op::Y: return Affine{0, 1, 0};
    case Op::Neg: {
      auto v = affine(nodes, node.lhs);
      if (!v) return std::nullopt;
      return Affine{-v->a, -v->b, -v->c};
    }
    case Op::Add:
    case Op::Sub: {
      auto l = affine(nodes, node.lhs);
      auto r = affine(nodes, node.rhs);
      if (!l || !r) return std::nullopt;
      const double s = node.op == Op::Add ? 1.0 : -1.0;
      return Affine{l->a + s * r->a, l->b + s * r->b, l->c + s * r->c};
    }
    case Op::Mul: {
      auto l = affine(nodes, node.lhs);
      auto r = affine(nodes, node.rhs);
      if (!l || !r) return std::nullopt;
      if (l->constant()) return Affine{l->c * r->a, l->c * r->b, l->c * r->c};
      if (r->constant()) return Affine{r->c * l->a, r->c * l->b, r->c * l->c};
      return std::nullopt;
    }
    case Op::Div: {
      auto l = affine(nodes, node.lhs);
      auto r = affine(nodes, node.rhs);
      if (!l || !r || !r->constant() || r->c == 0.0) return std::nullopt;
      return Affine{l->a / r->c, l->b / r->c, l->c / r->c};
    }
    default:
      return std::nullopt;
  }
}

// Boundary a*x + b*y + c = 0.
void add_boundary(const Affine& f, Discontinuities& d) {
  if (f.b != 0.0) {
    d.lines.push_back({-f.a / f.b, -f.c / f.b});
  } else if (f.a != 0.0) {
    d.cuts.push_back(-f.c / f.a);
  }
}

void collect(const std::vector<Node>& nodes, int i, Discontinuities& d) {
  if (i < 0) return;
  const Node& node = nodes[static_cast<std::size_t>(i)];
  collect(nodes, node.lhs, d);
  collect(nodes, node.rhs, d);
  if (node.op < Op::Less) return;

  auto l = affine(nodes, node.lhs);
  auto r = affine(nodes, node.rhs);
  if (l && r) {
    add_boundary({l->a - r->a, l->b - r->b, l->c - r->c}, d);
    return;
  }
  // |f| cmp c, or c cmp |f|
  const Node& ln = nodes[static_cast<std::size_t>(node.lhs)];
  const Node& rn = nodes[static_cast<std::size_t>(node.rhs)];
  std::optional<Affine> inner;
  std::optional<Affine> bound;
  if (ln.op == Op::Abs && r && r->constant()) {
    inner = affine(nodes, ln.lhs);
    bound = r;
  } else if (rn.op == Op::Abs && l && l->constant()) {
    inner = affine(nodes, rn.lhs);
    bound = l;
  }
  if (inner && bound) {
    add_boundary({inner->a, inner->b, inner->c - bound->c}, d);
    add_boundary({inner->a, inner->b, inner->c + bound->c}, d);
    return;
  }
  d.unresolved = true;
}

}  // namespace

Expression Expression::parse(std::string_view source) {
  Parser p(source);
  const int root = p.parse_all();
  Expression e;
  e.source_ = std::string(source);
  e.root_ = root;
  e.nodes_ = std::make_shared<const std::vector<Node>>(std::move(p.nodes));
  return e;
}

double Expression::operator()(double x, double y, double n) const {
  return eval(*nodes_, root_, x, y, n);
}

bool Expression::uses_n() const noexcept {
  for (const auto& node : *nodes_) {
    if (node.op == Op::N) return true;
  }
  return false;
}

Discontinuities Expression::discontinuities() const {
  Discontinuities d;
  collect(*nodes_, root_, d);
  return d;
}

}  // namespace wigner
