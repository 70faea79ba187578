#pragma once

// Arithmetic expression trees over a declared variable set: recursive-descent
// parsing, IEEE-double evaluation with domain checking, exact symbolic
// differentiation with conservative simplification, and printing.
//
// Grammar (whitespace insignificant):
//   expr   := term (('+'|'-') term)*            left-associative
//   term   := factor (('*'|'/') factor)*        left-associative
//   factor := '-' factor | power
//   power  := atom ('^' factor)?                right-associative
//   atom   := number | name | name '(' expr ')' | '(' expr ')'
// so '^' binds tighter than unary '-', which binds tighter than '*' '/'.
// Functions: sin cos exp log sqrt abs tanh. Named constants: pi, e.

#include <cmath>
#include <charconv>
#include <cstdio>
#include <map>
#include <memory>
#include <numbers>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ccp/errors.hpp"

namespace ccp {

enum class BinOp { Add, Sub, Mul, Div, Pow };
enum class FuncId { Sin, Cos, Exp, Log, Sqrt, Abs, Tanh };

namespace detail {

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  enum Kind { Number, Variable, Neg, Binary, Call };
  Kind kind;
  double value = 0.0;     // Number
  int var = -1;           // Variable: index into the declared set
  std::string name;       // Variable: declared name
  BinOp op = BinOp::Add;  // Binary
  FuncId fn = FuncId::Sin;// Call
  NodePtr a, b;
};

inline NodePtr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Number;
  n->value = v;
  return n;
}

inline NodePtr make_variable(int index, std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Variable;
  n->var = index;
  n->name = std::move(name);
  return n;
}

inline NodePtr make_neg(NodePtr a);
inline NodePtr make_binary(BinOp op, NodePtr a, NodePtr b);
inline NodePtr make_call(FuncId fn, NodePtr a);

inline bool is_number(const NodePtr& n, double v) {
  return n->kind == ExprNode::Number && n->value == v;
}

inline double apply_bin(BinOp op, double x, double y) {
  switch (op) {
    case BinOp::Add: return x + y;
    case BinOp::Sub: return x - y;
    case BinOp::Mul: return x * y;
    case BinOp::Div: return x / y;
    case BinOp::Pow: return std::pow(x, y);
  }
  return 0.0;
}

inline NodePtr make_neg(NodePtr a) {
  if (a->kind == ExprNode::Number) return make_number(-a->value);
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Neg;
  n->a = std::move(a);
  return n;
}

// Simplification is deliberately conservative: fold constant subtrees whose
// value is finite and drop *0, *1, +0, -0, ^1 neutral elements. Anything more
// aggressive risks changing the evaluation domain.
inline NodePtr make_binary(BinOp op, NodePtr a, NodePtr b) {
  if (a->kind == ExprNode::Number && b->kind == ExprNode::Number) {
    const double v = apply_bin(op, a->value, b->value);
    if (std::isfinite(v)) return make_number(v);
  }
  switch (op) {
    case BinOp::Add:
      if (is_number(a, 0.0)) return b;
      if (is_number(b, 0.0)) return a;
      break;
    case BinOp::Sub:
      if (is_number(b, 0.0)) return a;
      break;
    case BinOp::Mul:
      if (is_number(a, 0.0) || is_number(b, 0.0)) return make_number(0.0);
      if (is_number(a, 1.0)) return b;
      if (is_number(b, 1.0)) return a;
      break;
    case BinOp::Div:
      if (is_number(b, 1.0)) return a;
      break;
    case BinOp::Pow:
      if (is_number(b, 1.0)) return a;
      break;
  }
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Binary;
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

inline NodePtr make_call(FuncId fn, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Call;
  n->fn = fn;
  n->a = std::move(a);
  return n;
}

inline const char* func_name(FuncId f) {
  switch (f) {
    case FuncId::Sin: return "sin";
    case FuncId::Cos: return "cos";
    case FuncId::Exp: return "exp";
    case FuncId::Log: return "log";
    case FuncId::Sqrt: return "sqrt";
    case FuncId::Abs: return "abs";
    case FuncId::Tanh: return "tanh";
  }
  return "?";
}

inline bool lookup_func(std::string_view s, FuncId& out) {
  if (s == "sin") out = FuncId::Sin;
  else if (s == "cos") out = FuncId::Cos;
  else if (s == "exp") out = FuncId::Exp;
  else if (s == "log") out = FuncId::Log;
  else if (s == "sqrt") out = FuncId::Sqrt;
  else if (s == "abs") out = FuncId::Abs;
  else if (s == "tanh") out = FuncId::Tanh;
  else return false;
  return true;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double eval_node(const ExprNode& n, std::span<const double> vals) {
  switch (n.kind) {
    case ExprNode::Number:
      return n.value;
    case ExprNode::Variable:
      return vals[static_cast<std::size_t>(n.var)];
    case ExprNode::Neg:
      return -eval_node(*n.a, vals);
    case ExprNode::Binary: {
      const double x = eval_node(*n.a, vals);
      const double y = eval_node(*n.b, vals);
      double r = 0.0;
      switch (n.op) {
        case BinOp::Add: r = x + y; break;
        case BinOp::Sub: r = x - y; break;
        case BinOp::Mul: r = x * y; break;
        case BinOp::Div:
          if (y == 0.0) throw EvalError("domain error: division by zero");
          r = x / y;
          break;
        case BinOp::Pow:
          if (x == 0.0 && y < 0.0)
            throw EvalError("domain error: zero raised to a negative power");
          if (x < 0.0 && y != std::floor(y))
            throw EvalError("domain error: negative base with non-integer exponent");
          r = std::pow(x, y);
          break;
      }
      if (!std::isfinite(r)) throw EvalError("domain error: non-finite result (overflow)");
      return r;
    }
    case ExprNode::Call: {
      const double x = eval_node(*n.a, vals);
      double r = 0.0;
      switch (n.fn) {
        case FuncId::Sin: r = std::sin(x); break;
        case FuncId::Cos: r = std::cos(x); break;
        case FuncId::Exp: r = std::exp(x); break;
        case FuncId::Log:
          if (x <= 0.0) throw EvalError("domain error: log of a nonpositive number");
          r = std::log(x);
          break;
        case FuncId::Sqrt:
          if (x < 0.0) throw EvalError("domain error: sqrt of a negative number");
          r = std::sqrt(x);
          break;
        case FuncId::Abs: r = std::abs(x); break;
        case FuncId::Tanh: r = std::tanh(x); break;
      }
      if (!std::isfinite(r)) throw EvalError("domain error: non-finite result (overflow)");
      return r;
    }
  }
  return 0.0;
}

}  // namespace detail

/// Immutable expression over a declared variable set. Values are cheap to
/// copy (shared tree); eval, diff and substitute are pure, so an Expr can be
/// used from many threads concurrently.
class Expr {
 public:
  Expr() = default;

  /// Evaluate with positional values in declared-variable order.
  double eval(std::span<const double> values) const {
    if (values.size() != vars_->size())
      throw EvalError("eval: expected " + std::to_string(vars_->size()) +
                      " values, got " + std::to_string(values.size()));
    return detail::eval_node(*root_, values);
  }

  double eval(std::initializer_list<double> values) const {
    return eval(std::span<const double>(values.begin(), values.size()));
  }

  /// Evaluate with a name -> value map. Every variable that appears in the
  /// tree must be bound.
  double eval(const std::map<std::string, double>& env) const {
    std::vector<double> vals(vars_->size(), 0.0);
    const auto used = used_variables();
    for (std::size_t i = 0; i < vars_->size(); ++i) {
      auto it = env.find((*vars_)[i]);
      if (it != env.end()) {
        vals[i] = it->second;
      } else if (used.count((*vars_)[i])) {
        throw EvalError("eval: missing binding for variable '" + (*vars_)[i] + "'");
      }
    }
    return eval(vals);
  }

  /// Exact symbolic partial derivative with respect to a declared variable.
  Expr diff(std::string_view var) const {
    const int idx = var_index(var);
    if (idx < 0)
      throw EvalError("diff: variable '" + std::string(var) + "' is not declared");
    return Expr(diff_node(root_, idx), vars_);
  }

  /// Replace every occurrence of `var` by `replacement`. The result is an
  /// expression over the replacement's declared variable set; any other
  /// variable of *this must exist by name in that set.
  Expr substitute(std::string_view var, const Expr& replacement) const {
    const int idx = var_index(var);
    if (idx < 0)
      throw EvalError("substitute: variable '" + std::string(var) + "' is not declared");
    return Expr(subst_node(root_, idx, replacement), replacement.vars_);
  }

  std::string to_string() const { return print_node(*root_, 0); }

  const std::vector<std::string>& variables() const { return *vars_; }

  std::set<std::string> used_variables() const {
    std::set<std::string> out;
    collect_vars(*root_, out);
    return out;
  }

  bool is_constant() const { return root_->kind == detail::ExprNode::Number; }
  bool is_constant(double v) const { return is_constant() && root_->value == v; }

  /// Build a constant expression over the given variable set.
  static Expr constant(double v, std::vector<std::string> variables = {}) {
    return Expr(detail::make_number(v),
                std::make_shared<const std::vector<std::string>>(std::move(variables)));
  }

  friend Expr operator+(const Expr& a, const Expr& b) { return a.combine(BinOp::Add, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return a.combine(BinOp::Sub, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return a.combine(BinOp::Mul, b); }
  friend Expr operator-(const Expr& a) { return Expr(detail::make_neg(a.root_), a.vars_); }

  friend Expr parse_expr(std::string_view, std::vector<std::string>);

 private:
  using NodePtr = detail::NodePtr;
  using Node = detail::ExprNode;

  Expr(NodePtr root, std::shared_ptr<const std::vector<std::string>> vars)
      : root_(std::move(root)), vars_(std::move(vars)) {}

  Expr combine(BinOp op, const Expr& b) const {
    if (*vars_ != *b.vars_)
      throw EvalError("cannot combine expressions over different variable sets");
    return Expr(detail::make_binary(op, root_, b.root_), vars_);
  }

  int var_index(std::string_view name) const {
    for (std::size_t i = 0; i < vars_->size(); ++i)
      if ((*vars_)[i] == name) return static_cast<int>(i);
    return -1;
  }

  static void collect_vars(const Node& n, std::set<std::string>& out) {
    if (n.kind == Node::Variable) out.insert(n.name);
    if (n.a) collect_vars(*n.a, out);
    if (n.b) collect_vars(*n.b, out);
  }

  static NodePtr diff_node(const NodePtr& n, int var) {
    using namespace detail;
    switch (n->kind) {
      case Node::Number:
        return make_number(0.0);
      case Node::Variable:
        return make_number(n->var == var ? 1.0 : 0.0);
      case Node::Neg:
        return make_neg(diff_node(n->a, var));
      case Node::Binary: {
        const NodePtr da = diff_node(n->a, var);
        const NodePtr db = diff_node(n->b, var);
        switch (n->op) {
          case BinOp::Add: return make_binary(BinOp::Add, da, db);
          case BinOp::Sub: return make_binary(BinOp::Sub, da, db);
          case BinOp::Mul:
            return make_binary(BinOp::Add, make_binary(BinOp::Mul, da, n->b),
                               make_binary(BinOp::Mul, n->a, db));
          case BinOp::Div:
            // (a/b)' = a'/b - a b' / b^2
            return make_binary(
                BinOp::Sub, make_binary(BinOp::Div, da, n->b),
                make_binary(BinOp::Div, make_binary(BinOp::Mul, n->a, db),
                            make_binary(BinOp::Pow, n->b, make_number(2.0))));
          case BinOp::Pow:
            if (n->b->kind == Node::Number) {
              // power rule: (u^c)' = c u^(c-1) u'
              const double c = n->b->value;
              return make_binary(
                  BinOp::Mul,
                  make_binary(BinOp::Mul, make_number(c),
                              make_binary(BinOp::Pow, n->a, make_number(c - 1.0))),
                  da);
            }
            // general: u^v (v' log u + v u' / u)
            return make_binary(
                BinOp::Mul, n,
                make_binary(BinOp::Add,
                            make_binary(BinOp::Mul, db, make_call(FuncId::Log, n->a)),
                            make_binary(BinOp::Div, make_binary(BinOp::Mul, n->b, da),
                                        n->a)));
        }
        return make_number(0.0);
      }
      case Node::Call: {
        const NodePtr da = diff_node(n->a, var);
        NodePtr outer;
        switch (n->fn) {
          case FuncId::Sin: outer = make_call(FuncId::Cos, n->a); break;
          case FuncId::Cos: outer = make_neg(make_call(FuncId::Sin, n->a)); break;
          case FuncId::Exp: outer = make_call(FuncId::Exp, n->a); break;
          case FuncId::Log:
            return make_binary(BinOp::Div, da, n->a);
          case FuncId::Sqrt:
            return make_binary(
                BinOp::Div, da,
                make_binary(BinOp::Mul, make_number(2.0), make_call(FuncId::Sqrt, n->a)));
          case FuncId::Abs:
            // u/|u| = sign(u) away from u = 0
            outer = make_binary(BinOp::Div, n->a, make_call(FuncId::Abs, n->a));
            break;
          case FuncId::Tanh:
            outer = make_binary(
                BinOp::Sub, make_number(1.0),
                make_binary(BinOp::Pow, make_call(FuncId::Tanh, n->a), make_number(2.0)));
            break;
        }
        return make_binary(BinOp::Mul, outer, da);
      }
    }
    return detail::make_number(0.0);
  }

  static NodePtr subst_node(const NodePtr& n, int var, const Expr& repl) {
    using namespace detail;
    switch (n->kind) {
      case Node::Number:
        return n;
      case Node::Variable: {
        if (n->var == var) return repl.root_;
        const int idx = repl.var_index(n->name);
        if (idx < 0)
          throw EvalError("substitute: variable '" + n->name +
                          "' is not declared in the replacement's variable set");
        return make_variable(idx, n->name);
      }
      case Node::Neg:
        return make_neg(subst_node(n->a, var, repl));
      case Node::Binary:
        return make_binary(n->op, subst_node(n->a, var, repl), subst_node(n->b, var, repl));
      case Node::Call:
        return make_call(n->fn, subst_node(n->a, var, repl));
    }
    return n;
  }

  // Precedence levels for printing: + - (1), * / (2), unary - (3), ^ (4).
  static int node_prec(const Node& n) {
    switch (n.kind) {
      case Node::Binary:
        switch (n.op) {
          case BinOp::Add:
          case BinOp::Sub: return 1;
          case BinOp::Mul:
          case BinOp::Div: return 2;
          case BinOp::Pow: return 4;
        }
        return 5;
      case Node::Neg: return 3;
      case Node::Number: return n.value < 0.0 ? 3 : 5;
      default: return 5;
    }
  }

  static std::string print_node(const Node& n, int parent_prec) {
    using namespace detail;
    std::string s;
    switch (n.kind) {
      case Node::Number: s = format_double(n.value); break;
      case Node::Variable: s = n.name; break;
      case Node::Neg: s = "-" + print_node(*n.a, 3); break;
      case Node::Binary: {
        const char* op = n.op == BinOp::Add ? " + "
                       : n.op == BinOp::Sub ? " - "
                       : n.op == BinOp::Mul ? "*"
                       : n.op == BinOp::Div ? "/"
                                            : "^";
        const int prec = node_prec(n);
        if (n.op == BinOp::Pow) {
          // right-associative; parenthesize a left operand of equal or lower
          // precedence so (a^b)^c and (-a)^b survive the round trip
          s = print_node(*n.a, prec + 1) + op + print_node(*n.b, 3);
        } else {
          // left-associative; the right operand needs strictly higher
          // precedence for '-' and '/'
          s = print_node(*n.a, prec) + op + print_node(*n.b, prec + 1);
        }
        break;
      }
      case Node::Call:
        s = std::string(func_name(n.fn)) + "(" + print_node(*n.a, 0) + ")";
        return s;
    }
    if (node_prec(n) < parent_prec && n.kind != Node::Variable) s = "(" + s + ")";
    return s;
  }

  NodePtr root_;
  std::shared_ptr<const std::vector<std::string>> vars_;
};

namespace detail {

struct Token {
  enum Kind { Num, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind;
  double num = 0.0;
  std::string text;
  std::size_t offset = 0;
};

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    Token t;
    t.offset = i;
    if ((c >= '0' && c <= '9') || c == '.') {
      double v = 0.0;
      const char* begin = src.data() + i;
      const char* end = src.data() + src.size();
      auto [ptr, ec] = std::from_chars(begin, end, v);
      if (ec != std::errc{} || ptr == begin)
        throw ParseError(i, "number", "syntax error at offset " + std::to_string(i) +
                                          ": malformed number");
      t.kind = Token::Num;
      t.num = v;
      i += static_cast<std::size_t>(ptr - begin);
    } else if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             ((src[j] >= 'a' && src[j] <= 'z') || (src[j] >= 'A' && src[j] <= 'Z') ||
              (src[j] >= '0' && src[j] <= '9') || src[j] == '_'))
        ++j;
      t.kind = Token::Name;
      t.text = std::string(src.substr(i, j - i));
      i = j;
    } else {
      switch (c) {
        case '+': t.kind = Token::Plus; break;
        case '-': t.kind = Token::Minus; break;
        case '*': t.kind = Token::Star; break;
        case '/': t.kind = Token::Slash; break;
        case '^': t.kind = Token::Caret; break;
        case '(': t.kind = Token::LParen; break;
        case ')': t.kind = Token::RParen; break;
        default:
          throw ParseError(i, "operator or operand",
                           "syntax error at offset " + std::to_string(i) +
                               ": unexpected character '" + std::string(1, c) + "'");
      }
      ++i;
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::End;
  end.offset = src.size();
  out.push_back(end);
  return out;
}

class Parser {
 public:
  Parser(std::string_view src, std::shared_ptr<const std::vector<std::string>> vars)
      : tokens_(lex(src)), vars_(std::move(vars)) {}

  NodePtr parse() {
    NodePtr e = parse_sum();
    if (peek().kind != Token::End)
      throw ParseError(peek().offset, "end of input",
                       "syntax error at offset " + std::to_string(peek().offset) +
                           ": unexpected trailing input");
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }

  [[noreturn]] void fail_expected(const std::string& what) const {
    throw ParseError(peek().offset, what,
                     "syntax error at offset " + std::to_string(peek().offset) +
                         ": expected " + what);
  }

  NodePtr parse_sum() {
    NodePtr e = parse_term();
    while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
      const BinOp op = take().kind == Token::Plus ? BinOp::Add : BinOp::Sub;
      e = make_binary(op, e, parse_term());
    }
    return e;
  }

  NodePtr parse_term() {
    NodePtr e = parse_factor();
    while (peek().kind == Token::Star || peek().kind == Token::Slash) {
      const BinOp op = take().kind == Token::Star ? BinOp::Mul : BinOp::Div;
      e = make_binary(op, e, parse_factor());
    }
    return e;
  }

  NodePtr parse_factor() {
    if (peek().kind == Token::Minus) {
      take();
      return make_neg(parse_factor());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    if (peek().kind == Token::Caret) {
      take();
      return make_binary(BinOp::Pow, base, parse_factor());
    }
    return base;
  }

  NodePtr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Num:
        return make_number(take().num);
      case Token::LParen: {
        take();
        NodePtr e = parse_sum();
        if (peek().kind != Token::RParen) fail_expected("')'");
        take();
        return e;
      }
      case Token::Name: {
        const Token name = take();
        // declared variables shadow constants and function names
        for (std::size_t i = 0; i < vars_->size(); ++i) {
          if ((*vars_)[i] == name.text)
            return make_variable(static_cast<int>(i), name.text);
        }
        FuncId fn;
        if (lookup_func(name.text, fn)) {
          if (peek().kind != Token::LParen) fail_expected("'(' after function name");
          take();
          NodePtr arg = parse_sum();
          if (peek().kind != Token::RParen) fail_expected("')'");
          take();
          return make_call(fn, arg);
        }
        if (name.text == "pi") return make_number(std::numbers::pi);
        if (name.text == "e") return make_number(std::numbers::e);
        std::string declared;
        for (std::size_t i = 0; i < vars_->size(); ++i)
          declared += (i ? ", " : "") + (*vars_)[i];
        if (declared.empty()) declared = "<none>";
        throw ParseError(name.offset, "declared variable",
                         "unknown identifier '" + name.text + "' at offset " +
                             std::to_string(name.offset) +
                             " (declared variables: " + declared + ")");
      }
      default:
        fail_expected("a number, a variable, a function call, '(' or unary '-'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::shared_ptr<const std::vector<std::string>> vars_;
};

}  // namespace detail

/// Parse `source` into an expression over the declared variable set.
inline Expr parse_expr(std::string_view source, std::vector<std::string> variables) {
  if (source.empty())
    throw ParseError(0, "nonempty expression", "syntax error at offset 0: empty source");
  auto vars = std::make_shared<const std::vector<std::string>>(std::move(variables));
  detail::Parser p(source, vars);
  return Expr(p.parse(), vars);
}

}  // namespace ccp
