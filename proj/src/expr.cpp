#include "tg/expr.hpp"

#include <cctype>
#include <cmath>
#include <utility>

#include "tg/error.hpp"
#include "tg/format.hpp"

namespace tg {

struct Expr::Node {
  ExprKind kind;
  double value = 0.0;  // Constant
  int index = 0;       // Coord index or Pow exponent
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

double ipow(double base, int exponent) {
  double r = 1.0;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

}  // namespace

Expr Expr::constant(double value) {
  if (!std::isfinite(value)) throw Error(Errc::InvalidArgument, "constant must be finite");
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::coord(int index) {
  if (index < 0) throw Error(Errc::CoordOutOfRange, "coordinate index must be nonnegative");
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Coord;
  n->index = index;
  return Expr(std::move(n));
}

static Expr make_binary(ExprKind kind, Expr lhs, Expr rhs);
static Expr make_unary(ExprKind kind, Expr arg);

struct ExprAccess {
  static const NodePtr& node(const Expr& e) { return e.node_; }
  static Expr wrap(NodePtr n) { return Expr(std::move(n)); }
};

static Expr make_binary(ExprKind kind, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->a = ExprAccess::node(lhs);
  n->b = ExprAccess::node(rhs);
  return ExprAccess::wrap(std::move(n));
}

static Expr make_unary(ExprKind kind, Expr arg) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->a = ExprAccess::node(arg);
  return ExprAccess::wrap(std::move(n));
}

Expr Expr::sum(Expr lhs, Expr rhs) { return make_binary(ExprKind::Sum, std::move(lhs), std::move(rhs)); }
Expr Expr::product(Expr lhs, Expr rhs) {
  return make_binary(ExprKind::Product, std::move(lhs), std::move(rhs));
}

Expr Expr::pow(Expr base, int exponent) {
  if (exponent < 0) throw Error(Errc::InvalidArgument, "exponent must be nonnegative");
  auto n = std::make_shared<Node>();
  n->kind = ExprKind::Pow;
  n->index = exponent;
  n->a = ExprAccess::node(base);
  return ExprAccess::wrap(std::move(n));
}

Expr Expr::sin(Expr arg) { return make_unary(ExprKind::Sin, std::move(arg)); }
Expr Expr::cos(Expr arg) { return make_unary(ExprKind::Cos, std::move(arg)); }
Expr Expr::exp(Expr arg) { return make_unary(ExprKind::Exp, std::move(arg)); }

ExprKind Expr::kind() const { return node_->kind; }

double Expr::constant_value() const {
  if (kind() != ExprKind::Constant) throw Error(Errc::InvalidArgument, "not a constant node");
  return node_->value;
}

int Expr::coord_index() const {
  if (kind() != ExprKind::Coord) throw Error(Errc::InvalidArgument, "not a coordinate node");
  return node_->index;
}

int Expr::exponent() const {
  if (kind() != ExprKind::Pow) throw Error(Errc::InvalidArgument, "not a power node");
  return node_->index;
}

int Expr::child_count() const {
  switch (kind()) {
    case ExprKind::Constant:
    case ExprKind::Coord:
      return 0;
    case ExprKind::Sum:
    case ExprKind::Product:
      return 2;
    default:
      return 1;
  }
}

Expr Expr::child(int i) const {
  const auto& c = (i == 0) ? node_->a : node_->b;
  if (!c) throw Error(Errc::InvalidArgument, "no such child");
  return ExprAccess::wrap(c);
}

int Expr::max_coord_index() const {
  switch (kind()) {
    case ExprKind::Constant:
      return -1;
    case ExprKind::Coord:
      return node_->index;
    default: {
      int m = ExprAccess::wrap(node_->a).max_coord_index();
      if (node_->b) {
        int mb = ExprAccess::wrap(node_->b).max_coord_index();
        if (mb > m) m = mb;
      }
      return m;
    }
  }
}

static bool nodes_equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::Constant:
      return a->value == b->value;
    case ExprKind::Coord:
      return a->index == b->index;
    case ExprKind::Pow:
      return a->index == b->index && nodes_equal(a->a, b->a);
    case ExprKind::Sum:
    case ExprKind::Product:
      return nodes_equal(a->a, b->a) && nodes_equal(a->b, b->b);
    default:
      return nodes_equal(a->a, b->a);
  }
}

bool Expr::operator==(const Expr& other) const { return nodes_equal(node_, other.node_); }

// ---------------------------------------------------------------------------
// Simplifying algebra

static bool is_const(const Expr& e, double v) {
  return e.kind() == ExprKind::Constant && e.constant_value() == v;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.kind() == ExprKind::Constant && b.kind() == ExprKind::Constant)
    return Expr::constant(a.constant_value() + b.constant_value());
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return Expr::sum(a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.kind() == ExprKind::Constant && b.kind() == ExprKind::Constant)
    return Expr::constant(a.constant_value() * b.constant_value());
  if (is_const(a, 0.0) || is_const(b, 0.0)) return Expr::constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return Expr::product(a, b);
}

Expr operator-(const Expr& a) {
  if (a.kind() == ExprKind::Constant) return Expr::constant(-a.constant_value());
  return Expr::product(Expr::constant(-1.0), a);
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr pow(const Expr& base, int exponent) {
  if (exponent < 0) throw Error(Errc::InvalidArgument, "exponent must be nonnegative");
  if (exponent == 0) return Expr::constant(1.0);
  if (exponent == 1) return base;
  if (base.kind() == ExprKind::Constant) return Expr::constant(ipow(base.constant_value(), exponent));
  return Expr::pow(base, exponent);
}

Expr sin(const Expr& arg) {
  if (arg.kind() == ExprKind::Constant) return Expr::constant(std::sin(arg.constant_value()));
  return Expr::sin(arg);
}

Expr cos(const Expr& arg) {
  if (arg.kind() == ExprKind::Constant) return Expr::constant(std::cos(arg.constant_value()));
  return Expr::cos(arg);
}

Expr exp(const Expr& arg) {
  if (arg.kind() == ExprKind::Constant) return Expr::constant(std::exp(arg.constant_value()));
  return Expr::exp(arg);
}

// ---------------------------------------------------------------------------
// Evaluation, derivative, substitution

static double eval_node(const Expr::Node* n, const Vector& x) {
  switch (n->kind) {
    case ExprKind::Constant:
      return n->value;
    case ExprKind::Coord:
      return x[n->index];
    case ExprKind::Sum:
      return eval_node(n->a.get(), x) + eval_node(n->b.get(), x);
    case ExprKind::Product:
      return eval_node(n->a.get(), x) * eval_node(n->b.get(), x);
    case ExprKind::Pow:
      return ipow(eval_node(n->a.get(), x), n->index);
    case ExprKind::Sin:
      return std::sin(eval_node(n->a.get(), x));
    case ExprKind::Cos:
      return std::cos(eval_node(n->a.get(), x));
    case ExprKind::Exp:
      return std::exp(eval_node(n->a.get(), x));
  }
  return 0.0;  // unreachable
}

double eval(const Expr& e, const Vector& x) {
  if (e.max_coord_index() >= x.size())
    throw Error(Errc::DimensionMismatch, "point has too few coordinates for expression");
  return eval_node(ExprAccess::node(e).get(), x);
}

Expr derivative(const Expr& e, int coord) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return Expr::constant(0.0);
    case ExprKind::Coord:
      return Expr::constant(e.coord_index() == coord ? 1.0 : 0.0);
    case ExprKind::Sum:
      return derivative(e.child(0), coord) + derivative(e.child(1), coord);
    case ExprKind::Product: {
      Expr a = e.child(0), b = e.child(1);
      return derivative(a, coord) * b + a * derivative(b, coord);
    }
    case ExprKind::Pow: {
      int k = e.exponent();
      if (k == 0) return Expr::constant(0.0);
      Expr base = e.child(0);
      return Expr::constant(static_cast<double>(k)) * pow(base, k - 1) * derivative(base, coord);
    }
    case ExprKind::Sin:
      return cos(e.child(0)) * derivative(e.child(0), coord);
    case ExprKind::Cos:
      return -(sin(e.child(0)) * derivative(e.child(0), coord));
    case ExprKind::Exp:
      return exp(e.child(0)) * derivative(e.child(0), coord);
  }
  return Expr::constant(0.0);  // unreachable
}

Expr substitute(const Expr& e, const std::vector<Expr>& replacement_by_coord) {
  switch (e.kind()) {
    case ExprKind::Constant:
      return e;
    case ExprKind::Coord: {
      int i = e.coord_index();
      if (i >= static_cast<int>(replacement_by_coord.size()))
        throw Error(Errc::CoordOutOfRange, "no replacement for coordinate x" + std::to_string(i));
      return replacement_by_coord[i];
    }
    case ExprKind::Sum:
      return substitute(e.child(0), replacement_by_coord) +
             substitute(e.child(1), replacement_by_coord);
    case ExprKind::Product:
      return substitute(e.child(0), replacement_by_coord) *
             substitute(e.child(1), replacement_by_coord);
    case ExprKind::Pow:
      return pow(substitute(e.child(0), replacement_by_coord), e.exponent());
    case ExprKind::Sin:
      return sin(substitute(e.child(0), replacement_by_coord));
    case ExprKind::Cos:
      return cos(substitute(e.child(0), replacement_by_coord));
    case ExprKind::Exp:
      return exp(substitute(e.child(0), replacement_by_coord));
  }
  return e;  // unreachable
}

// ---------------------------------------------------------------------------
// Printer
//
// Grammar (see README):
//   expr   := term (('+' | '-') term)*
//   term   := factor ('*' factor)*
//   factor := '-' factor | base
//   base   := atom ('^' uint)?
//   atom   := number | coord | func '(' expr ')' | '(' expr ')'
// Binary minus parses as a + (-1 * term); unary minus on anything but a
// literal parses as -1 * factor. The printer emits exactly the text whose
// parse reproduces the tree.

namespace {

bool is_neg_product(const Expr& e) {
  return e.kind() == ExprKind::Product && is_const(e.child(0), -1.0);
}

void print_expr(const Expr& e, std::string& out);
void print_term(const Expr& e, std::string& out);
void print_factor(const Expr& e, std::string& out);
void print_atom(const Expr& e, std::string& out);

void print_parenthesized(const Expr& e, std::string& out) {
  out += '(';
  print_expr(e, out);
  out += ')';
}

void print_expr(const Expr& e, std::string& out) {
  if (e.kind() == ExprKind::Sum) {
    print_expr(e.child(0), out);
    Expr rhs = e.child(1);
    if (is_neg_product(rhs)) {
      out += " - ";
      print_term(rhs.child(1), out);
    } else {
      out += " + ";
      print_term(rhs, out);
    }
    return;
  }
  print_term(e, out);
}

void print_term(const Expr& e, std::string& out) {
  if (e.kind() == ExprKind::Product) {
    if (is_neg_product(e)) {
      // "-X" with X at factor level; "-" before a literal would lex as a
      // signed number, so constants keep an explicit "-1*".
      Expr body = e.child(1);
      if (body.kind() == ExprKind::Constant) {
        out += "-1*";
        print_factor(body, out);
      } else {
        out += '-';
        print_factor(body, out);
      }
      return;
    }
    print_term(e.child(0), out);
    out += '*';
    print_factor(e.child(1), out);
    return;
  }
  print_factor(e, out);
}

void print_factor(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case ExprKind::Sum:
      print_parenthesized(e, out);
      return;
    case ExprKind::Product:
      if (is_neg_product(e)) {
        print_term(e, out);  // a factor may itself be negated
      } else {
        print_parenthesized(e, out);
      }
      return;
    case ExprKind::Pow: {
      print_atom(e.child(0), out);
      out += '^';
      out += std::to_string(e.exponent());
      return;
    }
    default:
      print_atom(e, out);
  }
}

void print_atom(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case ExprKind::Constant: {
      double v = e.constant_value();
      if (v < 0.0 || (v == 0.0 && std::signbit(v))) {
        // a signed literal is an atom by itself but not inside e.g. a power
        // base, so keep it parenthesized everywhere an atom is required
        out += '(';
        out += format_double(v);
        out += ')';
      } else {
        out += format_double(v);
      }
      return;
    }
    case ExprKind::Coord:
      out += 'x';
      out += std::to_string(e.coord_index());
      return;
    case ExprKind::Sin:
      out += "sin(";
      print_expr(e.child(0), out);
      out += ')';
      return;
    case ExprKind::Cos:
      out += "cos(";
      print_expr(e.child(0), out);
      out += ')';
      return;
    case ExprKind::Exp:
      out += "exp(";
      print_expr(e.child(0), out);
      out += ')';
      return;
    default:
      print_parenthesized(e, out);
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print_expr(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Number, Coord, Func, Plus, Minus, Star, Caret, LParen, RParen, End };

struct Token {
  Tok type;
  long offset;
  double number = 0.0;
  int coord = 0;
  ExprKind func = ExprKind::Sin;
};

class Lexer {
 public:
  Lexer(std::string_view text, int dimension) : text_(text), dim_(dimension) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what, long offset) const {
    throw Error(Errc::SyntaxError, what + " at offset " + std::to_string(offset), offset);
  }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    current_.offset = static_cast<long>(pos_);
    if (pos_ >= text_.size()) {
      current_.type = Tok::End;
      return;
    }
    char c = text_[pos_];
    switch (c) {
      case '+': current_.type = Tok::Plus; ++pos_; return;
      case '-': current_.type = Tok::Minus; ++pos_; return;
      case '*': current_.type = Tok::Star; ++pos_; return;
      case '^': current_.type = Tok::Caret; ++pos_; return;
      case '(': current_.type = Tok::LParen; ++pos_; return;
      case ')': current_.type = Tok::RParen; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      lex_word();
      return;
    }
    fail(std::string("unexpected character '") + c + "'", current_.offset);
  }

  void lex_number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        fail("malformed number", static_cast<long>(pos_));
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        pos_ = mark;  // the 'e' belongs to something else (there is no such
                      // token, so the parser reports it, but do not eat it)
      } else {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    current_.type = Tok::Number;
    current_.number = parse_double(text_.substr(start, pos_ - start));
  }

  void lex_word() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string_view word = text_.substr(start, pos_ - start);
    if (word == "sin") { current_.type = Tok::Func; current_.func = ExprKind::Sin; return; }
    if (word == "cos") { current_.type = Tok::Func; current_.func = ExprKind::Cos; return; }
    if (word == "exp") { current_.type = Tok::Func; current_.func = ExprKind::Exp; return; }
    if (word.size() >= 2 && word[0] == 'x') {
      for (std::size_t i = 1; i < word.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(word[i])))
          fail("unknown identifier '" + std::string(word) + "'", static_cast<long>(start));
      int index = 0;
      for (std::size_t i = 1; i < word.size(); ++i) index = index * 10 + (word[i] - '0');
      if (index >= dim_) {
        throw Error(Errc::CoordOutOfRange,
                    "coordinate x" + std::to_string(index) + " exceeds dimension " +
                        std::to_string(dim_) + " at offset " + std::to_string(start),
                    static_cast<long>(start));
      }
      current_.type = Tok::Coord;
      current_.coord = index;
      return;
    }
    fail("unknown identifier '" + std::string(word) + "'", static_cast<long>(start));
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
  Token current_{};
};

class Parser {
 public:
  Parser(std::string_view text, int dimension) : lex_(text, dimension) {}

  Expr parse() {
    Expr e = parse_sum();
    if (lex_.peek().type != Tok::End) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    long off = lex_.peek().offset;
    throw Error(Errc::SyntaxError, what + " at offset " + std::to_string(off), off);
  }

  Expr parse_sum() {
    Expr lhs = parse_term();
    while (true) {
      Tok t = lex_.peek().type;
      if (t == Tok::Plus) {
        lex_.take();
        lhs = Expr::sum(lhs, parse_term());
      } else if (t == Tok::Minus) {
        lex_.take();
        lhs = Expr::sum(lhs, Expr::product(Expr::constant(-1.0), parse_term()));
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    while (lex_.peek().type == Tok::Star) {
      lex_.take();
      lhs = Expr::product(lhs, parse_factor());
    }
    return lhs;
  }

  Expr parse_factor() {
    if (lex_.peek().type == Tok::Minus) {
      lex_.take();
      // a sign directly before a literal folds into the constant
      if (lex_.peek().type == Tok::Number) {
        Token num = lex_.take();
        return finish_power(Expr::constant(-num.number));
      }
      return Expr::product(Expr::constant(-1.0), parse_factor());
    }
    return finish_power(parse_atom());
  }

  Expr finish_power(Expr base) {
    if (lex_.peek().type != Tok::Caret) return base;
    lex_.take();
    if (lex_.peek().type != Tok::Number) fail("expected integer exponent");
    Token num = lex_.take();
    double v = num.number;
    int k = static_cast<int>(v);
    if (static_cast<double>(k) != v || k < 0) {
      throw Error(Errc::SyntaxError,
                  "exponent must be a nonnegative integer at offset " + std::to_string(num.offset),
                  num.offset);
    }
    return Expr::pow(std::move(base), k);
  }

  Expr parse_atom() {
    Token t = lex_.peek();
    switch (t.type) {
      case Tok::Number:
        lex_.take();
        return Expr::constant(t.number);
      case Tok::Coord:
        lex_.take();
        return Expr::coord(t.coord);
      case Tok::Func: {
        lex_.take();
        if (lex_.peek().type != Tok::LParen) fail("expected '(' after function name");
        lex_.take();
        Expr arg = parse_sum();
        if (lex_.peek().type != Tok::RParen) fail("expected ')'");
        lex_.take();
        switch (t.func) {
          case ExprKind::Sin: return Expr::sin(std::move(arg));
          case ExprKind::Cos: return Expr::cos(std::move(arg));
          default: return Expr::exp(std::move(arg));
        }
      }
      case Tok::LParen: {
        lex_.take();
        Expr e = parse_sum();
        if (lex_.peek().type != Tok::RParen) fail("expected ')'");
        lex_.take();
        return e;
      }
      default:
        fail("expected a value");
    }
  }

  Lexer lex_;
};

}  // namespace

Expr parse_expr(std::string_view text, int dimension) {
  if (text.empty()) throw Error(Errc::SyntaxError, "empty expression", 0);
  return Parser(text, dimension).parse();
}

// ---------------------------------------------------------------------------
// ScalarField, Curve

ScalarField::ScalarField(int dimension, Expr body) : dimension_(dimension), body_(std::move(body)) {
  if (dimension <= 0) throw Error(Errc::InvalidArgument, "dimension must be positive");
  if (body_.max_coord_index() >= dimension)
    throw Error(Errc::CoordOutOfRange, "expression references coordinates beyond the dimension");
}

ScalarField parse_field(std::string_view text, int dimension) {
  return ScalarField(dimension, parse_expr(text, dimension));
}

double eval(const ScalarField& f, const Vector& x) {
  if (x.size() != f.dimension())
    throw Error(Errc::DimensionMismatch, "point dimension does not match field");
  return eval_node(ExprAccess::node(f.body()).get(), x);
}

ScalarField differentiate(const ScalarField& f, int i) {
  if (i < 0 || i >= f.dimension())
    throw Error(Errc::CoordOutOfRange, "derivative index out of range");
  return ScalarField(f.dimension(), derivative(f.body(), i));
}

double directional_derivative(const ScalarField& f, const Vector& x, const Vector& v) {
  if (x.size() != f.dimension() || v.size() != f.dimension())
    throw Error(Errc::DimensionMismatch, "point/vector dimension does not match field");
  double acc = 0.0;
  for (int i = 0; i < f.dimension(); ++i) {
    acc += v[i] * eval_node(ExprAccess::node(derivative(f.body(), i)).get(), x);
  }
  return acc;
}

ScalarField operator*(const ScalarField& f, const ScalarField& g) {
  if (f.dimension() != g.dimension())
    throw Error(Errc::DimensionMismatch, "field dimensions differ");
  return ScalarField(f.dimension(), f.body() * g.body());
}

Curve::Curve(int dimension, std::vector<Expr> components)
    : dimension_(dimension), components_(std::move(components)) {
  if (dimension <= 0 || static_cast<int>(components_.size()) != dimension)
    throw Error(Errc::DimensionMismatch, "curve needs one component per dimension");
  for (const Expr& c : components_) {
    if (c.max_coord_index() > 0)
      throw Error(Errc::CoordOutOfRange, "curve components are functions of x0 only");
  }
}

Vector eval_curve(const Curve& c, double t) {
  Vector param(1);
  param[0] = t;
  Vector out(c.dimension());
  for (int i = 0; i < c.dimension(); ++i) out[i] = eval(c.components()[i], param);
  return out;
}

}  // namespace tg
