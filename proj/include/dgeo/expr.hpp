#pragma once

// Immutable expression trees over named real variables.
//
// An Expr is a cheap-to-copy handle to a shared, never-mutated node. Trees can
// be evaluated at a Point, differentiated exactly, simplified into a
// conservative normal form, printed and re-parsed.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dgeo {

// Variables are interned process-wide; a Symbol is the interned id.
using Symbol = int;

Symbol intern(std::string_view name);
const std::string& symbol_name(Symbol s);

enum class Op : std::uint8_t {
  Const,
  Var,
  Neg,
  Add,  // n-ary
  Sub,
  Mul,  // n-ary
  Div,
  Pow,  // constant exponent stored in the node
  Exp,
  Log,
  Sin,
  Cos,
  Sqrt,
};

class ExprError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ExprError {
 public:
  ParseError(const std::string& msg, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(const std::string& name, std::size_t offset);
  const std::string& identifier() const { return name_; }

 private:
  std::string name_;
};

// Raised by evaluate(); carries the printed subtree that failed.
class DomainError : public ExprError {
 public:
  DomainError(const std::string& what, std::string subtree);
  const std::string& subtree() const { return subtree_; }

 private:
  std::string subtree_;
};

struct Node;

class Expr {
 public:
  Expr();  // constant 0
  Expr(double c);  // NOLINT: implicit constant promotion is the point

  static Expr var(std::string_view name);
  static Expr var(Symbol s);

  Op op() const;
  // Constant value, or the exponent of a Pow node.
  double value() const;
  Symbol symbol() const;
  std::span<const Expr> args() const;

  bool is_constant() const { return op() == Op::Const; }
  bool is_zero() const { return is_constant() && value() == 0.0; }
  bool is_one() const { return is_constant() && value() == 1.0; }

  // Text in the parse grammar; parse(str()) is value-equal to *this.
  std::string str() const;

  const Node* node_ptr() const { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  friend Expr make_node(Op op, double value, Symbol sym, std::vector<Expr> args);

  std::shared_ptr<const Node> node_;
};

// Raw node construction without folding; used by the parser and simplifier.
Expr make_node(Op op, double value, Symbol sym, std::vector<Expr> args);

// Folding constructors: constants fold, 0/1 identities disappear.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, double exponent);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr sqrt(const Expr& a);

inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

// Total structural order; 0 iff the trees are identical.
int compare(const Expr& a, const Expr& b);
inline bool same_tree(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

std::size_t node_count(const Expr& e);
std::vector<Symbol> free_symbols(const Expr& e);
bool depends_on(const Expr& e, Symbol s);

// Binding of variable values used for evaluation.
class Point {
 public:
  Point() = default;
  Point(std::span<const Symbol> symbols, std::span<const double> values);

  void set(Symbol s, double v);
  std::optional<double> find(Symbol s) const;
  double at(Symbol s) const;
  std::size_t size() const { return entries_.size(); }
  const std::vector<std::pair<Symbol, double>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<Symbol, double>> entries_;  // sorted by symbol
};

double evaluate(const Expr& e, const Point& p);

Expr differentiate(const Expr& e, Symbol v);
Expr differentiate(const Expr& e, std::string_view v);

// Expressions declared never to vanish on the domain; factors matching one of
// these (structurally, after simplification) may cancel against their inverse.
class Assumptions {
 public:
  Assumptions() = default;
  void add_nonzero(const Expr& e);
  bool is_nonzero(const Expr& e) const;
  bool empty() const { return nonzero_.empty(); }

 private:
  std::vector<Expr> nonzero_;
};

// Value-preserving normal form: sums of products with collected coefficients,
// merged exponentials, sin^2 + cos^2 = 1. No factoring.
Expr simplify(const Expr& e, const Assumptions& assume = {});

Expr substitute(const Expr& e, const std::map<Symbol, Expr>& repl);

// Identifiers the parser accepts, and named constants it inlines.
class ParseScope {
 public:
  static ParseScope any();
  ParseScope() = default;
  explicit ParseScope(std::span<const std::string> variables);

  ParseScope& allow(std::string_view name);
  ParseScope& constant(std::string_view name, double value);

  bool allows(std::string_view name) const;
  std::optional<double> constant_value(std::string_view name) const;

 private:
  bool open_ = false;
  std::vector<std::string> vars_;
  std::vector<std::pair<std::string, double>> constants_;
};

Expr parse(std::string_view text, const ParseScope& scope);

}  // namespace dgeo
