#include "dgeo/expr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

#include "node.hpp"

namespace dgeo {

// ---------------------------------------------------------------------------
// symbols

namespace {

struct SymbolTable {
  std::shared_mutex mu;
  std::deque<std::string> names;
  std::unordered_map<std::string, Symbol> ids;
};

SymbolTable& symbols() {
  static SymbolTable table;
  return table;
}

}  // namespace

Symbol intern(std::string_view name) {
  auto& t = symbols();
  std::string key(name);
  {
    std::shared_lock lock(t.mu);
    if (auto it = t.ids.find(key); it != t.ids.end()) return it->second;
  }
  std::unique_lock lock(t.mu);
  if (auto it = t.ids.find(key); it != t.ids.end()) return it->second;
  auto id = static_cast<Symbol>(t.names.size());
  t.names.push_back(key);
  t.ids.emplace(std::move(key), id);
  return id;
}

const std::string& symbol_name(Symbol s) {
  auto& t = symbols();
  std::shared_lock lock(t.mu);
  return t.names.at(static_cast<std::size_t>(s));
}

// ---------------------------------------------------------------------------
// errors

ParseError::ParseError(const std::string& msg, std::size_t offset)
    : ExprError(msg + " at byte " + std::to_string(offset)), offset_(offset) {}

UnknownIdentifier::UnknownIdentifier(const std::string& name, std::size_t offset)
    : ParseError("unknown identifier '" + name + "'", offset), name_(name) {}

DomainError::DomainError(const std::string& what, std::string subtree)
    : ExprError(what + " in " + subtree), subtree_(std::move(subtree)) {}

// ---------------------------------------------------------------------------
// nodes

namespace {

const std::shared_ptr<const Node>& zero_node() {
  static const auto z = std::make_shared<const Node>(Node{Op::Const, 0.0, -1, {}});
  return z;
}

}  // namespace

Expr make_node(Op op, double value, Symbol sym, std::vector<Expr> args) {
  if (op == Op::Const && value == 0.0) return Expr(zero_node());
  return Expr(std::make_shared<const Node>(Node{op, value, sym, std::move(args)}));
}

Expr::Expr() : node_(zero_node()) {}
Expr::Expr(double c) : Expr(make_node(Op::Const, c + 0.0, -1, {})) {}

Expr Expr::var(std::string_view name) { return var(intern(name)); }
Expr Expr::var(Symbol s) { return make_node(Op::Var, 0.0, s, {}); }

Op Expr::op() const { return node_->op; }
double Expr::value() const { return node_->value; }
Symbol Expr::symbol() const { return node_->sym; }
std::span<const Expr> Expr::args() const { return node_->args; }

// ---------------------------------------------------------------------------
// folding constructors

namespace {

bool is_neg_const(const Expr& e) { return e.is_constant() && e.value() < 0.0; }

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() + b.value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (b.op() == Op::Neg) return a - b.args()[0];
  if (is_neg_const(b)) return a - Expr(-b.value());
  std::vector<Expr> args;
  auto push = [&](const Expr& x) {
    if (x.op() == Op::Add) {
      args.insert(args.end(), x.args().begin(), x.args().end());
    } else {
      args.push_back(x);
    }
  };
  push(a);
  push(b);
  return make_node(Op::Add, 0.0, -1, std::move(args));
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() - b.value());
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  if (b.op() == Op::Neg) return a + b.args()[0];
  if (same_tree(a, b)) return Expr(0.0);
  return make_node(Op::Sub, 0.0, -1, {a, b});
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr(-a.value());
  if (a.op() == Op::Neg) return a.args()[0];
  if (a.op() == Op::Sub) return a.args()[1] - a.args()[0];
  return make_node(Op::Neg, 0.0, -1, {a});
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() * b.value());
  if (a.is_zero() || b.is_zero()) return Expr(0.0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_constant() && a.value() == -1.0) return -b;
  if (b.is_constant() && b.value() == -1.0) return -a;
  if (a.op() == Op::Neg) return -(a.args()[0] * b);
  if (b.op() == Op::Neg) return -(a * b.args()[0]);
  std::vector<Expr> args;
  auto push = [&](const Expr& x) {
    if (x.op() == Op::Mul) {
      args.insert(args.end(), x.args().begin(), x.args().end());
    } else {
      args.push_back(x);
    }
  };
  // Keep a leading numeric coefficient in front.
  if (b.is_constant()) {
    push(b);
    push(a);
  } else {
    push(a);
    push(b);
  }
  return make_node(Op::Mul, 0.0, -1, std::move(args));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.value() != 0.0) {
    return Expr(a.value() / b.value());
  }
  if (a.is_zero() && !b.is_zero()) return Expr(0.0);
  if (b.is_one()) return a;
  if (b.is_constant() && b.value() == -1.0) return -a;
  if (a.op() == Op::Neg) return -(a.args()[0] / b);
  return make_node(Op::Div, 0.0, -1, {a, b});
}

Expr pow(const Expr& base, double exponent) {
  if (exponent == 0.0) return Expr(1.0);
  if (exponent == 1.0) return base;
  if (base.is_constant()) {
    double v = std::pow(base.value(), exponent);
    if (std::isfinite(v)) return Expr(v);
  }
  if (base.op() == Op::Pow && exponent == std::round(exponent) &&
      base.value() == std::round(base.value())) {
    return pow(base.args()[0], base.value() * exponent);
  }
  return make_node(Op::Pow, exponent, -1, {base});
}

namespace {

Expr unary(Op op, const Expr& a, double (*fn)(double), bool (*ok)(double)) {
  if (a.is_constant() && ok(a.value())) {
    double v = fn(a.value());
    if (std::isfinite(v)) return Expr(v);
  }
  return make_node(op, 0.0, -1, {a});
}

bool always(double) { return true; }
bool positive(double x) { return x > 0.0; }
bool nonnegative(double x) { return x >= 0.0; }

double log_fn(double x) { return std::log(x); }
double sin_fn(double x) { return std::sin(x); }
double cos_fn(double x) { return std::cos(x); }
double sqrt_fn(double x) { return std::sqrt(x); }

}  // namespace

Expr exp(const Expr& a) {
  if (a.is_zero()) return Expr(1.0);
  if (a.op() == Op::Log) return a.args()[0];
  return make_node(Op::Exp, 0.0, -1, {a});
}
Expr log(const Expr& a) {
  if (a.op() == Op::Exp) return a.args()[0];
  return unary(Op::Log, a, log_fn, positive);
}
Expr sin(const Expr& a) { return unary(Op::Sin, a, sin_fn, always); }
Expr cos(const Expr& a) { return unary(Op::Cos, a, cos_fn, always); }
Expr sqrt(const Expr& a) { return unary(Op::Sqrt, a, sqrt_fn, nonnegative); }

// ---------------------------------------------------------------------------
// structure

int compare(const Expr& a, const Expr& b) {
  const Node* x = a.node_ptr();
  const Node* y = b.node_ptr();
  if (x == y) return 0;
  if (x->op != y->op) return x->op < y->op ? -1 : 1;
  switch (x->op) {
    case Op::Const:
    case Op::Pow:
      if (x->value != y->value) return x->value < y->value ? -1 : 1;
      break;
    case Op::Var:
      if (x->sym != y->sym) {
        return symbol_name(x->sym) < symbol_name(y->sym) ? -1 : 1;
      }
      return 0;
    default:
      break;
  }
  if (x->args.size() != y->args.size()) return x->args.size() < y->args.size() ? -1 : 1;
  for (std::size_t i = 0; i < x->args.size(); ++i) {
    if (int c = compare(x->args[i], y->args[i]); c != 0) return c;
  }
  return 0;
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& a : e.args()) n += node_count(a);
  return n;
}

namespace {

void collect_symbols(const Expr& e, std::vector<Symbol>& out) {
  if (e.op() == Op::Var) {
    if (std::find(out.begin(), out.end(), e.symbol()) == out.end()) out.push_back(e.symbol());
    return;
  }
  for (const auto& a : e.args()) collect_symbols(a, out);
}

}  // namespace

std::vector<Symbol> free_symbols(const Expr& e) {
  std::vector<Symbol> out;
  collect_symbols(e, out);
  return out;
}

bool depends_on(const Expr& e, Symbol s) {
  if (e.op() == Op::Var) return e.symbol() == s;
  for (const auto& a : e.args()) {
    if (depends_on(a, s)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// points and evaluation

Point::Point(std::span<const Symbol> symbols, std::span<const double> values) {
  if (symbols.size() != values.size()) {
    throw ExprError("point: symbol/value count mismatch");
  }
  for (std::size_t i = 0; i < symbols.size(); ++i) set(symbols[i], values[i]);
}

void Point::set(Symbol s, double v) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                             [](const auto& e, Symbol k) { return e.first < k; });
  if (it != entries_.end() && it->first == s) {
    it->second = v;
  } else {
    entries_.insert(it, {s, v});
  }
}

std::optional<double> Point::find(Symbol s) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                             [](const auto& e, Symbol k) { return e.first < k; });
  if (it != entries_.end() && it->first == s) return it->second;
  return std::nullopt;
}

double Point::at(Symbol s) const {
  if (auto v = find(s)) return *v;
  throw ExprError("point does not bind variable '" + symbol_name(s) + "'");
}

double evaluate(const Expr& e, const Point& p) {
  auto args = e.args();
  switch (e.op()) {
    case Op::Const:
      return e.value();
    case Op::Var:
      return p.at(e.symbol());
    case Op::Neg:
      return -evaluate(args[0], p);
    case Op::Add: {
      double s = 0.0;
      for (const auto& a : args) s += evaluate(a, p);
      return s;
    }
    case Op::Sub:
      return evaluate(args[0], p) - evaluate(args[1], p);
    case Op::Mul: {
      double s = 1.0;
      for (const auto& a : args) s *= evaluate(a, p);
      return s;
    }
    case Op::Div: {
      double den = evaluate(args[1], p);
      if (den == 0.0) throw DomainError("division by zero", e.str());
      return evaluate(args[0], p) / den;
    }
    case Op::Pow: {
      double b = evaluate(args[0], p);
      double k = e.value();
      if (b < 0.0 && k != std::round(k)) {
        throw DomainError("fractional power of negative base", e.str());
      }
      if (b == 0.0 && k < 0.0) throw DomainError("negative power of zero", e.str());
      if (k == 2.0) return b * b;
      if (k == -1.0) return 1.0 / b;
      return std::pow(b, k);
    }
    case Op::Exp:
      return std::exp(evaluate(args[0], p));
    case Op::Log: {
      double v = evaluate(args[0], p);
      if (!(v > 0.0)) throw DomainError("log of non-positive value", e.str());
      return std::log(v);
    }
    case Op::Sin:
      return std::sin(evaluate(args[0], p));
    case Op::Cos:
      return std::cos(evaluate(args[0], p));
    case Op::Sqrt: {
      double v = evaluate(args[0], p);
      if (v < 0.0) throw DomainError("sqrt of negative value", e.str());
      return std::sqrt(v);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// differentiation

Expr differentiate(const Expr& e, Symbol v) {
  auto args = e.args();
  switch (e.op()) {
    case Op::Const:
      return Expr(0.0);
    case Op::Var:
      return Expr(e.symbol() == v ? 1.0 : 0.0);
    case Op::Neg:
      return -differentiate(args[0], v);
    case Op::Add: {
      Expr s;
      for (const auto& a : args) s += differentiate(a, v);
      return s;
    }
    case Op::Sub:
      return differentiate(args[0], v) - differentiate(args[1], v);
    case Op::Mul: {
      Expr s;
      for (std::size_t i = 0; i < args.size(); ++i) {
        Expr d = differentiate(args[i], v);
        if (d.is_zero()) continue;
        Expr term = d;
        for (std::size_t j = 0; j < args.size(); ++j) {
          if (j != i) term = term * args[j];
        }
        s += term;
      }
      return s;
    }
    case Op::Div: {
      const Expr& a = args[0];
      const Expr& b = args[1];
      Expr da = differentiate(a, v);
      Expr db = differentiate(b, v);
      Expr out = da / b;
      if (!db.is_zero()) out -= a * db / pow(b, 2.0);
      return out;
    }
    case Op::Pow: {
      Expr d = differentiate(args[0], v);
      if (d.is_zero()) return Expr(0.0);
      double k = e.value();
      return Expr(k) * pow(args[0], k - 1.0) * d;
    }
    case Op::Exp: {
      Expr d = differentiate(args[0], v);
      if (d.is_zero()) return Expr(0.0);
      return d * e;
    }
    case Op::Log:
      return differentiate(args[0], v) / args[0];
    case Op::Sin: {
      Expr d = differentiate(args[0], v);
      if (d.is_zero()) return Expr(0.0);
      return d * cos(args[0]);
    }
    case Op::Cos: {
      Expr d = differentiate(args[0], v);
      if (d.is_zero()) return Expr(0.0);
      return -(d * sin(args[0]));
    }
    case Op::Sqrt: {
      Expr d = differentiate(args[0], v);
      if (d.is_zero()) return Expr(0.0);
      return d / (Expr(2.0) * e);
    }
  }
  return Expr(0.0);
}

Expr differentiate(const Expr& e, std::string_view v) { return differentiate(e, intern(v)); }

// ---------------------------------------------------------------------------
// substitution

Expr substitute(const Expr& e, const std::map<Symbol, Expr>& repl) {
  if (e.op() == Op::Var) {
    if (auto it = repl.find(e.symbol()); it != repl.end()) return it->second;
    return e;
  }
  if (e.args().empty()) return e;
  std::vector<Expr> args;
  args.reserve(e.args().size());
  bool changed = false;
  for (const auto& a : e.args()) {
    args.push_back(substitute(a, repl));
    changed = changed || !same_tree(args.back(), a);
  }
  if (!changed) return e;
  switch (e.op()) {
    case Op::Neg:
      return -args[0];
    case Op::Add: {
      Expr s = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) s += args[i];
      return s;
    }
    case Op::Sub:
      return args[0] - args[1];
    case Op::Mul: {
      Expr s = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) s *= args[i];
      return s;
    }
    case Op::Div:
      return args[0] / args[1];
    case Op::Pow:
      return pow(args[0], e.value());
    case Op::Exp:
      return exp(args[0]);
    case Op::Log:
      return log(args[0]);
    case Op::Sin:
      return sin(args[0]);
    case Op::Cos:
      return cos(args[0]);
    case Op::Sqrt:
      return sqrt(args[0]);
    default:
      return make_node(e.op(), e.value(), e.symbol(), std::move(args));
  }
}

// ---------------------------------------------------------------------------
// printing

namespace {

// Binding strength of the printed form.
int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    case Op::Const:
      return e.value() < 0.0 ? 3 : 5;
    default:
      return 5;
  }
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest representation that still round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    char b2[40];
    std::snprintf(b2, sizeof b2, "%.*g", prec, v);
    if (std::strtod(b2, nullptr) == v) return b2;
  }
  return buf;
}

void print(const Expr& e, std::ostringstream& os);

void print_wrapped(const Expr& e, int min_prec, std::ostringstream& os) {
  if (precedence(e) < min_prec) {
    os << '(';
    print(e, os);
    os << ')';
  } else {
    print(e, os);
  }
}

void print(const Expr& e, std::ostringstream& os) {
  auto args = e.args();
  switch (e.op()) {
    case Op::Const:
      os << number(e.value());
      return;
    case Op::Var:
      os << symbol_name(e.symbol());
      return;
    case Op::Neg:
      os << '-';
      print_wrapped(args[0], 3, os);
      return;
    case Op::Add:
      for (std::size_t i = 0; i < args.size(); ++i) {
        const Expr& a = args[i];
        if (i == 0) {
          print_wrapped(a, 1, os);
        } else if (a.op() == Op::Neg) {
          os << " - ";
          print_wrapped(a.args()[0], 2, os);
        } else if (is_neg_const(a)) {
          os << " - " << number(-a.value());
        } else {
          os << " + ";
          print_wrapped(a, 1, os);
        }
      }
      return;
    case Op::Sub:
      print_wrapped(args[0], 1, os);
      os << " - ";
      print_wrapped(args[1], 2, os);
      return;
    case Op::Mul:
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i > 0) os << '*';
        // A product continues with unary minus fine, but keep the first
        // factor unambiguous when it is itself negative.
        print_wrapped(args[i], i == 0 ? 2 : 3, os);
      }
      return;
    case Op::Div:
      print_wrapped(args[0], 2, os);
      os << '/';
      print_wrapped(args[1], 3, os);
      return;
    case Op::Pow:
      print_wrapped(args[0], 5, os);
      os << '^';
      if (e.value() < 0.0) {
        os << '(' << number(e.value()) << ')';
      } else {
        os << number(e.value());
      }
      return;
    case Op::Exp:
    case Op::Log:
    case Op::Sin:
    case Op::Cos:
    case Op::Sqrt: {
      static constexpr const char* names[] = {"exp", "log", "sin", "cos", "sqrt"};
      os << names[static_cast<int>(e.op()) - static_cast<int>(Op::Exp)] << '(';
      print(args[0], os);
      os << ')';
      return;
    }
  }
}

}  // namespace

std::string Expr::str() const {
  std::ostringstream os;
  print(*this, os);
  return os.str();
}

}  // namespace dgeo
