#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "dgeo/expr.hpp"

namespace dgeo {

ParseScope ParseScope::any() {
  ParseScope s;
  s.open_ = true;
  return s;
}

ParseScope::ParseScope(std::span<const std::string> variables)
    : vars_(variables.begin(), variables.end()) {}

ParseScope& ParseScope::allow(std::string_view name) {
  vars_.emplace_back(name);
  return *this;
}

ParseScope& ParseScope::constant(std::string_view name, double value) {
  constants_.emplace_back(std::string(name), value);
  return *this;
}

bool ParseScope::allows(std::string_view name) const {
  return open_ || std::find(vars_.begin(), vars_.end(), name) != vars_.end();
}

std::optional<double> ParseScope::constant_value(std::string_view name) const {
  for (const auto& [n, v] : constants_) {
    if (n == name) return v;
  }
  return std::nullopt;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, const ParseScope& scope) : s_(text), scope_(scope) {}

  Expr run() {
    Expr e = sum();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, i_); }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (eat('+')) {
        e = e + product();
      } else if (eat('-')) {
        e = e - product();
      } else {
        return e;
      }
    }
  }

  Expr product() {
    Expr e = unary();
    for (;;) {
      if (eat('*')) {
        e = e * unary();
      } else if (eat('/')) {
        e = e / unary();
      } else {
        return e;
      }
    }
  }

  // Unary minus binds looser than '^': -x^2 is -(x^2).
  Expr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    skip();
    std::size_t at = i_;
    if (!eat('^')) return base;
    Expr ex = unary();  // right-associative, admits x^-2
    if (!ex.is_constant()) {
      i_ = at;
      fail("exponent must be a constant");
    }
    return pow(base, ex.value());
  }

  Expr primary() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      Expr e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Expr number() {
    std::size_t start = i_;
    auto digits = [&] {
      std::size_t n = 0;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_, ++n;
      return n;
    };
    std::size_t n = digits();
    if (i_ < s_.size() && s_[i_] == '.') {
      ++i_;
      n += digits();
    }
    if (n == 0) {
      i_ = start;
      fail("malformed number");
    }
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
      if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
        i_ = j;
        digits();
      }
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + start, s_.data() + i_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + i_) {
      i_ = start;
      fail("malformed number");
    }
    return Expr(v);
  }

  Expr identifier() {
    std::size_t start = i_;
    while (i_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
      ++i_;
    }
    std::string_view name = s_.substr(start, i_ - start);
    static constexpr std::pair<std::string_view, Expr (*)(const Expr&)> fns[] = {
        {"exp", exp}, {"log", log}, {"sin", sin}, {"cos", cos}, {"sqrt", sqrt}};
    for (const auto& [fname, fn] : fns) {
      if (name != fname) continue;
      if (!eat('(')) fail("expected '(' after " + std::string(fname));
      Expr arg = sum();
      if (!eat(')')) fail("expected ')'");
      return fn(arg);
    }
    if (auto c = scope_.constant_value(name)) return Expr(*c);
    if (!scope_.allows(name)) throw UnknownIdentifier(std::string(name), start);
    return Expr::var(name);
  }

  std::string_view s_;
  const ParseScope& scope_;
  std::size_t i_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const ParseScope& scope) { return Parser(text, scope).run(); }

}  // namespace dgeo
