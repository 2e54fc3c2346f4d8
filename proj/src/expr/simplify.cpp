// Normal form: a sum of terms, each term a coefficient times a sorted list of
// (base, exponent) factors times at most one exp(sum).

#include <algorithm>
#include <cmath>
#include <map>

#include "dgeo/expr.hpp"

namespace dgeo {

namespace {

constexpr std::size_t kExpandCap = 128;
constexpr int kMaxIntegerExpand = 8;

struct Sum;
using SumPtr = std::shared_ptr<const Sum>;
using Factors = std::vector<std::pair<Expr, double>>;

struct Term {
  double coef = 1.0;
  Factors factors;  // sorted by (base, exponent)
  SumPtr ex;        // argument of exp, null when absent
};

struct Sum {
  std::map<Expr, Term, ExprLess> terms;  // keyed by the coefficient-free monomial
};

bool is_int(double k) { return k == std::round(k); }

bool nearly(double a, double b) {
  return std::abs(a - b) <= 1e-13 * std::max(std::abs(a), std::abs(b));
}

class Simplifier {
 public:
  explicit Simplifier(const Assumptions& a) : assume_(a) {}

  Expr run(const Expr& e) { return to_expr(to_sum(e)); }

  Sum to_sum(const Expr& e) {
    auto args = e.args();
    switch (e.op()) {
      case Op::Const:
        return constant(e.value());
      case Op::Var:
        return atom(e);
      case Op::Neg:
        return scale(to_sum(args[0]), -1.0);
      case Op::Add: {
        Sum s;
        for (const auto& a : args) s = add(s, to_sum(a));
        return s;
      }
      case Op::Sub:
        return add(to_sum(args[0]), to_sum(args[1]), -1.0);
      case Op::Mul: {
        Sum s = constant(1.0);
        for (const auto& a : args) s = mul(s, to_sum(a));
        return s;
      }
      case Op::Div:
        return mul(to_sum(args[0]), power(to_sum(args[1]), -1.0));
      case Op::Pow:
        return power(to_sum(args[0]), e.value());
      case Op::Sqrt:
        return power(to_sum(args[0]), 0.5);
      case Op::Exp:
        return expo(to_sum(args[0]));
      case Op::Log: {
        Sum s = to_sum(args[0]);
        if (s.terms.size() == 1) {
          const Term& t = s.terms.begin()->second;
          if (t.coef == 1.0 && t.factors.empty() && t.ex) return *t.ex;
        }
        return atom(log(to_expr(s)));
      }
      case Op::Sin:
        return atom(sin(to_expr(to_sum(args[0]))));
      case Op::Cos:
        return atom(cos(to_expr(to_sum(args[0]))));
    }
    return {};
  }

  Expr to_expr(const Sum& s0) {
    Sum s = trig_pass(s0);
    Expr out;
    bool first = true;
    for (const auto& [key, t] : s.terms) {
      Expr mono = monomial_value(t);
      if (first) {
        out = t.coef == 1.0 ? mono : Expr(t.coef) * mono;
        first = false;
      } else if (t.coef < 0.0) {
        out = out - (t.coef == -1.0 ? mono : Expr(-t.coef) * mono);
      } else {
        out = out + (t.coef == 1.0 ? mono : Expr(t.coef) * mono);
      }
    }
    return out;
  }

 private:
  // --- construction -------------------------------------------------------

  Sum constant(double c) {
    Sum s;
    if (c != 0.0) insert(s, Term{c, {}, nullptr});
    return s;
  }

  Sum atom(const Expr& base) {
    if (base.is_constant()) return constant(base.value());
    Sum s;
    insert(s, Term{1.0, {{base, 1.0}}, nullptr});
    return s;
  }

  Sum expo(const Sum& arg) {
    if (arg.terms.empty()) return constant(1.0);
    Sum s;
    insert(s, Term{1.0, {}, std::make_shared<const Sum>(arg)});
    return s;
  }

  // --- keys -----------------------------------------------------------------

  Expr key(const Term& t) {
    std::vector<Expr> parts;
    for (const auto& [b, k] : t.factors) parts.push_back(make_node(Op::Pow, k, -1, {b}));
    if (t.ex) parts.push_back(make_node(Op::Exp, 0.0, -1, {to_expr(*t.ex)}));
    if (parts.empty()) return Expr(1.0);
    if (parts.size() == 1) return parts[0];
    return make_node(Op::Mul, 0.0, -1, std::move(parts));
  }

  Expr monomial_value(const Term& t) {
    Expr m(1.0);
    for (const auto& [b, k] : t.factors) m = m * pow(b, k);
    if (t.ex) m = m * exp(to_expr(*t.ex));
    return m;
  }

  void insert(Sum& s, Term t) {
    if (t.coef == 0.0) return;
    Expr k = key(t);
    auto it = s.terms.find(k);
    if (it == s.terms.end()) {
      s.terms.emplace(std::move(k), std::move(t));
      return;
    }
    double c = it->second.coef + t.coef;
    if (c == 0.0 || std::abs(c) <= 1e-14 * (std::abs(it->second.coef) + std::abs(t.coef))) {
      s.terms.erase(it);
    } else {
      it->second.coef = c;
    }
  }

  // --- arithmetic -----------------------------------------------------------

  Sum add(const Sum& a, const Sum& b, double scale_b = 1.0) {
    Sum s = a;
    for (const auto& [k, t] : b.terms) {
      Term u = t;
      u.coef *= scale_b;
      insert(s, std::move(u));
    }
    return s;
  }

  Sum scale(const Sum& a, double c) {
    if (c == 0.0) return {};
    Sum s = a;
    for (auto& [k, t] : s.terms) t.coef *= c;
    return s;
  }

  Factors merge(const Factors& a, const Factors& b) {
    Factors all = a;
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
      int c = compare(x.first, y.first);
      return c != 0 ? c < 0 : x.second < y.second;
    });
    Factors out;
    for (std::size_t i = 0; i < all.size();) {
      std::size_t j = i;
      double pos = 0.0;
      double neg = 0.0;
      while (j < all.size() && same_tree(all[j].first, all[i].first)) {
        (all[j].second > 0.0 ? pos : neg) += all[j].second;
        ++j;
      }
      const Expr& base = all[i].first;
      if (assume_.is_nonzero(base)) {
        if (pos + neg != 0.0) out.emplace_back(base, pos + neg);
      } else {
        if (neg != 0.0) out.emplace_back(base, neg);
        if (pos != 0.0) out.emplace_back(base, pos);
      }
      i = j;
    }
    return out;
  }

  Term mul_terms(const Term& a, const Term& b) {
    Term t;
    t.coef = a.coef * b.coef;
    t.factors = merge(a.factors, b.factors);
    if (a.ex && b.ex) {
      Sum s = add(*a.ex, *b.ex);
      if (!s.terms.empty()) t.ex = std::make_shared<const Sum>(std::move(s));
    } else {
      t.ex = a.ex ? a.ex : b.ex;
    }
    return t;
  }

  Sum mul(const Sum& a, const Sum& b) {
    if (a.terms.empty() || b.terms.empty()) return {};
    if (a.terms.size() > 1 && b.terms.size() > 1 &&
        a.terms.size() * b.terms.size() > kExpandCap) {
      Sum s;
      insert(s, Term{1.0, merge({{to_expr(a), 1.0}}, {{to_expr(b), 1.0}}), nullptr});
      return s;
    }
    Sum s;
    for (const auto& [ka, ta] : a.terms) {
      for (const auto& [kb, tb] : b.terms) insert(s, mul_terms(ta, tb));
    }
    return s;
  }

  Sum opaque_power(const Sum& a, double k) {
    Sum s;
    insert(s, Term{1.0, {{to_expr(a), k}}, nullptr});
    return s;
  }

  Sum power(const Sum& a, double k) {
    if (k == 0.0) return constant(1.0);
    if (k == 1.0) return a;
    if (a.terms.empty()) return k > 0.0 ? Sum{} : opaque_power(a, k);
    if (a.terms.size() == 1) {
      const Term& t = a.terms.begin()->second;
      bool ok = is_int(k);
      if (!ok) {
        // (c * b * exp(u))^k with c > 0 and b to the first power only.
        ok = t.coef > 0.0 && (t.factors.empty() ||
                              (t.factors.size() == 1 && t.factors[0].second == 1.0));
      }
      double c = std::pow(t.coef, k);
      if (ok && std::isfinite(c)) {
        Term r;
        r.coef = c;
        for (const auto& [b, e] : t.factors) r.factors.emplace_back(b, e * k);
        if (t.ex) r.ex = std::make_shared<const Sum>(scale(*t.ex, k));
        Sum s;
        insert(s, std::move(r));
        return s;
      }
      return opaque_power(a, k);
    }
    if (is_int(k) && k > 0.0 && k <= kMaxIntegerExpand) {
      Sum s = a;
      for (int i = 1; i < static_cast<int>(k); ++i) s = mul(s, a);
      return s;
    }
    return opaque_power(a, k);
  }

  // --- sin^2 + cos^2 --------------------------------------------------------

  static Factors with_exponent(const Factors& fs, const Expr& base, double delta) {
    Factors out;
    bool done = false;
    for (const auto& [b, e] : fs) {
      if (!done && same_tree(b, base) && e > 0.0) {
        done = true;
        if (e + delta != 0.0) out.emplace_back(b, e + delta);
      } else {
        out.emplace_back(b, e);
      }
    }
    if (!done && delta != 0.0) out.emplace_back(base, delta);
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
      int c = compare(x.first, y.first);
      return c != 0 ? c < 0 : x.second < y.second;
    });
    return out;
  }

  Sum trig_pass(const Sum& s0) {
    Sum s = s0;
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto it = s.terms.begin(); it != s.terms.end() && !changed; ++it) {
        const Term& t = it->second;
        for (const auto& [b, e] : t.factors) {
          if (b.op() != Op::Sin || e < 2.0 || !is_int(e)) continue;
          Expr c = cos(b.args()[0]);
          Term partner{t.coef, with_exponent(with_exponent(t.factors, b, -2.0), c, 2.0), t.ex};
          auto pit = s.terms.find(key(partner));
          if (pit == s.terms.end() || !nearly(pit->second.coef, t.coef)) continue;
          Term merged{t.coef, with_exponent(t.factors, b, -2.0), t.ex};
          Expr k1 = it->first;
          Expr k2 = pit->first;
          s.terms.erase(k1);
          s.terms.erase(k2);
          insert(s, std::move(merged));
          changed = true;
          break;
        }
      }
    }
    return s;
  }

  const Assumptions& assume_;
};

}  // namespace

void Assumptions::add_nonzero(const Expr& e) {
  Expr s = simplify(e);
  nonzero_.push_back(s);
  auto note_base = [&](const Expr& f) {
    nonzero_.push_back(f.op() == Op::Pow ? f.args()[0] : f);
  };
  if (s.op() == Op::Mul) {
    for (const auto& f : s.args()) note_base(f);
  } else {
    note_base(s);
  }
}

bool Assumptions::is_nonzero(const Expr& e) const {
  if (e.is_constant()) return e.value() != 0.0;
  if (e.op() == Op::Exp) return true;
  for (const auto& n : nonzero_) {
    if (same_tree(n, e)) return true;
  }
  return false;
}

Expr simplify(const Expr& e, const Assumptions& assume) { return Simplifier(assume).run(e); }

}  // namespace dgeo
