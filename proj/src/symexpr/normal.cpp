#include "nyz/symexpr.hpp"
#include "poly.hpp"

#include <algorithm>
#include <unordered_map>

namespace nyz::sym {

using namespace detail;

namespace {

RatNF norm_rec(const Expr& e, std::unordered_map<const Node*, RatNF>& memo);

RatP intern_rat(RatNF r) { return std::make_shared<const RatNF>(std::move(r)); }

RatNF norm_pow(const Expr& e, std::unordered_map<const Node*, RatNF>& memo) {
  RatNF b = norm_rec(e.base(), memo);
  const Q& x = e.expo();
  using boost::multiprecision::cpp_int;
  cpp_int p = numerator(x), q = denominator(x);
  cpp_int whole = p / q, rem = p % q;  // truncates toward zero
  if (rem < 0) {  // keep fractional part in (0,1)
    rem += q;
    whole -= 1;
  }
  if (b.is_zero()) {
    if (x > 0) return rv_zero();
    throw std::domain_error("pow: zero base with non-positive exponent");
  }
  RatNF out = rv_int_pow(b, whole.convert_to<long long>());
  if (rem != 0) {
    int id = Registry::inst().intern_fracpow(intern_rat(b), Q(rem) / Q(q));
    out = rv_mul(out, rv_atom(id));
  }
  return out;
}

RatNF norm_rec(const Expr& e, std::unordered_map<const Node*, RatNF>& memo) {
  auto it = memo.find(e.raw());
  if (it != memo.end()) return it->second;
  RatNF r;
  switch (e.kind()) {
    case Node::Kind::Num:
      r = rv_const(e.value());
      break;
    case Node::Kind::Var:
      r = rv_atom(Registry::inst().intern_var(e.var()));
      break;
    case Node::Kind::Add: {
      r = rv_zero();
      for (auto& k : e.kids()) r = rv_add(r, norm_rec(k, memo));
      break;
    }
    case Node::Kind::Mul: {
      r = rv_const(Q(1));
      for (auto& k : e.kids()) r = rv_mul(r, norm_rec(k, memo));
      break;
    }
    case Node::Kind::Pow:
      r = norm_pow(e, memo);
      break;
    case Node::Kind::Fn: {
      // Re-apply constant folds after the argument has normalized.
      Expr a2 = rat_to_expr(norm_rec(e.arg(), memo));
      Expr f2 = fn(e.fn(), a2);
      if (f2.kind() != Node::Kind::Fn) {
        r = norm_rec(f2, memo);
      } else {
        std::unordered_map<const Node*, RatNF> m2;
        r = rv_atom(Registry::inst().intern_fn(
            e.fn(), intern_rat(norm_rec(a2, m2))));
      }
      break;
    }
    case Node::Kind::Opq: {
      RatNF a = norm_rec(e.arg(), memo);
      r = rv_atom(Registry::inst().intern_opq(e.opq_name(), e.opq_order(),
                                              intern_rat(std::move(a))));
      break;
    }
  }
  memo.emplace(e.raw(), r);
  return r;
}

Expr atom_to_expr(int id, int exp) {
  const AtomData& a = Registry::inst().at(id);
  Expr base;
  switch (a.kind) {
    case AtomData::Kind::Var:
      base = evar(a.var);
      break;
    case AtomData::Kind::Fn:
      base = fn(a.fn, rat_to_expr(*a.arg));
      break;
    case AtomData::Kind::Opq:
      base = opq(a.opq_name, a.opq_order, rat_to_expr(*a.arg));
      break;
    case AtomData::Kind::FracPow:
      return pow(rat_to_expr(*a.arg), a.frac * exp);
  }
  return exp == 1 ? base : pow(base, Q(exp));
}

Expr poly_to_expr(const Poly& p) {
  if (p.is_zero()) return num(0);
  // Stable external order: total degree descending, then printed key.
  struct Row {
    int deg;
    std::string key;
    Expr e;
  };
  Registry& reg = Registry::inst();
  std::vector<Row> rows;
  rows.reserve(p.t.size());
  for (auto& t : p.t) {
    // Atom factors ordered by printed form.
    std::vector<std::pair<std::string, Expr>> factors;
    for (auto& [a, e] : t.m.f)
      factors.emplace_back(reg.at(a).pstr + "^" + std::to_string(e),
                           atom_to_expr(a, e));
    std::sort(factors.begin(), factors.end(),
              [](auto& x, auto& y) { return x.first < y.first; });
    ExprList ks;
    ks.push_back(num(t.c));
    std::string key;
    for (auto& [k, ex] : factors) {
      key += k + "*";
      ks.push_back(ex);
    }
    rows.push_back({t.m.deg(), std::move(key), mul(std::move(ks))});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.deg != b.deg) return a.deg > b.deg;
    return a.key < b.key;
  });
  ExprList terms;
  for (auto& r : rows) terms.push_back(std::move(r.e));
  return add(std::move(terms));
}

}  // namespace

namespace detail {

RatNF norm_rat(const Expr& e) {
  std::unordered_map<const Node*, RatNF> memo;
  return norm_rec(e, memo);
}

Expr rat_to_expr(const RatNF& r) {
  Expr n = poly_to_expr(r.num);
  if (r.den.is_one()) return n;
  return mul({n, pow(poly_to_expr(r.den), Q(-1))});
}

}  // namespace detail

Expr normalize(const Expr& e) { return rat_to_expr(norm_rat(e)); }

bool equal_normalized(const Expr& a, const Expr& b) {
  RatNF ra = norm_rat(a), rb = norm_rat(b);
  if (rat_equal(ra, rb)) return true;
  // Oversized quotients may skip gcd cancellation and then disagree
  // structurally; the cross-multiplied difference is exact regardless.
  return rv_add(ra, rv_neg(rb)).num.is_zero();
}

// --- differentiation -----------------------------------------------------------

Expr diff(const Expr& e, const VarId& v) {
  switch (e.kind()) {
    case Node::Kind::Num:
      return num(0);
    case Node::Kind::Var:
      return num(e.var() == v ? 1 : 0);
    case Node::Kind::Add: {
      ExprList out;
      for (auto& k : e.kids()) out.push_back(diff(k, v));
      return add(std::move(out));
    }
    case Node::Kind::Mul: {
      ExprList out;
      for (std::size_t i = 0; i < e.kids().size(); ++i) {
        ExprList fac;
        for (std::size_t j = 0; j < e.kids().size(); ++j)
          fac.push_back(i == j ? diff(e.kids()[j], v) : e.kids()[j]);
        out.push_back(mul(std::move(fac)));
      }
      return add(std::move(out));
    }
    case Node::Kind::Pow: {
      // d(b^r) = r b^(r-1) db
      return mul({num(e.expo()), pow(e.base(), e.expo() - 1),
                  diff(e.base(), v)});
    }
    case Node::Kind::Fn: {
      const Expr& u = e.arg();
      Expr du = diff(u, v);
      if (du.is_zero_const()) return num(0);
      Expr outer;
      switch (e.fn()) {
        case Fun::Exp: outer = e; break;
        case Fun::Ln: outer = pow(u, Q(-1)); break;
        case Fun::Abs: outer = fn(Fun::Sign, u); break;
        case Fun::Sign: return num(0);
        case Fun::Sin: outer = fn(Fun::Cos, u); break;
        case Fun::Cos: outer = -fn(Fun::Sin, u); break;
        case Fun::Arctan: outer = pow(num(1) + u * u, Q(-1)); break;
        case Fun::LambertW0:
        case Fun::LambertWm1:
          // W' = W / (u (1 + W))
          outer = e * pow(u * (num(1) + e), Q(-1));
          break;
      }
      return mul({outer, du});
    }
    case Node::Kind::Opq: {
      Expr du = diff(e.arg(), v);
      if (du.is_zero_const()) return num(0);
      return mul({opq(e.opq_name(), e.opq_order() + 1, e.arg()), du});
    }
  }
  return num(0);
}

// --- substitution ---------------------------------------------------------------

namespace {

Expr subst_rec(const Expr& e, const std::map<VarId, Expr>& b) {
  switch (e.kind()) {
    case Node::Kind::Num:
      return e;
    case Node::Kind::Var: {
      auto it = b.find(e.var());
      return it == b.end() ? e : it->second;
    }
    case Node::Kind::Add:
    case Node::Kind::Mul: {
      ExprList out;
      for (auto& k : e.kids()) out.push_back(subst_rec(k, b));
      return e.kind() == Node::Kind::Add ? add(std::move(out))
                                         : mul(std::move(out));
    }
    case Node::Kind::Pow:
      return pow(subst_rec(e.base(), b), e.expo());
    case Node::Kind::Fn:
      return fn(e.fn(), subst_rec(e.arg(), b));
    case Node::Kind::Opq:
      return opq(e.opq_name(), e.opq_order(), subst_rec(e.arg(), b));
  }
  return e;
}

}  // namespace

Expr substitute(const Expr& e, const std::map<VarId, Expr>& bindings) {
  return normalize(subst_rec(e, bindings));
}

Expr substitute_opaque(const Expr& e, const std::string& name,
                       const VarId& formal, const Expr& body) {
  // Derivatives of the replacement body, computed on demand.
  std::vector<Expr> dbody{body};
  std::function<Expr(const Expr&)> rec = [&](const Expr& x) -> Expr {
    switch (x.kind()) {
      case Node::Kind::Num:
      case Node::Kind::Var:
        return x;
      case Node::Kind::Add:
      case Node::Kind::Mul: {
        ExprList out;
        for (auto& k : x.kids()) out.push_back(rec(k));
        return x.kind() == Node::Kind::Add ? add(std::move(out))
                                           : mul(std::move(out));
      }
      case Node::Kind::Pow:
        return pow(rec(x.base()), x.expo());
      case Node::Kind::Fn:
        return fn(x.fn(), rec(x.arg()));
      case Node::Kind::Opq: {
        Expr a = rec(x.arg());
        if (x.opq_name() != name)
          return opq(x.opq_name(), x.opq_order(), a);
        while (static_cast<int>(dbody.size()) <= x.opq_order())
          dbody.push_back(diff(dbody.back(), formal));
        return subst_rec(dbody[x.opq_order()], {{formal, a}});
      }
    }
    return x;
  };
  return normalize(rec(e));
}

namespace {
void collect_vars(const Expr& e, std::set<VarId>& out) {
  if (e.kind() == Node::Kind::Var) {
    out.insert(e.var());
    return;
  }
  for (const Expr& k : e.kids()) collect_vars(k, out);
}
}  // namespace

std::set<VarId> variables(const Expr& e) {
  std::set<VarId> out;
  collect_vars(e, out);
  return out;
}

}  // namespace nyz::sym
