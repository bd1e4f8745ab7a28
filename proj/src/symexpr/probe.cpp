#include "nyz/numerics.hpp"
#include "nyz/symexpr.hpp"
#include "poly.hpp"

#include <cmath>
#include <set>
#include <unordered_map>

namespace nyz::sym {

using namespace detail;

// --- numeric evaluation of expression trees -------------------------------------

namespace {

double ipow(double b, long long n) {
  if (n < 0) {
    if (b == 0.0) throw EvalError("division by zero");
    return 1.0 / ipow(b, -n);
  }
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

double eval_pow(double b, const Q& e) {
  if (denominator(e) == 1) return ipow(b, e.convert_to<long long>());
  if (b < 0) throw EvalError("fractional power of a negative base");
  if (b == 0 && e < 0) throw EvalError("division by zero");
  return std::pow(b, to_double(e));
}

double eval_fun(Fun f, double x) {
  switch (f) {
    case Fun::Exp: return std::exp(x);
    case Fun::Ln:
      if (x <= 0) throw EvalError("ln of a non-positive value");
      return std::log(x);
    case Fun::Abs: return std::abs(x);
    case Fun::Sign: return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
    case Fun::Sin: return std::sin(x);
    case Fun::Cos: return std::cos(x);
    case Fun::Arctan: return std::atan(x);
    case Fun::LambertW0:
    case Fun::LambertWm1:
      try {
        return num::lambert_w(x, f == Fun::LambertW0 ? 0 : -1);
      } catch (const num::domain_error& e) {
        throw EvalError(e.what());
      }
  }
  throw EvalError("unknown function");
}

}  // namespace

double eval(const Expr& e, const EvalContext& ctx) {
  switch (e.kind()) {
    case Node::Kind::Num:
      return to_double(e.value());
    case Node::Kind::Var: {
      auto it = ctx.vars.find(e.var());
      if (it == ctx.vars.end())
        throw EvalError("unbound variable '" + e.var().str() + "'");
      return it->second;
    }
    case Node::Kind::Add: {
      double s = 0;
      for (auto& k : e.kids()) s += eval(k, ctx);
      return s;
    }
    case Node::Kind::Mul: {
      double p = 1;
      for (auto& k : e.kids()) p *= eval(k, ctx);
      return p;
    }
    case Node::Kind::Pow:
      return eval_pow(eval(e.base(), ctx), e.expo());
    case Node::Kind::Fn:
      return eval_fun(e.fn(), eval(e.arg(), ctx));
    case Node::Kind::Opq: {
      auto it = ctx.opaques.find(e.opq_name());
      if (it == ctx.opaques.end())
        throw EvalError("unbound opaque function '" + e.opq_name() + "'");
      return it->second(e.opq_order(), eval(e.arg(), ctx));
    }
  }
  throw EvalError("unknown node");
}

OpaqueFn poly_instance(std::vector<double> coeffs) {
  return [coeffs = std::move(coeffs)](int order, double x) -> double {
    double s = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
      if (static_cast<int>(i) < order) break;
      double f = 1;
      for (int k = 0; k < order; ++k) f *= static_cast<double>(i - k);
      s = s * x + coeffs[i] * f * 1;  // Horner over descending powers
    }
    return s;
  };
}

// --- probing ---------------------------------------------------------------------

namespace {

struct PointFail {};  // domain error / pole at the sampled point; resample

double urand(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}
double usym(std::mt19937_64& g) { return 4.0 * urand(g) - 2.0; }

struct Probe {
  std::map<VarId, double> vars;
  std::map<std::string, std::vector<double>> opaques;
  std::unordered_map<int, double> atom_cache;

  double atom_val(int id) {
    auto it = atom_cache.find(id);
    if (it != atom_cache.end()) return it->second;
    const AtomData& a = Registry::inst().at(id);
    double v = 0;
    switch (a.kind) {
      case AtomData::Kind::Var:
        v = vars.at(a.var);
        break;
      case AtomData::Kind::Fn: {
        double x = rat_val(*a.arg);
        try {
          v = eval_fun(a.fn, x);
        } catch (const EvalError&) {
          throw PointFail{};
        }
        break;
      }
      case AtomData::Kind::Opq: {
        const auto& c = opaques.at(a.opq_name);
        double x = rat_val(*a.arg);
        double s = 0;
        for (std::size_t i = c.size(); i-- > 0;) {
          if (static_cast<int>(i) < a.opq_order) break;
          double f = 1;
          for (int k = 0; k < a.opq_order; ++k)
            f *= static_cast<double>(i - k);
          s = s * x + c[i] * f;
        }
        v = s;
        break;
      }
      case AtomData::Kind::FracPow: {
        double b = rat_val(*a.arg);
        if (b < 0) throw PointFail{};
        v = std::pow(b, to_double(a.frac));
        break;
      }
    }
    atom_cache.emplace(id, v);
    return v;
  }

  double poly_val(const Poly& p, double* abs_sum) {
    double s = 0, as = 0;
    for (auto& t : p.t) {
      double m = to_double(t.c);
      for (auto& [a, e] : t.m.f) m *= ipow(atom_val(a), e);
      if (!std::isfinite(m)) throw PointFail{};
      s += m;
      as += std::abs(m);
    }
    if (abs_sum) *abs_sum = as;
    return s;
  }

  double rat_val(const RatNF& r) {
    double dabs = 0;
    double d = poly_val(r.den, &dabs);
    if (std::abs(d) <= 1e-12 * std::max(1.0, dabs)) throw PointFail{};
    return poly_val(r.num, nullptr) / d;
  }

  /// |num/den| tested against eps * max(1, sum|num terms|/|den|).
  bool small_at(const RatNF& r, double eps) {
    double dabs = 0;
    double d = poly_val(r.den, &dabs);
    if (std::abs(d) <= 1e-12 * std::max(1.0, dabs)) throw PointFail{};
    double nabs = 0;
    double n = poly_val(r.num, &nabs);
    return std::abs(n) <= eps * std::max(std::abs(d), nabs);
  }
};

void collect(const RatNF& r, std::set<VarId>& vars, std::set<std::string>& ops,
             std::set<int>& seen, bool& trans) {
  Registry& reg = Registry::inst();
  auto walk_poly = [&](const Poly& p) {
    for (auto& t : p.t)
      for (auto& [id, e] : t.m.f) {
        if (!seen.insert(id).second) continue;
        const AtomData& a = reg.at(id);
        switch (a.kind) {
          case AtomData::Kind::Var:
            vars.insert(a.var);
            break;
          case AtomData::Kind::Opq:
            ops.insert(a.opq_name);
            trans = true;
            collect(*a.arg, vars, ops, seen, trans);
            break;
          default:
            trans = true;
            collect(*a.arg, vars, ops, seen, trans);
            break;
        }
      }
  };
  walk_poly(r.num);
  walk_poly(r.den);
}

Verdict probe_rat(const RatNF& r, const ProbeOptions& opt,
                  const VarId* circle_c, const VarId* circle_s) {
  std::set<VarId> vars;
  std::set<std::string> ops;
  std::set<int> seen;
  bool trans = false;
  collect(r, vars, ops, seen, trans);
  if (!trans && !circle_c) return Verdict::Nonzero;

  std::mt19937_64 rng(opt.seed);
  int done = 0;
  int attempts = 0;
  const int max_attempts = 500 * std::max(opt.points, 1);
  while (done < opt.points) {
    if (++attempts > max_attempts)
      throw ProbeError(
          "probing failed: domain errors or poles at all sampled points");
    Probe pt;
    for (auto& v : vars) pt.vars[v] = usym(rng);
    if (circle_c) {
      double th = 2.0 * 3.14159265358979323846 * urand(rng);
      pt.vars[*circle_c] = std::cos(th);
      pt.vars[*circle_s] = std::sin(th);
    }
    for (auto& o : ops) {
      std::vector<double> c(5);
      for (auto& x : c) x = usym(rng);
      pt.opaques[o] = std::move(c);
    }
    try {
      if (!pt.small_at(r, opt.eps)) return Verdict::Nonzero;
      ++done;
    } catch (const PointFail&) {
      continue;
    }
  }
  return Verdict::ProbZero;
}

}  // namespace

Verdict is_zero(const Expr& e, const ProbeOptions& opt) {
  RatNF r = norm_rat(e);
  if (r.num.is_zero()) return Verdict::Zero;
  return probe_rat(r, opt, nullptr, nullptr);
}

// --- zero test modulo c^2 + s^2 = 1 ----------------------------------------------

namespace {

/// Rewrite s^k -> s^(k mod 2) (1 - c^2)^(k/2) in every polynomial, including
/// the arguments of function/opaque/fractional-power atoms.
struct CircleReducer {
  int cid, sid;
  std::unordered_map<int, int> atom_map;
  std::map<std::string, RatP> rat_cache;

  Poly reduce_poly(const Poly& p) {
    Poly c2;  // 1 - c^2
    c2.t.push_back({Q(1), {}});
    {
      Mono m;
      m.f.emplace_back(cid, 2);
      c2 = poly_add(c2, Poly{{{Q(-1), m}}});
    }
    std::vector<Term> out;
    for (auto& t : p.t) {
      // Remap atoms first (arguments may contain s), then reduce s powers.
      std::vector<std::pair<int, int>> remapped;
      int k = 0;
      for (auto& [a, e] : t.m.f) {
        int na = map_atom(a);
        if (na == sid)
          k += e;
        else
          remapped.emplace_back(na, e);
      }
      std::sort(remapped.begin(), remapped.end());
      Mono m;
      for (auto& [a, e] : remapped) {
        if (!m.f.empty() && m.f.back().first == a)
          m.f.back().second += e;
        else
          m.f.emplace_back(a, e);
      }
      if (k % 2) m = mono_merge(m, Mono{{{sid, 1}}});
      Poly term{{{t.c, std::move(m)}}};
      for (int i = 0; i < k / 2; ++i) term = pm_free(term, c2);
      for (auto& tt : term.t) out.push_back(tt);
    }
    return sort_combine(std::move(out));
  }

  RatP reduce_rat(const RatP& r) {
    std::string key = rat_key(*r);
    auto it = rat_cache.find(key);
    if (it != rat_cache.end()) return it->second;
    RatNF nr = rv_norm(reduce_poly(r->num), reduce_poly(r->den));
    RatP p = std::make_shared<const RatNF>(std::move(nr));
    rat_cache.emplace(key, p);
    return p;
  }

  int map_atom(int id) {
    auto it = atom_map.find(id);
    if (it != atom_map.end()) return it->second;
    Registry& reg = Registry::inst();
    const AtomData a = reg.at(id);
    int nid = id;
    if (a.kind != AtomData::Kind::Var) {
      RatP na = reduce_rat(a.arg);
      if (!rat_equal(*na, *a.arg)) {
        switch (a.kind) {
          case AtomData::Kind::Fn:
            nid = reg.intern_fn(a.fn, na);
            break;
          case AtomData::Kind::Opq:
            nid = reg.intern_opq(a.opq_name, a.opq_order, na);
            break;
          case AtomData::Kind::FracPow:
            nid = reg.intern_fracpow(na, a.frac);
            break;
          default:
            break;
        }
      }
    }
    atom_map.emplace(id, nid);
    return nid;
  }
};

}  // namespace

Verdict is_zero_mod_circle(const Expr& e, const VarId& c, const VarId& s,
                           const ProbeOptions& opt) {
  RatNF r = norm_rat(e);
  if (r.num.is_zero()) return Verdict::Zero;
  Registry& reg = Registry::inst();
  CircleReducer red{reg.intern_var(c), reg.intern_var(s), {}, {}};
  RatNF rr = rv_norm(red.reduce_poly(r.num), red.reduce_poly(r.den));
  if (rr.num.is_zero()) return Verdict::Zero;
  return probe_rat(rr, opt, &c, &s);
}

// --- random expressions ------------------------------------------------------------

Expr gen_random_expr(std::mt19937_64& rng, const std::vector<VarId>& pool,
                     int depth) {
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  if (depth <= 0 || pick(5) == 0) {
    if (pick(2) == 0 && !pool.empty())
      return evar(pool[pick(static_cast<int>(pool.size()))]);
    return num(pick(9) - 4, 1 + pick(3));
  }
  switch (pick(10)) {
    case 0:
    case 1:
    case 2: {
      ExprList ks;
      for (int i = 0, n = 2 + pick(2); i < n; ++i)
        ks.push_back(gen_random_expr(rng, pool, depth - 1));
      return add(std::move(ks));
    }
    case 3:
    case 4:
    case 5: {
      ExprList ks;
      for (int i = 0, n = 2 + pick(2); i < n; ++i)
        ks.push_back(gen_random_expr(rng, pool, depth - 1));
      return mul(std::move(ks));
    }
    case 6: {
      static const int exps[] = {2, 3, -1, -2};
      int e = exps[pick(4)];
      // Negative powers stay on leaves: sums under reciprocals stack up
      // multi-term denominators whose exact cancellation is intractable.
      Expr b = gen_random_expr(rng, pool, e < 0 ? 0 : depth - 1);
      if (b.is_zero_const() && e < 0) e = 2;
      return pow(std::move(b), Q(e));
    }
    case 7:
      return fn(Fun::Exp, gen_random_expr(rng, pool, depth - 1));
    case 8:
      return fn(pick(2) ? Fun::Sin : Fun::Cos,
                gen_random_expr(rng, pool, depth - 1));
    default:
      return opq("alpha", 0, gen_random_expr(rng, pool, depth - 1));
  }
}

}  // namespace nyz::sym
