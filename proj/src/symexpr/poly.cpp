#include "poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace nyz::sym::detail {

// --- monomials ----------------------------------------------------------------

int mono_cmp(const Mono& a, const Mono& b) {
  // Lexicographic, highest atom id first. Vectors are ascending, so walk
  // from the back.
  auto ia = a.f.rbegin(), ib = b.f.rbegin();
  while (ia != a.f.rend() && ib != b.f.rend()) {
    if (ia->first != ib->first) return ia->first > ib->first ? 1 : -1;
    if (ia->second != ib->second) return ia->second > ib->second ? 1 : -1;
    ++ia;
    ++ib;
  }
  if (ia != a.f.rend()) return 1;
  if (ib != b.f.rend()) return -1;
  return 0;
}

Mono mono_merge(const Mono& a, const Mono& b) {
  Mono r;
  r.f.reserve(a.f.size() + b.f.size());
  auto ia = a.f.begin(), ib = b.f.begin();
  while (ia != a.f.end() || ib != b.f.end()) {
    if (ib == b.f.end() || (ia != a.f.end() && ia->first < ib->first))
      r.f.push_back(*ia++);
    else if (ia == a.f.end() || ib->first < ia->first)
      r.f.push_back(*ib++);
    else {
      r.f.emplace_back(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  return r;
}

bool mono_divides(const Mono& d, const Mono& m) {
  auto im = m.f.begin();
  for (auto& [a, e] : d.f) {
    while (im != m.f.end() && im->first < a) ++im;
    if (im == m.f.end() || im->first != a || im->second < e) return false;
  }
  return true;
}

Mono mono_quot(const Mono& m, const Mono& d) {
  Mono r;
  auto id = d.f.begin();
  for (auto& [a, e] : m.f) {
    int sub = 0;
    while (id != d.f.end() && id->first < a) ++id;
    if (id != d.f.end() && id->first == a) sub = id->second;
    if (e - sub > 0) r.f.emplace_back(a, e - sub);
  }
  return r;
}

Mono mono_gcd(const Mono& a, const Mono& b) {
  Mono r;
  auto ib = b.f.begin();
  for (auto& [x, e] : a.f) {
    while (ib != b.f.end() && ib->first < x) ++ib;
    if (ib != b.f.end() && ib->first == x)
      r.f.emplace_back(x, std::min(e, ib->second));
  }
  return r;
}

// --- polynomials ----------------------------------------------------------------

Poly poly_zero() { return {}; }

Poly poly_const(Q c) {
  Poly p;
  if (c != 0) p.t.push_back({std::move(c), {}});
  return p;
}

Poly poly_atom(int id, int exp) {
  Poly p;
  Mono m;
  m.f.emplace_back(id, exp);
  p.t.push_back({Q(1), std::move(m)});
  return p;
}

Poly sort_combine(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    return mono_cmp(a.m, b.m) > 0;
  });
  Poly p;
  for (auto& t : terms) {
    if (t.c == 0) continue;
    if (!p.t.empty() && mono_cmp(p.t.back().m, t.m) == 0) {
      p.t.back().c += t.c;
      if (p.t.back().c == 0) p.t.pop_back();
    } else {
      p.t.push_back(std::move(t));
    }
  }
  return p;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly r;
  r.t.reserve(a.t.size() + b.t.size());
  auto ia = a.t.begin(), ib = b.t.begin();
  while (ia != a.t.end() || ib != b.t.end()) {
    int c;
    if (ia == a.t.end())
      c = -1;
    else if (ib == b.t.end())
      c = 1;
    else
      c = mono_cmp(ia->m, ib->m);
    if (c > 0)
      r.t.push_back(*ia++);
    else if (c < 0)
      r.t.push_back(*ib++);
    else {
      Q s = ia->c + ib->c;
      if (s != 0) r.t.push_back({std::move(s), ia->m});
      ++ia;
      ++ib;
    }
  }
  return r;
}

Poly poly_scale(const Poly& a, const Q& c) {
  if (c == 0) return {};
  Poly r = a;
  for (auto& t : r.t) t.c *= c;
  return r;
}

Poly poly_neg(const Poly& a) { return poly_scale(a, Q(-1)); }

Poly pm_free(const Poly& a, const Poly& b) {
  std::vector<Term> out;
  out.reserve(a.t.size() * b.t.size());
  for (auto& ta : a.t)
    for (auto& tb : b.t) out.push_back({ta.c * tb.c, mono_merge(ta.m, tb.m)});
  return sort_combine(std::move(out));
}

// --- exact division / gcd (free ring) -------------------------------------------

namespace {

// Multivariate gcds can swell badly on adversarial inputs; rv_norm installs a
// work budget and falls back to an uncancelled (still exact) quotient when it
// runs out. Inactive (< 0) outside that window.
thread_local long long gcd_ticks_left = -1;

struct GcdBudgetExceeded {};

inline void gcd_tick(long long cost) {
  if (gcd_ticks_left >= 0 && (gcd_ticks_left -= cost) < 0)
    throw GcdBudgetExceeded{};
}

}  // namespace

std::optional<Poly> poly_div_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) return std::nullopt;
  Poly rem = a;
  std::vector<Term> quot;
  while (!rem.is_zero()) {
    gcd_tick(static_cast<long long>(b.t.size()));
    const Term& lr = rem.t.front();
    const Term& lb = b.t.front();
    if (!mono_divides(lb.m, lr.m)) return std::nullopt;
    Term q{lr.c / lb.c, mono_quot(lr.m, lb.m)};
    Poly qb;
    qb.t.reserve(b.t.size());
    for (auto& t : b.t) qb.t.push_back({-q.c * t.c, mono_merge(q.m, t.m)});
    rem = poly_add(rem, sort_combine(std::move(qb.t)));
    quot.push_back(std::move(q));
  }
  return sort_combine(std::move(quot));
}

namespace {

using BigInt = boost::multiprecision::cpp_int;

/// Scale to integer coefficients with gcd 1 and positive leading coefficient.
Poly make_int_primitive(const Poly& p) {
  if (p.is_zero()) return p;
  BigInt l(1);
  for (auto& t : p.t) l = boost::multiprecision::lcm(l, denominator(t.c));
  BigInt g(0);
  for (auto& t : p.t) g = boost::multiprecision::gcd(g, BigInt(numerator(t.c) * l / denominator(t.c)));
  if (g == 0) g = 1;
  Q s = Q(l) / Q(g);
  if (p.t.front().c < 0) s = -s;
  return poly_scale(p, s);
}

int max_atom(const Poly& p) {
  int m = -1;
  for (auto& t : p.t)
    if (!t.m.f.empty()) m = std::max(m, t.m.f.back().first);
  return m;
}

bool atom_present(const Poly& p, int x) {
  for (auto& t : p.t)
    for (auto& [a, e] : t.m.f)
      if (a == x) return true;
  return false;
}

/// View as a univariate polynomial in atom x with Poly coefficients.
std::map<int, Poly> univ(const Poly& p, int x) {
  std::map<int, Poly> m;
  for (auto& t : p.t) {
    int e = 0;
    Mono rest;
    for (auto& [a, k] : t.m.f) {
      if (a == x)
        e = k;
      else
        rest.f.emplace_back(a, k);
    }
    m[e].t.push_back({t.c, std::move(rest)});
  }
  for (auto& [e, c] : m) c = sort_combine(std::move(c.t));
  return m;
}

Poly univ_join(const std::map<int, Poly>& m, int x) {
  std::vector<Term> out;
  for (auto& [e, c] : m)
    for (auto& t : c.t) {
      Mono mm = t.m;
      if (e > 0) mm = mono_merge(mm, Mono{{{x, e}}});
      out.push_back({t.c, std::move(mm)});
    }
  return sort_combine(std::move(out));
}

int udeg(const std::map<int, Poly>& m) { return m.empty() ? -1 : m.rbegin()->first; }

/// Pseudo-remainder of a by b, both keyed by exponent of the main variable.
std::map<int, Poly> uprem(std::map<int, Poly> a, const std::map<int, Poly>& b) {
  const Poly& lb = b.rbegin()->second;
  const int db = udeg(b);
  while (udeg(a) >= db && udeg(a) >= 0) {
    const int da = udeg(a);
    Poly la = a.rbegin()->second;
    // a := lb*a - la*x^(da-db)*b
    std::map<int, Poly> next;
    for (auto& [e, c] : a)
      if (e != da) {
        gcd_tick(static_cast<long long>(c.t.size()) * lb.t.size());
        next[e] = pm_free(c, lb);
      }
    for (auto& [e, c] : b) {
      if (e == db) continue;
      int te = e + da - db;
      gcd_tick(static_cast<long long>(c.t.size()) * la.t.size());
      Poly sub = pm_free(c, la);
      auto it = next.find(te);
      if (it == next.end())
        next[te] = poly_neg(sub);
      else
        it->second = poly_add(it->second, poly_neg(sub));
    }
    for (auto it = next.begin(); it != next.end();)
      it = it->second.is_zero() ? next.erase(it) : std::next(it);
    a = std::move(next);
  }
  return a;
}

}  // namespace

Poly poly_gcd(const Poly& a_in, const Poly& b_in) {
  gcd_tick(static_cast<long long>(a_in.t.size()) + b_in.t.size());
  if (a_in.is_zero()) return make_int_primitive(b_in);
  if (b_in.is_zero()) return make_int_primitive(a_in);

  // Pull out monomial content first.
  Mono ca = a_in.t.front().m, cb = b_in.t.front().m;
  for (auto& t : a_in.t) ca = mono_gcd(ca, t.m);
  for (auto& t : b_in.t) cb = mono_gcd(cb, t.m);
  Mono cm = mono_gcd(ca, cb);

  Poly a, b;
  for (auto& t : a_in.t) a.t.push_back({t.c, mono_quot(t.m, ca)});
  for (auto& t : b_in.t) b.t.push_back({t.c, mono_quot(t.m, cb)});
  a = make_int_primitive(sort_combine(std::move(a.t)));
  b = make_int_primitive(sort_combine(std::move(b.t)));

  Poly core = poly_const(Q(1));
  if (!a.is_const() && !b.is_const()) {
    // Main variable: largest atom id present in both.
    int x = -1;
    {
      int ma = max_atom(a), mb = max_atom(b);
      for (int cand = std::min(ma, mb); cand >= 0; --cand)
        if (atom_present(a, cand) && atom_present(b, cand)) {
          x = cand;
          break;
        }
    }
    if (x >= 0) {
      auto ua = univ(a, x), ub = univ(b, x);
      if (udeg(ua) < udeg(ub)) std::swap(ua, ub);
      // Contents w.r.t. x.
      auto content = [](const std::map<int, Poly>& u) {
        Poly c = poly_zero();
        for (auto& [e, p] : u) c = poly_gcd(c, p);
        return c;
      };
      Poly conta = content(ua), contb = content(ub);
      Poly contg = poly_gcd(conta, contb);
      auto divmap = [](std::map<int, Poly>& u, const Poly& d) {
        for (auto& [e, p] : u) p = *poly_div_exact(p, d);
      };
      divmap(ua, conta);
      divmap(ub, contb);
      while (true) {
        auto r = uprem(ua, ub);
        if (r.empty()) {
          Poly ppb = univ_join(ub, x);
          core = pm_free(contg, make_int_primitive(ppb));
          break;
        }
        if (udeg(r) == 0) {
          core = contg;
          break;
        }
        Poly cr = content(r);
        divmap(r, cr);
        ua = std::move(ub);
        ub = std::move(r);
      }
    }
  }
  std::vector<Term> out;
  for (auto& t : core.t) out.push_back({t.c, mono_merge(t.m, cm)});
  return make_int_primitive(sort_combine(std::move(out)));
}

// --- fractional-power monomial canonicalization -----------------------------------

namespace {

struct MonoCanon {
  Mono m;
  bool has_extra = false;
  RatNF extra;
};

MonoCanon canon_mono(const Mono& raw) {
  // Group fractional-power atoms by base; everything else passes through.
  Registry& reg = Registry::inst();
  bool any_frac = false;
  for (auto& [a, e] : raw.f)
    if (reg.at(a).kind == AtomData::Kind::FracPow) {
      any_frac = true;
      break;
    }
  if (!any_frac) return {raw, false, rv_const(Q(1))};

  struct BaseAcc {
    RatP base;
    Q total;  // accumulated fractional exponent
  };
  std::vector<std::pair<std::string, BaseAcc>> bases;  // keyed by base key
  Mono keep;
  for (auto& [a, e] : raw.f) {
    const AtomData& ad = reg.at(a);
    if (ad.kind != AtomData::Kind::FracPow) {
      keep.f.emplace_back(a, e);
      continue;
    }
    std::string bk = rat_key(*ad.arg);
    Q add = ad.frac * e;
    bool found = false;
    for (auto& [k, acc] : bases)
      if (k == bk) {
        acc.total += add;
        found = true;
        break;
      }
    if (!found) bases.push_back({bk, {ad.arg, add}});
  }

  MonoCanon out;
  out.extra = rv_const(Q(1));
  std::vector<std::pair<int, int>> extra_atoms;
  for (auto& [k, acc] : bases) {
    using boost::multiprecision::cpp_int;
    cpp_int p = numerator(acc.total), q = denominator(acc.total);
    cpp_int whole = p / q, rem = p % q;
    if (whole > 0) {
      out.has_extra = true;
      out.extra = rv_mul(out.extra,
                         rv_int_pow(*acc.base, whole.convert_to<long long>()));
    }
    if (rem != 0) {
      int id = Registry::inst().intern_fracpow(acc.base, Q(rem) / Q(q));
      extra_atoms.emplace_back(id, 1);
    }
  }
  std::sort(extra_atoms.begin(), extra_atoms.end());
  Mono fr;
  fr.f = std::move(extra_atoms);
  out.m = mono_merge(keep, fr);
  return out;
}

const Poly& poly_one() {
  static const Poly p = poly_const(Q(1));
  return p;
}

}  // namespace

// --- normalized rational values -----------------------------------------------

RatNF rv_zero() { return {poly_zero(), poly_one()}; }
RatNF rv_const(Q c) { return {poly_const(std::move(c)), poly_one()}; }
RatNF rv_of_poly(Poly p) { return {std::move(p), poly_one()}; }
RatNF rv_atom(int id) { return {poly_atom(id), poly_one()}; }

RatNF pm(const Poly& a, const Poly& b) {
  std::vector<Term> clean;
  std::vector<std::pair<Term, RatNF>> defects;
  clean.reserve(a.t.size() * b.t.size());
  for (auto& ta : a.t)
    for (auto& tb : b.t) {
      MonoCanon mc = canon_mono(mono_merge(ta.m, tb.m));
      Q c = ta.c * tb.c;
      if (!mc.has_extra)
        clean.push_back({std::move(c), std::move(mc.m)});
      else
        defects.push_back({{std::move(c), std::move(mc.m)}, std::move(mc.extra)});
    }
  RatNF r = rv_of_poly(sort_combine(std::move(clean)));
  for (auto& [t, extra] : defects) {
    Poly tp;
    tp.t.push_back(t);
    r = rv_add(r, rv_mul(RatNF{std::move(tp), poly_one()}, extra));
  }
  return r;
}

namespace {

/// Clear fractional-power atoms out of a single-term denominator by moving
/// complementary powers into the numerator.
std::optional<RatNF> rationalize(const Poly& n, const Poly& d) {
  if (d.t.size() != 1) return std::nullopt;
  Registry& reg = Registry::inst();
  const Mono& dm = d.t[0].m;
  bool has = false;
  for (auto& [a, e] : dm.f)
    if (reg.at(a).kind == AtomData::Kind::FracPow) has = true;
  if (!has) return std::nullopt;

  Mono rest;
  RatNF den_rv = rv_const(d.t[0].c);
  Mono num_factor;
  for (auto& [a, e] : dm.f) {
    const AtomData& ad = reg.at(a);
    if (ad.kind != AtomData::Kind::FracPow) {
      rest.f.emplace_back(a, e);
      continue;
    }
    // 1 / B^(e*p/q) = B^((q-s)/q) / B^(m+1) with e*p = m*q + s, s > 0.
    using boost::multiprecision::cpp_int;
    Q tot = ad.frac * e;
    cpp_int p = numerator(tot), q = denominator(tot);
    cpp_int m = p / q, s = p % q;
    long long whole = m.convert_to<long long>();
    if (s != 0) {
      int id = reg.intern_fracpow(ad.arg, Q(q - s) / Q(q));
      num_factor = mono_merge(num_factor, Mono{{{id, 1}}});
      whole += 1;
    }
    den_rv = rv_mul(den_rv, rv_int_pow(*ad.arg, whole));
  }
  Poly rp;
  rp.t.push_back({Q(1), std::move(rest)});
  den_rv = rv_mul(den_rv, RatNF{std::move(rp), poly_one()});
  Poly nf;
  nf.t.push_back({Q(1), std::move(num_factor)});
  return rv_div(pm(n, nf), den_rv);
}

}  // namespace

RatNF rv_norm(Poly n, Poly d) {
  if (d.is_zero()) throw std::domain_error("division by zero");
  if (n.is_zero()) return rv_zero();

  // Move fractional powers out of monomial denominators (when the base is
  // itself free of fractional powers this terminates immediately).
  if (auto r = rationalize(n, d)) return *r;

  if (d.t.size() == 1) {
    // Monomial denominator: cancel per-term.
    Mono g = d.t[0].m;
    for (auto& t : n.t) {
      g = mono_gcd(g, t.m);
      if (g.empty()) break;
    }
    Poly n2;
    for (auto& t : n.t) n2.t.push_back({t.c / d.t[0].c, mono_quot(t.m, g)});
    Poly d2;
    d2.t.push_back({Q(1), mono_quot(d.t[0].m, g)});
    return {sort_combine(std::move(n2.t)), std::move(d2)};
  }

  Poly g = poly_const(Q(1));
  {
    struct BudgetGuard {
      long long saved;
      explicit BudgetGuard(long long b) : saved(gcd_ticks_left) {
        gcd_ticks_left = b;
      }
      ~BudgetGuard() { gcd_ticks_left = saved; }
    } guard(10'000'000);
    try {
      g = poly_gcd(n, d);
    } catch (const GcdBudgetExceeded&) {
      g = poly_const(Q(1));
    }
  }
  if (!g.is_const()) {
    n = *poly_div_exact(n, g);
    d = *poly_div_exact(d, g);
  }
  Q lc = d.t.front().c;
  if (lc != 1) {
    n = poly_scale(n, Q(1) / lc);
    d = poly_scale(d, Q(1) / lc);
  }
  return {std::move(n), std::move(d)};
}

RatNF rv_add(const RatNF& a, const RatNF& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den.is_one() && b.den.is_one())
    return rv_of_poly(poly_add(a.num, b.num));
  RatNF x = pm(a.num, b.den);
  RatNF y = pm(b.num, a.den);
  RatNF d = pm(a.den, b.den);
  RatNF s = rv_add(x, y);
  if (s.den.is_one() && d.den.is_one()) return rv_norm(s.num, d.num);
  return rv_div(s, d);
}

RatNF rv_mul(const RatNF& a, const RatNF& b) {
  if (a.is_zero() || b.is_zero()) return rv_zero();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  RatNF n = pm(a.num, b.num);
  if (a.den.is_one() && b.den.is_one()) return n;
  RatNF d = pm(a.den, b.den);
  if (n.den.is_one() && d.den.is_one()) return rv_norm(n.num, d.num);
  return rv_div(n, d);
}

RatNF rv_neg(const RatNF& a) { return {poly_neg(a.num), a.den}; }

RatNF rv_inv(const RatNF& a) {
  if (a.is_zero()) throw std::domain_error("division by zero");
  return rv_norm(a.den, a.num);
}

RatNF rv_div(const RatNF& a, const RatNF& b) {
  if (b.is_one()) return a;
  return rv_mul(a, rv_inv(b));
}

RatNF rv_int_pow(const RatNF& a, long long n) {
  if (n == 0) return rv_const(Q(1));
  if (n < 0) return rv_int_pow(rv_inv(a), -n);
  RatNF r = rv_const(Q(1));
  RatNF base = a;
  while (n > 0) {
    if (n & 1) r = rv_mul(r, base);
    base = n > 1 ? rv_mul(base, base) : base;
    n >>= 1;
  }
  return r;
}

bool rat_equal(const RatNF& a, const RatNF& b) {
  auto pe = [](const Poly& x, const Poly& y) {
    if (x.t.size() != y.t.size()) return false;
    for (std::size_t i = 0; i < x.t.size(); ++i)
      if (x.t[i].c != y.t[i].c || mono_cmp(x.t[i].m, y.t[i].m) != 0)
        return false;
    return true;
  };
  return pe(a.num, b.num) && pe(a.den, b.den);
}

std::string rat_key(const RatNF& r) {
  auto pk = [](const Poly& p) {
    std::string s;
    for (auto& t : p.t) {
      s += t.c.str();
      for (auto& [a, e] : t.m.f)
        s += "a" + std::to_string(a) + "e" + std::to_string(e);
      s += ';';
    }
    return s;
  };
  return pk(r.num) + "|" + pk(r.den);
}

// --- registry -------------------------------------------------------------------

Registry& Registry::inst() {
  static Registry r;
  return r;
}

int Registry::intern(AtomData a) {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = by_key_.find(a.key);
  if (it != by_key_.end()) return it->second;
  int id = static_cast<int>(atoms_.size());
  by_key_.emplace(a.key, id);
  atoms_.push_back(std::move(a));
  return id;
}

int Registry::intern_var(const VarId& v) {
  AtomData a;
  a.kind = AtomData::Kind::Var;
  a.var = v;
  a.key = "V|" + std::to_string(static_cast<int>(v.kind)) + "|" + v.name;
  for (int i : v.index) a.key += "," + std::to_string(i);
  a.pstr = v.str();
  return intern(std::move(a));
}

int Registry::intern_fn(Fun f, RatP arg) {
  AtomData a;
  a.kind = AtomData::Kind::Fn;
  a.fn = f;
  a.key = std::string("F|") + fun_name(f) + "|" + rat_key(*arg);
  a.pstr = std::string(fun_name(f)) + "(" + print(rat_to_expr(*arg)) + ")";
  a.arg = std::move(arg);
  return intern(std::move(a));
}

int Registry::intern_opq(const std::string& name, int order, RatP arg) {
  AtomData a;
  a.kind = AtomData::Kind::Opq;
  a.opq_name = name;
  a.opq_order = order;
  a.key = "O|" + name + "|" + std::to_string(order) + "|" + rat_key(*arg);
  a.pstr = name + std::string(order, '\'') + "(" + print(rat_to_expr(*arg)) + ")";
  a.arg = std::move(arg);
  return intern(std::move(a));
}

int Registry::intern_fracpow(RatP base, Q frac) {
  AtomData a;
  a.kind = AtomData::Kind::FracPow;
  a.frac = frac;
  a.key = "P|" + frac.str() + "|" + rat_key(*base);
  a.pstr = "(" + print(rat_to_expr(*base)) + ")^(" + frac.str() + ")";
  a.arg = std::move(base);
  return intern(std::move(a));
}

const AtomData& Registry::at(int id) const {
  std::lock_guard<std::mutex> lk(mu_);
  return atoms_.at(id);
}

int Registry::size() const {
  std::lock_guard<std::mutex> lk(mu_);
  return static_cast<int>(atoms_.size());
}

}  // namespace nyz::sym::detail
