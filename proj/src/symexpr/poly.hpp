#pragma once

#include "nyz/expr.hpp"

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

/// Internal canonical-form machinery: expressions normalize to a ratio of
/// multivariate polynomials over "atoms" (variables, function applications,
/// opaque applications, fractional powers). Not part of the public API.
namespace nyz::sym::detail {

struct RatNF;
using RatP = std::shared_ptr<const RatNF>;

// --- monomials / polynomials ------------------------------------------------

/// Sparse monomial: (atom id, exponent) pairs, ascending ids, exponents > 0.
struct Mono {
  std::vector<std::pair<int, int>> f;
  bool empty() const { return f.empty(); }
  int deg() const {
    int d = 0;
    for (auto& [a, e] : f) d += e;
    return d;
  }
};

/// Lexicographic order with higher atom ids taking priority.
int mono_cmp(const Mono& a, const Mono& b);
Mono mono_merge(const Mono& a, const Mono& b);
bool mono_divides(const Mono& d, const Mono& m);
Mono mono_quot(const Mono& m, const Mono& d);
Mono mono_gcd(const Mono& a, const Mono& b);

struct Term {
  Q c;
  Mono m;
};

/// Terms sorted descending by mono_cmp; no zero coefficients.
struct Poly {
  std::vector<Term> t;
  bool is_zero() const { return t.empty(); }
  bool is_const() const { return t.empty() || (t.size() == 1 && t[0].m.empty()); }
  bool is_one() const {
    return t.size() == 1 && t[0].m.empty() && t[0].c == 1;
  }
};

Poly poly_zero();
Poly poly_const(Q c);
Poly poly_atom(int id, int exp = 1);
Poly sort_combine(std::vector<Term> terms);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, const Q& c);
Poly poly_neg(const Poly& a);

/// Free-ring product (atoms treated as independent symbols; no fractional-
/// power rewriting). Used by gcd/division internals only.
Poly pm_free(const Poly& a, const Poly& b);

/// Exact division in the free ring; nullopt if not divisible.
std::optional<Poly> poly_div_exact(const Poly& a, const Poly& b);

/// Multivariate gcd (primitive PRS), primitive with positive leading
/// coefficient; gcd of anything with a nonzero constant is 1.
Poly poly_gcd(const Poly& a, const Poly& b);

// --- normalized rational functions ------------------------------------------

/// num/den with gcd removed, den's leading coefficient 1, den nonzero;
/// monomials keep fractional-power atoms below one full power of the base.
struct RatNF {
  Poly num, den;
  bool is_zero() const { return num.is_zero(); }
  bool is_one() const { return num.is_one() && den.is_one(); }
};

RatNF rv_zero();
RatNF rv_const(Q c);
RatNF rv_of_poly(Poly p);
RatNF rv_atom(int id);
RatNF rv_norm(Poly n, Poly d);
RatNF rv_add(const RatNF& a, const RatNF& b);
RatNF rv_mul(const RatNF& a, const RatNF& b);
RatNF rv_neg(const RatNF& a);
RatNF rv_inv(const RatNF& a);
RatNF rv_div(const RatNF& a, const RatNF& b);
RatNF rv_int_pow(const RatNF& a, long long n);

/// Defect-aware product of two polynomials: applies the fractional-power
/// exponent reduction atom(B,p/q)^k -> B^floor(kp/q) * atom(B, frac) while
/// multiplying monomials.
RatNF pm(const Poly& a, const Poly& b);

bool rat_equal(const RatNF& a, const RatNF& b);
std::string rat_key(const RatNF& r);

// --- atoms --------------------------------------------------------------------

struct AtomData {
  enum class Kind { Var, Fn, Opq, FracPow };
  Kind kind;
  VarId var;              // Var
  Fun fn = Fun::Exp;      // Fn
  std::string opq_name;   // Opq
  int opq_order = 0;      // Opq
  RatP arg;               // Fn/Opq argument; FracPow base
  Q frac;                 // FracPow exponent, in (0,1), lowest terms
  std::string key;        // process-local identity key
  std::string pstr;       // printed form, for stable external ordering
};

class Registry {
 public:
  static Registry& inst();
  int intern_var(const VarId& v);
  int intern_fn(Fun f, RatP arg);
  int intern_opq(const std::string& name, int order, RatP arg);
  int intern_fracpow(RatP base, Q frac);
  const AtomData& at(int id) const;
  int size() const;

 private:
  int intern(AtomData a);
  mutable std::mutex mu_;
  std::deque<AtomData> atoms_;
  std::unordered_map<std::string, int> by_key_;
};

// --- bridges to the public Expr type ------------------------------------------

RatNF norm_rat(const Expr& e);
Expr rat_to_expr(const RatNF& r);

}  // namespace nyz::sym::detail
