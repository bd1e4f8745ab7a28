#pragma once

#include "nyz/expr.hpp"

#include <functional>
#include <random>
#include <set>
#include <stdexcept>

/// Operations on symbolic expressions: parsing, differentiation,
/// substitution, canonicalization, zero-testing and numeric evaluation.
namespace nyz::sym {

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(std::size_t off, const std::string& msg);
};

/// Parse the published expression grammar (see docs/expr-grammar.md).
Expr parse_expr(const std::string& text);

/// Exact partial derivative; all jet coordinates are mutually independent.
Expr diff(const Expr& e, const VarId& v);

/// Simultaneous substitution of variables, then normalize.
Expr substitute(const Expr& e, const std::map<VarId, Expr>& bindings);

/// Replace every application name^(k)(arg) by d^k body / d formal^k
/// evaluated at formal := arg. Used to instantiate functional slots.
Expr substitute_opaque(const Expr& e, const std::string& name,
                       const VarId& formal, const Expr& body);

/// Canonical form: expanded numerator/denominator over atoms with the gcd
/// removed, terms in a stable total order.
Expr normalize(const Expr& e);

enum class Verdict { Zero, Nonzero, ProbZero };
const char* to_string(Verdict v);

struct ProbeOptions {
  int points = 24;
  double eps = 1e-9;
  std::uint64_t seed = 20260815ull;
};

struct ProbeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Zero oracle. `Zero` when the canonical form is the zero constant;
/// otherwise, expressions free of transcendental/opaque atoms are `Nonzero`
/// by canonical uniqueness, and the rest are probed at random points with
/// random polynomial instantiations of opaque functions.
Verdict is_zero(const Expr& e, const ProbeOptions& opt = {});

/// Zero oracle modulo c^2 + s^2 = 1: reduces powers of s inside the whole
/// tree (including function arguments), then tests; probing samples (c, s)
/// on the unit circle.
Verdict is_zero_mod_circle(const Expr& e, const VarId& c, const VarId& s,
                           const ProbeOptions& opt = {});

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Callable instantiation of an opaque function: (derivative order, x) ->
/// value.
using OpaqueFn = std::function<double(int, double)>;

struct EvalContext {
  std::map<VarId, double> vars;
  std::map<std::string, OpaqueFn> opaques;
};

/// IEEE double evaluation; Lambert W delegates to the numerics kernels.
/// Throws EvalError on unbound variables and domain violations.
double eval(const Expr& e, const EvalContext& ctx);

/// Polynomial instantiation c0 + c1 x + ... with analytic derivatives.
OpaqueFn poly_instance(std::vector<double> coeffs);

/// Random expression over the given variables (for property tests).
Expr gen_random_expr(std::mt19937_64& rng, const std::vector<VarId>& pool,
                     int depth);

/// True when both sides normalize to the identical canonical tree.
bool equal_normalized(const Expr& a, const Expr& b);

/// All variables occurring in the tree, including inside function arguments.
std::set<VarId> variables(const Expr& e);

}  // namespace nyz::sym
