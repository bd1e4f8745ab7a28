#pragma once

#include "nyz/reductions.hpp"

#include <functional>
#include <iosfwd>
#include <optional>

#include "json.hpp"

/// Exact-solution catalog of the reduced equation: closed forms, Lambert-W
/// families, parametric families with bracketed root-finding, solutions of
/// the Burgers-level model by characteristics, and the composition rules
/// that lift two-variable solutions to the three-variable model.
namespace nyz::sol {

using sym::Expr;
using sym::Q;
using sym::VarId;

struct Grid {
  double z1_lo = 0.0, z1_hi = 1.0;
  int n1 = 10;
  double z2_lo = 0.0, z2_hi = 1.0;
  int n2 = 10;
};

struct Grid3 {
  double t_lo = 0.0, t_hi = 1.0;
  int nt = 5;
  double x_lo = 0.0, x_hi = 1.0;
  int nx = 5;
  double y_lo = 0.0, y_hi = 1.0;
  int ny = 5;
};

/// One catalogued family. The kind selects which members are active:
///   closed-form       h_expr / w_expr in (z1, z2)
///   lambert           zeta = W_branch(arg(z1, z2)); h_zeta / w_zeta in
///                     (zeta, z1, z2)
///   parametric        h_s / w_s in (s, z1); constraint g(s, z1, z2) = 0
///                     solved on the bracket scan range
///   implicit-burgers  initial datum h0, solved by characteristics (no w)
struct SolutionFamily {
  std::string name;
  std::string kind;
  std::string locus;  // catalog reference, e.g. "reduction case 1.4"

  std::optional<Expr> h_expr, w_expr;

  int lambert_branch = 0;
  std::optional<Expr> lambert_arg;
  std::optional<Expr> h_zeta, w_zeta;

  std::optional<Expr> h_s, w_s, constraint;
  double s_lo = -10.0, s_hi = 10.0;
  int s_cells = 400;

  std::function<double(double)> h0;

  std::optional<Q> a;  // parameter of the parametric cases

  /// Cheap algebraic guard; eval on a point failing it throws.
  std::function<bool(double, double)> singular;
  Grid window;  // default verification window (stencil margin included)
};

/// The shipped families, default parameter values. Names:
///   zero, case-1.3-plus, case-1.3-minus, case-1.4-lambert-W0,
///   case-1.4-lambert-Wm1, case-1.5-lambert-W0, case-1.5-lambert-Wm1,
///   case-1.6-half, case-1.6-two, case-1.6-a, case-1.7-lambert-W0,
///   case-1.7-lambert-Wm1, case-1.8-zero, case-1.8-a
const std::vector<SolutionFamily>& families();

/// Lookup by name; `a` re-instantiates the parametric cases (1.6: window
/// flips to z2 < 0 for a > 1; 1.8: requires a != 0). Throws on unknown
/// names, on `a` for non-parametric families, and on degenerate a.
SolutionFamily family(const std::string& name,
                      std::optional<Q> a = std::nullopt);

/// Burgers-level solution from an initial datum by characteristics,
/// outside the catalog.
SolutionFamily make_implicit_burgers(std::function<double(double)> h0,
                                     std::string name = "implicit-burgers");

double eval_h(const SolutionFamily& f, double z1, double z2);
double eval_w(const SolutionFamily& f, double z1, double z2);

/// Substitutes the family's closed form into the model equation and runs
/// the zero oracle. Requires an expression-backed form for the model's
/// dependent variable (w for redEq13, h for burgers).
sym::Verdict residual_symbolic(const SolutionFamily& f,
                               const std::string& model_id);

/// Max |L| over the grid nodes, derivatives by 4th-order central
/// differences with one Richardson halving of the base step.
double residual_fd(const SolutionFamily& f, const std::string& model_id,
                   const Grid& g, double step = 1e-2);

/// Burgers-level value h(z1, z2) for the datum h(0, .) = h0 by tracing the
/// characteristic through (z1, z2); errors before shock formation only.
double implicit_burgers_eval(const std::function<double(double)>& h0,
                             double z1, double z2);

/// How a two-variable solution enters the three-variable model:
///   general    u = D(c1 c4 - c2 c3) w(Z1, Z2) + cubic/quadratic tail,
///              Z1 = (c1 z1 + c2)/D, Z2 = (z2 + c5 z1)/D, D = c3 z1 + c4,
///              with c1 c4 - c2 c3 = +-1
///   shift      u = w(z1, z2 + c5 z1) - c5/2 z2^2          (constant rho)
///   inversion  u = -z1 w(1/z1, z2/z1 + c5) + z2^3/(6 z1)  (constant rho)
/// plus, in every kind, the time tail -rho_t/(6 rho) y^3 with z1 = z1(t),
/// z2 = y/rho - x.
struct CompositeSpec {
  std::string kind = "general";
  Q c1{1}, c2{0}, c3{0}, c4{1}, c5{0};
};

struct CompositeSolution {
  std::string name;
  std::function<double(double, double, double)> u;  // (t, x, y)
  std::function<bool(double, double, double)> singular;
};

CompositeSolution compose_dN_solution(const SolutionFamily& w_family,
                                      const CompositeSpec& spec,
                                      const red::DNAnsatz& ansatz);

/// Left-hand side of the three-variable model at one point, derivatives by
/// 4th-order central differences with one Richardson halving.
double dn_residual_at(const std::function<double(double, double, double)>& u,
                      double t, double x, double y, double step = 1e-2);

/// Grid export: CSV rows `z1,z2,h,w,residual` (w blank when the family has
/// none; singular nodes keep coordinates and mark the rest `singular`) and
/// a JSON manifest {family, parameters, grid, tolerance, max_residual,
/// rows, singular_nodes}. Deterministic byte-for-byte for a fixed family
/// and grid.
struct ExportResult {
  std::string csv;
  nlohmann::json manifest;
  double max_residual = 0.0;
};

ExportResult export_family_grid(const SolutionFamily& f,
                                const std::string& model_id, const Grid& g,
                                double tolerance, double step = 1e-2);

/// CSV rows `t,x,y,u,residual`, same manifest scheme.
ExportResult export_composite_grid(const CompositeSolution& c, const Grid3& g,
                                   double tolerance, double step = 1e-2);

}  // namespace nyz::sol
