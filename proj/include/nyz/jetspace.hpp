#pragma once

#include "nyz/symexpr.hpp"

/// Jet-space calculus for the four equation models: total derivatives,
/// on-shell reduction in Kovalevskaya form, the restricted operators
/// D-hat on the solution-manifold charts, and prolongation of point
/// vector fields.
namespace nyz::jet {

using sym::Expr;
using sym::VarId;

/// One of the four models, in Kovalevskaya form: L = 0 is solved for the
/// principal derivative, `principal = rhs` with rhs free of principal
/// coordinates.
struct EquationModel {
  std::string id;
  std::vector<VarId> indep;
  std::string dep;
  Expr L;
  VarId principal;
  Expr rhs;

  /// Principal derivative or one of its differential consequences.
  bool is_principal(const VarId& v) const;
  /// Jet coordinate of the dependent variable that survives reduction.
  bool is_parametric(const VarId& v) const;
  int axis_of(const VarId& direction) const;  // -1 if not an independent var
};

/// Registered models: "dN", "redEq13", "burgers", "intermediate".
const EquationModel& model(const std::string& id);

/// Numeric point in a model's coordinates.
using JetPoint = std::map<VarId, double>;

/// Free total derivative D_i: shifts every jet multi-index in the given
/// direction and differentiates the explicit dependence.
Expr total_derivative(const Expr& e, const VarId& direction,
                      const EquationModel& m);

/// Substitutes the principal derivative and its differential consequences
/// until only parametric coordinates remain; normalizes.
Expr on_shell_reduce(const Expr& e, const EquationModel& m);

/// Chart on the solution manifold. Plain: independent variables plus the
/// parametric jets plus the integral symbols zeta[i,k]. Theta: the handful
/// of low-order jets plus theta[k] and zeta[i,k], with z1, z2 eliminated.
enum class Chart { Auto, Plain, Theta };

/// Restriction of the total derivative to the solution manifold, applied
/// through the displayed per-coordinate rules of the chart. Defined for the
/// redEq13 and intermediate models only.
Expr hatted_D(const Expr& e, const VarId& direction, const EquationModel& m,
              Chart chart = Chart::Auto);

/// Replace every zeta[i,k] and theta[k] symbol by its defining expression
/// in plain jet coordinates.
Expr chart_lift(const Expr& e, const EquationModel& m);

/// Point vector field on a model's base space; after prolongation the
/// component map also carries jet coordinates.
struct VectorField {
  std::string space;  // model id of the base space
  std::map<VarId, Expr> comp;

  Expr component(const VarId& v) const;  // zero when absent
  /// Apply as a derivation: sum of comp[v] * d(e)/dv.
  Expr apply(const Expr& e) const;
};

/// Base coordinates of a model: independent variables then the order-zero
/// jet of the dependent variable.
std::vector<VarId> base_coords(const EquationModel& m);
VarId dep0(const EquationModel& m);

/// Prolongation to the given jet order via the characteristic
/// Q = eta - xi^i u_i; base components are kept verbatim.
VectorField prolong(const VectorField& vf, int order, const EquationModel& m);

/// Applies the prolonged field to L and reduces on shell; `zero` or
/// `probabilistically-zero` certifies a Lie symmetry.
sym::Verdict check_lie_symmetry(const VectorField& vf, const EquationModel& m,
                                const sym::ProbeOptions& opt = {});

}  // namespace nyz::jet
