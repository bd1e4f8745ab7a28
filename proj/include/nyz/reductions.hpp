#pragma once

#include "nyz/liealgebra.hpp"

#include <functional>
#include <optional>

/// One-dimensional symmetry reductions of the Burgers-level model: the
/// catalog of inequivalent one-parameter subalgebras with their invariant
/// ansatzes, the symbolic reduction identity, and the time-dependent ansatz
/// that lifts two-variable solutions to the three-variable model.
namespace nyz::red {

using sym::Expr;
using sym::VarId;
using jet::VectorField;

/// One reduction row: subalgebra generator, invariant ansatz h = A(z1, z2),
/// invariant variable omega, and the reduced ODE residual written in
/// (omega, phi(omega), phi'(omega)).
struct AnsatzRow {
  std::string id;    // "1.0" ... "1.8"
  std::string gen;   // generator combo over the Burgers-level catalog
  std::string lift;  // counterpart combo one level up
  Expr h;
  Expr omega;
  Expr reduced;
  std::optional<Expr> factor;  // table multiplier; derived by division when absent
  bool has_param = false;     // rows 1.6 and 1.8 carry the constant a
  std::optional<Expr> a;      // set when the parameter was instantiated
  bool negative_z1 = false;   // logarithmic rows: z1 < 0 chart
};

/// All nine rows in catalog order, parameter kept symbolic, z1 > 0 chart.
const std::vector<AnsatzRow>& table1();

/// Single row by id; `a` instantiates the parameter of rows 1.6 / 1.8, and
/// `negative_z1` switches the logarithmic rows to the z1 < 0 chart.
AnsatzRow table1_row(const std::string& id,
                     std::optional<Expr> a = std::nullopt,
                     bool negative_z1 = false);

/// Generator pair for a row: the Burgers-level subalgebra generator and its
/// counterpart acting on the (z1, z2, w) space.
struct SubalgebraSpec {
  std::string id;
  VectorField burgers_gen;
  VectorField lifted_gen;
};

/// Build the subalgebra pair for a row. `arg` is the constant a for rows
/// 1.6 (a >= 1/2) and 1.8 (a >= 0) or the functional parameter of row 1.0;
/// other rows reject it.
SubalgebraSpec subalgebra(const std::string& id,
                          std::optional<Expr> arg = std::nullopt);

/// Substitute the row's ansatz into the Burgers-level equation and divide
/// by the instantiated reduced residual. Returns the nonvanishing factor J
/// with substitution == J * reduced; throws std::runtime_error when the
/// quotient is not clean or vanishes.
Expr symbolic_reduce(const AnsatzRow& row);

/// Two checks: the prolonged generator annihilates omega, and it
/// annihilates h - A(z1, z2) on the ansatz surface.
alg::Report invariance_check(const AnsatzRow& row);

/// Time ansatz u = w(z1, y/rho - x) - rho_t/(6 rho) * y^3 with
/// z1(t) = 2 * antiderivative of (rho^3 - 1)/rho^3 vanishing at t0.
struct DNAnsatz {
  Expr rho;                    // function of t; nonvanishing, not == 1
  double t0 = 0.0;
  std::optional<Expr> z1_closed;          // set when the table applies
  std::function<double(double)> z1_of_t;  // closed form or quadrature
  std::function<double(double)> rho_of_t;
  std::function<double(double)> k_of_t;   // rho_t / (6 rho)
};

/// Validate admissibility (rho is a function of t alone, not identically 0
/// and not identically 1), use the closed antiderivative for constant and
/// exp(t) profiles, and fall back to adaptive quadrature (tolerance 1e-10).
DNAnsatz build_dN_ansatz(const Expr& rho, double t0 = 0.0);

}  // namespace nyz::red
