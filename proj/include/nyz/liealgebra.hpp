#pragma once

#include "nyz/jetspace.hpp"

#include <optional>

/// Lie-algebraic layer: brackets of point vector fields, the generator
/// catalogs of the four models (loaded from versioned resource files),
/// exact decomposition against a catalog basis, commutation-table and
/// structure verification, and the projection homomorphism onto the
/// Burgers symmetry algebra.
namespace nyz::alg {

using jet::VectorField;
using sym::Expr;
using sym::Q;
using sym::VarId;

/// [X, Y] componentwise: X(Y^v) - Y(X^v), normalized, zero components
/// dropped. Throws std::invalid_argument when the base spaces differ.
VectorField lie_bracket(const VectorField& x, const VectorField& y);

/// One named generator. Fixed generators have `slot` empty; families carry
/// the name of the functional slot, which appears in the coefficient
/// expressions as an opaque function of the catalog's slot variable.
struct CatalogGenerator {
  std::string name;
  std::string slot;  // "" for fixed generators
  VectorField field;
};

/// Operand of a commutation-table row: generator name plus, for slotted
/// families, the formal slot symbol the row is written in.
struct TableRef {
  std::string gen;
  std::string formal;  // "" for fixed generators
};

/// One term of a table right-hand side: coeff * gen, the slotted families
/// instantiated at `arg` (an expression in the slot variable and the
/// left-hand formals).
struct TableTerm {
  Q coeff;
  std::string gen;
  std::optional<Expr> arg;
};

struct TableRow {
  TableRef a, b;
  std::vector<TableTerm> rhs;  // empty list encodes zero
};

struct AlgebraCatalog {
  std::string id;
  int version = 0;
  std::string space;                      // model id of the base space
  VarId slot_var = VarId::indep("z1");    // argument of the slot functions
  std::vector<CatalogGenerator> gens;
  std::vector<TableRow> table;

  const CatalogGenerator& gen(const std::string& name) const;

  /// Slot replaced by the opaque function `formal(slot_var)`; fixed
  /// generators are returned verbatim (formal must then be empty).
  VectorField instantiate(const std::string& name,
                          const std::string& formal) const;
  /// Slot replaced by a concrete expression in the slot variable.
  VectorField instantiate(const std::string& name, const Expr& arg) const;
};

/// Root directory holding algebras/<id>.alg; defaults to "data", or the
/// NYZ_DATA_DIR environment variable when set.
void set_data_dir(std::string dir);
const std::string& data_dir();

AlgebraCatalog load_catalog(const std::string& path);

/// Memoized lookup of the shipped catalogs: "a13", "a13check", "g",
/// "intermediate". Throws on unknown ids and malformed resources.
const AlgebraCatalog& catalog(const std::string& id);

/// Exact coordinates of a vector field in a catalog basis: rational
/// coefficients of the fixed generators plus the recovered argument of each
/// slotted family (linearity folds scalar factors into the argument).
struct Decomposition {
  std::map<std::string, Q> consts;
  std::map<std::string, Expr> slots;
};

/// Rebuild the vector field a decomposition denotes.
VectorField realize(const Decomposition& d, const AlgebraCatalog& cat);

/// Linear combination of catalog generators with symbolic coefficients,
/// e.g. "D1 + a*D2" or "K - c6*H + 1/2*c6^2*R[1]". Slotted families take
/// their argument in brackets: "R[alpha(z1 - c2)]".
VectorField parse_combo(const AlgebraCatalog& cat, const std::string& text);

/// Failure (no such decomposition, or X does not live on the catalog's base
/// space) is a value, not an error.
std::optional<Decomposition> match_to_basis(const VectorField& x,
                                            const AlgebraCatalog& cat);

struct CheckResult {
  std::string id;
  bool pass = false;
  std::string detail;  // mismatch description; empty on pass
};
using Report = std::vector<CheckResult>;
bool all_pass(const Report& r);

/// Brackets every unordered pair of catalog generators (slots kept as
/// opaque symbols), decomposes the result, and compares against the stored
/// table; pairs without a row must bracket to zero.
Report verify_commutation_table(const AlgebraCatalog& cat);

/// Structure of the reduced-equation algebra (catalog "a13"): the radical
/// and its derived series, the derived algebra, closure of the listed
/// megaideals under ad, and the essential + trivial decomposition.
Report verify_structure(const AlgebraCatalog& cat);

/// Projection of a reduced-equation symmetry onto the Burgers base space:
/// prolong to order two, keep the w[0,2] component with w[0,2] renamed to
/// the Burgers dependent variable. Expects a point field on "redEq13" whose
/// projection is again a point field; throws otherwise.
VectorField upsilon(const VectorField& x);

}  // namespace nyz::alg
