#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

/// Immutable symbolic expression trees over jet coordinates, exact rationals,
/// named special functions and opaque parameter functions.
namespace nyz::sym {

using Q = boost::multiprecision::cpp_rational;

double to_double(const Q& q);
std::string to_string(const Q& q);

/// Variable identity: an independent base variable, a jet coordinate
/// (dependent-variable name plus a multi-index of derivative counts), or a
/// free scalar parameter.
struct VarId {
  enum class Kind { Indep, Jet, Param };
  Kind kind = Kind::Param;
  std::string name;
  std::vector<int> index;  // Jet only; entries >= 0

  static VarId indep(std::string n) { return {Kind::Indep, std::move(n), {}}; }
  static VarId jet(std::string n, std::vector<int> ix) {
    return {Kind::Jet, std::move(n), std::move(ix)};
  }
  static VarId param(std::string n) { return {Kind::Param, std::move(n), {}}; }

  bool operator==(const VarId& o) const {
    return kind == o.kind && name == o.name && index == o.index;
  }
  bool operator<(const VarId& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (name != o.name) return name < o.name;
    return index < o.index;
  }
  std::string str() const;  // printable form, e.g. "z1", "w[1,2]", "a"
};

enum class Fun {
  Exp,
  Ln,
  Abs,
  Sign,
  Sin,
  Cos,
  Arctan,
  LambertW0,
  LambertWm1,
};

const char* fun_name(Fun f);

class Expr;
using ExprList = std::vector<Expr>;

struct Node {
  enum class Kind { Num, Var, Add, Mul, Pow, Fn, Opq };
  Kind kind;
  Q value;            // Num; Pow exponent
  VarId var;          // Var
  ExprList kids;      // Add/Mul children; Pow base; Fn/Opq argument
  Fun fn = Fun::Exp;  // Fn
  std::string opq_name;  // Opq
  int opq_order = 0;     // Opq derivative order
};

/// Value-semantic handle to an immutable expression node.
class Expr {
 public:
  using Kind = Node::Kind;

  Expr();  // zero constant
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  Kind kind() const { return node_->kind; }
  const Q& value() const { return node_->value; }
  const VarId& var() const { return node_->var; }
  const ExprList& kids() const { return node_->kids; }
  const Expr& base() const { return node_->kids[0]; }
  const Q& expo() const { return node_->value; }
  Fun fn() const { return node_->fn; }
  const std::string& opq_name() const { return node_->opq_name; }
  int opq_order() const { return node_->opq_order; }
  const Expr& arg() const { return node_->kids[0]; }

  bool is_num() const { return kind() == Kind::Num; }
  bool is_zero_const() const { return is_num() && value() == 0; }
  bool is_one_const() const { return is_num() && value() == 1; }

  const Node* raw() const { return node_.get(); }

 private:
  std::shared_ptr<const Node> node_;
};

// Constructors (apply light structural folds: flattening, constant folding,
// neutral-element removal; full canonicalization lives in normalize()).
Expr num(Q q);
Expr num(long long n, long long d = 1);
Expr evar(VarId v);
Expr add(ExprList kids);
Expr mul(ExprList kids);
Expr pow(Expr base, Q expo);
Expr fn(Fun f, Expr arg);
Expr opq(std::string name, int order, Expr arg);

inline Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
inline Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
inline Expr operator-(const Expr& a) { return mul({num(-1), a}); }
inline Expr operator-(const Expr& a, const Expr& b) { return add({a, -b}); }
inline Expr operator/(const Expr& a, const Expr& b) {
  return mul({a, pow(b, Q(-1))});
}

/// Structural equality (same tree shape and payloads).
bool equal(const Expr& a, const Expr& b);

/// Render in the published grammar; parse_expr(print(e)) round-trips.
std::string print(const Expr& e);

}  // namespace nyz::sym
