#include "nyz/jetspace.hpp"

#include <mutex>
#include <stdexcept>

namespace nyz::jet {

using sym::diff;
using sym::evar;
using sym::normalize;
using sym::substitute;
using sym::variables;

Expr total_derivative(const Expr& e, const VarId& direction,
                      const EquationModel& m) {
  int axis = m.axis_of(direction);
  if (axis < 0)
    throw std::invalid_argument("total_derivative: '" + direction.str() +
                                "' is not an independent variable of " + m.id);
  Expr out = diff(e, direction);
  for (const VarId& v : variables(e)) {
    if (v.kind != VarId::Kind::Jet) continue;
    if (v.name != m.dep)
      throw std::invalid_argument("total_derivative: '" + v.str() +
                                  "' is not a plain jet coordinate of " +
                                  m.id);
    VarId up = v;
    up.index[axis] += 1;
    out = out + evar(up) * diff(e, v);
  }
  return normalize(out);
}

namespace {

struct Reducer {
  const EquationModel& m;
  std::map<VarId, Expr>& memo;

  Expr coord(const VarId& v) {
    auto it = memo.find(v);
    if (it != memo.end()) return it->second;
    Expr r;
    if (v == m.principal) {
      r = normalize(m.rhs);
    } else {
      int axis = -1;
      for (std::size_t a = 0; a < v.index.size(); ++a)
        if (v.index[a] > m.principal.index[a]) {
          axis = static_cast<int>(a);
          break;
        }
      if (axis < 0)
        throw std::logic_error("on_shell_reduce: no descent axis for " +
                               v.str());
      VarId down = v;
      down.index[axis] -= 1;
      r = expr(total_derivative(coord(down), m.indep[axis], m));
    }
    memo.emplace(v, r);
    return r;
  }

  Expr expr(const Expr& e) {
    std::map<VarId, Expr> subs;
    for (const VarId& v : variables(e))
      if (m.is_principal(v)) subs.emplace(v, coord(v));
    if (subs.empty()) return normalize(e);
    return expr(substitute(e, subs));
  }
};

}  // namespace

Expr on_shell_reduce(const Expr& e, const EquationModel& m) {
  static std::map<std::string, std::map<VarId, Expr>> memo;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  Reducer red{m, memo[m.id]};
  return red.expr(e);
}

}  // namespace nyz::jet
