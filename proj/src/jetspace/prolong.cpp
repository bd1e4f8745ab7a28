#include "nyz/jetspace.hpp"

#include <stdexcept>

namespace nyz::jet {

using sym::diff;
using sym::evar;
using sym::normalize;
using sym::variables;

namespace {

void enumerate_indices(int axes, int order, std::vector<int>& cur, int axis,
                       int used, std::vector<std::vector<int>>& out) {
  if (axis == axes) {
    if (used >= 1) out.push_back(cur);
    return;
  }
  for (int k = 0; used + k <= order; ++k) {
    cur[axis] = k;
    enumerate_indices(axes, order, cur, axis + 1, used + k, out);
  }
  cur[axis] = 0;
}

}  // namespace

VectorField prolong(const VectorField& vf, int order, const EquationModel& m) {
  if (order < 0) throw std::invalid_argument("prolong: negative order");
  const int axes = static_cast<int>(m.indep.size());
  const VarId u0 = dep0(m);

  // Characteristic Q = eta - xi^i u_i.
  Expr q = vf.component(u0);
  for (int a = 0; a < axes; ++a) {
    std::vector<int> e1(axes, 0);
    e1[a] = 1;
    q = q - vf.component(m.indep[a]) * evar(VarId::jet(m.dep, e1));
  }

  VectorField out = vf;
  std::vector<std::vector<int>> idx;
  std::vector<int> cur(axes, 0);
  enumerate_indices(axes, order, cur, 0, 0, idx);
  for (const auto& J : idx) {
    Expr dq = q;
    for (int a = 0; a < axes; ++a)
      for (int k = 0; k < J[a]; ++k) dq = total_derivative(dq, m.indep[a], m);
    for (int a = 0; a < axes; ++a) {
      std::vector<int> up = J;
      up[a] += 1;
      dq = dq + vf.component(m.indep[a]) * evar(VarId::jet(m.dep, up));
    }
    Expr c = normalize(dq);
    if (!c.is_zero_const()) out.comp[VarId::jet(m.dep, J)] = c;
  }
  return out;
}

sym::Verdict check_lie_symmetry(const VectorField& vf, const EquationModel& m,
                                const sym::ProbeOptions& opt) {
  int order = 0;
  for (const VarId& v : variables(m.L))
    if (v.kind == VarId::Kind::Jet) {
      int s = 0;
      for (int k : v.index) s += k;
      order = std::max(order, s);
    }
  VectorField pr = prolong(vf, order, m);
  Expr applied = pr.apply(m.L);
  return sym::is_zero(on_shell_reduce(applied, m), opt);
}

}  // namespace nyz::jet
