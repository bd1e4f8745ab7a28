#include "nyz/liealgebra.hpp"

#include <set>
#include <stdexcept>

namespace nyz::alg {

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  if (x.space != y.space)
    throw std::invalid_argument("lie_bracket: fields live on different base spaces ('" +
                                x.space + "' vs '" + y.space + "')");
  std::set<VarId> coords;
  for (const auto& [v, e] : x.comp) coords.insert(v);
  for (const auto& [v, e] : y.comp) coords.insert(v);

  VectorField out;
  out.space = x.space;
  for (const VarId& v : coords) {
    Expr c = sym::normalize(x.apply(y.component(v)) - y.apply(x.component(v)));
    if (!c.is_zero_const()) out.comp[v] = c;
  }
  return out;
}

}  // namespace nyz::alg
