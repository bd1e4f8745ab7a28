#include "nyz/jetspace.hpp"

#include <mutex>
#include <stdexcept>

namespace nyz::jet {

using sym::parse_expr;

bool EquationModel::is_principal(const VarId& v) const {
  if (v.kind != VarId::Kind::Jet || v.name != dep) return false;
  if (v.index.size() != principal.index.size()) return false;
  for (std::size_t a = 0; a < v.index.size(); ++a)
    if (v.index[a] < principal.index[a]) return false;
  return true;
}

bool EquationModel::is_parametric(const VarId& v) const {
  return v.kind == VarId::Kind::Jet && v.name == dep && !is_principal(v);
}

int EquationModel::axis_of(const VarId& direction) const {
  for (std::size_t a = 0; a < indep.size(); ++a)
    if (indep[a] == direction) return static_cast<int>(a);
  return -1;
}

namespace {

EquationModel make(std::string id, std::vector<std::string> indep,
                   std::string dep, const std::string& L,
                   VarId principal, const std::string& rhs) {
  EquationModel m;
  m.id = std::move(id);
  for (auto& n : indep) m.indep.push_back(VarId::indep(n));
  m.dep = std::move(dep);
  m.L = parse_expr(L);
  m.principal = std::move(principal);
  m.rhs = parse_expr(rhs);
  return m;
}

const std::map<std::string, EquationModel>& registry() {
  static const std::map<std::string, EquationModel> r = [] {
    std::map<std::string, EquationModel> m;
    m["dN"] = make(
        "dN", {"t", "x", "y"}, "u",
        "u[1,1,1] - u[0,3,0]*u[0,1,1] - u[0,2,0]*u[0,2,1]"
        " - u[0,1,2]*u[0,0,2] - u[0,1,1]*u[0,0,3]",
        VarId::jet("u", {1, 1, 1}),
        "u[0,3,0]*u[0,1,1] + u[0,2,0]*u[0,2,1]"
        " + u[0,1,2]*u[0,0,2] + u[0,1,1]*u[0,0,3]");
    m["redEq13"] = make("redEq13", {"z1", "z2"}, "w",
                        "w[1,2] + w[0,2]*w[0,3]", VarId::jet("w", {0, 3}),
                        "-w[1,2]/w[0,2]");
    m["burgers"] = make("burgers", {"z1", "z2"}, "h", "h[1,0] + h*h[0,1]",
                        VarId::jet("h", {1, 0}), "-h[0,0]*h[0,1]");
    m["intermediate"] = make("intermediate", {"z1", "z2"}, "q",
                             "q[1,1] + q[0,1]*q[0,2]", VarId::jet("q", {0, 2}),
                             "-q[1,1]/q[0,1]");
    return m;
  }();
  return r;
}

}  // namespace

const EquationModel& model(const std::string& id) {
  const auto& r = registry();
  auto it = r.find(id);
  if (it == r.end()) throw std::invalid_argument("unknown model '" + id + "'");
  return it->second;
}

Expr VectorField::component(const VarId& v) const {
  auto it = comp.find(v);
  return it == comp.end() ? Expr() : it->second;
}

Expr VectorField::apply(const Expr& e) const {
  Expr out;
  for (const auto& [v, c] : comp) out = out + c * sym::diff(e, v);
  return sym::normalize(out);
}

std::vector<VarId> base_coords(const EquationModel& m) {
  std::vector<VarId> out = m.indep;
  out.push_back(dep0(m));
  return out;
}

VarId dep0(const EquationModel& m) {
  return VarId::jet(m.dep, std::vector<int>(m.indep.size(), 0));
}

}  // namespace nyz::jet
