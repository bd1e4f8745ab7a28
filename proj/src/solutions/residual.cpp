#include "nyz/numerics.hpp"
#include "nyz/solutions.hpp"

#include <cmath>
#include <stdexcept>

namespace nyz::sol {

namespace {

const VarId kZ1 = VarId::indep("z1");
const VarId kZ2 = VarId::indep("z2");

const Expr* model_form(const SolutionFamily& f, const jet::EquationModel& m) {
  const std::optional<Expr>& e = (m.dep == "h") ? f.h_expr : f.w_expr;
  return e ? &*e : nullptr;
}

// L at one node, jets of the callable by central differences of order 4.
double residual_node(const jet::EquationModel& m,
                     const std::function<double(double, double)>& F,
                     double z1, double z2, double step) {
  auto f = [&](const std::vector<double>& p) { return F(p[0], p[1]); };
  std::map<VarId, double> vals{{m.indep[0], z1}, {m.indep[1], z2}};
  for (const VarId& v : sym::variables(m.L))
    if (v.kind == VarId::Kind::Jet)
      vals[v] = num::fd_partial(f, {z1, z2}, v.index, step);
  return sym::eval(m.L, {vals, {}});
}

}  // namespace

sym::Verdict residual_symbolic(const SolutionFamily& f,
                               const std::string& model_id) {
  const jet::EquationModel& m = jet::model(model_id);
  const Expr* src = model_form(f, m);
  if (!src)
    throw std::invalid_argument(f.name + ": no closed " + m.dep +
                                " expression to substitute");
  std::map<VarId, Expr> jets;
  for (const VarId& v : sym::variables(m.L)) {
    if (v.kind != VarId::Kind::Jet) continue;
    Expr d = *src;
    for (int k = 0; k < v.index[0]; ++k) d = sym::diff(d, kZ1);
    for (int l = 0; l < v.index[1]; ++l) d = sym::diff(d, kZ2);
    jets[v] = d;
  }
  return sym::is_zero(sym::normalize(sym::substitute(m.L, jets)));
}

double residual_fd(const SolutionFamily& f, const std::string& model_id,
                   const Grid& g, double step) {
  const jet::EquationModel& m = jet::model(model_id);
  if (g.n1 < 1 || g.n2 < 1 || g.z1_hi < g.z1_lo || g.z2_hi < g.z2_lo)
    throw std::invalid_argument("invalid grid");
  std::function<double(double, double)> F;
  if (m.dep == "h")
    F = [&f](double a, double b) { return eval_h(f, a, b); };
  else
    F = [&f](double a, double b) { return eval_w(f, a, b); };
  double worst = 0.0;
  for (int i = 0; i < g.n1; ++i) {
    const double z1 =
        g.n1 == 1 ? g.z1_lo
                  : g.z1_lo + i * (g.z1_hi - g.z1_lo) / (g.n1 - 1);
    for (int j = 0; j < g.n2; ++j) {
      const double z2 =
          g.n2 == 1 ? g.z2_lo
                    : g.z2_lo + j * (g.z2_hi - g.z2_lo) / (g.n2 - 1);
      const double r1 = residual_node(m, F, z1, z2, step);
      const double r2 = residual_node(m, F, z1, z2, step / 2);
      worst = std::max(worst, std::abs((16.0 * r2 - r1) / 15.0));
    }
  }
  return worst;
}

double dn_residual_at(const std::function<double(double, double, double)>& u,
                      double t, double x, double y, double step) {
  auto at = [&](double h) {
    auto f = [&](const std::vector<double>& p) { return u(p[0], p[1], p[2]); };
    auto part = [&](std::vector<int> o) {
      return num::fd_partial(f, {t, x, y}, std::move(o), h);
    };
    return part({1, 1, 1}) - part({0, 3, 0}) * part({0, 1, 1}) -
           part({0, 2, 0}) * part({0, 2, 1}) -
           part({0, 1, 2}) * part({0, 0, 2}) -
           part({0, 1, 1}) * part({0, 0, 3});
  };
  const double r1 = at(step), r2 = at(step / 2);
  return (16.0 * r2 - r1) / 15.0;
}

}  // namespace nyz::sol
