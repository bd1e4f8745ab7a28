#include "nyz/numerics.hpp"
#include "nyz/reductions.hpp"

#include <cmath>
#include <stdexcept>

namespace nyz::red {

namespace {

using sym::Q;

const VarId kT = VarId::indep("t");
const VarId kT0 = VarId::param("t0");

}  // namespace

DNAnsatz build_dN_ansatz(const Expr& rho, double t0) {
  for (const VarId& v : sym::variables(rho))
    if (!(v == kT))
      throw std::invalid_argument("time profile must depend on t alone, got " +
                                  v.str());
  if (sym::is_zero(rho) != sym::Verdict::Nonzero)
    throw std::invalid_argument("time profile vanishes identically");
  if (sym::is_zero(rho - sym::num(1)) != sym::Verdict::Nonzero)
    throw std::invalid_argument(
        "constant time profile 1 leaves the equation unreduced");

  DNAnsatz a;
  a.rho = sym::normalize(rho);
  a.t0 = t0;

  const Expr rho_t = sym::normalize(sym::diff(a.rho, kT));
  a.rho_of_t = [r = a.rho](double t) {
    return sym::eval(r, {{{kT, t}}, {}});
  };
  a.k_of_t = [r = a.rho, rt = rho_t](double t) {
    sym::EvalContext ctx{{{kT, t}}, {}};
    return sym::eval(rt, ctx) / (6.0 * sym::eval(r, ctx));
  };

  const Expr et = sym::fn(sym::Fun::Exp, sym::evar(kT));
  if (a.rho.is_num()) {
    // rho == c: the integrand is the constant 2 (1 - c^-3).
    const Q c = a.rho.value();
    const Q slope = Q(2) * (Q(1) - Q(1) / (c * c * c));
    a.z1_closed = sym::num(slope) * (sym::evar(kT) - sym::evar(kT0));
    const double s = sym::eval(sym::num(slope), {});
    a.z1_of_t = [s, t0](double t) { return s * (t - t0); };
  } else if (sym::equal_normalized(a.rho, et)) {
    // rho == e^t: 2 (t - t0) + 2/3 (e^{-3t} - e^{-3t0}).
    const Expr et0 = sym::fn(sym::Fun::Exp, sym::evar(kT0));
    a.z1_closed = sym::num(2) * (sym::evar(kT) - sym::evar(kT0)) +
                  sym::num(Q(2, 3)) *
                      (sym::pow(et, Q(-3)) - sym::pow(et0, Q(-3)));
    a.z1_of_t = [t0](double t) {
      return 2.0 * (t - t0) +
             (2.0 / 3.0) * (std::exp(-3.0 * t) - std::exp(-3.0 * t0));
    };
  } else {
    auto integrand = [r = a.rho](double s) {
      const double v = sym::eval(r, {{{kT, s}}, {}});
      return 2.0 * (1.0 - 1.0 / (v * v * v));
    };
    a.z1_of_t = [integrand, t0](double t) {
      if (t == t0) return 0.0;
      if (t > t0) return num::integrate_1d(integrand, t0, t);
      return -num::integrate_1d(integrand, t, t0);
    };
  }
  return a;
}

}  // namespace nyz::red
