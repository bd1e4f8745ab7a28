#include "nyz/numerics.hpp"
#include "nyz/solutions.hpp"

#include <cmath>
#include <stdexcept>

namespace nyz::sol {

namespace {

const VarId kZ1 = VarId::indep("z1");
const VarId kZ2 = VarId::indep("z2");
const VarId kS = VarId::param("s");
const VarId kZeta = VarId::param("zeta");

Expr P(const std::string& s) { return sym::parse_expr(s); }

SolutionFamily closed_form(std::string name, std::string locus,
                           const std::string& h, const std::string& w,
                           Grid window,
                           std::function<bool(double, double)> singular) {
  SolutionFamily f;
  f.name = std::move(name);
  f.kind = "closed-form";
  f.locus = std::move(locus);
  f.h_expr = P(h);
  f.w_expr = P(w);
  f.window = window;
  f.singular = std::move(singular);
  return f;
}

SolutionFamily lambert(std::string name, std::string locus, int branch,
                       const std::string& arg, const std::string& h,
                       const std::string& w, Grid window,
                       std::function<bool(double, double)> singular) {
  SolutionFamily f;
  f.name = std::move(name);
  f.kind = "lambert";
  f.locus = std::move(locus);
  f.lambert_branch = branch;
  f.lambert_arg = P(arg);
  f.h_zeta = P(h);
  f.w_zeta = P(w);
  f.window = window;
  f.singular = std::move(singular);
  return f;
}

bool never(double, double) { return false; }

// General-parameter family of case 1.6 on the z1 > 0, s > 0 chart:
//   h = z1^(a-1) s,  s - s^q = z2 z1^(-a),  q = a/(a-1).
SolutionFamily make_16a(const Q& a) {
  if (a == Q(1, 3) || a == Q(1, 2) || a == 1)
    throw std::invalid_argument(
        "case-1.6-a: the closed form degenerates at a = " + sym::to_string(a));
  SolutionFamily f;
  f.name = "case-1.6-a";
  f.kind = "parametric";
  f.locus = "reduction case 1.6";
  f.a = a;
  const Q q = a / (a - 1);
  const Expr s = sym::evar(kS);
  const Expr z1 = sym::evar(kZ1);
  f.h_s = sym::pow(z1, a - 1) * s;
  f.constraint = s - sym::pow(s, q) - sym::evar(kZ2) * sym::pow(z1, -a);
  if (a == Q(2, 3)) {
    f.w_s = z1 * (sym::pow(s, Q(3)) / sym::num(6) -
                  sym::fn(sym::Fun::Ln, s) +
                  sym::num(Q(4, 3)) * sym::pow(s, Q(-3)));
  } else {
    const Q c1 = a * (4 * a - 3) / (2 * (3 * a - 2) * (2 * a - 1));
    const Q c2 = a * a / ((2 * a - 1) * (3 * a - 1));
    const Q e1 = (3 * a - 2) / (a - 1);
    const Q e2 = (3 * a - 1) / (a - 1);
    f.w_s = sym::pow(z1, 3 * a - 1) *
            (sym::pow(s, Q(3)) / sym::num(6) - sym::num(c1) * sym::pow(s, e1) +
             sym::num(c2) * sym::pow(s, e2));
  }
  f.s_lo = 1e-6;
  f.s_hi = 10.0;
  f.singular = [](double z1v, double) { return z1v < 1e-9; };
  f.window = a < 1 ? Grid{1.0, 2.0, 10, 1.0, 2.0, 10}
                   : Grid{1.0, 2.0, 10, -2.0, -1.0, 10};
  return f;
}

// General-parameter family of case 1.8 (a != 0):
//   h = z2 (s + z1 + a)/(z1^2+1), with s fixed by matching the invariant
//   e^{-a arctan z1} z2 / sqrt(z1^2+1) = e^{a arctan(s+a)} / sqrt((s+a)^2+1).
SolutionFamily make_18a(const Q& a) {
  if (a <= 0)
    throw std::invalid_argument("case-1.8-a needs a positive parameter");
  SolutionFamily f;
  f.name = "case-1.8-a";
  f.kind = "parametric";
  f.locus = "reduction case 1.8";
  f.a = a;
  const Expr s = sym::evar(kS);
  const Expr z1 = sym::evar(kZ1);
  const Expr z2 = sym::evar(kZ2);
  const Expr an = sym::num(a);
  const Expr sa = s + an;
  const Expr p2 = z1 * z1 + sym::num(1);
  f.h_s = z2 * (s + z1 + an) / p2;
  f.constraint =
      sym::fn(sym::Fun::Exp, an * sym::fn(sym::Fun::Arctan, sa)) /
          sym::pow(sa * sa + sym::num(1), Q(1, 2)) -
      sym::fn(sym::Fun::Exp, -an * sym::fn(sym::Fun::Arctan, z1)) * z2 /
          sym::pow(p2, Q(1, 2));
  const Q a2p1 = a * a + 1;
  const Expr bracket =
      z1 -
      (sym::num(3 * a2p1) * s * s + sym::num(2 * a2p1 * a2p1) -
       sym::num(4 * a) * s * s * s) /
          sym::num(2 * a * (9 * a * a + 1)) +
      sym::num((a * a - 1) / (2 * a));
  f.w_s = z2 * z2 * z2 / (sym::num(6) * p2) * bracket;
  f.s_lo = 0.0;
  f.s_hi = 1000.0;
  f.singular = [](double, double z2v) { return z2v < 1e-9; };
  f.window = Grid{0.0, 1.0, 10, 0.5, 1.5, 10};
  return f;
}

std::vector<SolutionFamily> build_catalog() {
  std::vector<SolutionFamily> out;
  out.push_back(closed_form("zero", "trivial solution", "0", "0",
                            Grid{0.0, 1.0, 10, 0.0, 1.0, 10}, never));
  out.push_back(closed_form(
      "case-1.3-plus", "reduction case 1.3",
      "sqrt(z1^2 - 2*z2) + z1",
      "1/15*(z1^2 - 2*z2)^(5/2) + 1/2*z1*z2^2",
      Grid{1.0, 2.0, 10, -2.0, -1.0, 10},
      [](double z1, double z2) { return z1 * z1 - 2 * z2 < 1e-9; }));
  out.push_back(closed_form(
      "case-1.3-minus", "reduction case 1.3",
      "-sqrt(z1^2 - 2*z2) + z1",
      "-1/15*(z1^2 - 2*z2)^(5/2) + 1/2*z1*z2^2",
      Grid{1.0, 2.0, 10, -2.0, -1.0, 10},
      [](double z1, double z2) { return z1 * z1 - 2 * z2 < 1e-9; }));
  out.push_back(lambert(
      "case-1.4-lambert-W0", "reduction case 1.4", 0, "z2/exp(z1)",
      "-z2/zeta", "-z2^3*(18*zeta^2 + 15*zeta + 4)/(108*zeta^3)",
      Grid{0.0, 1.0, 10, 0.5, 1.5, 10},
      [](double, double z2) { return std::abs(z2) < 1e-9; }));
  out.push_back(lambert(
      "case-1.4-lambert-Wm1", "reduction case 1.4", -1, "z2/exp(z1)",
      "-z2/zeta", "-z2^3*(18*zeta^2 + 15*zeta + 4)/(108*zeta^3)",
      Grid{1.0, 2.0, 10, -0.3, -0.05, 10},
      [](double, double z2) { return std::abs(z2) < 1e-9; }));
  out.push_back(lambert(
      "case-1.5-lambert-W0", "reduction case 1.5", 0, "z1/exp(z2)",
      "-zeta/z1", "-zeta*(2*zeta^2 + 9*zeta + 12)/(12*z1)",
      Grid{0.5, 1.5, 10, 0.0, 1.0, 10},
      [](double z1, double) { return std::abs(z1) < 1e-9; }));
  out.push_back(lambert(
      "case-1.5-lambert-Wm1", "reduction case 1.5", -1, "z1/exp(z2)",
      "-zeta/z1", "-zeta*(2*zeta^2 + 9*zeta + 12)/(12*z1)",
      Grid{-0.33, -0.05, 10, 0.0, 1.0, 10},
      [](double z1, double) { return std::abs(z1) < 1e-9; }));
  out.push_back(closed_form(
      "case-1.6-half", "reduction case 1.6, a = 1/2",
      "(z2 + sqrt(z2^2 + z1))/(2*z1)",
      "(z2^3 + (z2^2 + z1)^(3/2))/(12*z1) + z2/4*ln(z2 + sqrt(z2^2 + z1)) "
      "- 1/4*sqrt(z2^2 + z1)",
      Grid{0.5, 1.5, 10, -1.0, 1.0, 10},
      [](double z1, double z2) {
        return z1 < 1e-9 || z2 * z2 + z1 < 1e-9;
      }));
  out.push_back(closed_form(
      "case-1.6-two", "reduction case 1.6, a = 2",
      "2*z1 - 2*sqrt(z1^2 - z2)",
      "z1*z2^2 - 8/15*(z1^2 - z2)^(5/2)",
      Grid{1.0, 2.0, 10, -1.0, 0.5, 10},
      [](double z1, double z2) { return z1 * z1 - z2 < 1e-9; }));
  out.push_back(make_16a(Q(3, 4)));
  out.push_back(lambert(
      "case-1.7-lambert-W0", "reduction case 1.7", 0, "exp(z2/z1)/z1",
      "z2/z1 - zeta",
      "z2^3/(6*z1) - z1^2/2*(zeta^3/3 + 3/2*zeta^2 + 2*zeta)",
      Grid{0.5, 1.5, 10, -0.5, 0.5, 10},
      [](double z1, double) { return std::abs(z1) < 1e-9; }));
  out.push_back(lambert(
      "case-1.7-lambert-Wm1", "reduction case 1.7", -1, "exp(z2/z1)/z1",
      "z2/z1 - zeta",
      "z2^3/(6*z1) - z1^2/2*(zeta^3/3 + 3/2*zeta^2 + 2*zeta)",
      Grid{-8.0, -4.0, 10, -0.5, 0.5, 10},
      [](double z1, double) { return std::abs(z1) < 1e-9; }));
  out.push_back(closed_form(
      "case-1.8-zero", "reduction case 1.8, a = 0",
      "(z1*z2 + sqrt(z1^2 + 1 - z2^2))/(z1^2 + 1)",
      "z1*z2^3/(6*(z1^2 + 1)) + z2/2*arctan(z2/sqrt(z1^2 + 1 - z2^2)) "
      "+ 1/6*(2 + z2^2/(z1^2 + 1))*sqrt(z1^2 + 1 - z2^2)",
      Grid{0.0, 1.0, 10, -0.8, 0.8, 10},
      [](double z1, double z2) {
        return z1 * z1 + 1 - z2 * z2 < 1e-9;
      }));
  out.push_back(make_18a(Q(1)));
  return out;
}

double eval_xy(const Expr& e, double z1, double z2) {
  return sym::eval(e, {{{kZ1, z1}, {kZ2, z2}}, {}});
}

double lambert_at(const SolutionFamily& f, double z1, double z2) {
  const double arg = eval_xy(*f.lambert_arg, z1, z2);
  const double lo = -std::exp(-1.0);
  if (arg < lo)
    throw std::domain_error(f.name + ": argument " + std::to_string(arg) +
                            " below -1/e");
  if (f.lambert_branch == -1 && arg >= 0.0)
    throw std::domain_error(f.name + ": argument " + std::to_string(arg) +
                            " outside the lower branch domain");
  return num::lambert_w(arg, f.lambert_branch);
}

double solve_constraint(const SolutionFamily& f, double z1, double z2) {
  auto g = [&](double s) {
    return sym::eval(*f.constraint, {{{kS, s}, {kZ1, z1}, {kZ2, z2}}, {}});
  };
  const int n = f.s_cells;
  const double w = (f.s_hi - f.s_lo) / n;
  double lo = 0.0, hi = 0.0;
  int brackets = 0;
  double prev = g(f.s_lo);
  if (prev == 0.0) return f.s_lo;
  for (int i = 1; i <= n; ++i) {
    const double s = f.s_lo + i * w;
    const double cur = g(s);
    if (cur == 0.0) return s;
    if ((prev < 0) != (cur < 0)) {
      ++brackets;
      lo = s - w;
      hi = s;
    }
    prev = cur;
  }
  if (brackets == 0)
    throw std::domain_error(f.name + ": no root bracket on the scan range");
  if (brackets > 1)
    throw std::domain_error(f.name + ": multiple root brackets; refine the "
                            "scan range");
  return num::find_root(g, lo, hi, {1e-12, 200});
}

double eval_parametric(const SolutionFamily& f, const Expr& body, double z1,
                       double z2) {
  const double s = solve_constraint(f, z1, z2);
  return sym::eval(body, {{{kS, s}, {kZ1, z1}, {kZ2, z2}}, {}});
}

}  // namespace

const std::vector<SolutionFamily>& families() {
  static const std::vector<SolutionFamily> catalog = build_catalog();
  return catalog;
}

SolutionFamily family(const std::string& name, std::optional<Q> a) {
  for (const SolutionFamily& f : families()) {
    if (f.name != name) continue;
    if (!a) return f;
    if (name == "case-1.6-a") return make_16a(*a);
    if (name == "case-1.8-a") return make_18a(*a);
    throw std::invalid_argument(name + " takes no parameter");
  }
  throw std::invalid_argument("unknown solution family '" + name + "'");
}

SolutionFamily make_implicit_burgers(std::function<double(double)> h0,
                                     std::string name) {
  SolutionFamily f;
  f.name = std::move(name);
  f.kind = "implicit-burgers";
  f.locus = "general Burgers-level solution by characteristics";
  f.h0 = std::move(h0);
  f.singular = never;
  f.window = Grid{0.0, 1.0, 10, -1.0, 1.0, 10};
  return f;
}

double eval_h(const SolutionFamily& f, double z1, double z2) {
  if (f.singular && f.singular(z1, z2))
    throw std::domain_error(f.name + ": singular at (" + std::to_string(z1) +
                            ", " + std::to_string(z2) + ")");
  if (f.kind == "closed-form") return eval_xy(*f.h_expr, z1, z2);
  if (f.kind == "lambert") {
    const double zeta = lambert_at(f, z1, z2);
    return sym::eval(*f.h_zeta, {{{kZeta, zeta}, {kZ1, z1}, {kZ2, z2}}, {}});
  }
  if (f.kind == "parametric") return eval_parametric(f, *f.h_s, z1, z2);
  if (f.kind == "implicit-burgers") return implicit_burgers_eval(f.h0, z1, z2);
  throw std::logic_error(f.name + ": unknown kind '" + f.kind + "'");
}

double eval_w(const SolutionFamily& f, double z1, double z2) {
  if (f.singular && f.singular(z1, z2))
    throw std::domain_error(f.name + ": singular at (" + std::to_string(z1) +
                            ", " + std::to_string(z2) + ")");
  if (f.kind == "closed-form") return eval_xy(*f.w_expr, z1, z2);
  if (f.kind == "lambert") {
    const double zeta = lambert_at(f, z1, z2);
    return sym::eval(*f.w_zeta, {{{kZeta, zeta}, {kZ1, z1}, {kZ2, z2}}, {}});
  }
  if (f.kind == "parametric") return eval_parametric(f, *f.w_s, z1, z2);
  throw std::logic_error(f.name + ": no w form");
}

double implicit_burgers_eval(const std::function<double(double)>& h0,
                             double z1, double z2) {
  const num::MocResult r = num::moc_burgers(h0, z1, z2);
  if (!r.pre_shock)
    throw std::domain_error("characteristics cross at (" +
                            std::to_string(z1) + ", " + std::to_string(z2) +
                            ")");
  return r.value;
}

}  // namespace nyz::sol
