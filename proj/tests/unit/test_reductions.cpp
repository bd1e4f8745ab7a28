#include "doctest.h"
#include "nyz/numerics.hpp"
#include "nyz/reductions.hpp"

#include <cmath>

using namespace nyz;
using red::AnsatzRow;
using red::DNAnsatz;
using red::build_dN_ansatz;
using red::invariance_check;
using red::subalgebra;
using red::symbolic_reduce;
using red::table1;
using red::table1_row;
using sym::Expr;
using sym::Q;
using sym::VarId;

static const bool data_dir_ready = (alg::set_data_dir(NYZ_DATA_DIR), true);

namespace {

Expr P(const std::string& s) { return sym::parse_expr(s); }

bool eqn(const Expr& a, const std::string& b) {
  return sym::equal_normalized(a, P(b));
}

}  // namespace

TEST_CASE("catalog holds the nine rows") {
  const auto& rows = table1();
  REQUIRE(rows.size() == 9);
  const char* ids[] = {"1.0", "1.1", "1.2", "1.3", "1.4",
                       "1.5", "1.6", "1.7", "1.8"};
  for (size_t i = 0; i < 9; ++i) {
    CHECK(rows[i].id == ids[i]);
    CHECK(rows[i].has_param == (rows[i].id == "1.6" || rows[i].id == "1.8"));
  }
  CHECK(eqn(table1_row("1.3").omega, "z2 - 1/2*z1^2"));
  CHECK_THROWS_AS(table1_row("2.1"), std::invalid_argument);
}

TEST_CASE("each ansatz factors the equation through its reduced ODE") {
  // Expected factors: substitution == factor * reduced residual.
  const std::pair<const char*, const char*> expected[] = {
      {"1.0", "1"},
      {"1.1", "z2"},
      {"1.2", "1"},
      {"1.3", "1"},
      {"1.4", "exp(z1)"},
      {"1.5", "z1^(-2)"},
      {"1.6", "exp(a*ln(z1))*z1^(-2)"},
      {"1.7", "1/z1"},
      {"1.8", "exp(a*arctan(z1))*exp(1/2*ln(z1^2 + 1))^(-3)"},
  };
  for (const auto& [id, factor] : expected) {
    CAPTURE(id);
    const Expr j = symbolic_reduce(table1_row(id));
    CHECK(eqn(j, factor));
  }
}

TEST_CASE("each generator leaves its ansatz invariant") {
  for (const AnsatzRow& row : table1()) {
    CAPTURE(row.id);
    for (const auto& c : invariance_check(row)) {
      CAPTURE(c.id);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("instantiated parameter keeps the identities") {
  const AnsatzRow row = table1_row("1.6", P("2"));
  REQUIRE(row.a.has_value());
  CHECK(eqn(row.omega, "z2/exp(2*ln(z1))"));
  CHECK(eqn(symbolic_reduce(row), "exp(2*ln(z1))*z1^(-2)"));
  for (const auto& c : invariance_check(row)) CHECK(c.pass);

  const AnsatzRow zero = table1_row("1.8", P("0"));
  CHECK(eqn(zero.omega, "z2/exp(1/2*ln(z1^2 + 1))"));
  CHECK(eqn(symbolic_reduce(zero), "exp(1/2*ln(z1^2 + 1))^(-3)"));
  for (const auto& c : invariance_check(zero)) CHECK(c.pass);

  CHECK_THROWS_AS(table1_row("1.3", P("2")), std::invalid_argument);
}

TEST_CASE("negative-z1 chart of the logarithmic rows") {
  for (const char* id : {"1.5", "1.6", "1.7"}) {
    CAPTURE(id);
    const AnsatzRow row = table1_row(id, std::nullopt, true);
    CHECK(row.negative_z1);
    CHECK_FALSE(symbolic_reduce(row).is_zero_const());
    for (const auto& c : invariance_check(row)) CHECK(c.pass);
  }
  const AnsatzRow flipped = table1_row("1.5", std::nullopt, true);
  CHECK(eqn(flipped.omega, "z2 - ln(-z1)"));
  CHECK(eqn(symbolic_reduce(flipped), "z1^(-2)"));

  // The flipped chart evaluates where the plain one cannot.
  sym::EvalContext ctx;
  ctx.vars = {{VarId::indep("z1"), -2.0}, {VarId::indep("z2"), 1.0}};
  ctx.opaques["phi"] = sym::poly_instance({1.0, 1.0});
  const double expect = (1.0 + (1.0 - std::log(2.0))) / -2.0;
  CHECK(sym::eval(flipped.h, ctx) == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS(sym::eval(table1_row("1.5").h, ctx));
}

TEST_CASE("subalgebra pairs and parameter ranges") {
  const auto s16 = subalgebra("1.6", P("2"));
  CHECK(eqn(s16.burgers_gen.comp.at(VarId::indep("z1")), "z1"));
  CHECK(eqn(s16.burgers_gen.comp.at(VarId::indep("z2")), "2*z2"));
  CHECK(eqn(s16.burgers_gen.comp.at(VarId::jet("h", {0, 0})), "h"));
  CHECK(s16.lifted_gen.space == "redEq13");
  CHECK(eqn(s16.lifted_gen.comp.at(VarId::jet("w", {0, 0})), "5*w"));

  CHECK_NOTHROW(subalgebra("1.6", P("1/2")));
  CHECK_THROWS_AS(subalgebra("1.6", P("1/4")), std::invalid_argument);
  CHECK_NOTHROW(subalgebra("1.8", P("0")));
  CHECK_THROWS_AS(subalgebra("1.8", P("-1")), std::invalid_argument);
  CHECK_THROWS_AS(subalgebra("1.3", P("2")), std::invalid_argument);
  CHECK_NOTHROW(subalgebra("1.6"));  // symbolic parameter stays legal

  const auto s10 = subalgebra("1.0", P("z1^2"));
  CHECK(eqn(s10.burgers_gen.comp.at(VarId::indep("z2")), "1"));
  CHECK(eqn(s10.lifted_gen.comp.at(VarId::jet("w", {0, 0})), "z1^2*z2"));
  CHECK_THROWS_AS(subalgebra("1.0", P("z2")), std::invalid_argument);
}

TEST_CASE("time profile: constant") {
  const DNAnsatz a = build_dN_ansatz(P("2"), 1.0);
  REQUIRE(a.z1_closed.has_value());
  CHECK(eqn(*a.z1_closed, "7/4*(t - t0)"));
  CHECK(a.z1_of_t(3.0) == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(a.rho_of_t(5.0) == doctest::Approx(2.0));
  CHECK(a.k_of_t(0.3) == doctest::Approx(0.0));
}

TEST_CASE("time profile: exponential closed form matches quadrature") {
  const DNAnsatz a = build_dN_ansatz(P("exp(t)"), 0.25);
  REQUIRE(a.z1_closed.has_value());
  const double t = 1.7;
  const double closed = 2.0 * (t - 0.25) + (2.0 / 3.0) * (std::exp(-3.0 * t) -
                                                          std::exp(-0.75));
  CHECK(a.z1_of_t(t) == doctest::Approx(closed).epsilon(1e-12));
  const double quad = num::integrate_1d(
      [](double s) { return 2.0 * (1.0 - std::exp(-3.0 * s)); }, 0.25, t);
  CHECK(a.z1_of_t(t) == doctest::Approx(quad).epsilon(1e-8));
}

TEST_CASE("time profile: quadrature fallback") {
  const DNAnsatz a = build_dN_ansatz(P("1 + t^2"), 0.5);
  CHECK(a.z1_of_t(0.5) == 0.0);
  CHECK_FALSE(a.z1_closed.has_value());

  // d z1 / dt == 2 (1 - rho^-3) by construction.
  const double t = 0.8, d = 1e-4;
  const double fd = (a.z1_of_t(t + d) - a.z1_of_t(t - d)) / (2.0 * d);
  const double rho = 1.0 + t * t;
  CHECK(fd == doctest::Approx(2.0 * (1.0 - std::pow(rho, -3.0))).epsilon(1e-7));

  // Additivity across subintervals, and symmetry below t0.
  const double left = a.z1_of_t(0.2);
  const double inc = num::integrate_1d(
      [](double s) {
        const double r = 1.0 + s * s;
        return 2.0 * (1.0 - 1.0 / (r * r * r));
      },
      0.2, 0.5);
  CHECK(left + inc == doctest::Approx(0.0).epsilon(1e-10));

  CHECK(a.k_of_t(2.0) == doctest::Approx(2.0 / 15.0).epsilon(1e-12));
}

TEST_CASE("time profile: inadmissible inputs") {
  CHECK_THROWS_AS(build_dN_ansatz(P("1")), std::invalid_argument);
  CHECK_THROWS_AS(build_dN_ansatz(P("0")), std::invalid_argument);
  CHECK_THROWS_AS(build_dN_ansatz(P("exp(x)")), std::invalid_argument);
  CHECK_THROWS_AS(build_dN_ansatz(P("c*t")), std::invalid_argument);
}

namespace {

// Left-hand side of the three-variable model by finite differences.
double dn_residual_fd(const std::function<double(double, double, double)>& u,
                      double t, double x, double y) {
  auto f = [&](const std::vector<double>& p) { return u(p[0], p[1], p[2]); };
  auto part = [&](std::vector<int> o) {
    return num::fd_partial(f, {t, x, y}, o, 1e-2);
  };
  return part({1, 1, 1}) - part({0, 3, 0}) * part({0, 1, 1}) -
         part({0, 2, 0}) * part({0, 2, 1}) -
         part({0, 1, 2}) * part({0, 0, 2}) -
         part({0, 1, 1}) * part({0, 0, 3});
}

struct Poly2 {
  // w = z1^2 z2 + z1 z2^3 / 6 + z2^2
  static double w(double z1, double z2) {
    return z1 * z1 * z2 + z1 * z2 * z2 * z2 / 6.0 + z2 * z2;
  }
  static double w122(double, double z2) { return z2; }
  static double w22(double z1, double z2) { return z1 * z2 + 2.0; }
  static double w222(double z1, double) { return z1; }
};

}  // namespace

TEST_CASE("time ansatz maps the reduced equation into the full one") {
  // u = w(z1(t), y/rho - x) - rho_t/(6 rho) y^3 turns the left-hand side
  // into J(t) * (w_122 + w_22 w_222) with J = -2 (1 - rho^-3) / rho.
  auto run = [&](const DNAnsatz& a, double t, double x, double y, double tol) {
    auto u = [&](double tt, double xx, double yy) {
      const double rho = a.rho_of_t(tt);
      return Poly2::w(a.z1_of_t(tt), yy / rho - xx) -
             a.k_of_t(tt) * yy * yy * yy;
    };
    const double rho = a.rho_of_t(t);
    const double jt = -2.0 * (1.0 - std::pow(rho, -3.0)) / rho;
    const double z1 = a.z1_of_t(t), z2 = y / rho - x;
    const double reduced =
        Poly2::w122(z1, z2) + Poly2::w22(z1, z2) * Poly2::w222(z1, z2);
    const double got = dn_residual_fd(u, t, x, y);
    CHECK(got == doctest::Approx(jt * reduced).epsilon(tol));
  };
  run(build_dN_ansatz(P("2")), 0.6, 0.3, -0.4, 1e-8);
  run(build_dN_ansatz(P("1 + t^2")), 0.7, 0.3, -0.4, 1e-6);
  run(build_dN_ansatz(P("exp(t)"), 0.1), 0.5, -0.2, 0.4, 1e-6);
}
