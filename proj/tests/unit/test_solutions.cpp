#include "doctest.h"
#include "nyz/numerics.hpp"
#include "nyz/solutions.hpp"

#include <cmath>

using namespace nyz;
using sol::CompositeSpec;
using sol::Grid;
using sol::SolutionFamily;
using sol::compose_dN_solution;
using sol::eval_h;
using sol::eval_w;
using sol::families;
using sol::family;
using sym::Expr;
using sym::Q;
using sym::VarId;

static const bool data_dir_ready = (alg::set_data_dir(NYZ_DATA_DIR), true);

namespace {

bool approx(double a, double b, double tol) { return std::abs(a - b) < tol; }

}  // namespace

TEST_CASE("catalog lookup") {
  REQUIRE(families().size() == 14);
  CHECK(family("case-1.4-lambert-W0").kind == "lambert");
  CHECK(family("case-1.6-a").a == Q(3, 4));
  CHECK(family("case-1.8-a").a == Q(1));
  CHECK(family("case-1.6-a", Q(2)).window.z2_hi == -1.0);
  CHECK_THROWS_AS(family("case-1.9"), std::invalid_argument);
  CHECK_THROWS_AS(family("case-1.3-plus", Q(2)), std::invalid_argument);
  CHECK_THROWS_AS(family("case-1.6-a", Q(1)), std::invalid_argument);
  CHECK_THROWS_AS(family("case-1.6-a", Q(1, 2)), std::invalid_argument);
  CHECK_THROWS_AS(family("case-1.8-a", Q(0)), std::invalid_argument);
}

TEST_CASE("point values") {
  CHECK(approx(eval_h(family("case-1.6-half"), 1.0, 0.0), 0.5, 1e-14));
  CHECK(approx(eval_h(family("case-1.4-lambert-W0"), 0.0, 1.0),
               -1.7632228343518968, 1e-12));
  CHECK(approx(eval_h(family("case-1.8-zero"), 0.0, 0.0), 1.0, 1e-14));
  CHECK(approx(eval_w(family("case-1.3-plus"), 1.0, -1.0),
               1.5392304845413265, 1e-12));
  CHECK(eval_w(family("zero"), 0.37, -4.2) == 0.0);
  CHECK(approx(eval_w(family("case-1.7-lambert-W0"), 1.0, 0.0),
               -0.8387856737690392, 1e-12));
  CHECK(approx(eval_w(family("case-1.4-lambert-W0"), 0.0, 1.0),
               -0.9286986351155387, 1e-12));
  CHECK(approx(eval_h(family("case-1.5-lambert-W0"), 1.0, 1.0),
               -0.2784645427610738, 1e-12));
  CHECK(approx(eval_h(family("case-1.6-a"), 1.0, 1.0), 1.3802775690976141,
               1e-11));
  CHECK(approx(eval_w(family("case-1.6-a"), 1.0, 1.0), 0.6179193787687888,
               1e-11));
  CHECK(approx(eval_h(family("case-1.8-a"), 0.0, 1.0), 3.5026392722473525,
               1e-10));
  CHECK(approx(eval_w(family("case-1.8-a"), 0.0, 1.0), 0.1426577875238407,
               1e-10));
}

TEST_CASE("lambert families satisfy the defining identity") {
  const VarId z1v = VarId::indep("z1"), z2v = VarId::indep("z2");
  for (const SolutionFamily& f : families()) {
    if (f.kind != "lambert") continue;
    CAPTURE(f.name);
    const Grid& g = f.window;
    for (double z1 : {g.z1_lo, 0.5 * (g.z1_lo + g.z1_hi), g.z1_hi})
      for (double z2 : {g.z2_lo, 0.5 * (g.z2_lo + g.z2_hi), g.z2_hi}) {
        const double arg =
            sym::eval(*f.lambert_arg, {{{z1v, z1}, {z2v, z2}}, {}});
        const double zeta = num::lambert_w(arg, f.lambert_branch);
        CHECK(std::abs(zeta * std::exp(zeta) - arg) <=
              1e-12 * std::max(1.0, std::abs(arg)));
      }
  }
}

TEST_CASE("parametric roots satisfy their constraints") {
  const VarId sv = VarId::param("s");
  const VarId z1v = VarId::indep("z1"), z2v = VarId::indep("z2");

  const SolutionFamily f16 = family("case-1.6-a");
  const double h16 = eval_h(f16, 1.3, 1.7);
  const double s16 = h16 * std::pow(1.3, 0.25);  // h = z1^(a-1) s, a = 3/4
  CHECK(std::abs(sym::eval(*f16.constraint,
                           {{{sv, s16}, {z1v, 1.3}, {z2v, 1.7}}, {}})) <
        1e-10);

  const SolutionFamily f18 = family("case-1.8-a");
  const double h18 = eval_h(f18, 0.5, 1.0);
  const double s18 = h18 * 1.25 / 1.0 - 0.5 - 1.0;  // invert h = z2(s+z1+a)/(z1^2+1)
  CHECK(std::abs(sym::eval(*f18.constraint,
                           {{{sv, s18}, {z1v, 0.5}, {z2v, 1.0}}, {}})) <
        1e-10);
}

TEST_CASE("symbolic residuals") {
  for (const char* name : {"zero", "case-1.3-plus", "case-1.3-minus",
                           "case-1.6-half", "case-1.6-two", "case-1.8-zero"}) {
    CAPTURE(name);
    const SolutionFamily f = family(name);
    CHECK(sol::residual_symbolic(f, "redEq13") != sym::Verdict::Nonzero);
    CHECK(sol::residual_symbolic(f, "burgers") != sym::Verdict::Nonzero);
  }
  // Degenerate solution: every pure term of L vanishes on w = z1 z2.
  SolutionFamily lin = family("zero");
  lin.w_expr = sym::parse_expr("z1*z2");
  CHECK(sol::residual_symbolic(lin, "redEq13") != sym::Verdict::Nonzero);
  // Genuine non-solution.
  SolutionFamily bad = family("zero");
  bad.w_expr = sym::parse_expr("z1*z2^3");
  bad.h_expr = sym::parse_expr("z1*z2");
  CHECK(sol::residual_symbolic(bad, "redEq13") == sym::Verdict::Nonzero);
  CHECK(sol::residual_symbolic(bad, "burgers") == sym::Verdict::Nonzero);
  CHECK_THROWS_AS(
      sol::residual_symbolic(family("case-1.4-lambert-W0"), "redEq13"),
      std::invalid_argument);
}

TEST_CASE("fd residuals on the default windows") {
  CHECK(sol::residual_fd(family("case-1.4-lambert-W0"), "redEq13",
                         Grid{0.0, 1.0, 6, 0.5, 1.5, 6}) < 1e-6);
  CHECK(sol::residual_fd(family("case-1.4-lambert-W0"), "burgers",
                         Grid{0.0, 1.0, 6, 0.5, 1.5, 6}) < 1e-6);
  CHECK(sol::residual_fd(family("case-1.7-lambert-W0"), "redEq13",
                         Grid{1.0, 2.0, 10, -1.0, 1.0, 10}) < 1e-6);
  CHECK(sol::residual_fd(family("case-1.5-lambert-Wm1"), "redEq13",
                         family("case-1.5-lambert-Wm1").window) < 1e-6);
  CHECK(sol::residual_fd(family("case-1.6-a"), "redEq13",
                         Grid{1.0, 2.0, 4, 1.0, 2.0, 4}) < 1e-6);
  CHECK(sol::residual_fd(family("case-1.8-a"), "redEq13",
                         Grid{0.0, 1.0, 4, 0.5, 1.5, 4}) < 1e-6);
  CHECK(sol::residual_fd(family("case-1.8-a", Q(2)), "redEq13",
                         Grid{0.0, 1.0, 4, 0.5, 1.5, 4}) < 1e-6);
  CHECK(sol::residual_fd(family("case-1.6-a", Q(2)), "redEq13",
                         Grid{1.0, 2.0, 4, -2.0, -1.0, 4}) < 1e-6);
}

TEST_CASE("w and h forms are consistent") {
  struct Probe {
    const char* name;
    double z1, z2;
  };
  const Probe probes[] = {
      {"case-1.3-plus", 1.5, -1.5}, {"case-1.6-half", 1.0, 0.3},
      {"case-1.4-lambert-W0", 0.5, 1.0}, {"case-1.6-a", 1.5, 1.5},
      {"case-1.8-a", 0.5, 1.0}, {"case-1.7-lambert-Wm1", -6.0, 0.0},
  };
  for (const Probe& p : probes) {
    CAPTURE(p.name);
    const SolutionFamily f = family(p.name);
    auto w = [&](const std::vector<double>& v) {
      return eval_w(f, v[0], v[1]);
    };
    const double w22 = num::fd_partial(w, {p.z1, p.z2}, {0, 2}, 1e-2);
    CHECK(approx(w22, eval_h(f, p.z1, p.z2), 1e-5));
  }
}

TEST_CASE("the two halves of case 1.6 are related by the Burgers map") {
  const SolutionFamily half = family("case-1.6-half");
  const SolutionFamily two = family("case-1.6-two");
  for (double z1 : {0.6, 1.0, 1.4})
    for (double z2 : {-0.8, -0.2, 0.5, 1.0}) {
      const double lhs = eval_h(two, z2, -z1);
      const double rhs = -1.0 / eval_h(half, z1, z2);
      CHECK(approx(lhs, rhs, 1e-8));
    }
}

TEST_CASE("solutions by characteristics") {
  auto id = [](double xi) { return xi; };
  for (double z1 : {0.0, 0.5, 2.0})
    for (double z2 : {-1.0, 0.3, 1.0})
      CHECK(approx(sol::implicit_burgers_eval(id, z1, z2), z2 / (1.0 + z1),
                   1e-10));
  auto constant = [](double) { return 0.75; };
  CHECK(approx(sol::implicit_burgers_eval(constant, 3.0, -2.0), 0.75, 1e-12));

  // Restarting case 1.6-half from its z1 = 1/2 slice reproduces it.
  const SolutionFamily half = family("case-1.6-half");
  auto h0 = [&](double xi) { return eval_h(half, 0.5, xi); };
  for (double z1 : {0.8, 1.2, 2.0})
    for (double z2 : {-0.5, 0.0, 0.7})
      CHECK(approx(sol::implicit_burgers_eval(h0, z1 - 0.5, z2),
                   eval_h(half, z1, z2), 1e-8));

  // Crossing characteristics are refused.
  auto steep = [](double xi) { return -xi; };
  CHECK_THROWS_AS(sol::implicit_burgers_eval(steep, 2.0, 0.3),
                  std::domain_error);

  const SolutionFamily wrapped = sol::make_implicit_burgers(id);
  CHECK(wrapped.kind == "implicit-burgers");
  CHECK(approx(eval_h(wrapped, 1.0, 1.0), 0.5, 1e-10));
  CHECK_THROWS_AS(eval_w(wrapped, 1.0, 1.0), std::logic_error);
}

TEST_CASE("composites of the time ansatz") {
  const red::DNAnsatz rho2 = red::build_dN_ansatz(sym::parse_expr("2"));
  const red::DNAnsatz rho_t2 =
      red::build_dN_ansatz(sym::parse_expr("1 + t^2"));

  SUBCASE("zero source, general kind, nonconstant profile") {
    CompositeSpec spec;
    spec.kind = "general";
    spec.c3 = Q(1);  // c = (1 0; 1 1), det 1
    auto comp = compose_dN_solution(family("zero"), spec, rho_t2);
    const double t = 0.7, x = 0.3, y = -0.4;
    const double z1 = rho_t2.z1_of_t(t), rho = 1.0 + t * t;
    const double z2 = y / rho - x;
    const double expect =
        z2 * z2 * z2 / (6.0 * (z1 + 1.0)) -
        (2.0 * t / (6.0 * rho)) * y * y * y;
    CHECK(approx(comp.u(t, x, y), expect, 1e-13));
    CHECK(std::abs(sol::dn_residual_at(comp.u, t, x, y)) < 1e-5);
    CHECK(std::abs(sol::dn_residual_at(comp.u, 0.4, -0.2, 0.3)) < 1e-5);
  }

  SUBCASE("zero source, shift kind, constant profile") {
    CompositeSpec spec;
    spec.kind = "shift";
    auto comp = compose_dN_solution(family("zero"), spec, rho2);
    CHECK(comp.u(0.3, 0.7, -0.2) == 0.0);
  }

  SUBCASE("zero source, inversion kind") {
    CompositeSpec spec;
    spec.kind = "inversion";
    auto comp = compose_dN_solution(family("zero"), spec, rho2);
    CHECK(std::abs(sol::dn_residual_at(comp.u, 0.5, 0.1, 0.2)) < 1e-5);
    CHECK(comp.singular(0.0, 0.1, 0.2));  // z1(0) = 0
  }

  SUBCASE("lambert source, shift kind") {
    CompositeSpec spec;
    spec.kind = "shift";
    spec.c5 = Q(1);
    auto comp =
        compose_dN_solution(family("case-1.4-lambert-W0"), spec, rho2);
    CHECK(std::abs(sol::dn_residual_at(comp.u, 0.3, -0.5, 0.4)) < 1e-5);
  }

  SUBCASE("rejections") {
    CompositeSpec bad_det;
    bad_det.kind = "general";
    bad_det.c1 = Q(2);
    CHECK_THROWS_AS(compose_dN_solution(family("zero"), bad_det, rho2),
                    std::invalid_argument);
    CompositeSpec shift;
    shift.kind = "shift";
    CHECK_THROWS_AS(compose_dN_solution(family("zero"), shift, rho_t2),
                    std::invalid_argument);
    CompositeSpec typo;
    typo.kind = "mirror";
    CHECK_THROWS_AS(compose_dN_solution(family("zero"), typo, rho2),
                    std::invalid_argument);
  }
}

TEST_CASE("grid export") {
  const Grid g{1.0, 2.0, 3, -2.0, -1.0, 3};
  auto r1 = sol::export_family_grid(family("case-1.3-plus"), "redEq13", g,
                                    1e-6);
  auto r2 = sol::export_family_grid(family("case-1.3-plus"), "redEq13", g,
                                    1e-6);
  CHECK(r1.csv == r2.csv);
  CHECK(r1.manifest.dump() == r2.manifest.dump());
  CHECK(r1.csv.rfind("z1,z2,h,w,residual\n", 0) == 0);
  CHECK(r1.max_residual < 1e-6);
  CHECK(r1.manifest["rows"] == 9);
  CHECK(r1.manifest["singular_nodes"] == 0);
  CHECK(r1.manifest["family"] == "case-1.3-plus");

  // A window crossing the branch locus keeps coordinates, flags the rest.
  const Grid sing{0.0, 1.0, 3, 0.2, 1.0, 3};
  auto r3 = sol::export_family_grid(family("case-1.3-plus"), "redEq13", sing,
                                    1e-6);
  CHECK(int(r3.manifest["singular_nodes"]) > 0);
  CHECK(r3.csv.find("singular") != std::string::npos);

  auto comp = compose_dN_solution(family("zero"), CompositeSpec{},
                                  red::build_dN_ansatz(sym::parse_expr("2")));
  auto r4 = sol::export_composite_grid(comp, sol::Grid3{0.0, 1.0, 2, 0.0,
                                                        1.0, 2, 0.0, 1.0, 2},
                                       1e-5);
  CHECK(r4.csv.rfind("t,x,y,u,residual\n", 0) == 0);
  CHECK(r4.max_residual < 1e-5);
}
