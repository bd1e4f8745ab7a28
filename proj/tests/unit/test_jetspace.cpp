#include "nyz/jetspace.hpp"

#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"

using namespace nyz;
using jet::Chart;
using jet::EquationModel;
using jet::VectorField;
using sym::Expr;
using sym::VarId;
using sym::Verdict;

namespace {

Expr P(const std::string& s) { return sym::parse_expr(s); }

bool eqn(const Expr& a, const std::string& b) {
  return sym::equal_normalized(a, P(b));
}

bool defined(const Expr& e) {
  try {
    sym::normalize(e);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

VarId jv(const char* name, std::vector<int> ix) {
  return VarId::jet(name, std::move(ix));
}

VarId iv(const char* name) { return VarId::indep(name); }

VectorField mkvf(std::string space,
                 std::initializer_list<std::pair<const char*, const char*>>
                     comps) {
  VectorField out;
  out.space = std::move(space);
  for (const auto& [v, s] : comps) out.comp.emplace(sym::parse_expr(v).var(), P(s));
  return out;
}

template <class F>
std::string thrown_message(F&& f) {
  try {
    f();
  } catch (const std::exception& ex) {
    return ex.what();
  }
  return {};
}

}  // namespace

TEST_CASE("model registry and principal/parametric split") {
  const EquationModel& r = jet::model("redEq13");
  CHECK(r.indep.size() == 2);
  CHECK(r.indep[0] == iv("z1"));
  CHECK(r.indep[1] == iv("z2"));
  CHECK(r.dep == "w");
  CHECK(r.principal == jv("w", {0, 3}));
  CHECK(eqn(r.L, "w[1,2] + w[0,2]*w[0,3]"));
  CHECK(eqn(r.rhs, "-w[1,2]/w[0,2]"));
  CHECK(r.is_principal(jv("w", {0, 3})));
  CHECK(r.is_principal(jv("w", {1, 3})));
  CHECK(r.is_principal(jv("w", {0, 4})));
  CHECK(!r.is_principal(jv("w", {0, 2})));
  CHECK(!r.is_principal(jv("w", {1, 2})));
  CHECK(!r.is_principal(jv("w", {5, 2})));
  CHECK(r.is_parametric(jv("w", {5, 2})));
  CHECK(!r.is_parametric(jv("h", {0, 0})));
  CHECK(r.axis_of(iv("z1")) == 0);
  CHECK(r.axis_of(iv("z2")) == 1);
  CHECK(r.axis_of(iv("t")) == -1);
  CHECK(jet::dep0(r) == jv("w", {0, 0}));
  CHECK(jet::base_coords(r) ==
        std::vector<VarId>{iv("z1"), iv("z2"), jv("w", {0, 0})});

  const EquationModel& b = jet::model("burgers");
  CHECK(b.principal == jv("h", {1, 0}));
  CHECK(eqn(b.L, "h[1,0] + h[0,0]*h[0,1]"));
  CHECK(b.is_principal(jv("h", {1, 1})));
  CHECK(!b.is_principal(jv("h", {0, 5})));

  const EquationModel& d = jet::model("dN");
  CHECK(d.indep == std::vector<VarId>{iv("t"), iv("x"), iv("y")});
  CHECK(d.principal == jv("u", {1, 1, 1}));
  CHECK(eqn(d.L,
            "u[1,1,1] - u[0,3,0]*u[0,1,1] - u[0,2,0]*u[0,2,1]"
            " - u[0,1,2]*u[0,0,2] - u[0,1,1]*u[0,0,3]"));
  CHECK(d.is_principal(jv("u", {2, 1, 1})));
  CHECK(!d.is_principal(jv("u", {0, 3, 0})));

  const EquationModel& q = jet::model("intermediate");
  CHECK(q.principal == jv("q", {0, 2}));
  CHECK(eqn(q.L, "q[1,1] + q[0,1]*q[0,2]"));
  CHECK(q.is_principal(jv("q", {1, 2})));
  CHECK(!q.is_principal(jv("q", {2, 1})));

  CHECK_THROWS_AS(jet::model("nope"), std::invalid_argument);
}

TEST_CASE("free total derivatives") {
  const EquationModel& m = jet::model("redEq13");
  CHECK(eqn(jet::total_derivative(P("w[0,1]"), iv("z2"), m), "w[0,2]"));
  CHECK(jet::total_derivative(P("z2"), iv("z1"), m).is_zero_const());
  CHECK(eqn(jet::total_derivative(P("z1"), iv("z1"), m), "1"));

  // First integral of the defining expression: D2 recovers it exactly.
  Expr I1 = P("w[1,1] + 1/2*w[0,2]^2");
  CHECK(sym::equal_normalized(jet::total_derivative(I1, iv("z2"), m), m.L));

  // Leibniz + chain rule through an opaque coefficient.
  CHECK(eqn(jet::total_derivative(P("alpha(z1)*w[0,0]"), iv("z1"), m),
            "alpha'(z1)*w[0,0] + alpha(z1)*w[1,0]"));

  CHECK_THROWS_AS(jet::total_derivative(P("h[0,0]"), iv("z1"), m),
                  std::invalid_argument);
  CHECK_THROWS_AS(jet::total_derivative(P("w[0,0]"), iv("t"), m),
                  std::invalid_argument);
}

TEST_CASE("on-shell reduction") {
  const EquationModel& r = jet::model("redEq13");
  CHECK(jet::on_shell_reduce(r.L, r).is_zero_const());
  CHECK(jet::on_shell_reduce(jet::model("burgers").L, jet::model("burgers"))
            .is_zero_const());
  CHECK(jet::on_shell_reduce(jet::model("intermediate").L,
                             jet::model("intermediate"))
            .is_zero_const());
  CHECK(jet::on_shell_reduce(jet::model("dN").L, jet::model("dN"))
            .is_zero_const());

  CHECK(eqn(jet::on_shell_reduce(P("z1*z2"), r), "z1*z2"));
  CHECK(eqn(jet::on_shell_reduce(P("w[0,3]"), r), "-w[1,2]/w[0,2]"));
  CHECK(eqn(jet::on_shell_reduce(P("w[1,3]"), r),
            "(w[1,2]^2 - w[2,2]*w[0,2])/w[0,2]^2"));
  CHECK(eqn(jet::on_shell_reduce(P("w[0,4]"), r),
            "(w[2,2]*w[0,2] - 2*w[1,2]^2)/w[0,2]^3"));
  CHECK(eqn(jet::on_shell_reduce(P("exp(w[0,3])"), r),
            "exp(-w[1,2]/w[0,2])"));

  const EquationModel& b = jet::model("burgers");
  CHECK(eqn(jet::on_shell_reduce(P("h[1,1]"), b),
            "-h[0,1]^2 - h[0,0]*h[0,2]"));

  // Reduction maps the differential ideal of L to zero.
  Expr dL = jet::total_derivative(r.L, iv("z1"), r);
  CHECK(jet::on_shell_reduce(dL, r).is_zero_const());
  Expr ddL = jet::total_derivative(dL, iv("z2"), r);
  CHECK(jet::on_shell_reduce(ddL, r).is_zero_const());
}

TEST_CASE("restricted derivatives in the plain chart") {
  const EquationModel& r = jet::model("redEq13");
  const VarId z1 = iv("z1"), z2 = iv("z2");

  CHECK(jet::hatted_D(P("w[1,1] + 1/2*w[0,2]^2"), z2, r).is_zero_const());
  CHECK(eqn(jet::hatted_D(P("zeta[1,0]"), z1, r), "zeta[1,1]"));
  CHECK(jet::hatted_D(P("zeta[1,0]"), z2, r).is_zero_const());
  CHECK(eqn(jet::hatted_D(P("zeta[2,3]"), z1, r), "zeta[2,4]"));
  CHECK(eqn(jet::hatted_D(P("z1"), z1, r), "1"));
  CHECK(jet::hatted_D(P("z1"), z2, r).is_zero_const());
  CHECK(eqn(jet::hatted_D(P("w[0,2]"), z2, r), "-w[1,2]/w[0,2]"));
  // The z2-derivative of the top parametric row equals the reduced
  // principal chain, matching on_shell_reduce of the raised index.
  CHECK(eqn(jet::hatted_D(P("w[1,2]"), z2, r),
            "(w[1,2]^2 - w[2,2]*w[0,2])/w[0,2]^2"));
  CHECK(eqn(jet::hatted_D(P("w[1,2]"), z1, r), "w[2,2]"));
  CHECK(eqn(jet::hatted_D(P("w[0,1]"), z2, r), "w[0,2]"));

  // Closed form of the lowest theta symbol, differentiated in the plain
  // chart.
  CHECK(eqn(jet::hatted_D(P("z2 - w[0,2]*z1"), z2, r),
            "1 + z1*w[1,2]/w[0,2]"));

  const EquationModel& q = jet::model("intermediate");
  CHECK(jet::hatted_D(P("q[1,0] + 1/2*q[0,1]^2"), z2, q).is_zero_const());
  CHECK(eqn(jet::hatted_D(P("q[0,1]"), z2, q), "-q[1,1]/q[0,1]"));
  CHECK(eqn(jet::hatted_D(P("zeta[1,2]"), z1, q), "zeta[1,3]"));
}

TEST_CASE("restricted derivatives in the theta chart") {
  const EquationModel& r = jet::model("redEq13");
  const VarId z1 = iv("z1"), z2 = iv("z2");

  Expr d = jet::hatted_D(P("theta[0]"), z2, r);
  CHECK(eqn(d, "w[1,2]/w[0,2]*theta[1]"));
  CHECK(eqn(jet::chart_lift(d, r), "1 + z1*w[1,2]/w[0,2]"));

  CHECK(eqn(jet::hatted_D(P("theta[0]"), z1, r), "-w[1,2]*theta[1]"));
  CHECK(eqn(jet::hatted_D(P("theta[2]"), z1, r), "-w[1,2]*theta[3]"));
  CHECK(eqn(jet::hatted_D(P("w[0,0]"), z1, r, Chart::Theta), "w[1,0]"));
  CHECK(eqn(jet::hatted_D(P("w[0,0]"), z2, r, Chart::Theta), "w[0,1]"));
  CHECK(eqn(jet::hatted_D(P("w[0,1]"), z1, r, Chart::Theta),
            "zeta[1,0] - 1/2*w[0,2]^2"));
  CHECK(eqn(jet::hatted_D(P("w[0,1]"), z2, r, Chart::Theta), "w[0,2]"));
  CHECK(eqn(jet::hatted_D(P("w[1,0]"), z1, r, Chart::Theta),
            "zeta[2,0] + 1/3*w[0,2]^3 + (theta[0] + w[0,2]*theta[1]"
            " - w[0,2]^2/w[1,2])*zeta[1,1]"));
  CHECK(eqn(jet::hatted_D(P("w[1,0]"), z2, r, Chart::Theta),
            "zeta[1,0] - 1/2*w[0,2]^2"));
  CHECK(eqn(jet::hatted_D(P("w[0,2]"), z1, r, Chart::Theta), "w[1,2]"));
  CHECK(eqn(jet::hatted_D(P("w[0,2]"), z2, r, Chart::Theta),
            "-w[1,2]/w[0,2]"));
  CHECK(eqn(jet::hatted_D(P("w[1,2]"), z1, r, Chart::Theta),
            "w[1,2]^2/w[0,2]*(w[1,2]*theta[2] + 2)"));
  CHECK(eqn(jet::hatted_D(P("w[1,2]"), z2, r, Chart::Theta),
            "-(w[1,2]/w[0,2])^2*(w[1,2]*theta[2] + 1)"));

  const EquationModel& q = jet::model("intermediate");
  CHECK(eqn(jet::hatted_D(P("theta[0]"), z2, q), "q[1,1]/q[0,1]*theta[1]"));
  CHECK(eqn(jet::chart_lift(jet::hatted_D(P("theta[0]"), z2, q), q),
            "1 + z1*q[1,1]/q[0,1]"));
  CHECK(eqn(jet::hatted_D(P("q[0,0]"), z1, q, Chart::Theta),
            "zeta[1,0] - 1/2*q[0,1]^2"));
  CHECK(eqn(jet::hatted_D(P("q[0,0]"), z2, q, Chart::Theta), "q[0,1]"));
  CHECK(eqn(jet::hatted_D(P("q[0,1]"), z1, q, Chart::Theta), "q[1,1]"));
  CHECK(eqn(jet::hatted_D(P("q[0,1]"), z2, q, Chart::Theta),
            "-q[1,1]/q[0,1]"));
  CHECK(eqn(jet::hatted_D(P("q[1,1]"), z1, q, Chart::Theta),
            "q[1,1]^2/q[0,1]*(q[1,1]*theta[2] + 2)"));
  CHECK(eqn(jet::hatted_D(P("q[1,1]"), z2, q, Chart::Theta),
            "-(q[1,1]/q[0,1])^2*(q[1,1]*theta[2] + 1)"));
}

TEST_CASE("chart lifts have the expected closed forms") {
  const EquationModel& r = jet::model("redEq13");
  CHECK(eqn(jet::chart_lift(P("zeta[1,0]"), r), "w[1,1] + 1/2*w[0,2]^2"));
  CHECK(eqn(jet::chart_lift(P("zeta[1,1]"), r), "w[2,1] + w[0,2]*w[1,2]"));
  CHECK(eqn(jet::chart_lift(P("zeta[2,0]"), r),
            "w[2,0] - 1/3*w[0,2]^3 - z2*(w[2,1] + w[0,2]*w[1,2])"));
  CHECK(eqn(jet::chart_lift(P("theta[0]"), r), "z2 - w[0,2]*z1"));
  CHECK(eqn(jet::chart_lift(P("theta[1]"), r), "w[0,2]/w[1,2] + z1"));
  CHECK(eqn(jet::chart_lift(P("theta[2]"), r),
            "(w[2,2]*w[0,2] - 2*w[1,2]^2)/w[1,2]^3"));
  CHECK(eqn(jet::chart_lift(P("w[1,1]*z1"), r), "w[1,1]*z1"));

  const EquationModel& q = jet::model("intermediate");
  CHECK(eqn(jet::chart_lift(P("zeta[1,0]"), q), "q[1,0] + 1/2*q[0,1]^2"));
  CHECK(eqn(jet::chart_lift(P("theta[0]"), q), "z2 - q[0,1]*z1"));
  CHECK(eqn(jet::chart_lift(P("theta[1]"), q), "q[0,1]/q[1,1] + z1"));

  CHECK_THROWS_AS(jet::chart_lift(P("zeta[3,0]"), r), std::invalid_argument);
}

TEST_CASE("chart membership errors") {
  const EquationModel& r = jet::model("redEq13");
  const EquationModel& q = jet::model("intermediate");
  const VarId z1 = iv("z1");

  CHECK(thrown_message([&] { jet::hatted_D(P("z1 + theta[0]"), z1, r); })
            .find("mixes") != std::string::npos);
  CHECK(thrown_message([&] { jet::hatted_D(P("w[1,1] + theta[0]"), z1, r); })
            .find("mixes") != std::string::npos);
  CHECK(thrown_message([&] { jet::hatted_D(P("w[0,3]"), z1, r); })
            .find("reduce on shell first") != std::string::npos);
  CHECK_THROWS_AS(jet::hatted_D(P("zeta[3,0]"), z1, r),
                  std::invalid_argument);
  CHECK_THROWS_AS(jet::hatted_D(P("zeta[2,0]"), z1, q),
                  std::invalid_argument);
  CHECK_THROWS_AS(jet::hatted_D(P("z1"), z1, r, Chart::Theta),
                  std::invalid_argument);
  CHECK_THROWS_AS(jet::hatted_D(P("theta[0]"), z1, r, Chart::Plain),
                  std::invalid_argument);
  CHECK_THROWS_AS(jet::hatted_D(P("h[0,1]"), z1, jet::model("burgers")),
                  std::invalid_argument);
  CHECK_THROWS_AS(jet::hatted_D(P("w[0,0]"), iv("t"), r),
                  std::invalid_argument);
  // The theta chart of the intermediate model carries q11, not q10.
  CHECK(thrown_message([&] { jet::hatted_D(P("q[1,0] + theta[0]"), z1, q); })
            .find("mixes") != std::string::npos);
  CHECK_NOTHROW(jet::hatted_D(P("q[1,1] + theta[0]"), z1, q));
}

TEST_CASE("vector field prolongation") {
  const EquationModel& r = jet::model("redEq13");

  VectorField p2 = mkvf("redEq13", {{"z2", "1"}});
  VectorField pr = jet::prolong(p2, 1, r);
  CHECK(pr.comp.size() == 1);
  CHECK(pr.component(jv("w", {1, 0})).is_zero_const());
  CHECK(pr.component(jv("w", {0, 1})).is_zero_const());

  VectorField d2 = mkvf("redEq13", {{"z2", "z2"}, {"w", "3*w"}});
  VectorField pd2 = jet::prolong(d2, 2, r);
  CHECK(eqn(pd2.component(jv("w", {0, 1})), "2*w[0,1]"));
  CHECK(eqn(pd2.component(jv("w", {1, 0})), "3*w[1,0]"));
  CHECK(eqn(pd2.component(jv("w", {0, 2})), "w[0,2]"));
  CHECK(eqn(pd2.component(jv("w", {1, 1})), "2*w[1,1]"));
  CHECK(eqn(pd2.component(jv("w", {2, 0})), "3*w[2,0]"));
  // Base components survive untouched.
  CHECK(eqn(pd2.component(iv("z2")), "z2"));
  // Scaling weight of the minimum-order integral.
  CHECK(eqn(pd2.apply(P("w[1,1] + 1/2*w[0,2]^2")),
            "2*w[1,1] + w[0,2]^2"));

  VectorField k = mkvf("redEq13", {{"z1", "z1^2"},
                                   {"z2", "z1*z2"},
                                   {"w", "z1*w + 1/6*z2^3"}});
  VectorField pk = jet::prolong(k, 2, r);
  CHECK(eqn(pk.component(jv("w", {0, 2})), "z2 - z1*w[0,2]"));

  VectorField d1 = mkvf("redEq13", {{"z1", "z1"}, {"w", "-w"}});
  CHECK(eqn(jet::prolong(d1, 2, r).component(jv("w", {0, 2})), "-w[0,2]"));

  VectorField h = mkvf("redEq13", {{"z2", "z1"}, {"w", "1/2*z2^2"}});
  CHECK(eqn(jet::prolong(h, 2, r).component(jv("w", {0, 2})), "1"));

  VectorField k0 = jet::prolong(k, 0, r);
  CHECK(k0.comp.size() == 3);

  CHECK_THROWS_AS(jet::prolong(k, -1, r), std::invalid_argument);
}

TEST_CASE("lie symmetry verdicts") {
  const EquationModel& r = jet::model("redEq13");
  const EquationModel& b = jet::model("burgers");
  const EquationModel& q = jet::model("intermediate");
  const EquationModel& d = jet::model("dN");

  SUBCASE("reduced-equation generators") {
    auto fields = {
        mkvf("redEq13", {{"z1", "1"}}),
        mkvf("redEq13", {{"z1", "z1"}, {"w", "-w"}}),
        mkvf("redEq13",
             {{"z1", "z1^2"}, {"z2", "z1*z2"}, {"w", "z1*w + 1/6*z2^3"}}),
        mkvf("redEq13", {{"z2", "z2"}, {"w", "3*w"}}),
        mkvf("redEq13", {{"z2", "1"}}),
        mkvf("redEq13", {{"z2", "z1"}, {"w", "1/2*z2^2"}}),
        mkvf("redEq13", {{"w", "alpha(z1)*z2"}}),
        mkvf("redEq13", {{"w", "alpha(z1)"}}),
    };
    for (const VectorField& f : fields)
      CHECK(jet::check_lie_symmetry(f, r) == Verdict::Zero);
  }

  SUBCASE("rank-one scaling is not a symmetry") {
    VectorField wdw = mkvf("redEq13", {{"w", "w"}});
    CHECK(jet::check_lie_symmetry(wdw, r) == Verdict::Nonzero);
    VectorField pr = jet::prolong(wdw, 3, r);
    CHECK(eqn(jet::on_shell_reduce(pr.apply(r.L), r), "-w[1,2]"));
  }

  SUBCASE("inviscid-flow generators") {
    auto fields = {
        mkvf("burgers", {{"z1", "1"}}),
        mkvf("burgers", {{"z1", "z1"}, {"h", "-h"}}),
        mkvf("burgers",
             {{"z1", "z1^2"}, {"z2", "z1*z2"}, {"h", "z2 - z1*h"}}),
        mkvf("burgers", {{"z2", "z2"}, {"h", "h"}}),
        mkvf("burgers", {{"z2", "1"}}),
        mkvf("burgers", {{"z2", "z1"}, {"h", "1"}}),
    };
    for (const VectorField& f : fields)
      CHECK(jet::check_lie_symmetry(f, b) == Verdict::Zero);

    VectorField bad = mkvf("burgers", {{"z1", "z1"}});
    CHECK(jet::check_lie_symmetry(bad, b) == Verdict::Nonzero);
  }

  SUBCASE("intermediate-model generators") {
    auto fields = {
        mkvf("intermediate", {{"z1", "1"}}),
        mkvf("intermediate", {{"z1", "z1"}, {"q", "-q"}}),
        mkvf("intermediate",
             {{"z1", "z1^2"}, {"z2", "z1*z2"}, {"q", "1/2*z2^2"}}),
        mkvf("intermediate", {{"z2", "z2"}, {"q", "2*q"}}),
        mkvf("intermediate", {{"z2", "1"}}),
        mkvf("intermediate", {{"z2", "z1"}, {"q", "z2"}}),
        mkvf("intermediate", {{"q", "alpha(z1)"}}),
    };
    for (const VectorField& f : fields)
      CHECK(jet::check_lie_symmetry(f, q) == Verdict::Zero);

    VectorField qdq = mkvf("intermediate", {{"q", "q"}});
    CHECK(jet::check_lie_symmetry(qdq, q) == Verdict::Nonzero);
    VectorField pr = jet::prolong(qdq, 2, q);
    CHECK(eqn(jet::on_shell_reduce(pr.apply(q.L), q), "-q[1,1]"));
  }

  SUBCASE("three-dimensional model generators") {
    auto fields = {
        // time reparametrization with an arbitrary profile
        mkvf("dN", {{"t", "alpha(t)"},
                    {"x", "1/3*alpha'(t)*x"},
                    {"y", "1/3*alpha'(t)*y"},
                    {"u", "-1/18*alpha''(t)*(x^3 + y^3)"}}),
        // joint space scaling
        mkvf("dN", {{"x", "x"}, {"y", "y"}, {"u", "3*u"}}),
        // generalized translations
        mkvf("dN", {{"x", "alpha(t)"}, {"u", "-1/2*alpha'(t)*x^2"}}),
        mkvf("dN", {{"y", "alpha(t)"}, {"u", "-1/2*alpha'(t)*y^2"}}),
        // shifts linear in one space variable, and free shifts
        mkvf("dN", {{"u", "alpha(t)*x"}}),
        mkvf("dN", {{"u", "alpha(t)*y"}}),
        mkvf("dN", {{"u", "alpha(t)"}}),
    };
    for (const VectorField& f : fields)
      CHECK(jet::check_lie_symmetry(f, d) == Verdict::Zero);

    VectorField bad = mkvf("dN", {{"u", "u"}});
    CHECK(jet::check_lie_symmetry(bad, d) == Verdict::Nonzero);
  }
}

TEST_CASE("total derivatives commute on random expressions") {
  const EquationModel& m = jet::model("redEq13");
  std::vector<VarId> pool = {iv("z1"),        iv("z2"),
                             jv("w", {0, 0}), jv("w", {1, 0}),
                             jv("w", {0, 1}), jv("w", {0, 2}),
                             jv("w", {1, 1}), jv("w", {1, 2})};
  std::mt19937_64 rng(20260815ull);
  int accepted = 0;
  for (int i = 0; i < 60; ++i) {
    Expr e = sym::gen_random_expr(rng, pool, 4);
    if (!defined(e)) continue;
    Expr a = jet::total_derivative(jet::total_derivative(e, iv("z1"), m),
                                   iv("z2"), m);
    Expr b = jet::total_derivative(jet::total_derivative(e, iv("z2"), m),
                                   iv("z1"), m);
    ++accepted;
    CHECK(sym::normalize(a - b).is_zero_const());
  }
  CHECK(accepted >= 40);
}

namespace {

std::vector<Expr> plain_chart_coords(const std::string& id) {
  std::vector<Expr> out = {P("z1"), P("z2")};
  const char* dep = id == "redEq13" ? "w" : "q";
  const int lmax = id == "redEq13" ? 2 : 1;
  for (int k = 0; k <= 2; ++k)
    for (int l = 0; l <= lmax; ++l) out.push_back(sym::evar(jv(dep, {k, l})));
  const int imax = id == "redEq13" ? 2 : 1;
  for (int i = 1; i <= imax; ++i)
    for (int k = 0; k <= 2; ++k) out.push_back(sym::evar(jv("zeta", {i, k})));
  return out;
}

std::vector<Expr> theta_chart_coords(const std::string& id) {
  std::vector<Expr> out;
  if (id == "redEq13") {
    for (auto ix : {std::vector<int>{0, 0}, {1, 0}, {0, 1}, {0, 2}, {1, 2}})
      out.push_back(sym::evar(jv("w", ix)));
  } else {
    for (auto ix : {std::vector<int>{0, 0}, {0, 1}, {1, 1}})
      out.push_back(sym::evar(jv("q", ix)));
  }
  for (int k = 0; k <= 2; ++k) out.push_back(sym::evar(jv("theta", {k})));
  const int imax = id == "redEq13" ? 2 : 1;
  for (int i = 1; i <= imax; ++i)
    for (int k = 0; k <= 2; ++k) out.push_back(sym::evar(jv("zeta", {i, k})));
  return out;
}

}  // namespace

TEST_CASE("restricted derivatives commute on every chart coordinate") {
  for (const std::string id : {"redEq13", "intermediate"}) {
    const EquationModel& m = jet::model(id);
    const VarId z1 = iv("z1"), z2 = iv("z2");
    for (Chart chart : {Chart::Plain, Chart::Theta}) {
      auto coords = chart == Chart::Plain ? plain_chart_coords(id)
                                          : theta_chart_coords(id);
      for (const Expr& c : coords) {
        Expr a = jet::hatted_D(jet::hatted_D(c, z1, m, chart), z2, m, chart);
        Expr b = jet::hatted_D(jet::hatted_D(c, z2, m, chart), z1, m, chart);
        CAPTURE(id);
        CAPTURE(sym::print(c));
        CHECK(sym::normalize(a - b).is_zero_const());
      }
    }
  }
}

TEST_CASE("restricted derivatives match reduced total derivatives through "
          "the lift") {
  for (const std::string id : {"redEq13", "intermediate"}) {
    const EquationModel& m = jet::model(id);
    for (Chart chart : {Chart::Plain, Chart::Theta}) {
      auto coords = chart == Chart::Plain ? plain_chart_coords(id)
                                          : theta_chart_coords(id);
      for (const Expr& c : coords) {
        for (const VarId& dir : m.indep) {
          Expr lhs = jet::chart_lift(jet::hatted_D(c, dir, m, chart), m);
          Expr rhs = jet::on_shell_reduce(
              jet::total_derivative(jet::chart_lift(c, m), dir, m), m);
          CAPTURE(id);
          CAPTURE(sym::print(c));
          CAPTURE(dir.str());
          CHECK(sym::equal_normalized(lhs, rhs));
        }
      }
    }
  }
}
