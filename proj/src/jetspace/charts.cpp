#include "nyz/jetspace.hpp"

#include <mutex>
#include <stdexcept>

namespace nyz::jet {

using sym::diff;
using sym::evar;
using sym::normalize;
using sym::num;
using sym::parse_expr;
using sym::substitute;
using sym::variables;

namespace {

VarId jv(const std::string& n, std::vector<int> ix) {
  return VarId::jet(n, std::move(ix));
}

bool is_zeta(const VarId& v) {
  return v.kind == VarId::Kind::Jet && v.name == "zeta" &&
         v.index.size() == 2 && v.index[1] >= 0;
}
bool is_theta(const VarId& v) {
  return v.kind == VarId::Kind::Jet && v.name == "theta" &&
         v.index.size() == 1 && v.index[0] >= 0;
}

void check_chart_support(const EquationModel& m) {
  if (m.id != "redEq13" && m.id != "intermediate")
    throw std::invalid_argument("hatted_D: no chart data for model " + m.id);
}

int max_zeta_i(const EquationModel& m) { return m.id == "redEq13" ? 2 : 1; }

/// Highest z2-count of a parametric jet: 2 for redEq13, 1 for intermediate.
int parametric_top(const EquationModel& m) {
  return m.principal.index[1] - 1;
}

Chart infer_chart(const std::set<VarId>& vars, const EquationModel& m,
                  Chart requested) {
  bool theta_like = false, plain_only = false;
  for (const VarId& v : vars) {
    if (v.kind == VarId::Kind::Indep) {
      plain_only = true;
    } else if (is_theta(v)) {
      theta_like = true;
    } else if (is_zeta(v)) {
      if (v.index[0] < 1 || v.index[0] > max_zeta_i(m))
        throw std::invalid_argument("hatted_D: unknown integral symbol " +
                                    v.str());
    } else if (v.kind == VarId::Kind::Jet) {
      if (v.name != m.dep)
        throw std::invalid_argument("hatted_D: foreign coordinate " + v.str());
      if (m.is_principal(v))
        throw std::invalid_argument(
            "hatted_D: principal derivative " + v.str() +
            " is not a chart coordinate; reduce on shell first");
      // Theta charts keep only jets with z1-count <= 1 and z2-count = top,
      // plus the base jets below them.
      const int k = v.index[0], l = v.index[1];
      bool in_theta_chart =
          (m.id == "redEq13" && ((l == 2 && k <= 1) || (l < 2 && k + l <= 1)))
          || (m.id == "intermediate" && ((l == 1 && k <= 1) || (k == 0 && l == 0)));
      if (!in_theta_chart) plain_only = true;
    }
  }
  if (theta_like && plain_only)
    throw std::invalid_argument(
        "hatted_D: expression mixes coordinates of different charts");
  Chart inferred = theta_like ? Chart::Theta : Chart::Plain;
  if (requested == Chart::Auto) return inferred;
  if (requested == Chart::Plain && theta_like)
    throw std::invalid_argument("hatted_D: theta coordinates in a plain-chart "
                                "expression");
  if (requested == Chart::Theta && plain_only)
    throw std::invalid_argument("hatted_D: plain-chart coordinates in a "
                                "theta-chart expression");
  return requested;
}

/// D-hat_1^k (w12/w02), the plain-chart image of the reduced principal
/// derivative chain, memoized per model.
Expr nu(const EquationModel& m, int k);

Expr plain_rule(const EquationModel& m, int dir, const VarId& v) {
  const int top = parametric_top(m);
  if (v.kind == VarId::Kind::Indep)
    return m.axis_of(v) == dir ? num(1) : Expr();
  if (is_zeta(v)) {
    if (dir == 0) return evar(jv("zeta", {v.index[0], v.index[1] + 1}));
    return Expr();
  }
  // Parametric jet w[k,l].
  const int k = v.index[0], l = v.index[1];
  if (dir == 0) return evar(jv(m.dep, {k + 1, l}));
  if (l < top) return evar(jv(m.dep, {k, l + 1}));
  return num(-1) * nu(m, k);
}

Expr nu(const EquationModel& m, int k) {
  static std::map<std::string, std::vector<Expr>> memo;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& chain = memo[m.id];
  if (chain.empty()) {
    const int top = parametric_top(m);
    chain.push_back(normalize(evar(jv(m.dep, {1, top})) /
                              evar(jv(m.dep, {0, top}))));
  }
  while (static_cast<int>(chain.size()) <= k) {
    const Expr& prev = chain.back();
    Expr out;
    for (const VarId& v : variables(prev))
      out = out + plain_rule(m, 0, v) * diff(prev, v);
    chain.push_back(normalize(out));
  }
  return chain[k];
}

Expr theta_rule(const EquationModel& m, int dir, const VarId& v) {
  const std::string& d = m.dep;
  const bool red = m.id == "redEq13";
  // Chart coordinates: redEq13 (w00, w10, w01, w02, w12, theta, zeta);
  // intermediate (q00, q01, q11, theta, zeta).
  const Expr lo = evar(jv(d, red ? std::vector<int>{0, 2}
                                 : std::vector<int>{0, 1}));  // w02 | q01
  const Expr hi = evar(jv(d, red ? std::vector<int>{1, 2}
                                 : std::vector<int>{1, 1}));  // w12 | q11
  const Expr th2 = evar(jv("theta", {2}));
  if (is_zeta(v)) {
    if (dir == 0) return evar(jv("zeta", {v.index[0], v.index[1] + 1}));
    return Expr();
  }
  if (is_theta(v)) {
    Expr next = evar(jv("theta", {v.index[0] + 1}));
    if (dir == 0) return normalize(num(-1) * hi * next);
    return normalize((hi / lo) * next);
  }
  const int k = v.index[0], l = v.index[1];
  if (red) {
    if (k == 0 && l == 0) return evar(jv(d, {dir == 0 ? 1 : 0, dir == 0 ? 0 : 1}));
    if (k == 1 && l == 0) {
      if (dir == 0) {
        // zeta20 + w02^3/3 + (theta0 + w02 theta1 - w02^2/w12) zeta11
        Expr z2_in_chart = evar(jv("theta", {0})) + lo * evar(jv("theta", {1})) -
                           lo * lo / hi;
        return normalize(evar(jv("zeta", {2, 0})) + lo * lo * lo / num(3) +
                         z2_in_chart * evar(jv("zeta", {1, 1})));
      }
      return normalize(evar(jv("zeta", {1, 0})) - lo * lo / num(2));
    }
    if (k == 0 && l == 1) {
      if (dir == 0)
        return normalize(evar(jv("zeta", {1, 0})) - lo * lo / num(2));
      return lo;
    }
    if (k == 0 && l == 2) {
      if (dir == 0) return hi;
      return normalize(num(-1) * hi / lo);
    }
    // w12
    if (dir == 0) return normalize((hi * hi / lo) * (hi * th2 + num(2)));
    return normalize(num(-1) * (hi / lo) * (hi / lo) * (hi * th2 + num(1)));
  }
  // intermediate
  if (k == 0 && l == 0) {
    if (dir == 0)
      return normalize(evar(jv("zeta", {1, 0})) - lo * lo / num(2));
    return lo;
  }
  if (k == 0 && l == 1) {
    if (dir == 0) return hi;
    return normalize(num(-1) * hi / lo);
  }
  // q11
  if (dir == 0) return normalize((hi * hi / lo) * (hi * th2 + num(2)));
  return normalize(num(-1) * (hi / lo) * (hi / lo) * (hi * th2 + num(1)));
}

}  // namespace

Expr hatted_D(const Expr& e, const VarId& direction, const EquationModel& m,
              Chart chart) {
  check_chart_support(m);
  int dir = m.axis_of(direction);
  if (dir < 0)
    throw std::invalid_argument("hatted_D: '" + direction.str() +
                                "' is not an independent variable of " + m.id);
  auto vars = variables(e);
  Chart c = infer_chart(vars, m, chart);
  Expr out;
  for (const VarId& v : vars) {
    Expr cv = c == Chart::Plain ? plain_rule(m, dir, v)
                                : theta_rule(m, dir, v);
    if (cv.is_zero_const()) continue;
    out = out + cv * diff(e, v);
  }
  return normalize(out);
}

Expr chart_lift(const Expr& e, const EquationModel& m) {
  check_chart_support(m);
  static std::map<std::string, std::vector<Expr>> theta_memo;
  static std::map<std::string, std::map<int, std::vector<Expr>>> zeta_memo;
  static std::mutex mu;

  auto zeta_lift = [&](int i, int k) {
    auto& chain = zeta_memo[m.id][i];
    if (chain.empty()) {
      if (m.id == "redEq13" && i == 1)
        chain.push_back(parse_expr("w[1,1] + 1/2*w[0,2]^2"));
      else if (m.id == "redEq13" && i == 2)
        chain.push_back(normalize(
            parse_expr("w[2,0] - 1/3*w[0,2]^3") -
            evar(VarId::indep("z2")) *
                total_derivative(parse_expr("w[1,1] + 1/2*w[0,2]^2"),
                                 VarId::indep("z1"), m)));
      else if (m.id == "intermediate" && i == 1)
        chain.push_back(parse_expr("q[1,0] + 1/2*q[0,1]^2"));
      else
        throw std::invalid_argument("chart_lift: unknown integral index");
    }
    while (static_cast<int>(chain.size()) <= k)
      chain.push_back(total_derivative(chain.back(), m.indep[0], m));
    return chain[k];
  };
  auto theta_lift = [&](int k) {
    auto& chain = theta_memo[m.id];
    if (chain.empty()) {
      Expr lo = evar(jv(m.dep, {0, parametric_top(m)}));
      chain.push_back(normalize(evar(VarId::indep("z2")) -
                                lo * evar(VarId::indep("z1"))));
    }
    while (static_cast<int>(chain.size()) <= k) {
      Expr lo = evar(jv(m.dep, {0, parametric_top(m)}));
      Expr hi = evar(jv(m.dep, {1, parametric_top(m)}));
      Expr next = on_shell_reduce(
          total_derivative(chain.back(), m.indep[1], m), m);
      chain.push_back(normalize((lo / hi) * next));
    }
    return chain[k];
  };

  std::lock_guard<std::mutex> lock(mu);
  std::map<VarId, Expr> subs;
  for (const VarId& v : variables(e)) {
    if (is_zeta(v)) subs.emplace(v, zeta_lift(v.index[0], v.index[1]));
    else if (is_theta(v)) subs.emplace(v, theta_lift(v.index[0]));
  }
  if (subs.empty()) return normalize(e);
  return substitute(e, subs);
}

}  // namespace nyz::jet
