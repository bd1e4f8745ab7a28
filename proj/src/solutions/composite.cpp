#include "nyz/solutions.hpp"

#include <cmath>
#include <stdexcept>

namespace nyz::sol {

namespace {

double qd(const Q& q) { return q.convert_to<double>(); }

}  // namespace

CompositeSolution compose_dN_solution(const SolutionFamily& w_family,
                                      const CompositeSpec& spec,
                                      const red::DNAnsatz& ansatz) {
  const double c1 = qd(spec.c1), c2 = qd(spec.c2), c3 = qd(spec.c3),
               c4 = qd(spec.c4), c5 = qd(spec.c5);
  if (spec.kind == "general") {
    const Q det = spec.c1 * spec.c4 - spec.c2 * spec.c3;
    if (det != 1 && det != -1)
      throw std::invalid_argument(
          "general composite needs c1 c4 - c2 c3 = +-1");
  } else if (spec.kind == "shift" || spec.kind == "inversion") {
    if (!ansatz.rho.is_num())
      throw std::invalid_argument(spec.kind +
                                  " composite needs a constant time profile");
  } else {
    throw std::invalid_argument("unknown composite kind '" + spec.kind + "'");
  }

  CompositeSolution out;
  out.name = spec.kind + " composite of " + w_family.name;
  // Copies keep the evaluator self-contained.
  const SolutionFamily f = w_family;
  auto z1_of_t = ansatz.z1_of_t;
  auto rho_of_t = ansatz.rho_of_t;
  auto k_of_t = ansatz.k_of_t;

  if (spec.kind == "general") {
    const double det = c1 * c4 - c2 * c3;
    out.u = [=](double t, double x, double y) {
      const double z1 = z1_of_t(t), z2 = y / rho_of_t(t) - x;
      const double d = c3 * z1 + c4;
      if (std::abs(d) < 1e-9)
        throw std::domain_error("composite hits c3 z1 + c4 = 0");
      const double w = eval_w(f, (c1 * z1 + c2) / d, (z2 + c5 * z1) / d);
      return det * d * w + c3 * z2 * z2 * z2 / (6.0 * d) -
             c4 * c5 * z2 * z2 / (2.0 * d) - k_of_t(t) * y * y * y;
    };
    out.singular = [=](double t, double x, double y) {
      const double z1 = z1_of_t(t), z2 = y / rho_of_t(t) - x;
      const double d = c3 * z1 + c4;
      return std::abs(d) < 1e-9 ||
             f.singular((c1 * z1 + c2) / d, (z2 + c5 * z1) / d);
    };
  } else if (spec.kind == "shift") {
    out.u = [=](double t, double x, double y) {
      const double z1 = z1_of_t(t), z2 = y / rho_of_t(t) - x;
      return eval_w(f, z1, z2 + c5 * z1) - c5 / 2.0 * z2 * z2 -
             k_of_t(t) * y * y * y;
    };
    out.singular = [=](double t, double x, double y) {
      const double z1 = z1_of_t(t), z2 = y / rho_of_t(t) - x;
      return f.singular(z1, z2 + c5 * z1);
    };
  } else {  // inversion
    out.u = [=](double t, double x, double y) {
      const double z1 = z1_of_t(t), z2 = y / rho_of_t(t) - x;
      if (std::abs(z1) < 1e-9)
        throw std::domain_error("inversion composite hits z1 = 0");
      const double w = eval_w(f, 1.0 / z1, z2 / z1 + c5);
      return -z1 * w + z2 * z2 * z2 / (6.0 * z1) - k_of_t(t) * y * y * y;
    };
    out.singular = [=](double t, double x, double y) {
      const double z1 = z1_of_t(t), z2 = y / rho_of_t(t) - x;
      return std::abs(z1) < 1e-9 || f.singular(1.0 / z1, z2 / z1 + c5);
    };
  }
  return out;
}

}  // namespace nyz::sol
