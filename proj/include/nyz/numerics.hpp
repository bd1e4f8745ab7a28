#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

/// Basic numerical kernels: Lambert W (branches 0 and -1), bracketed root
/// finding, adaptive quadrature, finite-difference partials and the method of
/// characteristics for the inviscid Burgers equation h_1 + h h_2 = 0.
namespace nyz::num {

struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Lambert W function, w*exp(w) = x.
/// branch 0: x in [-1/e, inf); branch -1: x in [-1/e, 0).
/// Halley iteration; residual |w e^w - x| <= 1e-13 * max(1, |x|).
double lambert_w(double x, int branch = 0);

struct RootOptions {
  double tol = 1e-12;   // |f| and interval tolerance
  int max_iter = 200;
};

/// Root of f on the bracket [a, b]; f(a) and f(b) must have opposite signs
/// (or one endpoint is already a root). Hybrid secant/bisection.
double find_root(const std::function<double(double)>& f, double a, double b,
                 RootOptions opt = {});

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-10);

/// Partial derivative of a multivariate callable by 4th-order central
/// differences applied per axis. `orders[i]` is the derivative order with
/// respect to axis i (0..3 supported per axis), `step` the base step.
double fd_partial(const std::function<double(const std::vector<double>&)>& f,
                  std::vector<double> point, const std::vector<int>& orders,
                  double step);

/// One-dimensional convenience overload.
double fd_partial(const std::function<double(double)>& f, double x, int order,
                  double step);

struct MocResult {
  double value = 0.0;   // h(z1, z2)
  double foot = 0.0;    // characteristic foot xi = z2 - h*z1
  bool pre_shock = true; // 1 + h0'(xi) z1 > 0 at the solution
};

/// Solve h = h0(z2 - h z1) (implicit general solution of h_1 + h h_2 = 0 with
/// initial datum h(0, z2) = h0(z2)). Fails with domain_error if no
/// characteristic root can be bracketed.
MocResult moc_burgers(const std::function<double(double)>& h0, double z1,
                      double z2);

}  // namespace nyz::num
