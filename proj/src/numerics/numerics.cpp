#include "nyz/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nyz::num {

namespace {

constexpr double kEm1 = 0.36787944117144233;  // 1/e

double halley_w(double w, double x, double rel) {
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (std::abs(f) <= rel) return w;
    // Halley step for f(w) = w e^w - x.
    const double fp = ew * (w + 1.0);
    const double denom = fp - f * (w + 2.0) / (2.0 * (w + 1.0));
    const double dw = f / denom;
    w -= dw;
  }
  return w;
}

}  // namespace

double lambert_w(double x, int branch) {
  if (branch != 0 && branch != -1) throw domain_error("lambert_w: branch must be 0 or -1");
  if (x < -kEm1 - 1e-15) throw domain_error("lambert_w: x below -1/e");
  if (branch == -1 && x >= 0.0) throw domain_error("lambert_w: branch -1 needs x in [-1/e, 0)");
  x = std::max(x, -kEm1);

  double w;
  const double p2 = 2.0 * (std::exp(1.0) * x + 1.0);
  if (branch == 0) {
    if (p2 >= 0.0 && p2 < 0.5) {
      // Series about the branch point x = -1/e: w = -1 + p - p^2/3 + ...
      const double p = std::sqrt(p2);
      w = -1.0 + p - p2 / 3.0 + 11.0 / 72.0 * p * p2;
    } else if (x < 1.0) {
      // w ~ x near 0; ln(1+x)-flavoured guess is stable on (-1/e, 1).
      w = x >= 0.0 ? std::log1p(x) : x * std::exp(-x * 0.5);
    } else {
      const double l1 = std::log(x), l2 = std::log(std::log(x) + 1e-300);
      w = l1 - (x > 3.0 ? l2 : 0.0);
    }
  } else {
    if (p2 >= 0.0 && p2 < 0.5) {
      const double p = -std::sqrt(p2);
      w = -1.0 + p - p2 / 3.0 + 11.0 / 72.0 * p * p2;
    } else {
      // x in (-1/e, 0): w ~ ln(-x) - ln(-ln(-x)).
      const double l1 = std::log(-x);
      w = l1 - std::log(-l1);
    }
  }
  const double rel = 1e-13 * std::max(1.0, std::abs(x));
  w = halley_w(w, x, rel);
  if (std::abs(w * std::exp(w) - x) > 1e4 * rel)
    throw domain_error("lambert_w: iteration failed to converge");
  return w;
}

double find_root(const std::function<double(double)>& f, double a, double b,
                 RootOptions opt) {
  double fa = f(a), fb = f(b);
  if (std::abs(fa) <= opt.tol) return a;
  if (std::abs(fb) <= opt.tol) return b;
  if (fa * fb > 0.0) throw domain_error("find_root: endpoints do not bracket a root");
  for (int it = 0; it < opt.max_iter; ++it) {
    // Secant proposal, clipped to the bracket; fall back to bisection.
    double m = (fb != fa) ? b - fb * (b - a) / (fb - fa)
                          : 0.5 * (a + b);
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (!(m > lo && m < hi)) m = 0.5 * (a + b);
    const double fm = f(m);
    if (std::abs(fm) <= opt.tol || std::abs(b - a) <= opt.tol * std::max(1.0, std::abs(m)))
      return m;
    if (fa * fm <= 0.0) {
      b = m; fb = fm;
    } else {
      a = m; fa = fm;
    }
  }
  return 0.5 * (a + b);
}

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double fa, double fm, double fb, double whole, double tol,
             int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = simpson(a, b, fa, fm, fb);
  return adapt(f, a, b, fa, fm, fb, whole, tol, 48);
}

namespace {

struct Stencil {
  std::vector<double> offsets;
  std::vector<double> weights;  // divide by step^order
};

// 4th-order central stencils for derivative orders 1..3.
Stencil stencil_for(int order) {
  switch (order) {
    case 1:
      return {{-2, -1, 1, 2}, {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12}};
    case 2:
      return {{-2, -1, 0, 1, 2},
              {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12}};
    case 3:
      return {{-3, -2, -1, 1, 2, 3},
              {1.0 / 8, -8.0 / 8, 13.0 / 8, -13.0 / 8, 8.0 / 8, -1.0 / 8}};
    default:
      throw domain_error("fd_partial: derivative order must be 1..3");
  }
}

double fd_axis(const std::function<double(const std::vector<double>&)>& f,
               std::vector<double>& point, const std::vector<int>& orders,
               std::size_t axis, double step) {
  // Find the next axis (from `axis` on) with a nonzero order.
  while (axis < orders.size() && orders[axis] == 0) ++axis;
  if (axis >= orders.size()) return f(point);
  const Stencil st = stencil_for(orders[axis]);
  const double x0 = point[axis];
  double acc = 0.0;
  for (std::size_t i = 0; i < st.offsets.size(); ++i) {
    point[axis] = x0 + st.offsets[i] * step;
    acc += st.weights[i] * fd_axis(f, point, orders, axis + 1, step);
  }
  point[axis] = x0;
  return acc / std::pow(step, orders[axis]);
}

}  // namespace

double fd_partial(const std::function<double(const std::vector<double>&)>& f,
                  std::vector<double> point, const std::vector<int>& orders,
                  double step) {
  if (orders.size() != point.size())
    throw domain_error("fd_partial: orders/point size mismatch");
  return fd_axis(f, point, orders, 0, step);
}

double fd_partial(const std::function<double(double)>& f, double x, int order,
                  double step) {
  auto g = [&f](const std::vector<double>& p) { return f(p[0]); };
  std::vector<double> point{x};
  return fd_partial(g, point, {order}, step);
}

MocResult moc_burgers(const std::function<double(double)>& h0, double z1,
                      double z2) {
  // Solve g(h) = h - h0(z2 - h z1) = 0 in h.
  auto g = [&](double h) { return h - h0(z2 - h * z1); };
  if (z1 == 0.0) return {h0(z2), z2, true};

  // Expand a bracket around h0(z2) until the sign changes.
  double c = h0(z2);
  double r = std::max(1.0, std::abs(c));
  double a = c - r, b = c + r;
  bool ok = false;
  for (int k = 0; k < 48; ++k) {
    if (g(a) * g(b) <= 0.0) { ok = true; break; }
    r *= 2.0;
    a = c - r; b = c + r;
  }
  if (!ok) throw domain_error("moc_burgers: could not bracket a characteristic root");
  const double h = find_root(g, a, b, {1e-13, 200});
  const double xi = z2 - h * z1;
  const double d = fd_partial(h0, xi, 1, 1e-5);
  return {h, xi, 1.0 + d * z1 > 0.0};
}

}  // namespace nyz::num
