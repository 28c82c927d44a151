#ifndef KSTREE_TEST_ORACLES_HPP
#define KSTREE_TEST_ORACLES_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "kstree/edge_function.hpp"
#include "kstree/quadrature.hpp"

namespace kstree::test {

/// Quadrature oracle for inner products: pointwise evaluation under a
/// 10^4-node Gauss-Legendre rule, independent of the closed-form path.
inline double quadrature_inner_product(const EdgeFunction& f, const EdgeFunction& g,
                                       double L, int nodes = 10000) {
  static std::vector<std::pair<int, GaussLegendre>> cache;
  for (const auto& [n, rule] : cache) {
    if (n == nodes) {
      return rule.integrate([&](double x) { return f.value(x) * g.value(x); }, 0.0, L);
    }
  }
  cache.emplace_back(nodes, GaussLegendre(nodes));
  return cache.back().second.integrate(
      [&](double x) { return f.value(x) * g.value(x); }, 0.0, L);
}

inline double quadrature_integral(const std::function<double(double)>& f, double a,
                                  double b, int nodes = 10000) {
  static const GaussLegendre rule(10000);
  if (nodes == 10000) return rule.integrate(f, a, b);
  return GaussLegendre(nodes).integrate(f, a, b);
}

/// Central finite differences for derivative spot checks.
inline double central_difference(const std::function<double(double)>& f, double x,
                                 int order, double h) {
  switch (order) {
    case 0:
      return f(x);
    case 1:
      return (f(x + h) - f(x - h)) / (2.0 * h);
    case 2:
      return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    case 3:
      return (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) /
             (2.0 * h * h * h);
    case 4:
      return (f(x + 2.0 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) +
              f(x - 2.0 * h)) /
             (h * h * h * h);
    default:
      return std::nan("");
  }
}

/// Independent root oracle: scan f at a fixed step, then bisect each sign
/// change down to `tol`.  Used to cross-check the production root finder.
inline std::vector<double> sign_scan_roots(const std::function<double(double)>& f,
                                           double lo, double hi, double step,
                                           double tol = 1e-12) {
  std::vector<double> roots;
  double a = lo;
  double fa = f(a);
  for (double b = lo + step; b <= hi + 0.5 * step; b += step) {
    const double fb = f(std::min(b, hi));
    if (fa == 0.0) roots.push_back(a);
    if ((fa > 0.0) != (fb > 0.0)) {
      double x0 = a, x1 = std::min(b, hi), f0 = fa;
      while (x1 - x0 > tol) {
        const double m = 0.5 * (x0 + x1);
        const double fm = f(m);
        if ((fm > 0.0) == (f0 > 0.0)) {
          x0 = m;
          f0 = fm;
        } else {
          x1 = m;
        }
      }
      roots.push_back(0.5 * (x0 + x1));
    }
    a = std::min(b, hi);
    fa = fb;
  }
  return roots;
}

/// Dormand-Prince 4(5) adaptive integrator for scalar linear modal ODEs
/// z' = -sigma z + f(t); independent of the closed-form propagator.
inline double rk45_modal(double sigma, const std::function<double(double)>& f,
                         double z0, double t_end, double rtol = 1e-10,
                         double atol = 1e-12) {
  auto rhs = [&](double t, double z) { return -sigma * z + f(t); };
  double t = 0.0, z = z0;
  double h = t_end / 100.0;
  while (t < t_end) {
    if (t + h > t_end) h = t_end - t;
    const double k1 = rhs(t, z);
    const double k2 = rhs(t + h / 5.0, z + h * k1 / 5.0);
    const double k3 = rhs(t + 3.0 * h / 10.0, z + h * (3.0 * k1 + 9.0 * k2) / 40.0);
    const double k4 =
        rhs(t + 4.0 * h / 5.0, z + h * (44.0 * k1 / 45.0 - 56.0 * k2 / 15.0 +
                                        32.0 * k3 / 9.0));
    const double k5 =
        rhs(t + 8.0 * h / 9.0,
            z + h * (19372.0 * k1 / 6561.0 - 25360.0 * k2 / 2187.0 +
                     64448.0 * k3 / 6561.0 - 212.0 * k4 / 729.0));
    const double k6 =
        rhs(t + h, z + h * (9017.0 * k1 / 3168.0 - 355.0 * k2 / 33.0 +
                            46732.0 * k3 / 5247.0 + 49.0 * k4 / 176.0 -
                            5103.0 * k5 / 18656.0));
    const double z5 = z + h * (35.0 * k1 / 384.0 + 500.0 * k3 / 1113.0 +
                               125.0 * k4 / 192.0 - 2187.0 * k5 / 6784.0 +
                               11.0 * k6 / 84.0);
    const double k7 = rhs(t + h, z5);
    const double z4 = z + h * (5179.0 * k1 / 57600.0 + 7571.0 * k3 / 16695.0 +
                               393.0 * k4 / 640.0 - 92097.0 * k5 / 339200.0 +
                               187.0 * k6 / 2100.0 + k7 / 40.0);
    const double err = std::abs(z5 - z4);
    const double tol = atol + rtol * std::max(std::abs(z), std::abs(z5));
    if (err <= tol || h < 1e-14 * t_end) {
      t += h;
      z = z5;
    }
    const double factor = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 2.0;
    h *= std::min(4.0, std::max(0.2, factor));
  }
  return z;
}

}  // namespace kstree::test

#endif
