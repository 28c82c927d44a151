#ifndef KSTREE_QUADRATURE_HPP
#define KSTREE_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace kstree {

/// Gauss-Legendre nodes and weights on [-1, 1], any order.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(int n);

  /// Integrate f over [a, b] with this rule.
  double integrate(const std::function<double(double)>& f, double a, double b) const;
};

}  // namespace kstree

#endif
