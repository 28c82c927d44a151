#ifndef KSTREE_TREE_MODEL_HPP
#define KSTREE_TREE_MODEL_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "kstree/edge_function.hpp"

namespace kstree {

enum class Model { I, II };

/// Star-shaped tree with N edges of common length L, anti-diffusion
/// parameter lambda and control horizon T, plus the boundary-condition
/// model selecting which controls act at the external vertices.
struct StarTreeConfig {
  int num_edges = 2;
  double edge_length = 1.0;
  double lambda = 1.0;
  Model model = Model::I;
  double horizon = 1.0;

  void validate() const;
};

/// Parse a configuration from a JSON document with keys
/// edges, length, lambda, model ("I"|"II"), horizon.  Unknown keys are
/// rejected with std::invalid_argument.
StarTreeConfig parse_config(const std::string& json_text);
std::string to_json(const StarTreeConfig& cfg);

/// A function on the graph: one EdgeFunction per edge, edge k = index k-1.
class GraphFunction {
 public:
  GraphFunction() = default;
  explicit GraphFunction(std::vector<EdgeFunction> components)
      : components_(std::move(components)) {}

  static GraphFunction zero(int num_edges) {
    return GraphFunction(std::vector<EdgeFunction>(static_cast<std::size_t>(num_edges)));
  }
  /// c * phi on every edge, coefficients given per edge.
  static GraphFunction scaled_copies(const std::vector<double>& coeffs,
                                     const EdgeFunction& phi);

  std::size_t size() const { return components_.size(); }
  const EdgeFunction& component(std::size_t k) const { return components_.at(k); }
  EdgeFunction& component(std::size_t k) { return components_.at(k); }
  const std::vector<EdgeFunction>& components() const { return components_; }

  GraphFunction& operator+=(const GraphFunction& other);
  GraphFunction& operator*=(double s);
  friend GraphFunction operator+(GraphFunction a, const GraphFunction& b) {
    a += b;
    return a;
  }
  friend GraphFunction operator*(GraphFunction a, double s) {
    a *= s;
    return a;
  }

 private:
  std::vector<EdgeFunction> components_;
};

/// Sum over edges of the edge inner products; the L^2(Gamma) pairing.
double graph_inner_product(const GraphFunction& f, const GraphFunction& g,
                           const StarTreeConfig& cfg);

}  // namespace kstree

#endif
