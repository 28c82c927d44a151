#include "kstree/tree_model.hpp"

#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace kstree {

void StarTreeConfig::validate() const {
  // num_edges = 1 is admitted for the single-interval systems; the tree
  // assembly and moment paths insist on >= 2 themselves.
  if (num_edges < 1) throw std::invalid_argument("config: edges must be >= 1");
  if (!(edge_length > 0.0)) throw std::invalid_argument("config: length must be > 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("config: lambda must be > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("config: horizon must be > 0");
}

StarTreeConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");

  static const char* known[] = {"edges", "length", "lambda", "model", "horizon"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw std::invalid_argument("config: unknown key '" + it.key() + "'");
  }
  for (const char* k : known) {
    if (!j.contains(k)) throw std::invalid_argument(std::string("config: missing key '") + k + "'");
  }

  StarTreeConfig cfg;
  if (!j["edges"].is_number_integer()) throw std::invalid_argument("config: edges must be an integer");
  cfg.num_edges = j["edges"].get<int>();
  cfg.edge_length = j["length"].get<double>();
  cfg.lambda = j["lambda"].get<double>();
  cfg.horizon = j["horizon"].get<double>();
  const std::string m = j["model"].get<std::string>();
  if (m == "I") {
    cfg.model = Model::I;
  } else if (m == "II") {
    cfg.model = Model::II;
  } else {
    throw std::invalid_argument("config: model must be \"I\" or \"II\"");
  }
  cfg.validate();
  return cfg;
}

std::string to_json(const StarTreeConfig& cfg) {
  nlohmann::json j;
  j["edges"] = cfg.num_edges;
  j["length"] = cfg.edge_length;
  j["lambda"] = cfg.lambda;
  j["model"] = cfg.model == Model::I ? "I" : "II";
  j["horizon"] = cfg.horizon;
  return j.dump();
}

GraphFunction GraphFunction::scaled_copies(const std::vector<double>& coeffs,
                                           const EdgeFunction& phi) {
  std::vector<EdgeFunction> comps;
  comps.reserve(coeffs.size());
  for (double c : coeffs) comps.push_back(phi * c);
  return GraphFunction(std::move(comps));
}

GraphFunction& GraphFunction::operator+=(const GraphFunction& other) {
  if (components_.empty()) {
    components_ = other.components_;
    return *this;
  }
  if (other.components_.size() != components_.size()) {
    throw std::invalid_argument("graph function component counts differ");
  }
  for (std::size_t k = 0; k < components_.size(); ++k) {
    components_[k] += other.components_[k];
  }
  return *this;
}

GraphFunction& GraphFunction::operator*=(double s) {
  for (EdgeFunction& c : components_) c *= s;
  return *this;
}

double graph_inner_product(const GraphFunction& f, const GraphFunction& g,
                           const StarTreeConfig& cfg) {
  const auto n = static_cast<std::size_t>(cfg.num_edges);
  if (f.size() != n || g.size() != n) {
    throw std::invalid_argument("graph inner product: component count mismatch");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += inner_product(f.component(k), g.component(k), cfg.edge_length);
  }
  return acc;
}

}  // namespace kstree
