#include "kstree/experiment.hpp"

#include <stdexcept>

namespace kstree {

GraphFunction unit_mix(const std::vector<GraphEigenpair>& eigenpairs,
                       const StarTreeConfig& cfg) {
  GraphFunction y0 = GraphFunction::zero(cfg.num_edges);
  for (const GraphEigenpair& ep : eigenpairs) {
    for (const GraphFunction& f : ep.basis) y0 += f;
  }
  return y0;
}

GraphFunction from_coefficients(const std::vector<GraphEigenpair>& eigenpairs,
                                const StarTreeConfig& cfg,
                                const std::vector<EigenCoefficient>& coeffs) {
  GraphFunction y0 = GraphFunction::zero(cfg.num_edges);
  for (const EigenCoefficient& c : coeffs) {
    if (c.eigen < 0 || c.eigen >= static_cast<int>(eigenpairs.size())) {
      throw std::invalid_argument("y0 coefficient refers to an unassembled eigenvalue");
    }
    const GraphEigenpair& ep = eigenpairs[static_cast<std::size_t>(c.eigen)];
    if (c.basis < 0 || c.basis >= ep.multiplicity) {
      throw std::invalid_argument("y0 coefficient refers to a missing basis function");
    }
    y0 += ep.basis[static_cast<std::size_t>(c.basis)] * c.coeff;
  }
  return y0;
}

EndToEndResult end_to_end_null_control(const StarTreeConfig& cfg,
                                       const GraphFunction& y0, int num_modes,
                                       const ChannelMask& channels,
                                       ModelIIRouting routing, int steps) {
  EndToEndResult r;
  r.synthesis = synthesize(cfg, y0, num_modes, channels, routing);
  const ControlSystem system = make_tree_system(cfg, r.synthesis.eigenpairs);
  r.controlled = simulate(system, y0, r.synthesis.control, steps);
  r.uncontrolled = simulate(system, y0, ControlSignal::zero(cfg), steps);
  const int retained = static_cast<int>(system.mode_sigma.size());
  r.report = verify_null(r.controlled, retained);
  r.uncontrolled_report = verify_null(r.uncontrolled, retained);
  return r;
}

EdgeFunction interval_unit_mix(const std::vector<IntervalMode>& modes) {
  EdgeFunction y0;
  for (const IntervalMode& m : modes) {
    for (const ScalarEigenpair& sp : m.functions) y0 += sp.eigenfunction;
  }
  return y0;
}

IntervalEndToEndResult interval_end_to_end(const StarTreeConfig& cfg,
                                           IntervalVariant variant,
                                           const EdgeFunction& y0, int num_modes,
                                           int steps) {
  IntervalEndToEndResult r;
  r.synthesis = interval_synthesize(cfg, variant, y0, num_modes);
  const ControlSystem system = make_interval_system(cfg, variant, r.synthesis.modes);
  const GraphFunction y0g(std::vector<EdgeFunction>{y0});
  r.controlled = simulate(system, y0g, r.synthesis.control, steps);
  r.uncontrolled = simulate(system, y0g, ControlSignal::zero(cfg), steps);
  const int retained = static_cast<int>(system.mode_sigma.size());
  r.report = verify_null(r.controlled, retained);
  r.uncontrolled_report = verify_null(r.uncontrolled, retained);
  return r;
}

}  // namespace kstree
