#ifndef KSTREE_EXPERIMENT_HPP
#define KSTREE_EXPERIMENT_HPP

#include "kstree/pde_sim.hpp"

namespace kstree {

/// Unit-coefficient mix of every basis function of the given eigenpairs.
GraphFunction unit_mix(const std::vector<GraphEigenpair>& eigenpairs,
                       const StarTreeConfig& cfg);

/// y0 assembled from (eigenvalue index, basis index, coefficient) triples.
struct EigenCoefficient {
  int eigen = 0;
  int basis = 0;
  double coeff = 1.0;
};
GraphFunction from_coefficients(const std::vector<GraphEigenpair>& eigenpairs,
                                const StarTreeConfig& cfg,
                                const std::vector<EigenCoefficient>& coeffs);

struct EndToEndResult {
  SynthesisResult synthesis;
  SimState controlled;
  SimState uncontrolled;
  VerificationReport report;
  VerificationReport uncontrolled_report;
};

/// assemble -> targets -> biorthogonal -> synthesize -> simulate -> verify,
/// plus the zero-control baseline of the same initial state.
EndToEndResult end_to_end_null_control(const StarTreeConfig& cfg,
                                       const GraphFunction& y0, int num_modes,
                                       const ChannelMask& channels,
                                       ModelIIRouting routing = ModelIIRouting::AChannels,
                                       int steps = 64);

struct IntervalEndToEndResult {
  IntervalSynthesis synthesis;
  SimState controlled;
  SimState uncontrolled;
  VerificationReport report;
  VerificationReport uncontrolled_report;
};

EdgeFunction interval_unit_mix(const std::vector<IntervalMode>& modes);

IntervalEndToEndResult interval_end_to_end(const StarTreeConfig& cfg,
                                           IntervalVariant variant,
                                           const EdgeFunction& y0, int num_modes,
                                           int steps = 64);

}  // namespace kstree

#endif
