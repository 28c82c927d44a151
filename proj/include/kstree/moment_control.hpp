#ifndef KSTREE_MOMENT_CONTROL_HPP
#define KSTREE_MOMENT_CONTROL_HPP

#include <vector>

#include <Eigen/Dense>

#include "kstree/critical_sets.hpp"
#include "kstree/graph_spectra.hpp"

namespace kstree {

/// Functions psi_n(t) = sum_j A(n,j) exp(-sigma_j t) biorthogonal to
/// {exp(-sigma_j t)} on (0, T).
struct BiorthogonalFamily {
  std::vector<double> sigmas;
  double horizon = 0.0;
  Eigen::MatrixXd coeffs;
  /// Condition number of the exponential Gram matrix.
  double gram_condition = 0.0;

  double psi(std::size_t n, double t) const;
};

/// Solves G A^T = I for the Gram matrix
/// G_ij = (1 - exp(-(sigma_i + sigma_j) T)) / (sigma_i + sigma_j)
/// (entry T when the exponents cancel), with diagonal equilibration and
/// one step of iterative refinement in extended precision.
/// Requires strictly increasing sigmas and at most 16 of them; refuses
/// with ConditioningRefusal when the condition number exceeds 1e14.
BiorthogonalFamily build_biorthogonal(const std::vector<double>& sigmas, double T);

/// Every channel of the configuration in fixed order: edges 1..N primary,
/// then (model II) edges 1..N secondary.
std::vector<ChannelId> all_channels(const StarTreeConfig& cfg);

/// Moment values per retained distinct eigenvalue and channel; inactive
/// channels carry exact zeros.
struct MomentTargets {
  std::vector<double> sigmas;
  std::vector<ChannelId> channels;
  Eigen::MatrixXd values;  // sigmas.size() x channels.size()
};

/// Which channel family carries difference-type eigenvalues in model II
/// when both would do (the slope inputs by default).
enum class ModelIIRouting { AChannels, BChannels };

/// Per-eigenvalue moment systems solved with the explicit constructions
/// of the moment method: sum-type targets routed through the designated
/// channels, difference-type systems through the inverse of the
/// bidiagonal difference matrix, resonant pairs through the closed-form
/// 2x2 solve.  Non-canonical channel patterns fall back to a minimum-norm
/// least-squares solve after the rank check.
MomentTargets compute_targets(const StarTreeConfig& cfg, const GraphFunction& y0,
                              const std::vector<GraphEigenpair>& eigenpairs,
                              const ChannelMask& channels,
                              ModelIIRouting routing = ModelIIRouting::AChannels);

/// Boundary controls as finite exponential sums
/// u_c(t) = sum_j W(c,j) exp(-sigma_j (T - t)).
struct ControlSignal {
  double horizon = 0.0;
  std::vector<ChannelId> channels;
  std::vector<double> exponents;
  Eigen::MatrixXd weights;  // channels.size() x exponents.size()

  static ControlSignal zero(const StarTreeConfig& cfg);

  double value(std::size_t channel, double t) const;
  double time_derivative(std::size_t channel, double t) const;
  /// Closed-form moment integral of u_c(T - t) against exp(-sigma t).
  double moment(std::size_t channel, double sigma) const;
  bool channel_is_zero(std::size_t channel) const;
};

struct CriticalReport {
  CriticalSet set = CriticalSet::N0;
  Membership membership;
};

struct SynthesisResult {
  std::vector<GraphEigenpair> eigenpairs;
  MomentTargets targets;
  BiorthogonalFamily family;
  ControlSignal control;
  std::vector<CriticalReport> critical_report;
};

/// Full chain: assemble -> targets -> biorthogonal family -> control.
/// Membership of lambda in every critical set is reported, not assumed;
/// an actual rank deficiency surfaces as UncontrollableDirection.
SynthesisResult synthesize(const StarTreeConfig& cfg, const GraphFunction& y0,
                           int num_modes, const ChannelMask& channels,
                           ModelIIRouting routing = ModelIIRouting::AChannels);

/// Single-interval systems of the two-controls-at-one-end form: the
/// Neumann pair drives (y_x, y_xxx)(t, 0) against the E1 spectrum, the
/// Dirichlet pair (y, y_xx)(t, 0) against E2.
enum class IntervalVariant { NeumannPair, DirichletPair };

ScalarProblem interval_problem(IntervalVariant v);

/// Grouped scalar modes (distinct eigenvalues with their eigenfunctions)
/// used by the interval pipeline.
struct IntervalMode {
  double sigma = 0.0;
  std::vector<ScalarEigenpair> functions;
};

std::vector<IntervalMode> interval_modes(const StarTreeConfig& cfg,
                                         IntervalVariant variant, int num_modes);

/// Per-eigenvalue 1x2 or 2x2 systems on the x = 0 traces; when one trace
/// vanishes (sigma = 0 with lambda in N3) the whole target is routed
/// through the surviving channel.
MomentTargets interval_mode_targets(const StarTreeConfig& cfg, IntervalVariant variant,
                                    const std::vector<IntervalMode>& modes,
                                    const EdgeFunction& y0);

struct IntervalSynthesis {
  std::vector<IntervalMode> modes;
  MomentTargets targets;
  BiorthogonalFamily family;
  ControlSignal control;
};

IntervalSynthesis interval_synthesize(const StarTreeConfig& cfg,
                                      IntervalVariant variant,
                                      const EdgeFunction& y0, int num_modes);

/// The bidiagonal matrix of the difference-type moment system and its
/// explicit inverse (ones on and above the diagonal).
Eigen::MatrixXd difference_matrix(int size);
Eigen::MatrixXd difference_matrix_inverse(int size);

}  // namespace kstree

#endif
