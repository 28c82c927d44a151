#ifndef KSTREE_PDE_SIM_HPP
#define KSTREE_PDE_SIM_HPP

#include <vector>

#include <Eigen/Dense>

#include "kstree/moment_control.hpp"

namespace kstree {

/// Lifting profiles: polynomials carrying the prescribed boundary data of
/// one control channel, with every derivative through order three
/// vanishing at the uncontrolled end.
EdgeFunction model1_lifting(double L);            // P(L)=0, P'(L)=1, flat at 0
EdgeFunction model2_lifting_slope(double L);      // Q'(L)=1, Q'''(L)=0, flat at 0
EdgeFunction model2_lifting_third(double L);      // Q'(L)=0, Q'''(L)=1, flat at 0
EdgeFunction interval_lifting(IntervalVariant v, bool secondary, double L);

/// Everything the Galerkin integrator needs: the retained modes (each an
/// eigenfunction of the homogeneous operator) and one lifting profile per
/// control channel.
struct ControlSystem {
  StarTreeConfig cfg;
  std::vector<ChannelId> channels;
  std::vector<GraphFunction> liftings;
  std::vector<double> mode_sigma;
  std::vector<GraphFunction> mode_fn;
  /// Index of the distinct eigenvalue each mode belongs to.
  std::vector<int> mode_eigen;
};

ControlSystem make_tree_system(const StarTreeConfig& cfg,
                               const std::vector<GraphEigenpair>& eigenpairs);
ControlSystem make_interval_system(const StarTreeConfig& cfg, IntervalVariant variant,
                                   const std::vector<IntervalMode>& modes);

/// Result of the forward run.  The integration itself is exact for
/// exponential-sum controls; `steps` only sets the output sampling.
struct SimState {
  ControlSystem system;
  ControlSignal controls;
  std::vector<double> times;
  Eigen::MatrixXd z_modal;  // times x modes, lifted homogeneous part
  Eigen::MatrixXd y_modal;  // times x modes, <y(t), phi_n>
  std::vector<double> control_at_horizon;

  double terminal_mode(std::size_t n) const {
    return y_modal(y_modal.rows() - 1, static_cast<Eigen::Index>(n));
  }
  /// Pointwise reconstruction of the order-th x-derivative of y at sample
  /// step `step` on edge k (0-based): retained modal part plus lifting.
  double reconstruct(std::size_t step, std::size_t edge, double x,
                     int order = 0) const;
  /// Pointwise reconstruction of y at the final time on edge k (0-based).
  double reconstruct_terminal(std::size_t edge, double x) const;
};

/// Integrates z' + A z = F by the closed-form variation-of-constants
/// formula, mode by mode; sources are exponential sums so each modal
/// convolution is elementary.  The u(0) compatibility shift
/// z(0) = y0 - Q u(0) is always applied.
SimState simulate(const ControlSystem& system, const GraphFunction& y0,
                  const ControlSignal& controls, int steps);

struct VerificationReport {
  std::vector<double> modal_residuals;          // |<y(T), phi_n>|
  std::vector<double> uncontrolled_residuals;   // |<y0, phi_n>| e^{-sigma_n T}
  std::vector<double> free_decay_ratio;         // residual / uncontrolled
  double tail_estimate = 0.0;
  bool residuals_below(double tol) const;
};

/// Modal residuals of the first `retained` modes plus a quadrature
/// estimate (64-node Gauss-Legendre per edge) of the part of the
/// reconstructed terminal state outside the retained span.
VerificationReport verify_null(const SimState& state, int retained);

/// Defect of the duality identity restricted to the retained modes, for a
/// terminal adjoint state qT given by modal coefficients.
double duality_check(const SimState& state, const std::vector<double>& qT_coeffs);

}  // namespace kstree

#endif
