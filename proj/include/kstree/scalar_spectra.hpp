#ifndef KSTREE_SCALAR_SPECTRA_HPP
#define KSTREE_SCALAR_SPECTRA_HPP

#include <vector>

#include "kstree/tree_model.hpp"

namespace kstree {

/// The four scalar fourth-order problems on (0, L).  P1/P2 carry the
/// clamped right end of the first tree model, E1/E2 the free right end of
/// the second one.
///
///   P1:  f_x(0) = f_xxx(0) = 0,  f(L) = f_x(L) = 0
///   P2:  f(0)   = f_xx(0)  = 0,  f(L) = f_x(L) = 0
///   E1:  f_x(0) = f_xxx(0) = 0,  f_x(L) = f_xxx(L) = 0
///   E2:  f(0)   = f_xx(0)  = 0,  f_x(L) = f_xxx(L) = 0
enum class ScalarProblem { P1, P2, E1, E2 };

std::string to_string(ScalarProblem p);

enum class SpectralBranch { Positive, Zero, Negative };

/// Frequency parametrization of sigma: on the positive branch
/// beta^2 - alpha^2 = lambda and sigma = alpha^2 beta^2; on the negative
/// branch beta^2 + gamma^2 = lambda and sigma = -beta^2 gamma^2 with
/// -lambda^2/4 < sigma < 0.
struct SpectralParams {
  double sigma = 0.0;
  SpectralBranch branch = SpectralBranch::Zero;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

struct BoundaryTraces {
  double value_at_0 = 0.0;
  double dx_at_0 = 0.0;
  double dxx_at_0 = 0.0;
  double dxxx_at_0 = 0.0;
  double value_at_L = 0.0;
  double dx_at_L = 0.0;
  double dxx_at_L = 0.0;
  double dxxx_at_L = 0.0;
};

struct ScalarEigenpair {
  ScalarProblem problem = ScalarProblem::P1;
  /// Mode index: the bracket number for P1/P2 roots, the frequency index
  /// for the explicit E1/E2 formulas, an ordinal for scan results.
  int index = 0;
  SpectralParams params;
  /// L^2(0,L)-normalized, deterministic sign (dxx_at_L > 0 when nonzero,
  /// else value_at_L > 0, else leading coefficient > 0).
  EdgeFunction eigenfunction;
  BoundaryTraces traces;
};

/// First `count` positive eigenvalues in increasing order.  E1/E2 use the
/// closed forms; P1/P2 bisect the tanh-stabilized compatibility equations
/// over the bracket beta*L in (n pi - pi/2, n pi + pi/2).
std::vector<ScalarEigenpair> positive_eigenvalues(ScalarProblem problem,
                                                  const StarTreeConfig& cfg,
                                                  int count);

/// Eigenpairs at sigma = 0: none, one, or two (E1 with lambda in N2).
std::vector<ScalarEigenpair> zero_eigenvalue(ScalarProblem problem,
                                             const StarTreeConfig& cfg);

/// All eigenvalues in (-lambda^2/4, 0), increasing; entries sharing sigma
/// give the multiplicity.  Empty when none exist.
std::vector<ScalarEigenpair> negative_eigenvalues(ScalarProblem problem,
                                                  const StarTreeConfig& cfg);

/// Every eigenvalue up to and including the first `positive_count`
/// positive ones, in increasing order.
std::vector<ScalarEigenpair> full_spectrum(ScalarProblem problem,
                                           const StarTreeConfig& cfg,
                                           int positive_count);

struct AsymptoticCheck {
  double beta_n = 0.0;
  double predicted = 0.0;
  double deviation = 0.0;
};

/// Compares the n-th P1/P2 root with the limit formula
/// beta_n = n pi / L -+ pi / (4 L)  (minus for P1, plus for P2).
AsymptoticCheck asymptotic_check(ScalarProblem problem, const StarTreeConfig& cfg,
                                 int n);

/// Max of |lambda f'' + f'''' - sigma f| over `samples` interior points;
/// the invariant bound is 1e-8 * (1 + |sigma|) for normalized f.
double ode_residual(const EdgeFunction& f, double lambda, double sigma, double L,
                    int samples = 20);

/// Two eigenvalues are the same up to the multiplicity-detection
/// tolerance 1e-8 * (1 + |a|).
bool same_eigenvalue(double a, double b);

}  // namespace kstree

#endif
