#ifndef KSTREE_GRAPH_SPECTRA_HPP
#define KSTREE_GRAPH_SPECTRA_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kstree/scalar_spectra.hpp"
#include "kstree/tree_model.hpp"

namespace kstree {

enum class EigenOrigin { SumProblem, DifferenceProblem, Mixed };

std::string to_string(EigenOrigin o);

/// Which boundary inputs are active.  Model I uses `primary` only (one
/// control per edge); model II reads `primary` as the a-channels and
/// `secondary` as the b-channels.
struct ChannelMask {
  std::vector<bool> primary;
  std::vector<bool> secondary;

  static ChannelMask all_active(const StarTreeConfig& cfg);
  /// All channels active except every input on edge `edge` (1-based).
  static ChannelMask inactive_edge(const StarTreeConfig& cfg, int edge);

  int active_count(const StarTreeConfig& cfg) const;
  void validate(const StarTreeConfig& cfg) const;
};

/// A named control channel: edge k (1-based) and, for model II, whether it
/// is the slope (a) or third-derivative (b) input.
struct ChannelId {
  int edge = 1;
  bool secondary = false;
};

std::vector<ChannelId> active_channels(const StarTreeConfig& cfg,
                                       const ChannelMask& mask);

struct EdgeTraces {
  double value_at_L = 0.0;
  double dxx_at_L = 0.0;
  double lambda_value_plus_dxx_at_L = 0.0;
  double dx_at_0 = 0.0;
  double dxxx_at_0 = 0.0;
};

/// One distinct eigenvalue of the tree operator with an orthonormal basis
/// of its eigenspace and the boundary traces the moment problems need.
struct GraphEigenpair {
  double sigma = 0.0;
  int multiplicity = 0;
  EigenOrigin origin = EigenOrigin::SumProblem;
  std::vector<GraphFunction> basis;
  /// The scalar eigenpairs the eigenspace was assembled from.
  std::vector<ScalarEigenpair> scalar_sources;
  /// edge_traces[i][k] = traces of basis function i on edge k+1.
  std::vector<std::vector<EdgeTraces>> edge_traces;
  /// Set when lambda sits in N_mixt and two scalar problems collide at
  /// this sigma (model II); assembly continues with origin = Mixed.
  std::string warning;
};

/// First `num_distinct` distinct eigenvalues of the tree operator in
/// increasing order, eigenspaces orthonormalized, with the multiplicity
/// structure of the sum/difference split (model I: 1 or N-1; model II:
/// 1, 2, N-1 or 2(N-1), plus Mixed overlaps when lambda lies in N_mixt).
std::vector<GraphEigenpair> assemble(const StarTreeConfig& cfg, int num_distinct);

/// Rows: basis functions of `ep`; columns: active channels in mask order
/// (model I: dxx at L per edge; model II: a-columns lambda*value+dxx, then
/// b-columns value, both at L).
Eigen::MatrixXd trace_matrix(const GraphEigenpair& ep, const StarTreeConfig& cfg,
                             const ChannelMask& channels);

struct RankReport {
  int rank = 0;
  int deficiency = 0;
  /// Left-null coefficient vectors over the eigenspace basis: the
  /// initial-data directions that cannot be steered.
  std::vector<std::vector<double>> null_directions;
};

RankReport rank_deficiency(const GraphEigenpair& ep, const StarTreeConfig& cfg,
                           const ChannelMask& channels);

}  // namespace kstree

#endif
