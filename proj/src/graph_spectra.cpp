#include "kstree/graph_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kstree/errors.hpp"

namespace kstree {

namespace {

bool is_sum_problem(ScalarProblem p) {
  return p == ScalarProblem::P1 || p == ScalarProblem::E1;
}

// Orthonormal basis of the zero-mean coefficient subspace spanned by
// {e_l - e_{l+1}}, modified Gram-Schmidt in the edge order l = 1..N-1.
// The triangular change of basis keeps outputs deterministic.
std::vector<std::vector<double>> difference_coefficients(int n) {
  std::vector<std::vector<double>> vs;
  vs.reserve(static_cast<std::size_t>(n) - 1);
  for (int l = 0; l + 1 < n; ++l) {
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    v[l] = 1.0;
    v[l + 1] = -1.0;
    for (const auto& q : vs) {
      double dot = 0.0;
      for (int k = 0; k < n; ++k) dot += v[k] * q[k];
      for (int k = 0; k < n; ++k) v[k] -= dot * q[k];
    }
    double nrm = 0.0;
    for (int k = 0; k < n; ++k) nrm += v[k] * v[k];
    nrm = std::sqrt(nrm);
    for (int k = 0; k < n; ++k) v[k] /= nrm;
    vs.push_back(std::move(v));
  }
  return vs;
}

EdgeTraces edge_traces_of(const EdgeFunction& f, const StarTreeConfig& cfg) {
  EdgeTraces t;
  const double L = cfg.edge_length;
  t.value_at_L = f.value(L);
  const EdgeFunction d1 = f.derivative();
  const EdgeFunction d2 = d1.derivative();
  const EdgeFunction d3 = d2.derivative();
  t.dxx_at_L = d2.value(L);
  t.lambda_value_plus_dxx_at_L = cfg.lambda * t.value_at_L + t.dxx_at_L;
  t.dx_at_0 = d1.value(0.0);
  t.dxxx_at_0 = d3.value(0.0);
  return t;
}

void finalize(GraphEigenpair& ep, const StarTreeConfig& cfg) {
  ep.multiplicity = static_cast<int>(ep.basis.size());
  ep.edge_traces.clear();
  ep.edge_traces.reserve(ep.basis.size());
  for (const GraphFunction& g : ep.basis) {
    std::vector<EdgeTraces> per_edge;
    per_edge.reserve(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      per_edge.push_back(edge_traces_of(g.component(k), cfg));
    }
    ep.edge_traces.push_back(std::move(per_edge));
  }
}

}  // namespace

std::string to_string(EigenOrigin o) {
  switch (o) {
    case EigenOrigin::SumProblem:
      return "sum";
    case EigenOrigin::DifferenceProblem:
      return "difference";
    case EigenOrigin::Mixed:
      return "mixed";
  }
  return "?";
}

ChannelMask ChannelMask::all_active(const StarTreeConfig& cfg) {
  ChannelMask m;
  m.primary.assign(static_cast<std::size_t>(cfg.num_edges), true);
  if (cfg.model == Model::II) {
    m.secondary.assign(static_cast<std::size_t>(cfg.num_edges), true);
  }
  return m;
}

ChannelMask ChannelMask::inactive_edge(const StarTreeConfig& cfg, int edge) {
  ChannelMask m = all_active(cfg);
  if (edge < 1 || edge > cfg.num_edges) {
    throw std::invalid_argument("inactive edge index out of range");
  }
  m.primary[static_cast<std::size_t>(edge) - 1] = false;
  if (cfg.model == Model::II) {
    m.secondary[static_cast<std::size_t>(edge) - 1] = false;
  }
  return m;
}

void ChannelMask::validate(const StarTreeConfig& cfg) const {
  const auto n = static_cast<std::size_t>(cfg.num_edges);
  if (primary.size() != n) {
    throw std::invalid_argument("channel mask: primary size must equal edge count");
  }
  if (cfg.model == Model::II && secondary.size() != n) {
    throw std::invalid_argument("channel mask: model II needs a secondary mask");
  }
}

int ChannelMask::active_count(const StarTreeConfig& cfg) const {
  return static_cast<int>(active_channels(cfg, *this).size());
}

std::vector<ChannelId> active_channels(const StarTreeConfig& cfg,
                                       const ChannelMask& mask) {
  mask.validate(cfg);
  std::vector<ChannelId> out;
  for (int k = 0; k < cfg.num_edges; ++k) {
    if (mask.primary[static_cast<std::size_t>(k)]) out.push_back({k + 1, false});
  }
  if (cfg.model == Model::II) {
    for (int k = 0; k < cfg.num_edges; ++k) {
      if (mask.secondary[static_cast<std::size_t>(k)]) out.push_back({k + 1, true});
    }
  }
  return out;
}

std::vector<GraphEigenpair> assemble(const StarTreeConfig& cfg, int num_distinct) {
  if (num_distinct < 1) throw std::invalid_argument("assemble: num_distinct >= 1");
  cfg.validate();
  if (cfg.num_edges < 2) {
    throw std::invalid_argument("assemble needs a tree with at least two edges");
  }
  const ScalarProblem sum_p =
      cfg.model == Model::I ? ScalarProblem::P1 : ScalarProblem::E1;
  const ScalarProblem diff_p =
      cfg.model == Model::I ? ScalarProblem::P2 : ScalarProblem::E2;
  const int n_edges = cfg.num_edges;

  int positive_request = num_distinct + 2;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<ScalarEigenpair> pool = full_spectrum(sum_p, cfg, positive_request);
    std::vector<ScalarEigenpair> diff = full_spectrum(diff_p, cfg, positive_request);
    pool.insert(pool.end(), diff.begin(), diff.end());
    std::sort(pool.begin(), pool.end(),
              [](const ScalarEigenpair& a, const ScalarEigenpair& b) {
                if (!same_eigenvalue(a.params.sigma, b.params.sigma)) {
                  return a.params.sigma < b.params.sigma;
                }
                if (a.problem != b.problem) {
                  return is_sum_problem(a.problem) && !is_sum_problem(b.problem);
                }
                return a.params.beta < b.params.beta;
              });

    std::vector<GraphEigenpair> out;
    std::size_t i = 0;
    while (i < pool.size() && static_cast<int>(out.size()) < num_distinct) {
      std::size_t j = i;
      while (j < pool.size() &&
             same_eigenvalue(pool[i].params.sigma, pool[j].params.sigma)) {
        ++j;
      }
      GraphEigenpair ep;
      ep.sigma = pool[i].params.sigma;
      bool has_sum = false, has_diff = false;
      const auto diff_coeffs = difference_coefficients(n_edges);
      for (std::size_t s = i; s < j; ++s) {
        const ScalarEigenpair& sp = pool[s];
        ep.scalar_sources.push_back(sp);
        if (is_sum_problem(sp.problem)) {
          has_sum = true;
          std::vector<double> c(static_cast<std::size_t>(n_edges),
                                1.0 / std::sqrt(static_cast<double>(n_edges)));
          ep.basis.push_back(GraphFunction::scaled_copies(c, sp.eigenfunction));
        } else {
          has_diff = true;
          for (const auto& c : diff_coeffs) {
            ep.basis.push_back(GraphFunction::scaled_copies(c, sp.eigenfunction));
          }
        }
      }
      ep.origin = has_sum && has_diff
                      ? EigenOrigin::Mixed
                      : (has_sum ? EigenOrigin::SumProblem
                                 : EigenOrigin::DifferenceProblem);
      if (ep.origin == EigenOrigin::Mixed) {
        std::ostringstream os;
        os << "sigma = " << ep.sigma << " is an eigenvalue of both scalar problems"
           << " (lambda lies in a critical set); eigenspace assembled jointly";
        ep.warning = os.str();
      }
      finalize(ep, cfg);
      out.push_back(std::move(ep));
      i = j;
    }
    if (static_cast<int>(out.size()) >= num_distinct) return out;
    positive_request *= 2;
  }
  throw NumericalError("assemble: could not collect the requested number of eigenvalues");
}

Eigen::MatrixXd trace_matrix(const GraphEigenpair& ep, const StarTreeConfig& cfg,
                             const ChannelMask& channels) {
  const auto chans = active_channels(cfg, channels);
  Eigen::MatrixXd M(ep.multiplicity, static_cast<Eigen::Index>(chans.size()));
  for (int i = 0; i < ep.multiplicity; ++i) {
    for (std::size_t c = 0; c < chans.size(); ++c) {
      const EdgeTraces& t =
          ep.edge_traces[static_cast<std::size_t>(i)]
                        [static_cast<std::size_t>(chans[c].edge) - 1];
      double v = 0.0;
      if (cfg.model == Model::I) {
        v = t.dxx_at_L;
      } else {
        v = chans[c].secondary ? t.value_at_L : t.lambda_value_plus_dxx_at_L;
      }
      M(i, static_cast<Eigen::Index>(c)) = v;
    }
  }
  return M;
}

RankReport rank_deficiency(const GraphEigenpair& ep, const StarTreeConfig& cfg,
                           const ChannelMask& channels) {
  const Eigen::MatrixXd M = trace_matrix(ep, cfg, channels);
  RankReport r;
  const int m = ep.multiplicity;
  if (M.cols() == 0) {
    r.rank = 0;
    r.deficiency = m;
    for (int i = 0; i < m; ++i) {
      std::vector<double> dir(static_cast<std::size_t>(m), 0.0);
      dir[static_cast<std::size_t>(i)] = 1.0;
      r.null_directions.push_back(std::move(dir));
    }
    return r;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU);
  const double smax = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  // Absolute floor: rows whose traces vanish analytically come in at
  // roundoff size and must not fake rank.
  const double thresh = std::max(1e-8 * smax, 1e-10);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > thresh) ++rank;
  }
  r.rank = rank;
  r.deficiency = m - rank;
  for (int j = rank; j < m; ++j) {
    std::vector<double> dir(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) dir[static_cast<std::size_t>(i)] = svd.matrixU()(i, j);
    r.null_directions.push_back(std::move(dir));
  }
  return r;
}

}  // namespace kstree
