#include "kstree/moment_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "kstree/errors.hpp"

namespace kstree {

namespace {

constexpr int kMaxBiorthogonalModes = 16;
constexpr double kConditionRefusal = 1e14;
constexpr double kTraceFloor = 1e-8;

// (1 - exp(-s T)) / s, the Gram kernel; T at s = 0 and stable elsewhere.
double gram_entry(double s, double T) {
  if (s == 0.0) return T;
  return -std::expm1(-s * T) / s;
}

std::size_t channel_index(const std::vector<ChannelId>& channels, int edge,
                          bool secondary) {
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i].edge == edge && channels[i].secondary == secondary) return i;
  }
  throw std::logic_error("channel not present");
}

struct CanonicalPattern {
  bool canonical = false;
  /// 1-based edge excluded from the explicit construction; with all
  /// channels active the last edge plays that role and keeps zero moments.
  int spare_edge = 0;
};

CanonicalPattern classify_mask(const StarTreeConfig& cfg, const ChannelMask& mask) {
  CanonicalPattern p;
  std::vector<int> inactive;
  for (int k = 0; k < cfg.num_edges; ++k) {
    const bool a = mask.primary[static_cast<std::size_t>(k)];
    const bool b = cfg.model == Model::II
                       ? static_cast<bool>(mask.secondary[static_cast<std::size_t>(k)])
                       : a;
    if (a && b) continue;
    if (!a && !b) {
      inactive.push_back(k + 1);
      continue;
    }
    return p;  // a half-inactive edge has no explicit construction
  }
  if (inactive.empty()) {
    p.canonical = true;
    p.spare_edge = cfg.num_edges;
  } else if (inactive.size() == 1) {
    p.canonical = true;
    p.spare_edge = inactive.front();
  }
  return p;
}

void check_rank(const GraphEigenpair& ep, const StarTreeConfig& cfg,
                const ChannelMask& mask) {
  const RankReport r = rank_deficiency(ep, cfg, mask);
  if (r.deficiency > 0) {
    std::ostringstream os;
    os << "eigenvalue sigma = " << ep.sigma << " has trace rank " << r.rank
       << " < multiplicity " << ep.multiplicity
       << " under the requested channel pattern";
    throw UncontrollableDirection(os.str(), ep.sigma, r.null_directions.front());
  }
}

double solve_2x2(double a11, double a12, double a21, double a22, double b1,
                 double b2, double& x1, double& x2, double sigma) {
  const double det = a11 * a22 - a12 * a21;
  const double scale = std::max({std::abs(a11) * std::abs(a22),
                                 std::abs(a12) * std::abs(a21), 1e-300});
  if (std::abs(det) <= 1e-12 * scale) {
    throw UncontrollableDirection("2x2 trace system is singular", sigma, {1.0, 0.0});
  }
  x1 = (b1 * a22 - b2 * a12) / det;
  x2 = (a11 * b2 - a21 * b1) / det;
  return det;
}

}  // namespace

double BiorthogonalFamily::psi(std::size_t n, double t) const {
  double v = 0.0;
  for (std::size_t j = 0; j < sigmas.size(); ++j) {
    v += coeffs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j)) *
         std::exp(-sigmas[j] * t);
  }
  return v;
}

BiorthogonalFamily build_biorthogonal(const std::vector<double>& sigmas, double T) {
  const int m = static_cast<int>(sigmas.size());
  if (m < 1) throw std::invalid_argument("biorthogonal family needs at least one exponent");
  if (m > kMaxBiorthogonalModes) {
    throw std::invalid_argument("biorthogonal family is truncated at 16 modes");
  }
  if (!(T > 0.0)) throw std::invalid_argument("biorthogonal family needs T > 0");
  for (int i = 0; i + 1 < m; ++i) {
    if (!(sigmas[static_cast<std::size_t>(i) + 1] > sigmas[static_cast<std::size_t>(i)]) ||
        same_eigenvalue(sigmas[static_cast<std::size_t>(i)],
                        sigmas[static_cast<std::size_t>(i) + 1])) {
      throw std::invalid_argument(
          "biorthogonal exponents must be strictly increasing; fold multiplicities "
          "into the per-eigenvalue trace systems instead of repeating exponents");
    }
  }

  Eigen::MatrixXd G(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      G(i, j) = gram_entry(sigmas[static_cast<std::size_t>(i)] +
                               sigmas[static_cast<std::size_t>(j)],
                           T);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  const double ev_min = es.eigenvalues().cwiseAbs().minCoeff();
  const double ev_max = es.eigenvalues().cwiseAbs().maxCoeff();
  const double cond = ev_min > 0.0 ? ev_max / ev_min
                                   : std::numeric_limits<double>::infinity();
  if (!(cond < kConditionRefusal)) {
    std::ostringstream os;
    os << "exponential Gram matrix condition " << cond
       << " exceeds 1e14; reduce the number of modes or increase T";
    throw ConditioningRefusal(os.str(), cond);
  }

  // Equilibrated solve, then one refinement step with the residual
  // accumulated in extended precision.
  Eigen::VectorXd d = G.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd B = d.asDiagonal() * G * d.asDiagonal();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  Eigen::MatrixXd Y = lu.solve(Eigen::MatrixXd(d.asDiagonal()));
  {
    using LongMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const LongMat Bl = B.cast<long double>();
    const LongMat Yl = Y.cast<long double>();
    LongMat Rl = -Bl * Yl;
    for (int i = 0; i < m; ++i) Rl(i, i) += static_cast<long double>(d(i));
    Y += lu.solve(Rl.cast<double>());
  }
  // A^T = D * Y, so psi_n coefficients sit in row n of A = (D Y)^T.
  BiorthogonalFamily fam;
  fam.sigmas = sigmas;
  fam.horizon = T;
  fam.coeffs = (d.asDiagonal() * Y).transpose();
  fam.gram_condition = cond;
  return fam;
}

std::vector<ChannelId> all_channels(const StarTreeConfig& cfg) {
  std::vector<ChannelId> out;
  if (cfg.num_edges == 1) {
    // Interval systems carry two controls at x = 0 in both variants.
    out.push_back({1, false});
    out.push_back({1, true});
    return out;
  }
  for (int k = 1; k <= cfg.num_edges; ++k) out.push_back({k, false});
  if (cfg.model == Model::II) {
    for (int k = 1; k <= cfg.num_edges; ++k) out.push_back({k, true});
  }
  return out;
}

MomentTargets compute_targets(const StarTreeConfig& cfg, const GraphFunction& y0,
                              const std::vector<GraphEigenpair>& eigenpairs,
                              const ChannelMask& channels, ModelIIRouting routing) {
  cfg.validate();
  if (cfg.num_edges < 2) {
    throw std::invalid_argument("compute_targets is the tree path; use the interval API");
  }
  channels.validate(cfg);
  const double T = cfg.horizon;
  const auto chan_list = all_channels(cfg);
  const auto active = active_channels(cfg, channels);
  const CanonicalPattern pattern = classify_mask(cfg, channels);

  MomentTargets targets;
  targets.channels = chan_list;
  targets.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(eigenpairs.size()),
                                         static_cast<Eigen::Index>(chan_list.size()));

  for (std::size_t n = 0; n < eigenpairs.size(); ++n) {
    const GraphEigenpair& ep = eigenpairs[n];
    targets.sigmas.push_back(ep.sigma);
    check_rank(ep, cfg, channels);
    const double decay = std::exp(-T * ep.sigma);

    auto set_target = [&](int edge, bool secondary, double v) {
      targets.values(static_cast<Eigen::Index>(n),
                     static_cast<Eigen::Index>(
                         channel_index(chan_list, edge, secondary))) += v;
    };

    const bool explicit_route = pattern.canonical && ep.origin != EigenOrigin::Mixed;
    if (!explicit_route) {
      // Minimum-norm least squares on the active trace system.
      const Eigen::MatrixXd M = trace_matrix(ep, cfg, channels);
      Eigen::VectorXd rhs(ep.multiplicity);
      for (int l = 0; l < ep.multiplicity; ++l) {
        rhs(l) = decay *
                 graph_inner_product(y0, ep.basis[static_cast<std::size_t>(l)], cfg);
      }
      Eigen::VectorXd sol = M.completeOrthogonalDecomposition().solve(rhs);
      const double resid = (M * sol - rhs).cwiseAbs().maxCoeff();
      if (resid > 1e-8 * (1.0 + rhs.cwiseAbs().maxCoeff())) {
        throw UncontrollableDirection(
            "trace system is inconsistent for this initial state", ep.sigma,
            rank_deficiency(ep, cfg, channels).null_directions.empty()
                ? std::vector<double>{1.0}
                : rank_deficiency(ep, cfg, channels).null_directions.front());
      }
      for (std::size_t c = 0; c < active.size(); ++c) {
        set_target(active[c].edge, active[c].secondary,
                   sol(static_cast<Eigen::Index>(c)));
      }
      continue;
    }

    const int spare = pattern.spare_edge;
    std::vector<int> edges;  // construction edges, ascending, spare excluded
    for (int k = 1; k <= cfg.num_edges; ++k) {
      if (k != spare) edges.push_back(k);
    }

    if (ep.origin == EigenOrigin::SumProblem) {
      if (cfg.model == Model::I) {
        // Whole target through the first active channel.
        const double t = ep.edge_traces[0][0].dxx_at_L;
        const double y = graph_inner_product(y0, ep.basis[0], cfg);
        set_target(edges.front(), false, y * decay / t);
      } else if (ep.multiplicity == 1) {
        const double ta = ep.edge_traces[0][0].lambda_value_plus_dxx_at_L;
        const double tb = ep.edge_traces[0][0].value_at_L;
        const double y = graph_inner_product(y0, ep.basis[0], cfg);
        const double nm1 = static_cast<double>(edges.size());
        if (std::abs(ta) > kTraceFloor && std::abs(tb) > kTraceFloor) {
          for (int k : edges) {
            set_target(k, false, y * decay / (2.0 * nm1 * ta));
            set_target(k, true, y * decay / (2.0 * nm1 * tb));
          }
        } else if (std::abs(ta) > kTraceFloor) {
          for (int k : edges) set_target(k, false, y * decay / (nm1 * ta));
        } else {
          for (int k : edges) set_target(k, true, y * decay / (nm1 * tb));
        }
      } else {
        // Two sum-type eigenfunctions: one (A, B) pair shared by every
        // construction edge solves the 2x2 trace system.
        const double nm1 = static_cast<double>(edges.size());
        const double y1 = graph_inner_product(y0, ep.basis[0], cfg);
        const double y2 = graph_inner_product(y0, ep.basis[1], cfg);
        double A = 0.0, B = 0.0;
        solve_2x2(ep.edge_traces[0][0].lambda_value_plus_dxx_at_L,
                  ep.edge_traces[0][0].value_at_L,
                  ep.edge_traces[1][0].lambda_value_plus_dxx_at_L,
                  ep.edge_traces[1][0].value_at_L, y1 * decay / nm1,
                  y2 * decay / nm1, A, B, ep.sigma);
        for (int k : edges) {
          set_target(k, false, A);
          set_target(k, true, B);
        }
      }
      continue;
    }

    // Difference-type eigenspace.  The moment equations say that
    // t * m_k - u_k e^{-sigma T} is constant across edges, with
    // u_k = <y0^k, Phi> and the spare edge pinned at zero moment; this is
    // the explicit inverse of the bidiagonal difference matrix in
    // invariant form.
    const auto& sources = ep.scalar_sources;
    std::vector<std::vector<double>> u;
    for (const ScalarEigenpair& sp : sources) {
      std::vector<double> uk(static_cast<std::size_t>(cfg.num_edges));
      for (int k = 0; k < cfg.num_edges; ++k) {
        uk[static_cast<std::size_t>(k)] = inner_product(
            y0.component(static_cast<std::size_t>(k)), sp.eigenfunction,
            cfg.edge_length);
      }
      u.push_back(std::move(uk));
    }

    if (cfg.model == Model::I) {
      const double t = sources[0].traces.dxx_at_L;
      for (int k : edges) {
        set_target(k, false,
                   decay *
                       (u[0][static_cast<std::size_t>(k - 1)] -
                        u[0][static_cast<std::size_t>(spare - 1)]) /
                       t);
      }
    } else if (sources.size() == 1) {
      const double ta = cfg.lambda * sources[0].traces.value_at_L +
                        sources[0].traces.dxx_at_L;
      const double tb = sources[0].traces.value_at_L;
      bool use_a = routing == ModelIIRouting::AChannels;
      if (use_a && std::abs(ta) <= kTraceFloor && std::abs(tb) > kTraceFloor) use_a = false;
      if (!use_a && std::abs(tb) <= kTraceFloor && std::abs(ta) > kTraceFloor) use_a = true;
      const double t = use_a ? ta : tb;
      for (int k : edges) {
        set_target(k, !use_a,
                   decay *
                       (u[0][static_cast<std::size_t>(k - 1)] -
                        u[0][static_cast<std::size_t>(spare - 1)]) /
                       t);
      }
    } else {
      // Resonant pair (lambda in N_odd): per edge a 2x2 solve with the
      // closed-form determinant (beta_m^2 - beta_n^2)(-1)^(m+n) structure.
      const double ta1 = cfg.lambda * sources[0].traces.value_at_L +
                         sources[0].traces.dxx_at_L;
      const double tb1 = sources[0].traces.value_at_L;
      const double ta2 = cfg.lambda * sources[1].traces.value_at_L +
                         sources[1].traces.dxx_at_L;
      const double tb2 = sources[1].traces.value_at_L;
      for (int k : edges) {
        const double r1 = decay * (u[0][static_cast<std::size_t>(k - 1)] -
                                   u[0][static_cast<std::size_t>(spare - 1)]);
        const double r2 = decay * (u[1][static_cast<std::size_t>(k - 1)] -
                                   u[1][static_cast<std::size_t>(spare - 1)]);
        double ma = 0.0, mb = 0.0;
        solve_2x2(ta1, tb1, ta2, tb2, r1, r2, ma, mb, ep.sigma);
        set_target(k, false, ma);
        set_target(k, true, mb);
      }
    }
  }
  return targets;
}

ControlSignal ControlSignal::zero(const StarTreeConfig& cfg) {
  ControlSignal c;
  c.horizon = cfg.horizon;
  c.channels = all_channels(cfg);
  c.weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(c.channels.size()), 0);
  return c;
}

double ControlSignal::value(std::size_t channel, double t) const {
  double v = 0.0;
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    v += weights(static_cast<Eigen::Index>(channel), static_cast<Eigen::Index>(j)) *
         std::exp(-exponents[j] * (horizon - t));
  }
  return v;
}

double ControlSignal::time_derivative(std::size_t channel, double t) const {
  double v = 0.0;
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    v += weights(static_cast<Eigen::Index>(channel), static_cast<Eigen::Index>(j)) *
         exponents[j] * std::exp(-exponents[j] * (horizon - t));
  }
  return v;
}

double ControlSignal::moment(std::size_t channel, double sigma) const {
  double v = 0.0;
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    v += weights(static_cast<Eigen::Index>(channel), static_cast<Eigen::Index>(j)) *
         gram_entry(exponents[j] + sigma, horizon);
  }
  return v;
}

bool ControlSignal::channel_is_zero(std::size_t channel) const {
  for (Eigen::Index j = 0; j < weights.cols(); ++j) {
    if (weights(static_cast<Eigen::Index>(channel), j) != 0.0) return false;
  }
  return true;
}

SynthesisResult synthesize(const StarTreeConfig& cfg, const GraphFunction& y0,
                           int num_modes, const ChannelMask& channels,
                           ModelIIRouting routing) {
  if (num_modes < 1 || num_modes > kMaxBiorthogonalModes) {
    throw std::invalid_argument("synthesize: num_modes must lie in 1..16");
  }
  SynthesisResult r;
  for (CriticalSet s :
       {CriticalSet::N0, CriticalSet::N1, CriticalSet::N2, CriticalSet::N3,
        CriticalSet::N4, CriticalSet::Nodd, CriticalSet::Nmixt}) {
    r.critical_report.push_back({s, is_member(s, cfg.lambda, cfg.edge_length)});
  }
  r.eigenpairs = assemble(cfg, num_modes);
  r.targets = compute_targets(cfg, y0, r.eigenpairs, channels, routing);
  r.family = build_biorthogonal(r.targets.sigmas, cfg.horizon);

  ControlSignal u;
  u.horizon = cfg.horizon;
  u.channels = r.targets.channels;
  u.exponents = r.targets.sigmas;
  u.weights = r.targets.values.transpose() * r.family.coeffs;
  r.control = std::move(u);

  // Contract check: the synthesized moments reproduce the targets.
  for (std::size_t n = 0; n < r.targets.sigmas.size(); ++n) {
    for (std::size_t c = 0; c < r.control.channels.size(); ++c) {
      const double want = r.targets.values(static_cast<Eigen::Index>(n),
                                           static_cast<Eigen::Index>(c));
      const double got = r.control.moment(c, r.targets.sigmas[n]);
      if (std::abs(got - want) > 1e-6 * std::max(1.0, std::abs(want))) {
        std::ostringstream os;
        os << "synthesized moment for sigma = " << r.targets.sigmas[n]
           << " deviates from its target by " << std::abs(got - want)
           << " (gram condition " << r.family.gram_condition << ")";
        throw NumericalError(os.str());
      }
    }
  }
  return r;
}

ScalarProblem interval_problem(IntervalVariant v) {
  return v == IntervalVariant::NeumannPair ? ScalarProblem::E1 : ScalarProblem::E2;
}

std::vector<IntervalMode> interval_modes(const StarTreeConfig& cfg,
                                         IntervalVariant variant, int num_modes) {
  if (cfg.num_edges != 1) {
    throw std::invalid_argument("interval mode needs a single-edge configuration");
  }
  if (num_modes < 1) throw std::invalid_argument("interval mode needs num_modes >= 1");
  std::vector<ScalarEigenpair> sp =
      full_spectrum(interval_problem(variant), cfg, num_modes + 2);
  std::vector<IntervalMode> out;
  std::size_t i = 0;
  while (i < sp.size() && static_cast<int>(out.size()) < num_modes) {
    std::size_t j = i;
    IntervalMode mode;
    mode.sigma = sp[i].params.sigma;
    while (j < sp.size() && same_eigenvalue(sp[i].params.sigma, sp[j].params.sigma)) {
      mode.functions.push_back(sp[j]);
      ++j;
    }
    out.push_back(std::move(mode));
    i = j;
  }
  return out;
}

MomentTargets interval_mode_targets(const StarTreeConfig& cfg, IntervalVariant variant,
                                    const std::vector<IntervalMode>& modes,
                                    const EdgeFunction& y0) {
  if (cfg.num_edges != 1) {
    throw std::invalid_argument("interval mode needs a single-edge configuration");
  }
  const double T = cfg.horizon;
  const double L = cfg.edge_length;
  // Sign of the moment identity at x = 0: integrating the boundary terms
  // of the duality pairing gives opposite orientations for the two pairs.
  const double sign = variant == IntervalVariant::NeumannPair ? -1.0 : 1.0;

  MomentTargets targets;
  targets.channels = all_channels(cfg);
  targets.values =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(modes.size()), 2);

  for (std::size_t n = 0; n < modes.size(); ++n) {
    const IntervalMode& mode = modes[n];
    targets.sigmas.push_back(mode.sigma);
    const double decay = std::exp(-T * mode.sigma);

    auto trace_pair = [&](const ScalarEigenpair& sp) {
      if (variant == IntervalVariant::NeumannPair) {
        return std::pair<double, double>(
            cfg.lambda * sp.traces.value_at_0 + sp.traces.dxx_at_0,
            sp.traces.value_at_0);
      }
      return std::pair<double, double>(
          cfg.lambda * sp.traces.dx_at_0 + sp.traces.dxxx_at_0, sp.traces.dx_at_0);
    };

    if (mode.functions.size() == 1) {
      const auto [t1, t2] = trace_pair(mode.functions[0]);
      const double y = inner_product(y0, mode.functions[0].eigenfunction, L);
      const double rhs = sign * y * decay;
      if (std::abs(t1) > kTraceFloor && std::abs(t2) > kTraceFloor) {
        targets.values(static_cast<Eigen::Index>(n), 0) = rhs / (2.0 * t1);
        targets.values(static_cast<Eigen::Index>(n), 1) = rhs / (2.0 * t2);
      } else if (std::abs(t1) > kTraceFloor) {
        targets.values(static_cast<Eigen::Index>(n), 0) = rhs / t1;
      } else if (std::abs(t2) > kTraceFloor) {
        targets.values(static_cast<Eigen::Index>(n), 1) = rhs / t2;
      } else {
        throw UncontrollableDirection(
            "both x = 0 traces vanish for an interval eigenfunction", mode.sigma,
            {1.0});
      }
    } else if (mode.functions.size() == 2) {
      const auto [a11, a12] = trace_pair(mode.functions[0]);
      const auto [a21, a22] = trace_pair(mode.functions[1]);
      const double y1 = inner_product(y0, mode.functions[0].eigenfunction, L);
      const double y2 = inner_product(y0, mode.functions[1].eigenfunction, L);
      double m1 = 0.0, m2 = 0.0;
      solve_2x2(a11, a12, a21, a22, sign * y1 * decay, sign * y2 * decay, m1, m2,
                mode.sigma);
      targets.values(static_cast<Eigen::Index>(n), 0) = m1;
      targets.values(static_cast<Eigen::Index>(n), 1) = m2;
    } else {
      throw std::logic_error("scalar eigenvalues carry at most two eigenfunctions");
    }
  }
  return targets;
}

IntervalSynthesis interval_synthesize(const StarTreeConfig& cfg,
                                      IntervalVariant variant,
                                      const EdgeFunction& y0, int num_modes) {
  IntervalSynthesis r;
  r.modes = interval_modes(cfg, variant, num_modes);
  r.targets = interval_mode_targets(cfg, variant, r.modes, y0);
  r.family = build_biorthogonal(r.targets.sigmas, cfg.horizon);
  ControlSignal u;
  u.horizon = cfg.horizon;
  u.channels = r.targets.channels;
  u.exponents = r.targets.sigmas;
  u.weights = r.targets.values.transpose() * r.family.coeffs;
  r.control = std::move(u);
  return r;
}

Eigen::MatrixXd difference_matrix(int size) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(size, size);
  for (int i = 0; i + 1 < size; ++i) m(i, i + 1) = -1.0;
  return m;
}

Eigen::MatrixXd difference_matrix_inverse(int size) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    for (int j = i; j < size; ++j) m(i, j) = 1.0;
  }
  return m;
}

}  // namespace kstree
