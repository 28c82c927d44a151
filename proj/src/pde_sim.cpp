#include "kstree/pde_sim.hpp"

#include <cmath>
#include <stdexcept>

#include "kstree/quadrature.hpp"

namespace kstree {

namespace {

// (1 - exp(-s t)) / s with the resonant limit t at s = 0.
double conv_kernel(double s, double t) {
  if (s == 0.0) return t;
  return -std::expm1(-s * t) / s;
}

}  // namespace

EdgeFunction model1_lifting(double L) {
  // (x/L)^4 (x - L) = x^5 / L^4 - x^4 / L^3
  return EdgeFunction::monomial(1.0 / std::pow(L, 4), 5) +
         EdgeFunction::monomial(-1.0 / std::pow(L, 3), 4);
}

EdgeFunction model2_lifting_slope(double L) {
  return EdgeFunction::monomial(1.0 / (2.0 * std::pow(L, 3)), 4) +
         EdgeFunction::monomial(-1.0 / (5.0 * std::pow(L, 4)), 5);
}

EdgeFunction model2_lifting_third(double L) {
  return EdgeFunction::monomial(-1.0 / (24.0 * L), 4) +
         EdgeFunction::monomial(1.0 / (30.0 * L * L), 5);
}

EdgeFunction interval_lifting(IntervalVariant v, bool secondary, double L) {
  if (v == IntervalVariant::NeumannPair) {
    if (!secondary) {
      // Q'(0)=1, Q'''(0)=0, Q'(L)=Q'''(L)=0
      return EdgeFunction::monomial(1.0, 1) +
             EdgeFunction::monomial(-1.0 / (2.0 * L), 2);
    }
    // Q'(0)=0, Q'''(0)=1, Q'(L)=Q'''(L)=0
    return EdgeFunction::monomial(-L / 6.0, 2) + EdgeFunction::monomial(1.0 / 6.0, 3) +
           EdgeFunction::monomial(-1.0 / (24.0 * L), 4);
  }
  if (!secondary) {
    // Q(0)=1, Q''(0)=0, Q'(L)=Q'''(L)=0
    return EdgeFunction::constant(1.0);
  }
  // Q(0)=0, Q''(0)=1, Q'(L)=Q'''(L)=0
  return EdgeFunction::monomial(-L, 1) + EdgeFunction::monomial(0.5, 2);
}

ControlSystem make_tree_system(const StarTreeConfig& cfg,
                               const std::vector<GraphEigenpair>& eigenpairs) {
  ControlSystem sys;
  sys.cfg = cfg;
  sys.channels = all_channels(cfg);
  const double L = cfg.edge_length;
  for (const ChannelId& c : sys.channels) {
    GraphFunction q = GraphFunction::zero(cfg.num_edges);
    if (cfg.model == Model::I) {
      q.component(static_cast<std::size_t>(c.edge) - 1) = model1_lifting(L);
    } else {
      q.component(static_cast<std::size_t>(c.edge) - 1) =
          c.secondary ? model2_lifting_third(L) : model2_lifting_slope(L);
    }
    sys.liftings.push_back(std::move(q));
  }
  for (std::size_t e = 0; e < eigenpairs.size(); ++e) {
    for (const GraphFunction& f : eigenpairs[e].basis) {
      sys.mode_sigma.push_back(eigenpairs[e].sigma);
      sys.mode_fn.push_back(f);
      sys.mode_eigen.push_back(static_cast<int>(e));
    }
  }
  return sys;
}

ControlSystem make_interval_system(const StarTreeConfig& cfg, IntervalVariant variant,
                                   const std::vector<IntervalMode>& modes) {
  if (cfg.num_edges != 1) {
    throw std::invalid_argument("interval system needs a single-edge configuration");
  }
  ControlSystem sys;
  sys.cfg = cfg;
  sys.channels = all_channels(cfg);
  for (const ChannelId& c : sys.channels) {
    GraphFunction q(std::vector<EdgeFunction>{
        interval_lifting(variant, c.secondary, cfg.edge_length)});
    sys.liftings.push_back(std::move(q));
  }
  for (std::size_t e = 0; e < modes.size(); ++e) {
    for (const ScalarEigenpair& sp : modes[e].functions) {
      sys.mode_sigma.push_back(modes[e].sigma);
      sys.mode_fn.push_back(GraphFunction(std::vector<EdgeFunction>{sp.eigenfunction}));
      sys.mode_eigen.push_back(static_cast<int>(e));
    }
  }
  return sys;
}

SimState simulate(const ControlSystem& system, const GraphFunction& y0,
                  const ControlSignal& controls, int steps) {
  if (steps < 1) throw std::invalid_argument("simulate: steps must be >= 1");
  if (controls.channels.size() != system.channels.size()) {
    throw std::invalid_argument("simulate: control channels do not match the system");
  }
  for (std::size_t c = 0; c < controls.channels.size(); ++c) {
    if (controls.channels[c].edge != system.channels[c].edge ||
        controls.channels[c].secondary != system.channels[c].secondary) {
      throw std::invalid_argument("simulate: control channel order mismatch");
    }
  }
  const StarTreeConfig& cfg = system.cfg;
  const double T = cfg.horizon;
  const std::size_t n_modes = system.mode_sigma.size();
  const std::size_t n_chan = system.channels.size();
  const std::size_t n_exp = controls.exponents.size();

  // Modal couplings of the lifting profiles.
  Eigen::MatrixXd q(n_modes, n_chan);
  Eigen::MatrixXd r(n_modes, n_chan);
  for (std::size_t c = 0; c < n_chan; ++c) {
    GraphFunction src = GraphFunction::zero(cfg.num_edges);
    for (std::size_t k = 0; k < src.size(); ++k) {
      const EdgeFunction& lift = system.liftings[c].component(k);
      src.component(k) = lift.derivative(2) * cfg.lambda + lift.derivative(4);
    }
    for (std::size_t n = 0; n < n_modes; ++n) {
      q(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c)) =
          graph_inner_product(system.liftings[c], system.mode_fn[n], cfg);
      r(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c)) =
          graph_inner_product(src, system.mode_fn[n], cfg);
    }
  }

  // Source coefficients: f_n(t) = sum_j F(n,j) exp(-sigma_j (T - t)).
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_modes),
                                            static_cast<Eigen::Index>(n_exp));
  for (std::size_t n = 0; n < n_modes; ++n) {
    for (std::size_t j = 0; j < n_exp; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < n_chan; ++c) {
        const double w = controls.weights(static_cast<Eigen::Index>(c),
                                          static_cast<Eigen::Index>(j));
        acc += (-q(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c)) *
                    controls.exponents[j] -
                r(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c))) *
               w;
      }
      F(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j)) = acc;
    }
  }

  SimState st;
  st.system = system;
  st.controls = controls;
  st.times.resize(static_cast<std::size_t>(steps) + 1);
  st.z_modal.resize(steps + 1, static_cast<Eigen::Index>(n_modes));
  st.y_modal.resize(steps + 1, static_cast<Eigen::Index>(n_modes));

  std::vector<double> u0(n_chan), ut(n_chan);
  for (std::size_t c = 0; c < n_chan; ++c) u0[c] = controls.value(c, 0.0);

  std::vector<double> z0(n_modes);
  for (std::size_t n = 0; n < n_modes; ++n) {
    double lift0 = 0.0;
    for (std::size_t c = 0; c < n_chan; ++c) {
      lift0 += q(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c)) * u0[c];
    }
    z0[n] = graph_inner_product(y0, system.mode_fn[n], cfg) - lift0;
  }

  for (int s = 0; s <= steps; ++s) {
    const double t = T * s / steps;
    st.times[static_cast<std::size_t>(s)] = t;
    for (std::size_t c = 0; c < n_chan; ++c) ut[c] = controls.value(c, t);
    for (std::size_t n = 0; n < n_modes; ++n) {
      const double sn = system.mode_sigma[n];
      double z = std::exp(-sn * t) * z0[n];
      for (std::size_t j = 0; j < n_exp; ++j) {
        const double fj =
            F(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j));
        if (fj == 0.0) continue;
        z += fj * std::exp(-controls.exponents[j] * (T - t)) *
             conv_kernel(sn + controls.exponents[j], t);
      }
      double lift = 0.0;
      for (std::size_t c = 0; c < n_chan; ++c) {
        lift += q(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c)) * ut[c];
      }
      st.z_modal(s, static_cast<Eigen::Index>(n)) = z;
      st.y_modal(s, static_cast<Eigen::Index>(n)) = z + lift;
    }
  }
  st.control_at_horizon.assign(n_chan, 0.0);
  for (std::size_t c = 0; c < n_chan; ++c) {
    st.control_at_horizon[c] = controls.value(c, T);
  }
  return st;
}

double SimState::reconstruct(std::size_t step, std::size_t edge, double x,
                             int order) const {
  double v = 0.0;
  const auto s = static_cast<Eigen::Index>(step);
  for (std::size_t n = 0; n < system.mode_fn.size(); ++n) {
    v += z_modal(s, static_cast<Eigen::Index>(n)) *
         system.mode_fn[n].component(edge).derivative(order).value(x);
  }
  for (std::size_t c = 0; c < system.channels.size(); ++c) {
    v += controls.value(c, times[step]) *
         system.liftings[c].component(edge).derivative(order).value(x);
  }
  return v;
}

double SimState::reconstruct_terminal(std::size_t edge, double x) const {
  return reconstruct(static_cast<std::size_t>(z_modal.rows() - 1), edge, x, 0);
}

bool VerificationReport::residuals_below(double tol) const {
  for (double r : modal_residuals) {
    if (!(r < tol)) return false;
  }
  return true;
}

VerificationReport verify_null(const SimState& state, int retained) {
  const std::size_t n_modes = state.system.mode_sigma.size();
  const auto keep = std::min<std::size_t>(static_cast<std::size_t>(retained), n_modes);
  VerificationReport rep;
  const Eigen::Index last = state.y_modal.rows() - 1;
  const double T = state.system.cfg.horizon;
  for (std::size_t n = 0; n < keep; ++n) {
    const double yT = state.y_modal(last, static_cast<Eigen::Index>(n));
    const double y0n = state.y_modal(0, static_cast<Eigen::Index>(n));
    const double free_decay = std::abs(y0n) * std::exp(-state.system.mode_sigma[n] * T);
    rep.modal_residuals.push_back(std::abs(yT));
    rep.uncontrolled_residuals.push_back(free_decay);
    rep.free_decay_ratio.push_back(free_decay > 0.0 ? std::abs(yT) / free_decay
                                                    : std::abs(yT));
  }

  // Quadrature of the reconstructed terminal state minus its retained
  // projection; only the lifting profiles live outside the span, and 64
  // nodes per edge resolve polynomials times <= 16 retained modes.
  static const GaussLegendre gl(64);
  const StarTreeConfig& cfg = state.system.cfg;
  double tail2 = 0.0;
  for (int k = 0; k < cfg.num_edges; ++k) {
    tail2 += gl.integrate(
        [&](double x) {
          double v = state.reconstruct_terminal(static_cast<std::size_t>(k), x);
          for (std::size_t n = 0; n < n_modes; ++n) {
            v -= state.y_modal(last, static_cast<Eigen::Index>(n)) *
                 state.system.mode_fn[n].component(static_cast<std::size_t>(k)).value(x);
          }
          return v * v;
        },
        0.0, cfg.edge_length);
  }
  rep.tail_estimate = std::sqrt(std::max(0.0, tail2));
  return rep;
}

double duality_check(const SimState& state, const std::vector<double>& qT_coeffs) {
  const std::size_t n_modes = state.system.mode_sigma.size();
  if (qT_coeffs.size() != n_modes) {
    throw std::invalid_argument("duality_check: one coefficient per retained mode");
  }
  const StarTreeConfig& cfg = state.system.cfg;
  const double T = cfg.horizon;
  const Eigen::Index last = state.y_modal.rows() - 1;

  // <y(T), qT> against <y0, q(0)> plus the accumulated boundary work; all
  // integrals in closed form.
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t n = 0; n < n_modes; ++n) {
    const double qn = qT_coeffs[n];
    const double sn = state.system.mode_sigma[n];
    lhs += qn * state.y_modal(last, static_cast<Eigen::Index>(n));
    rhs += qn * state.y_modal(0, static_cast<Eigen::Index>(n)) * std::exp(-sn * T);

    for (std::size_t c = 0; c < state.system.channels.size(); ++c) {
      const EdgeFunction& lift_edge = state.system.liftings[c].component(
          static_cast<std::size_t>(state.system.channels[c].edge) - 1);
      GraphFunction src = GraphFunction::zero(cfg.num_edges);
      src.component(static_cast<std::size_t>(state.system.channels[c].edge) - 1) =
          lift_edge.derivative(2) * cfg.lambda + lift_edge.derivative(4);
      const double qnc =
          graph_inner_product(state.system.liftings[c], state.system.mode_fn[n], cfg);
      const double rnc = graph_inner_product(src, state.system.mode_fn[n], cfg);
      const double g = sn * qnc - rnc;
      for (std::size_t j = 0; j < state.controls.exponents.size(); ++j) {
        rhs += qn * g *
               state.controls.weights(static_cast<Eigen::Index>(c),
                                      static_cast<Eigen::Index>(j)) *
               conv_kernel(sn + state.controls.exponents[j], T);
      }
    }
  }
  return std::abs(lhs - rhs);
}

}  // namespace kstree
