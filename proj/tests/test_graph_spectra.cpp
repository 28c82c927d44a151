#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "kstree/critical_sets.hpp"
#include "kstree/graph_spectra.hpp"
#include "oracles.hpp"

using namespace kstree;

namespace {

StarTreeConfig make_cfg(Model model, double lambda, double L, int n = 3) {
  StarTreeConfig cfg;
  cfg.num_edges = n;
  cfg.edge_length = L;
  cfg.lambda = lambda;
  cfg.model = model;
  cfg.horizon = 1.0;
  return cfg;
}

// Vertex coupling residuals: common value at 0, zero slope sum, common
// second derivative, zero third-derivative sum.
double coupling_residual(const GraphFunction& f, const StarTreeConfig& cfg) {
  double worst = 0.0;
  double sum1 = 0.0, sum3 = 0.0;
  const double v0 = f.component(0).value(0.0);
  const double w0 = f.component(0).derivative(2).value(0.0);
  for (std::size_t k = 0; k < f.size(); ++k) {
    worst = std::max(worst, std::abs(f.component(k).value(0.0) - v0));
    worst = std::max(worst, std::abs(f.component(k).derivative(2).value(0.0) - w0));
    sum1 += f.component(k).derivative(1).value(0.0);
    sum3 += f.component(k).derivative(3).value(0.0);
  }
  worst = std::max(worst, std::abs(sum1));
  worst = std::max(worst, std::abs(sum3));
  return worst;
}

}  // namespace

TEST_CASE("model I assembly: multiplicities and bases") {
  const StarTreeConfig cfg = make_cfg(Model::I, 1.0, 1.0, 3);
  const auto eps = assemble(cfg, 8);
  REQUIRE(eps.size() == 8);
  for (std::size_t i = 1; i < eps.size(); ++i) {
    CHECK(eps[i].sigma > eps[i - 1].sigma);
  }
  for (const auto& ep : eps) {
    CHECK((ep.multiplicity == 1 || ep.multiplicity == cfg.num_edges - 1));
    if (ep.origin == EigenOrigin::SumProblem) CHECK(ep.multiplicity == 1);
    if (ep.origin == EigenOrigin::DifferenceProblem) {
      CHECK(ep.multiplicity == cfg.num_edges - 1);
      // spanned by {Phi e_l - Phi e_{l+1}}: all components proportional to
      // one scalar function, coefficients summing to zero
      for (const auto& f : ep.basis) {
        double csum = 0.0;
        for (std::size_t k = 0; k < f.size(); ++k) {
          csum += f.component(k).value(cfg.edge_length / 3.0);
        }
        CHECK(std::abs(csum) < 1e-9);
      }
    }
    CHECK(ep.warning.empty());
  }
  // alternation P1, P2, P1, ... at this lambda
  CHECK(eps[0].origin == EigenOrigin::SumProblem);
  CHECK(eps[1].origin == EigenOrigin::DifferenceProblem);
  CHECK(eps[2].origin == EigenOrigin::SumProblem);
}

TEST_CASE("orthonormal bases and coupling conditions") {
  for (Model model : {Model::I, Model::II}) {
    const StarTreeConfig cfg = make_cfg(model, 1.0, 1.0, 3);
    const auto eps = assemble(cfg, 12);
    std::vector<const GraphFunction*> all;
    for (const auto& ep : eps) {
      for (const auto& f : ep.basis) all.push_back(&f);
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i; j < all.size(); ++j) {
        const double g = graph_inner_product(*all[i], *all[j], cfg);
        CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
    }
    for (const auto* f : all) {
      CHECK(coupling_residual(*f, cfg) <= 1e-9);
    }
  }
}

TEST_CASE("model II assembly cases") {
  // sigma = 0 with lambda in N2: multiplicity 2 from {1, cos(sqrt(l) x)}
  {
    const StarTreeConfig cfg = make_cfg(Model::II, M_PI * M_PI, 1.0, 3);
    const auto eps = assemble(cfg, 4);
    bool found = false;
    for (const auto& ep : eps) {
      if (std::abs(ep.sigma) < 1e-9) {
        found = true;
        CHECK(ep.multiplicity == 2);
        CHECK(ep.origin == EigenOrigin::SumProblem);
      }
    }
    CHECK(found);
  }
  // N = 2: difference eigenvalues are simple, basis (Phi, -Phi)/sqrt(2)
  {
    const StarTreeConfig cfg = make_cfg(Model::II, 1.0, 1.0, 2);
    const auto eps = assemble(cfg, 4);
    for (const auto& ep : eps) {
      if (ep.origin == EigenOrigin::DifferenceProblem) {
        CHECK(ep.multiplicity == 1);
        const GraphFunction& f = ep.basis[0];
        for (double x : {0.2, 0.7}) {
          CHECK(f.component(0).value(x) ==
                doctest::Approx(-f.component(1).value(x)).epsilon(1e-12));
        }
      }
    }
  }
  // lambda in N_odd: the resonant negative eigenvalue has multiplicity 2(N-1)
  {
    const StarTreeConfig cfg = make_cfg(Model::II, 2.5 * M_PI * M_PI, 1.0, 3);
    const auto eps = assemble(cfg, 5);
    bool found = false;
    for (const auto& ep : eps) {
      if (ep.sigma < 0.0 && ep.origin == EigenOrigin::DifferenceProblem) {
        found = true;
        CHECK(ep.multiplicity == 2 * (cfg.num_edges - 1));
      }
    }
    CHECK(found);
  }
  // lambda in N3: sigma = 0 collides across E1 and E2 -> Mixed with warning
  {
    const StarTreeConfig cfg = make_cfg(Model::II, M_PI * M_PI / 4.0, 1.0, 3);
    const auto eps = assemble(cfg, 4);
    bool mixed = false;
    for (const auto& ep : eps) {
      if (std::abs(ep.sigma) < 1e-9) {
        CHECK(ep.origin == EigenOrigin::Mixed);
        CHECK(!ep.warning.empty());
        CHECK(ep.multiplicity == 1 + (cfg.num_edges - 1));
        mixed = true;
      }
    }
    CHECK(mixed);
  }
}

TEST_CASE("near-critical lambda keeps the almost-colliding eigenvalues apart") {
  // just off N1 the P1 and P2 roots near -4 pi^4 must not be merged
  const StarTreeConfig cfg = make_cfg(Model::I, 5.0 * M_PI * M_PI * (1.0 + 1e-6), 1.0, 3);
  const auto eps = assemble(cfg, 10);
  int near = 0;
  for (const auto& ep : eps) {
    if (std::abs(ep.sigma + 4.0 * std::pow(M_PI, 4)) < 0.1) {
      ++near;
      CHECK(ep.origin != EigenOrigin::Mixed);
    }
  }
  CHECK(near == 2);
}

TEST_CASE("trace matrices") {
  // model I simple eigenvalue: one identical entry per edge
  {
    const StarTreeConfig cfg = make_cfg(Model::I, 1.0, 1.0, 3);
    const auto eps = assemble(cfg, 3);
    const auto mask = ChannelMask::all_active(cfg);
    const Eigen::MatrixXd M = trace_matrix(eps[0], cfg, mask);
    REQUIRE(M.rows() == 1);
    REQUIRE(M.cols() == 3);
    CHECK(M(0, 0) == doctest::Approx(M(0, 1)));
    CHECK(M(0, 1) == doctest::Approx(M(0, 2)));
    // = Psi_xx(L) of the normalized scalar function divided by sqrt(N)
    const double expected =
        eps[0].scalar_sources[0].traces.dxx_at_L / std::sqrt(3.0);
    CHECK(M(0, 0) == doctest::Approx(expected).epsilon(1e-12));
  }
  // model I at lambda in N1: at sigma = -4 pi^4 the P1 and P2 problems
  // genuinely collide (cos(pi x) + cos(2 pi x) solves P1, a sine pair
  // solves P2), so the eigenpair assembles as Mixed; the difference-part
  // trace rows vanish while the sum part keeps its trace.
  {
    const StarTreeConfig cfg = make_cfg(Model::I, 5.0 * M_PI * M_PI, 1.0, 3);
    const auto eps = assemble(cfg, 10);
    bool found = false;
    for (const auto& ep : eps) {
      if (ep.sigma < 0.0 && same_eigenvalue(ep.sigma, -4.0 * std::pow(M_PI, 4))) {
        found = true;
        CHECK(ep.origin == EigenOrigin::Mixed);
        CHECK(ep.multiplicity == 3);
        const Eigen::MatrixXd M = trace_matrix(ep, cfg, ChannelMask::all_active(cfg));
        CHECK(std::abs(M(0, 0)) > 1e-6);                      // sum part
        CHECK(M.bottomRows(2).cwiseAbs().maxCoeff() < 1e-8);  // P2 part
        // even all N channels cannot reach the difference directions
        const auto r = rank_deficiency(ep, cfg, ChannelMask::all_active(cfg));
        CHECK(r.deficiency == 2);
      }
    }
    CHECK(found);
  }
  // model II at lambda in N3, sigma = 0 difference part: the a-trace
  // vanishes while the value trace does not
  {
    const StarTreeConfig cfg = make_cfg(Model::II, M_PI * M_PI / 4.0, 1.0, 3);
    const auto eps = assemble(cfg, 3);
    for (const auto& ep : eps) {
      if (std::abs(ep.sigma) > 1e-9 || ep.origin != EigenOrigin::Mixed) continue;
      for (int i = 0; i < ep.multiplicity; ++i) {
        const auto& src = ep.scalar_sources;
        (void)src;
        for (int k = 0; k < cfg.num_edges; ++k) {
          const EdgeTraces& t =
              ep.edge_traces[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
          // every basis function of this eigenspace: difference components
          // are sines with lambda*value+dxx = 0 at L; the sum component is
          // the constant with nonzero a-trace
          if (std::abs(t.value_at_L) > 1e-9 && std::abs(t.dxx_at_L) > 1e-12) {
            CHECK(std::abs(t.lambda_value_plus_dxx_at_L) < 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("rank deficiency and null directions") {
  const StarTreeConfig cfg = make_cfg(Model::I, 1.0, 1.0, 3);
  const auto eps = assemble(cfg, 4);

  // full channels, lambda outside every critical set: full rank
  for (const auto& ep : eps) {
    const auto r = rank_deficiency(ep, cfg, ChannelMask::all_active(cfg));
    CHECK(r.deficiency == 0);
  }

  // edges 1 and 2 inactive: the difference eigenspace cannot be steered,
  // and the unsteerable direction is (Phi, -Phi, 0)
  ChannelMask mask = ChannelMask::all_active(cfg);
  mask.primary[0] = false;
  mask.primary[1] = false;
  for (const auto& ep : eps) {
    if (ep.origin != EigenOrigin::DifferenceProblem) continue;
    const auto r = rank_deficiency(ep, cfg, mask);
    CHECK(r.deficiency == 1);
    REQUIRE(r.null_directions.size() == 1);
    // build the unsteerable graph function and compare against
    // (Phi, -Phi, 0)/sqrt(2): angle in coefficient space below 1e-6
    const auto& d = r.null_directions[0];
    GraphFunction dir = GraphFunction::zero(3);
    for (int l = 0; l < ep.multiplicity; ++l) {
      dir += ep.basis[static_cast<std::size_t>(l)] * d[static_cast<std::size_t>(l)];
    }
    const EdgeFunction& phi = ep.scalar_sources[0].eigenfunction;
    GraphFunction want(std::vector<EdgeFunction>{
        phi * (1.0 / std::sqrt(2.0)), phi * (-1.0 / std::sqrt(2.0)),
        EdgeFunction::zero()});
    const double cosang = std::abs(graph_inner_product(dir, want, cfg));
    CHECK(std::acos(std::min(1.0, cosang)) < 1e-6);
    break;
  }

  // no channels at all: deficiency equals the multiplicity
  ChannelMask none = ChannelMask::all_active(cfg);
  none.primary.assign(3, false);
  const auto r0 = rank_deficiency(eps[1], cfg, none);
  CHECK(r0.rank == 0);
  CHECK(r0.deficiency == eps[1].multiplicity);
}

TEST_CASE("step II determinant identity") {
  // lambda = ((2m+1)^2 + (2n+1)^2) pi^2 / (4 L^2): raw-sine 2x2 trace
  // determinant equals (beta_m^2 - beta_n^2)(-1)^(m+n)
  for (std::pair<int, int> mn : {std::pair<int, int>{0, 1}, {1, 2}, {0, 2}}) {
    const auto [m, n] = mn;
    const double L = 1.0;
    const double bm = (2.0 * m + 1.0) * M_PI / (2.0 * L);
    const double bn = (2.0 * n + 1.0) * M_PI / (2.0 * L);
    const double lambda = bm * bm + bn * bn;
    CHECK(is_member(CriticalSet::Nodd, lambda, L).member);

    const EdgeFunction phi = EdgeFunction::sine(1.0, bn);
    const EdgeFunction phit = EdgeFunction::sine(1.0, bm);
    auto a_trace = [&](const EdgeFunction& f) {
      return lambda * f.value(L) + f.derivative(2).value(L);
    };
    const double det = a_trace(phi) * phit.value(L) - phi.value(L) * a_trace(phit);
    const double want = (bm * bm - bn * bn) * ((m + n) % 2 == 0 ? 1.0 : -1.0);
    CHECK(det == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("completeness of the assembled eigenbasis at truncation") {
  // Smooth test data compatible with the boundary conditions at x = L;
  // data with nonzero clamped-end traces converges at the trace-limited
  // 1/n rate (the constant captures 98.0% at 40 eigenspaces) and cannot
  // certify the basis at this truncation.
  for (Model model : {Model::I, Model::II}) {
    const StarTreeConfig cfg = make_cfg(model, 1.0, 1.0, 3);
    const auto eps = assemble(cfg, 40);

    std::mt19937 rng(model == Model::I ? 5 : 6);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
      EdgeFunction common, bump;
      if (model == Model::I) {
        // p'(0) = p'''(0) = 0 and p(L) = p'(L) = 0: (x^2 - 1)^2
        common = (EdgeFunction::monomial(1.0, 4) + EdgeFunction::monomial(-2.0, 2) +
                  EdgeFunction::constant(1.0)) *
                 unif(rng);
        // q(0) = q''(0) = 0 and q(L) = q'(L) = 0: x^3 (x - 1)^2
        bump = EdgeFunction::monomial(1.0, 5) + EdgeFunction::monomial(-2.0, 4) +
               EdgeFunction::monomial(1.0, 3);
      } else {
        // p'(0) = p'''(0) = 0 and p'(L) = p'''(L) = 0
        common = (EdgeFunction::monomial(1.0, 6) + EdgeFunction::monomial(-5.0, 4) +
                  EdgeFunction::monomial(7.0, 2)) *
                     unif(rng) +
                 EdgeFunction::constant(unif(rng));
        // q(0) = q''(0) = 0 and q'(L) = q'''(L) = 0
        bump = EdgeFunction::monomial(1.0, 5) + EdgeFunction::monomial(-10.0, 3) +
               EdgeFunction::monomial(25.0, 1);
      }
      const double c1 = unif(rng), c2 = unif(rng);
      const double cs[3] = {c1, c2, -c1 - c2};
      std::vector<EdgeFunction> comps;
      for (int k = 0; k < 3; ++k) {
        comps.push_back(common + bump * cs[k]);
      }
      const GraphFunction g(comps);
      REQUIRE(coupling_residual(g, cfg) < 1e-12);

      const double total = graph_inner_product(g, g, cfg);
      double captured = 0.0;
      for (const auto& ep : eps) {
        for (const auto& f : ep.basis) {
          const double c = graph_inner_product(g, f, cfg);
          captured += c * c;
        }
      }
      CHECK(captured >= 0.99 * total);
    }
  }
}

TEST_CASE("trace nonvanishing on at least two edges away from critical sets") {
  // model I, lambda not in N0/(4L^2): dxx at L is nonzero on >= 2 edges
  for (double lambda : {1.0, 2.3}) {
    const StarTreeConfig cfg = make_cfg(Model::I, lambda, 1.0, 3);
    const auto eps = assemble(cfg, 15);
    for (const auto& ep : eps) {
      for (int i = 0; i < ep.multiplicity; ++i) {
        int nonzero = 0;
        for (int k = 0; k < 3; ++k) {
          if (std::abs(ep.edge_traces[static_cast<std::size_t>(i)]
                                     [static_cast<std::size_t>(k)]
                                         .dxx_at_L) > 1e-8) {
            ++nonzero;
          }
        }
        CHECK(nonzero >= 2);
      }
    }
  }
  // model II, lambda not in N_mixt: value or lambda*value+dxx nonzero on
  // at least two edges
  {
    const StarTreeConfig cfg = make_cfg(Model::II, 1.0, 1.0, 3);
    const auto eps = assemble(cfg, 15);
    for (const auto& ep : eps) {
      for (int i = 0; i < ep.multiplicity; ++i) {
        int nz_value = 0, nz_a = 0;
        for (int k = 0; k < 3; ++k) {
          const auto& t = ep.edge_traces[static_cast<std::size_t>(i)]
                                        [static_cast<std::size_t>(k)];
          if (std::abs(t.value_at_L) > 1e-8) ++nz_value;
          if (std::abs(t.lambda_value_plus_dxx_at_L) > 1e-8) ++nz_a;
        }
        CHECK((nz_value >= 2 || nz_a >= 2));
      }
    }
  }
}

TEST_CASE("channel masks") {
  const StarTreeConfig cfg = make_cfg(Model::II, 1.0, 1.0, 3);
  const auto all = ChannelMask::all_active(cfg);
  CHECK(all.active_count(cfg) == 6);
  const auto one_out = ChannelMask::inactive_edge(cfg, 3);
  CHECK(one_out.active_count(cfg) == 4);
  CHECK_THROWS_AS(ChannelMask::inactive_edge(cfg, 4), std::invalid_argument);

  ChannelMask bad;
  bad.primary.assign(2, true);
  CHECK_THROWS_AS(bad.validate(cfg), std::invalid_argument);
}
