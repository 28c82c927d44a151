#include "kstree/scalar_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/Dense>

#include "kstree/critical_sets.hpp"
#include "kstree/errors.hpp"

namespace kstree {

namespace {

constexpr int kMaxBisections = 200;

double sq(double x) { return x * x; }

// Tanh-stabilized compatibility equations for the positive branch; the raw
// forms carry cosh(alpha L) factors that overflow for moderate n.
//   P1: beta sin(beta L) + alpha tanh(alpha L) cos(beta L) = 0
//   P2: beta tanh(alpha L) cos(beta L) - alpha sin(beta L) = 0
double positive_equation(ScalarProblem p, double beta, double lambda, double L) {
  const double a2 = beta * beta - lambda;
  const double alpha = a2 > 0.0 ? std::sqrt(a2) : 0.0;
  if (p == ScalarProblem::P1) {
    return beta * std::sin(beta * L) + alpha * std::tanh(alpha * L) * std::cos(beta * L);
  }
  return beta * std::tanh(alpha * L) * std::cos(beta * L) - alpha * std::sin(beta * L);
}

// Determinant equations of the negative branch, obtained by applying the
// boundary conditions at x = L to the two-cosine / two-sine general
// solutions that survive the conditions at x = 0:
//   P1: Psi = C1 cos(gamma x) + C3 cos(beta x),
//       [ cos(gL)   cos(bL) ] [C1]   [0]      det = g sin(gL) cos(bL)
//       [-g sin(gL) -b sin(bL)] [C3] = [0],          - b cos(gL) sin(bL)
//   P2: Phi = C2 sin(gamma x) + C4 sin(beta x),
//       [ sin(gL)   sin(bL) ] [C2]   [0]      det = b sin(gL) cos(bL)
//       [ g cos(gL) b cos(bL)] [C4] = [0],          - g cos(gL) sin(bL)
double negative_equation(ScalarProblem p, double gamma, double lambda, double L) {
  const double beta = std::sqrt(lambda - gamma * gamma);
  if (p == ScalarProblem::P1) {
    return gamma * std::sin(gamma * L) * std::cos(beta * L) -
           beta * std::cos(gamma * L) * std::sin(beta * L);
  }
  return beta * std::sin(gamma * L) * std::cos(beta * L) -
         gamma * std::cos(gamma * L) * std::sin(beta * L);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              const char* what) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream os;
    os << "bisection bracket [" << lo << ", " << hi << "] for " << what
       << " has no sign change (f = " << flo << ", " << fhi << ")";
    throw NumericalError(os.str());
  }
  for (int it = 0; it < kMaxBisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(mid))) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  std::ostringstream os;
  os << "bisection for " << what << " did not converge after " << kMaxBisections
     << " iterations; bracket [" << lo << ", " << hi << "]";
  throw NumericalError(os.str());
}

SpectralParams positive_params(double beta, double lambda) {
  SpectralParams s;
  s.branch = SpectralBranch::Positive;
  s.beta = beta;
  s.alpha = std::sqrt(std::max(0.0, beta * beta - lambda));
  s.sigma = sq(s.alpha) * sq(s.beta);
  return s;
}

SpectralParams negative_params(double freq_a, double freq_b) {
  SpectralParams s;
  s.branch = SpectralBranch::Negative;
  s.beta = std::max(freq_a, freq_b);
  s.gamma = std::min(freq_a, freq_b);
  s.sigma = -sq(s.beta) * sq(s.gamma);
  return s;
}

BoundaryTraces traces_of(const EdgeFunction& f, double L) {
  BoundaryTraces t;
  t.value_at_0 = f.value(0.0);
  const EdgeFunction d1 = f.derivative();
  const EdgeFunction d2 = d1.derivative();
  const EdgeFunction d3 = d2.derivative();
  t.dx_at_0 = d1.value(0.0);
  t.dxx_at_0 = d2.value(0.0);
  t.dxxx_at_0 = d3.value(0.0);
  t.value_at_L = f.value(L);
  t.dx_at_L = d1.value(L);
  t.dxx_at_L = d2.value(L);
  t.dxxx_at_L = d3.value(L);
  return t;
}

// L2-normalize and fix the sign so outputs are reproducible.
EdgeFunction normalize(EdgeFunction f, double L) {
  const double n2 = inner_product(f, f, L);
  if (!(n2 > 0.0)) throw NumericalError("cannot normalize a null eigenfunction");
  f *= 1.0 / std::sqrt(n2);
  const double dxxL = f.derivative(2).value(L);
  double pilot = dxxL;
  if (std::abs(pilot) <= 1e-7) pilot = f.value(L);
  if (std::abs(pilot) <= 1e-7 && !f.terms().empty()) pilot = f.terms().front().coeff;
  if (pilot < 0.0) f *= -1.0;
  return f;
}

ScalarEigenpair make_pair(ScalarProblem p, int index, SpectralParams params,
                          EdgeFunction f, const StarTreeConfig& cfg) {
  ScalarEigenpair ep;
  ep.problem = p;
  ep.index = index;
  ep.params = params;
  ep.eigenfunction = normalize(std::move(f), cfg.edge_length);
  ep.traces = traces_of(ep.eigenfunction, cfg.edge_length);
  return ep;
}

// sigma for the explicit E1/E2 families at frequency b, with the tolerance
// that routes exact zeros to the zero branch.
double explicit_sigma(double b, double lambda) { return sq(sq(b)) - lambda * sq(b); }

bool is_effectively_zero_sigma(double b, double lambda) {
  return std::abs(explicit_sigma(b, lambda)) <= 1e-12 * (1.0 + sq(sq(b)));
}

// Eigenfunctions of the positive P1/P2 branch, scaled by 1/cosh(alpha L)
// so no coefficient exceeds O(1) before normalization.
EdgeFunction p1_positive_function(const SpectralParams& s, double L) {
  EdgeFunction f = EdgeFunction::cosine(-1.0, s.beta);
  f += EdgeFunction::hyperbolic_cosine(std::cos(s.beta * L) / std::cosh(s.alpha * L),
                                       s.alpha);
  return f;
}

EdgeFunction p2_positive_function(const SpectralParams& s, double L) {
  EdgeFunction f = EdgeFunction::sine(-1.0, s.beta);
  f += EdgeFunction::hyperbolic_sine(std::sin(s.beta * L) / std::sinh(s.alpha * L),
                                     s.alpha);
  return f;
}

// Null vector of a rank-one 2x2 system picked from its larger row.
std::pair<double, double> null_of_rows(double a11, double a12, double a21,
                                       double a22) {
  const double n1 = std::abs(a11) + std::abs(a12);
  const double n2 = std::abs(a21) + std::abs(a22);
  if (n1 >= n2) return {a12, -a11};
  return {a22, -a21};
}

std::vector<double> scan_roots(const std::function<double(double)>& f, double lo,
                               double hi, int nodes) {
  std::vector<double> roots;
  double scale = 0.0;
  std::vector<double> vals(static_cast<std::size_t>(nodes) + 1);
  const double h = (hi - lo) / nodes;
  for (int i = 0; i <= nodes; ++i) {
    vals[i] = f(lo + i * h);
    scale = std::max(scale, std::abs(vals[i]));
  }
  if (scale == 0.0) return roots;
  for (int i = 0; i < nodes; ++i) {
    const double x0 = lo + i * h;
    const double x1 = x0 + h;
    if (vals[i] == 0.0) {
      roots.push_back(x0);
      continue;
    }
    if ((vals[i] > 0.0) != (vals[i + 1] > 0.0)) {
      roots.push_back(bisect(f, x0, x1, "negative-branch determinant"));
      continue;
    }
    // Tangency safeguard: a local |f| minimum that nearly touches zero is
    // refined by quadratic minimization over three points.
    if (i > 0 && std::abs(vals[i]) < 1e-9 * scale &&
        std::abs(vals[i]) <= std::abs(vals[i - 1]) &&
        std::abs(vals[i]) <= std::abs(vals[i + 1])) {
      double a = x0 - h, b = x0, c = x1;
      for (int it = 0; it < 80; ++it) {
        const double m1 = 0.5 * (a + b), m2 = 0.5 * (b + c);
        const double fb = std::abs(f(b));
        if (std::abs(f(m1)) < fb) {
          c = b;
          b = m1;
        } else if (std::abs(f(m2)) < fb) {
          a = b;
          b = m2;
        } else {
          a = m1;
          c = m2;
        }
      }
      if (std::abs(f(b)) < 1e-12 * scale) roots.push_back(b);
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [&](double a, double b) {
                            return std::abs(a - b) <= 1e-9 * (hi - lo);
                          }),
              roots.end());
  return roots;
}

}  // namespace

std::string to_string(ScalarProblem p) {
  switch (p) {
    case ScalarProblem::P1:
      return "P1";
    case ScalarProblem::P2:
      return "P2";
    case ScalarProblem::E1:
      return "E1";
    case ScalarProblem::E2:
      return "E2";
  }
  return "?";
}

bool same_eigenvalue(double a, double b) {
  return std::abs(a - b) < 1e-8 * (1.0 + std::abs(a));
}

double ode_residual(const EdgeFunction& f, double lambda, double sigma, double L,
                    int samples) {
  const EdgeFunction d2 = f.derivative(2);
  const EdgeFunction d4 = f.derivative(4);
  double worst = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double x = L * i / (samples + 1.0);
    const double r = lambda * d2.value(x) + d4.value(x) - sigma * f.value(x);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

std::vector<ScalarEigenpair> positive_eigenvalues(ScalarProblem problem,
                                                  const StarTreeConfig& cfg,
                                                  int count) {
  if (count < 1) throw std::invalid_argument("positive_eigenvalues: count must be >= 1");
  cfg.validate();
  const double L = cfg.edge_length;
  const double lambda = cfg.lambda;
  std::vector<ScalarEigenpair> out;
  out.reserve(static_cast<std::size_t>(count));

  if (problem == ScalarProblem::E1 || problem == ScalarProblem::E2) {
    // Closed forms: sigma = b^4 - lambda b^2 with b = n pi / L (E1) or
    // b = (2n+1) pi / (2L) (E2), positive once b^2 > lambda.
    for (int n = problem == ScalarProblem::E1 ? 1 : 0;
         static_cast<int>(out.size()) < count; ++n) {
      const double b = problem == ScalarProblem::E1
                           ? n * M_PI / L
                           : (2.0 * n + 1.0) * M_PI / (2.0 * L);
      if (b * b <= lambda || is_effectively_zero_sigma(b, lambda)) continue;
      SpectralParams s = positive_params(b, lambda);
      s.sigma = explicit_sigma(b, lambda);
      EdgeFunction f = problem == ScalarProblem::E1 ? EdgeFunction::cosine(1.0, b)
                                                    : EdgeFunction::sine(1.0, b);
      out.push_back(make_pair(problem, n, s, std::move(f), cfg));
    }
    return out;
  }

  auto eq = [&](double beta) { return positive_equation(problem, beta, lambda, L); };
  const double beta_min = std::sqrt(lambda);
  for (int n = 1; static_cast<int>(out.size()) < count; ++n) {
    if (n > 1000000) throw NumericalError("positive eigenvalue search ran away");
    const double lo_raw = (n * M_PI - M_PI / 2.0) / L;
    const double hi_raw = (n * M_PI + M_PI / 2.0) / L;
    if (hi_raw <= beta_min) continue;
    const double pad = 1e-9 * std::max(1.0, hi_raw);
    const double lo = std::max(lo_raw, beta_min) + pad;
    const double hi = hi_raw - pad;
    if (lo >= hi) continue;
    if ((eq(lo) > 0.0) == (eq(hi) > 0.0)) continue;  // clipped bracket, no root
    const double beta = bisect(eq, lo, hi, "positive-branch compatibility");
    const SpectralParams s = positive_params(beta, lambda);
    EdgeFunction f = problem == ScalarProblem::P1 ? p1_positive_function(s, L)
                                                  : p2_positive_function(s, L);
    out.push_back(make_pair(problem, n, s, std::move(f), cfg));
  }
  return out;
}

std::vector<ScalarEigenpair> zero_eigenvalue(ScalarProblem problem,
                                             const StarTreeConfig& cfg) {
  cfg.validate();
  const double L = cfg.edge_length;
  const double lambda = cfg.lambda;
  const double nu = std::sqrt(lambda);
  std::vector<ScalarEigenpair> out;
  SpectralParams zero;
  zero.branch = SpectralBranch::Zero;
  zero.beta = nu;

  if (problem == ScalarProblem::E1) {
    out.push_back(make_pair(problem, 0, zero, EdgeFunction::constant(1.0), cfg));
    if (is_member(CriticalSet::N2, lambda, L).member) {
      out.push_back(make_pair(problem, 0, zero, EdgeFunction::cosine(1.0, nu), cfg));
    }
    return out;
  }
  if (problem == ScalarProblem::E2) {
    if (is_member(CriticalSet::N3, lambda, L).member) {
      out.push_back(make_pair(problem, 0, zero, EdgeFunction::sine(1.0, nu), cfg));
    }
    return out;
  }

  // P1/P2: boundary determinant on the general solution
  // 1, x, cos(nu x), sin(nu x).
  Eigen::Matrix4d M;
  const double c = std::cos(nu * L), s = std::sin(nu * L);
  if (problem == ScalarProblem::P1) {
    M << 0, 1, 0, nu,                      // f_x(0)
        0, 0, 0, -nu * nu * nu,            // f_xxx(0)
        1, L, c, s,                        // f(L)
        0, 1, -nu * s, nu * c;             // f_x(L)
  } else {
    M << 1, 0, 1, 0,                       // f(0)
        0, 0, -nu * nu, 0,                 // f_xx(0)
        1, L, c, s,                        // f(L)
        0, 1, -nu * s, nu * c;             // f_x(L)
  }
  for (int i = 0; i < 4; ++i) {
    const double m = M.row(i).cwiseAbs().maxCoeff();
    if (m > 0.0) M.row(i) /= m;
  }
  Eigen::FullPivLU<Eigen::Matrix4d> lu(M);
  lu.setThreshold(1e-10);
  if (lu.rank() == 4) return out;
  const Eigen::MatrixXd kernel = lu.kernel();
  for (Eigen::Index j = 0; j < kernel.cols(); ++j) {
    EdgeFunction f = EdgeFunction::monomial(kernel(0, j), 0) +
                     EdgeFunction::monomial(kernel(1, j), 1) +
                     EdgeFunction::cosine(kernel(2, j), nu) +
                     EdgeFunction::sine(kernel(3, j), nu);
    out.push_back(make_pair(problem, 0, zero, std::move(f), cfg));
  }
  return out;
}

std::vector<ScalarEigenpair> negative_eigenvalues(ScalarProblem problem,
                                                  const StarTreeConfig& cfg) {
  cfg.validate();
  const double L = cfg.edge_length;
  const double lambda = cfg.lambda;
  std::vector<ScalarEigenpair> out;

  if (problem == ScalarProblem::E1 || problem == ScalarProblem::E2) {
    for (int n = problem == ScalarProblem::E1 ? 1 : 0;; ++n) {
      const double b = problem == ScalarProblem::E1
                           ? n * M_PI / L
                           : (2.0 * n + 1.0) * M_PI / (2.0 * L);
      if (b * b >= lambda) break;
      if (is_effectively_zero_sigma(b, lambda)) continue;
      const double other = std::sqrt(lambda - b * b);
      SpectralParams s = negative_params(b, other);
      s.sigma = explicit_sigma(b, lambda);
      EdgeFunction f = problem == ScalarProblem::E1 ? EdgeFunction::cosine(1.0, b)
                                                    : EdgeFunction::sine(1.0, b);
      out.push_back(make_pair(problem, n, s, std::move(f), cfg));
    }
    std::sort(out.begin(), out.end(),
              [](const ScalarEigenpair& a, const ScalarEigenpair& b) {
                if (!same_eigenvalue(a.params.sigma, b.params.sigma)) {
                  return a.params.sigma < b.params.sigma;
                }
                return a.index < b.index;
              });
    return out;
  }

  // P1/P2: sign-scan the determinant over gamma in (0, sqrt(lambda/2)).
  // gamma = beta = sqrt(lambda/2) is excluded: the determinant vanishes
  // there identically while sigma = -lambda^2/4 is never an eigenvalue.
  const double gmax = std::sqrt(lambda / 2.0);
  auto det = [&](double g) { return negative_equation(problem, g, lambda, L); };
  const int nodes = 2000 + 200 * static_cast<int>(std::ceil(std::sqrt(lambda) * L));
  const double lo = gmax * 1e-7;
  const double hi = gmax * (1.0 - 1e-8);
  std::vector<double> roots = scan_roots(det, lo, hi, nodes);

  int ordinal = 1;
  for (double g : roots) {
    const double beta = std::sqrt(lambda - g * g);
    const SpectralParams s = negative_params(g, beta);
    EdgeFunction f;
    if (problem == ScalarProblem::P1) {
      const auto [c1, c3] =
          null_of_rows(std::cos(g * L), std::cos(beta * L), -g * std::sin(g * L),
                       -beta * std::sin(beta * L));
      f = EdgeFunction::cosine(c1, g) + EdgeFunction::cosine(c3, beta);
    } else {
      const auto [c2, c4] =
          null_of_rows(std::sin(g * L), std::sin(beta * L), g * std::cos(g * L),
                       beta * std::cos(beta * L));
      f = EdgeFunction::sine(c2, g) + EdgeFunction::sine(c4, beta);
    }
    out.push_back(make_pair(problem, ordinal++, s, std::move(f), cfg));
  }
  std::sort(out.begin(), out.end(),
            [](const ScalarEigenpair& a, const ScalarEigenpair& b) {
              return a.params.sigma < b.params.sigma;
            });
  return out;
}

std::vector<ScalarEigenpair> full_spectrum(ScalarProblem problem,
                                           const StarTreeConfig& cfg,
                                           int positive_count) {
  std::vector<ScalarEigenpair> out = negative_eigenvalues(problem, cfg);
  auto zeros = zero_eigenvalue(problem, cfg);
  out.insert(out.end(), zeros.begin(), zeros.end());
  auto pos = positive_eigenvalues(problem, cfg, positive_count);
  out.insert(out.end(), pos.begin(), pos.end());
  return out;
}

AsymptoticCheck asymptotic_check(ScalarProblem problem, const StarTreeConfig& cfg,
                                 int n) {
  if (problem != ScalarProblem::P1 && problem != ScalarProblem::P2) {
    throw std::invalid_argument("asymptotic_check applies to P1/P2 only");
  }
  if (n < 1) throw std::invalid_argument("asymptotic_check: n must be >= 1");
  cfg.validate();
  const double L = cfg.edge_length;
  auto eq = [&](double beta) {
    return positive_equation(problem, beta, cfg.lambda, L);
  };
  const double pad = 1e-9 * n;
  const double lo = std::max((n * M_PI - M_PI / 2.0) / L, std::sqrt(cfg.lambda)) + pad;
  const double hi = (n * M_PI + M_PI / 2.0) / L - pad;
  AsymptoticCheck r;
  r.beta_n = bisect(eq, lo, hi, "asymptotic bracket");
  const double shift = problem == ScalarProblem::P1 ? -M_PI / (4.0 * L)
                                                    : M_PI / (4.0 * L);
  r.predicted = n * M_PI / L + shift;
  r.deviation = std::abs(r.beta_n - r.predicted);
  return r;
}

}  // namespace kstree
