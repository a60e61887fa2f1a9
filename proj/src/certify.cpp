#include "mdl/certify.hpp"

#include "mdl/bundle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mdl {

namespace {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
// Legendre recurrence.
void gauss_legendre(int q, std::vector<double>& x, std::vector<double>& w) {
  x.assign(q, 0.0);
  w.assign(q, 0.0);
  const int m = (q + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < q; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = q * (z * p0 - p1) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p0 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = -z;
    x[q - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[q - 1 - i] = w[i];
  }
}

// Composite 1-D Gauss-Legendre integral of f over [lo, hi].
double integrate_1d(const std::function<double(double)>& f, double lo, double hi, int panels,
                    int points) {
  std::vector<double> xs, ws;
  gauss_legendre(points, xs, ws);
  double total = 0.0;
  double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    double a = lo + p * h, mid = a + 0.5 * h, half = 0.5 * h;
    for (int i = 0; i < points; ++i) total += ws[i] * half * f(mid + half * xs[i]);
  }
  return total;
}

double sqrt_det_fisher(const Family& fam, const Vec& theta) {
  Mat J = fam.fisher(theta);
  double det = J.determinant();
  if (!(det > 0.0)) throw numeric_error("certify: det J not positive at a scan point");
  return std::sqrt(det);
}

double integrate_sqrt_det(const Family& fam, int panels, int points) {
  const ParamSpace& space = fam.space();
  const int K = fam.dim();
  if (K == 1) {
    auto [lo, hi] = space.bounding_box();
    return integrate_1d([&](double t) { return sqrt_det_fisher(fam, Vec::Constant(1, t)); },
                        lo[0], hi[0], panels, points);
  }
  if (K == 2 && space.kind() == SpaceKind::kBox) {
    auto [lo, hi] = space.bounding_box();
    return integrate_1d(
        [&](double t1) {
          return integrate_1d(
              [&](double t2) {
                Vec th(2);
                th << t1, t2;
                return sqrt_det_fisher(fam, th);
              },
              lo[1], hi[1], panels, points);
        },
        lo[0], hi[0], panels, points);
  }
  if (K == 2 && space.kind() == SpaceKind::kTauSimplex) {
    double tau = space.tau();
    return integrate_1d(
        [&](double t1) {
          return integrate_1d(
              [&](double t2) {
                Vec th(2);
                th << t1, t2;
                return sqrt_det_fisher(fam, th);
              },
              tau, 1.0 - tau - t1, panels, points);
        },
        tau, 1.0 - 2.0 * tau, panels, points);
  }
  throw unsupported_error("certify: sqrt-det integral implemented for K <= 2 only");
}

// Largest |covariance| of two entries of the per-letter centered information
// under the tilted law, over a grid of parameters and tilt coefficients with
// max-norm at most delta_bar.
double scan_tilted_covariance(const Family& fam, const std::vector<Vec>& grid, double delta_bar,
                              int tilt_grid) {
  const int K = fam.dim();
  const int coords = K * K;
  std::vector<double> levels;
  for (int i = 0; i < tilt_grid; ++i) {
    levels.push_back(tilt_grid == 1 ? 0.0 : -delta_bar + 2.0 * delta_bar * i / (tilt_grid - 1));
  }
  double best = 0.0;
  for (const Vec& theta : grid) {
    FinitePmf p = fam.pmf(theta);
    const std::size_t M = p.alphabet_size();
    std::vector<Mat> V(M);
    for (std::size_t x = 0; x < M; ++x) V[x] = centered_info_letter(fam, theta, x);
    // Enumerate tilt coefficient combinations over the level grid.
    std::vector<int> pick(coords, 0);
    bool done = false;
    while (!done) {
      Mat xi(K, K);
      for (int c = 0; c < coords; ++c) xi(c / K, c % K) = levels[pick[c]];
      // Tilted weights.
      std::vector<double> logw(M);
      for (std::size_t x = 0; x < M; ++x) {
        logw[x] = p.log_prob(x) + xi.cwiseProduct(V[x]).sum();
      }
      double lse = log_sum_exp(logw);
      std::vector<double> tw(M);
      for (std::size_t x = 0; x < M; ++x) tw[x] = std::exp(logw[x] - lse);
      // First and second moments of the V entries.
      Mat m1 = Mat::Zero(K, K);
      for (std::size_t x = 0; x < M; ++x) m1 += tw[x] * V[x];
      for (int i = 0; i < coords; ++i) {
        for (int j = i; j < coords; ++j) {
          double m2 = 0.0;
          for (std::size_t x = 0; x < M; ++x) {
            m2 += tw[x] * V[x](i / K, i % K) * V[x](j / K, j % K);
          }
          best = std::max(best, std::abs(m2 - m1(i / K, i % K) * m1(j / K, j % K)));
        }
      }
      int c = coords - 1;
      while (c >= 0) {
        if (++pick[c] < tilt_grid) break;
        pick[c] = 0;
        --c;
      }
      if (c < 0) done = true;
    }
  }
  return best;
}

}  // namespace

std::vector<Vec> domain_scan_grid(const ParamSpace& space, int per_axis) {
  const int K = space.dim();
  auto [lo, hi] = space.bounding_box();
  std::vector<std::vector<double>> axes(K);
  for (int j = 0; j < K; ++j) {
    for (int i = 0; i <= per_axis; ++i) {
      axes[j].push_back(lo[j] + (hi[j] - lo[j]) * i / per_axis);
    }
  }
  std::vector<Vec> grid;
  std::vector<int> pick(K, 0);
  bool done = false;
  while (!done) {
    Vec theta(K);
    for (int j = 0; j < K; ++j) theta[j] = axes[j][static_cast<std::size_t>(pick[j])];
    if (space.contains(theta, 1e-12)) grid.push_back(theta);
    int c = K - 1;
    while (c >= 0) {
      if (++pick[c] <= per_axis) break;
      pick[c] = 0;
      --c;
    }
    if (c < 0) done = true;
  }
  return grid;
}

CertifiedConstants certify_constants(const Family& fam, const ScanOptions& opts) {
  const int K = fam.dim();
  if (K < 1) throw config_error("certify_constants: family has no free parameters");
  const ParamSpace& space = fam.space();

  CertifiedConstants cert;
  cert.K = K;
  cert.width = space.width();
  cert.Delta = 0.5 * cert.width;
  cert.provenance["Delta"] = "default: half the domain width";

  const int per_axis = K == 1 ? opts.per_axis : opts.per_axis_2d;
  auto grid = domain_scan_grid(space, per_axis);
  if (grid.empty()) throw numeric_error("certify_constants: empty scan grid");

  double min_eig = kPosInf, max_eig = 0.0, min_det = kPosInf, max_det = 0.0;
  for (const Vec& theta : grid) {
    Mat J = fam.fisher(theta);
    Eigen::SelfAdjointEigenSolver<Mat> eig(J);
    if (eig.info() != Eigen::Success) throw numeric_error("certify_constants: eigensolver failed");
    min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
    max_eig = std::max(max_eig, eig.eigenvalues().maxCoeff());
    double det = J.determinant();
    min_det = std::min(min_det, det);
    max_det = std::max(max_det, det);
  }
  if (!(min_eig > 0.0)) {
    throw numeric_error("certify_constants: Fisher information not positive definite on scan");
  }
  cert.zeta = 0.99 * min_eig;
  char label[128];
  std::snprintf(label, sizeof(label), "grid-certified: 0.99 * scan minimum at %d/axis", per_axis);
  cert.provenance["zeta"] = label;

  auto cf = fam.closed_form_constants();
  if (cf) {
    cert.lambda_max = cf->lambda_max;
    cert.det_max = cf->det_max;
    cert.kappa = cf->kappa;
    cert.kappa_prime = cf->kappa_prime;
    cert.ball_radius = cf->ball_radius;
    cert.c_eps_rate = cf->c_eps_rate;
    cert.B_closed = std::pow(cf->vnorm_coeff / cert.zeta + 1.0, 2);
    cert.provenance["lambda_max"] = "closed-form";
    cert.provenance["det_max"] = "closed-form";
    cert.provenance["kappa"] = "closed-form";
    cert.provenance["B_closed"] = "closed-form bound via max-norm of centered information";
  } else {
    cert.lambda_max = 1.05 * max_eig;
    cert.det_max = 1.05 * max_det;
    // Continuity rate estimated from eigenvalue ratios of nearby scan points.
    double rate = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      double d = (grid[i] - grid[i - 1]).norm();
      if (d <= 0.0 || d > 2.0 * cert.width / per_axis) continue;
      Mat A = fam.fisher(grid[i - 1]).llt().solve(fam.fisher(grid[i]));
      double lam = spectral_norm(0.5 * (A + A.transpose()));
      rate = std::max(rate, std::abs(lam - 1.0) / d);
    }
    cert.kappa = 1.5 * rate;
    cert.kappa_prime = cert.kappa;
    cert.ball_radius = cert.width;
    cert.c_eps_rate = std::max(cert.kappa, 1e-12);
    double vmax = 0.0;
    for (const Vec& theta : grid) {
      for (std::size_t x = 0; x < fam.alphabet_size(); ++x) {
        vmax = std::max(vmax, max_norm(centered_info_letter(fam, theta, x)));
      }
    }
    cert.B_closed = std::pow(1.05 * vmax + 1.0, 2);
    cert.provenance["lambda_max"] = "uncertified: 1.05 * scan maximum";
    cert.provenance["det_max"] = "uncertified: 1.05 * scan maximum";
    cert.provenance["kappa"] = "uncertified: 1.5 * scanned continuity rate";
    cert.provenance["B_closed"] = "uncertified: squared scan bound on centered information";
  }
  cert.B = cert.B_closed;
  cert.provenance["B"] = cert.provenance["B_closed"];

  // Derivative bound for sqrt(det J), central differences over scan points
  // that admit a symmetric step.
  double h = 1e-5 * cert.width;
  double dmax = 0.0;
  for (const Vec& theta : grid) {
    for (int i = 0; i < K; ++i) {
      Vec tp = theta, tm = theta;
      tp[i] += h;
      tm[i] -= h;
      if (!space.contains(tp, 0.0) || !space.contains(tm, 0.0)) continue;
      double d = (sqrt_det_fisher(fam, tp) - sqrt_det_fisher(fam, tm)) / (2.0 * h);
      dmax = std::max(dmax, std::abs(d));
    }
  }
  cert.D_J = 1.05 * dmax;
  cert.provenance["D_J"] = "uncertified: 1.05 * central-difference scan";

  cert.sqrtJ_integral = integrate_sqrt_det(fam, opts.gl_panels, opts.gl_points);
  cert.sqrtJ_integral_coarse =
      integrate_sqrt_det(fam, opts.gl_panels_coarse, opts.gl_points_coarse);
  std::snprintf(label, sizeof(label),
                "Gauss-Legendre %d panels x %d nodes; coarse-pass delta %.3e", opts.gl_panels,
                opts.gl_points, std::abs(cert.sqrtJ_integral - cert.sqrtJ_integral_coarse));
  cert.provenance["sqrtJ_integral"] = label;

  // Record the raw scan minimum of det J for the grid-size bound.
  cert.provenance["det_min_scan"] = std::to_string(0.95 * min_det);
  return cert;
}

TiltCertification certify_tilt(const Family& fam, CertifiedConstants& cert,
                               const std::vector<std::uint64_t>& n_list, double nu, double alpha,
                               const GridConfig& grid_cfg, const ScanOptions& opts) {
  const int K = fam.dim();
  if (K < 1) throw config_error("certify_tilt: family has no free parameters");
  const ParamSpace& space = fam.space();
  const std::size_t M = fam.alphabet_size();
  const int per_axis = K == 1 ? opts.per_axis : opts.per_axis_2d;
  auto grid = domain_scan_grid(space, per_axis);
  const int tilt_grid = K == 1 ? opts.tilt_grid : opts.tilt_grid_2d;

  // Deviation norms per interior count class: at the estimate (decides
  // whether the class crosses the threshold) and at the grid point standing
  // in for it (where the tilted route needs deviation to survive).  Two
  // designations of that stand-in matter -- the likelihood argmax (what the
  // untilted code selects; structure costs are flat across grid points) and
  // the metric-nearest point (the quantized estimate the regret analysis
  // instantiates) -- so retention is certified at the worse of the two.
  // Neither value depends on the tilt constants, so one enumeration serves
  // every sweep.
  struct ClassDeviation {
    double at_estimate;
    double at_selection;
    double log_n_over_n;
  };
  std::vector<ClassDeviation> classes;
  for (std::uint64_t n : n_list) {
    QuantizerGrid qgrid = build_grid(fam, n, grid_cfg);
    const auto& points = qgrid.points();
    if (points.empty()) continue;
    double lon = std::log(static_cast<double>(n)) / static_cast<double>(n);
    for_each_composition(n, M, [&](const std::vector<std::uint64_t>& counts) {
      Vec th = fam.mle(counts);
      if (!space.is_interior(th)) return;
      double vhat = max_norm(centered_info(fam, th, counts));
      if (vhat <= 0.0) return;  // never crosses any threshold
      std::size_t sel = 0;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < points.size(); ++i) {
        double ll = fam.log_likelihood(points[i].theta, counts);
        if (ll > best) {
          best = ll;
          sel = i;
        }
      }
      double w = max_norm(centered_info(fam, points[sel].theta, counts));
      std::size_t near = qgrid.nearest(th).point_index;
      if (near != sel) {
        w = std::min(w, max_norm(centered_info(fam, points[near].theta, counts)));
      }
      classes.push_back({vhat, w, lon});
    });
  }

  TiltCertification out;
  double B = cert.B_closed;
  double gamma = 0.99;
  for (int sweep = 1; sweep <= 20; ++sweep) {
    out.sweeps = sweep;
    // Largest retention consistent with the current curvature bound.  With
    // c^2(n) = 2.2 nu alpha B log(n)/n the threshold is
    // delta_n = c / sqrt(gamma): a class stays below it while
    // gamma <= c^2 / at_estimate^2, and once above it, retention
    // gamma * delta_n <= 0.99 * at_selection holds while
    // gamma <= (0.99 at_selection / c)^2.  Either branch suffices, so each
    // class caps gamma at the larger of the two closed forms.
    double gamma_new = 0.99;
    for (const ClassDeviation& cd : classes) {
      double c2 = 2.2 * nu * alpha * B * cd.log_n_over_n;
      double inactive = c2 / (cd.at_estimate * cd.at_estimate);
      double hold = 0.99 * 0.99 * cd.at_selection * cd.at_selection / c2;
      gamma_new = std::min(gamma_new, std::max(inactive, hold));
    }
    double g = 2.2 * nu * alpha * B / gamma_new;
    // Largest tilt magnitude the code will ever use (the threshold peaks at
    // n = 3).
    double delta_bar = tilt_magnitude(3, g, gamma_new, B);
    double B_scan = 1.02 * scan_tilted_covariance(fam, grid, delta_bar, tilt_grid);
    double B_new = std::min(std::max(B_scan, 1e-12), cert.B_closed);

    bool stable = std::abs(B_new - B) <= 1e-3 * B && std::abs(gamma_new - gamma) <= 1e-3;
    B = B_new;
    gamma = gamma_new;
    if (stable) {
      out.converged = true;
      break;
    }
  }

  out.B = B;
  out.gamma = gamma;
  out.g = 2.2 * nu * alpha * B / gamma;
  std::size_t deviant = 0;
  for (const ClassDeviation& cd : classes) {
    if (cd.at_estimate > std::sqrt(out.g * cd.log_n_over_n)) ++deviant;
  }
  out.deviant_classes = deviant;
  cert.B = B;
  cert.gamma = gamma;
  char label[160];
  std::snprintf(label, sizeof(label),
                "grid-certified: 1.02 * tilted-covariance scan, self-consistent in %d sweeps",
                out.sweeps);
  cert.provenance["B"] = label;
  std::snprintf(label, sizeof(label),
                "exact at certified sizes: class-wise retention at the selected and nearest "
                "grid points (%zu deviant classes)",
                out.deviant_classes);
  cert.provenance["gamma"] = label;
  return out;
}

CardinalityBound cardinality_bound(const CertifiedConstants& cert, double a, double beta,
                                   std::uint64_t n) {
  const int K = cert.K;
  const double nd = static_cast<double>(n);
  CardinalityBound b;
  b.C_J = 2.0 * K * std::pow(std::sqrt(cert.lambda_max) + 2.0, K - 1) * std::sqrt(cert.det_max);
  double det_min = 0.0;
  if (auto it = cert.provenance.find("det_min_scan"); it != cert.provenance.end()) {
    det_min = std::stod(it->second);
  }
  if (!(det_min > 0.0)) throw numeric_error("cardinality_bound: missing det-min scan value");
  b.C_Theta = K * a * cert.D_J / std::sqrt(det_min);
  double C_K = std::pow(2.0, K) * std::pow(cert.width + 2.0 * a, K - 1);
  b.C_JK = C_K * std::sqrt(cert.det_max) * a / cert.sqrtJ_integral;
  b.r_n = std::log1p(b.C_J * std::pow(nd, beta - 0.5)) + std::log1p(b.C_Theta * std::pow(nd, -beta)) +
          std::log1p(b.C_JK * std::pow(nd, -beta));
  b.main = 0.5 * K * std::log(nd) + std::log(cert.sqrtJ_integral) - K * std::log(a);
  b.log_bound = b.main + b.r_n;
  b.precondition_n = std::pow(std::sqrt(static_cast<double>(K)) * a / cert.ball_radius, 1.0 / beta);
  return b;
}

}  // namespace mdl
