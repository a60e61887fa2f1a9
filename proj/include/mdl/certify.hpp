#pragma once
// Certification of the analytic constants the regret bounds depend on.
//
// Each constant carries a provenance label: "closed-form" (implied by the
// family's structure), "grid-certified" (established by an exhaustive scan
// at a stated resolution with a safety margin), or "uncertified" (a scanned
// estimate with a margin but no guarantee between grid points).

#include "mdl/family.hpp"
#include "mdl/quantizer.hpp"

#include <map>

namespace mdl {

struct ScanOptions {
  int per_axis = 200;        // scan resolution per parameter axis (K == 1)
  int per_axis_2d = 48;      // per-axis resolution when K == 2
  int gl_panels = 24;        // composite Gauss-Legendre panels (fine pass)
  int gl_points = 16;        // nodes per panel (fine pass)
  int gl_panels_coarse = 8;  // coarse pass, for an error indication
  int gl_points_coarse = 8;
  int tilt_grid = 21;        // per-coordinate resolution of the tilt scan (K == 1)
  int tilt_grid_2d = 3;
};

struct CertifiedConstants {
  int K = 0;
  double zeta = 0.0;            // lower bound on the smallest eigenvalue of J
  double lambda_max = 0.0;      // upper bound on the largest eigenvalue of J
  double det_max = 0.0;         // upper bound on det J
  double D_J = 0.0;             // bound on |d sqrt(det J) / d theta_i|
  double sqrtJ_integral = 0.0;  // integral of sqrt(det J) over the domain
  double sqrtJ_integral_coarse = 0.0;
  double width = 0.0;           // largest coordinate extent of the domain
  double kappa = 0.0;           // relative-continuity rate of J
  double kappa_prime = 0.0;     // continuity rate under tilted laws
  double ball_radius = 0.0;     // radius on which the continuity rates hold
  double c_eps_rate = 0.0;      // curvature ratio bound exp(rate * eps)
  double B = 0.0;               // curvature bound for the tilted log-partition
  double B_closed = 0.0;        // the always-valid pointwise version of B
  double gamma = 0.99;          // deviation retention at the untilted selection
  double Delta = 0.0;           // chart radius used in the asymptotic threshold
  std::map<std::string, std::string> provenance;
};

// Scans / closed forms for everything except the tilt constants (B refined,
// gamma), which depend on code parameters and are set by certify_tilt.
CertifiedConstants certify_constants(const Family& fam, const ScanOptions& opts = {});

// Joint certification of the tilt curvature bound B and the deviation
// retention gamma, consistent with the threshold coefficient
// g = 2.2 * nu * alpha * B / gamma that the code layer uses by default.
//
// gamma is certified exactly at the listed sample sizes: count classes are
// enumerated exhaustively, and for each class with an interior estimate the
// deviation norm is evaluated at the estimate and at the grid points standing
// in for it over the quantizer built with grid_cfg -- the likelihood argmax
// (what the untilted code selects) and the metric-nearest point (the
// quantized estimate), taking the worse retention of the two.
// A class whose estimate exceeds the threshold delta_n = sqrt(g log n / n)
// must retain at least gamma * delta_n at its selection; since delta_n
// scales as 1/sqrt(gamma), each class caps gamma in closed form and the
// certificate is the largest self-consistent value.  B is refined by a
// tilted-covariance scan at the magnitudes that threshold implies.  Updates
// cert in place and reports the sweep outcome.
struct TiltCertification {
  double B = 0.0;
  double gamma = 0.0;
  double g = 0.0;
  int sweeps = 0;
  bool converged = false;
  std::size_t deviant_classes = 0;  // count classes beyond the threshold, over n_list
};

TiltCertification certify_tilt(const Family& fam, CertifiedConstants& cert,
                               const std::vector<std::uint64_t>& n_list, double nu, double alpha,
                               const GridConfig& grid_cfg = {}, const ScanOptions& opts = {});

// Grid-size bound: log |grid(n)| <= (K/2) log n + log integral(sqrt det J)
// - K log a + r(n) with the vanishing correction
//   r(n) = log(1 + C_J n^(beta - 1/2)) + log(1 + C_Theta n^(-beta))
//        + log(1 + C_JK n^(-beta)).
struct CardinalityBound {
  double log_bound = 0.0;  // full right-hand side, nats
  double main = 0.0;       // (K/2) log n + log integral - K log a
  double r_n = 0.0;
  double C_J = 0.0, C_Theta = 0.0, C_JK = 0.0;
  double precondition_n = 0.0;  // bound is proven for n at or beyond this size
};

CardinalityBound cardinality_bound(const CertifiedConstants& cert, double a, double beta,
                                   std::uint64_t n);

// Uniform grid over the domain (scan helper, exposed for reuse in oracles).
std::vector<Vec> domain_scan_grid(const ParamSpace& space, int per_axis);

}  // namespace mdl
