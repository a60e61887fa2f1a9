#pragma once
// Local exponential tilting around a base family ("fiber bundle" extension).
//
// For a parameter theta and sample x^n, the centered observed information
//   V(theta; x^n) = J(theta)^(-1/2) Jhat(theta; x^n) J(theta)^(-1/2) - I
// measures how far the observed information deviates from its model value.
// Tilting the base pmf by a symmetric coefficient matrix xi,
//   p_{theta,xi}(x^n) = p_theta(x^n) * exp( n(<xi, V(theta;x^n)> - psi_theta(xi)) ),
// stays a normalized i.i.d. model because V is an average of per-letter
// terms.  A finite set of tilt matrices (the zero tilt plus +-u_n on each
// coordinate) is enough to cut the leading log-loss term on samples whose
// V is unusually large.

#include "mdl/family.hpp"

namespace mdl {

// Largest absolute entry.
double max_norm(const Mat& V);

// Spectral norm of a symmetric matrix (largest |eigenvalue|).
double spectral_norm(const Mat& V);

// Symmetric inverse square root of a positive definite matrix.
Mat inverse_sqrt(const Mat& J);

// Per-letter centered observed information V(theta; x).
Mat centered_info_letter(const Family& fam, const Vec& theta, std::size_t x);

// Sample version: average of the per-letter terms over the counts.
Mat centered_info(const Family& fam, const Vec& theta, const std::vector<std::uint64_t>& counts);

// Log-partition of the tilt: psi_theta(xi) = log sum_x p_theta(x) exp(<xi, V(theta;x)>),
// with <A, B> = sum_ij A_ij B_ij.  psi_theta(0) = 0 and d/dxi psi|_0 = E[V] = 0.
double log_partition(const Family& fam, const Vec& theta, const Mat& xi);

// Tilted single-letter pmf p_theta(x) exp(<xi, V(theta;x)> - psi_theta(xi)).
FinitePmf tilted_pmf(const Family& fam, const Vec& theta, const Mat& xi);

// The finite tilt set for sample size n: the zero matrix plus +-u E^(l,m)
// over all K^2 coordinate matrices, 2K^2 + 1 members total.  Index 0 is the
// zero tilt; index 1 + 2*(l*K + m) + s covers entry (l, m) with sign s
// (s = 0 positive, s = 1 negative).
class TiltSet {
 public:
  TiltSet(int K, double u);

  int dim() const { return K_; }
  double magnitude() const { return u_; }
  std::size_t size() const { return 2 * static_cast<std::size_t>(K_) * K_ + 1; }
  Mat tilt(std::size_t index) const;

  // The tilt achieving <xi, V> = u * max_norm(V): sign-matched at the first
  // (row-major) entry of maximal magnitude; the zero tilt when V == 0.
  std::size_t select(const Mat& V) const;

 private:
  int K_;
  double u_;
};

// Deviation threshold delta_n = sqrt(g log(n) / n); zero at n = 1.
double deviation_threshold(std::uint64_t n, double g);

// Tilt magnitude u_n = gamma * delta_n / B.
double tilt_magnitude(std::uint64_t n, double g, double gamma, double B);

// Switch code lengths: the zero tilt costs l2(n) = n^(-nu) nats and each
// nonzero tilt costs l2_bar, set by the Kraft equality
//   exp(-l2) + 2 K^2 exp(-l2_bar) = 1.
double switch_cost_zero(std::uint64_t n, double nu);
double switch_cost_nonzero(int K, double l2);

// Classification of a sample by its estimate and deviation.
enum class SequenceClass {
  kTypical,   // interior estimate, max_norm(V) <= delta_n
  kDeviant,   // interior estimate, max_norm(V) >  delta_n
  kBoundary,  // estimate on the domain boundary
};

SequenceClass classify_sequence(const Family& fam, const Vec& theta_hat,
                                const std::vector<std::uint64_t>& counts, double delta_n,
                                double boundary_tol = 1e-9);

}  // namespace mdl
