#include "mdl/bundle.hpp"

#include <cmath>

namespace mdl {

double max_norm(const Mat& V) { return V.size() == 0 ? 0.0 : V.cwiseAbs().maxCoeff(); }

double spectral_norm(const Mat& V) {
  if (V.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> eig(V);
  if (eig.info() != Eigen::Success) throw numeric_error("spectral_norm: eigensolver failed");
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

Mat inverse_sqrt(const Mat& J) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(J);
  if (eig.info() != Eigen::Success) throw numeric_error("inverse_sqrt: eigensolver failed");
  Vec lam = eig.eigenvalues();
  if (lam.minCoeff() <= 0.0) throw numeric_error("inverse_sqrt: matrix not positive definite");
  return eig.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

Mat centered_info_letter(const Family& fam, const Vec& theta, std::size_t x) {
  Mat Jis = inverse_sqrt(fam.fisher(theta));
  Mat Jhat = fam.empirical_fisher_letter(theta, x);
  const int K = fam.dim();
  return Jis * Jhat * Jis - Mat::Identity(K, K);
}

Mat centered_info(const Family& fam, const Vec& theta, const std::vector<std::uint64_t>& counts) {
  Mat Jis = inverse_sqrt(fam.fisher(theta));
  Mat Jhat = fam.empirical_fisher(theta, counts);
  const int K = fam.dim();
  return Jis * Jhat * Jis - Mat::Identity(K, K);
}

double log_partition(const Family& fam, const Vec& theta, const Mat& xi) {
  FinitePmf p = fam.pmf(theta);
  Mat Jis = inverse_sqrt(fam.fisher(theta));
  const int K = fam.dim();
  std::vector<double> terms;
  terms.reserve(p.alphabet_size());
  for (std::size_t x = 0; x < p.alphabet_size(); ++x) {
    double lp = p.log_prob(x);
    if (lp == kNegInf) continue;
    Mat V = Jis * fam.empirical_fisher_letter(theta, x) * Jis - Mat::Identity(K, K);
    terms.push_back(lp + xi.cwiseProduct(V).sum());
  }
  return log_sum_exp(terms);
}

FinitePmf tilted_pmf(const Family& fam, const Vec& theta, const Mat& xi) {
  FinitePmf p = fam.pmf(theta);
  double psi = log_partition(fam, theta, xi);
  Mat Jis = inverse_sqrt(fam.fisher(theta));
  const int K = fam.dim();
  Vec out(static_cast<Eigen::Index>(p.alphabet_size()));
  for (std::size_t x = 0; x < p.alphabet_size(); ++x) {
    double lp = p.log_prob(x);
    if (lp == kNegInf) {
      out[static_cast<Eigen::Index>(x)] = 0.0;
      continue;
    }
    Mat V = Jis * fam.empirical_fisher_letter(theta, x) * Jis - Mat::Identity(K, K);
    out[static_cast<Eigen::Index>(x)] = std::exp(lp + xi.cwiseProduct(V).sum() - psi);
  }
  return FinitePmf(out / out.sum());
}

TiltSet::TiltSet(int K, double u) : K_(K), u_(u) {
  if (K < 1) throw config_error("TiltSet: K must be >= 1");
  if (!(u >= 0.0)) throw config_error("TiltSet: tilt magnitude must be >= 0");
}

Mat TiltSet::tilt(std::size_t index) const {
  if (index >= size()) throw domain_error("TiltSet::tilt: index out of range");
  Mat xi = Mat::Zero(K_, K_);
  if (index == 0) return xi;
  std::size_t t = index - 1;
  std::size_t entry = t / 2;
  int sign = (t % 2 == 0) ? 1 : -1;
  int l = static_cast<int>(entry) / K_;
  int m = static_cast<int>(entry) % K_;
  xi(l, m) = sign * u_;
  return xi;
}

std::size_t TiltSet::select(const Mat& V) const {
  if (V.rows() != K_ || V.cols() != K_) throw domain_error("TiltSet::select: dimension mismatch");
  double best = 0.0;
  int bl = -1, bm = -1;
  for (int l = 0; l < K_; ++l) {
    for (int m = 0; m < K_; ++m) {
      if (std::abs(V(l, m)) > best) {
        best = std::abs(V(l, m));
        bl = l;
        bm = m;
      }
    }
  }
  if (bl < 0) return 0;  // V == 0
  std::size_t entry = static_cast<std::size_t>(bl) * K_ + bm;
  std::size_t sign = V(bl, bm) > 0.0 ? 0 : 1;
  return 1 + 2 * entry + sign;
}

double deviation_threshold(std::uint64_t n, double g) {
  if (n < 1) throw domain_error("deviation_threshold: n must be >= 1");
  double nd = static_cast<double>(n);
  return std::sqrt(g * std::log(nd) / nd);
}

double tilt_magnitude(std::uint64_t n, double g, double gamma, double B) {
  if (!(B > 0.0)) throw domain_error("tilt_magnitude: B must be positive");
  return gamma * deviation_threshold(n, g) / B;
}

double switch_cost_zero(std::uint64_t n, double nu) {
  if (n < 1) throw domain_error("switch_cost_zero: n must be >= 1");
  return std::pow(static_cast<double>(n), -nu);
}

double switch_cost_nonzero(int K, double l2) {
  if (!(l2 > 0.0)) throw domain_error("switch_cost_nonzero: l2 must be positive");
  double tail = -std::expm1(-l2);  // 1 - exp(-l2), accurately for small l2
  return std::log(2.0 * K * K) - std::log(tail);
}

SequenceClass classify_sequence(const Family& fam, const Vec& theta_hat,
                                const std::vector<std::uint64_t>& counts, double delta_n,
                                double boundary_tol) {
  if (!fam.space().is_interior(theta_hat, boundary_tol)) return SequenceClass::kBoundary;
  Mat V = centered_info(fam, theta_hat, counts);
  return max_norm(V) <= delta_n ? SequenceClass::kTypical : SequenceClass::kDeviant;
}

}  // namespace mdl
