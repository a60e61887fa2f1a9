#include "mdl/family.hpp"

#include <algorithm>
#include <cmath>

namespace mdl {

Mat Family::empirical_fisher(const Vec& theta, const std::vector<std::uint64_t>& counts) const {
  if (counts.size() != alphabet_size()) {
    throw domain_error("empirical_fisher: count vector size mismatch");
  }
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  if (n == 0) throw domain_error("empirical_fisher: empty sample");
  Mat J = Mat::Zero(dim(), dim());
  for (std::size_t x = 0; x < counts.size(); ++x) {
    if (counts[x] == 0) continue;
    J += static_cast<double>(counts[x]) * empirical_fisher_letter(theta, x);
  }
  return J / static_cast<double>(n);
}

double Family::log_likelihood(const Vec& theta, const std::vector<std::uint64_t>& counts) const {
  return pmf(theta).log_prob_counts(counts);
}

BoundaryDecomposition Family::boundary_decomposition(const std::vector<int>&) const {
  throw unsupported_error("boundary decomposition not supported by " + name());
}

BoundaryDecomposition Family::boundary_decomposition_from_index(std::uint64_t) const {
  throw unsupported_error("boundary decomposition not supported by " + name());
}

// ---- MixtureFamily ---------------------------------------------------------

MixtureFamily::MixtureFamily(std::vector<FinitePmf> components, double tau)
    : q_(std::move(components)), tau_(tau) {
  if (q_.empty()) throw config_error("MixtureFamily: needs at least one component");
  M_ = q_[0].alphabet_size();
  for (const auto& c : q_) {
    if (c.alphabet_size() != M_) throw config_error("MixtureFamily: mixed alphabet sizes");
  }
  K_ = static_cast<int>(q_.size()) - 1;
  if (K_ >= 1) {
    space_ = ParamSpace::tau_simplex(K_, tau_);
  }
}

std::string MixtureFamily::name() const {
  return "mixture_K" + std::to_string(K_) + "_M" + std::to_string(M_);
}

const ParamSpace& MixtureFamily::space() const {
  if (!space_) throw unsupported_error("MixtureFamily with K == 0 has no parameter space");
  return *space_;
}

Vec MixtureFamily::full_weights(const Vec& theta) const {
  if (theta.size() != K_) throw domain_error("MixtureFamily: parameter dimension mismatch");
  Vec w(K_ + 1);
  w[0] = 1.0 - theta.sum();
  for (int i = 0; i < K_; ++i) w[i + 1] = theta[i];
  return w;
}

FinitePmf MixtureFamily::pmf(const Vec& theta) const {
  Vec w = full_weights(theta);
  Vec p = Vec::Zero(static_cast<Eigen::Index>(M_));
  for (int i = 0; i <= K_; ++i) p += w[i] * q_[static_cast<std::size_t>(i)].probs();
  return FinitePmf(p / p.sum());
}

Mat MixtureFamily::fisher(const Vec& theta) const {
  Vec w = full_weights(theta);
  Mat J = Mat::Zero(K_, K_);
  for (std::size_t x = 0; x < M_; ++x) {
    double p = 0.0;
    for (int i = 0; i <= K_; ++i) p += w[i] * q_[static_cast<std::size_t>(i)].prob(x);
    if (p == 0.0) continue;  // only possible when every component vanishes at x
    Vec d(K_);
    for (int i = 1; i <= K_; ++i) {
      d[i - 1] = q_[static_cast<std::size_t>(i)].prob(x) - q_[0].prob(x);
    }
    J += (d * d.transpose()) / p;
  }
  return J;
}

Mat MixtureFamily::empirical_fisher_letter(const Vec& theta, std::size_t x) const {
  if (x >= M_) throw domain_error("MixtureFamily: symbol out of range");
  Vec w = full_weights(theta);
  double p = 0.0;
  for (int i = 0; i <= K_; ++i) p += w[i] * q_[static_cast<std::size_t>(i)].prob(x);
  if (p == 0.0) return Mat::Zero(K_, K_);
  Vec d(K_);
  for (int i = 1; i <= K_; ++i) {
    d[i - 1] = q_[static_cast<std::size_t>(i)].prob(x) - q_[0].prob(x);
  }
  return (d * d.transpose()) / (p * p);
}

namespace {

// Maximize sum_i c_i log w_i over { w_i >= tau, sum w = 1 } for c >= 0.
// The optimum is w_i = max(tau, c_i / nu) with nu solving sum w = 1; the sum
// is decreasing in nu, so bisection applies.
Vec constrained_weight_step(const Vec& c, double tau) {
  const int m = static_cast<int>(c.size());
  double total = c.sum();
  if (total <= 0.0) return Vec::Constant(m, 1.0 / m);
  auto weight_sum = [&](double nu) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += std::max(tau, c[i] / nu);
    return s;
  };
  double lo = total;                      // weight_sum(lo) >= 1
  double hi = c.maxCoeff() / tau + 1.0;   // weight_sum(hi) <= m*tau <= 1 (+ margin)
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (weight_sum(mid) >= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double nu = 0.5 * (lo + hi);
  Vec w(m);
  for (int i = 0; i < m; ++i) w[i] = std::max(tau, c[i] / nu);
  return w / w.sum();
}

}  // namespace

Vec MixtureFamily::mle(const std::vector<std::uint64_t>& counts) const {
  if (counts.size() != M_) throw domain_error("MixtureFamily::mle: count vector size mismatch");
  if (K_ == 0) return Vec();
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  Vec w = Vec::Constant(K_ + 1, 1.0 / (K_ + 1));
  if (n == 0) return w.tail(K_);

  // EM with an exact constrained maximization step.  The log-likelihood is
  // concave in the weights, so the ascent converges to the constrained
  // optimum; iterate until the likelihood stalls.
  double ll_prev = kNegInf;
  for (int iter = 0; iter < 50000; ++iter) {
    Vec resp = Vec::Zero(K_ + 1);
    double ll = 0.0;
    for (std::size_t x = 0; x < M_; ++x) {
      if (counts[x] == 0) continue;
      double p = 0.0;
      for (int i = 0; i <= K_; ++i) p += w[i] * q_[static_cast<std::size_t>(i)].prob(x);
      if (p <= 0.0) {
        throw domain_error("MixtureFamily::mle: sample impossible under the family");
      }
      double cx = static_cast<double>(counts[x]);
      ll += cx * std::log(p);
      for (int i = 0; i <= K_; ++i) {
        resp[i] += cx * w[i] * q_[static_cast<std::size_t>(i)].prob(x) / p;
      }
    }
    w = constrained_weight_step(resp, tau_);
    if (iter >= 2 && ll - ll_prev <= 1e-13 * (1.0 + std::abs(ll))) break;
    ll_prev = ll;
  }
  return w.tail(K_);
}

std::uint64_t MixtureFamily::descriptor_states() const {
  return std::uint64_t{1} << (K_ + 1);
}

BoundaryDecomposition MixtureFamily::boundary_decomposition(const std::vector<int>& active) const {
  // Halfspace i < K is the floor of component i+1; halfspace K is the floor
  // of the implicit component 0.
  std::vector<int> pinned;
  for (int h : active) {
    if (h < 0 || h > K_) throw domain_error("MixtureFamily: bad active constraint index");
    pinned.push_back(h < K_ ? h + 1 : 0);
  }
  std::sort(pinned.begin(), pinned.end());
  return decompose(pinned);
}

BoundaryDecomposition MixtureFamily::boundary_decomposition_from_index(std::uint64_t index) const {
  if (index == 0 || index >= descriptor_states()) {
    throw domain_error("MixtureFamily: invalid boundary descriptor index");
  }
  std::vector<int> pinned;
  for (int i = 0; i <= K_; ++i) {
    if (index & (std::uint64_t{1} << i)) pinned.push_back(i);
  }
  return decompose(pinned);
}

BoundaryDecomposition MixtureFamily::decompose(const std::vector<int>& pinned) const {
  const int m = static_cast<int>(pinned.size());
  if (m == 0) throw domain_error("MixtureFamily: empty pinned set is not a boundary face");
  if (m > K_) throw domain_error("MixtureFamily: pinning every component is infeasible");
  std::vector<bool> is_pinned(K_ + 1, false);
  for (int j : pinned) is_pinned[static_cast<std::size_t>(j)] = true;

  // On the face, pinned components hold weight tau each; the remaining mass
  // 1 - tau*m is split among merged densities that absorb the pinned mass.
  double scale = 1.0 - tau_ * m;
  Vec pinned_mix = Vec::Zero(static_cast<Eigen::Index>(M_));
  for (int j : pinned) pinned_mix += q_[static_cast<std::size_t>(j)].probs();

  std::vector<int> free_idx;
  std::vector<FinitePmf> merged;
  for (int i = 0; i <= K_; ++i) {
    if (is_pinned[static_cast<std::size_t>(i)]) continue;
    free_idx.push_back(i);
    Vec p = scale * q_[static_cast<std::size_t>(i)].probs() + tau_ * pinned_mix;
    merged.emplace_back(p / p.sum());
  }

  BoundaryDecomposition d;
  d.descriptor_states = descriptor_states();
  d.descriptor_index = 0;
  for (int j : pinned) d.descriptor_index |= std::uint64_t{1} << j;

  const int sub_dim = static_cast<int>(free_idx.size()) - 1;
  std::shared_ptr<const Family> sub;
  if (sub_dim == 0) {
    sub = std::make_shared<FixedFamily>(merged[0]);
  } else {
    sub = std::make_shared<MixtureFamily>(std::move(merged), tau_ / scale);
  }
  d.sub = sub;

  const int K = K_;
  const double tau = tau_;
  d.embed = [K, tau, scale, free_idx, is_pinned, sub_dim](const Vec& w_sub) -> Vec {
    if (w_sub.size() != sub_dim) {
      throw domain_error("MixtureFamily boundary embed: dimension mismatch");
    }
    // Full weights of the sub-family over its own components.
    Vec w_full_sub(sub_dim + 1);
    w_full_sub[0] = 1.0 - w_sub.sum();
    for (int t = 0; t < sub_dim; ++t) w_full_sub[t + 1] = w_sub[t];
    // Map back: pinned components get tau, free component free_idx[t] gets
    // scale * w_full_sub[t]; then drop the implicit coordinate 0.
    Vec full = Vec::Constant(K + 1, tau);
    for (std::size_t t = 0; t < free_idx.size(); ++t) {
      full[free_idx[t]] = scale * w_full_sub[static_cast<Eigen::Index>(t)];
    }
    (void)is_pinned;
    return full.tail(K);
  };
  return d;
}

std::optional<FamilyConstants> MixtureFamily::closed_form_constants() const {
  if (K_ < 1) return std::nullopt;
  FamilyConstants c;
  double K = static_cast<double>(K_);
  c.lambda_max = K / (tau_ * tau_);
  c.det_max = std::pow(K / (tau_ * tau_), K);
  c.kappa = 2.0 * std::exp(1.0) * std::sqrt(K) / tau_;
  c.kappa_prime = c.kappa;
  c.ball_radius = tau_ / (2.0 * std::sqrt(K));
  c.c_eps_rate = 2.0 * std::sqrt(K) / tau_;
  c.vnorm_coeff = K * std::sqrt(K) / (tau_ * tau_);
  return c;
}

// ---- CanonicalBernoulliFamily ----------------------------------------------

namespace {
double sigmoid(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }
}  // namespace

CanonicalBernoulliFamily::CanonicalBernoulliFamily(double eta_lo, double eta_hi)
    : space_(ParamSpace::box(Vec::Constant(1, eta_lo), Vec::Constant(1, eta_hi))) {
  if (!std::isfinite(eta_lo) || !std::isfinite(eta_hi)) {
    throw config_error("CanonicalBernoulliFamily: bounds must be finite");
  }
}

std::string CanonicalBernoulliFamily::name() const { return "canonical_bernoulli"; }

FinitePmf CanonicalBernoulliFamily::pmf(const Vec& theta) const {
  if (theta.size() != 1) throw domain_error("CanonicalBernoulliFamily: parameter dimension");
  double s = sigmoid(theta[0]);
  Vec p(2);
  p << 1.0 - s, s;
  return FinitePmf(p);
}

Mat CanonicalBernoulliFamily::fisher(const Vec& theta) const {
  if (theta.size() != 1) throw domain_error("CanonicalBernoulliFamily: parameter dimension");
  double s = sigmoid(theta[0]);
  Mat J(1, 1);
  J(0, 0) = s * (1.0 - s);
  return J;
}

Mat CanonicalBernoulliFamily::empirical_fisher_letter(const Vec& theta, std::size_t x) const {
  if (x >= 2) throw domain_error("CanonicalBernoulliFamily: symbol out of range");
  return fisher(theta);  // canonical exponential family: data-free
}

Vec CanonicalBernoulliFamily::mle(const std::vector<std::uint64_t>& counts) const {
  if (counts.size() != 2) throw domain_error("CanonicalBernoulliFamily::mle: count size");
  double lo = space_.lo()[0], hi = space_.hi()[0];
  std::uint64_t k = counts[1], n = counts[0] + counts[1];
  if (n == 0) return Vec::Constant(1, 0.5 * (lo + hi));
  if (k == 0) return Vec::Constant(1, lo);
  if (k == n) return Vec::Constant(1, hi);
  double eta = std::log(static_cast<double>(k) / static_cast<double>(n - k));
  return Vec::Constant(1, std::clamp(eta, lo, hi));
}

BoundaryDecomposition CanonicalBernoulliFamily::boundary_decomposition(
    const std::vector<int>& active) const {
  if (active.size() != 1) {
    throw domain_error("CanonicalBernoulliFamily: expected exactly one active constraint");
  }
  // Halfspace 0 is eta <= hi, halfspace 1 is eta >= lo.
  return boundary_decomposition_from_index(active[0] == 0 ? 2 : 1);
}

BoundaryDecomposition CanonicalBernoulliFamily::boundary_decomposition_from_index(
    std::uint64_t index) const {
  if (index != 1 && index != 2) {
    throw domain_error("CanonicalBernoulliFamily: invalid boundary descriptor index");
  }
  double end = index == 1 ? space_.lo()[0] : space_.hi()[0];
  BoundaryDecomposition d;
  d.sub = std::make_shared<FixedFamily>(pmf(Vec::Constant(1, end)));
  d.embed = [end](const Vec&) { return Vec::Constant(1, end); };
  d.descriptor_index = index;
  d.descriptor_states = 3;
  return d;
}

std::optional<FamilyConstants> CanonicalBernoulliFamily::closed_form_constants() const {
  FamilyConstants c;
  c.lambda_max = 0.25;
  c.det_max = 0.25;
  // d/deta log J = 1 - 2*sigmoid(eta) has magnitude < 1, so J(eta')/J(eta)
  // <= exp(|eta'-eta|) and the linearized rate exp(r)-1 <= r*e^r holds with
  // rate e^r on a ball of radius r = 1/2.
  c.kappa = std::exp(0.5);
  c.kappa_prime = std::exp(0.5);
  c.ball_radius = 0.5;
  c.c_eps_rate = 1.0;
  c.vnorm_coeff = 0.0;  // centered observed information is identically zero
  return c;
}

// ---- BernoulliMeanFamily ---------------------------------------------------

BernoulliMeanFamily::BernoulliMeanFamily()
    : space_(ParamSpace::box(Vec::Zero(1), Vec::Ones(1))) {}

FinitePmf BernoulliMeanFamily::pmf(const Vec& theta) const {
  if (theta.size() != 1) throw domain_error("BernoulliMeanFamily: parameter dimension");
  double t = theta[0];
  if (t < 0.0 || t > 1.0) throw domain_error("BernoulliMeanFamily: parameter out of [0,1]");
  Vec p(2);
  p << 1.0 - t, t;
  return FinitePmf(p);
}

Mat BernoulliMeanFamily::fisher(const Vec& theta) const {
  double t = theta[0];
  if (!(t > 0.0 && t < 1.0)) {
    throw domain_error("BernoulliMeanFamily: Fisher information undefined at the interval ends");
  }
  Mat J(1, 1);
  J(0, 0) = 1.0 / (t * (1.0 - t));
  return J;
}

Mat BernoulliMeanFamily::empirical_fisher_letter(const Vec& theta, std::size_t x) const {
  double t = theta[0];
  if (!(t > 0.0 && t < 1.0)) {
    throw domain_error("BernoulliMeanFamily: observed information undefined at the interval ends");
  }
  Mat J(1, 1);
  J(0, 0) = x == 1 ? 1.0 / (t * t) : 1.0 / ((1.0 - t) * (1.0 - t));
  return J;
}

Vec BernoulliMeanFamily::mle(const std::vector<std::uint64_t>& counts) const {
  if (counts.size() != 2) throw domain_error("BernoulliMeanFamily::mle: count size");
  std::uint64_t n = counts[0] + counts[1];
  if (n == 0) return Vec::Constant(1, 0.5);
  return Vec::Constant(1, static_cast<double>(counts[1]) / static_cast<double>(n));
}

// ---- FixedFamily -----------------------------------------------------------

FinitePmf FixedFamily::pmf(const Vec& theta) const {
  if (theta.size() != 0) throw domain_error("FixedFamily: expected empty parameter");
  return p_;
}

}  // namespace mdl
