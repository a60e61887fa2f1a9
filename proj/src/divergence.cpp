#include "mdl/divergence.hpp"

#include <cmath>

namespace mdl {

double kl_divergence(const FinitePmf& p, const FinitePmf& q) {
  if (p.alphabet_size() != q.alphabet_size()) {
    throw domain_error("kl_divergence: alphabet size mismatch");
  }
  double r = 0.0;
  for (std::size_t x = 0; x < p.alphabet_size(); ++x) {
    double px = p.prob(x);
    if (px == 0.0) continue;
    double qx = q.prob(x);
    if (qx == 0.0) return kPosInf;
    r += px * std::log(px / qx);
  }
  return r;
}

double renyi_divergence_logs(const std::vector<double>& logp, const std::vector<double>& logq,
                             double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw domain_error("renyi_divergence: lambda must lie in (0, 1)");
  }
  if (logp.size() != logq.size()) {
    throw domain_error("renyi_divergence: index set size mismatch");
  }
  std::vector<double> terms;
  terms.reserve(logp.size());
  for (std::size_t x = 0; x < logp.size(); ++x) {
    if (logp[x] == kNegInf) continue;  // zero p-mass contributes nothing
    if (logq[x] == kNegInf) continue;  // p^lambda * q^(1-lambda) == 0
    terms.push_back(lambda * logp[x] + (1.0 - lambda) * logq[x]);
  }
  double lse = log_sum_exp(terms);
  if (lse == kNegInf) return kPosInf;  // disjoint supports
  return -lse / (1.0 - lambda);
}

double renyi_divergence(const FinitePmf& p, const FinitePmf& q, double lambda) {
  if (p.alphabet_size() != q.alphabet_size()) {
    throw domain_error("renyi_divergence: alphabet size mismatch");
  }
  std::vector<double> logp(p.alphabet_size()), logq(q.alphabet_size());
  for (std::size_t x = 0; x < p.alphabet_size(); ++x) {
    logp[x] = p.log_prob(x);
    logq[x] = q.log_prob(x);
  }
  return renyi_divergence_logs(logp, logq, lambda);
}

}  // namespace mdl
