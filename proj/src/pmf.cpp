#include "mdl/pmf.hpp"

#include <cmath>

namespace mdl {

FinitePmf::FinitePmf(Vec probs) : p_(std::move(probs)) {
  if (p_.size() == 0) throw domain_error("FinitePmf: empty alphabet");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p_.size(); ++i) {
    if (!(p_[i] >= 0.0)) throw domain_error("FinitePmf: negative or NaN mass");
    sum += p_[i];
  }
  if (std::abs(sum - 1.0) > kSumTol) {
    throw domain_error("FinitePmf: mass sums to " + std::to_string(sum));
  }
}

double FinitePmf::log_prob(std::size_t x) const {
  if (x >= alphabet_size()) throw domain_error("FinitePmf::log_prob: symbol out of range");
  double p = p_[static_cast<Eigen::Index>(x)];
  return p > 0.0 ? std::log(p) : kNegInf;
}

double FinitePmf::log_prob_counts(const std::vector<std::uint64_t>& counts) const {
  if (counts.size() != alphabet_size()) {
    throw domain_error("FinitePmf::log_prob_counts: count vector size mismatch");
  }
  double r = 0.0;
  for (std::size_t x = 0; x < counts.size(); ++x) {
    if (counts[x] == 0) continue;
    double lp = log_prob(x);
    if (lp == kNegInf) return kNegInf;
    r += static_cast<double>(counts[x]) * lp;
  }
  return r;
}

}  // namespace mdl
