#pragma once
// Divergences between finite pmfs: Kullback-Leibler and the Renyi family.

#include "mdl/pmf.hpp"

namespace mdl {

// KL divergence D(p || q) in nats.  Conventions: terms with p(x) == 0
// contribute 0; p(x) > 0 with q(x) == 0 gives +inf.
double kl_divergence(const FinitePmf& p, const FinitePmf& q);

// Renyi divergence of order lambda in (0, 1):
//   d_lambda(p || q) = -(1/(1-lambda)) * log sum_x p(x)^lambda q(x)^(1-lambda)
// in nats.  Conventions: x with p(x) == 0 contributes 0 regardless of q(x);
// the divergence is finite whenever p and q share support on some x.
// Throws domain_error for lambda outside (0, 1).
double renyi_divergence(const FinitePmf& p, const FinitePmf& q, double lambda);

// Renyi divergence between i.i.d. product distributions equals n times the
// single-letter divergence; helper to keep call sites self-describing.
inline double renyi_divergence_iid(const FinitePmf& p, const FinitePmf& q, double lambda,
                                   std::uint64_t n) {
  return static_cast<double>(n) * renyi_divergence(p, q, lambda);
}

// Renyi divergence of order lambda between two explicit log-probability
// assignments over a shared finite index set, where logp describes a
// normalized distribution but logq may be any sub-probability assignment
// (used to compare against aggregate codes).  Same conventions as above.
double renyi_divergence_logs(const std::vector<double>& logp, const std::vector<double>& logq,
                             double lambda);

}  // namespace mdl
