#include "mdl/oracles.hpp"

#include <cmath>
#include <map>

namespace mdl {

namespace {

void check_class_cap(std::uint64_t n, std::size_t m, std::uint64_t cap) {
  std::uint64_t classes = composition_count(n, m);
  if (classes > cap) {
    throw capacity_error("oracle enumeration of " + std::to_string(classes) +
                         " count classes exceeds the cap of " + std::to_string(cap));
  }
}

}  // namespace

double kraft_sum(const Codec& codec, std::uint64_t class_cap) {
  const std::uint64_t n = codec.sample_size();
  const std::size_t M = codec.family().alphabet_size();
  check_class_cap(n, M, class_cap);
  double sum = 0.0;
  for_each_composition(n, M, [&](const std::vector<std::uint64_t>& counts) {
    double len = codec.total_length(counts);
    sum += std::exp(log_multinomial(n, counts) - len);
  });
  return sum;
}

double nml_log_sum(const Family& fam, std::uint64_t n, std::uint64_t class_cap) {
  const std::size_t M = fam.alphabet_size();
  check_class_cap(n, M, class_cap);
  std::vector<double> terms;
  for_each_composition(n, M, [&](const std::vector<std::uint64_t>& counts) {
    Vec theta_hat = fam.mle(counts);
    terms.push_back(log_multinomial(n, counts) + fam.log_likelihood(theta_hat, counts));
  });
  return log_sum_exp(terms);
}

double nml_log_sum_bernoulli(std::uint64_t n) {
  std::vector<double> terms;
  for (std::uint64_t k = 0; k <= n; ++k) {
    double term = log_multinomial(n, {n - k, k});
    if (k > 0) term += static_cast<double>(k) * std::log(static_cast<double>(k) / n);
    if (k < n) {
      term += static_cast<double>(n - k) * std::log(static_cast<double>(n - k) / n);
    }
    terms.push_back(term);
  }
  return log_sum_exp(terms);
}

RegretScan exhaustive_max_regret(const Codec& codec, bool interior_only,
                                 std::uint64_t class_cap) {
  const std::uint64_t n = codec.sample_size();
  const Family& fam = codec.family();
  check_class_cap(n, fam.alphabet_size(), class_cap);
  RegretScan scan;
  for_each_composition(n, fam.alphabet_size(), [&](const std::vector<std::uint64_t>& counts) {
    if (interior_only) {
      Vec theta_hat = fam.mle(counts);
      if (!fam.space().is_interior(theta_hat)) {
        ++scan.classes_skipped;
        return;
      }
    }
    Codec::Encoding enc = codec.encode(counts);
    ++scan.classes_scanned;
    if (enc.regret > scan.max_regret) {
      scan.max_regret = enc.regret;
      scan.argmax_counts = counts;
    }
    double& route_max = enc.route == Route::kInterior ? scan.max_regret_interior
                                                      : scan.max_regret_boundary;
    route_max = std::max(route_max, enc.regret);
  });
  return scan;
}

RiskChainAudit risk_chain_audit(const Codec& codec, const Vec& theta_star, double lambda,
                                std::uint64_t class_cap) {
  const std::uint64_t n = codec.sample_size();
  const Family& fam = codec.family();
  check_class_cap(n, fam.alphabet_size(), class_cap);
  const FinitePmf p_star = fam.pmf(theta_star);

  RiskChainAudit audit;
  for_each_composition(n, fam.alphabet_size(), [&](const std::vector<std::uint64_t>& counts) {
    double ll_star = p_star.log_prob_counts(counts);
    double weight = std::exp(log_multinomial(n, counts) + ll_star);
    if (weight == 0.0) return;
    Codec::Encoding enc = codec.encode(counts);
    audit.risk += weight * renyi_divergence(p_star, enc.payload, lambda);
    audit.redundancy += weight * (enc.total + ll_star);
  });

  // Any interior candidate upper-bounds the two-part length, so the chain
  // holds with the candidate's full structural cost (route surcharge
  // included when the code splits routes).
  double route_nats = codec.combined() ? codec.config().alpha * codec.l1() : 0.0;
  double best = kPosInf;
  for (std::size_t p = 0; p < codec.grid().size(); ++p) {
    for (std::size_t t = 0; t < codec.tilt_count(); ++t) {
      double cand = kl_divergence(p_star, codec.interior_payload(p, t)) +
                    (codec.interior_structure_nats(t) + route_nats) / static_cast<double>(n);
      best = std::min(best, cand);
    }
  }
  audit.resolvability = best;
  audit.margin_risk = audit.redundancy / static_cast<double>(n) - audit.risk;
  audit.margin_resolvability = audit.resolvability - audit.redundancy / static_cast<double>(n);
  return audit;
}

TailAudit tail_audit(const Codec& codec, const Vec& theta_star, double b, std::uint64_t trials,
                     std::uint64_t seed, std::uint64_t class_cap) {
  const std::uint64_t n = codec.sample_size();
  const Family& fam = codec.family();
  const std::size_t M = fam.alphabet_size();
  check_class_cap(n, M, class_cap);
  const FinitePmf p_star = fam.pmf(theta_star);
  const double lambda = renyi_order_for_alpha(codec.config().alpha);

  // One exceedance verdict per count class, computed exactly up front.
  std::map<std::vector<std::uint64_t>, bool> exceeds;
  for_each_composition(n, M, [&](const std::vector<std::uint64_t>& counts) {
    Codec::Encoding enc = codec.encode(counts);
    double ll_star = p_star.log_prob_counts(counts);
    double divergence = renyi_divergence(p_star, enc.payload, lambda);
    double threshold = (ll_star + enc.total) / static_cast<double>(n) + b;
    exceeds[counts] = divergence > threshold;
  });

  TailAudit audit;
  audit.trials = trials;
  audit.bound = std::exp(-static_cast<double>(n) * b / codec.config().alpha);

  // Inverse-CDF sampling from raw engine output keeps trials reproducible
  // across standard libraries.
  std::mt19937_64 rng = substream(seed, 0);
  std::vector<double> cdf(M);
  double acc = 0.0;
  for (std::size_t x = 0; x < M; ++x) {
    acc += p_star.prob(x);
    cdf[x] = acc;
  }
  std::vector<std::uint64_t> counts(M);
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::uint64_t i = 0; i < n; ++i) {
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      std::size_t x = 0;
      while (x + 1 < M && u >= cdf[x]) ++x;
      ++counts[x];
    }
    if (exceeds.at(counts)) ++audit.exceedances;
  }
  audit.frequency = static_cast<double>(audit.exceedances) / static_cast<double>(trials);
  double f = std::max(audit.frequency, audit.bound);
  audit.sigma = std::sqrt(f * (1.0 - f) / static_cast<double>(trials));
  return audit;
}

}  // namespace mdl
