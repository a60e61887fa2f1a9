#pragma once
// Brute-force ground truth for the coding layer, all exact over count
// classes (a two-part length depends on a sequence only through its symbol
// counts, so sums over all M^n sequences collapse to sums over the
// n-compositions weighted by multinomial coefficients).

#include "mdl/bitstream.hpp"
#include "mdl/codec.hpp"
#include "mdl/divergence.hpp"

namespace mdl {

// Largest count-class enumeration any oracle will attempt; beyond it the
// oracle refuses (capacity_error) rather than approximate.  Callers with a
// bigger budget pass their own cap.
inline constexpr std::uint64_t kDefaultClassCap = std::uint64_t{1} << 24;

// Exact code-space mass sum_{x^n} exp(-L(x^n)) for the codec's two-part
// length.  A decodable length assignment must keep this at or below one.
double kraft_sum(const Codec& codec, std::uint64_t class_cap = kDefaultClassCap);

// Log normalizer of the normalized maximum-likelihood distribution:
// log sum_{x^n} max_theta p_theta(x^n).  The minimax regret benchmark no
// two-part code can beat.
double nml_log_sum(const Family& fam, std::uint64_t n,
                   std::uint64_t class_cap = kDefaultClassCap);

// Closed form of the same quantity for the Bernoulli family on [0, 1]:
// log sum_k C(n,k) (k/n)^k (1-k/n)^(n-k).
double nml_log_sum_bernoulli(std::uint64_t n);

// Exhaustive regret scan: the exact maximum of L(x^n) - max_theta log
// p_theta(x^n) over every sequence, via count classes.  With
// `interior_only`, sequences whose constrained likelihood maximizer sits on
// the domain boundary are excluded (the interior-route guarantee's scope).
struct RegretScan {
  double max_regret = kNegInf;
  std::vector<std::uint64_t> argmax_counts;
  double max_regret_interior = kNegInf;  // -inf when no class took the route
  double max_regret_boundary = kNegInf;
  std::uint64_t classes_scanned = 0;
  std::uint64_t classes_skipped = 0;
};
RegretScan exhaustive_max_regret(const Codec& codec, bool interior_only = false,
                                 std::uint64_t class_cap = kDefaultClassCap);

// Exact audit of the risk chain
//   E[d_lambda(p* || selected model)]  <=  redundancy / n  <=  resolvability
// for samples drawn i.i.d. from the family member at theta_star.  The
// redundancy is E[L(x^n) + log p*(x^n)]; the resolvability is the smallest
// per-letter KL-plus-weighted-structure cost over the interior candidate
// models (grid point and tilt).  Margins are reported so callers can assert
// them nonnegative up to tolerance.
struct RiskChainAudit {
  double risk = 0.0;
  double redundancy = 0.0;          // whole-sequence nats
  double resolvability = 0.0;       // per-letter nats
  double margin_risk = 0.0;         // redundancy/n - risk
  double margin_resolvability = 0.0;  // resolvability - redundancy/n
};
RiskChainAudit risk_chain_audit(const Codec& codec, const Vec& theta_star, double lambda,
                                std::uint64_t class_cap = kDefaultClassCap);

// Monte Carlo audit of the pointwise exceedance guarantee: under p*, the
// event
//   d_lambda(p* || selected model) > (1/n) (log p*(x^n) + L(x^n)) + b
// has probability below exp(-n b / alpha).  Every count class's encoding is
// memoized once, so each trial is a table lookup.  `sigma` is the binomial
// standard deviation at max(frequency, bound), for tolerance-aware checks.
struct TailAudit {
  double bound = 0.0;
  double frequency = 0.0;
  std::uint64_t exceedances = 0;
  std::uint64_t trials = 0;
  double sigma = 0.0;
};
TailAudit tail_audit(const Codec& codec, const Vec& theta_star, double b, std::uint64_t trials,
                     std::uint64_t seed, std::uint64_t class_cap = kDefaultClassCap);

}  // namespace mdl
