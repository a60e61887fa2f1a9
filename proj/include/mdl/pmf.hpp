#pragma once
// Finite probability mass functions on the alphabet {0, ..., M-1}.

#include "mdl/common.hpp"

namespace mdl {

// A validated pmf over a finite alphabet.  Entries must be nonnegative and
// sum to 1 within kSumTol.
class FinitePmf {
 public:
  static constexpr double kSumTol = 1e-12;

  // Empty placeholder (alphabet size 0); assign a validated pmf before use.
  FinitePmf() = default;

  explicit FinitePmf(Vec probs);

  std::size_t alphabet_size() const { return static_cast<std::size_t>(p_.size()); }
  double prob(std::size_t x) const { return p_[static_cast<Eigen::Index>(x)]; }
  const Vec& probs() const { return p_; }

  // log prob(x); -inf when prob(x) == 0.
  double log_prob(std::size_t x) const;

  // log prob of an i.i.d. sequence given as symbol counts.
  double log_prob_counts(const std::vector<std::uint64_t>& counts) const;

 private:
  Vec p_;
};

}  // namespace mdl
