#pragma once
// Shared aliases, error types and small numeric/combinatorial helpers used
// across the library.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// ---- error taxonomy --------------------------------------------------------

// Invalid or inconsistent user-supplied configuration.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A quantity left its mathematically valid range (overflow, NaN, ...).
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An argument violates a documented domain restriction.
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A fixed-size container or code budget was exceeded.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The requested combination of options is valid but not implemented.
struct unsupported_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative routine failed to reach its tolerance.
struct convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- numerics --------------------------------------------------------------

// log(sum_i exp(v_i)) with the usual max-shift stabilization.  Returns -inf
// for an empty input or when every term is -inf.
inline double log_sum_exp(const std::vector<double>& v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

inline double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// log of the multinomial coefficient n! / prod_i c_i!  (sum c_i == n).
inline double log_multinomial(std::uint64_t n, const std::vector<std::uint64_t>& counts) {
  double r = std::lgamma(static_cast<double>(n) + 1.0);
  for (auto c : counts) r -= std::lgamma(static_cast<double>(c) + 1.0);
  return r;
}

// ---- combinatorics ---------------------------------------------------------

// Enumerates all vectors of m nonnegative integers summing to n (compositions
// of n into m parts) in lexicographic order and calls fn on each.  Used for
// i.i.d.-exact sums over sequences grouped by their count vector.
inline void for_each_composition(std::uint64_t n, std::size_t m,
                                 const std::function<void(const std::vector<std::uint64_t>&)>& fn) {
  if (m == 0) {
    if (n == 0) {
      std::vector<std::uint64_t> empty;
      fn(empty);
    }
    return;
  }
  std::vector<std::uint64_t> c(m, 0);
  c[m - 1] = n;
  // Recursively assign c[0..m-2]; the last entry absorbs the remainder.
  std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t i, std::uint64_t rem) {
    if (i == m - 1) {
      c[i] = rem;
      fn(c);
      return;
    }
    for (std::uint64_t k = 0; k <= rem; ++k) {
      c[i] = k;
      rec(i + 1, rem - k);
    }
  };
  rec(0, n);
}

// Number of compositions of n into m parts: C(n+m-1, m-1).
inline std::uint64_t composition_count(std::uint64_t n, std::size_t m) {
  if (m == 0) return n == 0 ? 1 : 0;
  // Multiplicative binomial evaluation; values used here stay well below 2^63.
  std::uint64_t r = 1;
  for (std::size_t i = 1; i < m; ++i) {
    r = r * (n + i) / i;
  }
  return r;
}

// ---- deterministic RNG streams ---------------------------------------------

// splitmix64 step; used only to expand a seed into independent substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// A deterministically seeded engine for substream `index` of master `seed`.
// Different indices give statistically independent streams, and the mapping
// is stable across platforms.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s = a ^ (index * 0x9e3779b97f4a7c15ULL);
  std::uint64_t b = splitmix64(s);
  std::uint64_t c = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace mdl
