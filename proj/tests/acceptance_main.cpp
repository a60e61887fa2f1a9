// End-to-end acceptance checks.  Each numbered criterion pits one guarantee
// of the coding stack against an exact (count-class exhaustive) or Monte
// Carlo oracle at desk scale and prints "criterion N: PASS/FAIL (x.xs)".
// Failure details go to stderr; the exit status is nonzero when any
// criterion fails.

#include "mdl/bitstream.hpp"
#include "mdl/bundle.hpp"
#include "mdl/certify.hpp"
#include "mdl/codec.hpp"
#include "mdl/oracles.hpp"

#include "support/test_util.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace mdl;
using mdl::testing::constant_fisher;
using mdl::testing::v1;
using mdl::testing::v2;

// Collects failed comparisons; a criterion passes iff none failed.
struct Criterion {
  int failures = 0;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    ++failures;
    if (details.size() < 12) details.push_back(what);
  }
};

template <class... Args>
std::string fmt(const char* pattern, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, args...);
  return std::string(buf);
}

// Uniform draw from the domain (rejection from the bounding box).
Vec sample_domain(const ParamSpace& space, std::mt19937_64& rng) {
  auto [lo, hi] = space.bounding_box();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int tries = 0; tries < 100000; ++tries) {
    Vec th(space.dim());
    for (int i = 0; i < space.dim(); ++i) th[i] = lo[i] + unit(rng) * (hi[i] - lo[i]);
    if (space.contains(th, 0.0)) return th;
  }
  throw numeric_error("domain sampling failed to hit the domain");
}

// Inverse-CDF draw of n symbols from a single-letter pmf.
std::vector<std::size_t> draw_symbols(const FinitePmf& p, std::uint64_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> out;
  out.reserve(n);
  for (std::uint64_t t = 0; t < n; ++t) {
    double u = unit(rng);
    double acc = 0.0;
    std::size_t x = p.alphabet_size() - 1;
    for (std::size_t s = 0; s < p.alphabet_size(); ++s) {
      acc += p.prob(s);
      if (u < acc) {
        x = s;
        break;
      }
    }
    out.push_back(x);
  }
  return out;
}

// Certified constants for a family, with the tilt sweep run at the given
// sizes when the family actually tilts.
CertifiedConstants certified(const Family& fam, const std::vector<std::uint64_t>& tilt_sizes,
                             double nu, double alpha) {
  CertifiedConstants cert = certify_constants(fam);
  if (!fam.is_exponential() && !tilt_sizes.empty()) {
    certify_tilt(fam, cert, tilt_sizes, nu, alpha);
  }
  return cert;
}

// 1. Decodability: the exhaustive code-space mass sum exp(-L) stays at or
// below one for both families, every n in 1..10, both description weights,
// both the plain and the combined code.
void criterion_kraft(Criterion& c) {
  struct Setup {
    const char* label;
    std::shared_ptr<const Family> fam;
  };
  std::vector<Setup> setups = {{"bernoulli", testing::bernoulli_natural()},
                               {"mixture", testing::mix_binary()}};
  for (auto& s : setups) {
    CertifiedConstants cert = certified(*s.fam, {10}, 0.05, 2.0);
    for (std::uint64_t n = 1; n <= 10; ++n) {
      for (double alpha : {1.0, 2.0}) {
        for (bool combined : {false, true}) {
          CodeConfig cfg;
          cfg.alpha = alpha;
          cfg.combined = combined;
          Codec codec(s.fam, n, cfg, cert);
          double mass = kraft_sum(codec);
          c.require(mass <= 1.0 + 1e-9,
                    fmt("%s n=%llu alpha=%g %s: code-space mass %.12f", s.label,
                        static_cast<unsigned long long>(n), alpha,
                        combined ? "combined" : "plain", mass));
        }
      }
    }
  }
}

// 2. Quantizer guarantees: for sampled parameters the in-cell representative
// is within squared metric distance K a^2 / (4n), the global nearest point
// only improves on it, and every point of the segment joining the parameter
// to its representative stays within sqrt(K) a n^(-1/4) of the cell anchor.
void criterion_quantizer(Criterion& c) {
  struct Setup {
    const char* label;
    std::shared_ptr<const Family> fam;
  };
  std::vector<Setup> setups = {{"K=1", testing::mix_ternary()},
                               {"K=2", testing::mix_ternary_k2()}};
  const GridConfig gcfg;  // a = 2, beta = 1/4
  std::uint64_t stream = 0;
  for (auto& s : setups) {
    const int K = s.fam->dim();
    for (std::uint64_t n : {std::uint64_t{100}, std::uint64_t{10000}}) {
      QuantizerGrid grid = build_grid(*s.fam, n, gcfg);
      auto rng = substream(20260822, stream++);
      const double nd = static_cast<double>(n);
      const double quad_bound = K * gcfg.a * gcfg.a / (4.0 * nd) + 1e-9;
      const double seg_bound = std::sqrt(static_cast<double>(K)) * gcfg.a * std::pow(nd, -0.25) + 1e-9;
      int quad_bad = 0, order_bad = 0, seg_bad = 0;
      for (int t = 0; t < 10000; ++t) {
        Vec th = sample_domain(s.fam->space(), rng);
        std::size_t ci = grid.cell_of(th);
        const LargeCell& cell = grid.cells()[ci];
        std::size_t best = cell.first_point;
        double qbest = kPosInf;
        for (std::size_t i = cell.first_point; i < cell.first_point + cell.num_points; ++i) {
          Vec d = grid.points()[i].theta - th;
          double q = d.dot(cell.J_S * d);
          if (q < qbest) {
            qbest = q;
            best = i;
          }
        }
        if (!(qbest <= quad_bound)) ++quad_bad;
        QuantizerGrid::NearestResult nr = grid.nearest(th);
        if (!(nr.quad <= qbest + 1e-9)) ++order_bad;
        for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
          Vec seg = th + frac * (grid.points()[best].theta - th);
          if (!((seg - cell.theta_S).norm() <= seg_bound)) ++seg_bad;
        }
      }
      c.require(quad_bad == 0, fmt("%s n=%llu: %d quadratic-form violations", s.label,
                                   static_cast<unsigned long long>(n), quad_bad));
      c.require(order_bad == 0, fmt("%s n=%llu: %d nearest-point regressions", s.label,
                                    static_cast<unsigned long long>(n), order_bad));
      c.require(seg_bad == 0, fmt("%s n=%llu: %d segment-condition violations", s.label,
                                  static_cast<unsigned long long>(n), seg_bad));
    }
  }
}

// 3. Grid cardinality: the built grid never exceeds the analytic size bound
// assembled from the certified constants.
void criterion_cardinality(Criterion& c) {
  struct Setup {
    const char* label;
    std::shared_ptr<const Family> fam;
  };
  std::vector<Setup> setups = {{"mixture K=1", testing::mix_binary()},
                               {"mixture K=2", testing::mix_ternary_k2()},
                               {"constant-J K=1", constant_fisher(1, 1.0)},
                               {"constant-J K=2", constant_fisher(2, 1.0)}};
  const GridConfig gcfg;
  for (auto& s : setups) {
    CertifiedConstants cert = certify_constants(*s.fam);
    for (std::uint64_t n : {std::uint64_t{100}, std::uint64_t{1000}, std::uint64_t{10000},
                            std::uint64_t{100000}}) {
      QuantizerGrid grid = build_grid(*s.fam, n, gcfg);
      CardinalityBound cb = cardinality_bound(cert, gcfg.a, gcfg.beta, n);
      c.require(grid.log_size() <= cb.log_bound + 1e-9,
                fmt("%s n=%llu: log grid size %.6f exceeds bound %.6f", s.label,
                    static_cast<unsigned long long>(n), grid.log_size(), cb.log_bound));
    }
  }
}

// 4. Interior regret: the exact worst interior-estimate regret of the plain
// code stays below the certified bound, recomposed here from the constants
// and cross-checked against the codec's own report.
void criterion_interior_regret(Criterion& c) {
  auto fam = testing::bernoulli_natural();
  CertifiedConstants cert = certify_constants(*fam);
  for (std::uint64_t n : {std::uint64_t{8}, std::uint64_t{10}, std::uint64_t{12}}) {
    for (double a : {1.0, 2.0}) {
      CodeConfig cfg;
      cfg.a = a;
      cfg.combined = false;
      Codec codec(fam, n, cfg, cert);
      const double alpha = cfg.alpha;
      const double nd = static_cast<double>(n);
      // K = 1: the dimension factors in the bound collapse to one.
      double C_n = (1.0 + cert.kappa * a * std::pow(nd, -cfg.beta)) *
                   (1.0 + cert.kappa * a / (2.0 * std::sqrt(cert.zeta * nd)));
      CardinalityBound cb = cardinality_bound(cert, a, cfg.beta, n);
      double f_n = C_n * a * a / (8.0 * alpha) - std::log(a) + cb.r_n;
      double bound = alpha * (0.5 * std::log(nd) + std::log(cert.sqrtJ_integral) + f_n);
      RegretReport rep = codec.regret_report();
      c.require(std::abs(bound - rep.interior_regret_bound) <= 1e-9,
                fmt("n=%llu a=%g: recomposed bound %.9f != reported %.9f",
                    static_cast<unsigned long long>(n), a, bound, rep.interior_regret_bound));
      RegretScan scan = exhaustive_max_regret(codec, /*interior_only=*/true);
      c.require(scan.classes_scanned > 0 && scan.max_regret_interior > kNegInf,
                fmt("n=%llu a=%g: no interior classes scanned",
                    static_cast<unsigned long long>(n), a));
      c.require(scan.max_regret_interior <= bound + 1e-9,
                fmt("n=%llu a=%g: max interior regret %.6f exceeds bound %.6f",
                    static_cast<unsigned long long>(n), a, scan.max_regret_interior, bound));
    }
  }
}

// 5. Deviation split at n = 12, exhaustively: (i) on every small-deviation
// sequence the regret obeys the chain bound assembled from the certified
// constants; (ii) on every large-deviation sequence the tilt-gain margin at
// the quantized estimate is positive, the gain function clears it, and the
// data-loss inequality with the measured deviation ratio holds.
void criterion_deviation_split(Criterion& c) {
  auto fam = testing::mix_ternary();
  const std::uint64_t n = 12;
  const double alpha = 2.0, nu = 0.01, a = 2.0, eps = 0.25;
  CertifiedConstants cert = certify_constants(*fam);
  TiltCertification tc = certify_tilt(*fam, cert, {n}, nu, alpha, GridConfig{a, 0.25});
  c.require(tc.converged, "tilt certification did not converge");
  CodeConfig cfg;
  cfg.alpha = alpha;
  cfg.nu = nu;
  cfg.combined = false;
  Codec codec(fam, n, cfg, cert);
  c.require(codec.bundle_on(), "tilting inactive on the non-exponential family");
  const double delta = codec.delta_n();
  const double u = codec.tilt_u();
  const double B = cert.B;
  const double gamma = cert.gamma;
  c.require(std::abs(codec.g() - tc.g) <= 1e-12, "threshold coefficient drifted from certificate");

  const double nd = static_cast<double>(n);
  double C_n = (1.0 + cert.kappa * a * std::pow(nd, -0.25)) *
               (1.0 + cert.kappa * a / (2.0 * std::sqrt(cert.zeta * nd)));
  double C_Gn = C_n * (1.0 + cert.kappa_prime * a / (2.0 * std::sqrt(cert.zeta * nd)));
  RegretReport rep = codec.regret_report(eps);
  c.require(std::abs(C_Gn - rep.C_Gn) <= 1e-9 * C_Gn, "chain constant drifted from report");
  double chain_rhs = C_Gn * a * a * (1.0 + delta) / 8.0 +
                     alpha * (codec.grid().log_size() + codec.l2());

  // Scope of the curvature-ratio constant: the quantization error must fit
  // inside the eps-ball where exp(c_eps_rate * eps) bounds the ratio.
  c.require(nd > a * a / (4.0 * cert.zeta * eps * eps),
            "eps-ball does not cover the quantization error at this n");
  c.require(delta <= 1.0, fmt("threshold %.4f outside the analysis range", delta));
  const double C_eps = std::exp(cert.c_eps_rate * eps);
  const double quad_term = C_n * C_eps * a * a / 8.0;

  const TiltSet* tilts = codec.tilt_set();
  std::size_t small_dev = 0, large_dev = 0;
  int chain_bad = 0, radius_bad = 0, margin_bad = 0, gain_bad = 0, loss_bad = 0;
  for_each_composition(n, fam->alphabet_size(), [&](const std::vector<std::uint64_t>& counts) {
    Vec th = fam->mle(counts);
    if (!fam->space().is_interior(th)) return;  // boundary estimates are out of scope
    double vn = max_norm(centered_info(*fam, th, counts));
    if (vn <= delta) {
      ++small_dev;
      Codec::Encoding enc = codec.encode(counts);
      if (!(enc.regret <= chain_rhs + 1e-9)) ++chain_bad;
      return;
    }
    ++large_dev;
    QuantizerGrid::NearestResult nr = codec.grid().nearest(th);
    const Vec& tq = codec.grid().points()[nr.point_index].theta;
    if (!((tq - th).norm() <= eps)) ++radius_bad;
    Mat Vq = centered_info(*fam, tq, counts);
    double w = max_norm(Vq);
    Mat xi = tilts->tilt(tilts->select(Vq));
    double gain = xi.cwiseProduct(Vq).sum() - log_partition(*fam, tq, xi);
    double margin = u * w * (1.0 - B * u / (2.0 * gamma * delta));
    if (!(margin > 0.0)) ++margin_bad;
    if (!(gain > margin - 1e-9)) ++gain_bad;
    double loss = fam->log_likelihood(th, counts) - (fam->log_likelihood(tq, counts) + nd * gain);
    double loss_rhs = quad_term - vn * ((gamma * delta / (2.0 * B)) * (w / vn) * nd - quad_term);
    if (!(loss < loss_rhs + 1e-9)) ++loss_bad;
  });
  c.require(small_dev > 0 && large_dev > 0,
            fmt("deviation split degenerate: %zu small, %zu large", small_dev, large_dev));
  c.require(chain_bad == 0,
            fmt("%d chain-bound violations over %zu small-deviation classes", chain_bad, small_dev));
  c.require(radius_bad == 0, fmt("%d quantized estimates outside the eps-ball", radius_bad));
  c.require(margin_bad == 0, fmt("%d nonpositive tilt-gain margins", margin_bad));
  c.require(gain_bad == 0, fmt("%d gain-function violations", gain_bad));
  c.require(loss_bad == 0,
            fmt("%d data-loss inequality violations over %zu large-deviation classes", loss_bad,
                large_dev));
}

// 6. Risk chain: expected selected-model divergence <= redundancy / n <=
// resolvability, exactly, for three interior sources and three sample sizes.
void criterion_risk_chain(Criterion& c) {
  auto fam = testing::mix_ternary();
  CertifiedConstants cert = certified(*fam, {6, 8, 10}, 0.05, 2.0);
  c.require(std::abs(renyi_order_for_alpha(2.0) - 0.5) <= 1e-15,
            "divergence order for alpha = 2 is not 1/2");
  for (std::uint64_t n : {std::uint64_t{6}, std::uint64_t{8}, std::uint64_t{10}}) {
    CodeConfig cfg;  // alpha = 2 by default
    Codec codec(fam, n, cfg, cert);
    for (double t : {0.3, 0.5, 0.7}) {
      RiskChainAudit audit = risk_chain_audit(codec, v1(t), 0.5);
      c.require(audit.margin_risk >= -1e-9,
                fmt("n=%llu theta*=%.1f: risk margin %.3e", static_cast<unsigned long long>(n), t,
                    audit.margin_risk));
      c.require(audit.margin_resolvability >= -1e-9,
                fmt("n=%llu theta*=%.1f: resolvability margin %.3e",
                    static_cast<unsigned long long>(n), t, audit.margin_resolvability));
    }
  }
}

// 7. Pointwise exceedance: the Monte Carlo violation frequency of the
// per-letter divergence bound stays within three binomial deviations of the
// guarantee.
void criterion_tail(Criterion& c) {
  auto fam = testing::mix_ternary();
  const std::uint64_t n = 50;
  CertifiedConstants cert = certified(*fam, {n}, 0.05, 2.0);
  CodeConfig cfg;
  Codec codec(fam, n, cfg, cert);
  for (double b : {0.05, 0.1}) {
    TailAudit ta = tail_audit(codec, v1(0.35), b, 100000, 20260822);
    c.require(ta.trials == 100000, "trial count mismatch");
    c.require(ta.frequency <= ta.bound + 3.0 * ta.sigma,
              fmt("b=%.2f: frequency %.5f exceeds bound %.5f + 3*sigma %.5f", b, ta.frequency,
                  ta.bound, ta.sigma));
  }
}

// 8. Minimax ordering: every tested code's exact worst regret dominates the
// family's normalized-maximum-likelihood complexity, and the generic
// complexity oracle matches the closed binomial form.
void criterion_minimax_ordering(Criterion& c) {
  struct Setup {
    const char* label;
    std::shared_ptr<const Family> fam;
    std::vector<std::uint64_t> sizes;
    std::vector<double> alphas;
  };
  std::vector<Setup> setups = {
      {"bernoulli", testing::bernoulli_natural(), {8, 10, 12}, {1.0, 2.0}},
      {"mixture M=2", testing::mix_binary(), {6, 10}, {2.0}},
      {"mixture M=3", testing::mix_ternary(), {8, 12}, {2.0}},
  };
  for (auto& s : setups) {
    CertifiedConstants cert = certified(*s.fam, s.sizes, 0.05, 2.0);
    for (std::uint64_t n : s.sizes) {
      double complexity = nml_log_sum(*s.fam, n);
      for (double alpha : s.alphas) {
        CodeConfig cfg;
        cfg.alpha = alpha;
        Codec codec(s.fam, n, cfg, cert);
        RegretScan scan = exhaustive_max_regret(codec);
        c.require(scan.max_regret >= complexity - 1e-9,
                  fmt("%s n=%llu alpha=%g: max regret %.6f below complexity %.6f", s.label,
                      static_cast<unsigned long long>(n), alpha, scan.max_regret, complexity));
      }
    }
  }
  BernoulliMeanFamily closed;
  for (std::uint64_t n = 1; n <= 64; ++n) {
    double diff = std::abs(nml_log_sum(closed, n) - nml_log_sum_bernoulli(n));
    c.require(diff <= 1e-10, fmt("bernoulli complexity n=%llu: |generic - closed| = %.3e",
                                 static_cast<unsigned long long>(n), diff));
  }
}

// 9. Tilt gain: on every large-deviation class, switching the quantized
// estimate's candidate from the zero tilt to the sign-matched tilt shortens
// the total by at least the guaranteed gain minus the switch-cost spread.
void criterion_tilt_gain(Criterion& c) {
  auto fam = testing::mix_ternary();
  const std::uint64_t n = 12;
  const double alpha = 2.0, nu = 0.01;
  CertifiedConstants cert = certify_constants(*fam);
  TiltCertification tc = certify_tilt(*fam, cert, {n}, nu, alpha, GridConfig{2.0, 0.25});
  c.require(tc.converged, "tilt certification did not converge");
  CodeConfig cfg;
  cfg.alpha = alpha;
  cfg.nu = nu;
  cfg.combined = false;
  Codec codec(fam, n, cfg, cert);
  const double delta = codec.delta_n();
  const double u = codec.tilt_u();
  const double spread = alpha * (codec.l2_bar() - codec.l2());
  const TiltSet* tilts = codec.tilt_set();
  std::size_t instances = 0;
  int bad = 0;
  for_each_composition(n, fam->alphabet_size(), [&](const std::vector<std::uint64_t>& counts) {
    Vec th = fam->mle(counts);
    if (!fam->space().is_interior(th)) return;
    if (max_norm(centered_info(*fam, th, counts)) <= delta) return;
    ++instances;
    QuantizerGrid::NearestResult nr = codec.grid().nearest(th);
    const Vec& tq = codec.grid().points()[nr.point_index].theta;
    Mat Vq = centered_info(*fam, tq, counts);
    std::size_t xi_idx = tilts->select(Vq);
    Mat xi = tilts->tilt(xi_idx);
    double ll_q = fam->log_likelihood(tq, counts);
    double zero_total = -ll_q + codec.interior_structure_nats(0);
    double gain = xi.cwiseProduct(Vq).sum() - log_partition(*fam, tq, xi);
    double tilted_total = -(ll_q + static_cast<double>(n) * gain) +
                          codec.interior_structure_nats(xi_idx);
    double improvement = zero_total - tilted_total;
    double guaranteed = static_cast<double>(n) * u * max_norm(Vq) *
                            (1.0 - cert.B * u / (2.0 * cert.gamma * delta)) -
                        spread;
    if (!(improvement >= guaranteed - 1e-9)) ++bad;
  });
  c.require(instances > 0, "no large-deviation instances constructed");
  c.require(bad == 0, fmt("%d of %zu instances miss the guaranteed gain", bad, instances));
}

// 10. Bitstreams: a thousand compress/decompress roundtrips are exact and
// the physical length stays within 32 bits of the information-content ideal.
void criterion_bitstream(Criterion& c) {
  struct Setup {
    const char* label;
    std::shared_ptr<const Family> fam;
    std::uint64_t n;
    int trials;
  };
  std::vector<Setup> setups = {
      {"mixture M=3", testing::mix_ternary(), 32, 300},
      {"mixture M=2", testing::mix_binary(), 48, 300},
      {"bernoulli", testing::bernoulli_natural(), 64, 200},
      {"mixture K=2", testing::mix_ternary_k2(), 16, 200},
  };
  std::uint64_t stream_idx = 0;
  for (auto& s : setups) {
    CertifiedConstants cert = certified(*s.fam, {s.n}, 0.05, 2.0);
    CodeConfig cfg;
    Codec codec(s.fam, s.n, cfg, cert);
    auto rng = substream(991, stream_idx++);
    int rt_bad = 0, len_bad = 0;
    double worst = 0.0;
    for (int t = 0; t < s.trials; ++t) {
      Vec th = sample_domain(s.fam->space(), rng);
      std::vector<std::size_t> syms = draw_symbols(s.fam->pmf(th), s.n, rng);
      std::vector<std::uint8_t> stream = compress_sequence(codec, syms);
      bool ok = peek_sequence_length(stream) == s.n && decompress_sequence(codec, stream) == syms;
      if (!ok) ++rt_bad;
      StreamAccounting acct = account_stream(codec, syms);
      worst = std::max(worst, std::abs(acct.overhead_bits));
      if (std::abs(acct.overhead_bits) > 32.0) ++len_bad;
    }
    c.require(rt_bad == 0, fmt("%s: %d roundtrip failures", s.label, rt_bad));
    c.require(len_bad == 0,
              fmt("%s: %d streams beyond 32 bits of ideal (worst %.1f)", s.label, len_bad, worst));
  }
}

// 11. Identities: the zero tilt has zero log-partition, the centered
// information integrates to zero, tilted pmfs are normalized, and the
// max-entry / spectral norm sandwich holds on random symmetric matrices.
void criterion_identities(Criterion& c) {
  struct Setup {
    std::shared_ptr<const Family> fam;
    std::vector<Vec> thetas;
  };
  std::vector<Setup> setups;
  setups.push_back({testing::mix_binary(), {v1(0.35), v1(0.6)}});
  setups.push_back({testing::mix_ternary(), {v1(0.25), v1(0.5), v1(0.75)}});
  setups.push_back({testing::mix_ternary_k2(), {v2(0.3, 0.3), v2(0.25, 0.45)}});
  for (auto& s : setups) {
    const int K = s.fam->dim();
    for (const Vec& th : s.thetas) {
      c.require(std::abs(log_partition(*s.fam, th, Mat::Zero(K, K))) <= 1e-12,
                "zero tilt has nonzero log-partition");
      Mat ev = Mat::Zero(K, K);
      FinitePmf p = s.fam->pmf(th);
      for (std::size_t x = 0; x < s.fam->alphabet_size(); ++x) {
        ev += p.prob(x) * centered_info_letter(*s.fam, th, x);
      }
      c.require(ev.cwiseAbs().maxCoeff() <= 1e-10,
                fmt("centered information mean %.3e", ev.cwiseAbs().maxCoeff()));
      for (double mag : {0.05, 0.2}) {
        TiltSet tilts(K, mag);
        for (std::size_t i = 0; i < tilts.size(); ++i) {
          FinitePmf tp = tilted_pmf(*s.fam, th, tilts.tilt(i));
          double sum = tp.probs().sum();
          c.require(std::abs(sum - 1.0) <= 1e-12, fmt("tilted pmf sums to %.15f", sum));
        }
      }
    }
  }
  auto rng = substream(7, 0);
  std::uniform_real_distribution<double> entry(-3.0, 3.0);
  int bad = 0;
  for (int t = 0; t < 1000; ++t) {
    int K = 1 + t % 4;
    Mat V(K, K);
    for (int r = 0; r < K; ++r) {
      for (int col = 0; col < K; ++col) V(r, col) = entry(rng);
    }
    V = 0.5 * (V + V.transpose()).eval();
    double mn = max_norm(V);
    double sn = spectral_norm(V);
    if (!(mn / std::sqrt(static_cast<double>(K)) <= sn + 1e-12 && sn <= K * mn + 1e-12)) ++bad;
  }
  c.require(bad == 0, fmt("%d norm-sandwich violations", bad));
}

}  // namespace

int main() {
  struct Entry {
    int number;
    void (*run)(Criterion&);
  };
  const std::vector<Entry> entries = {
      {1, criterion_kraft},         {2, criterion_quantizer},
      {3, criterion_cardinality},   {4, criterion_interior_regret},
      {5, criterion_deviation_split}, {6, criterion_risk_chain},
      {7, criterion_tail},          {8, criterion_minimax_ordering},
      {9, criterion_tilt_gain},     {10, criterion_bitstream},
      {11, criterion_identities},
  };
  int failed = 0;
  for (const Entry& e : entries) {
    Criterion c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      e.run(c);
    } catch (const std::exception& ex) {
      c.require(false, std::string("exception: ") + ex.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = c.failures == 0;
    std::printf("criterion %d: %s (%.1fs)\n", e.number, ok ? "PASS" : "FAIL", secs);
    std::fflush(stdout);
    if (!ok) {
      ++failed;
      std::fprintf(stderr, "criterion %d: %d failed comparison(s)\n", e.number, c.failures);
      for (const std::string& d : c.details) std::fprintf(stderr, "  %s\n", d.c_str());
    }
  }
  std::printf("%zu of %zu criteria passed\n", entries.size() - static_cast<std::size_t>(failed),
              entries.size());
  return failed == 0 ? 0 : 1;
}
