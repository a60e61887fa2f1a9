#include "mdl/codec.hpp"

#include <cmath>
#include <numbers>

namespace mdl {

double renyi_order_for_alpha(double alpha) {
  if (!(alpha > 1.0)) {
    throw config_error("renyi_order_for_alpha: requires alpha > 1");
  }
  return 1.0 - 1.0 / alpha;
}

Codec::Codec(std::shared_ptr<const Family> fam, std::uint64_t n, CodeConfig cfg,
             std::optional<CertifiedConstants> cert)
    : fam_(std::move(fam)), n_(n), cfg_(cfg) {
  if (!fam_) throw config_error("Codec: null family");
  if (fam_->dim() < 1) throw config_error("Codec: family has no free parameters");
  if (n_ < 1) throw config_error("Codec: sample size must be >= 1");
  if (!(cfg_.alpha >= 1.0)) throw config_error("Codec: alpha must be >= 1");
  if (!(cfg_.beta > 0.0 && cfg_.beta < 0.5)) throw config_error("Codec: beta must be in (0, 1/2)");
  if (!(cfg_.iota > 0.0 && cfg_.d > 2.0 * cfg_.iota)) {
    throw config_error("Codec: requires d > 2*iota > 0");
  }
  if (!(cfg_.nu > 0.0)) throw config_error("Codec: nu must be positive");

  bool want_bundle = cfg_.use_bundle.value_or(!fam_->is_exponential());
  bundle_on_ = want_bundle && n_ >= 2;
  if (want_bundle && n_ < 2) {
    construction_notes_.push_back("tilting disabled: the deviation threshold vanishes at n = 1");
  }

  bool need_tilt_cert = bundle_on_ && !cfg_.g.has_value() && !cert.has_value();
  if (cert.has_value()) {
    cert_ = std::move(*cert);
  } else {
    cert_ = certify_constants(*fam_);
  }
  if (need_tilt_cert) {
    // The tilt sweep enumerates every count class at the certification
    // sample size; keep that enumeration at desk scale even when the code
    // itself serves a much longer sample.
    constexpr double kTiltCertClassBudget = 4096.0;
    const std::size_t M = fam_->alphabet_size();
    auto log_classes = [M](std::uint64_t n) {
      return std::lgamma(static_cast<double>(n + M)) - std::lgamma(static_cast<double>(n) + 1.0) -
             std::lgamma(static_cast<double>(M));
    };
    std::uint64_t cert_n = n_;
    if (log_classes(cert_n) > std::log(kTiltCertClassBudget)) {
      std::uint64_t lo = 2, hi = n_;
      while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (log_classes(mid) <= std::log(kTiltCertClassBudget)) {
          lo = mid;
        } else {
          hi = mid - 1;
        }
      }
      cert_n = lo;
      construction_notes_.push_back("tilt constants certified at sample size " +
                                    std::to_string(cert_n) +
                                    " (class enumeration capped at desk scale)");
    }
    certify_tilt(*fam_, cert_, {cert_n}, cfg_.nu, cfg_.alpha, GridConfig{cfg_.a, cfg_.beta});
  }

  grid_ = build_grid(*fam_, n_, GridConfig{cfg_.a, cfg_.beta});

  if (bundle_on_) {
    g_ = cfg_.g.value_or(2.2 * cfg_.nu * cfg_.alpha * cert_.B / cert_.gamma);
    delta_n_ = deviation_threshold(n_, g_);
    u_n_ = tilt_magnitude(n_, g_, cert_.gamma, cert_.B);
    l2_ = switch_cost_zero(n_, cfg_.nu);
    l2_bar_ = switch_cost_nonzero(fam_->dim(), l2_);
    tilt_.emplace(fam_->dim(), u_n_);
    if (!(cert_.gamma * g_ / (2.0 * cert_.B) - cfg_.nu * cfg_.alpha > 0.0)) {
      construction_notes_.push_back(
          "gamma*g/(2B) - nu*alpha <= 0: the asymptotic regime is unreachable");
    }
  }
  log_pmf_cache_.assign(grid_.size() * tilt_count(), std::nullopt);
}

double Codec::l1() const { return std::pow(static_cast<double>(n_), -cfg_.iota); }

double Codec::interior_structure_nats(std::size_t tilt) const {
  double cost = grid_.log_size();
  if (bundle_on_) cost += tilt == 0 ? l2_ : l2_bar_;
  return cfg_.alpha * cost;
}

const Vec& Codec::point_log_pmf(std::size_t point, std::size_t tilt) const {
  std::size_t slot = point * tilt_count() + tilt;
  if (!log_pmf_cache_[slot]) {
    const Vec& theta = grid_.points()[point].theta;
    FinitePmf base = fam_->pmf(theta);
    const std::size_t M = base.alphabet_size();
    Vec lp(static_cast<Eigen::Index>(M));
    if (tilt == 0 || !bundle_on_) {
      for (std::size_t x = 0; x < M; ++x) lp[static_cast<Eigen::Index>(x)] = base.log_prob(x);
    } else {
      Mat xi = tilt_->tilt(tilt);
      Mat Jis = inverse_sqrt(fam_->fisher(theta));
      const int K = fam_->dim();
      std::vector<double> terms;
      terms.reserve(M);
      for (std::size_t x = 0; x < M; ++x) {
        double b = base.log_prob(x);
        if (b == kNegInf) {
          lp[static_cast<Eigen::Index>(x)] = kNegInf;
          continue;
        }
        Mat V = Jis * fam_->empirical_fisher_letter(theta, x) * Jis - Mat::Identity(K, K);
        lp[static_cast<Eigen::Index>(x)] = b + xi.cwiseProduct(V).sum();
        terms.push_back(lp[static_cast<Eigen::Index>(x)]);
      }
      double psi = log_sum_exp(terms);
      for (std::size_t x = 0; x < M; ++x) {
        if (lp[static_cast<Eigen::Index>(x)] != kNegInf) lp[static_cast<Eigen::Index>(x)] -= psi;
      }
    }
    log_pmf_cache_[slot] = std::move(lp);
  }
  return *log_pmf_cache_[slot];
}

FinitePmf Codec::interior_payload(std::size_t point, std::size_t tilt) const {
  const Vec& lp = point_log_pmf(point, tilt);
  Vec p = lp.array().exp();
  return FinitePmf(p / p.sum());
}

double Codec::interior_length(const std::vector<std::uint64_t>& counts, Encoding& enc) const {
  const std::size_t M = fam_->alphabet_size();
  if (counts.size() != M) throw domain_error("Codec: count vector size mismatch");

  double best = kPosInf;
  std::size_t best_point = 0, best_tilt = 0;
  for (std::size_t p = 0; p < grid_.size(); ++p) {
    std::vector<std::size_t> tilts;
    if (!bundle_on_) {
      tilts = {0};
    } else if (cfg_.mode == EncodeMode::kReference) {
      tilts.resize(tilt_count());
      for (std::size_t t = 0; t < tilts.size(); ++t) tilts[t] = t;
    } else {
      tilts = {0, tilt_->select(centered_info(*fam_, grid_.points()[p].theta, counts))};
      if (tilts[1] == 0) tilts.pop_back();
    }
    for (std::size_t t : tilts) {
      const Vec& lp = point_log_pmf(p, t);
      double data = 0.0;
      for (std::size_t x = 0; x < M; ++x) {
        if (counts[x] == 0) continue;
        double l = lp[static_cast<Eigen::Index>(x)];
        if (l == kNegInf) {
          data = kPosInf;
          break;
        }
        data -= static_cast<double>(counts[x]) * l;
      }
      if (data == kPosInf) continue;
      double len = data + interior_structure_nats(t);
      if (len < best) {
        best = len;
        best_point = p;
        best_tilt = t;
      }
    }
  }
  if (best == kPosInf) throw numeric_error("Codec: no interior candidate has finite length");

  enc.route = Route::kInterior;
  enc.point_index = best_point;
  enc.tilt_index = best_tilt;
  enc.structure_nats = interior_structure_nats(best_tilt);
  enc.data_nats = best - enc.structure_nats;
  enc.payload = interior_payload(best_point, best_tilt);
  return best;
}

const Codec::FaceCode& Codec::face_code(std::uint64_t descriptor_index) const {
  auto it = face_cache_.find(descriptor_index);
  if (it != face_cache_.end()) return it->second;
  FaceCode fc;
  fc.decomp = fam_->boundary_decomposition_from_index(descriptor_index);
  if (fc.decomp.sub->dim() >= 1) {
    CodeConfig sub_cfg = cfg_;
    sub_cfg.use_bundle = false;  // faces are coded plainly, with no further split
    sub_cfg.combined = false;
    sub_cfg.g.reset();
    fc.codec = std::make_shared<Codec>(fc.decomp.sub, n_, sub_cfg);
  }
  return face_cache_.emplace(descriptor_index, std::move(fc)).first->second;
}

Codec::Encoding Codec::encode(const std::vector<std::uint64_t>& counts) const {
  std::uint64_t total_count = 0;
  for (auto c : counts) total_count += c;
  if (total_count != n_) {
    throw domain_error("Codec::encode: sample length does not match the code context");
  }

  Vec theta_hat = fam_->mle(counts);
  Encoding enc;
  enc.payload = fam_->pmf(theta_hat);  // placeholder, overwritten below

  bool boundary = cfg_.combined && !fam_->space().is_interior(theta_hat);
  if (!boundary) {
    enc.total = interior_length(counts, enc);
    if (cfg_.combined) {
      // Interior route surcharge of the combined code.
      enc.structure_nats += cfg_.alpha * l1();
      enc.total += cfg_.alpha * l1();
    }
  } else {
    auto active = fam_->space().active_constraints(theta_hat);
    auto decomp = fam_->boundary_decomposition(active);
    const FaceCode& face = face_code(decomp.descriptor_index);
    enc.route = Route::kBoundary;
    enc.descriptor_index = decomp.descriptor_index;
    double route_cost = -cfg_.alpha * std::log(-std::expm1(-l1()));
    double descriptor_cost =
        cfg_.alpha * std::log(static_cast<double>(decomp.descriptor_states));
    if (face.codec) {
      Encoding sub = face.codec->encode(counts);
      enc.sub_point_index = sub.point_index;
      enc.data_nats = sub.data_nats;
      enc.structure_nats = route_cost + descriptor_cost + sub.structure_nats;
      enc.payload = sub.payload;
    } else {
      FinitePmf fixed = face.decomp.sub->pmf(Vec());
      enc.data_nats = -fixed.log_prob_counts(counts);
      enc.structure_nats = route_cost + descriptor_cost;
      enc.payload = fixed;
    }
    enc.total = enc.data_nats + enc.structure_nats;
  }

  enc.regret = enc.total + fam_->log_likelihood(theta_hat, counts);
  return enc;
}

double Codec::total_length(const std::vector<std::uint64_t>& counts) const {
  return encode(counts).total;
}

RegretReport Codec::regret_report(double eps) const {
  const int K = fam_->dim();
  const double Kd = static_cast<double>(K);
  const double nd = static_cast<double>(n_);
  const double a = cfg_.a;
  const double alpha = cfg_.alpha;

  RegretReport r;
  r.notes = construction_notes_;
  r.L_n = grid_.log_size();
  auto card = cardinality_bound(cert_, a, cfg_.beta, n_);
  r.cardinality_log_bound = card.log_bound;
  r.r_n = card.r_n;
  if (nd < card.precondition_n) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "grid-size bound proven for n >= %.3g; at n = %llu it is reported as-is",
                  card.precondition_n, static_cast<unsigned long long>(n_));
    r.notes.push_back(buf);
  }

  double root_term = cert_.kappa * std::sqrt(Kd) * a;
  r.C_n = (1.0 + root_term * std::pow(nd, -cfg_.beta)) *
          (1.0 + root_term / (2.0 * std::sqrt(cert_.zeta * nd)));
  r.f_n = r.C_n * Kd * a * a / (8.0 * alpha) - Kd * std::log(a) + card.r_n;
  double log_int = std::log(cert_.sqrtJ_integral);
  r.interior_regret_bound = alpha * (0.5 * Kd * std::log(nd) + log_int + r.f_n);
  r.combined_regret_bound = r.interior_regret_bound + alpha * l1();
  r.boundary_regret_bound =
      alpha * (0.5 * (Kd - (cfg_.d - 2.0 * cfg_.iota)) * std::log(nd) + std::log(2.0));
  if (nd < std::pow(2.0, 1.0 / cfg_.iota)) {
    r.notes.push_back("boundary-route bound proven for n >= 2^(1/iota); reported as-is");
  }

  r.bundle = bundle_on_;
  if (bundle_on_) {
    r.delta_n = delta_n_;
    r.u_n = u_n_;
    r.l2 = l2_;
    r.l2_bar = l2_bar_;
    r.C_Gn = r.C_n * (1.0 + cert_.kappa_prime * std::sqrt(Kd) * a /
                                (2.0 * std::sqrt(cert_.zeta * nd)));
    r.f_ne = 0.5 * Kd * std::log(2.0 * std::numbers::pi) - Kd * std::log(a) +
             r.C_Gn * Kd * a * a * (1.0 + Kd * r.delta_n) / (8.0 * alpha) + card.r_n + l2_;
    r.nonexp_regret_bound =
        alpha * (0.5 * Kd * std::log(nd / (2.0 * std::numbers::pi)) + log_int + r.f_ne);

    double c_eps = std::exp(cert_.c_eps_rate * eps);
    double denom = cert_.gamma * g_ / (2.0 * cert_.B) - cfg_.nu * alpha;
    double n0_growth = denom > 0.0
                           ? std::exp((c_eps * Kd * a * a +
                                       alpha * std::log(2.0 * Kd * Kd)) /
                                      denom)
                           : kPosInf;
    double kp = cert_.kappa_prime;
    r.n0 = std::max({Kd * a * a / (4.0 * cert_.zeta) *
                         std::max(1.0 / (eps * eps), 1.0 / (cert_.Delta * cert_.Delta)),
                     n0_growth, 1.0 / (std::pow(kp, 4) * Kd * Kd * std::pow(a, 4)),
                     4.0 * cert_.zeta / (kp * kp * Kd * a * a)});
    r.asymptotic_regime = nd >= r.n0;
    if (!r.asymptotic_regime) {
      r.notes.push_back("asymptotic regime not reached at this sample size");
    }
  }
  return r;
}

}  // namespace mdl
