#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mdl/codec.hpp"
#include "support/test_util.hpp"

#include <cmath>

using namespace mdl;
using namespace mdl::testing;

TEST_CASE("Order matching between description weight and divergence order") {
  CHECK(renyi_order_for_alpha(2.0) == doctest::Approx(0.5));
  CHECK(renyi_order_for_alpha(4.0) == doctest::Approx(0.75));
  CHECK_THROWS_AS(renyi_order_for_alpha(1.0), config_error);
}

TEST_CASE("Configuration validation") {
  auto fam = mix_binary();
  CodeConfig bad;

  bad = CodeConfig{};
  bad.alpha = 0.5;
  CHECK_THROWS_AS(Codec(fam, 8, bad), config_error);

  bad = CodeConfig{};
  bad.beta = 0.6;
  CHECK_THROWS_AS(Codec(fam, 8, bad), config_error);

  bad = CodeConfig{};
  bad.iota = 0.3;
  bad.d = 0.5;  // violates d > 2*iota
  CHECK_THROWS_AS(Codec(fam, 8, bad), config_error);

  CHECK_THROWS_AS(Codec(fam, 0, CodeConfig{}), config_error);
  CHECK_THROWS_AS(Codec(nullptr, 8, CodeConfig{}), config_error);
  auto fixed = std::make_shared<FixedFamily>(FinitePmf(v2(0.5, 0.5)));
  CHECK_THROWS_AS(Codec(fixed, 8, CodeConfig{}), config_error);
}

TEST_CASE("Code-context quantities for a tilted mixture code") {
  auto fam = mix_binary();
  Codec codec(fam, 8, CodeConfig{});

  CHECK(codec.sample_size() == 8);
  CHECK(codec.bundle_on());
  CHECK(codec.combined());
  CHECK(codec.tilt_count() == 3);
  REQUIRE(codec.tilt_set() != nullptr);
  CHECK(codec.tilt_set()->size() == 3);

  CHECK(codec.l1() == doctest::Approx(std::pow(8.0, -0.25)).epsilon(1e-13));
  CHECK(codec.l2() == doctest::Approx(std::pow(8.0, -0.05)).epsilon(1e-13));
  // Kraft equality across the switch costs.
  CHECK(std::exp(-codec.l2()) + 2.0 * std::exp(-codec.l2_bar()) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const CertifiedConstants& c = codec.constants();
  CHECK(codec.g() ==
        doctest::Approx(2.2 * 0.05 * 2.0 * c.B / c.gamma).epsilon(1e-12));
  CHECK(codec.delta_n() ==
        doctest::Approx(std::sqrt(codec.g() * std::log(8.0) / 8.0)).epsilon(1e-12));
  CHECK(codec.tilt_u() ==
        doctest::Approx(c.gamma * codec.delta_n() / c.B).epsilon(1e-12));
  CHECK(codec.tilt_set()->magnitude() == doctest::Approx(codec.tilt_u()));

  CHECK(codec.grid().sample_size() == 8);
  CHECK(codec.grid().size() >= 1);
}

TEST_CASE("Tilting shuts off for exponential families and at n = 1") {
  Codec exp_codec(bernoulli_natural(), 8, CodeConfig{});
  CHECK_FALSE(exp_codec.bundle_on());
  CHECK(exp_codec.tilt_count() == 1);
  CHECK(exp_codec.tilt_set() == nullptr);

  Codec unit(mix_binary(), 1, CodeConfig{});
  CHECK_FALSE(unit.bundle_on());
  CHECK(unit.tilt_count() == 1);

  // Tilting can be forced on for an exponential family; every tilt is then
  // idle (the centered information vanishes) but the machinery must agree.
  CodeConfig forced;
  forced.use_bundle = true;
  Codec on(bernoulli_natural(), 8, forced);
  CHECK(on.bundle_on());
  auto enc = on.encode({4, 4});
  CHECK(enc.tilt_index == 0);  // nothing to gain from a tilt
}

TEST_CASE("Interior encoding achieves the exact two-part minimum") {
  auto fam = mix_ternary();
  Codec codec(fam, 8, CodeConfig{});

  std::vector<std::vector<std::uint64_t>> samples{{3, 3, 2}, {2, 4, 2}, {4, 2, 2}, {1, 4, 3}};
  for (const auto& counts : samples) {
    Vec mle = fam->mle(counts);
    if (!fam->space().is_interior(mle)) continue;

    auto enc = codec.encode(counts);
    CHECK(enc.route == Route::kInterior);

    // Independent brute force over every (grid point, tilt) candidate.
    double best = kPosInf;
    for (std::size_t p = 0; p < codec.grid().size(); ++p) {
      for (std::size_t t = 0; t < codec.tilt_count(); ++t) {
        FinitePmf payload = codec.interior_payload(p, t);
        double cand = -payload.log_prob_counts(counts) + codec.interior_structure_nats(t) +
                      codec.config().alpha * codec.l1();
        best = std::min(best, cand);
      }
    }
    CHECK(enc.total == doctest::Approx(best).epsilon(1e-12));

    // Internal consistency of the reported pieces.
    CHECK(enc.total == doctest::Approx(enc.data_nats + enc.structure_nats).epsilon(1e-12));
    FinitePmf payload = codec.interior_payload(enc.point_index, enc.tilt_index);
    CHECK(enc.data_nats ==
          doctest::Approx(-payload.log_prob_counts(counts)).epsilon(1e-12));
    CHECK(enc.regret ==
          doctest::Approx(enc.total + fam->log_likelihood(mle, counts)).epsilon(1e-11));
    CHECK(codec.total_length(counts) == doctest::Approx(enc.total));
  }
}

TEST_CASE("Tilted payloads match the tilt formula") {
  auto fam = mix_ternary();
  Codec codec(fam, 8, CodeConfig{});
  REQUIRE(codec.grid().size() >= 1);
  const Vec& theta = codec.grid().points()[0].theta;
  for (std::size_t t = 0; t < codec.tilt_count(); ++t) {
    FinitePmf direct = tilted_pmf(*fam, theta, codec.tilt_set()->tilt(t));
    FinitePmf cached = codec.interior_payload(0, t);
    for (std::size_t x = 0; x < 3; ++x) {
      CHECK(cached.prob(x) == doctest::Approx(direct.prob(x)).epsilon(1e-13));
    }
  }
}

TEST_CASE("Boundary route: frozen costs for an interval family") {
  auto fam = bernoulli_natural();
  CodeConfig cfg;  // alpha = 2, combined
  Codec codec(fam, 2, cfg);

  std::vector<std::uint64_t> zeros{2, 0};  // estimate clips to eta = -1.5
  auto enc = codec.encode(zeros);
  CHECK(enc.route == Route::kBoundary);
  CHECK(enc.descriptor_index == 1);

  const double l1 = std::pow(2.0, -0.25);
  const double route_cost = -2.0 * std::log(-std::expm1(-l1));
  const double descriptor_cost = 2.0 * std::log(3.0);
  const double p0 = 1.0 / (1.0 + std::exp(-1.5));  // p(0) at eta = -1.5
  CHECK(enc.structure_nats == doctest::Approx(route_cost + descriptor_cost).epsilon(1e-12));
  CHECK(enc.data_nats == doctest::Approx(-2.0 * std::log(p0)).epsilon(1e-12));
  CHECK(enc.total ==
        doctest::Approx(route_cost + descriptor_cost - 2.0 * std::log(p0)).epsilon(1e-12));
  // The maximized likelihood sits at the same clipped estimate, so the
  // regret here is exactly the structural cost.
  CHECK(enc.regret == doctest::Approx(enc.structure_nats).epsilon(1e-11));

  // Interval ends decompose to fixed densities: no sub-codec.
  CHECK(codec.face_code(1).codec == nullptr);
  CHECK(codec.face_code(2).codec == nullptr);

  // Without the route split the same sample is coded through the grid.
  CodeConfig plain = cfg;
  plain.combined = false;
  Codec plain_codec(fam, 2, plain);
  auto plain_enc = plain_codec.encode(zeros);
  CHECK(plain_enc.route == Route::kInterior);
  CHECK(plain_enc.structure_nats ==
        doctest::Approx(2.0 * plain_codec.grid().log_size()).epsilon(1e-12));
}

TEST_CASE("Boundary route: face sub-code for a two-parameter mixture") {
  auto fam = mix_ternary_k2();
  Codec codec(fam, 6, CodeConfig{});

  std::vector<std::uint64_t> skew{0, 0, 6};
  Vec mle = fam->mle(skew);
  REQUIRE(!fam->space().is_interior(mle));

  auto enc = codec.encode(skew);
  CHECK(enc.route == Route::kBoundary);

  const auto& face = codec.face_code(enc.descriptor_index);
  REQUIRE(face.codec != nullptr);
  CHECK(face.codec->sample_size() == 6);
  CHECK_FALSE(face.codec->combined());
  CHECK_FALSE(face.codec->bundle_on());
  CHECK(face.codec->config().alpha == doctest::Approx(2.0));

  // The reported pieces compose: route cost + descriptor + sub-structure.
  const double l1 = std::pow(6.0, -0.25);
  const double route_cost = -2.0 * std::log(-std::expm1(-l1));
  const double descriptor_cost = 2.0 * std::log(8.0);
  auto sub_enc = face.codec->encode(skew);
  CHECK(enc.sub_point_index == sub_enc.point_index);
  CHECK(enc.data_nats == doctest::Approx(sub_enc.data_nats).epsilon(1e-12));
  CHECK(enc.structure_nats ==
        doctest::Approx(route_cost + descriptor_cost + sub_enc.structure_nats).epsilon(1e-12));
}

TEST_CASE("Reference and shortcut modes agree up to the shortcut's restriction") {
  auto fam = mix_ternary();
  CodeConfig ref_cfg;
  Codec ref(fam, 10, ref_cfg);
  CodeConfig fast_cfg;
  fast_cfg.mode = EncodeMode::kShortcut;
  Codec fast(fam, 10, fast_cfg);

  for (const auto& counts : std::vector<std::vector<std::uint64_t>>{
           {4, 3, 3}, {2, 5, 3}, {5, 2, 3}, {3, 3, 4}}) {
    const double r = ref.total_length(counts);
    const double f = fast.total_length(counts);
    // The shortcut searches a subset of tilts, so it can only lose ...
    CHECK(f >= r - 1e-12);
    // ... and the sign-matched tilt it keeps is within the log-partition
    // curvature slack of the best tilt at the same grid point.
    const double slack = 10.0 * ref.constants().B * ref.tilt_u() * ref.tilt_u();
    CHECK(f <= r + slack + 1e-9);
  }
}

TEST_CASE("Regret report wiring") {
  auto fam = mix_binary();
  Codec codec(fam, 100, CodeConfig{});
  RegretReport r = codec.regret_report();

  CHECK(r.L_n == doctest::Approx(codec.grid().log_size()));
  CHECK(r.cardinality_log_bound >= r.L_n);  // audited directly at this scale
  CHECK(r.bundle);
  CHECK(r.delta_n == doctest::Approx(codec.delta_n()));
  CHECK(r.u_n == doctest::Approx(codec.tilt_u()));
  CHECK(r.l2 == doctest::Approx(codec.l2()));
  CHECK(r.l2_bar == doctest::Approx(codec.l2_bar()));
  CHECK(r.interior_regret_bound > 0.0);
  CHECK(r.combined_regret_bound > r.interior_regret_bound);
  CHECK(r.nonexp_regret_bound > 0.0);
  CHECK(std::isfinite(r.nonexp_regret_bound));
  // The asymptotic sample threshold for this family is astronomically far.
  CHECK_FALSE(r.asymptotic_regime);
  CHECK(!r.notes.empty());

  Codec plain(bernoulli_natural(), 100, CodeConfig{});
  RegretReport rp = plain.regret_report();
  CHECK_FALSE(rp.bundle);
  CHECK(rp.interior_regret_bound > 0.0);
}
