#pragma once
// Two-part codes over a quantized parameter grid, with optional local
// tilting and a combined interior/boundary route.
//
// Interior route: pick a grid point theta (log-cardinality L_n) and, when
// tilting is enabled, a tilt from the finite tilt set (the zero tilt costs
// l2(n) nats, any other costs l2_bar); the data is coded under the chosen
// model.  The two-part length is
//     -log p(x^n | theta, xi) + alpha * (L_n + tilt cost)  [ + alpha*l1(n) ].
// Boundary route (combined code only, taken when the constrained estimate
// lies on the domain boundary): pay -alpha*log(1 - exp(-l1(n))) for the
// route, alpha * log(#faces) for the face descriptor, then code with the
// face's lower-dimensional family, tilting off and no further route split.

#include "mdl/bundle.hpp"
#include "mdl/certify.hpp"
#include "mdl/quantizer.hpp"

#include <map>
#include <optional>

namespace mdl {

enum class EncodeMode {
  kReference,  // exact minimum over all (point, tilt) pairs
  kShortcut,   // per point, only the zero tilt and the sign-matched selection
};

struct CodeConfig {
  double alpha = 2.0;  // description-length weight, >= 1
  double a = 2.0;      // grid cell coefficient
  double beta = 0.25;  // grid shrink exponent, in (0, 1/2)
  double nu = 0.05;    // tilt switch cost exponent: l2(n) = n^-nu
  double iota = 0.25;  // route cost exponent: l1(n) = n^-iota
  double d = 1.0;      // boundary-bound exponent margin; requires d > 2*iota
  std::optional<double> g;          // deviation threshold coefficient; default from certification
  std::optional<bool> use_bundle;   // default: family is not exponential
  bool combined = true;             // route split on boundary estimates
  EncodeMode mode = EncodeMode::kReference;
  std::uint64_t seed = 0;           // sampling seed for harness-level experiments
};

// Renyi order matched to the description-length weight: lambda = 1 - 1/alpha.
double renyi_order_for_alpha(double alpha);

enum class Route { kInterior, kBoundary };

// Itemized regret guarantees for a code context; `notes` carries advisory
// validation messages (preconditions on n, unreachable asymptotic regime).
struct RegretReport {
  double L_n = 0.0;
  double cardinality_log_bound = 0.0;
  double r_n = 0.0;
  double C_n = 0.0;
  double f_n = 0.0;
  double interior_regret_bound = 0.0;  // plain interior code
  double combined_regret_bound = 0.0;  // interior route of the combined code
  double boundary_regret_bound = 0.0;  // boundary route (valid for n >= 2^(1/iota))
  bool bundle = false;
  double delta_n = 0.0, u_n = 0.0, l2 = 0.0, l2_bar = 0.0;
  double C_Gn = 0.0;
  double f_ne = 0.0;
  double nonexp_regret_bound = 0.0;
  double n0 = 0.0;  // sample size where the asymptotic analysis fully applies
  bool asymptotic_regime = false;
  std::vector<std::string> notes;
};

class Codec {
 public:
  // Builds the code context for samples of length n.  When `cert` is absent
  // the constants are certified here (including the tilt sweep if tilting is
  // enabled and no explicit g is given).
  Codec(std::shared_ptr<const Family> fam, std::uint64_t n, CodeConfig cfg = {},
        std::optional<CertifiedConstants> cert = std::nullopt);

  struct Encoding {
    Route route = Route::kInterior;
    std::size_t point_index = 0;
    std::size_t tilt_index = 0;           // 0 = no tilt
    std::uint64_t descriptor_index = 0;   // boundary face label
    std::size_t sub_point_index = 0;      // grid index within the face code
    double data_nats = 0.0;               // -log p(x^n | chosen model)
    double structure_nats = 0.0;          // alpha-weighted structural cost
    double total = 0.0;                   // data_nats + structure_nats
    double regret = 0.0;                  // total - (-log max likelihood)
    FinitePmf payload;                    // single-letter pmf driving the entropy coder
  };

  Encoding encode(const std::vector<std::uint64_t>& counts) const;
  double total_length(const std::vector<std::uint64_t>& counts) const;

  const Family& family() const { return *fam_; }
  std::shared_ptr<const Family> family_ptr() const { return fam_; }
  std::uint64_t sample_size() const { return n_; }
  const CodeConfig& config() const { return cfg_; }
  const CertifiedConstants& constants() const { return cert_; }
  const QuantizerGrid& grid() const { return grid_; }
  bool bundle_on() const { return bundle_on_; }
  bool combined() const { return cfg_.combined; }
  double g() const { return g_; }
  double l1() const;                  // route cost n^-iota
  double l2() const { return l2_; }   // zero-tilt cost
  double l2_bar() const { return l2_bar_; }
  double tilt_u() const { return u_n_; }
  double delta_n() const { return delta_n_; }
  const TiltSet* tilt_set() const { return tilt_ ? &*tilt_ : nullptr; }

  // Single-letter pmf of an interior model (point index + tilt index).
  FinitePmf interior_payload(std::size_t point, std::size_t tilt) const;

  // Number of tilt choices an interior encoding ranges over (1 when off).
  std::size_t tilt_count() const { return bundle_on_ ? tilt_->size() : 1; }

  // alpha * (L_n + tilt cost) for an interior candidate, without route cost.
  double interior_structure_nats(std::size_t tilt) const;

  // Face sub-code access (lazily built, cached).  The sub-codec is absent
  // (nullptr) for zero-dimensional faces.
  struct FaceCode {
    BoundaryDecomposition decomp;
    std::shared_ptr<const Codec> codec;  // null when the face is a fixed pmf
  };
  const FaceCode& face_code(std::uint64_t descriptor_index) const;

  RegretReport regret_report(double eps = 0.25) const;

 private:
  double interior_length(const std::vector<std::uint64_t>& counts, Encoding& enc) const;
  const Vec& point_log_pmf(std::size_t point, std::size_t tilt) const;

  std::shared_ptr<const Family> fam_;
  std::uint64_t n_ = 0;
  CodeConfig cfg_;
  CertifiedConstants cert_;
  QuantizerGrid grid_;
  bool bundle_on_ = false;
  double g_ = 0.0;
  double delta_n_ = 0.0;
  double u_n_ = 0.0;
  double l2_ = 0.0;
  double l2_bar_ = 0.0;
  std::optional<TiltSet> tilt_;
  std::vector<std::string> construction_notes_;

  // log pmf tables: index = point * (#tilts) + tilt.
  mutable std::vector<std::optional<Vec>> log_pmf_cache_;
  mutable std::map<std::uint64_t, FaceCode> face_cache_;
};

}  // namespace mdl
