#pragma once
// Parametric families of pmfs over a finite alphabet.
//
// A family exposes the ingredients the coding layers need: the pmf map, the
// Fisher information J(theta), the per-observation empirical information
// (whose average over a sample is the observed information matrix), a
// constrained maximum-likelihood routine, and -- for domains with corners --
// a decomposition of each boundary face into a lower-dimensional family.

#include "mdl/param_space.hpp"
#include "mdl/pmf.hpp"

#include <memory>
#include <optional>

namespace mdl {

// Closed-form curvature/continuity constants for a family, when known.
// These feed the certification layer; anything absent there is estimated by
// grid scans instead.
struct FamilyConstants {
  double lambda_max = 0.0;     // upper bound on the largest eigenvalue of J over Theta
  double det_max = 0.0;        // upper bound on det J over Theta
  double kappa = 0.0;          // local relative-continuity rate of J
  double kappa_prime = 0.0;    // same rate under exponentially tilted laws
  double ball_radius = 0.0;    // radius within which the continuity bounds hold
  double c_eps_rate = 0.0;     // ratio bound exp(c_eps_rate * eps) for |theta'-theta| <= eps
  double vnorm_coeff = 0.0;    // max-norm of the centered observed information is
                               // <= vnorm_coeff / (min eigenvalue of J) + 1
};

class Family;

// A boundary face of the domain, re-expressed as a family over the free
// coordinates.  `embed` maps a parameter of `sub` to a parameter of the
// parent family lying on that face.  `descriptor_index` identifies the face
// among `descriptor_states` possible face labels (used verbatim by the
// bitstream layer).
struct BoundaryDecomposition {
  std::shared_ptr<const Family> sub;
  std::function<Vec(const Vec&)> embed;
  std::uint64_t descriptor_index = 0;
  std::uint64_t descriptor_states = 1;
};

class Family {
 public:
  virtual ~Family() = default;

  virtual std::string name() const = 0;
  virtual std::size_t alphabet_size() const = 0;

  // Number of free parameters K.  A zero-dimensional family is a single
  // fixed pmf (space() is then invalid).
  virtual int dim() const = 0;
  virtual const ParamSpace& space() const = 0;

  // True when the per-observation information is constant in the data
  // (canonical exponential families), making the centered observed
  // information identically zero.
  virtual bool is_exponential() const = 0;

  virtual FinitePmf pmf(const Vec& theta) const = 0;

  // Fisher information J(theta), K x K, positive definite on the interior.
  virtual Mat fisher(const Vec& theta) const = 0;

  // Per-observation information contribution of symbol x at theta; the
  // average over a sample is the observed information matrix.
  virtual Mat empirical_fisher_letter(const Vec& theta, std::size_t x) const = 0;

  // Observed information for a sample given by symbol counts.
  Mat empirical_fisher(const Vec& theta, const std::vector<std::uint64_t>& counts) const;

  // Constrained maximum-likelihood estimate over the closure of the domain.
  virtual Vec mle(const std::vector<std::uint64_t>& counts) const = 0;

  // Log-likelihood of a sample given by symbol counts.
  double log_likelihood(const Vec& theta, const std::vector<std::uint64_t>& counts) const;

  // Boundary machinery.  `active` holds indices into space().halfspaces().
  virtual bool supports_boundary_decomposition() const { return false; }
  virtual BoundaryDecomposition boundary_decomposition(const std::vector<int>& active) const;
  virtual std::uint64_t descriptor_states() const { return 1; }
  virtual BoundaryDecomposition boundary_decomposition_from_index(std::uint64_t index) const;

  // Closed-form constants, when the family provides them.
  virtual std::optional<FamilyConstants> closed_form_constants() const { return std::nullopt; }
};

// ---- mixture family --------------------------------------------------------

// p_theta = theta_0 q_0 + ... + theta_K q_K with theta_0 = 1 - sum(theta_1..K)
// and every component weight floored at tau.  Not an exponential family for
// K >= 1 with distinct components.
class MixtureFamily : public Family {
 public:
  // components.size() == K+1; all over the same alphabet.
  MixtureFamily(std::vector<FinitePmf> components, double tau);

  std::string name() const override;
  std::size_t alphabet_size() const override { return M_; }
  int dim() const override { return K_; }
  const ParamSpace& space() const override;
  bool is_exponential() const override { return false; }

  FinitePmf pmf(const Vec& theta) const override;
  Mat fisher(const Vec& theta) const override;
  Mat empirical_fisher_letter(const Vec& theta, std::size_t x) const override;
  Vec mle(const std::vector<std::uint64_t>& counts) const override;

  bool supports_boundary_decomposition() const override { return K_ >= 1; }
  BoundaryDecomposition boundary_decomposition(const std::vector<int>& active) const override;
  std::uint64_t descriptor_states() const override;
  BoundaryDecomposition boundary_decomposition_from_index(std::uint64_t index) const override;

  std::optional<FamilyConstants> closed_form_constants() const override;

  double tau() const { return tau_; }
  const std::vector<FinitePmf>& components() const { return q_; }

  // Full weight vector (theta_0, ..., theta_K) from the free coordinates.
  Vec full_weights(const Vec& theta) const;

 private:
  // Pinned components (by component index 0..K) at weight tau; the rest are
  // renormalized into a smaller mixture over merged densities.
  BoundaryDecomposition decompose(const std::vector<int>& pinned_components) const;

  std::vector<FinitePmf> q_;
  std::size_t M_;
  int K_;
  double tau_;
  std::optional<ParamSpace> space_;  // absent when K == 0
};

// ---- canonical Bernoulli ---------------------------------------------------

// Bernoulli in its natural parameter eta restricted to a closed interval:
// p(1) = sigmoid(eta).  Canonical exponential family, so the per-observation
// information is data-free and equals J.
class CanonicalBernoulliFamily : public Family {
 public:
  CanonicalBernoulliFamily(double eta_lo, double eta_hi);

  std::string name() const override;
  std::size_t alphabet_size() const override { return 2; }
  int dim() const override { return 1; }
  const ParamSpace& space() const override { return space_; }
  bool is_exponential() const override { return true; }

  FinitePmf pmf(const Vec& theta) const override;
  Mat fisher(const Vec& theta) const override;
  Mat empirical_fisher_letter(const Vec& theta, std::size_t x) const override;
  Vec mle(const std::vector<std::uint64_t>& counts) const override;

  bool supports_boundary_decomposition() const override { return true; }
  BoundaryDecomposition boundary_decomposition(const std::vector<int>& active) const override;
  std::uint64_t descriptor_states() const override { return 3; }
  BoundaryDecomposition boundary_decomposition_from_index(std::uint64_t index) const override;

  std::optional<FamilyConstants> closed_form_constants() const override;

 private:
  ParamSpace space_;
};

// ---- Bernoulli in mean parametrization -------------------------------------

// Bernoulli with success probability theta on the full interval [0, 1].
// Used by the oracle layer (its maximized likelihood has a closed form);
// J blows up at the interval ends, so no quantization grid is built on it.
class BernoulliMeanFamily : public Family {
 public:
  BernoulliMeanFamily();

  std::string name() const override { return "bernoulli_mean"; }
  std::size_t alphabet_size() const override { return 2; }
  int dim() const override { return 1; }
  const ParamSpace& space() const override { return space_; }
  bool is_exponential() const override { return false; }

  FinitePmf pmf(const Vec& theta) const override;
  Mat fisher(const Vec& theta) const override;
  Mat empirical_fisher_letter(const Vec& theta, std::size_t x) const override;
  Vec mle(const std::vector<std::uint64_t>& counts) const override;

 private:
  ParamSpace space_;
};

// ---- fixed pmf (zero-dimensional family) -----------------------------------

// A single distribution with no parameters; the terminal case of boundary
// decomposition.
class FixedFamily : public Family {
 public:
  explicit FixedFamily(FinitePmf p) : p_(std::move(p)) {}

  std::string name() const override { return "fixed"; }
  std::size_t alphabet_size() const override { return p_.alphabet_size(); }
  int dim() const override { return 0; }
  const ParamSpace& space() const override {
    throw unsupported_error("FixedFamily has no parameter space");
  }
  bool is_exponential() const override { return true; }

  FinitePmf pmf(const Vec& theta) const override;
  Mat fisher(const Vec&) const override { return Mat::Zero(0, 0); }
  Mat empirical_fisher_letter(const Vec&, std::size_t) const override { return Mat::Zero(0, 0); }
  Vec mle(const std::vector<std::uint64_t>&) const override { return Vec(); }

 private:
  FinitePmf p_;
};

}  // namespace mdl
