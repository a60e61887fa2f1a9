#pragma once
// Parameter domains: axis-aligned boxes and tau-floored probability simplices,
// both represented as intersections of halfspaces.

#include "mdl/common.hpp"

namespace mdl {

// Closed halfspace { theta : a^T theta <= b }.
struct Halfspace {
  Vec a;
  double b;
};

// Euclidean projection of y onto a single halfspace.
Vec project_onto_halfspace(const Vec& y, const Halfspace& h);

// Dykstra's alternating-projection method for the Euclidean projection of y0
// onto the intersection of halfspaces.  Converges for any nonempty
// intersection of convex sets; tol bounds the final sweep's movement.
Vec project_onto_halfspace_intersection(const Vec& y0, const std::vector<Halfspace>& hs,
                                        int max_iter = 20000, double tol = 1e-13);

enum class SpaceKind { kBox, kTauSimplex };

// A convex parameter domain of dimension K.
//
//  - Box: [lo_1, hi_1] x ... x [lo_K, hi_K].
//  - TauSimplex: free coordinates theta_1..theta_K of a (K+1)-component
//    probability vector whose implicit first coordinate is 1 - sum(theta);
//    every component, implicit one included, must be >= tau.  Requires
//    0 < tau <= 1/(K+1) so the domain has nonempty interior.
class ParamSpace {
 public:
  static ParamSpace box(Vec lo, Vec hi);
  static ParamSpace tau_simplex(int K, double tau);

  SpaceKind kind() const { return kind_; }
  int dim() const { return K_; }
  double tau() const { return tau_; }
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }

  // Membership with tolerance: every halfspace satisfied up to slack tol.
  bool contains(const Vec& theta, double tol = 0.0) const;

  // Indices (into halfspaces()) of constraints active at theta within tol.
  std::vector<int> active_constraints(const Vec& theta, double tol = 1e-9) const;

  bool is_interior(const Vec& theta, double tol = 1e-9) const {
    return contains(theta, tol) && active_constraints(theta, tol).empty();
  }

  // The defining halfspaces in a fixed documented order.
  //  - Box: i in [0,K) -> theta_i <= hi_i;  i in [K,2K) -> -theta_{i-K} <= -lo_{i-K}.
  //  - TauSimplex: i in [0,K) -> -theta_{i+1-1} <= -tau (component i+1 floor);
  //    i == K -> sum(theta) <= 1 - tau (implicit component floor).
  std::vector<Halfspace> halfspaces() const;

  // Smallest axis-aligned box containing the domain.
  std::pair<Vec, Vec> bounding_box() const;

  // Largest coordinate extent of the bounding box.
  double width() const;

  // Euclidean projection onto the domain.
  Vec project(const Vec& theta) const;

 private:
  ParamSpace() = default;
  SpaceKind kind_ = SpaceKind::kBox;
  int K_ = 0;
  Vec lo_, hi_;   // box only
  double tau_ = 0.0;  // simplex only
};

}  // namespace mdl
