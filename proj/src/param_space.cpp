#include "mdl/param_space.hpp"

#include <cmath>

namespace mdl {

Vec project_onto_halfspace(const Vec& y, const Halfspace& h) {
  double slack = h.a.dot(y) - h.b;
  if (slack <= 0.0) return y;
  return y - (slack / h.a.squaredNorm()) * h.a;
}

Vec project_onto_halfspace_intersection(const Vec& y0, const std::vector<Halfspace>& hs,
                                        int max_iter, double tol) {
  if (hs.empty()) return y0;
  Vec y = y0;
  std::vector<Vec> corrections(hs.size(), Vec::Zero(y0.size()));
  for (int it = 0; it < max_iter; ++it) {
    double moved = 0.0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      Vec z = y + corrections[i];
      Vec ynew = project_onto_halfspace(z, hs[i]);
      corrections[i] = z - ynew;
      moved += (ynew - y).norm();
      y = ynew;
    }
    if (moved <= tol) return y;
  }
  return y;  // best effort; polyhedral Dykstra converges linearly
}

ParamSpace ParamSpace::box(Vec lo, Vec hi) {
  if (lo.size() != hi.size() || lo.size() == 0) {
    throw config_error("ParamSpace::box: lo/hi size mismatch or empty");
  }
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) throw config_error("ParamSpace::box: requires lo < hi per axis");
  }
  ParamSpace s;
  s.kind_ = SpaceKind::kBox;
  s.K_ = static_cast<int>(lo.size());
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  return s;
}

ParamSpace ParamSpace::tau_simplex(int K, double tau) {
  if (K < 1) throw config_error("ParamSpace::tau_simplex: K must be >= 1");
  if (!(tau > 0.0 && tau <= 1.0 / (K + 1))) {
    throw config_error("ParamSpace::tau_simplex: requires 0 < tau <= 1/(K+1)");
  }
  ParamSpace s;
  s.kind_ = SpaceKind::kTauSimplex;
  s.K_ = K;
  s.tau_ = tau;
  return s;
}

std::vector<Halfspace> ParamSpace::halfspaces() const {
  std::vector<Halfspace> hs;
  if (kind_ == SpaceKind::kBox) {
    hs.reserve(2 * K_);
    for (int i = 0; i < K_; ++i) {
      Vec a = Vec::Zero(K_);
      a[i] = 1.0;
      hs.push_back({a, hi_[i]});
    }
    for (int i = 0; i < K_; ++i) {
      Vec a = Vec::Zero(K_);
      a[i] = -1.0;
      hs.push_back({a, -lo_[i]});
    }
  } else {
    hs.reserve(K_ + 1);
    for (int i = 0; i < K_; ++i) {
      Vec a = Vec::Zero(K_);
      a[i] = -1.0;
      hs.push_back({a, -tau_});
    }
    hs.push_back({Vec::Ones(K_), 1.0 - tau_});
  }
  return hs;
}

bool ParamSpace::contains(const Vec& theta, double tol) const {
  if (theta.size() != K_) throw domain_error("ParamSpace::contains: dimension mismatch");
  for (const auto& h : halfspaces()) {
    if (h.a.dot(theta) > h.b + tol) return false;
  }
  return true;
}

std::vector<int> ParamSpace::active_constraints(const Vec& theta, double tol) const {
  if (theta.size() != K_) throw domain_error("ParamSpace::active_constraints: dimension mismatch");
  std::vector<int> idx;
  auto hs = halfspaces();
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (hs[i].a.dot(theta) >= hs[i].b - tol) idx.push_back(static_cast<int>(i));
  }
  return idx;
}

std::pair<Vec, Vec> ParamSpace::bounding_box() const {
  if (kind_ == SpaceKind::kBox) return {lo_, hi_};
  // Each free coordinate ranges over [tau, 1 - K*tau]: the upper end is
  // attained when every other component sits at its floor.
  Vec lo = Vec::Constant(K_, tau_);
  Vec hi = Vec::Constant(K_, 1.0 - K_ * tau_);
  return {lo, hi};
}

double ParamSpace::width() const {
  auto [lo, hi] = bounding_box();
  return (hi - lo).maxCoeff();
}

Vec ParamSpace::project(const Vec& theta) const {
  if (theta.size() != K_) throw domain_error("ParamSpace::project: dimension mismatch");
  if (kind_ == SpaceKind::kBox) {
    return theta.cwiseMax(lo_).cwiseMin(hi_);
  }
  if (contains(theta)) return theta;
  return project_onto_halfspace_intersection(theta, halfspaces());
}

}  // namespace mdl
