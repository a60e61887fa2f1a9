#include "mdl/quantizer.hpp"

#include <algorithm>
#include <cmath>

namespace mdl {

namespace {

using V2 = Eigen::Vector2d;

// Sutherland-Hodgman clip of a convex polygon against a^T x <= b.
std::vector<V2> clip_polygon(const std::vector<V2>& poly, const V2& a, double b) {
  std::vector<V2> out;
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const V2& p = poly[i];
    const V2& q = poly[(i + 1) % m];
    double sp = b - a.dot(p);
    double sq = b - a.dot(q);
    if (sp >= 0.0) out.push_back(p);
    if ((sp > 0.0 && sq < 0.0) || (sp < 0.0 && sq > 0.0)) {
      double t = sp / (sp - sq);
      out.push_back(p + t * (q - p));
    }
  }
  return out;
}

double polygon_area(const std::vector<V2>& poly) {
  if (poly.size() < 3) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const V2& p = poly[i];
    const V2& q = poly[(i + 1) % poly.size()];
    s += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(s);
}

// Positive-volume test for the intersection of a list of halfspaces known to
// bound a region inside `box_lo..box_hi`, used when no exact method applies:
// tighten every halfspace by delta and test feasibility by projection.
bool shrunk_intersection_nonempty(const Vec& start, std::vector<Halfspace> hs, double delta) {
  for (auto& h : hs) h.b -= delta * h.a.norm();
  Vec y = project_onto_halfspace_intersection(start, hs, 4000, 1e-12);
  for (const auto& h : hs) {
    if (h.a.dot(y) > h.b + 0.1 * delta) return false;
  }
  return true;
}

std::vector<Halfspace> cube_halfspaces(const Vec& lo, const Vec& hi) {
  const int K = static_cast<int>(lo.size());
  std::vector<Halfspace> hs;
  hs.reserve(2 * K);
  for (int i = 0; i < K; ++i) {
    Vec a = Vec::Zero(K);
    a[i] = 1.0;
    hs.push_back({a, hi[i]});
    a[i] = -1.0;
    hs.push_back({a, -lo[i]});
  }
  return hs;
}

// The domain restricted to one axis when K == 1: [dlo, dhi].
void domain_interval(const ParamSpace& space, double& dlo, double& dhi) {
  auto [lo, hi] = space.bounding_box();
  dlo = lo[0];
  dhi = hi[0];
}

}  // namespace

double QuantizerGrid::log_size() const {
  if (points_.empty()) throw numeric_error("QuantizerGrid: empty grid");
  return std::log(static_cast<double>(points_.size()));
}

std::size_t QuantizerGrid::cell_of(const Vec& theta) const {
  std::vector<std::int64_t> idx(theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    idx[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(std::floor(theta[j] / cube_side_));
  }
  auto it = cell_by_cube_.find(idx);
  if (it != cell_by_cube_.end()) return it->second;
  // theta sits in a cube that was dropped (zero-volume sliver at the domain
  // boundary); fall back to the cell whose cube is closest.
  double best = kPosInf;
  std::size_t best_cell = 0;
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    Vec clamped = theta.cwiseMax(cells_[c].cube_lo).cwiseMin(cells_[c].cube_hi);
    double d = (clamped - theta).squaredNorm();
    if (d < best) {
      best = d;
      best_cell = c;
    }
  }
  return best_cell;
}

QuantizerGrid::NearestResult QuantizerGrid::nearest(const Vec& theta) const {
  if (points_.empty()) throw numeric_error("QuantizerGrid: empty grid");
  std::size_t c = cell_of(theta);
  const Mat& J = cells_[c].J_S;
  Mat D = point_matrix_;
  D.rowwise() -= theta.transpose();
  Vec quads = (D * J).cwiseProduct(D).rowwise().sum();
  Eigen::Index idx = 0;
  double q = quads.minCoeff(&idx);
  return {static_cast<std::size_t>(idx), q, c};
}

QuantizerGrid build_grid(const Family& fam, std::uint64_t n, const GridConfig& cfg) {
  const int K = fam.dim();
  if (K < 1) throw config_error("build_grid: family has no free parameters");
  if (n < 1) throw config_error("build_grid: sample size must be >= 1");
  if (!(cfg.a > 0.0) || !(cfg.beta > 0.0 && cfg.beta < 0.5)) {
    throw config_error("build_grid: requires a > 0 and beta in (0, 1/2)");
  }
  const ParamSpace& space = fam.space();
  const double nd = static_cast<double>(n);
  const double A = cfg.a * std::pow(nd, -cfg.beta);

  QuantizerGrid grid;
  grid.n_ = n;
  grid.cfg_ = cfg;
  grid.cube_side_ = A;

  auto [blo, bhi] = space.bounding_box();
  const auto theta_hs = space.halfspaces();
  const bool exact1d = K == 1;
  const bool exact2d = K == 2;

  // Candidate cube index range per axis.
  std::vector<std::int64_t> ilo(K), ihi(K);
  for (int j = 0; j < K; ++j) {
    ilo[j] = static_cast<std::int64_t>(std::floor(blo[j] / A));
    ihi[j] = static_cast<std::int64_t>(std::ceil(bhi[j] / A)) - 1;
    if (ihi[j] < ilo[j]) ihi[j] = ilo[j];
  }

  // Enumerate cubes in lexicographic index order.
  std::vector<std::int64_t> idx(ilo.begin(), ilo.end());
  bool done = false;
  while (!done) {
    Vec cube_lo(K), cube_hi(K);
    for (int j = 0; j < K; ++j) {
      cube_lo[j] = static_cast<double>(idx[j]) * A;
      cube_hi[j] = static_cast<double>(idx[j] + 1) * A;
    }

    // ---- keep test: positive volume of cube intersect domain ----
    bool keep = true;
    double dlo = 0.0, dhi = 0.0;
    std::vector<V2> cell_poly;  // K == 2 only
    if (exact1d) {
      domain_interval(space, dlo, dhi);
      keep = std::min(cube_hi[0], dhi) - std::max(cube_lo[0], dlo) > 1e-13 * A;
    } else if (exact2d) {
      cell_poly = {V2(cube_lo[0], cube_lo[1]), V2(cube_hi[0], cube_lo[1]),
                   V2(cube_hi[0], cube_hi[1]), V2(cube_lo[0], cube_hi[1])};
      for (const auto& h : theta_hs) {
        cell_poly = clip_polygon(cell_poly, V2(h.a[0], h.a[1]), h.b);
        if (cell_poly.size() < 3) break;
      }
      keep = polygon_area(cell_poly) > 1e-13 * A * A;
    } else {
      std::vector<Halfspace> hs = theta_hs;
      auto cube_hs = cube_halfspaces(cube_lo, cube_hi);
      hs.insert(hs.end(), cube_hs.begin(), cube_hs.end());
      Vec center = 0.5 * (cube_lo + cube_hi);
      keep = shrunk_intersection_nonempty(center, hs, 1e-9 * A);
    }

    if (keep) {
      LargeCell cell;
      cell.cube_index = idx;
      cell.cube_lo = cube_lo;
      cell.cube_hi = cube_hi;
      for (std::uint64_t corner = 0; corner < (std::uint64_t{1} << K) && !cell.boundary;
           ++corner) {
        Vec v(K);
        for (int i = 0; i < K; ++i) v[i] = (corner >> i) & 1 ? cube_hi[i] : cube_lo[i];
        cell.boundary = !space.contains(v, -1e-9);
      }

      // ---- anchor: cube center projected onto domain intersect cube ----
      Vec center = 0.5 * (cube_lo + cube_hi);
      if (exact1d) {
        cell.theta_S = Vec::Constant(1, std::clamp(center[0], std::max(cube_lo[0], dlo),
                                                   std::min(cube_hi[0], dhi)));
      } else if (space.kind() == SpaceKind::kBox) {
        cell.theta_S = center.cwiseMax(blo).cwiseMin(bhi).cwiseMax(cube_lo).cwiseMin(cube_hi);
      } else if (space.contains(center)) {
        cell.theta_S = center;
      } else {
        std::vector<Halfspace> hs = theta_hs;
        auto cube_hs = cube_halfspaces(cube_lo, cube_hi);
        hs.insert(hs.end(), cube_hs.begin(), cube_hs.end());
        cell.theta_S = project_onto_halfspace_intersection(center, hs);
      }

      cell.J_S = fam.fisher(cell.theta_S);
      Eigen::SelfAdjointEigenSolver<Mat> eig(cell.J_S);
      if (eig.info() != Eigen::Success) throw numeric_error("build_grid: eigensolver failed");
      cell.lam = eig.eigenvalues();
      cell.R = eig.eigenvectors();
      if (cell.lam.minCoeff() <= 0.0) {
        throw numeric_error("build_grid: Fisher information not positive definite at anchor");
      }
      cell.sides = Vec(K);
      for (int i = 0; i < K; ++i) cell.sides[i] = cfg.a / std::sqrt(nd * cell.lam[i]);

      // ---- small-rectangle lattice over the cell ----
      // Range of rotated coordinates u = R^T (theta - theta_S) over the cube.
      Vec umin = Vec::Zero(K), umax = Vec::Zero(K);
      for (int i = 0; i < K; ++i) {
        for (int j = 0; j < K; ++j) {
          double c1 = cell.R(j, i) * (cube_lo[j] - cell.theta_S[j]);
          double c2 = cell.R(j, i) * (cube_hi[j] - cell.theta_S[j]);
          umin[i] += std::min(c1, c2);
          umax[i] += std::max(c1, c2);
        }
      }
      std::vector<std::int64_t> klo(K), khi(K);
      for (int i = 0; i < K; ++i) {
        klo[i] = static_cast<std::int64_t>(std::floor(umin[i] / cell.sides[i])) - 1;
        khi[i] = static_cast<std::int64_t>(std::floor(umax[i] / cell.sides[i])) + 1;
      }

      cell.first_point = grid.points_.size();

      std::vector<std::int64_t> k(klo.begin(), klo.end());
      bool kdone = false;
      while (!kdone) {
        // ---- rectangle keep test ----
        bool rect_keep = false;
        if (exact1d) {
          double r = cell.R(0, 0);
          double e1 = cell.theta_S[0] + r * (static_cast<double>(k[0]) * cell.sides[0]);
          double e2 = cell.theta_S[0] + r * (static_cast<double>(k[0] + 1) * cell.sides[0]);
          double rlo = std::min(e1, e2), rhi = std::max(e1, e2);
          double clo = std::max(cube_lo[0], dlo), chi = std::min(cube_hi[0], dhi);
          rect_keep = std::min(rhi, chi) - std::max(rlo, clo) > 1e-13 * cell.sides[0];
        } else if (exact2d) {
          std::vector<V2> poly;
          for (int corner = 0; corner < 4; ++corner) {
            // Corner order chosen counterclockwise in the rotated frame.
            static const int cx[4] = {0, 1, 1, 0};
            static const int cy[4] = {0, 0, 1, 1};
            Vec u(2);
            u[0] = (static_cast<double>(k[0]) + cx[corner]) * cell.sides[0];
            u[1] = (static_cast<double>(k[1]) + cy[corner]) * cell.sides[1];
            Vec t = cell.theta_S + cell.R * u;
            poly.emplace_back(t[0], t[1]);
          }
          for (const auto& h : theta_hs) {
            poly = clip_polygon(poly, V2(h.a[0], h.a[1]), h.b);
            if (poly.size() < 3) break;
          }
          auto cube_hs = cube_halfspaces(cube_lo, cube_hi);
          for (const auto& h : cube_hs) {
            if (poly.size() < 3) break;
            poly = clip_polygon(poly, V2(h.a[0], h.a[1]), h.b);
          }
          rect_keep = polygon_area(poly) > 1e-13 * cell.sides[0] * cell.sides[1];
        } else {
          // Rotated rectangle as halfspaces in theta coordinates:
          // k_i s_i <= (R^T (theta - theta_S))_i <= (k_i + 1) s_i.
          std::vector<Halfspace> hs = theta_hs;
          auto cube_hs = cube_halfspaces(cube_lo, cube_hi);
          hs.insert(hs.end(), cube_hs.begin(), cube_hs.end());
          for (int i = 0; i < K; ++i) {
            Vec col = cell.R.col(i);
            double base = col.dot(cell.theta_S);
            hs.push_back({col, base + (static_cast<double>(k[i] + 1)) * cell.sides[i]});
            hs.push_back({-col, -(base + static_cast<double>(k[i]) * cell.sides[i])});
          }
          Vec u(K);
          for (int i = 0; i < K; ++i) {
            u[i] = (static_cast<double>(k[i]) + 0.5) * cell.sides[i];
          }
          Vec rect_center = cell.theta_S + cell.R * u;
          rect_keep = shrunk_intersection_nonempty(rect_center, hs, 1e-9 * cell.sides.minCoeff());
        }

        if (rect_keep) {
          Vec u(K);
          for (int i = 0; i < K; ++i) u[i] = (static_cast<double>(k[i]) + 0.5) * cell.sides[i];
          Vec rect_center = cell.theta_S + cell.R * u;

          GridPoint pt;
          pt.rect_index = k;
          pt.cell = static_cast<std::uint32_t>(grid.cells_.size());
          bool in_cube = true;
          for (int j = 0; j < K; ++j) {
            if (rect_center[j] < cube_lo[j] || rect_center[j] > cube_hi[j]) in_cube = false;
          }
          if (in_cube && space.contains(rect_center)) {
            pt.theta = rect_center;
            pt.projected = false;
          } else if (exact1d) {
            double clo = std::max(cube_lo[0], dlo), chi = std::min(cube_hi[0], dhi);
            pt.theta = Vec::Constant(1, std::clamp(rect_center[0], clo, chi));
            pt.projected = true;
          } else {
            // Project under the J(theta_S) metric: whiten with y =
            // Lam^(1/2) R^T (theta - theta_S), project in y, map back.  The
            // projection is nonexpansive in that metric, which preserves the
            // K a^2 / (4n) quadratic guarantee for every parameter in the
            // rectangle.
            std::vector<Halfspace> hs = theta_hs;
            auto cube_hs = cube_halfspaces(cube_lo, cube_hi);
            hs.insert(hs.end(), cube_hs.begin(), cube_hs.end());
            Vec sqrt_lam = cell.lam.cwiseSqrt();
            std::vector<Halfspace> hs_y;
            hs_y.reserve(hs.size());
            for (const auto& h : hs) {
              Vec ay = (cell.R.transpose() * h.a).cwiseQuotient(sqrt_lam);
              hs_y.push_back({ay, h.b - h.a.dot(cell.theta_S)});
            }
            Vec y0 = (cell.R.transpose() * (rect_center - cell.theta_S)).cwiseProduct(sqrt_lam);
            Vec y = project_onto_halfspace_intersection(y0, hs_y);
            pt.theta = cell.theta_S + cell.R * y.cwiseQuotient(sqrt_lam);
            pt.projected = true;
          }
          grid.points_.push_back(std::move(pt));
        }

        // next lattice index (lexicographic)
        int axis = K - 1;
        while (axis >= 0) {
          if (++k[axis] <= khi[axis]) break;
          k[axis] = klo[axis];
          --axis;
        }
        if (axis < 0) kdone = true;
      }

      cell.num_points = grid.points_.size() - cell.first_point;
      if (cell.num_points > 0) {
        grid.cell_by_cube_[idx] = grid.cells_.size();
        grid.cells_.push_back(std::move(cell));
      } else {
        grid.points_.resize(cell.first_point);
      }
    }

    // next cube index (lexicographic)
    int axis = K - 1;
    while (axis >= 0) {
      if (++idx[axis] <= ihi[axis]) break;
      idx[axis] = ilo[axis];
      --axis;
    }
    if (axis < 0) done = true;
  }

  if (grid.points_.empty()) {
    throw numeric_error("build_grid: construction produced no grid points");
  }
  grid.point_matrix_ = Mat(grid.points_.size(), K);
  for (std::size_t p = 0; p < grid.points_.size(); ++p) {
    grid.point_matrix_.row(static_cast<Eigen::Index>(p)) = grid.points_[p].theta.transpose();
  }
  return grid;
}

}  // namespace mdl
