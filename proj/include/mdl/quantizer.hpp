#pragma once
// Fisher-shaped parameter quantization.
//
// The domain is partitioned into axis-aligned cubes of side a * n^(-beta)
// ("large cells", kept when their overlap with the domain has positive
// volume).  Each cell gets an anchor theta_S -- the cube center projected
// onto domain-intersect-cube -- and is tiled by a lattice of small
// hyperrectangles aligned with the eigenvectors of J(theta_S), with side
// a / sqrt(n * lambda_i) along the i-th eigenvector.  Rectangles that
// overlap the cell in positive volume contribute one grid point each: the
// rectangle center, projected onto domain-intersect-cube under the
// J(theta_S) metric when it falls outside.  The construction gives every
// interior parameter a representative within squared J(theta_S)-distance
// K * a^2 / (4n).

#include "mdl/family.hpp"

#include <cstdint>
#include <map>

namespace mdl {

struct GridConfig {
  double a = 2.0;      // cell size coefficient
  double beta = 0.25;  // cell shrink exponent; quadratic guarantees need beta < 1/2
};

struct LargeCell {
  std::vector<std::int64_t> cube_index;  // per-axis index: cube = prod [i*A, (i+1)*A)
  Vec cube_lo, cube_hi;
  Vec theta_S;   // anchor: cube center projected onto domain-intersect-cube
  Mat J_S;       // Fisher information at the anchor
  Mat R;         // eigenvectors of J_S (columns)
  Vec lam;       // eigenvalues of J_S
  Vec sides;     // small-rectangle sides a / sqrt(n * lam_i)
  bool boundary = false;  // cube is not strictly inside the domain
  std::size_t first_point = 0;
  std::size_t num_points = 0;
};

struct GridPoint {
  Vec theta;                             // representative parameter
  std::vector<std::int64_t> rect_index;  // lattice index within the parent cell
  std::uint32_t cell = 0;                // parent cell
  bool projected = false;                // center fell outside and was projected
};

class QuantizerGrid {
 public:
  const std::vector<LargeCell>& cells() const { return cells_; }
  const std::vector<GridPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  // Model description length: log(number of grid points), in nats.
  double log_size() const;

  std::uint64_t sample_size() const { return n_; }
  const GridConfig& config() const { return cfg_; }

  // Index of the cell whose cube contains theta (half-open convention),
  // falling back to the nearest kept cell for boundary parameters whose cube
  // was dropped.
  std::size_t cell_of(const Vec& theta) const;

  struct NearestResult {
    std::size_t point_index = 0;
    double quad = 0.0;  // (point - theta)^T J(theta_S) (point - theta), anchor of theta's cell
    std::size_t cell = 0;
  };

  // The grid point minimizing the J(theta_S)-metric distance to theta, where
  // theta_S is the anchor of theta's own cell; ties resolve to the lowest
  // point index.
  NearestResult nearest(const Vec& theta) const;

 private:
  friend QuantizerGrid build_grid(const Family& fam, std::uint64_t n, const GridConfig& cfg);

  std::vector<LargeCell> cells_;
  std::vector<GridPoint> points_;
  Mat point_matrix_;  // size() x K copy of the representatives for fast scans
  std::map<std::vector<std::int64_t>, std::size_t> cell_by_cube_;
  std::uint64_t n_ = 0;
  GridConfig cfg_;
  double cube_side_ = 0.0;
};

// Builds the quantization grid for sample size n >= 1.  Requires a family
// with dim() >= 1 and positive definite Fisher information on the domain.
QuantizerGrid build_grid(const Family& fam, std::uint64_t n, const GridConfig& cfg = {});

}  // namespace mdl
