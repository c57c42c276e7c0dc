#pragma once

#include <cstdint>
#include <vector>

#include "npd/eig3.hpp"
#include "npd/geometry.hpp"

namespace npd {

// Gaussian-kernel weighted PCA plane fitting over epsilon-radius
// neighborhoods, the preprocessing step that turns a clean cloud into
// per-point reference planes.

struct PlaneFitParams {
  // eps = eps_scale * median nearest-neighbor distance, unless eps is
  // set to a positive absolute radius.
  double eps = 0.0;
  double eps_scale = 2.5;
  // sigma_w = sigma_w_scale * eps.
  double sigma_w_scale = 0.5;
  std::size_t max_k = 30;
};

struct NeighborEntry {
  std::uint32_t index;
  double weight;
};

struct NeighborGraph {
  // Per point, (index, weight) pairs sorted by distance then index; the
  // point itself is always a member and weights sum to 1.
  std::vector<std::vector<NeighborEntry>> neighbors;
  double eps = 0.0;      // resolved radius
  double sigma_w = 0.0;  // resolved kernel bandwidth
  std::size_t max_k = 0;
  // Points whose radius neighborhood was smaller than 3 and got widened
  // to their 3 nearest points.
  std::size_t expanded_count = 0;
};

struct WeightedCovariance {
  Mat3 matrix;  // sum_j w_j p_j p_j^T - mean mean^T
  Vec3 mean;    // sum_j w_j p_j
};

struct PlaneFitStats {
  double eps = 0.0;
  double sigma_w = 0.0;
  std::size_t max_k = 0;
  std::size_t expanded_count = 0;
};

// Throws UsageError for clouds with fewer than 4 points.
NeighborGraph build_neighbor_graph(const PointCloud& cloud,
                                   const PlaneFitParams& params);

WeightedCovariance weighted_covariance(const PointCloud& cloud,
                                       const NeighborGraph& graph,
                                       std::size_t i);

// Normal = eigenvector of the smallest covariance eigenvalue, intercept
// = normal . weighted mean. Throws DegenerateFitError when the two
// smallest eigenvalues both vanish (collinear or coincident neighbors).
Plane fit_plane(const PointCloud& cloud, const NeighborGraph& graph,
                std::size_t i);

// Flips (normal, intercept) pairs so the first component of the normal
// larger than 1e-9 in magnitude is positive. The geometric plane (and
// therefore every projection) is unchanged.
PlaneSet canonicalize_orientation(const PlaneSet& planes,
                                  const PointCloud& cloud);

PlaneSet compute_reference_planes(const PointCloud& cloud,
                                  const PlaneFitParams& params,
                                  PlaneFitStats* stats = nullptr);

}  // namespace npd
