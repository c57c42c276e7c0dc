#include "npd/plane_fit.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "npd/errors.hpp"
#include "npd/parallel.hpp"
#include "npd/spatial_grid.hpp"

namespace npd {

namespace {

double median_nn_distance(const PointCloud& cloud) {
  const SpatialGrid grid = SpatialGrid::for_nn_queries(cloud);
  std::vector<double> nn(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t i) {
    nn[i] = std::sqrt(grid.nearest(cloud[i], static_cast<std::uint32_t>(i)).second);
  });
  std::sort(nn.begin(), nn.end());
  double med = nn[(nn.size() - 1) / 2];
  if (med <= 0.0) med = nn.back();  // duplicate-heavy cloud
  if (med <= 0.0) {
    throw UsageError("plane fit: all points coincide, no usable scale");
  }
  return med;
}

}  // namespace

NeighborGraph build_neighbor_graph(const PointCloud& cloud,
                                   const PlaneFitParams& params) {
  if (cloud.size() < 4) {
    throw UsageError("build_neighbor_graph: need at least 4 points, got " +
                     std::to_string(cloud.size()));
  }
  NeighborGraph graph;
  graph.eps = params.eps > 0.0 ? params.eps
                               : params.eps_scale * median_nn_distance(cloud);
  graph.sigma_w = params.sigma_w_scale * graph.eps;
  graph.max_k = std::max<std::size_t>(params.max_k, 3);
  if (!(graph.eps > 0.0) || !(graph.sigma_w > 0.0)) {
    throw UsageError("build_neighbor_graph: non-positive radius or bandwidth");
  }

  const SpatialGrid grid(cloud, graph.eps);
  graph.neighbors.resize(cloud.size());
  std::vector<std::uint8_t> expanded(cloud.size(), 0);

  parallel_for(cloud.size(), [&](std::size_t i) {
    auto hits = grid.radius_query(cloud[i], graph.eps);
    if (hits.size() > graph.max_k) hits.resize(graph.max_k);
    if (hits.size() < 3) {
      hits = grid.k_nearest(cloud[i], 3);
      expanded[i] = 1;
    }
    const double inv_two_sigma2 = 1.0 / (2.0 * graph.sigma_w * graph.sigma_w);
    double total = 0.0;
    auto& list = graph.neighbors[i];
    list.reserve(hits.size());
    for (const auto& [d2, idx] : hits) {
      const double w = std::exp(-d2 * inv_two_sigma2);
      list.push_back({idx, w});
      total += w;
    }
    for (NeighborEntry& e : list) e.weight /= total;
  });

  for (std::uint8_t e : expanded) graph.expanded_count += e;
  return graph;
}

WeightedCovariance weighted_covariance(const PointCloud& cloud,
                                       const NeighborGraph& graph,
                                       std::size_t i) {
  if (i >= graph.neighbors.size() || graph.neighbors.size() != cloud.size()) {
    throw UsageError("weighted_covariance: graph does not match cloud");
  }
  WeightedCovariance cov;
  const auto& list = graph.neighbors[i];
  for (const NeighborEntry& e : list) {
    cov.mean += cloud[e.index] * e.weight;
  }
  // Centered accumulation; identical to sum w p p^T - mean mean^T but
  // keeps the matrix positive semi-definite under roundoff.
  for (const NeighborEntry& e : list) {
    const Vec3 d = cloud[e.index] - cov.mean;
    cov.matrix = cov.matrix + Mat3::outer(d, d) * e.weight;
  }
  return cov;
}

Plane fit_plane(const PointCloud& cloud, const NeighborGraph& graph,
                std::size_t i) {
  const WeightedCovariance cov = weighted_covariance(cloud, graph, i);
  const auto pairs = eig_sym3(cov.matrix);
  const double lambda1 = pairs[1].value;
  const double lambda2 = pairs[2].value;
  if (lambda2 <= 1e-18 || lambda1 <= 1e-8 * lambda2) {
    throw DegenerateFitError(
        "fit_plane: neighborhood of point " + std::to_string(i) +
            " is rank deficient (two vanishing eigenvalues)",
        i);
  }
  const Vec3 normal = pairs[0].vector;
  return Plane{normal, dot(normal, cov.mean)};
}

PlaneSet canonicalize_orientation(const PlaneSet& planes,
                                  const PointCloud& cloud) {
  if (planes.size() != cloud.size()) {
    throw UsageError("canonicalize_orientation: plane set has " +
                     std::to_string(planes.size()) + " entries but cloud has " +
                     std::to_string(cloud.size()));
  }
  PlaneSet out(planes.size());
  for (std::size_t i = 0; i < planes.size(); ++i) {
    const Vec3& n = planes[i].normal;
    const double c[3] = {n.x, n.y, n.z};
    bool flip = false;
    for (int k = 0; k < 3; ++k) {
      if (std::abs(c[k]) > 1e-9) {
        flip = c[k] < 0.0;
        break;
      }
    }
    out[i] = flip ? Plane{-n, -planes[i].intercept} : planes[i];
  }
  return out;
}

PlaneSet compute_reference_planes(const PointCloud& cloud,
                                  const PlaneFitParams& params,
                                  PlaneFitStats* stats) {
  const NeighborGraph graph = build_neighbor_graph(cloud, params);
  PlaneSet planes(cloud.size());
  std::vector<std::exception_ptr> errors(cloud.size());
  parallel_for(cloud.size(), [&](std::size_t i) {
    try {
      planes[i] = fit_plane(cloud, graph, i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  if (stats) {
    stats->eps = graph.eps;
    stats->sigma_w = graph.sigma_w;
    stats->max_k = graph.max_k;
    stats->expanded_count = graph.expanded_count;
  }
  return canonicalize_orientation(planes, cloud);
}

}  // namespace npd
