#pragma once

#include <cstdint>
#include <limits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "npd/geometry.hpp"

namespace npd {

// Uniform hash grid over a point cloud for exact neighborhood queries.
// All queries are read-only and deterministic: candidate cells are
// visited in coordinate order and ties resolve to the lowest point index.
class SpatialGrid {
 public:
  static constexpr std::uint32_t kNone =
      std::numeric_limits<std::uint32_t>::max();

  SpatialGrid(const PointCloud& cloud, double cell_size);

  // Heuristic cell size of max_extent / cbrt(N) for nearest-neighbor use.
  static SpatialGrid for_nn_queries(const PointCloud& cloud);

  // Indices within `radius` of q (inclusive), sorted by (squared
  // distance, index).
  std::vector<std::pair<double, std::uint32_t>> radius_query(
      const Point3& q, double radius) const;

  // Exact nearest neighbor by expanding-box search. `exclude` skips one
  // index (pass kNone to keep all). Returns (index, squared distance).
  std::pair<std::uint32_t, double> nearest(const Point3& q,
                                           std::uint32_t exclude = kNone) const;

  // The k nearest points sorted by (squared distance, index); fewer if
  // the cloud is smaller.
  std::vector<std::pair<double, std::uint32_t>> k_nearest(
      const Point3& q, std::size_t k, std::uint32_t exclude = kNone) const;

  double cell_size() const { return cell_; }
  std::size_t size() const { return points_.size(); }

 private:
  struct CellCoord {
    std::int64_t x, y, z;
  };

  CellCoord coord_of(const Point3& p) const;
  const std::vector<std::uint32_t>* bucket(std::int64_t cx, std::int64_t cy,
                                           std::int64_t cz) const;

  template <typename Visitor>
  void visit_shell(const CellCoord& c0, std::int64_t r, Visitor&& visit) const;

  PointCloud points_;
  double cell_;
  Vec3 origin_;
  CellCoord min_cell_, max_cell_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

}  // namespace npd
