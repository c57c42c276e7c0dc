#include "npd/spatial_grid.hpp"

#include <algorithm>
#include <cmath>

#include "npd/errors.hpp"

namespace npd {

namespace {

std::uint64_t pack(std::int64_t x, std::int64_t y, std::int64_t z) {
  // Cell coordinates are non-negative and bounded well below 2^21 by
  // construction (origin at the bounding box corner).
  return static_cast<std::uint64_t>(x) |
         (static_cast<std::uint64_t>(y) << 21) |
         (static_cast<std::uint64_t>(z) << 42);
}

}  // namespace

SpatialGrid::SpatialGrid(const PointCloud& cloud, double cell_size)
    : points_(cloud), cell_(cell_size) {
  if (cloud.empty()) throw UsageError("SpatialGrid: empty cloud");
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw UsageError("SpatialGrid: cell size must be positive");
  }
  Vec3 lo = cloud.front();
  Vec3 hi = cloud.front();
  for (const Point3& p : cloud) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    lo.z = std::min(lo.z, p.z);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
    hi.z = std::max(hi.z, p.z);
  }
  origin_ = lo;
  // Keep coordinates inside the 21-bit packing budget for any input.
  const double max_extent =
      std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z, 0.0});
  const double min_cell = max_extent / 1048000.0;
  cell_ = std::max(cell_, min_cell);

  min_cell_ = coord_of(lo);
  max_cell_ = coord_of(hi);
  for (std::uint32_t i = 0; i < points_.size(); ++i) {
    const CellCoord c = coord_of(points_[i]);
    cells_[pack(c.x, c.y, c.z)].push_back(i);
  }
}

SpatialGrid SpatialGrid::for_nn_queries(const PointCloud& cloud) {
  if (cloud.empty()) throw UsageError("SpatialGrid: empty cloud");
  Vec3 lo = cloud.front();
  Vec3 hi = cloud.front();
  for (const Point3& p : cloud) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    lo.z = std::min(lo.z, p.z);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
    hi.z = std::max(hi.z, p.z);
  }
  const double extent = std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z});
  const double cells_per_axis =
      std::ceil(std::cbrt(static_cast<double>(cloud.size())));
  const double cell = extent > 0.0 ? extent / cells_per_axis : 1.0;
  return SpatialGrid(cloud, cell);
}

SpatialGrid::CellCoord SpatialGrid::coord_of(const Point3& p) const {
  return {static_cast<std::int64_t>(std::floor((p.x - origin_.x) / cell_)),
          static_cast<std::int64_t>(std::floor((p.y - origin_.y) / cell_)),
          static_cast<std::int64_t>(std::floor((p.z - origin_.z) / cell_))};
}

const std::vector<std::uint32_t>* SpatialGrid::bucket(std::int64_t cx,
                                                      std::int64_t cy,
                                                      std::int64_t cz) const {
  if (cx < min_cell_.x || cx > max_cell_.x || cy < min_cell_.y ||
      cy > max_cell_.y || cz < min_cell_.z || cz > max_cell_.z) {
    return nullptr;
  }
  const auto it = cells_.find(pack(cx, cy, cz));
  return it == cells_.end() ? nullptr : &it->second;
}

template <typename Visitor>
void SpatialGrid::visit_shell(const CellCoord& c0, std::int64_t r,
                              Visitor&& visit) const {
  for (std::int64_t dz = -r; dz <= r; ++dz) {
    for (std::int64_t dy = -r; dy <= r; ++dy) {
      for (std::int64_t dx = -r; dx <= r; ++dx) {
        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != r) {
          continue;
        }
        if (const auto* b = bucket(c0.x + dx, c0.y + dy, c0.z + dz)) {
          for (std::uint32_t idx : *b) visit(idx);
        }
      }
    }
  }
}

std::vector<std::pair<double, std::uint32_t>> SpatialGrid::radius_query(
    const Point3& q, double radius) const {
  std::vector<std::pair<double, std::uint32_t>> hits;
  const double r2 = radius * radius;
  const CellCoord lo = coord_of({q.x - radius, q.y - radius, q.z - radius});
  const CellCoord hi = coord_of({q.x + radius, q.y + radius, q.z + radius});
  for (std::int64_t cz = lo.z; cz <= hi.z; ++cz) {
    for (std::int64_t cy = lo.y; cy <= hi.y; ++cy) {
      for (std::int64_t cx = lo.x; cx <= hi.x; ++cx) {
        if (const auto* b = bucket(cx, cy, cz)) {
          for (std::uint32_t idx : *b) {
            const double d2 = dist2(points_[idx], q);
            if (d2 <= r2) hits.emplace_back(d2, idx);
          }
        }
      }
    }
  }
  std::sort(hits.begin(), hits.end());
  return hits;
}

std::pair<std::uint32_t, double> SpatialGrid::nearest(
    const Point3& q, std::uint32_t exclude) const {
  auto best = k_nearest(q, 1, exclude);
  if (best.empty()) throw UsageError("SpatialGrid::nearest: no candidates");
  return {best[0].second, best[0].first};
}

std::vector<std::pair<double, std::uint32_t>> SpatialGrid::k_nearest(
    const Point3& q, std::size_t k, std::uint32_t exclude) const {
  std::vector<std::pair<double, std::uint32_t>> found;
  if (k == 0) return found;
  const std::size_t available = points_.size() - (exclude != kNone ? 1 : 0);
  if (available == 0) {
    throw UsageError("SpatialGrid::k_nearest: no candidate points");
  }
  const CellCoord c0 = coord_of(q);
  const std::int64_t max_span =
      std::max({max_cell_.x - min_cell_.x, max_cell_.y - min_cell_.y,
                max_cell_.z - min_cell_.z}) +
      2;

  for (std::int64_t r = 0;; ++r) {
    visit_shell(c0, r, [&](std::uint32_t idx) {
      if (idx == exclude) return;
      found.emplace_back(dist2(points_[idx], q), idx);
    });

    const bool have_k = found.size() >= std::min(k, available);
    if (have_k && !found.empty()) {
      std::sort(found.begin(), found.end());
      // Distance from q to the boundary of the scanned cell box; any
      // unscanned point is at least this far. Sides that already cover
      // the whole grid cannot hide points.
      double d_out = std::numeric_limits<double>::infinity();
      const double qc[3] = {q.x - origin_.x, q.y - origin_.y,
                            q.z - origin_.z};
      const std::int64_t c0v[3] = {c0.x, c0.y, c0.z};
      const std::int64_t minv[3] = {min_cell_.x, min_cell_.y, min_cell_.z};
      const std::int64_t maxv[3] = {max_cell_.x, max_cell_.y, max_cell_.z};
      for (int axis = 0; axis < 3; ++axis) {
        if (c0v[axis] - r > minv[axis]) {
          d_out = std::min(
              d_out, qc[axis] - static_cast<double>(c0v[axis] - r) * cell_);
        }
        if (c0v[axis] + r < maxv[axis]) {
          d_out = std::min(d_out, static_cast<double>(c0v[axis] + r + 1) *
                                          cell_ -
                                      qc[axis]);
        }
      }
      const std::size_t want = std::min(k, found.size());
      if (found[want - 1].first <= d_out * d_out) {
        found.resize(want);
        return found;
      }
    }
    if (r > max_span && !found.empty()) {
      std::sort(found.begin(), found.end());
      found.resize(std::min(k, found.size()));
      return found;
    }
  }
}

}  // namespace npd
