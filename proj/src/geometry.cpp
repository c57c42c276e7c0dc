#include "npd/geometry.hpp"

#include <cmath>
#include <string>

#include "npd/errors.hpp"
#include "npd/rng.hpp"

namespace npd {

Point3 project_point(const Point3& p, const Plane& plane) {
  const Vec3& n = plane.normal;
  return p - n * dot(n, p) + n * plane.intercept;
}

PointCloud project_cloud(const PointCloud& cloud, const PlaneSet& planes) {
  if (cloud.size() != planes.size()) {
    throw UsageError("project_cloud: cloud has " +
                     std::to_string(cloud.size()) + " points but plane set has " +
                     std::to_string(planes.size()));
  }
  PointCloud out(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    out[i] = project_point(cloud[i], planes[i]);
  }
  return out;
}

Plane plane_from_raw(const double raw[4]) {
  const Vec3 a{raw[0], raw[1], raw[2]};
  const double len = norm(a);
  if (!(len > kDegenerateNormalThreshold)) {
    throw DegeneratePlaneError("plane_from_raw: normal part has norm " +
                               std::to_string(len));
  }
  return Plane{a / len, raw[3] / len};
}

NormalizeResult normalize_unit_cube(const PointCloud& cloud) {
  if (cloud.empty()) {
    throw UsageError("normalize_unit_cube: empty cloud");
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
  const Vec3 extent = hi - lo;
  const double max_extent = std::max({extent.x, extent.y, extent.z});

  UnitCubeTransform t;
  t.center = (lo + hi) * 0.5;
  t.scale = max_extent > 0.0 ? 1.0 / max_extent : 1.0;

  NormalizeResult result;
  result.transform = t;
  result.cloud.resize(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    result.cloud[i] = t.apply(cloud[i]);
  }
  return result;
}

PointCloud add_gaussian_noise(const PointCloud& cloud,
                              const NoiseModel& model) {
  if (!(model.sigma >= 0.0) || !std::isfinite(model.sigma)) {
    throw UsageError("add_gaussian_noise: sigma must be finite and >= 0");
  }
  if (model.sigma == 0.0) return cloud;
  PointCloud out(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    RngStream stream(model.seed, {i});
    const Vec3 n{stream.next_normal(), stream.next_normal(),
                 stream.next_normal()};
    out[i] = cloud[i] + n * model.sigma;
  }
  return out;
}

}  // namespace npd
