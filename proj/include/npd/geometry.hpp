#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace npd {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  bool operator==(const Vec3& o) const = default;
};

using Point3 = Vec3;

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z,
          a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }
inline double dist2(const Vec3& a, const Vec3& b) { return norm2(a - b); }
inline bool all_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

// Ordered point set; index i is the correspondence key between clean,
// noisy and denoised clouds and their plane sets.
using PointCloud = std::vector<Point3>;

// Plane {x : normal . x = intercept} with unit normal.
struct Plane {
  Vec3 normal{0.0, 0.0, 1.0};
  double intercept = 0.0;
};

using PlaneSet = std::vector<Plane>;

constexpr double kUnitNormalTol = 1e-9;
constexpr double kDegenerateNormalThreshold = 1e-8;

struct NoiseModel {
  double sigma = 0.0;  // per-axis standard deviation
  std::uint64_t seed = 0;
};

// Closest point on the plane: p - (n.p)n + c n.
Point3 project_point(const Point3& p, const Plane& plane);

// Element-wise projection; throws UsageError on length mismatch.
PointCloud project_cloud(const PointCloud& cloud, const PlaneSet& planes);

// Normalizes a raw (nx, ny, nz, c) row to a unit-normal Plane describing
// the same set of points. Throws DegeneratePlaneError when the normal
// part is shorter than kDegenerateNormalThreshold.
Plane plane_from_raw(const double raw[4]);

struct UnitCubeTransform {
  Point3 center;       // bounding-box center of the input
  double scale = 1.0;  // isotropic; 1 / max axis extent

  Point3 apply(const Point3& p) const { return (p - center) * scale; }
  Point3 invert(const Point3& q) const { return q / scale + center; }
};

struct NormalizeResult {
  PointCloud cloud;
  UnitCubeTransform transform;
};

// Centers the bounding box at the origin and scales the largest axis
// extent to 1, so every output point lies in [-0.5, 0.5]^3. A cloud with
// zero extent on all axes is centered with scale 1.
NormalizeResult normalize_unit_cube(const PointCloud& cloud);

// p_i + n_i with n_i ~ N(0, sigma^2 I), one counter stream per point so
// the result is independent of evaluation order.
PointCloud add_gaussian_noise(const PointCloud& cloud, const NoiseModel& model);

}  // namespace npd
