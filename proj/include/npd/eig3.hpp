#pragma once

#include <array>

#include "npd/geometry.hpp"

namespace npd {

struct Mat3 {
  double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};

  static Mat3 zero() { return {}; }
  static Mat3 diag(double a, double b, double c) {
    Mat3 r;
    r.m[0][0] = a;
    r.m[1][1] = b;
    r.m[2][2] = c;
    return r;
  }
  static Mat3 identity() { return diag(1.0, 1.0, 1.0); }

  // v v^T rank-one update helper.
  static Mat3 outer(const Vec3& u, const Vec3& v);

  Vec3 row(int i) const { return {m[i][0], m[i][1], m[i][2]}; }
  Vec3 mul(const Vec3& v) const;
  Mat3 operator+(const Mat3& o) const;
  Mat3 operator-(const Mat3& o) const;
  Mat3 operator*(double s) const;
  double max_abs() const;
};

struct EigPair {
  double value = 0.0;
  Vec3 vector{0.0, 0.0, 0.0};
};

// Eigendecomposition of a symmetric 3x3 matrix. Pairs are sorted by
// ascending eigenvalue; eigenvectors are orthonormal. Sign and order are
// made deterministic: each vector is flipped so its first component
// larger than 1e-9 in magnitude is positive, and vectors of (near-)equal
// eigenvalues are ordered lexicographically.
//
// Closed-form eigenvalues (trigonometric form of the characteristic
// polynomial) with cross-product eigenvectors; falls back to cyclic
// Jacobi sweeps whenever the analytic residual is not good enough.
//
// Throws UsageError if the matrix is not symmetric within 1e-9
// (relative to its largest entry).
std::array<EigPair, 3> eig_sym3(const Mat3& m);

// Flips v so that its first component with magnitude > 1e-9 is positive.
Vec3 canonical_sign(const Vec3& v);

}  // namespace npd
