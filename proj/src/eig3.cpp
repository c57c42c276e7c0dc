#include "npd/eig3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "npd/errors.hpp"

namespace npd {

Mat3 Mat3::outer(const Vec3& u, const Vec3& v) {
  Mat3 r;
  const double uu[3] = {u.x, u.y, u.z};
  const double vv[3] = {v.x, v.y, v.z};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = uu[i] * vv[j];
  return r;
}

Vec3 Mat3::mul(const Vec3& v) const {
  return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
          m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
          m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

Mat3 Mat3::operator+(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
  return r;
}

Mat3 Mat3::operator-(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
  return r;
}

Mat3 Mat3::operator*(double s) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = m[i][j] * s;
  return r;
}

double Mat3::max_abs() const {
  double v = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v = std::max(v, std::abs(m[i][j]));
  return v;
}

Vec3 canonical_sign(const Vec3& v) {
  const double c[3] = {v.x, v.y, v.z};
  for (int i = 0; i < 3; ++i) {
    if (std::abs(c[i]) > 1e-9) {
      return c[i] < 0.0 ? -v : v;
    }
  }
  return v;
}

namespace {

struct Basis {
  double values[3];
  Vec3 vectors[3];
};

// Eigenvalues of a symmetric matrix via the trigonometric solution of
// the characteristic cubic, ascending.
void analytic_eigenvalues(const Mat3& a, double out[3]) {
  const double p1 = a.m[0][1] * a.m[0][1] + a.m[0][2] * a.m[0][2] +
                    a.m[1][2] * a.m[1][2];
  const double q = (a.m[0][0] + a.m[1][1] + a.m[2][2]) / 3.0;
  if (p1 == 0.0) {
    out[0] = a.m[0][0];
    out[1] = a.m[1][1];
    out[2] = a.m[2][2];
    std::sort(out, out + 3);
    return;
  }
  const double d0 = a.m[0][0] - q;
  const double d1 = a.m[1][1] - q;
  const double d2 = a.m[2][2] - q;
  const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  // B = (A - qI) / p, r = det(B) / 2 in [-1, 1] up to roundoff.
  Mat3 b = (a - Mat3::diag(q, q, q)) * (1.0 / p);
  const double detb =
      b.m[0][0] * (b.m[1][1] * b.m[2][2] - b.m[1][2] * b.m[2][1]) -
      b.m[0][1] * (b.m[1][0] * b.m[2][2] - b.m[1][2] * b.m[2][0]) +
      b.m[0][2] * (b.m[1][0] * b.m[2][1] - b.m[1][1] * b.m[2][0]);
  const double r = std::clamp(detb / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double two_pi_third = 2.0 * std::numbers::pi / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + two_pi_third);
  out[0] = lo;
  out[1] = 3.0 * q - hi - lo;
  out[2] = hi;
}

// Eigenvector for an isolated eigenvalue: the kernel direction of
// (A - lambda I), taken from the largest cross product of its rows.
bool kernel_vector(const Mat3& a, double lambda, Vec3* out) {
  const Mat3 s = a - Mat3::diag(lambda, lambda, lambda);
  const Vec3 r0 = s.row(0);
  const Vec3 r1 = s.row(1);
  const Vec3 r2 = s.row(2);
  const Vec3 cands[3] = {cross(r0, r1), cross(r0, r2), cross(r1, r2)};
  int best = 0;
  double best_n2 = -1.0;
  for (int i = 0; i < 3; ++i) {
    const double n2 = norm2(cands[i]);
    if (n2 > best_n2) {
      best_n2 = n2;
      best = i;
    }
  }
  const double len = std::sqrt(best_n2);
  if (!(len > 0.0) || !std::isfinite(len)) return false;
  *out = cands[best] / len;
  return true;
}

// Any unit vector orthogonal to u.
Vec3 orthogonal_to(const Vec3& u) {
  const Vec3 trial = std::abs(u.x) <= std::abs(u.y) &&
                             std::abs(u.x) <= std::abs(u.z)
                         ? Vec3{1.0, 0.0, 0.0}
                     : std::abs(u.y) <= std::abs(u.z) ? Vec3{0.0, 1.0, 0.0}
                                                      : Vec3{0.0, 0.0, 1.0};
  Vec3 v = cross(u, trial);
  return v / norm(v);
}

bool analytic_path(const Mat3& a, double scale, Basis* out) {
  double lam[3];
  analytic_eigenvalues(a, lam);
  const double spread = lam[2] - lam[0];
  const double tiny = 1e-12 * std::max(1.0, scale);

  Vec3 v0, v1, v2;
  if (spread <= tiny) {
    // Spherical spectrum: every basis works.
    v0 = {1.0, 0.0, 0.0};
    v1 = {0.0, 1.0, 0.0};
    v2 = {0.0, 0.0, 1.0};
  } else if (lam[1] - lam[0] <= tiny) {
    // Low pair repeated; the top eigenvalue is isolated.
    if (!kernel_vector(a, lam[2], &v2)) return false;
    v0 = orthogonal_to(v2);
    v1 = cross(v2, v0);
  } else if (lam[2] - lam[1] <= tiny) {
    if (!kernel_vector(a, lam[0], &v0)) return false;
    v1 = orthogonal_to(v0);
    v2 = cross(v0, v1);
  } else {
    if (!kernel_vector(a, lam[0], &v0)) return false;
    if (!kernel_vector(a, lam[2], &v2)) return false;
    // Enforce exact mutual orthogonality.
    v2 = v2 - v0 * dot(v0, v2);
    const double n2 = norm(v2);
    if (!(n2 > 1e-6)) return false;
    v2 = v2 / n2;
    v1 = cross(v2, v0);
  }

  out->values[0] = lam[0];
  out->values[1] = lam[1];
  out->values[2] = lam[2];
  out->vectors[0] = v0;
  out->vectors[1] = v1;
  out->vectors[2] = v2;
  return true;
}

// Cyclic Jacobi; converges to machine precision for any symmetric 3x3.
void jacobi_path(const Mat3& a_in, Basis* out) {
  double a[3][3];
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = a_in.m[i][j];

  for (int sweep = 0; sweep < 64; ++sweep) {
    const double off = std::abs(a[0][1]) + std::abs(a[0][2]) +
                       std::abs(a[1][2]);
    if (off == 0.0) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) +
                          std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  int order[3] = {0, 1, 2};
  std::sort(order, order + 3,
            [&](int i, int j) { return a[i][i] < a[j][j]; });
  for (int k = 0; k < 3; ++k) {
    const int c = order[k];
    out->values[k] = a[c][c];
    out->vectors[k] = {v[0][c], v[1][c], v[2][c]};
  }
}

double residual(const Mat3& a, const Basis& b) {
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Vec3 r = a.mul(b.vectors[k]) - b.vectors[k] * b.values[k];
    worst = std::max(worst, norm(r));
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      worst = std::max(
          worst, std::abs(dot(b.vectors[i], b.vectors[j]) - expected));
    }
  }
  return worst;
}

bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.z < b.z;
}

}  // namespace

std::array<EigPair, 3> eig_sym3(const Mat3& m) {
  const double scale = m.max_abs();
  const double sym_tol = 1e-9 * std::max(1.0, scale);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      if (std::abs(m.m[i][j] - m.m[j][i]) > sym_tol) {
        throw UsageError("eig_sym3: matrix is not symmetric (entry " +
                         std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  // Work on the symmetrized matrix so both triangles agree exactly.
  Mat3 a = m;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double v = 0.5 * (m.m[i][j] + m.m[j][i]);
      a.m[i][j] = v;
      a.m[j][i] = v;
    }
  }

  Basis basis;
  const double accept = 1e-11 * std::max(1.0, scale);
  if (!analytic_path(a, scale, &basis) || residual(a, basis) > accept) {
    jacobi_path(a, &basis);
  }

  std::array<EigPair, 3> pairs;
  for (int k = 0; k < 3; ++k) {
    pairs[k].value = basis.values[k];
    pairs[k].vector = canonical_sign(basis.vectors[k]);
  }

  // Near-equal eigenvalues span a free subspace; order their vectors
  // lexicographically so repeated spectra decompose deterministically.
  const double tie_tol = 1e-12 * std::max(1.0, scale);
  for (int start = 0; start < 3;) {
    int end = start + 1;
    while (end < 3 && pairs[end].value - pairs[start].value <= tie_tol) ++end;
    if (end - start > 1) {
      double sorted_values[3];
      for (int k = start; k < end; ++k) sorted_values[k] = pairs[k].value;
      std::sort(pairs.begin() + start, pairs.begin() + end,
                [](const EigPair& x, const EigPair& y) {
                  return lex_less(x.vector, y.vector);
                });
      for (int k = start; k < end; ++k) pairs[k].value = sorted_values[k];
    }
    start = end;
  }
  return pairs;
}

}  // namespace npd
