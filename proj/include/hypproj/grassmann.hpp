#pragma once

// m-planes through the origin of R^n, rotation-invariant sampling, Euclidean
// projection and principal angles.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "hypproj/errors.hpp"
#include "hypproj/hypgeo.hpp"

namespace hypproj {

/// m-dimensional linear subspace of R^n held as an n x m matrix with
/// orthonormal columns.
template <typename Scalar = double>
class MPlane {
public:
  using Matrix = MatrixX<Scalar>;
  using Vector = VectorX<Scalar>;

  explicit MPlane(Matrix basis) : basis_(std::move(basis)) {
    const auto n = basis_.rows();
    const auto m = basis_.cols();
    if (m < 1 || m >= n) {
      throw UsageError("MPlane: need 1 <= m < n, got n=" + std::to_string(n) +
                       " m=" + std::to_string(m));
    }
    const Scalar dev =
        (basis_.transpose() * basis_ - Matrix::Identity(m, m)).cwiseAbs().maxCoeff();
    if (!(dev < orthonormality_tolerance())) {
      throw UsageError("MPlane: basis columns are not orthonormal (deviation " +
                       std::to_string(static_cast<double>(dev)) + ")");
    }
  }

  /// Orthonormalizes the columns of `vectors` by Householder QR, with the sign
  /// of each column chosen so the R factor has a nonnegative diagonal.
  static MPlane span_of(const Matrix& vectors) {
    const auto n = vectors.rows();
    const auto m = vectors.cols();
    if (m < 1 || m >= n) {
      throw UsageError("MPlane::span_of: need 1 <= m < n");
    }
    Eigen::HouseholderQR<Matrix> qr(vectors);
    Matrix q = qr.householderQ() * Matrix::Identity(n, m);
    const Matrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < m; ++j) {
      if (r(j, j) < Scalar(0)) q.col(j) = -q.col(j);
    }
    return MPlane(std::move(q));
  }

  /// span(e_1, ..., e_m)
  static MPlane coordinate(int n, int m) { return MPlane(Matrix::Identity(n, m)); }

  const Matrix& basis() const { return basis_; }
  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }

  static Scalar orthonormality_tolerance() {
    return std::max(Scalar(1e-12), Scalar(64) * std::numeric_limits<Scalar>::epsilon());
  }

private:
  Matrix basis_;
};

using MPlaned = MPlane<double>;

/// Draws a plane from the rotation-invariant probability measure on G(n, m):
/// Gaussian n x m matrix, then sign-fixed QR.
template <typename Scalar = double, typename Rng>
MPlane<Scalar> sample_haar(int n, int m, Rng& rng) {
  if (n < 2 || m < 1 || m >= n) {
    throw UsageError("sample_haar: need 1 <= m < n, got n=" + std::to_string(n) +
                     " m=" + std::to_string(m));
  }
  std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
  MatrixX<Scalar> g(n, m);
  // Column-major fill order is part of the reproducibility contract.
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
  }
  return MPlane<Scalar>::span_of(g);
}

template <typename Scalar, typename Derived>
VectorX<Scalar> euclid_project(const MPlane<Scalar>& plane, const Eigen::MatrixBase<Derived>& x) {
  detail::require_same_dim<Scalar>("euclid_project", plane.ambient_dim(), x.size());
  return plane.basis() * (plane.basis().transpose() * x);
}

/// Intrinsic coordinates u = B^T q of a point q on the plane.
template <typename Scalar, typename Derived>
VectorX<Scalar> coords_in_plane(const MPlane<Scalar>& plane, const Eigen::MatrixBase<Derived>& q) {
  detail::require_same_dim<Scalar>("coords_in_plane", plane.ambient_dim(), q.size());
  VectorX<Scalar> u = plane.basis().transpose() * q;
  const Scalar off = (q - plane.basis() * u).norm();
  if (!(off <= Scalar(1e-9))) {
    throw UsageError("coords_in_plane: point is " + std::to_string(static_cast<double>(off)) +
                     " off the plane");
  }
  return u;
}

template <typename Scalar, typename Derived>
VectorX<Scalar> embed(const MPlane<Scalar>& plane, const Eigen::MatrixBase<Derived>& u) {
  detail::require_same_dim<Scalar>("embed", plane.dim(), u.size());
  return plane.basis() * u;
}

/// Principal angles between two planes of equal shape, largest first.
///
/// Cosines come from the singular values of B_v^T B_w and sines from the
/// singular values of (I - B_v B_v^T) B_w; each angle is read from whichever
/// is better conditioned.
template <typename Scalar>
VectorX<Scalar> principal_angles(const MPlane<Scalar>& v, const MPlane<Scalar>& w) {
  using std::acos;
  using std::asin;
  if (v.ambient_dim() != w.ambient_dim() || v.dim() != w.dim()) {
    throw UsageError("principal_angles: planes must have the same (n, m)");
  }
  const int m = v.dim();
  const MatrixX<Scalar> c = v.basis().transpose() * w.basis();
  const MatrixX<Scalar> s = w.basis() - v.basis() * c;

  // Eigen returns singular values in decreasing order.
  VectorX<Scalar> cosines = Eigen::JacobiSVD<MatrixX<Scalar>>(c).singularValues();
  VectorX<Scalar> sines = Eigen::JacobiSVD<MatrixX<Scalar>>(s).singularValues();
  std::sort(sines.data(), sines.data() + sines.size());

  VectorX<Scalar> angles(m);
  for (int i = 0; i < m; ++i) {
    const Scalar ci = std::clamp(cosines[i], Scalar(0), Scalar(1));
    const Scalar si = std::clamp(sines[i], Scalar(0), Scalar(1));
    angles[i] = ci * ci >= Scalar(0.5) ? asin(si) : acos(ci);
  }
  std::sort(angles.data(), angles.data() + m, [](Scalar a, Scalar b) { return a > b; });
  return angles;
}

}  // namespace hypproj
