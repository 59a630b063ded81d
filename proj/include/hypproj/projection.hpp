#pragma once

// Closest-point projection of the Poincare ball onto the totally geodesic
// disc V ∩ D^n, computed by conjugating the Euclidean projection with Psi,
// plus a derivative-free minimization route used to check it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "hypproj/errors.hpp"
#include "hypproj/grassmann.hpp"
#include "hypproj/hypgeo.hpp"

namespace hypproj {

/// Psi^{-1} o P_V o Psi.
template <typename Scalar>
Point<Scalar> hyp_project(const MPlane<Scalar>& plane, const Point<Scalar>& x,
                          PsiConvention convention = PsiConvention::Standard) {
  detail::require_same_dim<Scalar>("hyp_project", plane.ambient_dim(), x.dim());
  detail::require_model("hyp_project", x, Model::Poincare);
  const VectorX<Scalar> klein = psi_coords<Scalar>(x.coords(), convention);
  const VectorX<Scalar> foot = euclid_project(plane, klein);
  return Point<Scalar>(psi_inv_coords<Scalar>(foot, convention));
}

/// Batch form of hyp_project returning intrinsic plane coordinates B^T q.
/// `points` holds one Poincare point per column; the result is m x N.
template <typename Scalar>
MatrixX<Scalar> hyp_project_coords(const MPlane<Scalar>& plane,
                                   const Eigen::Ref<const MatrixX<Scalar>>& points,
                                   PsiConvention convention = PsiConvention::Standard) {
  detail::require_same_dim<Scalar>("hyp_project_coords", plane.ambient_dim(), points.rows());
  // P_V Psi(x) = B c with c = B^T Psi(x), and Psi^{-1} is radial, so the
  // plane coordinates of the foot are c rescaled by the inverse profile.
  const VectorX<Scalar> radii = points.colwise().norm().transpose();
  VectorX<Scalar> to_klein(points.cols());
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const Scalar r = radii[i];
    if (r == Scalar(0)) {
      to_klein[i] = 0;
    } else {
      const Scalar k = convention == PsiConvention::Standard ? poincare_to_klein_radius(r)
                                                             : klein_to_poincare_radius(r);
      to_klein[i] = k / r;
    }
  }
  MatrixX<Scalar> c = (plane.basis().transpose() * points) * to_klein.asDiagonal();
  for (Eigen::Index i = 0; i < c.cols(); ++i) {
    const Scalar s = c.col(i).norm();
    if (s == Scalar(0)) continue;
    const Scalar r = convention == PsiConvention::Standard ? klein_to_poincare_radius(s)
                                                           : poincare_to_klein_radius(s);
    c.col(i) *= r / s;
  }
  return c;
}

template <typename Scalar>
struct OracleResult {
  Point<Scalar> foot;
  VectorX<Scalar> plane_coords;
  Scalar objective;  ///< d(x, foot)
  int evaluations;
};

/// Minimizes u -> d(x, B u) over the open unit m-disc without using Psi.
///
/// Powell's conjugate-direction method with golden-section line searches.
/// Sublevel sets of d(x, .) are Euclidean balls in the Poincare model, so the
/// objective is unimodal along every chord of the disc. The search restarts
/// from fresh coordinate axes once progress stalls and stops when a restarted
/// round no longer decreases the objective by more than tol. Throws
/// NumericalError after 10^4 objective evaluations.
template <typename Scalar>
OracleResult<Scalar> minimize_plane_distance(const MPlane<Scalar>& plane, const Point<Scalar>& x,
                                             Scalar tol) {
  using std::sqrt;
  detail::require_same_dim<Scalar>("oracle_project", plane.ambient_dim(), x.dim());
  detail::require_model("oracle_project", x, Model::Poincare);
  if (!(tol > Scalar(0))) throw UsageError("oracle_project: tol must be positive");

  constexpr int kMaxEvaluations = 10000;
  const int m = plane.dim();
  const Scalar radius = Scalar(1) - Scalar(kBoundaryGuard);
  const Scalar golden = (sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
  const Scalar line_tol = std::min(tol, Scalar(1e-12));
  const Scalar stall = std::max(tol * tol, Scalar(8) * std::numeric_limits<Scalar>::epsilon());

  int evaluations = 0;
  auto objective = [&](const VectorX<Scalar>& u) -> Scalar {
    if (++evaluations > kMaxEvaluations) {
      std::ostringstream msg;
      msg << "oracle_project: no convergence after " << kMaxEvaluations
          << " evaluations (n=" << plane.ambient_dim() << ", m=" << m
          << ", |x|=" << static_cast<double>(x.norm()) << ", |u|="
          << static_cast<double>(u.norm()) << ")";
      throw NumericalError(msg.str());
    }
    if (!(u.norm() < radius)) return std::numeric_limits<Scalar>::infinity();
    return poincare_distance_coords<Scalar>(x.coords(), plane.basis() * u);
  };

  // Golden-section search along u + t d over the chord of the disc.
  auto line_search = [&](VectorX<Scalar>& u, Scalar& fu, const VectorX<Scalar>& d) {
    const Scalar a = d.squaredNorm();
    if (a == Scalar(0)) return;
    const Scalar b = u.dot(d);
    const Scalar c = u.squaredNorm() - radius * radius;
    const Scalar disc = sqrt(std::max(Scalar(0), b * b - a * c));
    Scalar lo = (-b - disc) / a;
    Scalar hi = (-b + disc) / a;
    const Scalar width_tol = line_tol / sqrt(a);
    Scalar t1 = hi - golden * (hi - lo);
    Scalar t2 = lo + golden * (hi - lo);
    Scalar f1 = objective(u + t1 * d);
    Scalar f2 = objective(u + t2 * d);
    while (hi - lo > width_tol) {
      if (f1 < f2) {
        hi = t2;
        t2 = t1;
        f2 = f1;
        t1 = hi - golden * (hi - lo);
        if (!(t1 > lo && t1 < t2)) break;
        f1 = objective(u + t1 * d);
      } else {
        lo = t1;
        t1 = t2;
        f1 = f2;
        t2 = lo + golden * (hi - lo);
        if (!(t2 < hi && t2 > t1)) break;
        f2 = objective(u + t2 * d);
      }
    }
    const Scalar t = f1 < f2 ? t1 : t2;
    const Scalar ft = std::min(f1, f2);
    if (ft < fu) {
      u += t * d;
      fu = ft;
    }
  };

  VectorX<Scalar> u = VectorX<Scalar>::Zero(m);
  Scalar fu = objective(u);
  bool restarted = false;
  MatrixX<Scalar> dirs = MatrixX<Scalar>::Identity(m, m);
  for (;;) {
    const VectorX<Scalar> start = u;
    const Scalar f_start = fu;
    Scalar best_drop = 0;
    int best_dir = 0;
    for (int i = 0; i < m; ++i) {
      const Scalar before = fu;
      line_search(u, fu, dirs.col(i));
      if (before - fu > best_drop) {
        best_drop = before - fu;
        best_dir = i;
      }
    }
    if (m > 1) {
      const VectorX<Scalar> shift = u - start;
      if (shift.norm() > Scalar(0)) {
        line_search(u, fu, shift);
        dirs.col(best_dir) = dirs.col(m - 1);
        dirs.col(m - 1) = shift.normalized();
      }
    }
    if (f_start - fu <= stall * std::max(Scalar(1), fu)) {
      if (restarted) break;
      restarted = true;
      dirs.setIdentity();
    } else {
      restarted = false;
    }
  }
  return OracleResult<Scalar>{Point<Scalar>(plane.basis() * u), u, fu, evaluations};
}

template <typename Scalar>
Point<Scalar> oracle_project(const MPlane<Scalar>& plane, const Point<Scalar>& x, Scalar tol) {
  return minimize_plane_distance(plane, x, tol).foot;
}

/// Minimal angle in [0, pi/2] between the tangent at `foot` of the geodesic
/// from `foot` to `x` and the plane (the tangent space of V ∩ D^n at any of its
/// points is V itself).
template <typename Scalar>
Scalar plane_angle_at(const MPlane<Scalar>& plane, const Point<Scalar>& foot,
                      const Point<Scalar>& x) {
  using std::atan2;
  const VectorX<Scalar> dir = initial_direction(foot, x);
  const VectorX<Scalar> along = euclid_project(plane, dir);
  return atan2((dir - along).norm(), along.norm());
}

/// Angle at the foot of the projection between the connecting geodesic and
/// the plane. Expected value pi/2. Points within 1e-9 of V are rejected.
template <typename Scalar>
Scalar foot_angle(const MPlane<Scalar>& plane, const Point<Scalar>& x) {
  detail::require_same_dim<Scalar>("foot_angle", plane.ambient_dim(), x.dim());
  const Scalar off = (x.coords() - euclid_project(plane, x.coords())).norm();
  if (!(off > Scalar(1e-9))) throw UsageError("foot_angle: point lies on the plane");
  return plane_angle_at(plane, hyp_project(plane, x), x);
}

}  // namespace hypproj
