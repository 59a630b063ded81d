#pragma once

// Poincare-ball model of hyperbolic n-space: metric, the radial map between
// the Poincare and Klein balls, geodesics and tangent directions.

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "hypproj/errors.hpp"

namespace hypproj {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Points with Euclidean norm at or beyond 1 - kBoundaryGuard are rejected.
inline constexpr double kBoundaryGuard = 1e-12;

enum class Model { Poincare, Klein };

/// Which radial profile pair is used for the Poincare -> Klein map.
///
/// `Standard` sends r to 2r/(1+r^2), the profile that carries geodesic arcs
/// onto straight chords. `Printed` is the swapped pair r -> tanh(atanh(r)/2);
/// it is kept only so the chord test can show that it fails.
enum class PsiConvention { Standard, Printed };

inline const char* to_string(Model model) {
  return model == Model::Poincare ? "poincare" : "klein";
}

template <typename Scalar = double>
class Point {
public:
  using Vector = VectorX<Scalar>;

  explicit Point(Vector coords, Model model = Model::Poincare)
      : coords_(std::move(coords)), model_(model) {
    if (coords_.size() < 2) {
      throw UsageError("Point: dimension must be at least 2, got " +
                       std::to_string(coords_.size()));
    }
    const Scalar r = coords_.norm();
    if (!(r < Scalar(1) - Scalar(kBoundaryGuard))) {
      throw UsageError("Point: norm must be < 1 - 1e-12, got " +
                       std::to_string(static_cast<double>(r)));
    }
  }

  static Point origin(int n, Model model = Model::Poincare) {
    return Point(Vector::Zero(n), model);
  }

  const Vector& coords() const { return coords_; }
  Model model() const { return model_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  Scalar norm() const { return coords_.norm(); }
  Scalar operator[](int i) const { return coords_[i]; }

  friend bool operator==(const Point& a, const Point& b) {
    return a.model_ == b.model_ && a.coords_ == b.coords_;
  }

private:
  Vector coords_;
  Model model_;
};

using Pointd = Point<double>;

namespace detail {

template <typename Scalar>
void require_same_dim(const char* where, Eigen::Index a, Eigen::Index b) {
  if (a != b) {
    throw UsageError(std::string(where) + ": dimension mismatch (" +
                     std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

template <typename Scalar>
void require_model(const char* where, const Point<Scalar>& p, Model expected) {
  if (p.model() != expected) {
    throw UsageError(std::string(where) + ": expected a " + to_string(expected) +
                     " point, got " + to_string(p.model()));
  }
}

// 1 - r^2 without cancellation near r = 1.
template <typename Scalar>
Scalar one_minus_sq(Scalar r) {
  return (Scalar(1) - r) * (Scalar(1) + r);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Radial profiles

/// Poincare radius -> Klein radius, r -> 2r / (1 + r^2) = tanh(2 atanh r).
template <typename Scalar>
Scalar poincare_to_klein_radius(Scalar r) {
  return Scalar(2) * r / (Scalar(1) + r * r);
}

/// Klein radius -> Poincare radius, s -> s / (1 + sqrt(1 - s^2)) = tanh(atanh(s) / 2).
template <typename Scalar>
Scalar klein_to_poincare_radius(Scalar s) {
  using std::sqrt;
  return s / (Scalar(1) + sqrt(detail::one_minus_sq(s)));
}

/// Radial map on raw coordinates. No validation; used by the batch paths.
template <typename Scalar, typename Derived>
VectorX<Scalar> psi_coords(const Eigen::MatrixBase<Derived>& x,
                           PsiConvention convention = PsiConvention::Standard) {
  const Scalar r = x.norm();
  if (r == Scalar(0)) return VectorX<Scalar>::Zero(x.size());
  const Scalar rr = convention == PsiConvention::Standard ? poincare_to_klein_radius(r)
                                                          : klein_to_poincare_radius(r);
  return (rr / r) * x;
}

template <typename Scalar, typename Derived>
VectorX<Scalar> psi_inv_coords(const Eigen::MatrixBase<Derived>& y,
                               PsiConvention convention = PsiConvention::Standard) {
  const Scalar s = y.norm();
  if (s == Scalar(0)) return VectorX<Scalar>::Zero(y.size());
  const Scalar rr = convention == PsiConvention::Standard ? klein_to_poincare_radius(s)
                                                          : poincare_to_klein_radius(s);
  return (rr / s) * y;
}

/// Poincare -> Klein. Psi(0) = 0 by continuity; Psi is not differentiable there.
template <typename Scalar>
Point<Scalar> psi(const Point<Scalar>& x, PsiConvention convention = PsiConvention::Standard) {
  detail::require_model("psi", x, Model::Poincare);
  return Point<Scalar>(psi_coords<Scalar>(x.coords(), convention), Model::Klein);
}

/// Klein -> Poincare.
template <typename Scalar>
Point<Scalar> psi_inv(const Point<Scalar>& y, PsiConvention convention = PsiConvention::Standard) {
  detail::require_model("psi_inv", y, Model::Klein);
  return Point<Scalar>(psi_inv_coords<Scalar>(y.coords(), convention), Model::Poincare);
}

// ---------------------------------------------------------------------------
// Metrics

/// Poincare distance on raw coordinates:
///   2 atanh( |x - y| / sqrt(|x - y|^2 + (1 - |x|^2)(1 - |y|^2)) ).
/// The radicand equals 1 - 2<x,y> + |x|^2 |y|^2; this grouping avoids cancellation.
template <typename Scalar, typename DerivedX, typename DerivedY>
Scalar poincare_distance_coords(const Eigen::MatrixBase<DerivedX>& x,
                                const Eigen::MatrixBase<DerivedY>& y) {
  using std::atanh;
  using std::sqrt;
  const Scalar diff2 = (x - y).squaredNorm();
  if (diff2 == Scalar(0)) return Scalar(0);
  const Scalar gx = detail::one_minus_sq<Scalar>(x.norm());
  const Scalar gy = detail::one_minus_sq<Scalar>(y.norm());
  return Scalar(2) * atanh(sqrt(diff2 / (diff2 + gx * gy)));
}

template <typename Scalar>
Scalar poincare_distance(const Point<Scalar>& x, const Point<Scalar>& y) {
  detail::require_same_dim<Scalar>("poincare_distance", x.dim(), y.dim());
  detail::require_model("poincare_distance", x, Model::Poincare);
  detail::require_model("poincare_distance", y, Model::Poincare);
  return poincare_distance_coords<Scalar>(x.coords(), y.coords());
}

/// The distance formula with the denominator sqrt(1 - 2<x,y> + |x|^2 + |y|^2).
/// Not a model of hyperbolic space (d(0, x) != 2 atanh |x|); conformance tests only.
template <typename Scalar>
Scalar printed_poincare_distance(const Point<Scalar>& x, const Point<Scalar>& y) {
  using std::atanh;
  using std::sqrt;
  detail::require_same_dim<Scalar>("printed_poincare_distance", x.dim(), y.dim());
  const auto& a = x.coords();
  const auto& b = y.coords();
  const Scalar den = Scalar(1) - Scalar(2) * a.dot(b) + a.squaredNorm() + b.squaredNorm();
  return Scalar(2) * atanh((a - b).norm() / sqrt(den));
}

/// Klein distance, defined as the Poincare distance of the Psi-preimages.
template <typename Scalar>
Scalar klein_distance(const Point<Scalar>& x, const Point<Scalar>& y) {
  detail::require_same_dim<Scalar>("klein_distance", x.dim(), y.dim());
  detail::require_model("klein_distance", x, Model::Klein);
  detail::require_model("klein_distance", y, Model::Klein);
  return poincare_distance_coords<Scalar>(psi_inv_coords<Scalar>(x.coords()),
                                          psi_inv_coords<Scalar>(y.coords()));
}

// ---------------------------------------------------------------------------
// Mobius gyro-operations. These give closed forms for isometries of the ball
// and are used as a second route to geodesics, independent of Psi.

/// a (+) b = ((1 + 2<a,b> + |b|^2) a + (1 - |a|^2) b) / (1 + 2<a,b> + |a|^2 |b|^2)
template <typename Scalar, typename DerivedA, typename DerivedB>
VectorX<Scalar> mobius_add(const Eigen::MatrixBase<DerivedA>& a,
                           const Eigen::MatrixBase<DerivedB>& b) {
  const Scalar ab = a.dot(b);
  const Scalar a2 = a.squaredNorm();
  const Scalar b2 = b.squaredNorm();
  const Scalar den = Scalar(1) + Scalar(2) * ab + a2 * b2;
  return ((Scalar(1) + Scalar(2) * ab + b2) * a + (Scalar(1) - a2) * b) / den;
}

/// Constant-speed geodesic a -> b via a (+) (t (x) ((-a) (+) b)).
template <typename Scalar, typename DerivedA, typename DerivedB>
VectorX<Scalar> mobius_geodesic_coords(const Eigen::MatrixBase<DerivedA>& a,
                                       const Eigen::MatrixBase<DerivedB>& b, Scalar t) {
  using std::atanh;
  using std::tanh;
  const VectorX<Scalar> w = mobius_add<Scalar>((-a).eval(), b);
  const Scalar r = w.norm();
  if (r == Scalar(0)) return a;
  const VectorX<Scalar> step = (tanh(t * atanh(r)) / r) * w;
  return mobius_add<Scalar>(a, step);
}

// ---------------------------------------------------------------------------
// Geodesics

/// Geodesic segment between two distinct Poincare points. Caches the Klein
/// chord endpoints; the segment is the Psi-preimage of that chord.
template <typename Scalar = double>
class Geodesic {
public:
  Geodesic(Point<Scalar> a, Point<Scalar> b) : a_(std::move(a)), b_(std::move(b)) {
    detail::require_same_dim<Scalar>("Geodesic", a_.dim(), b_.dim());
    detail::require_model("Geodesic", a_, Model::Poincare);
    detail::require_model("Geodesic", b_, Model::Poincare);
    if (a_.coords() == b_.coords()) throw UsageError("Geodesic: endpoints coincide");
    klein_a_ = psi_coords<Scalar>(a_.coords());
    klein_b_ = psi_coords<Scalar>(b_.coords());
    length_ = poincare_distance(a_, b_);
  }

  const Point<Scalar>& a() const { return a_; }
  const Point<Scalar>& b() const { return b_; }
  const VectorX<Scalar>& klein_a() const { return klein_a_; }
  const VectorX<Scalar>& klein_b() const { return klein_b_; }
  Scalar length() const { return length_; }

  /// Poincare coordinates of the chord point at chord parameter s in [0, 1].
  VectorX<Scalar> chord_point(Scalar s) const {
    return psi_inv_coords<Scalar>((klein_a_ + s * (klein_b_ - klein_a_)).eval());
  }

private:
  Point<Scalar> a_;
  Point<Scalar> b_;
  VectorX<Scalar> klein_a_;
  VectorX<Scalar> klein_b_;
  Scalar length_;
};

/// Point at arc-length fraction t of the geodesic: d(a, result) = t d(a, b).
/// Found by bisection on the chord parameter, run until the bracket stops shrinking.
template <typename Scalar>
Point<Scalar> geodesic_point(const Geodesic<Scalar>& g, Scalar t) {
  if (!(t >= Scalar(0) && t <= Scalar(1))) {
    throw UsageError("geodesic_point: t must lie in [0, 1]");
  }
  if (t == Scalar(0)) return g.a();
  if (t == Scalar(1)) return g.b();

  const Scalar target = t * g.length();
  Scalar lo = 0;
  Scalar hi = 1;
  for (int iter = 0; iter < 200; ++iter) {
    const Scalar mid = lo + (hi - lo) / Scalar(2);
    if (mid <= lo || mid >= hi) break;
    const Scalar d = poincare_distance_coords<Scalar>(g.a().coords(), g.chord_point(mid));
    if (d < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Point<Scalar>(g.chord_point(lo + (hi - lo) / Scalar(2)));
}

/// Euclidean unit tangent at x of the geodesic from x to y. The model is
/// conformal, so Euclidean angles between these tangents are hyperbolic angles.
template <typename Scalar>
VectorX<Scalar> initial_direction(const Point<Scalar>& x, const Point<Scalar>& y) {
  detail::require_same_dim<Scalar>("initial_direction", x.dim(), y.dim());
  detail::require_model("initial_direction", x, Model::Poincare);
  detail::require_model("initial_direction", y, Model::Poincare);
  if (x.coords() == y.coords()) throw UsageError("initial_direction: coincident points");
  // The left translation z -> x (+) z has differential (1 - |x|^2) Id at 0,
  // so the tangent at x is parallel to (-x) (+) y.
  const VectorX<Scalar> w = mobius_add<Scalar>((-x.coords()).eval(), y.coords());
  return w.normalized();
}

}  // namespace hypproj
