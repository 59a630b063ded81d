#include <doctest.h>

#include <cmath>
#include <random>

#include "hypproj/errors.hpp"
#include "hypproj/hypgeo.hpp"
#include "hypproj/sampling.hpp"
#include "oracles.hpp"

using namespace hypproj;

namespace {

Pointd p2(double a, double b) { return Pointd(Eigen::Vector2d(a, b)); }
Pointd p3(double a, double b, double c) { return Pointd(Eigen::Vector3d(a, b, c)); }

}  // namespace

TEST_CASE("distance from the origin matches the integrated line element") {
  const double ref = oracle::diameter_length(0.5);
  CHECK(std::abs(ref - 1.0986122886681098) < 1e-9);
  CHECK(std::abs(poincare_distance(Pointd::origin(3), p3(0.5, 0, 0)) - ref) < 1e-9);
  for (double r : {0.1, 0.3, 0.7, 0.9}) {
    CHECK(std::abs(poincare_distance(Pointd::origin(2), p2(0, r)) - oracle::diameter_length(r)) < 1e-8);
  }
}

TEST_CASE("points on or outside the boundary are rejected") {
  CHECK_THROWS_AS(p2(1.0, 0.0), UsageError);
  CHECK_THROWS_AS(p2(0.8, 0.7), UsageError);
  CHECK_THROWS_AS(Pointd(Eigen::VectorXd::Zero(1)), UsageError);
  CHECK_NOTHROW(p2(0.999, 0.0));
}

TEST_CASE("Psi radial examples") {
  const Pointd k = psi(p2(0.5, 0));
  CHECK(k.model() == Model::Klein);
  CHECK(std::abs(k[0] - 0.8) < 1e-15);
  CHECK(k[1] == 0.0);
  CHECK(psi(Pointd::origin(3)).coords().isZero());
  const Pointd back = psi_inv(k);
  CHECK(std::abs(back[0] - 0.5) < 1e-15);
}

TEST_CASE("Klein distance example") {
  const Pointd y(Eigen::Vector2d(std::tanh(1.0), 0.0), Model::Klein);
  CHECK(std::abs(klein_distance(Pointd::origin(2, Model::Klein), y) - 1.0) < 1e-12);
}

TEST_CASE("model tags are enforced") {
  const Pointd k(Eigen::Vector2d(0.1, 0.2), Model::Klein);
  CHECK_THROWS_AS(psi(k), UsageError);
  CHECK_THROWS_AS(psi_inv(p2(0.1, 0.2)), UsageError);
  CHECK_THROWS_AS(poincare_distance(k, p2(0.1, 0.2)), UsageError);
  CHECK_THROWS_AS(poincare_distance(p2(0, 0), p3(0, 0, 0)), UsageError);
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 rng(11);
  for (int n : {2, 3, 5}) {
    for (int i = 0; i < 3000; ++i) {
      const Pointd x = random_ball_point(n, 0.95, rng);
      const Pointd y = random_ball_point(n, 0.95, rng);
      const Pointd z = random_ball_point(n, 0.95, rng);
      const double dxy = poincare_distance(x, y);
      CHECK(dxy >= 0.0);
      CHECK(poincare_distance(x, x) == 0.0);
      CHECK(std::abs(dxy - poincare_distance(y, x)) <= 1e-12 * std::max(1.0, dxy));
      CHECK(dxy <= poincare_distance(x, z) + poincare_distance(z, y) + 1e-12);
    }
  }
}

TEST_CASE("Psi roundtrip in both directions") {
  std::mt19937_64 rng(12);
  for (int n : {2, 3, 4}) {
    for (int i = 0; i < 10000; ++i) {
      const Pointd x = random_ball_point(n, 0.999, rng);
      CHECK((psi_inv(psi(x)).coords() - x.coords()).norm() < 1e-12);
      const Pointd y(random_ball_coords(n, 0.999, rng), Model::Klein);
      CHECK((psi(psi_inv(y)).coords() - y.coords()).norm() < 1e-12);
    }
  }
}

TEST_CASE("Klein distance agrees with the Poincare distance of preimages") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 2000; ++i) {
    const Pointd x = random_ball_point(3, 0.9, rng);
    const Pointd y = random_ball_point(3, 0.9, rng);
    CHECK(std::abs(klein_distance(psi(x), psi(y)) - poincare_distance(x, y)) < 1e-10);
  }
}

TEST_CASE("geodesic points lie on the circle orthogonal to the boundary") {
  std::mt19937_64 rng(14);
  for (int n : {2, 3, 4}) {
    for (int i = 0; i < 300; ++i) {
      const Pointd a = random_ball_point(n, 0.9, rng);
      const Pointd b = random_ball_point(n, 0.9, rng);
      const oracle::CircleArc arc(a.coords(), b.coords());
      const Geodesic<double> g(a, b);
      for (double t : {0.1, 0.25, 0.5, 0.8, 0.95}) {
        CHECK(arc.off_circle(geodesic_point(g, t).coords()) < 1e-9);
      }
      // Points of the arc oracle map to the Klein chord.
      const Eigen::VectorXd ka = psi_coords<double>(a.coords());
      const Eigen::VectorXd kb = psi_coords<double>(b.coords());
      const Eigen::VectorXd dir = (kb - ka).normalized();
      for (double s : {0.2, 0.5, 0.7}) {
        const Eigen::VectorXd k = psi_coords<double>(arc.at(s)) - ka;
        CHECK((k - k.dot(dir) * dir).norm() < 1e-9);
      }
    }
  }
}

TEST_CASE("geodesic_point is the constant-speed parametrization") {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 1000; ++i) {
    const Pointd a = random_ball_point(3, 0.95, rng);
    const Pointd b = random_ball_point(3, 0.95, rng);
    const Geodesic<double> g(a, b);
    const double L = poincare_distance(a, b);
    CHECK(geodesic_point(g, 0.0) == a);
    CHECK(geodesic_point(g, 1.0) == b);
    for (double t : {0.13, 0.5, 0.77}) {
      const Pointd p = geodesic_point(g, t);
      CHECK(std::abs(poincare_distance(a, p) - t * L) < 1e-9);
      // additivity d(a, p) + d(p, b) = d(a, b) characterizes geodesic points
      CHECK(std::abs(poincare_distance(a, p) + poincare_distance(p, b) - L) < 1e-9);
    }
  }
}

TEST_CASE("geodesic_point rejects parameters outside [0, 1]") {
  const Geodesic<double> g(p2(0.1, 0.2), p2(-0.3, 0.4));
  CHECK_THROWS_AS(geodesic_point(g, -0.01), UsageError);
  CHECK_THROWS_AS(geodesic_point(g, 1.01), UsageError);
  CHECK_THROWS_AS(geodesic_point(g, std::nan("")), UsageError);
  CHECK_THROWS_AS(Geodesic<double>(p2(0.1, 0.2), p2(0.1, 0.2)), UsageError);
}

TEST_CASE("Mobius and chord geodesics coincide") {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 1000; ++i) {
    const Pointd a = random_ball_point(4, 0.9, rng);
    const Pointd b = random_ball_point(4, 0.9, rng);
    const Geodesic<double> g(a, b);
    for (double t : {0.2, 0.6}) {
      const Eigen::VectorXd m = mobius_geodesic_coords<double>(a.coords(), b.coords(), t);
      CHECK((geodesic_point(g, t).coords() - m).norm() < 1e-9);
    }
  }
}

TEST_CASE("initial direction matches a finite difference along the geodesic") {
  std::mt19937_64 rng(17);
  for (int n : {2, 3}) {
    for (int i = 0; i < 500; ++i) {
      const Pointd x = random_ball_point(n, 0.9, rng);
      const Pointd y = random_ball_point(n, 0.9, rng);
      const Geodesic<double> g(x, y);
      const double h = 1e-6 / std::max(1.0, g.length());
      const Eigen::VectorXd fd = (geodesic_point(g, h).coords() - x.coords()).normalized();
      const Eigen::VectorXd dir = initial_direction(x, y);
      CHECK(std::abs(dir.norm() - 1.0) < 1e-14);
      CHECK(std::acos(std::clamp(fd.dot(dir), -1.0, 1.0)) < 1e-5);
    }
  }
  CHECK_THROWS_AS(initial_direction(p2(0.1, 0.1), p2(0.1, 0.1)), UsageError);
}

TEST_CASE("the distance formula with the printed denominator fails the line element") {
  // With + |x|^2 + |y|^2 in the radicand, d(0, x) is 2 atanh(r / sqrt(1 + r^2)).
  const double printed = printed_poincare_distance(Pointd::origin(2), p2(0.5, 0));
  CHECK(std::abs(printed - 2 * std::atanh(0.5 / std::sqrt(1.25))) < 1e-12);
  CHECK(std::abs(printed - oracle::diameter_length(0.5)) > 0.1);
  // The corrected denominator is the standard Poincare metric.
  std::mt19937_64 rng(18);
  for (int i = 0; i < 1000; ++i) {
    const Pointd x = random_ball_point(3, 0.9, rng);
    const Pointd y = random_ball_point(3, 0.9, rng);
    const double delta = 2 * (x.coords() - y.coords()).squaredNorm() /
                         ((1 - x.coords().squaredNorm()) * (1 - y.coords().squaredNorm()));
    CHECK(std::abs(poincare_distance(x, y) - std::acosh(1 + delta)) < 1e-9);
  }
}

TEST_CASE("long double instantiation") {
  using P = Point<long double>;
  Eigen::Matrix<long double, Eigen::Dynamic, 1> c(2);
  c << 0.5L, 0.0L;
  const long double d = poincare_distance(P::origin(2), P(c));
  CHECK(std::abs(d - std::log(3.0L)) < 1e-17L);
  CHECK(std::abs(psi(P(c))[0] - 0.8L) < 1e-18L);
}
