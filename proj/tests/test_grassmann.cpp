#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypproj/errors.hpp"
#include "hypproj/grassmann.hpp"
#include "oracles.hpp"

using namespace hypproj;

TEST_CASE("plane construction validates its basis") {
  CHECK_NOTHROW(MPlaned::coordinate(3, 2));
  Eigen::MatrixXd skew(3, 1);
  skew << 1, 1, 0;
  CHECK_THROWS_AS(MPlaned{skew}, UsageError);
  CHECK_THROWS_AS(MPlaned::coordinate(3, 3), UsageError);
  CHECK_THROWS_AS(MPlaned(Eigen::MatrixXd(3, 0)), UsageError);
  const MPlaned s = MPlaned::span_of(skew);
  CHECK(std::abs(s.basis().col(0).norm() - 1.0) < 1e-15);
  CHECK(std::abs(s.basis()(0, 0) - std::sqrt(0.5)) < 1e-15);
}

TEST_CASE("Haar samples are orthonormal and seed-deterministic") {
  std::mt19937_64 a(5), b(5);
  for (int i = 0; i < 100; ++i) {
    const MPlaned v = sample_haar(5, 2, a);
    const MPlaned w = sample_haar(5, 2, b);
    CHECK(v.basis() == w.basis());
    CHECK((v.basis().transpose() * v.basis() - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-13);
  }
}

TEST_CASE("Haar lines in R^3: E[cos^2 of the angle to e1] = 1/3") {
  std::mt19937_64 rng(6);
  const int N = 10000;
  double sum = 0.0;
  for (int i = 0; i < N; ++i) {
    const double c = sample_haar(3, 1, rng).basis()(0, 0);
    sum += c * c;
  }
  CHECK(std::abs(sum / N - 1.0 / 3.0) < 0.02);
}

TEST_CASE("Haar distribution is invariant under a fixed rotation (KS)") {
  // Angles to a fixed reference plane, for raw samples and for rotated samples.
  std::mt19937_64 ra(7), rb(8);
  const MPlaned ref = MPlaned::coordinate(3, 2);
  Eigen::Matrix3d R = Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
  std::vector<double> plain, rotated;
  const int N = 3000;
  for (int i = 0; i < N; ++i) {
    plain.push_back(principal_angles(ref, sample_haar(3, 2, ra))[0]);
    const MPlaned w = sample_haar(3, 2, rb);
    rotated.push_back(principal_angles(ref, MPlaned::span_of(R * w.basis()))[0]);
  }
  CHECK(oracle::ks_statistic(plain, rotated) < oracle::ks_critical_1pct(N, N));
  // Sanity of the test itself: a biased sampler is rejected.
  std::vector<double> biased;
  std::mt19937_64 rc(9);
  std::uniform_real_distribution<double> u(0.0, std::numbers::pi / 2);
  for (int i = 0; i < N; ++i) biased.push_back(u(rc));
  CHECK(oracle::ks_statistic(plain, biased) > oracle::ks_critical_1pct(N, N));
}

TEST_CASE("euclidean projection, coordinates and embedding") {
  std::mt19937_64 rng(10);
  const MPlaned v = sample_haar(4, 2, rng);
  const Eigen::Vector4d x(0.3, -0.2, 0.5, 0.1);
  const Eigen::VectorXd p = euclid_project(v, x);
  CHECK((euclid_project(v, p) - p).norm() < 1e-15);
  CHECK((v.basis().transpose() * (x - p)).norm() < 1e-15);
  const Eigen::VectorXd u = coords_in_plane(v, p);
  CHECK((embed(v, u) - p).norm() < 1e-15);
  CHECK_THROWS_AS(coords_in_plane(v, x), UsageError);
}

TEST_CASE("principal angles") {
  const MPlaned e12 = MPlaned::coordinate(3, 2);
  CHECK(principal_angles(e12, e12).norm() < 1e-7);

  Eigen::MatrixXd b(3, 2);
  const double th = 0.4;
  b << 1, 0, 0, std::cos(th), 0, std::sin(th);
  const Eigen::VectorXd a = principal_angles(e12, MPlaned(b));
  CHECK(std::abs(a[0] - th) < 1e-14);
  CHECK(std::abs(a[1]) < 1e-14);

  // Small angles keep full relative precision.
  b << 1, 0, 0, std::cos(1e-9), 0, std::sin(1e-9);
  CHECK(std::abs(principal_angles(e12, MPlaned(b))[0] - 1e-9) < 1e-20);

  Eigen::MatrixXd l(3, 1);
  l << 0, 0, 1;
  CHECK(std::abs(principal_angles(MPlaned::coordinate(3, 1), MPlaned(l))[0] - std::numbers::pi / 2) < 1e-15);

  // Nonincreasing and symmetric.
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const MPlaned v = sample_haar(6, 3, rng);
    const MPlaned w = sample_haar(6, 3, rng);
    const Eigen::VectorXd p = principal_angles(v, w);
    const Eigen::VectorXd q = principal_angles(w, v);
    CHECK((p - q).norm() < 1e-12);
    for (int k = 1; k < 3; ++k) CHECK(p[k - 1] >= p[k]);
  }
}
