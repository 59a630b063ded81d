#include "hypproj/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "hypproj/grassmann.hpp"
#include "hypproj/projection.hpp"
#include "hypproj/sampling.hpp"

namespace hypproj {

namespace {

constexpr double kSampleRadius = 0.9;

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

struct Suite {
  SuiteResult result;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Suite(std::string name, double threshold) {
    result.name = std::move(name);
    result.threshold = threshold;
  }
  void record(double residual) {
    ++result.samples;
    // NaN residuals count as failures.
    if (!(residual <= result.max_residual)) {
      result.max_residual = std::isnan(residual) ? INFINITY : residual;
    }
  }
  SuiteResult finish() {
    result.passed = result.max_residual <= result.threshold;
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }
};

std::int64_t scaled(std::int64_t full, bool quick) { return quick ? std::max<std::int64_t>(1, full / 10) : full; }

}  // namespace

double line_element_length(double radius, double tol) {
  const std::function<double(double)> f = [](double r) { return 2.0 / ((1.0 - r) * (1.0 + r)); };
  const double fa = f(0.0);
  const double fb = f(radius);
  const double fm = f(0.5 * radius);
  const double whole = radius / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, 0.0, radius, fa, fm, fb, whole, tol, 50);
}

double chord_residual(const Pointd& a, const Pointd& b, int samples, PsiConvention convention) {
  const Eigen::VectorXd ka = psi_coords<double>(a.coords(), convention);
  const Eigen::VectorXd kb = psi_coords<double>(b.coords(), convention);
  const Eigen::VectorXd dir = (kb - ka).normalized();
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    const Eigen::VectorXd p = mobius_geodesic_coords<double>(a.coords(), b.coords(), t);
    const Eigen::VectorXd rel = psi_coords<double>(p, convention) - ka;
    worst = std::max(worst, (rel - rel.dot(dir) * dir).norm());
  }
  return worst;
}

VerifyReport run_verify(const VerifyOptions& options) {
  VerifyReport report;
  std::mt19937_64 rng(options.seed);
  const bool quick = options.quick;
  const auto conv = options.convention;
  auto random_point = [&](int n) { return random_ball_point<double>(n, kSampleRadius, rng); };

  {
    Suite s("metric_axioms", 1e-10);
    const auto count = scaled(100'000, quick);
    for (std::int64_t i = 0; i < count; ++i) {
      const int n = 2 + static_cast<int>(i % 3);
      const Pointd x = random_point(n);
      const Pointd y = random_point(n);
      const Pointd z = random_point(n);
      const double dxy = poincare_distance(x, y);
      const double sym = std::abs(dxy - poincare_distance(y, x));
      const double ident = poincare_distance(x, x);
      const double tri = poincare_distance(x, z) - dxy - poincare_distance(y, z);
      s.record(std::max({sym, ident, tri, 0.0}));
    }
    report.suites.push_back(s.finish());
  }

  {
    Suite s("line_element", 1e-8);
    const auto count = scaled(1'000, quick);
    for (std::int64_t i = 0; i < count; ++i) {
      const Pointd x = random_point(2 + static_cast<int>(i % 3));
      const Pointd origin = Pointd::origin(x.dim());
      s.record(std::abs(poincare_distance(origin, x) - line_element_length(x.norm())));
    }
    report.suites.push_back(s.finish());
  }

  {
    Suite s("psi_roundtrip", 1e-12);
    const auto count = scaled(100'000, quick);
    for (std::int64_t i = 0; i < count; ++i) {
      const Pointd x = random_point(2 + static_cast<int>(i % 3));
      const Eigen::VectorXd there = psi_coords<double>(x.coords(), conv);
      const Eigen::VectorXd back = psi_inv_coords<double>(there, conv);
      const Eigen::VectorXd other = psi_coords<double>(psi_inv_coords<double>(x.coords(), conv), conv);
      s.record(std::max((back - x.coords()).norm(), (other - x.coords()).norm()));
    }
    report.suites.push_back(s.finish());
  }

  {
    Suite s("chord_collinearity", 1e-9);
    const auto count = scaled(1'000, quick);
    for (std::int64_t i = 0; i < count; ++i) {
      const int n = 2 + static_cast<int>(i % 3);
      const Pointd a = random_point(n);
      const Pointd b = random_point(n);
      s.record(chord_residual(a, b, 20, conv));
    }
    report.suites.push_back(s.finish());
  }

  {
    Suite s("geodesic_parametrization", 1e-8);
    const auto count = scaled(1'000, quick);
    for (std::int64_t i = 0; i < count; ++i) {
      const int n = 2 + static_cast<int>(i % 3);
      const Geodesic<double> g(random_point(n), random_point(n));
      for (double t : {0.25, 0.5, 0.8}) {
        const Pointd p = geodesic_point(g, t);
        const double da = poincare_distance(g.a(), p);
        const double db = poincare_distance(p, g.b());
        s.record(std::max(std::abs(da - t * g.length()), std::abs(da + db - g.length())));
      }
    }
    report.suites.push_back(s.finish());
  }

  {
    Suite agree("conjugation_vs_oracle", 1e-6);
    Suite minimal("minimality", 1e-8);
    Suite lipschitz("lipschitz", 1e-12);
    Suite angle("foot_angle", 1e-6);
    Suite idem("idempotence", 1e-10);
    const auto samples = scaled(1'000, quick);
    const auto probes = scaled(10'000, quick);
    const auto pairs = scaled(100'000, quick);
    for (const auto& [n, m] : kProjectionCases) {
      for (std::int64_t i = 0; i < samples; ++i) {
        const MPlaned plane = sample_haar<double>(n, m, rng);
        const Pointd x = random_point(n);
        const Pointd foot = hyp_project(plane, x, conv);
        const Pointd oracle = oracle_project(plane, x, 1e-10);
        agree.record(poincare_distance(foot, oracle));

        const double best = poincare_distance(x, foot);
        double violation = 0.0;
        for (std::int64_t k = 0; k < probes; ++k) {
          const Eigen::VectorXd u = random_ball_coords<double>(m, 0.99, rng);
          const double dq = poincare_distance_coords<double>(x.coords(), plane.basis() * u);
          violation = std::max(violation, best - dq);
        }
        minimal.record(violation);

        if ((x.coords() - euclid_project(plane, x.coords())).norm() > 1e-9) {
          angle.record(std::abs(plane_angle_at(plane, foot, x) - std::numbers::pi / 2));
        }
        idem.record((hyp_project(plane, foot, conv).coords() - foot.coords()).norm());
      }
      for (std::int64_t i = 0; i < pairs; ++i) {
        const MPlaned plane = sample_haar<double>(n, m, rng);
        const Pointd x = random_point(n);
        const Pointd y = random_point(n);
        const double before = poincare_distance(x, y);
        const double after = poincare_distance(hyp_project(plane, x, conv), hyp_project(plane, y, conv));
        lipschitz.record(std::max(0.0, after - before));
      }
    }
    report.suites.push_back(agree.finish());
    report.suites.push_back(minimal.finish());
    report.suites.push_back(lipschitz.finish());
    report.suites.push_back(angle.finish());
    report.suites.push_back(idem.finish());
  }
  return report;
}

bool VerifyReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
}

std::vector<std::string> VerifyReport::failing() const {
  std::vector<std::string> out;
  for (const auto& s : suites) {
    if (!s.passed) out.push_back(s.name);
  }
  return out;
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j;
  j["passed"] = passed();
  j["failing"] = failing();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : suites) {
    arr.push_back({{"name", s.name},
                   {"passed", s.passed},
                   {"max_residual", s.max_residual},
                   {"threshold", s.threshold},
                   {"samples", s.samples},
                   {"seconds", s.seconds}});
  }
  j["suites"] = std::move(arr);
  return j;
}

std::string VerifyReport::to_text() const {
  std::ostringstream out;
  for (const auto& s : suites) {
    out << (s.passed ? "PASS " : "FAIL ") << s.name << "  max_residual=" << s.max_residual
        << "  threshold=" << s.threshold << "  samples=" << s.samples << '\n';
  }
  out << (passed() ? "all suites passed" : "verification FAILED") << '\n';
  return out.str();
}

}  // namespace hypproj
