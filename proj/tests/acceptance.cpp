// Acceptance criteria 1-9. Usage: acceptance [criterion ...] (default: all).
// Prints one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hypproj/experiments.hpp"
#include "hypproj/fractals.hpp"
#include "hypproj/projection.hpp"
#include "hypproj/sampling.hpp"
#include "hypproj/verify.hpp"
#include "oracles.hpp"

using namespace hypproj;

namespace {

const std::vector<std::pair<int, int>> kCases = {{2, 1}, {3, 1}, {3, 2}, {4, 2}};
constexpr std::uint64_t kSeed = 424242;

struct Outcome {
  bool passed;
  std::string detail;
};

class Stopwatch {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// The (x, V) samples shared by criteria 1 and 2.
struct Sample {
  MPlaned plane;
  Pointd x;
};

std::vector<Sample> samples_for(int n, int m) {
  std::mt19937_64 rng(task_seed(kSeed, static_cast<std::uint64_t>(10 * n + m)));
  std::vector<Sample> out;
  for (int i = 0; i < 1000; ++i) {
    MPlaned v = sample_haar(n, m, rng);
    out.push_back({std::move(v), random_ball_point(n, 0.9, rng)});
  }
  return out;
}

Outcome conjugation_identity() {
  const Stopwatch clock;
  double worst = 0.0;
  for (auto [n, m] : kCases) {
    for (const Sample& s : samples_for(n, m)) {
      const Pointd q = hyp_project(s.plane, s.x);
      const Pointd o = oracle_project(s.plane, s.x, 1e-10);
      worst = std::max(worst, poincare_distance(q, o));
    }
  }
  const double t = clock.seconds();
  return {worst < 1e-6 && t < 60.0,
          "max d(hyp_project, oracle) = " + fmt("%.3g", worst) + " (< 1e-6), " + fmt("%.1f", t) +
              " s single-threaded (< 60 s)"};
}

Outcome minimality_and_orthogonality() {
  double worst_excess = -1e300;
  double worst_angle = 0.0;
  for (auto [n, m] : kCases) {
    std::mt19937_64 probe_rng(task_seed(kSeed + 1, static_cast<std::uint64_t>(10 * n + m)));
    for (const Sample& s : samples_for(n, m)) {
      const Pointd q = hyp_project(s.plane, s.x);
      const double dq = poincare_distance(s.x, q);
      for (int k = 0; k < 10000; ++k) {
        const Pointd z(s.plane.basis() * random_ball_coords(m, 0.999, probe_rng));
        worst_excess = std::max(worst_excess, dq - poincare_distance(s.x, z));
      }
      worst_angle = std::max(worst_angle, std::abs(foot_angle(s.plane, s.x) - std::numbers::pi / 2));
    }
  }
  return {worst_excess <= 1e-8 && worst_angle < 1e-6,
          "max d(x,foot) - d(x,probe) = " + fmt("%.3g", worst_excess) + " (<= 1e-8) over 1e4 probes per sample, " +
              "max |foot_angle - pi/2| = " + fmt("%.3g", worst_angle) + " (< 1e-6)"};
}

Outcome lipschitz() {
  long violations = 0;
  double worst = -1e300;
  for (auto [n, m] : kCases) {
    std::mt19937_64 rng(task_seed(kSeed + 2, static_cast<std::uint64_t>(10 * n + m)));
    for (int i = 0; i < 100000; ++i) {
      const MPlaned v = sample_haar(n, m, rng);
      const Pointd x = random_ball_point(n, 0.99, rng);
      const Pointd y = random_ball_point(n, 0.99, rng);
      const double excess =
          poincare_distance(hyp_project(v, x), hyp_project(v, y)) - poincare_distance(x, y);
      worst = std::max(worst, excess);
      if (excess > 1e-12) ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations beyond 1e-12 in 4 x 1e5 pairs (max excess " +
                               fmt("%.3g", worst) + ")"};
}

Outcome model_correctness() {
  std::mt19937_64 rng(kSeed + 3);
  double line_err = 0.0;
  double chord_err = 0.0;
  double roundtrip_err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + i % 3;
    const Pointd x = random_ball_point(n, 0.95, rng);
    line_err = std::max(line_err, std::abs(poincare_distance(Pointd::origin(n), x) - oracle::diameter_length(x.norm())));
    line_err = std::max(line_err, std::abs(poincare_distance(Pointd::origin(n), x) - 2 * std::atanh(x.norm())));

    const Pointd y = random_ball_point(n, 0.95, rng);
    // Two independent constructions of the geodesic: gyro-translation and the orthogonal circle.
    chord_err = std::max(chord_err, chord_residual(x, y, 16, PsiConvention::Standard));
    const oracle::CircleArc arc(x.coords(), y.coords());
    const Eigen::VectorXd ka = psi_coords<double>(x.coords());
    const Eigen::VectorXd dir = (psi_coords<double>(y.coords()) - ka).normalized();
    for (int k = 1; k < 16; ++k) {
      const Eigen::VectorXd w = psi_coords<double>(arc.at(k / 16.0)) - ka;
      chord_err = std::max(chord_err, (w - w.dot(dir) * dir).norm());
    }

    const Pointd z = random_ball_point(n, 0.999, rng);
    roundtrip_err = std::max(roundtrip_err, (psi_inv(psi(z)).coords() - z.coords()).norm());
    const Pointd k(random_ball_coords(n, 0.999, rng), Model::Klein);
    roundtrip_err = std::max(roundtrip_err, (psi(psi_inv(k)).coords() - k.coords()).norm());
  }

  VerifyOptions printed;
  printed.quick = true;
  printed.convention = PsiConvention::Printed;
  const auto failing = run_verify(printed).failing();
  const bool printed_fails =
      std::find(failing.begin(), failing.end(), "chord_collinearity") != failing.end();

  return {line_err < 1e-8 && chord_err < 1e-9 && roundtrip_err < 1e-12 && printed_fails,
          "line element " + fmt("%.3g", line_err) + " (< 1e-8), collinearity " + fmt("%.3g", chord_err) +
              " (< 1e-9), roundtrip " + fmt("%.3g", roundtrip_err) + " (< 1e-12), printed-Psi run " +
              (printed_fails ? "fails collinearity" : "does NOT fail collinearity")};
}

Outcome marstrand_dimension() {
  MarstrandConfig c;
  c.n = 3;
  c.m = 2;
  c.ifs = cantor_dust(3, 0.25);
  c.depth = 7;
  c.num_planes = 50;
  c.threads = 4;
  const Stopwatch clock;
  const MarstrandResult r = run_marstrand(c);
  const double t = clock.seconds();
  const bool ok = r.dim.median >= 1.35 && r.dim.median <= 1.60 && t < 300.0;
  return {ok, "median dim " + fmt("%.4f", r.dim.median) + " in [1.35, 1.60] (IQR " + fmt("%.3f", r.dim.q1) + "-" +
                  fmt("%.3f", r.dim.q3) + ", truth " + fmt("%.2f", r.truth) + "), " + fmt("%.1f", t) +
                  " s on 4 threads (< 300 s)"};
}

Outcome marstrand_covering() {
  MarstrandConfig c;
  c.n = 2;
  c.m = 1;
  c.ifs = cantor_dust(2, 1.0 / 3.0);
  c.depth = 8;
  c.num_planes = 50;
  c.cover_delta = std::pow(2.0, -7);
  c.threads = thread_count_from_env();
  const MarstrandResult r = run_marstrand(c);
  int above = 0;
  double lowest = 1e300;
  for (const auto& rec : r.records) {
    if (rec.cover_est > 0.05) ++above;
    lowest = std::min(lowest, rec.cover_est);
  }
  const double frac = static_cast<double>(above) / c.num_planes;
  return {frac >= 0.9, fmt("%.0f%%", 100 * frac) + " of 50 lines have covering measure > 0.05 at delta 2^-7 (>= 90%); min " +
                           fmt("%.3f", lowest) + ", median " + fmt("%.3f", r.cover.median)};
}

Outcome interior() {
  InteriorConfig c;
  c.n = 3;
  c.m = 1;
  c.ifs = cantor_dust(3, 0.42);
  c.depth = 6;
  c.num_planes = 50;
  c.threads = thread_count_from_env();
  const InteriorResult r = run_interior(c);
  return {r.precondition_met && r.finest_delta == std::pow(2.0, -5) && r.fraction_full >= 0.9,
          fmt("s = %.3f > 2m, ", r.source_dim) + fmt("%.0f%%", 100 * r.fraction_full) +
              " of 50 lines have occupancy >= 0.9 at delta 2^-5 (>= 90%)"};
}

Outcome besicovitch_federer() {
  BesFedConfig c;
  c.lambda = 0.25;
  c.first_generation = 3;
  c.generations = 7;
  c.num_planes = 40;
  c.threads = thread_count_from_env();
  const Stopwatch clock;
  const BesFedResult r = run_besfed(c);
  const double t = clock.seconds();
  std::vector<double> ratios;
  double control_min = 1e300;
  for (const auto& p : r.planes) {
    ratios.push_back(p.fractal_ratio);
    if (p.segment_angle < 80.0 * std::numbers::pi / 180.0) control_min = std::min(control_min, p.segment_ratio);
  }
  const bool fractal_ok = r.fraction_decayed >= 0.9;
  const bool control_ok = r.control_checked > 0 && r.control_held == r.control_checked;
  return {fractal_ok && control_ok && t < 180.0,
          "four-corner: " + fmt("%.0f%%", 100 * r.fraction_decayed) + " of 40 lines with ratio k7/k3 < 0.5 (>= 90%; median " +
              fmt("%.3f", quartiles(ratios).median) + "); segment: " + std::to_string(r.control_held) + "/" +
              std::to_string(r.control_checked) + " lines below 80 deg with ratio >= 0.8 (min " +
              fmt("%.3f", control_min) + "); " + fmt("%.1f", t) + " s (< 180 s)"};
}

Outcome determinism() {
  auto sweeps = [](int threads) {
    std::string out;
    MarstrandConfig mc;
    mc.ifs = cantor_dust(3, 0.25);
    mc.depth = 5;
    mc.num_planes = 16;
    mc.seed = 7;
    mc.threads = threads;
    out += records_to_csv(run_marstrand(mc).records, mc.m);
    BesFedConfig bc;
    bc.generations = 6;
    bc.num_planes = 16;
    bc.seed = 7;
    bc.threads = threads;
    const BesFedResult b = run_besfed(bc);
    out += records_to_csv(b.fractal_rows, bc.m) + records_to_csv(b.control_rows, bc.m);
    InteriorConfig ic;
    ic.ifs = cantor_dust(3, 0.42);
    ic.depth = 5;
    ic.num_planes = 16;
    ic.seed = 7;
    ic.threads = threads;
    out += records_to_csv(run_interior(ic).records, ic.m);
    return out;
  };
  const std::string a = sweeps(1);
  const std::string b = sweeps(8);
  const std::string c = sweeps(1);
  const bool ok = a == b && a == c;
  return {ok, std::string("marstrand, besfed and interior CSV ") + (ok ? "byte-identical" : "DIFFER") +
                  " across thread counts 1 and 8 and a repeated run (" + std::to_string(a.size()) + " bytes)"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "conjugation identity", conjugation_identity},
      {2, "minimality and orthogonality", minimality_and_orthogonality},
      {3, "1-Lipschitz", lipschitz},
      {4, "model correctness", model_correctness},
      {5, "projected dimension (cantor_dust(3,1/4), m=2)", marstrand_dimension},
      {6, "projected covering (cantor_dust(2,1/3), m=1)", marstrand_covering},
      {7, "projected interior (cantor_dust(3,0.42), m=1)", interior},
      {8, "covering decay (four_corner(1/4) vs segment)", besicovitch_federer},
      {9, "determinism", determinism},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    const Stopwatch clock;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("[%s] AC%d %s: %s [%.1f s]\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                clock.seconds());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
