#pragma once

// Property suites behind `hypproj verify`.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypproj/hypgeo.hpp"

namespace hypproj {

struct VerifyOptions {
  bool quick = false;  ///< 10% sample sizes
  PsiConvention convention = PsiConvention::Standard;
  std::uint64_t seed = 20180402;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  double max_residual = 0.0;
  double threshold = 0.0;
  std::int64_t samples = 0;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;

  bool passed() const;
  std::vector<std::string> failing() const;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// (n, m) cases exercised by the projection suites.
inline const std::vector<std::pair<int, int>> kProjectionCases = {{2, 1}, {3, 1}, {3, 2}, {4, 2}};

/// Composite adaptive Simpson integral of the radial line element 2/(1 - r^2)
/// over [0, radius]: the length of a diameter segment.
double line_element_length(double radius, double tol = 1e-13);

/// Largest distance of Psi-images of `samples` points on the geodesic a -> b
/// (constructed by Mobius translation, not through Psi) from the chord
/// through Psi(a) and Psi(b).
double chord_residual(const Pointd& a, const Pointd& b, int samples, PsiConvention convention);

VerifyReport run_verify(const VerifyOptions& options);

}  // namespace hypproj
