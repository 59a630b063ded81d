#pragma once

// Grid box counting on point sets in R^m: dimension regression, covering
// pre-measure and interior occupancy.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace hypproj {

/// Points are columns of an m x N matrix.
using PointsRef = Eigen::Ref<const Eigen::MatrixXd>;

struct DimensionEstimate {
  double slope = 0.0;
  double r_squared = 0.0;
  std::vector<double> scales_used;
  std::vector<std::int64_t> counts;
};

/// Scales whose count falls outside [min_count, max_fraction * N] are dropped
/// before regression.
struct ScaleFilter {
  std::int64_t min_count = 8;
  double max_fraction = 0.2;
};

struct BoxDimensionOptions {
  ScaleFilter filter;
  /// Average counts over four fixed grid offsets instead of the anchored grid.
  bool offset_averaging = false;
};

/// Axis-aligned box [lo, hi] in R^m.
struct Window {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

/// Number of occupied cells [k delta, (k+1) delta) of the origin-anchored grid.
/// Coordinates within 1e-9 cells below a grid line are snapped onto it, so
/// points generated exactly on cell boundaries count reproducibly.
std::int64_t box_count(const PointsRef& points, double delta);

/// Same count on the grid shifted by `offset`.
std::int64_t box_count(const PointsRef& points, double delta, const Eigen::VectorXd& offset);

/// Mean count over four fixed grid offsets (the anchored grid plus three
/// shifts along the golden-ratio sequence), rounded to the nearest integer.
std::int64_t offset_averaged_box_count(const PointsRef& points, double delta);

/// Regression on precomputed counts; `n_points` feeds the saturation filter.
DimensionEstimate fit_box_dimension(const std::vector<double>& deltas,
                                    const std::vector<std::int64_t>& counts,
                                    std::int64_t n_points, const ScaleFilter& filter = {});

/// Least-squares slope of log(count) against log(1/delta) over usable scales.
/// Throws NumericalError naming the filtered scales when fewer than 3 remain.
DimensionEstimate box_dimension(const PointsRef& points, const std::vector<double>& deltas,
                                const BoxDimensionOptions& options = {});

/// box_count(points, delta) * delta^m
double covering_measure(const PointsRef& points, int m, double delta);

/// Fraction of the grid cells lying inside `window` that contain a point.
double interior_occupancy(const PointsRef& points, double delta, const Window& window);

/// delta_j = base^-j for j = first..last.
std::vector<double> geometric_scales(double base, int first, int last);

}  // namespace hypproj
