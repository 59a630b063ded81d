#pragma once

// Plane sweeps over G(n, m): projections of fractal clouds and the summary
// statistics behind the marstrand, besfed and interior subcommands.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "hypproj/dimension.hpp"
#include "hypproj/fractals.hpp"
#include "hypproj/grassmann.hpp"

namespace hypproj {

/// One CSV row. Fields that an experiment does not measure hold NaN.
/// `cover_delta` is the scale at which both cover_est and occ_est were taken.
struct PlaneRecord {
  int plane_id = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int m = 0;
  double dim_est = 0.0;
  double r2 = 0.0;
  double cover_delta = 0.0;
  double cover_est = 0.0;
  double occ_est = 0.0;
  Eigen::VectorXd angles;  ///< principal angles to span(e_1..e_m), largest first
};

/// plane_id,seed,n,m,dim_est,r2,cover_delta,cover_est,occ_est,pa_1..pa_m
std::string csv_header(int m);
/// Rows sorted by (plane_id, cover_delta descending) before writing.
std::string records_to_csv(std::vector<PlaneRecord> records, int m);
void write_text_file(const std::string& path, const std::string& contents);

/// Projected cloud in intrinsic plane coordinates (m x N).
Eigen::MatrixXd project_cloud(const MPlaned& plane, const Eigen::MatrixXd& cloud);

/// Central window: the bounding box of the projected cloud shrunk about its
/// center by `fraction` in every coordinate.
Window central_window(const Eigen::MatrixXd& plane_coords, double fraction);

/// Pads an IFS cloud living in R^k (k <= n) with zero coordinates.
Eigen::MatrixXd pad_to_dim(const Eigen::MatrixXd& points, int n);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};
/// Linear-interpolation quartiles of the finite entries.
Quartiles quartiles(std::vector<double> values);

struct MarstrandConfig {
  int n = 3;
  int m = 2;
  std::optional<Ifs> ifs;  ///< empty: the segment control
  int depth = 7;
  int num_planes = 50;
  std::uint64_t seed = 1;
  std::vector<double> deltas = geometric_scales(2.0, 2, 10);
  double cover_delta = 1.0 / 128.0;
  double occ_delta = 1.0 / 32.0;
  double window_fraction = 0.5;
  double radius = 0.5;
  BoxDimensionOptions box;
  int threads = 1;
};

struct MarstrandResult {
  std::vector<PlaneRecord> records;
  double truth = 0.0;  ///< min(m, similarity dimension)
  double source_dim = 0.0;
  Quartiles dim;
  Quartiles cover;
  int failed_planes = 0;
  /// Covering measure at each requested delta, median over planes.
  std::vector<double> cover_trend;
  nlohmann::json summary() const;
};

MarstrandResult run_marstrand(const MarstrandConfig& config);

struct BesFedConfig {
  int n = 2;
  int m = 1;
  double lambda = 0.25;
  int first_generation = 3;
  int generations = 7;
  int num_planes = 40;
  std::uint64_t seed = 1;
  /// 0: enough points that the sample spacing is half the finest delta
  /// (at least 10^4), so the control resolves every measured scale.
  int segment_points = 0;
  double radius = 0.5;
  int threads = 1;
};

struct BesFedPlane {
  int plane_id = 0;
  std::uint64_t seed = 0;
  std::vector<double> fractal_cover;  ///< per generation first..last
  std::vector<double> segment_cover;
  double fractal_ratio = 0.0;  ///< last / first generation
  double segment_ratio = 0.0;
  double segment_angle = 0.0;  ///< angle between the plane and the segment direction
  Eigen::VectorXd angles;
};

struct BesFedResult {
  BesFedConfig config;
  std::vector<BesFedPlane> planes;
  std::vector<PlaneRecord> fractal_rows;
  std::vector<PlaneRecord> control_rows;
  double fraction_decayed = 0.0;  ///< fractal_ratio < 0.5
  int control_checked = 0;        ///< planes with segment_angle < 80 deg
  int control_held = 0;           ///< ... whose segment_ratio >= 0.8
  nlohmann::json summary() const;
};

BesFedResult run_besfed(const BesFedConfig& config);

struct InteriorConfig {
  int n = 3;
  int m = 1;
  std::optional<Ifs> ifs;  ///< empty: the segment control
  int depth = 6;
  int num_planes = 50;
  std::uint64_t seed = 1;
  std::vector<double> deltas = geometric_scales(2.0, 3, 5);
  double window_fraction = 0.5;
  double radius = 0.5;
  int threads = 1;
};

struct InteriorResult {
  std::vector<PlaneRecord> records;  ///< one per (plane, delta)
  double source_dim = 0.0;
  bool precondition_met = false;  ///< source dimension > 2m
  double finest_delta = 0.0;
  double fraction_full = 0.0;  ///< planes with occupancy >= 0.9 at the finest delta
  nlohmann::json summary() const;
};

InteriorResult run_interior(const InteriorConfig& config);

/// Footer attached to every sweep summary.
inline constexpr const char* kCalibrationNote =
    "Sweep thresholds are harness calibrations; the underlying statements are "
    "almost-everywhere results without quantitative rates.";

}  // namespace hypproj
