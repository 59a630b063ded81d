#include "hypproj/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "hypproj/errors.hpp"
#include "hypproj/projection.hpp"
#include "hypproj/sampling.hpp"

namespace hypproj {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double angle_to_plane(const MPlaned& plane, const Eigen::VectorXd& direction) {
  const Eigen::VectorXd along = euclid_project(plane, direction);
  return std::atan2((direction - along).norm(), along.norm());
}

struct Source {
  Eigen::MatrixXd points;  // embedded, n x N
  double dimension = 0.0;
  std::string description;
};

Source make_source(const std::optional<Ifs>& ifs, int n, int depth, double radius) {
  Source src;
  if (ifs) {
    if (ifs->dim() > n) throw UsageError("IFS dimension exceeds the ambient dimension n");
    PointCloud cloud = generate_depth(*ifs, depth);
    cloud.points = pad_to_dim(cloud.points, n);
    src.points = embed_in_ball(cloud, radius).points;
    src.dimension = similarity_dimension(*ifs);
    src.description = "ifs depth " + std::to_string(depth);
  } else {
    src.points = embed_in_ball(segment(n), radius).points;
    src.dimension = 1.0;
    src.description = "segment control";
  }
  return src;
}

void require_plane_shape(int n, int m) {
  if (n < 2 || m < 1 || m >= n) {
    throw UsageError("need 1 <= m < n, got n=" + std::to_string(n) + " m=" + std::to_string(m));
  }
}

MPlaned plane_for(std::uint64_t master, int index, int n, int m, std::uint64_t& seed_out) {
  seed_out = task_seed(master, static_cast<std::uint64_t>(index));
  std::mt19937_64 rng(seed_out);
  return sample_haar<double>(n, m, rng);
}

nlohmann::json quartile_json(const Quartiles& q) {
  return {{"q1", q.q1}, {"median", q.median}, {"q3", q.q3}};
}

}  // namespace

std::string csv_header(int m) {
  std::string h = "plane_id,seed,n,m,dim_est,r2,cover_delta,cover_est,occ_est";
  for (int i = 1; i <= m; ++i) h += ",pa_" + std::to_string(i);
  return h;
}

std::string records_to_csv(std::vector<PlaneRecord> records, int m) {
  std::stable_sort(records.begin(), records.end(), [](const PlaneRecord& a, const PlaneRecord& b) {
    if (a.plane_id != b.plane_id) return a.plane_id < b.plane_id;
    return a.cover_delta > b.cover_delta;
  });
  std::string out = csv_header(m) + "\n";
  for (const auto& r : records) {
    out += std::to_string(r.plane_id) + ',' + std::to_string(r.seed) + ',' + std::to_string(r.n) +
           ',' + std::to_string(r.m) + ',' + format_real(r.dim_est) + ',' + format_real(r.r2) +
           ',' + format_real(r.cover_delta) + ',' + format_real(r.cover_est) + ',' +
           format_real(r.occ_est);
    for (Eigen::Index i = 0; i < r.angles.size(); ++i) out += ',' + format_real(r.angles[i]);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << contents;
  if (!out) throw UsageError("write failed: " + path);
}

Eigen::MatrixXd project_cloud(const MPlaned& plane, const Eigen::MatrixXd& cloud) {
  return hyp_project_coords<double>(plane, cloud);
}

Window central_window(const Eigen::MatrixXd& plane_coords, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw UsageError("central_window: fraction must lie in (0, 1]");
  }
  const Eigen::VectorXd lo = plane_coords.rowwise().minCoeff();
  const Eigen::VectorXd hi = plane_coords.rowwise().maxCoeff();
  const Eigen::VectorXd center = 0.5 * (lo + hi);
  const Eigen::VectorXd half = 0.5 * fraction * (hi - lo);
  return Window{center - half, center + half};
}

Eigen::MatrixXd pad_to_dim(const Eigen::MatrixXd& points, int n) {
  if (points.rows() > n) throw UsageError("pad_to_dim: cloud dimension exceeds n");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, points.cols());
  out.topRows(points.rows()) = points;
  return out;
}

Quartiles quartiles(std::vector<double> values) {
  values.erase(std::remove_if(values.begin(), values.end(),
                              [](double v) { return !std::isfinite(v); }),
               values.end());
  if (values.empty()) return {kNaN, kNaN, kNaN};
  std::sort(values.begin(), values.end());
  auto at = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const std::size_t j = std::min(i + 1, values.size() - 1);
    return values[i] + (pos - static_cast<double>(i)) * (values[j] - values[i]);
  };
  return {at(0.25), at(0.5), at(0.75)};
}

// ---------------------------------------------------------------------------
// Marstrand sweep

MarstrandResult run_marstrand(const MarstrandConfig& config) {
  require_plane_shape(config.n, config.m);
  if (config.num_planes < 1) throw UsageError("num_planes must be >= 1");
  const Source src = make_source(config.ifs, config.n, config.depth, config.radius);

  MarstrandResult result;
  result.source_dim = src.dimension;
  result.truth = std::min(static_cast<double>(config.m), src.dimension);
  result.records.resize(config.num_planes);
  std::vector<std::vector<double>> trends(config.num_planes);
  const MPlaned reference = MPlaned::coordinate(config.n, config.m);

  parallel_for(config.num_planes, config.threads, [&](int i) {
    PlaneRecord& rec = result.records[i];
    const MPlaned plane = plane_for(config.seed, i, config.n, config.m, rec.seed);
    rec.plane_id = i;
    rec.n = config.n;
    rec.m = config.m;
    rec.angles = principal_angles(plane, reference);

    const Eigen::MatrixXd u = project_cloud(plane, src.points);
    std::vector<std::int64_t> counts;
    for (double delta : config.deltas) {
      counts.push_back(config.box.offset_averaging ? offset_averaged_box_count(u, delta)
                                                   : box_count(u, delta));
      trends[i].push_back(static_cast<double>(counts.back()) * std::pow(delta, config.m));
    }
    try {
      const DimensionEstimate est = fit_box_dimension(config.deltas, counts, u.cols(), config.box.filter);
      rec.dim_est = est.slope;
      rec.r2 = est.r_squared;
    } catch (const NumericalError&) {
      rec.dim_est = kNaN;
      rec.r2 = kNaN;
    }
    rec.cover_delta = config.cover_delta;
    rec.cover_est = covering_measure(u, config.m, config.cover_delta);
    try {
      rec.occ_est = interior_occupancy(u, config.occ_delta, central_window(u, config.window_fraction));
    } catch (const UsageError&) {
      rec.occ_est = kNaN;
    }
  });

  std::vector<double> dims;
  std::vector<double> covers;
  for (const auto& r : result.records) {
    dims.push_back(r.dim_est);
    covers.push_back(r.cover_est);
    if (!std::isfinite(r.dim_est)) ++result.failed_planes;
  }
  if (result.failed_planes == config.num_planes) {
    throw NumericalError("marstrand: no plane had enough usable scales for a dimension fit");
  }
  result.dim = quartiles(dims);
  result.cover = quartiles(covers);
  for (std::size_t d = 0; d < config.deltas.size(); ++d) {
    std::vector<double> column;
    for (const auto& t : trends) column.push_back(t[d]);
    result.cover_trend.push_back(quartiles(column).median);
  }
  return result;
}

nlohmann::json MarstrandResult::summary() const {
  nlohmann::json j;
  j["experiment"] = "marstrand";
  j["planes"] = records.size();
  j["source_dimension"] = source_dim;
  j["ground_truth"] = truth;
  j["dimension_estimate"] = quartile_json(dim);
  j["covering_measure"] = quartile_json(cover);
  j["covering_trend_median"] = cover_trend;
  j["failed_planes"] = failed_planes;
  j["note"] = kCalibrationNote;
  return j;
}

// ---------------------------------------------------------------------------
// Besicovitch-Federer contrast

BesFedResult run_besfed(const BesFedConfig& config) {
  require_plane_shape(config.n, config.m);
  if (config.first_generation < 1 || config.generations < config.first_generation ||
      config.generations > 8) {
    throw UsageError("besfed: need 1 <= first generation <= generations <= 8");
  }
  if (config.num_planes < 1) throw UsageError("num_planes must be >= 1");

  const Ifs ifs = four_corner(config.lambda, config.n);
  // One embedding for every generation, taken from the deepest one.
  const PointCloud deepest = embed_in_ball(generate_depth(ifs, config.generations), config.radius);
  std::vector<Eigen::MatrixXd> clouds;
  std::vector<double> deltas;
  for (int k = config.first_generation; k <= config.generations; ++k) {
    const PointCloud raw = generate_depth(ifs, k);
    clouds.push_back(deepest.meta.embed_scale *
                     (raw.points.colwise() - deepest.meta.embed_center));
    deltas.push_back(std::pow(config.lambda, k));
  }
  int control_points = config.segment_points;
  if (control_points <= 0) {
    // The unit-length control has spacing 1 / (N - 1).
    control_points = std::max(10'000, static_cast<int>(std::ceil(2.0 / deltas.back())) + 1);
  }
  const Eigen::MatrixXd control = embed_in_ball(segment(config.n, control_points), config.radius).points;
  const Eigen::VectorXd control_dir = Eigen::VectorXd::Unit(config.n, 0);
  const MPlaned reference = MPlaned::coordinate(config.n, config.m);

  BesFedResult result;
  result.config = config;
  result.planes.resize(config.num_planes);
  parallel_for(config.num_planes, config.threads, [&](int i) {
    BesFedPlane& p = result.planes[i];
    const MPlaned plane = plane_for(config.seed, i, config.n, config.m, p.seed);
    p.plane_id = i;
    p.angles = principal_angles(plane, reference);
    p.segment_angle = angle_to_plane(plane, control_dir);
    const Eigen::MatrixXd u_control = project_cloud(plane, control);
    for (std::size_t g = 0; g < clouds.size(); ++g) {
      p.fractal_cover.push_back(covering_measure(project_cloud(plane, clouds[g]), config.m, deltas[g]));
      p.segment_cover.push_back(covering_measure(u_control, config.m, deltas[g]));
    }
    p.fractal_ratio = p.fractal_cover.back() / p.fractal_cover.front();
    p.segment_ratio = p.segment_cover.back() / p.segment_cover.front();
  });

  int decayed = 0;
  const double limit = 80.0 * std::numbers::pi / 180.0;
  for (const auto& p : result.planes) {
    if (p.fractal_ratio < 0.5) ++decayed;
    if (p.segment_angle < limit) {
      ++result.control_checked;
      if (p.segment_ratio >= 0.8) ++result.control_held;
    }
    for (std::size_t g = 0; g < deltas.size(); ++g) {
      PlaneRecord base;
      base.plane_id = p.plane_id;
      base.seed = p.seed;
      base.n = config.n;
      base.m = config.m;
      base.dim_est = kNaN;
      base.r2 = kNaN;
      base.occ_est = kNaN;
      base.cover_delta = deltas[g];
      base.angles = p.angles;
      base.cover_est = p.fractal_cover[g];
      result.fractal_rows.push_back(base);
      base.cover_est = p.segment_cover[g];
      result.control_rows.push_back(base);
    }
  }
  result.fraction_decayed = static_cast<double>(decayed) / config.num_planes;
  return result;
}

nlohmann::json BesFedResult::summary() const {
  nlohmann::json j;
  j["experiment"] = "besfed";
  j["lambda"] = config.lambda;
  j["generations"] = {config.first_generation, config.generations};
  j["planes"] = planes.size();
  j["fraction_decay_below_0.5"] = fraction_decayed;
  j["control_planes_below_80deg"] = control_checked;
  j["control_planes_ratio_at_least_0.8"] = control_held;
  nlohmann::json per_plane = nlohmann::json::array();
  std::vector<double> ratios;
  for (const auto& p : planes) {
    ratios.push_back(p.fractal_ratio);
    per_plane.push_back({{"plane_id", p.plane_id},
                         {"fractal_ratio", p.fractal_ratio},
                         {"segment_ratio", p.segment_ratio},
                         {"segment_angle_deg", p.segment_angle * 180.0 / std::numbers::pi}});
  }
  j["fractal_ratio"] = quartile_json(quartiles(ratios));
  j["per_plane"] = std::move(per_plane);
  j["note"] = kCalibrationNote;
  return j;
}

// ---------------------------------------------------------------------------
// Interior occupancy

InteriorResult run_interior(const InteriorConfig& config) {
  require_plane_shape(config.n, config.m);
  if (config.num_planes < 1) throw UsageError("num_planes must be >= 1");
  if (config.deltas.empty()) throw UsageError("interior: need at least one delta");
  const Source src = make_source(config.ifs, config.n, config.depth, config.radius);
  const MPlaned reference = MPlaned::coordinate(config.n, config.m);

  InteriorResult result;
  result.source_dim = src.dimension;
  result.precondition_met = src.dimension > 2.0 * config.m;
  result.finest_delta = *std::min_element(config.deltas.begin(), config.deltas.end());

  std::vector<std::vector<PlaneRecord>> rows(config.num_planes);
  parallel_for(config.num_planes, config.threads, [&](int i) {
    std::uint64_t seed = 0;
    const MPlaned plane = plane_for(config.seed, i, config.n, config.m, seed);
    const Eigen::VectorXd angles = principal_angles(plane, reference);
    const Eigen::MatrixXd u = project_cloud(plane, src.points);
    const Window window = central_window(u, config.window_fraction);
    for (double delta : config.deltas) {
      PlaneRecord rec;
      rec.plane_id = i;
      rec.seed = seed;
      rec.n = config.n;
      rec.m = config.m;
      rec.dim_est = kNaN;
      rec.r2 = kNaN;
      rec.cover_delta = delta;
      rec.cover_est = covering_measure(u, config.m, delta);
      try {
        rec.occ_est = interior_occupancy(u, delta, window);
      } catch (const UsageError&) {
        rec.occ_est = kNaN;
      }
      rec.angles = angles;
      rows[i].push_back(rec);
    }
  });

  int full = 0;
  for (auto& plane_rows : rows) {
    for (auto& rec : plane_rows) {
      if (rec.cover_delta == result.finest_delta && rec.occ_est >= 0.9) ++full;
      result.records.push_back(std::move(rec));
    }
  }
  result.fraction_full = static_cast<double>(full) / config.num_planes;
  return result;
}

nlohmann::json InteriorResult::summary() const {
  nlohmann::json j;
  j["experiment"] = "interior";
  j["source_dimension"] = source_dim;
  j["precondition_dim_gt_2m"] = precondition_met;
  j["finest_delta"] = finest_delta;
  j["fraction_occupancy_at_least_0.9"] = fraction_full;
  j["note"] = kCalibrationNote;
  return j;
}

}  // namespace hypproj
