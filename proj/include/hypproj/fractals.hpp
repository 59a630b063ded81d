#pragma once

// Self-similar test sets: similarity maps, iterated function systems, point
// clouds, and the built-in sets used by the experiments.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hypproj {

/// x -> ratio * rotation * x + translation
class Similarity {
public:
  Similarity(double ratio, Eigen::MatrixXd rotation, Eigen::VectorXd translation);

  double ratio() const { return ratio_; }
  const Eigen::MatrixXd& rotation() const { return rotation_; }
  const Eigen::VectorXd& translation() const { return translation_; }
  int dim() const { return static_cast<int>(translation_.size()); }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// Applies the map to every column.
  Eigen::MatrixXd apply_all(const Eigen::MatrixXd& points) const;
  Eigen::VectorXd fixed_point() const;

private:
  double ratio_;
  Eigen::MatrixXd rotation_;
  Eigen::VectorXd translation_;
};

class Ifs {
public:
  /// `open_set_condition` is asserted by the caller, not verified.
  Ifs(std::vector<Similarity> maps, bool open_set_condition);

  const std::vector<Similarity>& maps() const { return maps_; }
  bool open_set_condition() const { return osc_; }
  int dim() const { return maps_.front().dim(); }
  std::size_t size() const { return maps_.size(); }

private:
  std::vector<Similarity> maps_;
  bool osc_;
};

struct CloudMetadata {
  std::string source;
  int depth = 0;             ///< 0 when not generated by composition depth
  std::int64_t samples = 0;  ///< chaos-game sample count, 0 otherwise
  std::optional<std::uint64_t> seed;
  std::string base_point;    ///< how the composition base point was chosen
  bool embedded = false;
  Eigen::VectorXd embed_center;  ///< x -> embed_scale * (x - embed_center)
  double embed_scale = 1.0;
};

/// Points stored one per column (n x N).
struct PointCloud {
  Eigen::MatrixXd points;
  CloudMetadata meta;

  int dim() const { return static_cast<int>(points.rows()); }
  Eigen::Index size() const { return points.cols(); }
};

/// Unique s > 0 with sum_i ratio_i^s = 1, by bisection to 1e-12.
double similarity_dimension(const Ifs& ifs);

/// Upper bound on |maps|^depth accepted by generate_depth.
inline constexpr std::int64_t kMaxCompositions = 10'000'000;

/// One point per length-k composition f_{i1} o ... o f_{ik}, applied to the
/// fixed point of the first map.
PointCloud generate_depth(const Ifs& ifs, int depth);

/// N points of the random orbit started at the first map's fixed point, after
/// a 100-step burn-in. Map indices are drawn uniformly.
PointCloud chaos_game(const Ifs& ifs, std::int64_t count, std::uint64_t seed);

inline constexpr double kDefaultEmbedRadius = 0.5;

/// Moves the bounding-box center to the origin and scales so the box (and so
/// the cloud) fits in the Euclidean ball of the given radius.
PointCloud embed_in_ball(const PointCloud& cloud, double radius = kDefaultEmbedRadius);

/// 2^n maps of ratio lambda fixing the corners of [0,1]^n.
Ifs cantor_dust(int n, double lambda);

/// Four maps of ratio lambda at the corners of [0,1]^2, acting on the
/// e1 e2-plane of R^n and contracting the remaining coordinates to 0.
Ifs four_corner(double lambda, int n = 2);

/// `count` evenly spaced points on the diameter segment [-half_length, half_length] e1.
PointCloud segment(int n, int count = 10'000, double half_length = 0.5);

/// True when the images of the unit cube under the maps have pairwise
/// disjoint bounding boxes (the built-ins keep the attractor in [0,1]^n).
bool first_generation_separated(const Ifs& ifs);

// Interchange formats.

/// {"n": int, "maps": [{"ratio", "rotation" (row-major n x n), "translation"}], "osc": bool}
Ifs ifs_from_json(const std::string& text);
std::string ifs_to_json(const Ifs& ifs);
Ifs load_ifs(const std::string& path);

/// Parses "cantor_dust:<n>:<lambda>" or "four_corner:<lambda>[:<n>]".
Ifs builtin_ifs(const std::string& spec);

/// One point per row, comma separated, 17 significant digits, no header.
void write_cloud_csv(std::ostream& out, const PointCloud& cloud);
PointCloud read_cloud_csv(std::istream& in);

/// Locale-independent formatting with 17 significant digits.
std::string format_real(double value);

}  // namespace hypproj
