#include "hypproj/fractals.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "hypproj/errors.hpp"

namespace hypproj {

Similarity::Similarity(double ratio, Eigen::MatrixXd rotation, Eigen::VectorXd translation)
    : ratio_(ratio), rotation_(std::move(rotation)), translation_(std::move(translation)) {
  if (!(ratio_ > 0.0 && ratio_ < 1.0)) {
    throw UsageError("Similarity: ratio must lie in (0, 1), got " + format_real(ratio_));
  }
  const auto n = translation_.size();
  if (n < 1 || rotation_.rows() != n || rotation_.cols() != n) {
    throw UsageError("Similarity: rotation must be n x n with n = translation size");
  }
  const double dev =
      (rotation_.transpose() * rotation_ - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(dev < 1e-12)) {
    throw UsageError("Similarity: rotation is not orthogonal (deviation " + format_real(dev) + ")");
  }
}

Eigen::VectorXd Similarity::apply(const Eigen::VectorXd& x) const {
  return ratio_ * (rotation_ * x) + translation_;
}

Eigen::MatrixXd Similarity::apply_all(const Eigen::MatrixXd& points) const {
  Eigen::MatrixXd out = ratio_ * (rotation_ * points);
  out.colwise() += translation_;
  return out;
}

Eigen::VectorXd Similarity::fixed_point() const {
  const auto n = translation_.size();
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - ratio_ * rotation_;
  return a.partialPivLu().solve(translation_);
}

Ifs::Ifs(std::vector<Similarity> maps, bool open_set_condition)
    : maps_(std::move(maps)), osc_(open_set_condition) {
  if (maps_.size() < 2) throw UsageError("Ifs: need at least two maps");
  for (const auto& f : maps_) {
    if (f.dim() != maps_.front().dim()) throw UsageError("Ifs: maps differ in dimension");
  }
}

double similarity_dimension(const Ifs& ifs) {
  auto excess = [&](double s) {
    double sum = 0.0;
    for (const auto& f : ifs.maps()) sum += std::pow(f.ratio(), s);
    return sum - 1.0;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (excess(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

PointCloud generate_depth(const Ifs& ifs, int depth) {
  if (depth < 1) throw UsageError("generate_depth: depth must be >= 1");
  const auto k = static_cast<std::int64_t>(ifs.size());
  std::int64_t total = 1;
  for (int i = 0; i < depth; ++i) {
    total *= k;
    if (total > kMaxCompositions) {
      throw UsageError("generate_depth: " + std::to_string(k) + "^" + std::to_string(depth) +
                       " compositions exceeds the cap of 1e7; use chaos_game instead");
    }
  }

  const Eigen::VectorXd base = ifs.maps().front().fixed_point();
  Eigen::MatrixXd level = base;
  for (int j = 0; j < depth; ++j) {
    Eigen::MatrixXd next(level.rows(), level.cols() * k);
    for (std::int64_t i = 0; i < k; ++i) {
      next.middleCols(i * level.cols(), level.cols()) = ifs.maps()[i].apply_all(level);
    }
    level = std::move(next);
  }

  PointCloud cloud;
  cloud.points = std::move(level);
  cloud.meta.source = "ifs";
  cloud.meta.depth = depth;
  cloud.meta.base_point = "fixed point of map 0";
  return cloud;
}

PointCloud chaos_game(const Ifs& ifs, std::int64_t count, std::uint64_t seed) {
  if (count < 1) throw UsageError("chaos_game: count must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, ifs.size() - 1);
  Eigen::VectorXd x = ifs.maps().front().fixed_point();
  for (int i = 0; i < 100; ++i) x = ifs.maps()[pick(rng)].apply(x);

  PointCloud cloud;
  cloud.points.resize(ifs.dim(), count);
  for (std::int64_t i = 0; i < count; ++i) {
    x = ifs.maps()[pick(rng)].apply(x);
    cloud.points.col(i) = x;
  }
  cloud.meta.source = "chaos_game";
  cloud.meta.samples = count;
  cloud.meta.seed = seed;
  cloud.meta.base_point = "fixed point of map 0, 100-step burn-in";
  return cloud;
}

PointCloud embed_in_ball(const PointCloud& cloud, double radius) {
  if (!(radius > 0.0 && radius <= 0.9)) {
    throw UsageError("embed_in_ball: radius must lie in (0, 0.9]");
  }
  if (cloud.size() == 0) throw UsageError("embed_in_ball: empty cloud");
  const Eigen::VectorXd lo = cloud.points.rowwise().minCoeff();
  const Eigen::VectorXd hi = cloud.points.rowwise().maxCoeff();
  const double half_diagonal = 0.5 * (hi - lo).norm();
  if (!(half_diagonal > 0.0)) throw UsageError("embed_in_ball: degenerate single-point cloud");

  const Eigen::VectorXd center = 0.5 * (lo + hi);
  const double scale = radius / half_diagonal;

  PointCloud out;
  out.points = scale * (cloud.points.colwise() - center);
  out.meta = cloud.meta;
  // Compose with any earlier embedding so the metadata maps raw -> embedded.
  if (cloud.meta.embedded) {
    out.meta.embed_center = cloud.meta.embed_center + center / cloud.meta.embed_scale;
    out.meta.embed_scale = cloud.meta.embed_scale * scale;
  } else {
    out.meta.embed_center = center;
    out.meta.embed_scale = scale;
  }
  out.meta.embedded = true;
  return out;
}

namespace {

Ifs corner_ifs(int n, int active, double lambda) {
  if (!(lambda > 0.0 && lambda < 0.5)) {
    throw UsageError("built-in IFS: lambda must lie in (0, 1/2)");
  }
  std::vector<Similarity> maps;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  for (int corner = 0; corner < (1 << active); ++corner) {
    Eigen::VectorXd t = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < active; ++i) {
      if (corner & (1 << i)) t[i] = 1.0 - lambda;
    }
    maps.emplace_back(lambda, id, t);
  }
  return Ifs(std::move(maps), true);
}

}  // namespace

Ifs cantor_dust(int n, double lambda) {
  if (n < 1 || n > 16) throw UsageError("cantor_dust: n must lie in [1, 16]");
  return corner_ifs(n, n, lambda);
}

Ifs four_corner(double lambda, int n) {
  if (n < 2) throw UsageError("four_corner: n must be >= 2");
  return corner_ifs(n, 2, lambda);
}

PointCloud segment(int n, int count, double half_length) {
  if (n < 2) throw UsageError("segment: n must be >= 2");
  if (count < 2) throw UsageError("segment: need at least two points");
  if (!(half_length > 0.0 && half_length < 1.0)) {
    throw UsageError("segment: half_length must lie in (0, 1)");
  }
  PointCloud cloud;
  cloud.points = Eigen::MatrixXd::Zero(n, count);
  cloud.points.row(0) = Eigen::VectorXd::LinSpaced(count, -half_length, half_length).transpose();
  cloud.meta.source = "segment";
  cloud.meta.samples = count;
  return cloud;
}

bool first_generation_separated(const Ifs& ifs) {
  const int n = ifs.dim();
  // Corners of [0,1]^n, one per column.
  Eigen::MatrixXd corners(n, std::int64_t{1} << n);
  for (std::int64_t c = 0; c < corners.cols(); ++c) {
    for (int i = 0; i < n; ++i) corners(i, c) = (c >> i) & 1 ? 1.0 : 0.0;
  }
  std::vector<Eigen::VectorXd> lo;
  std::vector<Eigen::VectorXd> hi;
  for (const auto& f : ifs.maps()) {
    const Eigen::MatrixXd img = f.apply_all(corners);
    lo.push_back(img.rowwise().minCoeff());
    hi.push_back(img.rowwise().maxCoeff());
  }
  for (std::size_t a = 0; a < lo.size(); ++a) {
    for (std::size_t b = a + 1; b < lo.size(); ++b) {
      bool apart = false;
      for (int i = 0; i < n && !apart; ++i) {
        apart = hi[a][i] < lo[b][i] || hi[b][i] < lo[a][i];
      }
      if (!apart) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// JSON

Ifs ifs_from_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("IFS JSON: ") + e.what());
  }
  try {
    const int n = doc.at("n").get<int>();
    if (n < 1) throw UsageError("IFS JSON: n must be positive");
    std::vector<Similarity> maps;
    for (const auto& entry : doc.at("maps")) {
      const auto rot = entry.at("rotation").get<std::vector<std::vector<double>>>();
      const auto tr = entry.at("translation").get<std::vector<double>>();
      if (static_cast<int>(rot.size()) != n || static_cast<int>(tr.size()) != n) {
        throw UsageError("IFS JSON: rotation/translation size does not match n");
      }
      Eigen::MatrixXd r(n, n);
      for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rot[i].size()) != n) {
          throw UsageError("IFS JSON: rotation rows must have n entries");
        }
        for (int j = 0; j < n; ++j) r(i, j) = rot[i][j];
      }
      maps.emplace_back(entry.at("ratio").get<double>(), std::move(r),
                        Eigen::Map<const Eigen::VectorXd>(tr.data(), n));
    }
    return Ifs(std::move(maps), doc.value("osc", false));
  } catch (const json::exception& e) {
    throw UsageError(std::string("IFS JSON: ") + e.what());
  }
}

std::string ifs_to_json(const Ifs& ifs) {
  using nlohmann::json;
  json doc;
  doc["n"] = ifs.dim();
  doc["osc"] = ifs.open_set_condition();
  json maps = json::array();
  for (const auto& f : ifs.maps()) {
    json rot = json::array();
    for (int i = 0; i < f.dim(); ++i) {
      std::vector<double> row;
      for (int j = 0; j < f.dim(); ++j) row.push_back(f.rotation()(i, j));
      rot.push_back(row);
    }
    maps.push_back({{"ratio", f.ratio()},
                    {"rotation", rot},
                    {"translation", std::vector<double>(f.translation().data(),
                                                        f.translation().data() + f.dim())}});
  }
  doc["maps"] = std::move(maps);
  return doc.dump(2);
}

Ifs load_ifs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open IFS file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ifs_from_json(buf.str());
}

namespace {

double parse_real(std::string_view text, const std::string& what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw UsageError("cannot parse number '" + std::string(text) + "' in " + what);
  }
  return value;
}

}  // namespace

Ifs builtin_ifs(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.empty()) throw UsageError("empty built-in IFS spec");
  if (parts[0] == "cantor_dust" && parts.size() == 3) {
    return cantor_dust(static_cast<int>(parse_real(parts[1], spec)), parse_real(parts[2], spec));
  }
  if (parts[0] == "four_corner" && (parts.size() == 2 || parts.size() == 3)) {
    const int n = parts.size() == 3 ? static_cast<int>(parse_real(parts[2], spec)) : 2;
    return four_corner(parse_real(parts[1], spec), n);
  }
  throw UsageError("unknown built-in IFS '" + spec +
                   "' (expected cantor_dust:<n>:<lambda> or four_corner:<lambda>[:<n>])");
}

// ---------------------------------------------------------------------------
// CSV

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_cloud_csv(std::ostream& out, const PointCloud& cloud) {
  std::string line;
  for (Eigen::Index j = 0; j < cloud.points.cols(); ++j) {
    line.clear();
    for (Eigen::Index i = 0; i < cloud.points.rows(); ++i) {
      if (i > 0) line += ',';
      line += format_real(cloud.points(i, j));
    }
    line += '\n';
    out << line;
  }
}

PointCloud read_cloud_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    std::vector<double> row;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      row.push_back(parse_real(rest.substr(0, comma), "point CSV"));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw UsageError("point CSV: rows have different lengths");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw UsageError("point CSV: no points");
  PointCloud cloud;
  cloud.points.resize(static_cast<Eigen::Index>(rows.front().size()),
                      static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t i = 0; i < rows[j].size(); ++i) cloud.points(i, j) = rows[j][i];
  }
  cloud.meta.source = "csv";
  return cloud;
}

}  // namespace hypproj
