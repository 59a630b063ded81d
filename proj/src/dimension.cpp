#include "hypproj/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hypproj/errors.hpp"

namespace hypproj {

namespace {

constexpr double kSnap = 1e-9;
constexpr int kPackBits = 21;
constexpr std::int64_t kPackHalf = std::int64_t{1} << (kPackBits - 1);

std::int64_t cell_index(double x, double offset, double delta) {
  return static_cast<std::int64_t>(std::floor((x - offset) / delta + kSnap));
}

std::int64_t count_distinct(std::vector<std::uint64_t>& keys) {
  std::sort(keys.begin(), keys.end());
  return std::unique(keys.begin(), keys.end()) - keys.begin();
}

// General path: lexicographic sort of full index tuples.
std::int64_t count_distinct_tuples(const std::vector<std::int64_t>& cells, Eigen::Index m,
                                   Eigen::Index n_points) {
  std::vector<Eigen::Index> order(n_points);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto less = [&](Eigen::Index a, Eigen::Index b) {
    return std::lexicographical_compare(cells.begin() + a * m, cells.begin() + (a + 1) * m,
                                        cells.begin() + b * m, cells.begin() + (b + 1) * m);
  };
  std::sort(order.begin(), order.end(), less);
  std::int64_t distinct = n_points > 0 ? 1 : 0;
  for (Eigen::Index i = 1; i < n_points; ++i) {
    if (less(order[i - 1], order[i])) ++distinct;
  }
  return distinct;
}

}  // namespace

std::int64_t box_count(const PointsRef& points, double delta, const Eigen::VectorXd& offset) {
  if (!(delta > 0.0)) throw UsageError("box_count: delta must be positive");
  if (points.cols() == 0) throw UsageError("box_count: empty point set");
  if (offset.size() != points.rows()) throw UsageError("box_count: offset dimension mismatch");
  const Eigen::Index m = points.rows();
  const Eigen::Index n_points = points.cols();

  if (m * kPackBits <= 64) {
    std::vector<std::uint64_t> keys(static_cast<std::size_t>(n_points));
    bool packed = true;
    for (Eigen::Index j = 0; j < n_points && packed; ++j) {
      std::uint64_t key = 0;
      for (Eigen::Index i = 0; i < m; ++i) {
        const std::int64_t k = cell_index(points(i, j), offset[i], delta);
        if (k < -kPackHalf || k >= kPackHalf) {
          packed = false;
          break;
        }
        key |= static_cast<std::uint64_t>(k + kPackHalf) << (kPackBits * i);
      }
      keys[j] = key;
    }
    if (packed) return count_distinct(keys);
  }

  std::vector<std::int64_t> cells(static_cast<std::size_t>(n_points * m));
  for (Eigen::Index j = 0; j < n_points; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      cells[j * m + i] = cell_index(points(i, j), offset[i], delta);
    }
  }
  return count_distinct_tuples(cells, m, n_points);
}

std::int64_t box_count(const PointsRef& points, double delta) {
  return box_count(points, delta, Eigen::VectorXd::Zero(points.rows()));
}

std::vector<double> geometric_scales(double base, int first, int last) {
  std::vector<double> out;
  for (int j = first; j <= last; ++j) out.push_back(std::pow(base, -j));
  return out;
}

std::int64_t offset_averaged_box_count(const PointsRef& points, double delta) {
  double total = 0.0;
  for (int k = 0; k < 4; ++k) {
    Eigen::VectorXd offset = Eigen::VectorXd::Zero(points.rows());
    if (k > 0) {
      for (Eigen::Index i = 0; i < offset.size(); ++i) {
        offset[i] = std::fmod(0.6180339887498949 * static_cast<double>(k * points.rows() + i + 1),
                              1.0) * delta;
      }
    }
    total += static_cast<double>(box_count(points, delta, offset));
  }
  return std::llround(total / 4.0);
}

DimensionEstimate fit_box_dimension(const std::vector<double>& deltas,
                                    const std::vector<std::int64_t>& counts,
                                    std::int64_t n_points, const ScaleFilter& filter) {
  if (deltas.size() != counts.size()) {
    throw UsageError("fit_box_dimension: deltas and counts differ in length");
  }
  const double max_count = filter.max_fraction * static_cast<double>(n_points);

  DimensionEstimate est;
  std::vector<double> rejected;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (counts[i] >= filter.min_count && static_cast<double>(counts[i]) <= max_count) {
      est.scales_used.push_back(deltas[i]);
      est.counts.push_back(counts[i]);
    } else {
      rejected.push_back(deltas[i]);
    }
  }

  if (est.scales_used.size() < 3) {
    std::ostringstream msg;
    msg << "box_dimension: only " << est.scales_used.size()
        << " usable scales (need 3); filtered scales:";
    for (double d : rejected) msg << ' ' << d;
    throw NumericalError(msg.str());
  }

  const auto k = static_cast<Eigen::Index>(est.scales_used.size());
  Eigen::VectorXd x(k);
  Eigen::VectorXd y(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    x[i] = -std::log(est.scales_used[i]);
    y[i] = std::log(static_cast<double>(est.counts[i]));
  }
  const Eigen::VectorXd dx = x.array() - x.mean();
  const Eigen::VectorXd dy = y.array() - y.mean();
  const double sxx = dx.squaredNorm();
  const double syy = dy.squaredNorm();
  if (!(sxx > 0.0)) throw NumericalError("box_dimension: usable scales are all equal");
  const double sxy = dx.dot(dy);
  est.slope = sxy / sxx;
  est.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return est;
}

DimensionEstimate box_dimension(const PointsRef& points, const std::vector<double>& deltas,
                                const BoxDimensionOptions& options) {
  if (points.cols() == 0) throw UsageError("box_dimension: empty point set");
  std::vector<std::int64_t> counts;
  counts.reserve(deltas.size());
  for (double delta : deltas) {
    counts.push_back(options.offset_averaging ? offset_averaged_box_count(points, delta)
                                              : box_count(points, delta));
  }
  return fit_box_dimension(deltas, counts, points.cols(), options.filter);
}

double covering_measure(const PointsRef& points, int m, double delta) {
  if (m < 1) throw UsageError("covering_measure: m must be >= 1");
  return static_cast<double>(box_count(points, delta)) * std::pow(delta, m);
}

double interior_occupancy(const PointsRef& points, double delta, const Window& window) {
  if (!(delta > 0.0)) throw UsageError("interior_occupancy: delta must be positive");
  const Eigen::Index m = points.rows();
  if (window.lo.size() != m || window.hi.size() != m) {
    throw UsageError("interior_occupancy: window dimension mismatch");
  }
  std::vector<std::int64_t> first(m);
  std::vector<std::int64_t> extent(m);
  std::int64_t total = 1;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(window.hi[i] > window.lo[i])) throw UsageError("interior_occupancy: empty window");
    first[i] = static_cast<std::int64_t>(std::ceil(window.lo[i] / delta - kSnap));
    const auto end = static_cast<std::int64_t>(std::floor(window.hi[i] / delta + kSnap));
    extent[i] = end - first[i];
    if (extent[i] <= 0) {
      throw UsageError("interior_occupancy: window holds no whole cell at this delta");
    }
    total *= extent[i];
  }

  std::vector<std::uint64_t> hits;
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    std::uint64_t linear = 0;
    bool inside = true;
    for (Eigen::Index i = m - 1; i >= 0; --i) {
      const std::int64_t k = cell_index(points(i, j), 0.0, delta) - first[i];
      if (k < 0 || k >= extent[i]) {
        inside = false;
        break;
      }
      linear = linear * static_cast<std::uint64_t>(extent[i]) + static_cast<std::uint64_t>(k);
    }
    if (inside) hits.push_back(linear);
  }
  return static_cast<double>(count_distinct(hits)) / static_cast<double>(total);
}

}  // namespace hypproj
