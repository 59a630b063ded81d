#pragma once

#include <string>

#include <Eigen/Dense>

#include "hypproj/grassmann.hpp"

namespace hypproj {

struct RenderOptions {
  int size = 600;       ///< square canvas side in px
  int margin = 20;      ///< px between the unit circle and the canvas edge
  int max_points = 5000;
  int max_arcs = 48;
  int arc_samples = 16;
};

/// SVG scatter of a planar Poincare cloud (2 x N), its projection onto a
/// line through the origin, the unit circle, and geodesic arcs from a subset
/// of points to their feet. Elements carry the classes boundary, plane,
/// geodesic, point and foot.
std::string render_svg(const Eigen::MatrixXd& cloud, const MPlaned& line,
                       const RenderOptions& options = {});

}  // namespace hypproj
