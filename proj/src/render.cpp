#include "hypproj/render.hpp"

#include <algorithm>
#include <charconv>

#include "hypproj/errors.hpp"
#include "hypproj/projection.hpp"

namespace hypproj {

namespace {

std::string px(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 3);
  return std::string(buf, ptr);
}

struct Canvas {
  double center;
  double scale;
  std::string x(double u) const { return px(center + scale * u); }
  std::string y(double v) const { return px(center - scale * v); }
};

// Evenly spaced column indices, at most `limit` of them.
std::vector<Eigen::Index> pick(Eigen::Index total, int limit) {
  std::vector<Eigen::Index> out;
  const Eigen::Index count = std::min<Eigen::Index>(total, std::max(limit, 0));
  for (Eigen::Index k = 0; k < count; ++k) out.push_back(k * total / count);
  return out;
}

}  // namespace

std::string render_svg(const Eigen::MatrixXd& cloud, const MPlaned& line, const RenderOptions& options) {
  if (cloud.cols() == 0) throw UsageError("render: empty cloud");
  if (cloud.rows() != 2 || line.ambient_dim() != 2 || line.dim() != 1) {
    throw UsageError("render: expects a planar cloud and a line in R^2");
  }
  if (options.size <= 2 * options.margin) throw UsageError("render: canvas too small");
  const Canvas c{options.size / 2.0, options.size / 2.0 - options.margin};
  const std::string size = std::to_string(options.size);

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + size + "\" height=\"" + size +
         "\" viewBox=\"0 0 " + size + " " + size + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + size + "\" height=\"" + size + "\" fill=\"white\"/>\n";
  svg += "<circle class=\"boundary\" cx=\"" + c.x(0) + "\" cy=\"" + c.y(0) + "\" r=\"" +
         px(c.scale) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  const Eigen::Vector2d dir = line.basis().col(0);
  svg += "<line class=\"plane\" x1=\"" + c.x(-dir[0]) + "\" y1=\"" + c.y(-dir[1]) + "\" x2=\"" +
         c.x(dir[0]) + "\" y2=\"" + c.y(dir[1]) + "\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";

  for (Eigen::Index j : pick(cloud.cols(), options.max_arcs)) {
    const Pointd x(cloud.col(j));
    const Pointd q = hyp_project(line, x);
    if (x.coords() == q.coords()) continue;
    const Geodesic<double> g(x, q);
    svg += "<polyline class=\"geodesic\" fill=\"none\" stroke=\"#999999\" stroke-width=\"0.5\" points=\"";
    for (int k = 0; k <= options.arc_samples; ++k) {
      const Pointd p = geodesic_point(g, static_cast<double>(k) / options.arc_samples);
      if (k > 0) svg += ' ';
      svg += c.x(p[0]) + "," + c.y(p[1]);
    }
    svg += "\"/>\n";
  }

  const std::vector<Eigen::Index> shown = pick(cloud.cols(), options.max_points);
  for (Eigen::Index j : shown) {
    svg += "<circle class=\"point\" cx=\"" + c.x(cloud(0, j)) + "\" cy=\"" + c.y(cloud(1, j)) +
           "\" r=\"1.2\" fill=\"#d62728\"/>\n";
  }
  for (Eigen::Index j : shown) {
    const Pointd q = hyp_project(line, Pointd(cloud.col(j)));
    svg += "<circle class=\"foot\" cx=\"" + c.x(q[0]) + "\" cy=\"" + c.y(q[1]) +
           "\" r=\"1.2\" fill=\"#2ca02c\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace hypproj
