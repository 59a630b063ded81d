// hypproj: verification suites and projection sweeps in the Poincare ball.
//
// Exit codes: 0 success, 1 property failure, 2 usage error, 3 numerical error.
// Thread count for sweeps comes from HYPPROJ_THREADS.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hypproj/errors.hpp"
#include "hypproj/experiments.hpp"
#include "hypproj/fractals.hpp"
#include "hypproj/render.hpp"
#include "hypproj/sampling.hpp"
#include "hypproj/verify.hpp"

namespace {

using namespace hypproj;

constexpr int kExitProperty = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct SourceArgs {
  std::string ifs_path;
  std::string builtin;
  bool segment = false;

  void add(CLI::App* cmd) {
    auto* a = cmd->add_option("--ifs", ifs_path, "IFS JSON file");
    auto* b = cmd->add_option("--builtin", builtin,
                              "built-in IFS: cantor_dust:<n>:<lambda> or four_corner:<lambda>[:<n>]");
    auto* c = cmd->add_flag("--segment", segment, "use the rectifiable segment control");
    a->excludes(b)->excludes(c);
    b->excludes(c);
  }

  std::optional<Ifs> resolve() const {
    if (!ifs_path.empty()) return load_ifs(ifs_path);
    if (!builtin.empty()) return builtin_ifs(builtin);
    if (segment) return std::nullopt;
    throw UsageError("one of --ifs, --builtin or --segment is required");
  }
};

void emit(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
  } else {
    write_text_file(path, contents);
  }
}

std::string sibling(const std::string& path, const std::string& suffix) {
  if (path.empty() || path == "-") return {};
  const auto dot = path.rfind('.');
  const auto slash = path.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + suffix;
  return path.substr(0, dot) + suffix;
}

void report_summary(const nlohmann::json& summary, const std::string& path) {
  std::cerr << summary.dump(2) << '\n';
  if (!path.empty()) write_text_file(path, summary.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal projections along geodesics in the Poincare ball"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "run the model and projection property suites");
  bool quick = false;
  bool printed_psi = false;
  std::string verify_json;
  std::uint64_t verify_seed = VerifyOptions{}.seed;
  verify->add_flag("--quick", quick, "10% sample sizes");
  verify->add_flag("--use-printed-psi", printed_psi,
                   "swap the radial profiles of Psi and its inverse (expected to fail)");
  verify->add_option("--json", verify_json, "write the JSON report here");
  verify->add_option("--seed", verify_seed, "random seed");

  // marstrand
  auto* marstrand = app.add_subcommand("marstrand", "dimension and covering sweep over random m-planes");
  MarstrandConfig mc;
  SourceArgs m_src;
  std::string m_out;
  std::string m_summary;
  m_src.add(marstrand);
  marstrand->add_option("--n", mc.n, "ambient dimension")->capture_default_str();
  marstrand->add_option("--m", mc.m, "plane dimension")->capture_default_str();
  marstrand->add_option("--depth", mc.depth, "composition depth")->capture_default_str();
  marstrand->add_option("--planes", mc.num_planes, "number of planes")->capture_default_str();
  marstrand->add_option("--seed", mc.seed, "master seed")->capture_default_str();
  marstrand->add_option("--deltas", mc.deltas, "box sizes for the dimension fit")->delimiter(',');
  marstrand->add_option("--cover-delta", mc.cover_delta, "scale for cover_est")->capture_default_str();
  marstrand->add_option("--occ-delta", mc.occ_delta, "scale for occ_est")->capture_default_str();
  marstrand->add_option("--window-fraction", mc.window_fraction, "central window size")->capture_default_str();
  marstrand->add_option("--radius", mc.radius, "embedding radius")->capture_default_str();
  marstrand->add_option("--min-count", mc.box.filter.min_count, "smallest usable box count")->capture_default_str();
  marstrand->add_option("--max-fraction", mc.box.filter.max_fraction,
                        "largest usable box count as a fraction of the point count")->capture_default_str();
  marstrand->add_flag("--offset-averaging", mc.box.offset_averaging, "average counts over four grid offsets");
  marstrand->add_option("--out", m_out, "CSV output (default stdout)");
  marstrand->add_option("--summary", m_summary, "JSON summary output");

  // besfed
  auto* besfed = app.add_subcommand("besfed", "four-corner set versus segment: covering decay across generations");
  BesFedConfig bc;
  std::string b_out;
  std::string b_control;
  std::string b_summary;
  besfed->add_option("--generations", bc.generations, "last generation (<= 8)")->capture_default_str();
  besfed->add_option("--first-generation", bc.first_generation, "first generation")->capture_default_str();
  besfed->add_option("--planes", bc.num_planes, "number of lines")->capture_default_str();
  besfed->add_option("--seed", bc.seed, "master seed")->capture_default_str();
  besfed->add_option("--lambda", bc.lambda, "four-corner ratio")->capture_default_str();
  besfed->add_option("--n", bc.n, "ambient dimension")->capture_default_str();
  besfed->add_option("--out", b_out, "four-corner CSV (default stdout)");
  besfed->add_option("--control-out", b_control, "segment control CSV (default <out>.control.csv)");
  besfed->add_option("--summary", b_summary, "JSON summary output");

  // interior
  auto* interior = app.add_subcommand("interior", "central-window occupancy of projections");
  InteriorConfig ic;
  SourceArgs i_src;
  std::string i_out;
  std::string i_summary;
  i_src.add(interior);
  interior->add_option("--n", ic.n, "ambient dimension")->capture_default_str();
  interior->add_option("--m", ic.m, "plane dimension")->capture_default_str();
  interior->add_option("--depth", ic.depth, "composition depth")->capture_default_str();
  interior->add_option("--planes", ic.num_planes, "number of planes")->capture_default_str();
  interior->add_option("--seed", ic.seed, "master seed")->capture_default_str();
  interior->add_option("--deltas", ic.deltas, "occupancy scales")->delimiter(',');
  interior->add_option("--window-fraction", ic.window_fraction, "central window size")->capture_default_str();
  interior->add_option("--out", i_out, "CSV output (default stdout)");
  interior->add_option("--summary", i_summary, "JSON summary output");

  // generate
  auto* generate = app.add_subcommand("generate", "export a point cloud as CSV");
  SourceArgs g_src;
  int g_depth = 6;
  std::int64_t g_chaos = 0;
  std::uint64_t g_seed = 1;
  int g_n = 0;
  double g_radius = 0.0;
  std::string g_out;
  g_src.add(generate);
  generate->add_option("--depth", g_depth, "composition depth")->capture_default_str();
  generate->add_option("--chaos", g_chaos, "use the chaos game with this many points");
  generate->add_option("--seed", g_seed, "chaos-game seed")->capture_default_str();
  generate->add_option("--n", g_n, "pad to this ambient dimension (segment: required)");
  generate->add_option("--embed", g_radius, "embed in the ball of this radius");
  generate->add_option("--out", g_out, "CSV output (default stdout)");

  // render
  auto* render = app.add_subcommand("render", "SVG of a planar cloud and its projection onto a line");
  SourceArgs r_src;
  std::string r_input;
  std::string r_svg;
  int r_depth = 4;
  double r_theta = 30.0;
  RenderOptions ro;
  r_src.add(render);
  render->add_option("--input", r_input, "planar point CSV inside the unit disc");
  render->add_option("--depth", r_depth, "composition depth for --builtin/--ifs")->capture_default_str();
  render->add_option("--theta", r_theta, "line direction in degrees")->capture_default_str();
  render->add_option("--max-arcs", ro.max_arcs, "geodesic arcs drawn")->capture_default_str();
  render->add_option("--svg", r_svg, "SVG output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const int threads = thread_count_from_env();

    if (*verify) {
      VerifyOptions opts;
      opts.quick = quick;
      opts.seed = verify_seed;
      opts.convention = printed_psi ? PsiConvention::Printed : PsiConvention::Standard;
      const VerifyReport report = run_verify(opts);
      std::cout << report.to_text();
      if (!verify_json.empty()) write_text_file(verify_json, report.to_json().dump(2) + "\n");
      return report.passed() ? 0 : kExitProperty;
    }

    if (*marstrand) {
      mc.ifs = m_src.resolve();
      mc.threads = threads;
      const MarstrandResult result = run_marstrand(mc);
      emit(m_out, records_to_csv(result.records, mc.m));
      report_summary(result.summary(), m_summary);
      return 0;
    }

    if (*besfed) {
      bc.threads = threads;
      const BesFedResult result = run_besfed(bc);
      emit(b_out, records_to_csv(result.fractal_rows, bc.m));
      const std::string control_path = b_control.empty() ? sibling(b_out, ".control.csv") : b_control;
      if (!control_path.empty()) write_text_file(control_path, records_to_csv(result.control_rows, bc.m));
      report_summary(result.summary(), b_summary);
      return 0;
    }

    if (*interior) {
      ic.ifs = i_src.resolve();
      ic.threads = threads;
      const InteriorResult result = run_interior(ic);
      if (!result.precondition_met) {
        std::cerr << "warning: source dimension " << result.source_dim << " does not exceed 2m = "
                  << 2 * ic.m << "; nonempty interior is not expected\n";
      }
      emit(i_out, records_to_csv(result.records, ic.m));
      report_summary(result.summary(), i_summary);
      return 0;
    }

    if (*generate) {
      const auto ifs = g_src.resolve();
      PointCloud cloud;
      if (!ifs) {
        if (g_n < 2) throw UsageError("generate --segment needs --n >= 2");
        cloud = segment(g_n);
      } else {
        cloud = g_chaos > 0 ? chaos_game(*ifs, g_chaos, g_seed) : generate_depth(*ifs, g_depth);
        if (g_n > 0) cloud.points = pad_to_dim(cloud.points, g_n);
      }
      if (g_radius > 0.0) cloud = embed_in_ball(cloud, g_radius);
      std::ostringstream out;
      write_cloud_csv(out, cloud);
      emit(g_out, out.str());
      return 0;
    }

    if (*render) {
      Eigen::MatrixXd points;
      if (!r_input.empty()) {
        std::ifstream in(r_input);
        if (!in) throw UsageError("cannot open " + r_input);
        points = read_cloud_csv(in).points;
      } else {
        const auto ifs = r_src.resolve();
        const PointCloud raw = ifs ? generate_depth(*ifs, r_depth) : segment(2, 200);
        points = embed_in_ball(raw).points;
      }
      const double theta = r_theta * std::numbers::pi / 180.0;
      const MPlaned line(Eigen::Vector2d(std::cos(theta), std::sin(theta)));
      write_text_file(r_svg, render_svg(points, line, ro));
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
