// vemg: mesh, hierarchy, solve, bench and study front end.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "vemg/agglomeration.hpp"
#include "vemg/bench.hpp"
#include "vemg/error.hpp"
#include "vemg/multigrid.hpp"
#include "vemg/simd.hpp"
#include "vemg/vem.hpp"

namespace {

using vemg::BenchConfig;

// Flags shared by every subcommand. They override the config file, which
// overrides the built-in defaults.
struct Overrides {
  std::string config;
  std::string out;
  std::string nu;
  std::string levels;
  std::string cycle;
  std::string mode;
  std::string tol;
  std::string seed;
  std::string targets;
  std::string structured;
  std::string triangle;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "key = value configuration file");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--nu", o.nu, "smoothing steps, comma separated");
  cmd->add_option("--levels", o.levels, "number of levels J (list for bench)");
  cmd->add_option("--cycle", o.cycle, "tl, v or w (list for bench)");
  cmd->add_option("--mode", o.mode, "inherited or noninherited (list for bench)");
  cmd->add_option("--tol", o.tol, "relative residual tolerance");
  cmd->add_option("--seed", o.seed, "seed for randomized probes");
  cmd->add_option("--targets", o.targets, "agglomeration targets per step, e.g. 9,2");
  cmd->add_option("--n", o.structured, "structured mesh subdivisions (list for bench)");
  cmd->add_option("--triangle", o.triangle,
                  "Triangle basename(s); reads <base>.node and <base>.ele");
}

BenchConfig resolve(const Overrides& o) {
  BenchConfig c;
  if (!o.config.empty()) c = vemg::load_config(o.config, c);
  auto set = [&](const char* key, const std::string& v) {
    if (!v.empty()) vemg::apply_setting(c, key, v);
  };
  set("out", o.out);
  set("nu", o.nu);
  set("levels", o.levels);
  set("cycles", o.cycle);
  set("modes", o.mode);
  set("tolerance", o.tol);
  set("seed", o.seed);
  set("target_children", o.targets);
  set("structured", o.structured);
  set("triangle", o.triangle);
  return c;
}

void print_quality(const vemg::PolygonalMesh& mesh) {
  const auto q = vemg::mesh_quality(mesh);
  std::size_t star = 0;
  for (bool b : q.star_shaped_wrt_centroid) star += b ? 1 : 0;
  const double min_ratio =
      *std::min_element(q.min_edge_ratio.begin(), q.min_edge_ratio.end());
  const double max_ratio =
      *std::max_element(q.max_edge_ratio.begin(), q.max_edge_ratio.end());
  std::printf("vertices %zu  cells %zu  interior vertices %zu  h %.6f\n",
              mesh.num_vertices(), mesh.num_cells(), mesh.num_interior_vertices(),
              mesh.mesh_size());
  std::printf("edge ratio [%.4f, %.4f]  diameter [%.6f, %.6f]  uniformity %.4f  "
              "star-shaped %zu/%zu\n",
              min_ratio, max_ratio, q.min_diameter, q.max_diameter,
              q.uniformity, star, q.star_shaped_wrt_centroid.size());
}

int run_mesh(const BenchConfig& c) {
  const auto& source = c.meshes.front();
  const auto mesh = source.load();
  print_quality(mesh);
  std::filesystem::create_directories(c.out_dir);
  const auto stem = c.out_dir / source.id();
  auto txt = stem;
  auto svg = stem;
  txt += ".txt";
  svg += ".svg";
  vemg::write_native(mesh, txt);
  vemg::export_svg(mesh, svg);
  std::printf("wrote %s and %s\n", txt.string().c_str(), svg.string().c_str());
  return 0;
}

int run_hierarchy(const BenchConfig& c) {
  const auto fine = c.meshes.front().load();
  const int levels = c.levels.empty() ? 3 : c.levels.front();
  const auto h = vemg::build_hierarchy(fine, levels, c.target_children);
  for (int j = 1; j <= h.num_levels(); ++j)
    std::printf("level %d: %zu cells, %zu vertices, %zu interior\n", j,
                h.mesh(j).num_cells(), h.mesh(j).num_vertices(),
                h.mesh(j).num_interior_vertices());
  if (h.stopped_early)
    std::printf("stopped at %d of %d requested levels\n", h.num_levels(),
                h.requested_levels);
  const auto report = vemg::check_boundary_compatibility(h);
  std::printf("boundary compatibility: %s (%zu violations)\n", report.ok ? "ok" : "violated",
              report.violations.size());
  const auto dir = c.out_dir / "meshes";
  std::filesystem::create_directories(dir);
  vemg::write_hierarchy(h, dir);
  for (int j = 1; j <= h.num_levels(); ++j)
    vemg::export_svg(h.mesh(j), dir / ("level_" + std::to_string(j) + ".svg"));
  std::printf("wrote %s\n", dir.string().c_str());
  return report.ok ? 0 : 1;
}

int run_solve(const BenchConfig& c) {
  const auto fine = c.meshes.front().load();
  const auto cycle = c.cycles.front();
  const int levels = cycle == vemg::CycleKind::tl ? 2 : (c.levels.empty() ? 3 : c.levels.front());
  const int nu = c.nu.front();
  const auto mode = c.modes.front();
  const auto sys = vemg::assemble_system(fine, c.mu, [&](const vemg::Point& p) {
    return c.mu * vemg::benchmark_rhs(p);
  });
  const auto h = vemg::build_hierarchy(fine, levels, c.target_children);
  const auto transfer = vemg::coarse_operators(sys.A, h, c.mu, mode);
  const int p = cycle == vemg::CycleKind::v ? 1 : 2;
  vemg::MultigridSolver mg(transfer, nu, p);
  vemg::MGConfig cfg;
  cfg.cycle = p;
  cfg.smoothing_steps = nu;
  cfg.tolerance = c.tolerance;
  cfg.max_iterations = c.max_iterations;
  const auto rep = vemg::mg_solve(sys.A, sys.rhs, mg, cfg);
  std::printf("mesh %s  cells %zu  dofs %zu  levels %d  cycle %s  nu %d  mode %s  kernels %s\n",
              c.meshes.front().id().c_str(), fine.num_cells(), sys.dofs.size(),
              h.num_levels(), std::string(vemg::to_string(cycle)).c_str(), nu,
              std::string(vemg::to_string(mode)).c_str(),
              std::string(vemg::simd::isa_name(vemg::simd::active().isa)).c_str());
  for (std::size_t k = 0; k < rep.residuals.size(); ++k)
    std::printf("  %3zu  %.6e\n", k, rep.residuals[k]);
  std::printf("iterations %d  rho %.6f  %s  %.3f ms\n", rep.iterations, rep.rho,
              rep.converged ? "converged" : "NOT converged", rep.wall_ms);
  return rep.converged ? 0 : 1;
}

int run_bench(const BenchConfig& c) {
  const auto result = vemg::run_benchmark(c);
  vemg::write_results_csv(result, std::cout, true);
  int failures = 0;
  for (const auto& r : result.rows)
    if (r.status != "ok") ++failures;
  std::fprintf(stderr, "%zu rows, %d not ok; results in %s\n", result.rows.size(), failures,
               (c.out_dir / "results.csv").string().c_str());
  return failures == 0 ? 0 : 1;
}

int run_study(const BenchConfig& c) {
  const auto s = vemg::run_convergence_study(c);
  std::printf("%4s %12s %8s %14s %14s\n", "n", "h", "dofs", "L2 error", "H1 error");
  for (const auto& r : s.rows)
    std::printf("%4d %12.6f %8zu %14.6e %14.6e\n", r.n, r.h, r.dofs, r.l2, r.h1);
  std::printf("observed orders: L2 %.3f  H1 %.3f\n", s.l2_order, s.h1_order);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multigrid for lowest-order virtual elements on agglomerated meshes"};
  app.require_subcommand(1);

  Overrides o;
  auto* mesh = app.add_subcommand("mesh", "generate or import a mesh, report quality, export it");
  auto* hier = app.add_subcommand("hierarchy", "build and validate an agglomerated hierarchy");
  auto* solve = app.add_subcommand("solve", "one multigrid solve of the benchmark problem");
  auto* bench = app.add_subcommand("bench", "run the full iteration-count grid");
  auto* study = app.add_subcommand("study", "discretization error and observed orders");
  for (auto* cmd : {mesh, hier, solve, bench, study}) add_common(cmd, o);

  CLI11_PARSE(app, argc, argv);

  try {
    const BenchConfig c = resolve(o);
    vemg::validate(c);
    if (mesh->parsed()) return run_mesh(c);
    if (hier->parsed()) return run_hierarchy(c);
    if (solve->parsed()) return run_solve(c);
    if (bench->parsed()) return run_bench(c);
    if (study->parsed()) return run_study(c);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
