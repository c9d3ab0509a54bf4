#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "vemg/mesh.hpp"
#include "vemg/transfer.hpp"

namespace vemg {

enum class CycleKind { tl, v, w };

std::string_view to_string(CycleKind cycle);
CycleKind parse_cycle(std::string_view text);

// A fine mesh for one benchmark set: either the structured triangulation with
// n subdivisions or a Triangle .node/.ele pair given by its basename.
struct MeshSource {
  int structured_n = 0;
  std::filesystem::path triangle_base;

  std::string id() const;
  PolygonalMesh load() const;
};

struct BenchConfig {
  std::vector<MeshSource> meshes;  // default: structured 16, 23, 31, 44
  std::vector<int> levels{3, 4};   // for V and W; TL always runs with J = 2
  // Agglomeration targets per coarsening step, finest first; the last one
  // repeats for deeper levels.
  std::vector<int> target_children{9, 2};
  std::vector<CycleKind> cycles{CycleKind::tl, CycleKind::w, CycleKind::v};
  std::vector<int> nu{2, 4, 6, 8};
  std::vector<CoarseMode> modes{CoarseMode::inherited, CoarseMode::non_inherited};
  double tolerance = 1e-8;
  int max_iterations = 200;
  double mu = 1.0;
  std::filesystem::path out_dir = "bench_out";
  std::uint64_t seed = 20240521;

  bool baselines = true;        // CG and PCG rows per mesh set
  double ict_drop_tol = 3e-2;
  int ict_max_fill = 10;
  bool spectral = true;         // two-grid spectral radius on TL rows
  bool svg = true;              // meshes/ dump of the first set's hierarchy
  bool record_wall_time = false;  // wall_ms in results.csv (breaks byte identity)

  std::vector<int> study_n{4, 8, 16, 32};

  BenchConfig();
};

// Throws vemg::Error naming the offending field.
void validate(const BenchConfig& config);

// "key = value" lines; '#' starts a comment; list values are comma or space
// separated. Unknown keys are errors.
BenchConfig parse_config(std::istream& in, BenchConfig base = {});
BenchConfig load_config(const std::filesystem::path& path, BenchConfig base = {});
void apply_setting(BenchConfig& config, const std::string& key,
                   const std::string& value);

struct BenchRow {
  std::string mesh_id;
  std::size_t cells = 0;
  std::size_t dofs = 0;
  std::string cycle;  // tl, v, w, cg, pcg
  int levels = 0;     // 0 for baselines
  int nu = 0;         // 0 for baselines
  std::string mode;   // empty for baselines
  int iterations = 0;
  double rho = 0.0;
  double rho_tg = -1.0;  // negative when not computed
  double wall_ms = 0.0;
  std::string status = "ok";
};

struct BenchResult {
  std::vector<BenchRow> rows;
};

// Runs every combination and writes results.csv (and timings.csv, plus
// meshes/ when svg is on) into config.out_dir.
BenchResult run_benchmark(const BenchConfig& config);
void write_results_csv(const BenchResult& result, std::ostream& out,
                       bool with_wall_time);

struct StudyRow {
  int n = 0;
  double h = 0.0;
  std::size_t dofs = 0;
  double l2 = 0.0;
  double h1 = 0.0;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  double l2_order = 0.0;
  double h1_order = 0.0;
};

// Direct solves on structured meshes for config.study_n; orders are least
// squares slopes of log(error) against log(h). Writes orders.csv.
StudyResult run_convergence_study(const BenchConfig& config);

// Least squares slope of y against x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

// The benchmark problem: -mu lap u = f on the unit square with
// u = x(1-x)y(1-y), f = -2(x(x-1) + y(y-1)) for mu = 1.
double benchmark_rhs(const Point& p);
double benchmark_exact(const Point& p);
Point benchmark_exact_gradient(const Point& p);

}  // namespace vemg
