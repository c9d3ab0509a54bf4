#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "vemg/bench.hpp"
#include "vemg/error.hpp"

using namespace vemg;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::size_t count(const std::string& s, char c) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), c));
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("config parsing") {
  std::istringstream in(
      "# comment line\n"
      "structured = 8, 12\n"
      "levels = 3\n"
      "target_children = 9 2\n"
      "cycles = tl, W\n"
      "nu = 2,4   # trailing comment\n"
      "modes = noninherited\n"
      "tolerance = 1e-6\n"
      "seed = 99\n"
      "svg = off\n"
      "out = somewhere\n");
  const auto c = parse_config(in);
  REQUIRE(c.meshes.size() == 2);
  CHECK(c.meshes[1].structured_n == 12);
  CHECK(c.meshes[1].id() == "structured_12");
  CHECK(c.levels == std::vector<int>{3});
  CHECK(c.target_children == std::vector<int>{9, 2});
  CHECK(c.cycles == std::vector<CycleKind>{CycleKind::tl, CycleKind::w});
  CHECK(c.nu == std::vector<int>{2, 4});
  CHECK(c.modes == std::vector<CoarseMode>{CoarseMode::non_inherited});
  CHECK(c.tolerance == 1e-6);
  CHECK(c.seed == 99u);
  CHECK(!c.svg);
  CHECK(c.out_dir == "somewhere");
  CHECK_NOTHROW(validate(c));

  std::istringstream unknown("colour = blue\n");
  CHECK_THROWS_AS(parse_config(unknown), Error);
  std::istringstream no_eq("nu 2\n");
  CHECK_THROWS_AS(parse_config(no_eq), Error);
  std::istringstream bad_int("nu = two\n");
  CHECK_THROWS_AS(parse_config(bad_int), Error);
}

TEST_CASE("validation") {
  BenchConfig c;
  CHECK_NOTHROW(validate(c));
  c.cycles.clear();
  CHECK_THROWS_AS(validate(c), Error);
  c = BenchConfig{};
  c.nu.clear();
  CHECK_THROWS_AS(validate(c), Error);
  c = BenchConfig{};
  c.modes.clear();
  CHECK_THROWS_AS(validate(c), Error);
  c = BenchConfig{};
  c.levels = {5};
  CHECK_THROWS_AS(validate(c), Error);
  c = BenchConfig{};
  c.tolerance = 0.0;
  CHECK_THROWS_AS(validate(c), Error);
  CHECK_THROWS_AS(parse_cycle("x"), Error);
}

TEST_CASE("single-row benchmark") {
  BenchConfig c;
  c.meshes = {MeshSource{16, {}}};
  c.cycles = {CycleKind::tl};
  c.nu = {2};
  c.modes = {CoarseMode::inherited};
  c.baselines = false;
  c.svg = false;
  c.out_dir = testing::scratch_dir("bench_single");
  const auto r = run_benchmark(c);
  REQUIRE(r.rows.size() == 1);
  const auto& row = r.rows[0];
  CHECK(row.status == "ok");
  CHECK(row.cells == 512);
  CHECK(row.dofs == 225);
  CHECK(row.iterations >= 6);
  CHECK(row.iterations <= 11);
  CHECK(row.rho_tg > 0.0);
  const auto csv = lines(slurp(c.out_dir / "results.csv"));
  REQUIRE(csv.size() == 2);
  CHECK(csv[0] == "mesh,cells,dofs,cycle,levels,nu,mode,iterations,rho,rho_tg,wall_ms,status");
  CHECK(count(csv[1], ',') == 11);
  CHECK(csv[1].rfind("structured_16,512,225,tl,2,2,inherited,", 0) == 0);
}

TEST_CASE("grid shape, baselines, SVG dump and byte-identical output") {
  BenchConfig c;
  c.meshes = {MeshSource{8, {}}, MeshSource{10, {}}};
  c.levels = {3};
  c.nu = {2, 4};
  c.out_dir = testing::scratch_dir("bench_grid_a");
  const auto r = run_benchmark(c);
  // per set: (tl + v + w) x 2 nu x 2 modes + cg + pcg
  CHECK(r.rows.size() == 2 * (3 * 2 * 2 + 2));
  for (const auto& row : r.rows) CHECK(row.status == "ok");
  for (int j = 1; j <= 3; ++j) {
    CHECK(std::filesystem::exists(c.out_dir / "meshes" / ("level_" + std::to_string(j) + ".svg")));
    CHECK(std::filesystem::exists(c.out_dir / "meshes" / ("level_" + std::to_string(j) + ".txt")));
  }
  CHECK(std::filesystem::exists(c.out_dir / "timings.csv"));

  const auto first = slurp(c.out_dir / "results.csv");
  c.out_dir = testing::scratch_dir("bench_grid_b");
  run_benchmark(c);
  CHECK(first == slurp(c.out_dir / "results.csv"));
}

TEST_CASE("module errors become row statuses") {
  BenchConfig c;
  c.meshes = {MeshSource{0, "/nonexistent/mesh"}, MeshSource{4, {}}};
  c.levels = {4};
  c.cycles = {CycleKind::w};
  c.nu = {2};
  c.modes = {CoarseMode::inherited};
  c.baselines = false;
  c.svg = false;
  c.out_dir = testing::scratch_dir("bench_errors");
  const auto r = run_benchmark(c);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].status.rfind("error:", 0) == 0);
  // n = 4 cannot support four levels
  CHECK(r.rows[1].status.rfind("error:", 0) == 0);
  const auto csv = slurp(c.out_dir / "results.csv");
  CHECK(lines(csv).size() == 3);
}

TEST_CASE("convergence study") {
  BenchConfig c;
  c.out_dir = testing::scratch_dir("study");
  c.study_n = {4};
  const auto one = run_convergence_study(c);
  REQUIRE(one.rows.size() == 1);
  CHECK(one.rows[0].l2 > 0.0);
  CHECK(one.rows[0].h1 > 0.0);
  CHECK(std::isfinite(one.rows[0].l2));

  c.study_n = {4, 8, 16, 32};
  const auto s = run_convergence_study(c);
  CHECK(s.l2_order >= 1.8);
  CHECK(s.l2_order <= 2.2);
  CHECK(s.h1_order >= 0.8);
  CHECK(s.h1_order <= 1.2);
  const auto csv = lines(slurp(c.out_dir / "orders.csv"));
  CHECK(csv.size() == 6);
  CHECK(csv.back().rfind("order,", 0) == 0);
}

TEST_CASE("least squares slope and benchmark data") {
  CHECK(fitted_slope({0, 1, 2}, {1, 3, 5}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(fitted_slope({1}, {1}), Error);
  CHECK_THROWS_AS(fitted_slope({1, 1}, {1, 2}), Error);
  // -lap u = f checked by central differences
  const double h = 1e-4;
  for (int k = 0; k < 20; ++k) {
    const Point p{testing::uniform(0.1, 0.9), testing::uniform(0.1, 0.9)};
    const double lap = (benchmark_exact({p.x + h, p.y}) + benchmark_exact({p.x - h, p.y}) +
                        benchmark_exact({p.x, p.y + h}) + benchmark_exact({p.x, p.y - h}) -
                        4 * benchmark_exact(p)) /
                       (h * h);
    CHECK(-lap == doctest::Approx(benchmark_rhs(p)).epsilon(1e-6));
    const Point g = benchmark_exact_gradient(p);
    CHECK(g.x == doctest::Approx((benchmark_exact({p.x + h, p.y}) - benchmark_exact({p.x - h, p.y})) / (2 * h)).epsilon(1e-6));
  }
}

}  // TEST_SUITE
