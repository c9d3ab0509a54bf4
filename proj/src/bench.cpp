#include "vemg/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "vemg/agglomeration.hpp"
#include "vemg/error.hpp"
#include "vemg/krylov.hpp"
#include "vemg/multigrid.hpp"
#include "vemg/vem.hpp"

namespace vemg {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string current;
  for (char c : value) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!current.empty()) items.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) items.push_back(current);
  return items;
}

int parse_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error("config: '" + key + "' expects an integer, got '" + text + "'");
  }
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error("config: '" + key + "' expects a number, got '" + text + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "on" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "off" || text == "no" || text == "0") return false;
  throw Error("config: '" + key + "' expects true/false, got '" + text + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  for (const auto& item : split_list(value)) out.push_back(parse_int(key, item));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += "\"\"";
    else if (c == '\n') q += ' ';
    else q += c;
  }
  return q + "\"";
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   since)
      .count();
}

std::vector<double> direct_solve(const SparseMatrix& a, std::span<const double> b) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(a.nnz());
  for (SparseMatrix::Index i = 0; i < a.rows(); ++i)
    for (auto k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
      trips.emplace_back(i, a.col_index()[k], a.values()[k]);
  Eigen::SparseMatrix<double> m(a.rows(), a.cols());
  m.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(m);
  if (llt.info() != Eigen::Success) throw Error("direct solve: factorization failed");
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
  Eigen::VectorXd x = llt.solve(rhs);
  return {x.data(), x.data() + x.size()};
}

// Everything a mesh set needs, built once and shared by its rows.
struct SetData {
  std::string id;
  PolygonalMesh fine;
  AssembledSystem system;
};

}  // namespace

std::string_view to_string(CycleKind cycle) {
  switch (cycle) {
    case CycleKind::tl: return "tl";
    case CycleKind::v: return "v";
    case CycleKind::w: return "w";
  }
  return "?";
}

CycleKind parse_cycle(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "tl") return CycleKind::tl;
  if (t == "v") return CycleKind::v;
  if (t == "w") return CycleKind::w;
  throw Error("unknown cycle '" + std::string(text) + "' (expected tl, v or w)");
}

std::string MeshSource::id() const {
  if (structured_n > 0) return "structured_" + std::to_string(structured_n);
  return triangle_base.filename().string();
}

PolygonalMesh MeshSource::load() const {
  if (structured_n > 0) return generate_structured_triangle_mesh(structured_n);
  auto node = triangle_base;
  auto ele = triangle_base;
  node += ".node";
  ele += ".ele";
  return load_triangle_format(node, ele);
}

BenchConfig::BenchConfig() {
  for (int n : {16, 23, 31, 44}) meshes.push_back(MeshSource{n, {}});
}

void validate(const BenchConfig& c) {
  if (c.meshes.empty()) throw Error("config: no mesh sets");
  for (const auto& m : c.meshes)
    if (m.structured_n <= 0 && m.triangle_base.empty())
      throw Error("config: mesh set without a source");
  if (c.cycles.empty()) throw Error("config: cycle list is empty");
  if (c.nu.empty()) throw Error("config: nu list is empty");
  if (c.modes.empty()) throw Error("config: mode list is empty");
  for (int nu : c.nu)
    if (nu < 1) throw Error("config: nu must be >= 1, got " + std::to_string(nu));
  const bool multilevel = std::any_of(c.cycles.begin(), c.cycles.end(),
                                      [](CycleKind k) { return k != CycleKind::tl; });
  if (multilevel && c.levels.empty()) throw Error("config: levels list is empty");
  for (int j : c.levels)
    if (j < 2 || j > 4) throw Error("config: levels must lie in 2..4, got " + std::to_string(j));
  if (c.target_children.empty()) throw Error("config: target_children is empty");
  for (int t : c.target_children)
    if (t < 2) throw Error("config: target_children entries must be >= 2");
  if (!(c.tolerance > 0.0 && c.tolerance < 1.0))
    throw Error("config: tolerance must lie in (0, 1)");
  if (c.max_iterations < 1) throw Error("config: max_iterations must be >= 1");
  if (!(c.mu > 0.0)) throw Error("config: mu must be positive");
  if (!(c.ict_drop_tol >= 0.0)) throw Error("config: ict_drop_tol must be >= 0");
  if (c.ict_max_fill < 0) throw Error("config: ict_max_fill must be >= 0");
  if (c.out_dir.empty()) throw Error("config: out directory is empty");
  for (int n : c.study_n)
    if (n < 2) throw Error("config: study_n entries must be >= 2");
}

void apply_setting(BenchConfig& c, const std::string& key, const std::string& value) {
  if (key == "structured") {
    c.meshes.clear();
    for (int n : parse_int_list(key, value)) c.meshes.push_back(MeshSource{n, {}});
  } else if (key == "triangle") {
    c.meshes.clear();
    for (const auto& base : split_list(value)) c.meshes.push_back(MeshSource{0, base});
  } else if (key == "levels") {
    c.levels = parse_int_list(key, value);
  } else if (key == "target_children") {
    c.target_children = parse_int_list(key, value);
  } else if (key == "cycles" || key == "cycle") {
    c.cycles.clear();
    for (const auto& item : split_list(value)) c.cycles.push_back(parse_cycle(item));
  } else if (key == "nu") {
    c.nu = parse_int_list(key, value);
  } else if (key == "modes" || key == "mode") {
    c.modes.clear();
    for (const auto& item : split_list(value)) c.modes.push_back(parse_coarse_mode(item));
  } else if (key == "tolerance" || key == "tol") {
    c.tolerance = parse_double(key, value);
  } else if (key == "max_iterations") {
    c.max_iterations = parse_int(key, value);
  } else if (key == "mu") {
    c.mu = parse_double(key, value);
  } else if (key == "out") {
    c.out_dir = value;
  } else if (key == "seed") {
    try {
      c.seed = std::stoull(value);
    } catch (const std::exception&) {
      throw Error("config: 'seed' expects an unsigned integer, got '" + value + "'");
    }
  } else if (key == "baselines") {
    c.baselines = parse_bool(key, value);
  } else if (key == "ict_drop_tol") {
    c.ict_drop_tol = parse_double(key, value);
  } else if (key == "ict_max_fill") {
    c.ict_max_fill = parse_int(key, value);
  } else if (key == "spectral") {
    c.spectral = parse_bool(key, value);
  } else if (key == "svg") {
    c.svg = parse_bool(key, value);
  } else if (key == "record_wall_time") {
    c.record_wall_time = parse_bool(key, value);
  } else if (key == "study_n") {
    c.study_n = parse_int_list(key, value);
  } else {
    throw Error("config: unknown key '" + key + "'");
  }
}

BenchConfig parse_config(std::istream& in, BenchConfig base) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config line " + std::to_string(number) + ": expected 'key = value'");
    apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

BenchConfig load_config(const std::filesystem::path& path, BenchConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  return parse_config(in, std::move(base));
}

double benchmark_rhs(const Point& p) {
  return -2.0 * (p.x * (p.x - 1.0) + p.y * (p.y - 1.0));
}

double benchmark_exact(const Point& p) {
  return p.x * (1.0 - p.x) * p.y * (1.0 - p.y);
}

Point benchmark_exact_gradient(const Point& p) {
  return {(1.0 - 2.0 * p.x) * p.y * (1.0 - p.y), p.x * (1.0 - p.x) * (1.0 - 2.0 * p.y)};
}

void write_results_csv(const BenchResult& result, std::ostream& out,
                       bool with_wall_time) {
  out << "mesh,cells,dofs,cycle,levels,nu,mode,iterations,rho,rho_tg,wall_ms,status\n";
  for (const auto& r : result.rows) {
    out << csv_field(r.mesh_id) << ',' << r.cells << ',' << r.dofs << ',' << r.cycle << ','
        << (r.levels > 0 ? std::to_string(r.levels) : "") << ','
        << (r.nu > 0 ? std::to_string(r.nu) : "") << ',' << r.mode << ',' << r.iterations
        << ',' << fixed(r.rho, 6) << ',' << (r.rho_tg >= 0.0 ? fixed(r.rho_tg, 6) : "")
        << ',' << (with_wall_time ? fixed(r.wall_ms, 3) : "") << ','
        << csv_field(r.status) << '\n';
  }
}

BenchResult run_benchmark(const BenchConfig& config) {
  validate(config);
  BenchResult result;
  MGConfig mg_config;
  mg_config.tolerance = config.tolerance;
  mg_config.max_iterations = config.max_iterations;

  for (std::size_t set = 0; set < config.meshes.size(); ++set) {
    const MeshSource& source = config.meshes[set];
    BenchRow proto;
    proto.mesh_id = source.id();

    std::optional<SetData> data;
    try {
      PolygonalMesh fine = source.load();
      AssembledSystem sys = assemble_system(fine, config.mu, [&](const Point& p) {
        return config.mu * benchmark_rhs(p);
      });
      data.emplace(SetData{proto.mesh_id, std::move(fine), std::move(sys)});
      proto.cells = data->fine.num_cells();
      proto.dofs = data->system.dofs.size();
    } catch (const std::exception& e) {
      BenchRow row = proto;
      row.cycle = "setup";
      row.status = std::string("error: ") + e.what();
      result.rows.push_back(row);
      continue;
    }
    const SparseMatrix& a = data->system.A;
    const std::vector<double>& b = data->system.rhs;

    // Hierarchies and transfer sets per level count, shared by every cycle
    // and smoothing count.
    std::vector<int> level_counts;
    for (CycleKind k : config.cycles) {
      if (k == CycleKind::tl) level_counts.push_back(2);
      else level_counts.insert(level_counts.end(), config.levels.begin(), config.levels.end());
    }
    std::sort(level_counts.begin(), level_counts.end());
    level_counts.erase(std::unique(level_counts.begin(), level_counts.end()), level_counts.end());

    std::map<int, MeshHierarchy> hierarchies;
    std::map<int, std::string> hierarchy_errors;
    for (int j : level_counts) {
      try {
        MeshHierarchy h = build_hierarchy(data->fine, j, config.target_children);
        if (h.num_levels() != j)
          throw Error("hierarchy stopped at " + std::to_string(h.num_levels()) +
                      " levels (coarsest level too small)");
        hierarchies.emplace(j, std::move(h));
      } catch (const std::exception& e) {
        hierarchy_errors[j] = e.what();
      }
    }

    if (set == 0 && config.svg && !hierarchies.empty()) {
      const MeshHierarchy& deepest = hierarchies.rbegin()->second;
      const auto dir = config.out_dir / "meshes";
      std::filesystem::create_directories(dir);
      write_hierarchy(deepest, dir);
      for (int j = 1; j <= deepest.num_levels(); ++j)
        export_svg(deepest.mesh(j), dir / ("level_" + std::to_string(j) + ".svg"));
    }

    for (CycleKind kind : config.cycles) {
      std::vector<int> js = kind == CycleKind::tl ? std::vector<int>{2} : config.levels;
      for (int j : js) {
        for (CoarseMode mode : config.modes) {
          std::optional<TransferSet> transfer;
          std::string setup_error;
          if (auto it = hierarchy_errors.find(j); it != hierarchy_errors.end()) {
            setup_error = it->second;
          } else {
            try {
              transfer.emplace(coarse_operators(a, hierarchies.at(j), config.mu, mode));
            } catch (const std::exception& e) {
              setup_error = e.what();
            }
          }
          for (int nu : config.nu) {
            BenchRow row = proto;
            row.cycle = std::string(to_string(kind));
            row.levels = j;
            row.nu = nu;
            row.mode = std::string(to_string(mode));
            if (!transfer) {
              row.status = "error: " + setup_error;
              result.rows.push_back(row);
              continue;
            }
            try {
              const int p = kind == CycleKind::v ? 1 : 2;
              MultigridSolver mg(*transfer, nu, p);
              MGConfig cfg = mg_config;
              cfg.cycle = p;
              cfg.smoothing_steps = nu;
              const auto t0 = std::chrono::steady_clock::now();
              SolveReport rep = mg_solve(a, b, mg, cfg);
              row.wall_ms = elapsed_ms(t0);
              row.iterations = rep.iterations;
              row.rho = rep.rho;
              if (!rep.converged) row.status = "not_converged";
              if (kind == CycleKind::tl && config.spectral)
                row.rho_tg = two_grid_spectral_radius(a, mg, config.seed).rho;
            } catch (const std::exception& e) {
              row.status = std::string("error: ") + e.what();
            }
            result.rows.push_back(row);
          }
        }
      }
    }

    if (config.baselines) {
      KrylovOptions opts;
      opts.tolerance = config.tolerance;
      BenchRow cg = proto;
      cg.cycle = "cg";
      try {
        const auto t0 = std::chrono::steady_clock::now();
        SolveReport rep = cg_solve(a, b, opts);
        cg.wall_ms = elapsed_ms(t0);
        cg.iterations = rep.iterations;
        cg.rho = rep.rho;
        if (!rep.converged) cg.status = "not_converged";
      } catch (const std::exception& e) {
        cg.status = std::string("error: ") + e.what();
      }
      result.rows.push_back(cg);

      BenchRow pcg = proto;
      pcg.cycle = "pcg";
      try {
        const auto t0 = std::chrono::steady_clock::now();
        IcFactor ic = ic_factorize(a, config.ict_drop_tol, config.ict_max_fill);
        SolveReport rep = pcg_solve(a, b, ic, opts);
        pcg.wall_ms = elapsed_ms(t0);
        pcg.iterations = rep.iterations;
        pcg.rho = rep.rho;
        if (!rep.converged) pcg.status = "not_converged";
      } catch (const std::exception& e) {
        pcg.status = std::string("error: ") + e.what();
      }
      result.rows.push_back(pcg);
    }
  }

  std::filesystem::create_directories(config.out_dir);
  {
    std::ofstream out(config.out_dir / "results.csv", std::ios::binary);
    if (!out) throw Error("cannot write " + (config.out_dir / "results.csv").string());
    write_results_csv(result, out, config.record_wall_time);
  }
  {
    std::ofstream out(config.out_dir / "timings.csv", std::ios::binary);
    out << "mesh,cycle,levels,nu,mode,wall_ms\n";
    for (const auto& r : result.rows)
      out << csv_field(r.mesh_id) << ',' << r.cycle << ','
          << (r.levels > 0 ? std::to_string(r.levels) : "") << ','
          << (r.nu > 0 ? std::to_string(r.nu) : "") << ',' << r.mode << ','
          << fixed(r.wall_ms, 3) << '\n';
  }
  return result;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error("fitted_slope: need at least two matching samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error("fitted_slope: all abscissae coincide");
  return (n * sxy - sx * sy) / denom;
}

StudyResult run_convergence_study(const BenchConfig& config) {
  validate(config);
  StudyResult result;
  std::vector<double> log_h, log_l2, log_h1;
  for (int n : config.study_n) {
    PolygonalMesh mesh = generate_structured_triangle_mesh(n);
    AssembledSystem sys = assemble_system(mesh, 1.0, benchmark_rhs);
    std::vector<double> u = direct_solve(sys.A, sys.rhs);
    ErrorNorms err = error_norms(mesh, u, benchmark_exact, benchmark_exact_gradient);
    StudyRow row{n, mesh.mesh_size(), sys.dofs.size(), err.l2, err.h1};
    if (!(err.l2 > 0.0 && err.h1 > 0.0 && std::isfinite(err.l2) && std::isfinite(err.h1)))
      throw Error("convergence study: non-positive or non-finite error at n = " +
                  std::to_string(n));
    result.rows.push_back(row);
    log_h.push_back(std::log(row.h));
    log_l2.push_back(std::log(row.l2));
    log_h1.push_back(std::log(row.h1));
  }
  if (result.rows.size() >= 2) {
    result.l2_order = fitted_slope(log_h, log_l2);
    result.h1_order = fitted_slope(log_h, log_h1);
  }

  std::filesystem::create_directories(config.out_dir);
  std::ofstream out(config.out_dir / "orders.csv", std::ios::binary);
  if (!out) throw Error("cannot write " + (config.out_dir / "orders.csv").string());
  char buf[256];
  out << "kind,n,h,dofs,l2_error,h1_error\n";
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof buf, "level,%d,%.6e,%zu,%.6e,%.6e\n", r.n, r.h, r.dofs, r.l2,
                  r.h1);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "order,,,,%.4f,%.4f\n", result.l2_order, result.h1_order);
  out << buf;
  return result;
}

}  // namespace vemg
