#include "pirpnn/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "pirpnn/classical.hpp"
#include "pirpnn/csv.hpp"
#include "pirpnn/errors.hpp"
#include "pirpnn/harness.hpp"
#include "pirpnn/problems.hpp"
#include "pirpnn/stability.hpp"

namespace pirpnn::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Common {
  std::string config_path;
  std::string output;
  int threads = 0;
  std::uint64_t seed = 0;
  double delta = 0.0;
  double alpha = 0.0;
  int m = 3;
  int n = 0;
};

struct ProblemFlags {
  std::string problem;
  double lambda = -1.0;
  double u0 = 1.0;
  double t_end = 0.0;
  int n_interior = 100;
  double nu = 0.1;
  double reaction = 10.0;
  double a_amp = 0.4;
  double c_amp = 1.5;

  ProblemParams params() const {
    ProblemParams p;
    p.lambda = lambda;
    p.u0 = u0;
    p.t_end = t_end;
    p.diffreac.n_interior = n_interior;
    p.diffreac.nu = nu;
    p.diffreac.lambda_r = reaction;
    p.diffreac.a_amp = a_amp;
    p.diffreac.c_amp = c_amp;
    return p;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "Flat key = value file; command-line flags take precedence");
  sub->add_option("--output,-o", c.output, "Output CSV path (default: $PIRPNN_OUTPUT_DIR or the working directory)");
  sub->add_option("--threads", c.threads, "Worker threads (0 = all available)")->capture_default_str();
  sub->add_option("--seed", c.seed, "Base seed for random features")->capture_default_str();
  sub->add_option("--delta", c.delta, "Ridge regularization (0 = truncated-SVD pseudoinverse)")->capture_default_str();
  sub->add_option("--alpha", c.alpha, "Fixed RBF scale a_U (0 = default formula)")->capture_default_str();
  sub->add_option("--m", c.m, "Collocation points per step")->capture_default_str();
  sub->add_option("--n", c.n, "Random features (0 = 3M)")->capture_default_str();
}

void add_problem(CLI::App* sub, ProblemFlags& p) {
  sub->add_option("--problem", p.problem, "dahlquist, example1 or diffreac")->capture_default_str();
  sub->add_option("--lambda", p.lambda, "Dahlquist rate")->capture_default_str();
  sub->add_option("--u0", p.u0, "Dahlquist initial value")->capture_default_str();
  sub->add_option("--t-end", p.t_end, "End time (0 = problem default)")->capture_default_str();
  sub->add_option("--n-interior", p.n_interior, "Interior grid nodes (diffreac)")->capture_default_str();
  sub->add_option("--nu", p.nu, "Diffusivity (diffreac)")->capture_default_str();
  sub->add_option("--reaction", p.reaction, "Reaction rate (diffreac)")->capture_default_str();
  sub->add_option("--a-amp", p.a_amp, "cos(2x) amplitude (diffreac)")->capture_default_str();
  sub->add_option("--c-amp", p.c_amp, "Constant amplitude (diffreac)")->capture_default_str();
}

SolverSettings settings_from(const Common& c) {
  SolverSettings s;
  s.delta = c.delta;
  s.seed = c.seed;
  s.m_colloc = c.m;
  s.n_features = c.n;
  if (c.alpha > 0.0) s.alpha = AlphaPolicy::fixed(c.alpha);
  return s;
}

std::vector<double> parse_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string("malformed number in ") + what + ": '" + item + "'");
    }
  }
  return out;
}

std::vector<std::string> parse_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

fs::path output_path(const Common& c, const std::string& fallback_name) {
  if (!c.output.empty()) return c.output;
  const char* dir = std::getenv("PIRPNN_OUTPUT_DIR");
  return (dir && *dir) ? fs::path(dir) / fallback_name : fs::path(fallback_name);
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file " + path.string());
  return os;
}

ordered_json machine_fingerprint() {
  char host[256] = {};
  gethostname(host, sizeof(host) - 1);
  ordered_json m;
  m["hostname"] = host;
  m["compiler"] = __VERSION__;
  m["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  m["hardware_threads"] = std::thread::hardware_concurrency();
  m["omp_max_threads"] = omp_get_max_threads();
  m["pointer_bits"] = 8 * sizeof(void*);
  return m;
}

// Every option of the subcommand with the value actually in effect.
ordered_json resolved_options(const CLI::App* sub) {
  ordered_json cfg;
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
    if (name == "help") continue;
    cfg[name] = opt->count() > 0 ? opt->as<std::string>() : opt->get_default_str();
  }
  return cfg;
}

void write_manifest(const fs::path& output, const CLI::App* sub, ordered_json extra) {
  ordered_json manifest;
  manifest["subcommand"] = sub->get_name();
  manifest["output"] = output.string();
  manifest["config"] = resolved_options(sub);
  std::string flat;
  for (const auto& [key, value] : manifest["config"].items()) {
    if (key != "config" && key != "output") flat += key + " = " + value.get<std::string>() + "\n";
  }
  manifest["config_file"] = flat;
  for (auto& [key, value] : extra.items()) manifest[key] = value;
  manifest["machine"] = machine_fingerprint();
  fs::path path = output;
  path += ".manifest.json";
  std::ofstream os = open_output(path);
  os << manifest.dump(2) << '\n';
}

// Expands `--config FILE` into `--key value` tokens placed right after the
// subcommand so that explicit flags, which come later, win.
std::vector<std::string> expand_config(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    }
  }
  if (path.empty() || args.size() < 2) return args;
  std::vector<std::string> injected;
  for (const auto& [key, value] : read_config_file(path)) {
    if (key == "config") throw ConfigError("config files cannot include other config files");
    injected.push_back("--" + key);
    injected.push_back(value);
  }
  args.insert(args.begin() + 2, injected.begin(), injected.end());
  return args;
}

void apply_threads(int threads) {
  if (threads < 0) throw ConfigError("--threads must be >= 0");
  omp_set_num_threads(threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random-feature collocation stepping for stiff linear ODEs", "pirpnn"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common common;
  ProblemFlags prob;

  CLI::App* solve = app.add_subcommand("solve", "Integrate one problem and write the trajectory");
  add_common(solve, common);
  add_problem(solve, prob);
  std::string solver = "pirpnn-m3";
  double h = 0.1;
  solve->add_option("--solver", solver, "pirpnn-m3, pirpnn-m10, pirpnn (uses --m/--n) or a classical scheme")
      ->capture_default_str();
  solve->add_option("--h", h, "Step size")->capture_default_str();

  CLI::App* region = app.add_subcommand("region", "Monte-Carlo stability scan of the complex plane");
  add_common(region, common);
  ScanConfig scan;
  region->add_option("--runs", scan.mc_runs, "Monte-Carlo runs per cell")->capture_default_str();
  region->add_option("--re-min", scan.re_min)->capture_default_str();
  region->add_option("--re-max", scan.re_max)->capture_default_str();
  region->add_option("--im-min", scan.im_min)->capture_default_str();
  region->add_option("--im-max", scan.im_max)->capture_default_str();
  region->add_option("--points", scan.approx_points_per_axis, "Approximate points per axis")->capture_default_str();
  region->add_option("--refine-ratio", scan.refine_ratio)->capture_default_str();
  region->add_option("--refine-levels", scan.refine_levels, "Geometric levels per anchor (0 disables)")
      ->capture_default_str();

  std::string solvers_text = join(default_solvers());
  std::string h_text;
  int reps = 5;
  double floor = 0.0;
  CLI::App* bench = app.add_subcommand("bench", "Error and timing table over solvers and step sizes");
  CLI::App* orders = app.add_subcommand("orders", "Fitted convergence orders per solver");
  for (CLI::App* sub : {bench, orders}) {
    add_common(sub, common);
    add_problem(sub, prob);
    sub->add_option("--solvers", solvers_text, "Comma-separated solver names")->capture_default_str();
    sub->add_option("--h-values", h_text, "Comma-separated decreasing step sizes (default 2^-1..2^-10)");
  }
  bench->add_option("--reps", reps, "Timed repetitions per (solver, h)")->capture_default_str();
  orders->add_option("--floor", floor, "Saturation floor (0 = detect)")->capture_default_str();

  // Subcommand-specific defaults differ from the shared fields.
  prob.problem = "dahlquist";
  solve->get_option("--problem")->default_str("dahlquist");
  region->get_option("--m")->default_str("10");
  region->get_option("--delta")->default_str("1e-08");
  bench->get_option("--problem")->default_str("example1");
  orders->get_option("--problem")->default_str("example1");

  try {
    const std::vector<std::string> args = expand_config(argc, argv);
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());
    // Region defaults that differ from the shared ones apply unless overridden.
    const bool is_region = args.size() > 1 && args[1] == "region";
    const bool is_bench = args.size() > 1 && (args[1] == "bench" || args[1] == "orders");
    if (is_region) {
      common.m = 10;
      common.delta = 1e-8;
    }
    if (is_bench) prob.problem = "example1";
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    apply_threads(common.threads);
    const SolverSettings settings = settings_from(common);

    if (solve->parsed()) {
      const ProblemInstance problem = make_problem(prob.problem, prob.params());
      check_solver_name(solver);
      const Trajectory traj = run_solver(solver, problem.linear, h, settings);
      const fs::path path = output_path(common, "solve_" + prob.problem + "_" + solver + ".csv");
      std::ofstream os = open_output(path);
      csv::write_trajectory(os, traj);
      write_manifest(path, solve, {{"seed", common.seed}, {"solver_config", traj.config}});
      out << "wrote " << path.string() << " (" << traj.times.size() << " rows)\n";
      return kExitOk;
    }

    if (region->parsed()) {
      scan.m_colloc = common.m;
      scan.n_features = common.n;
      scan.delta = common.delta;
      if (common.alpha > 0.0) scan.alpha = AlphaPolicy::fixed(common.alpha);
      scan.validate();
      const StabilityScan result = scan_region(scan, common.seed);
      const fs::path path = output_path(common, "region_m" + std::to_string(scan.m_colloc) + ".csv");
      std::ofstream os = open_output(path);
      csv::write_scan(os, result);
      int failed = 0;
      for (int f : result.flag) failed += f;
      write_manifest(path, region,
                     {{"seed", common.seed},
                      {"cell_seed_rule", "derive(derive(seed, cell), run)"},
                      {"cells", result.mesh.size()},
                      {"failed_cells", failed}});
      out << "wrote " << path.string() << " (" << result.mesh.size() << " cells)\n";
      return kExitOk;
    }

    ExperimentSpec spec;
    spec.problem = prob.problem;
    spec.params = prob.params();
    spec.solvers = parse_names(solvers_text);
    if (!h_text.empty()) spec.h_values = parse_doubles(h_text, "--h-values");
    spec.settings = settings;
    spec.repetitions = reps;

    if (bench->parsed()) {
      const std::vector<ResultRow> rows = run_convergence(spec);
      const fs::path path = output_path(common, "bench_" + spec.problem + ".csv");
      std::ofstream os = open_output(path);
      write_results_csv(os, rows);
      write_manifest(path, bench, {{"seed", common.seed}, {"rows", rows.size()}});
      out << "wrote " << path.string() << " (" << rows.size() << " rows)\n";
      return kExitOk;
    }

    // orders
    spec.timing = false;
    const std::vector<ResultRow> rows = run_convergence(spec);
    const fs::path path = output_path(common, "orders_" + spec.problem + ".csv");
    std::ofstream os = open_output(path);
    os << "solver,order\n";
    for (const auto& name : spec.solvers) {
      std::string value;
      try {
        const double p = floor > 0.0 ? fit_order(rows_for(rows, name), floor) : fit_order(rows_for(rows, name));
        value = csv::format_double(p);
      } catch (const InsufficientDataError&) {
        value = "nan";
      }
      os << csv::escape(name) << ',' << value << '\n';
      out << name << ' ' << value << '\n';
    }
    write_manifest(path, orders, {{"seed", common.seed}});
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n' << app.help();
    return kExitConfig;
  } catch (const ArgumentError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace pirpnn::cli
