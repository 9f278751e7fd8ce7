#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mpsanneal/mpsanneal.hpp"

using namespace mpsanneal;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

std::vector<int> parse_chi_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& tok : split_list(s)) {
    const auto v = parse_long(tok);
    if (!v || *v < 1) throw ArgumentError("bad chi '" + tok + "'");
    out.push_back(static_cast<int>(*v));
  }
  if (out.empty()) throw ArgumentError("empty chi list");
  return out;
}

std::vector<double> parse_times(const std::string& s, double t0) {
  std::vector<double> out;
  for (const auto& tok : split_list(s)) out.push_back(parse_time_token(tok, t0));
  if (out.empty()) throw ArgumentError("empty time list");
  return out;
}

ClassifyMode parse_mode(const std::string& s) {
  if (s == "stop") return ClassifyMode::stop_at_chi_star;
  if (s == "minimal") return ClassifyMode::minimal_time_per_chi;
  throw ArgumentError("mode must be 'stop' or 'minimal'");
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  write_file_atomic(path, text);
}

std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : "none"; }

std::string classical_trajectory_csv(const std::vector<TrajectorySample>& samples) {
  std::string s = csv_row({"t", "site", "nx", "ny", "nz"});
  for (const auto& sample : samples)
    for (std::size_t i = 0; i < sample.state.size(); ++i) {
      const Vec3& n = sample.state.n[i];
      s += csv_row({format_double(sample.t), std::to_string(i), format_double(n.x()), format_double(n.y()),
                    format_double(n.z())});
    }
  return s;
}

struct EngineArgs {
  std::string engine = "tebd";
  double dt = default_dt;
  double gamma = 0.0;
  double temperature = 0.0;
  std::string schedule;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--engine", engine, "tebd, langevin, gd, llg or metropolis")->capture_default_str();
    cmd->add_option("--dt", dt, "time step (sweeps per unit time for metropolis)")->capture_default_str();
    cmd->add_option("--gamma", gamma, "damping; 0 selects the engine default");
    cmd->add_option("--temp", temperature, "noise temperature");
    cmd->add_option("--schedule", schedule, "schedule file of 't A B' lines, rescaled to each sweep time");
  }

  EngineOptions options() const {
    EngineOptions o;
    o.engine = engine_from_string(engine);
    o.dt = dt;
    o.gamma = gamma;
    o.temperature = temperature;
    if (!schedule.empty()) o.shape = load_schedule(schedule);
    return o;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adiabatic annealing of transverse-field Ising problems at bounded Schmidt rank"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a cohort of random instances with exact ground states");
  std::string gen_topology = "chain", gen_out;
  int gen_n = 30, gen_count = 50;
  std::uint64_t gen_seed = 0;
  double gen_delta = 1.0;
  gen->add_option("--topology", gen_topology, "chain or ladder16")->capture_default_str();
  gen->add_option("--n", gen_n, "sites per instance")->capture_default_str();
  gen->add_option("--count", gen_count, "number of instances")->capture_default_str();
  gen->add_option("--seed", gen_seed, "cohort seed")->capture_default_str();
  gen->add_option("--delta", gen_delta, "transverse field strength")->capture_default_str();
  gen->add_option("--out", gen_out, "results directory")->required();

  // run
  auto* run = app.add_subcommand("run", "run the (chi, T) grid over a cohort, resuming finished cells");
  std::string run_dir, run_mode = "minimal";
  std::vector<std::string> run_grid;
  EngineArgs run_engine_args;
  int run_workers = 1, run_repeats = 1;
  std::uint64_t run_seed_base = 0;
  bool run_full = false, run_quiet = false;
  run->add_option("dir", run_dir, "results directory from gen")->required();
  run->add_option("--grid", run_grid, "chi=1,2,3,4 time=T0,2T0,4T0,8T0")->expected(1, 2);
  run_engine_args.add_to(run);
  run->add_option("--workers", run_workers, "worker threads (MPSANNEAL_WORKERS overrides)")->capture_default_str();
  run->add_option("--mode", run_mode, "tebd classification: stop (at chi*) or minimal (T* for every chi)")
      ->capture_default_str();
  run->add_flag("--full-grid", run_full, "tebd: run every cell instead of the classification schedule");
  run->add_option("--repeats", run_repeats, "seeds per cell for stochastic engines")->capture_default_str();
  run->add_option("--seed", run_seed_base, "base seed for stochastic engines")->capture_default_str();
  run->add_flag("--quiet", run_quiet, "no per-instance progress on stderr");

  // report
  auto* report = app.add_subcommand("report", "regenerate the report CSVs of a results directory");
  std::string report_dir;
  report->add_option("dir", report_dir, "results directory")->required();

  // solve-exact
  auto* solve = app.add_subcommand("solve-exact", "exact ground energy, degeneracy and up to 64 configurations");
  std::string solve_file;
  solve->add_option("instance", solve_file, "instance file")->required()->check(CLI::ExistingFile);

  // anneal
  auto* anneal = app.add_subcommand("anneal", "one annealing run; prints a run record CSV");
  std::string anneal_file, anneal_time = "T0", anneal_out, anneal_traj;
  EngineArgs anneal_engine_args;
  int anneal_chi = 1;
  std::uint64_t anneal_seed = 0;
  std::size_t anneal_every = 1;
  anneal->add_option("instance", anneal_file, "instance file")->required()->check(CLI::ExistingFile);
  anneal_engine_args.add_to(anneal);
  anneal->add_option("--chi", anneal_chi, "Schmidt rank (tebd, langevin)")->capture_default_str();
  anneal->add_option("--time", anneal_time, "sweep time, a number or a multiple of T0")->capture_default_str();
  anneal->add_option("--seed", anneal_seed, "noise seed")->capture_default_str();
  anneal->add_option("--out", anneal_out, "record CSV file (default stdout)");
  anneal->add_option("--trajectory", anneal_traj, "gd or llg: write t,site,nx,ny,nz to this file");
  anneal->add_option("--every", anneal_every, "trajectory stride in steps")->capture_default_str();

  // classify
  auto* classify = app.add_subcommand("classify", "threshold Schmidt rank chi* and minimal times T*(chi)");
  std::string classify_file, classify_chis = "1,2,3,4", classify_times = "T0,2T0,4T0,8T0", classify_mode = "minimal";
  double classify_dt = default_dt;
  classify->add_option("instance", classify_file, "instance file")->required()->check(CLI::ExistingFile);
  classify->add_option("--chi", classify_chis, "rank grid")->capture_default_str();
  classify->add_option("--time", classify_times, "time grid")->capture_default_str();
  classify->add_option("--dt", classify_dt, "time step")->capture_default_str();
  classify->add_option("--mode", classify_mode, "stop or minimal")->capture_default_str();

  // hull
  auto* hull = app.add_subcommand("hull", "full (chi, T) success grid as CSV");
  std::string hull_file, hull_chis = "1,2,3,4", hull_times = "T0,2T0,4T0,8T0", hull_id, hull_out;
  double hull_dt = default_dt;
  hull->add_option("instance", hull_file, "instance file")->required()->check(CLI::ExistingFile);
  hull->add_option("--chi", hull_chis, "rank grid")->capture_default_str();
  hull->add_option("--time", hull_times, "time grid")->capture_default_str();
  hull->add_option("--dt", hull_dt, "time step")->capture_default_str();
  hull->add_option("--id", hull_id, "instance id for the CSV (default: file stem)");
  hull->add_option("--out", hull_out, "CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      CohortSpec spec;
      spec.topology = topology_from_string(gen_topology);
      spec.n = gen_n;
      spec.count = gen_count;
      spec.seed = gen_seed;
      spec.delta = gen_delta;
      const Cohort c = generate_cohort(spec);
      write_cohort(c, gen_out);
      std::cout << "wrote " << c.entries.size() << " instances to " << gen_out << "\n";
    } else if (*run) {
      RunOptions o;
      o.engine = run_engine_args.options();
      for (const auto& g : run_grid) {
        const auto eq = g.find('=');
        if (eq == std::string::npos) throw ArgumentError("grid entries look like chi=... or time=...");
        const std::string key = g.substr(0, eq), value = g.substr(eq + 1);
        if (key == "chi") o.chi_grid = parse_chi_list(value);
        else if (key == "time") o.times = split_list(value);
        else throw ArgumentError("unknown grid axis '" + key + "'");
      }
      o.workers = run_workers;
      o.full_grid = run_full;
      o.mode = parse_mode(run_mode);
      o.repeats = run_repeats;
      o.seed = run_seed_base;
      if (!run_quiet) o.progress = [](const std::string& id) { std::cerr << "done " << id << "\n"; };
      const auto s = run_cohort(run_dir, o);
      std::cout << "computed " << s.computed << " runs, reused " << s.reused << "\n";
    } else if (*report) {
      const Report rep = make_report(report_dir);
      std::cout << "cohort " << rep.cohort_size << ", classified " << rep.cohort_size - rep.unclassified
                << ", unclassified " << rep.unclassified << (rep.partial ? " (partial)" : "") << "\n";
      for (const auto& [chi, n] : rep.chi_star_hist) std::cout << "chi* = " << chi << ": " << n << "\n";
      for (const auto& [label, m] : rep.mean_success) std::cout << "mean success " << label << ": " << m << "\n";
    } else if (*solve) {
      const auto inst = load_instance(solve_file);
      const auto truth = ground_state(inst);
      std::cout << "energy " << format_double(truth.energy) << "\n";
      std::cout << "degeneracy " << truth.degeneracy << "\n";
      for (std::size_t i = 0; i < truth.configs.size() && i < 64; ++i)
        std::cout << truth.configs[i].to_string() << "\n";
    } else if (*anneal) {
      const auto inst = load_instance(anneal_file);
      const auto truth = ground_state(inst);
      const EngineOptions o = anneal_engine_args.options();
      const double time = o.shape && anneal->count("--time") == 0 ? o.shape->total_time()
                                                                  : parse_time_token(anneal_time, default_t0(inst));
      RunRecord r;
      if (!anneal_traj.empty()) {
        if (o.engine != Engine::gd && o.engine != Engine::llg)
          throw ArgumentError("trajectories are available for gd and llg");
        if (anneal_every == 0) throw ArgumentError("--every must be positive");
        const AnnealSchedule schedule = o.shape ? o.shape->rescaled(time) : default_schedule(time);
        ClassicalAnnealResult res;
        if (o.engine == Engine::gd) {
          res = gradient_descent_anneal(inst, schedule, step_count(time, o.dt), effective_gamma(o), std::nullopt,
                                        anneal_every);
        } else {
          DynamicsParams p{effective_gamma(o), o.temperature, o.dt, anneal_seed};
          res = llg_anneal(inst, schedule, p, std::nullopt, anneal_every);
        }
        write_file_atomic(anneal_traj, classical_trajectory_csv(res.trajectory));
      }
      r = run_engine(inst, truth, anneal_chi, time, o, anneal_seed);
      r.instance_id = std::filesystem::path(anneal_file).stem().string();
      emit(anneal_out, csv_row(run_csv_header()) + to_csv_row(r));
    } else if (*classify) {
      const auto inst = load_instance(classify_file);
      const auto truth = ground_state(inst);
      const auto c = classify_chi_star(inst, truth, parse_chi_list(classify_chis),
                                       parse_times(classify_times, default_t0(inst)), classify_dt,
                                       parse_mode(classify_mode));
      std::cout << "chi_star " << (c.chi_star ? std::to_string(*c.chi_star) : "unclassified") << "\n";
      for (const auto& [chi, t] : c.t_star) std::cout << "t_star chi=" << chi << " " << optional_text(t) << "\n";
      std::cout << "runs " << c.runs.size() << "\n";
    } else if (*hull) {
      const auto inst = load_instance(hull_file);
      const auto truth = ground_state(inst);
      const std::string id = hull_id.empty() ? std::filesystem::path(hull_file).stem().string() : hull_id;
      const auto table = success_hull(id, inst, truth, parse_chi_list(hull_chis),
                                      parse_times(hull_times, default_t0(inst)), hull_dt);
      emit(hull_out, hull_csv(id, table.cells));
      if (table.no_hull()) std::cerr << "no hull within grid\n";
      for (const auto& v : table.violations)
        std::cerr << "non-monotone: chi=" << v.chi << " succeeds at " << v.success_time << " but fails at "
                  << v.failure_time << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
