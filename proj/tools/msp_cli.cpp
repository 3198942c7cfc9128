// msp: generate instances, run the schedulers, validate, emulate and run
// experiment grids.
//
// Exit codes: 0 ok, 2 invalid input, 3 infeasible request, 4 validation failure.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "msp/emulator.hpp"
#include "msp/energy.hpp"
#include "msp/experiment.hpp"
#include "msp/io.hpp"
#include "msp/milp.hpp"
#include "msp/rng.hpp"
#include "msp/solvers.hpp"

namespace {

constexpr int kInvalidInput = 2;
constexpr int kInfeasible = 3;
constexpr int kValidationFailed = 4;

struct ExitCode {
  int code;
};

struct SolverFlags {
  double reserve = 0.0;
  int knn_k = 3;
  double eps_space = 1000.0;
  std::int64_t eps_time = 1800;
  int min_pts = 2;
  std::string opt_caps = msp::BruteForceConfig{}.str();

  void attach(CLI::App* app) {
    app->add_option("--reserve", reserve, "battery fraction withheld at planning time")->check(CLI::Range(0.0, 0.999));
    app->add_option("--knn-k", knn_k, "VRC nearest-neighbour candidates")->check(CLI::PositiveNumber);
    app->add_option("--eps-space", eps_space, "ST-DBSCAN spatial radius, m")->check(CLI::PositiveNumber);
    app->add_option("--eps-time", eps_time, "ST-DBSCAN temporal radius, s")->check(CLI::PositiveNumber);
    app->add_option("--min-pts", min_pts, "ST-DBSCAN density threshold")->check(CLI::PositiveNumber);
    app->add_option("--opt-caps", opt_caps, "brute-force caps n,m,r,batches");
  }

  msp::SolverOptions options() const {
    msp::SolverOptions o;
    o.reserve = reserve;
    o.knn_k = knn_k;
    o.clustering = {eps_space, eps_time, min_pts};
    o.caps = msp::BruteForceConfig::parse(opt_caps);
    return o;
  }

  std::string describe() const {
    std::ostringstream s;
    s << "reserve=" << reserve << " knn_k=" << knn_k << " eps_space=" << eps_space << " eps_time=" << eps_time
      << " min_pts=" << min_pts << " opt_caps=" << opt_caps;
    return s.str();
  }
};

msp::ProblemInstance load_instance(const std::string& path) {
  msp::ProblemInstance inst = msp::instance_from_json(msp::read_json_file(path));
  const auto problems = msp::validate_instance(inst);
  if (!problems.empty()) {
    for (const auto& p : problems) std::cerr << "invalid instance: " << p.what << (p.detail.empty() ? "" : " (" + p.detail + ")") << "\n";
    throw ExitCode{kInvalidInput};
  }
  return inst;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    msp::write_text_file(path, text);
  }
}

int env_threads() {
  const char* v = std::getenv("MSP_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  try {
    const int t = std::stoi(v);
    return t > 0 ? t : 0;
  } catch (const std::exception&) {
    throw msp::MspError(std::string("MSP_THREADS must be a positive integer, got '") + v + "'");
  }
}

std::vector<int> parse_list(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      out.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw msp::MspError("bad list element '" + part + "' in '" + text + "'");
    }
    if (out.back() < 1) throw msp::MspError("list elements must be positive: '" + text + "'");
  }
  if (out.empty()) throw msp::MspError("empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mission scheduling for drone fleets with on-board analytics"};
  app.require_subcommand(1);

  // generate
  std::string workload = "rnd";
  msp::ScenarioParams scenario;
  std::string graph_path;
  std::string out_path;
  auto* gen = app.add_subcommand("generate", "write a seeded msp-instance/1 file");
  gen->add_option("--workload", workload, "rnd or dfs")->check(CLI::IsMember({"rnd", "dfs"}));
  gen->add_option("--drones,-m", scenario.drones, "fleet size m")->check(CLI::PositiveNumber);
  gen->add_option("--load,-x", scenario.load, "activities per drone x")->check(CLI::PositiveNumber);
  gen->add_option("--runtime", scenario.batch_runtime, "per-batch DNN runtime in s (11 or 98 in the study)");
  gen->add_option("--seed", scenario.seed, "generator seed");
  gen->add_option("--graph", graph_path, "msp-roadgraph/1 file (dfs)");
  gen->add_option("--out", out_path, "output path (default stdout)");

  // graph
  double radius = 3500.0;
  int vertices = 600;
  std::uint64_t graph_seed = 1;
  auto* graph = app.add_subcommand("graph", "synthesize an msp-roadgraph/1 road graph");
  graph->add_option("--radius", radius, "disc radius, m")->check(CLI::PositiveNumber);
  graph->add_option("--vertices", vertices, "vertex count")->check(CLI::Range(2, 1'000'000));
  graph->add_option("--seed", graph_seed, "seed");
  graph->add_option("--out", out_path, "output path (default stdout)");

  // schedule
  std::string instance_path;
  std::string algo = "jsc";
  std::string milp_out;
  SolverFlags solver;
  auto* sched = app.add_subcommand("schedule", "run a scheduler on an instance");
  sched->add_option("--instance", instance_path, "msp-instance/1 file")->required();
  sched->add_option("--algo", algo, "jsc, vrc, opt or milp-export")
      ->check(CLI::IsMember({"jsc", "vrc", "opt", "milp-export"}));
  sched->add_option("--milp-out", milp_out, "also write the LP model here");
  sched->add_option("--out", out_path, "schedule output path");
  solver.attach(sched);

  // evaluate
  std::string schedule_path;
  std::string report_path;
  auto* eval = app.add_subcommand("evaluate", "validate a schedule and report utility and energy");
  eval->add_option("--instance", instance_path, "msp-instance/1 file")->required();
  eval->add_option("--schedule", schedule_path, "msp-schedule/1 file")->required();
  eval->add_option("--out", report_path, "per-activity report CSV");

  // experiment
  std::string suite = "rnd";
  std::string drones_list = "5,10,20,50";
  std::string loads_list = "2,4,8";
  int repeats = 10;
  std::uint64_t seed = 1;
  bool no_opt = false;
  msp::Seconds runtime = 11;
  auto* exp = app.add_subcommand("experiment", "run a (m, x) grid and write per-cell statistics");
  exp->add_option("--suite", suite, "rnd or dfs")->check(CLI::IsMember({"rnd", "dfs"}));
  exp->add_option("--drones", drones_list, "comma-separated m values");
  exp->add_option("--loads", loads_list, "comma-separated x values");
  exp->add_option("--repeats", repeats, "instances per cell")->check(CLI::PositiveNumber);
  exp->add_option("--seed", seed, "master seed");
  exp->add_option("--runtime", runtime, "per-batch DNN runtime in s");
  exp->add_option("--graph", graph_path, "msp-roadgraph/1 file for dfs (synthesized if absent)");
  exp->add_flag("--no-opt", no_opt, "skip the exact solver");
  exp->add_option("--out", out_path, "CSV output path (default stdout)");
  solver.attach(exp);

  // emulate
  std::string trace_path;
  double noise_lo = 0.9;
  double noise_hi = 1.1;
  double inflate = 0.0;
  int emu_repeats = 1;
  std::uint64_t emu_seed = 1;
  auto* emu = app.add_subcommand("emulate", "replay a schedule under perturbed energy use");
  emu->add_option("--instance", instance_path, "msp-instance/1 file")->required();
  emu->add_option("--schedule", schedule_path, "msp-schedule/1 file")->required();
  emu->add_option("--trace", trace_path, "trace CSV (trip_id,leg_index,fly_factor,hover_factor,compute_factor)");
  emu->add_option("--noise-lo", noise_lo, "lower per-leg factor");
  emu->add_option("--noise-hi", noise_hi, "upper per-leg factor");
  emu->add_option("--inflate", inflate, "fixed factor on every leg instead of noise");
  emu->add_option("--repeats", emu_repeats, "noise draws")->check(CLI::PositiveNumber);
  emu->add_option("--seed", emu_seed, "noise seed");
  emu->add_option("--out", out_path, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalidInput;
  }

  try {
    if (*gen) {
      std::cerr << "# msp generate workload=" << workload << " m=" << scenario.drones << " x=" << scenario.load
                << " runtime=" << scenario.batch_runtime << " seed=" << scenario.seed
                << (graph_path.empty() ? "" : " graph=" + graph_path) << "\n";
      msp::ProblemInstance inst;
      if (workload == "rnd") {
        inst = msp::gen_rnd(scenario);
      } else {
        if (graph_path.empty()) {
          std::cerr << "error: the dfs workload needs --graph (see `msp graph`)\n";
          return kInvalidInput;
        }
        inst = msp::gen_dfs(msp::roadgraph_from_json(msp::read_json_file(graph_path)), scenario);
      }
      emit(out_path, msp::instance_to_json(inst).dump(2) + "\n");
      return 0;
    }

    if (*graph) {
      std::cerr << "# msp graph radius=" << radius << " vertices=" << vertices << " seed=" << graph_seed << "\n";
      emit(out_path, msp::roadgraph_to_json(msp::synth_road_graph(radius, vertices, graph_seed)).dump(2) + "\n");
      return 0;
    }

    if (*sched) {
      const msp::ProblemInstance inst = load_instance(instance_path);
      std::cerr << "# msp schedule algo=" << algo << " " << solver.describe() << "\n";
      const msp::SolverOptions options = solver.options();
      if (algo == "milp-export" || !milp_out.empty()) {
        const std::string lp = msp::emit_milp(inst);
        const std::string path = milp_out.empty() ? out_path : milp_out;
        emit(path, lp);
        if (algo == "milp-export") return 0;
      }
      msp::SolveResult solved;
      try {
        solved = msp::run_solver(msp::parse_algorithm(algo), inst, options);
      } catch (const msp::CapsExceeded& e) {
        std::cerr << "error: refusing exact solve: " << e.what() << "\n";
        return kInfeasible;
      }
      const msp::PreparedInstance prepared(inst);
      const auto violations = msp::validate_schedule(solved.schedule, prepared);
      const msp::UtilityReport report = msp::compute_utility(solved.schedule, prepared);
      if (!out_path.empty()) emit(out_path, msp::schedule_to_json(solved.schedule).dump(2) + "\n");
      const double m = inst.fleet.count;
      std::cout << std::fixed << std::setprecision(3) << "algo=" << algo << " utility=" << report.total.to_double()
                << " utility_per_drone=" << report.total.to_double() / m
                << " scheduled_pct=" << 100.0 * report.scheduled_fraction() << " runtime_ms=" << solved.runtime_ms
                << "\n";
      if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "violation: " << msp::to_string(v.kind) << ": " << v.message << "\n";
        return kValidationFailed;
      }
      return 0;
    }

    if (*eval) {
      const msp::ProblemInstance inst = load_instance(instance_path);
      const msp::MissionSchedule s = msp::schedule_from_json(msp::read_json_file(schedule_path));
      const msp::PreparedInstance prepared(inst);
      const auto violations = msp::validate_schedule(s, prepared);
      if (!violations.empty()) {
        for (const auto& v : violations) std::cout << "violation: " << msp::to_string(v.kind) << ": " << v.message << "\n";
        return kValidationFailed;
      }
      const msp::UtilityReport report = msp::compute_utility(s, prepared);
      const double m = inst.fleet.count;
      std::cout << "valid\n"
                << "utility " << report.total << " (" << report.total.to_double() << ")\n"
                << "utility_per_drone " << report.total.to_double() / m << "\n"
                << "capture " << report.capture_total << " onboard " << report.onboard_total << " ontime "
                << report.ontime_total << "\n"
                << "scheduled " << report.scheduled << "/" << report.activities.size() << "\n";
      std::cout << "drone,trip,fly_s,hover_s,compute_s,energy_j,capacity_j\n";
      for (const msp::DroneMission& d : s.drones) {
        for (const msp::Trip& t : d.trips) {
          const msp::EnergyBreakdown e = msp::trip_energy(t, [&] {
            std::vector<msp::ComputeSlot> mine;
            for (const msp::ComputeSlot& c : d.slots) {
              if (c.start >= t.takeoff && c.end <= t.landing) mine.push_back(c);
            }
            return mine;
          }(), inst.fleet);
          std::cout << t.drone << ',' << t.index << ',' << e.fly << ',' << e.hover << ',' << e.compute << ','
                    << e.energy << ',' << e.capacity << "\n";
        }
      }
      if (!report_path.empty()) emit(report_path, msp::report_csv(report));
      return 0;
    }

    if (*exp) {
      msp::ExperimentConfig cfg;
      cfg.suite = msp::parse_workload(suite);
      cfg.drones = parse_list(drones_list);
      cfg.loads = parse_list(loads_list);
      cfg.repeats = repeats;
      cfg.seed = seed;
      cfg.base.batch_runtime = runtime;
      cfg.solver = solver.options();
      cfg.include_opt = !no_opt;
      cfg.threads = env_threads();
      if (!graph_path.empty()) cfg.graph = msp::roadgraph_from_json(msp::read_json_file(graph_path));
      std::cerr << "# msp experiment suite=" << suite << " drones=" << drones_list << " loads=" << loads_list
                << " repeats=" << repeats << " seed=" << seed << " runtime=" << runtime << " opt=" << !no_opt << " "
                << solver.describe() << "\n";
      const auto cells = msp::run_experiment(cfg);
      emit(out_path, msp::experiment_csv(cfg.suite, cells));
      for (const auto& c : cells) {
        if (c.invalid > 0) {
          std::cerr << "error: " << c.invalid << " invalid schedules from " << msp::to_string(c.algo) << " at m="
                    << c.drones << " x=" << c.load << "\n";
          return kValidationFailed;
        }
      }
      return 0;
    }

    if (*emu) {
      const msp::ProblemInstance inst = load_instance(instance_path);
      const msp::MissionSchedule s = msp::schedule_from_json(msp::read_json_file(schedule_path));
      const msp::PreparedInstance prepared(inst);
      const auto violations = msp::validate_schedule(s, prepared);
      if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "violation: " << msp::to_string(v.kind) << ": " << v.message << "\n";
        return kValidationFailed;
      }
      std::cerr << "# msp emulate " << (trace_path.empty() ? "" : "trace=" + trace_path + " ")
                << (inflate > 0.0 ? "inflate=" + std::to_string(inflate)
                                  : "noise=[" + std::to_string(noise_lo) + "," + std::to_string(noise_hi) + ")")
                << " repeats=" << emu_repeats << " seed=" << emu_seed << "\n";
      std::ostringstream csv;
      csv << "repeat,trips,incomplete,incomplete_pct,mean_deficit,max_deficit,expected_utility,effective_utility\n";
      const int runs = trace_path.empty() && inflate <= 0.0 ? emu_repeats : 1;
      for (int r = 0; r < runs; ++r) {
        msp::EnergyTrace trace;
        if (!trace_path.empty()) {
          std::ifstream in(trace_path);
          if (!in) throw msp::FormatError("cannot open " + trace_path);
          trace = msp::trace_from_csv(in, s);
        } else if (inflate > 0.0) {
          trace = msp::EnergyTrace::uniform(s, inflate);
        } else {
          trace = msp::EnergyTrace::noise(s, noise_lo, noise_hi,
                                          msp::derive_seed(emu_seed, {static_cast<std::uint64_t>(r)}));
        }
        const msp::EmulationReport rep = msp::replay(s, prepared, trace);
        csv << std::fixed << std::setprecision(6) << r << ',' << rep.trips.size() << ',' << rep.incomplete << ','
            << 100.0 * rep.incomplete_rate() << ',' << rep.mean_deficit() << ',' << rep.max_deficit() << ','
            << rep.expected_utility.to_double() << ',' << rep.effective_utility.to_double() << "\n";
      }
      emit(out_path, csv.str());
      return 0;
    }
  } catch (const ExitCode& e) {
    return e.code;
  } catch (const msp::CapsExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const msp::MspError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return 0;
}
