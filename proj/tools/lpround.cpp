// lpround: solve LP relaxations with penalty coordinate descent and round them.
//
//   lpround solve vc       --graph g.txt
//   lpround solve mis      --graph g.txt
//   lpround solve mwc      --graph g.txt --terminals t.txt [--k K]
//   lpround solve setcover --sets s.txt [--randomized]
//   lpround solve lp       --lp model.lp
//   lpround bench [instances...] --threads 1,2,4 --reps 3
//
// In bench, --reps counts timed runs; rounding keeps its best-of-10 default.
//
// Exit codes: 0 ok, 1 usage or input error, 2 infeasible / diverged /
// stalled, 3 time limit (partial result still printed).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "lpround/lpround.hpp"

namespace {

using lpround::PipelineOptions;
using lpround::PipelineResult;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitTimeLimit = 3;

struct CommonFlags {
  double eps = 0.1;
  double delta = 0.05;
  std::optional<double> beta;
  std::size_t threads = 1;
  std::uint64_t seed = 0;
  std::size_t reps = 10;
  double time_limit = 3600.0;
  std::optional<std::size_t> steps;
  std::string out = "json";
};

void add_common(CLI::App* app, CommonFlags& f, bool is_solve) {
  app->add_option("--eps", f.eps, "Residual tolerance ||Ax-b||_inf")->check(CLI::PositiveNumber);
  app->add_option("--delta", f.delta, "Relative gap to the Lagrangian bound")->check(CLI::PositiveNumber);
  app->add_option("--beta", f.beta, "Starting penalty (default 1)")->check(CLI::PositiveNumber);
  app->add_option("--seed", f.seed, "Master seed");
  if (is_solve) {
    app->add_option("--threads", f.threads, "Worker threads")->check(CLI::Range(1, 256));
    app->add_option("--reps", f.reps, "Randomized rounding repetitions (best of)")->check(CLI::PositiveNumber);
  }
  app->add_option("--time-limit", f.time_limit, "Wall-clock limit in seconds")->check(CLI::PositiveNumber);
  app->add_option("--steps", f.steps, "Coordinate steps per inner solve");
}

PipelineOptions to_options(const CommonFlags& f) {
  PipelineOptions o;
  o.eps = f.eps;
  o.delta = f.delta;
  o.beta = f.beta;
  o.threads = f.threads;
  o.seed = f.seed;
  o.reps = f.reps;
  o.time_limit_s = f.time_limit;
  o.steps = f.steps;
  return o;
}

json nullable(std::optional<double> v) { return v && std::isfinite(*v) ? json(*v) : json(nullptr); }

json to_json(const PipelineResult& r, const PipelineOptions& o) {
  json j;
  j["problem"] = lpround::to_string(r.kind);
  j["lp_objective"] = r.lp_objective;
  j["rounded_objective"] = r.rounded ? json(r.rounded->cost) : json(nullptr);
  j["eps"] = r.alm.certificate.eps;
  j["delta_ref"] = nullable(r.alm.certificate.delta);
  j["delta_reference_kind"] = lpround::to_string(r.alm.certificate.reference_kind);
  j["dual_bound"] = nullable(r.alm.dual_bound);
  j["steps"] = r.alm.total_steps;
  j["threads"] = o.threads;
  j["wall_ms"] = r.wall_ms;
  j["seed"] = o.seed;
  j["rounds"] = r.alm.rounds.size();
  j["final_beta"] = r.alm.final_beta;
  j["converged"] = r.alm.converged;
  j["timed_out"] = r.timed_out;
  if (r.rounded) {
    j["feasible"] = r.rounded->feasible;
    if (!r.rounded->assignment.empty()) {
      j["assignment"] = r.rounded->assignment;
    } else {
      j["selected"] = r.rounded->selected;
    }
  }
  if (r.beta_choice) {
    const auto& b = *r.beta_choice;
    j["conditioning"] = {
        {"beta", b.beta},
        {"binding_bound", lpround::to_string(b.binding)},
        {"bounds", b.bounds},
        {"eps_bar", b.eps_bar},
        {"d_norm", b.estimate.d_norm},
        {"delta_p_lb", b.estimate.delta_p_lb},
        {"delta_d_lb", b.estimate.delta_d_lb},
        {"c_star", b.estimate.c_star},
        {"c_star_heuristic", b.estimate.c_star_heuristic},
        {"source", lpround::to_string(b.estimate.source)},
    };
  }
  return j;
}

const char* kCsvHeader = "instance,threads,steps,wall_ms,eps,lp_objective,rounded_objective,seed";

std::string csv_row(const std::string& instance, const PipelineResult& r, const PipelineOptions& o) {
  std::string rounded = r.rounded ? lpround::detail::format_real(r.rounded->cost) : "";
  return instance + "," + std::to_string(o.threads) + "," + std::to_string(r.alm.total_steps) + "," +
         lpround::detail::format_real(r.wall_ms) + "," + lpround::detail::format_real(r.alm.certificate.eps) + "," +
         lpround::detail::format_real(r.lp_objective) + "," + rounded + "," + std::to_string(o.seed);
}

struct SolveFlags {
  std::string graph, terminals, lp, sets;
  std::optional<std::size_t> k;
  bool randomized = false;
};

PipelineResult dispatch(const std::string& problem, const SolveFlags& s, const PipelineOptions& o) {
  if (problem == "vc" || problem == "mis") {
    if (s.graph.empty()) throw CLI::RequiredError("--graph");
    const auto g = lpround::load_edge_list(s.graph);
    return problem == "vc" ? lpround::run_vertex_cover(g, o) : lpround::run_independent_set(g, o);
  }
  if (problem == "mwc") {
    if (s.graph.empty()) throw CLI::RequiredError("--graph");
    if (s.terminals.empty()) throw CLI::RequiredError("--terminals");
    const auto g = lpround::load_edge_list(s.graph);
    const auto t = lpround::load_terminals(s.terminals, g);
    if (s.k && *s.k != t.size()) {
      throw CLI::ValidationError("--k", std::to_string(*s.k) + " does not match " + std::to_string(t.size()) +
                                            " terminals in " + s.terminals);
    }
    return lpround::run_multiway_cut(lpround::MultiwayInstance(g, t), o);
  }
  if (problem == "setcover") {
    if (s.sets.empty()) throw CLI::RequiredError("--sets");
    auto opt = o;
    opt.randomized_set_cover = s.randomized;
    return lpround::run_set_cover(lpround::load_set_system(s.sets), opt);
  }
  if (s.lp.empty()) throw CLI::RequiredError("--lp");
  return lpround::run_lp(lpround::load_lp(s.lp), o);
}

int solver_exit(const std::exception& e) {
  std::cerr << "lpround: " << e.what() << "\n";
  return kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LP relaxation solver and rounding toolkit"};
  app.require_subcommand(1);

  CommonFlags solve_flags;
  SolveFlags sf;
  std::string problem;
  auto* solve = app.add_subcommand("solve", "Solve one instance and print the result");
  solve->add_option("problem", problem, "vc | mis | mwc | setcover | lp")
      ->required()
      ->check(CLI::IsMember({"vc", "mis", "mwc", "setcover", "lp"}));
  solve->add_option("--graph", sf.graph, "Edge list: 'u v [cost]' per line")->check(CLI::ExistingFile);
  solve->add_option("--terminals", sf.terminals, "Terminal vertex labels")->check(CLI::ExistingFile);
  solve->add_option("--k", sf.k, "Number of terminals")->check(CLI::Range(2, 1 << 20));
  solve->add_option("--lp", sf.lp, "LP in the lpround text format")->check(CLI::ExistingFile);
  solve->add_option("--sets", sf.sets, "Set system: 'cost e1 e2 ...' per line")->check(CLI::ExistingFile);
  solve->add_flag("--randomized", sf.randomized, "Set cover: best-of randomized rounding");
  add_common(solve, solve_flags, true);
  solve->add_option("--out", solve_flags.out, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  CommonFlags bench_flags;
  std::vector<std::string> instances;
  std::vector<std::size_t> thread_list{1};
  std::size_t bench_reps = 1;
  std::string bench_problem = "vc";
  auto* bench = app.add_subcommand("bench", "Thread sweep over instances, CSV to stdout");
  bench->add_option("instances", instances, "Edge lists (vc, mis) or LP files (lp)")->check(CLI::ExistingFile);
  bench->add_option("--problem", bench_problem, "vc | mis | lp")->check(CLI::IsMember({"vc", "mis", "lp"}));
  bench->add_option("--threads", thread_list, "Comma-separated thread counts")->delimiter(',');
  bench->add_option("--reps", bench_reps, "Runs per (instance, threads)")->check(CLI::PositiveNumber);
  add_common(bench, bench_flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) {
      const auto opts = to_options(solve_flags);
      const auto res = dispatch(problem, sf, opts);
      if (solve_flags.out == "json") {
        std::cout << to_json(res, opts).dump(2) << "\n";
      } else {
        std::cout << kCsvHeader << "\n" << csv_row(problem, res, opts) << "\n";
      }
      if (res.timed_out) {
        std::cerr << "lpround: time limit reached; result is partial\n";
        return kExitTimeLimit;
      }
      return kExitOk;
    }

    std::cout << kCsvHeader << "\n";
    bool timed_out = false;
    for (const auto& path : instances) {
      const auto name = std::filesystem::path(path).filename().string();
      for (auto t : thread_list) {
        if (t < 1) throw CLI::ValidationError("--threads", "thread counts must be positive");
        auto opts = to_options(bench_flags);
        opts.threads = t;
        SolveFlags s;
        (bench_problem == "lp" ? s.lp : s.graph) = path;
        for (std::size_t r = 0; r < bench_reps; ++r) {
          const auto res = dispatch(bench_problem, s, opts);
          timed_out = timed_out || res.timed_out;
          std::cout << csv_row(name, res, opts) << "\n" << std::flush;
        }
      }
    }
    return timed_out ? kExitTimeLimit : kExitOk;
  } catch (const CLI::Error& e) {
    std::cerr << "lpround: " << e.what() << "\n";
    return kExitUsage;
  } catch (const lpround::ParseError& e) {
    std::cerr << "lpround: " << e.what() << "\n";
    return kExitUsage;
  } catch (const lpround::InfeasibleError& e) {
    return solver_exit(e);
  } catch (const lpround::DivergedError& e) {
    return solver_exit(e);
  } catch (const lpround::StalledError& e) {
    return solver_exit(e);
  } catch (const lpround::RoundingFailure& e) {
    return solver_exit(e);
  } catch (const std::invalid_argument& e) {
    std::cerr << "lpround: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "lpround: " << e.what() << "\n";
    return kExitSolver;
  }
}
