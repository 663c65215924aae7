#ifndef MFK_TOOLS_CLI_HPP
#define MFK_TOOLS_CLI_HPP

// Command-line front end: parse a scenario, run one subcommand, write the
// output bundle. Exit status 0 on success, 1 on domain errors, 2 on usage
// and parse errors.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mfk/error.hpp"
#include "mfk/io.hpp"
#include "mfk/joint_angles.hpp"
#include "mfk/kmeans.hpp"
#include "mfk/planner.hpp"
#include "mfk/sampler.hpp"
#include "mfk/scenario.hpp"

namespace mfk::cli {

struct Options {
  std::string subcommand;
  std::vector<std::string> scenarios;
  std::string out;
  std::uint64_t seed = 7;
  std::optional<double> epsilon_f;
  std::optional<double> epsilon_len;
  std::string strategy = "manifold";
  std::string contact_mode = "geometric";
  std::size_t k = 4;
  std::size_t count = 50;
  std::uint64_t max_attempts = 1'000'000;
  std::size_t reps = 50;
  std::string space = "auto";
  int finger = 0;
  std::size_t steps = 10;
  unsigned workers = 1;
  int verbosity = 0;
};

inline PlannerConfig planner_config(const Options& o) {
  PlannerConfig cfg;
  cfg.sampler.strategy =
      o.strategy == "paper" ? SamplingStrategy::PaperRejection : SamplingStrategy::ManifoldClosure;
  if (o.epsilon_f) cfg.sampler.epsilon_f = *o.epsilon_f;
  cfg.sampler.epsilon_len = o.epsilon_len;
  cfg.sampler.max_attempts = o.max_attempts;
  cfg.sampler.target_count = o.count;
  cfg.sampler.seed = o.seed;
  cfg.sampler.workers = o.workers;
  cfg.k = o.k;
  cfg.mode = o.contact_mode == "paper" ? ContactUpdateMode::PaperLiteral : ContactUpdateMode::Geometric;
  if (o.space == "weights") cfg.space = ClusterSpace::Weights;
  else if (o.space == "joints") cfg.space = ClusterSpace::Joints;
  cfg.sampler.validate();
  if (cfg.k == 0) throw Error(ErrorCode::ValidationError, "--k must be at least 1");
  return cfg;
}

/// Task family swept by `sweep`: the scenario task first, then its mirror,
/// then both scaled down in `steps` equal decrements, and last the identity.
inline std::vector<MotionTask> sweep_tasks(const MotionTask& task, std::size_t steps) {
  if (steps == 0) throw Error(ErrorCode::ValidationError, "--steps must be at least 1");
  std::vector<MotionTask> tasks;
  for (std::size_t i = steps; i >= 1; --i) {
    const double s = static_cast<double>(i) / static_cast<double>(steps);
    for (double sign : {1.0, -1.0}) {
      if (const auto* t = std::get_if<Translate>(&task)) {
        tasks.push_back(Translate{sign * s * t->delta});
      } else {
        tasks.push_back(Roll{Angle::radians(sign * s * std::get<Roll>(task).phi.rad())});
      }
    }
  }
  tasks.push_back(Translate{});
  return tasks;
}

inline std::string describe(const MotionTask& task) {
  std::ostringstream ss;
  if (const auto* t = std::get_if<Translate>(&task)) {
    ss << "translate (" << io::fmt(t->delta.x) << ", " << io::fmt(t->delta.y) << ") cm";
  } else {
    ss << "roll " << io::fmt(std::get<Roll>(task).phi.deg()) << " deg";
  }
  return ss.str();
}

inline std::string header(const ScenarioSpec& spec, const BuiltScenario& built, const Options& o) {
  std::string r = "scenario: " + spec.name + " (" + to_string(spec.shape.kind) + ", " +
                  to_string(spec.case_label) + ")\n";
  r += "task: " + describe(built.task) + "\n";
  r += "fingers: " + std::to_string(built.scene.fingers().size()) + "\n";
  r += "strategy: " + o.strategy + ", contact mode: " + o.contact_mode + ", seed: " +
       std::to_string(o.seed) + "\n";
  return r;
}

inline std::string stats_block(const std::vector<SamplerStats>& stats, const GraspScene& scene) {
  std::string r;
  std::uint64_t singular = 0;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    r += io::stats_line("finger " + std::to_string(scene.fingers()[i].id()), stats[i]);
    singular += stats[i].rejected_singular;
  }
  r += "singularity filter rejections: " + std::to_string(singular) + "\n";
  return r;
}

inline void fill_angles(const FingerChain& f, FingerSolution& s) {
  try {
    s.paper_angles = recover_all(f, s, AngleMethod::PaperLawOfCosines);
  } catch (const Error&) {
  }
  s.direct_angles = recover_all(f, s, AngleMethod::DirectFromPositions);
}

inline const FingerChain& finger_by_id(const GraspScene& scene, int id) {
  for (const auto& f : scene.fingers()) {
    if (f.id() == id) return f;
  }
  throw Error(ErrorCode::ValidationError, "no finger with id " + std::to_string(id));
}

struct Loaded {
  ScenarioSpec spec;
  BuiltScenario built;
};

inline Loaded load(const Options& o) {
  if (o.scenarios.size() != 1) {
    throw Error(ErrorCode::UsageError, o.subcommand + " takes exactly one --scenario");
  }
  ScenarioSpec spec = io::parse_scenario(o.scenarios.front());
  BuiltScenario built = build_scenario(spec);
  return {std::move(spec), std::move(built)};
}

inline io::BundleInput cmd_solve(const Options& o) {
  const auto [spec, built] = load(o);
  const PlannerConfig cfg = planner_config(o);
  io::BundleInput b;
  b.scene = built.scene;
  b.shape = spec.shape;
  std::vector<SamplerStats> stats;
  for (std::size_t i = 0; i < built.scene.fingers().size(); ++i) {
    const auto& f = built.scene.fingers()[i];
    const Vec2 target = contact_target(f, built.scene.object0(), built.task, cfg.mode);
    SamplerConfig scfg = cfg.sampler;
    scfg.seed = derive_seed(cfg.sampler.seed, i);
    SampleResult res = sample_finger(f, target, distance(target, f.contact0()), scfg);
    if (res.budget_exhausted) {
      throw Error(ErrorCode::BudgetExhausted,
                  "finger " + std::to_string(f.id()) + ": " + std::to_string(res.solutions.size()) +
                      " of " + std::to_string(scfg.target_count) + " configurations after " +
                      std::to_string(res.stats.attempts) + " attempts");
    }
    for (auto& s : res.solutions) {
      fill_angles(f, s);
      b.configurations.push_back({0, s, false});
    }
    stats.push_back(res.stats);
  }
  b.report = header(spec, built, o) + stats_block(stats, built.scene) +
             "configurations: " + std::to_string(b.configurations.size()) + "\n";
  return b;
}

inline io::BundleInput plan_bundle(const Options& o) {
  const auto [spec, built] = load(o);
  const PlannerConfig cfg = planner_config(o);
  ManipulationPlan p = plan(built.scene, built.task, cfg);

  io::BundleInput b;
  b.scene = built.scene;
  b.shape = spec.shape;
  for (std::size_t i = 0; i < p.per_finger.size(); ++i) {
    for (std::size_t s = 0; s < p.per_finger[i].size(); ++s) {
      b.configurations.push_back({0, p.per_finger[i][s], s == p.selected[i]});
    }
  }
  b.weights = p.weights;
  std::vector<double> sel_costs;
  for (std::size_t i = 0; i < p.per_finger.size(); ++i) sel_costs.push_back(p.selected_solution(i).cost);
  b.selected_weights = allocate_weights(sel_costs, p.motion_norm, cfg.gamma);
  b.clusters = p.clusters;
  b.cluster_samples = p.cluster_samples;

  PlanOutcome outcome;
  outcome.plan = p;
  const RunMetrics m = evaluate(outcome, built.task);

  std::string r = header(spec, built, o);
  r += stats_block(p.stats, built.scene);
  for (std::size_t i = 0; i < p.dropped.size(); ++i) {
    if (p.dropped[i]) {
      r += "finger " + std::to_string(built.scene.fingers()[i].id()) + ": " +
           std::to_string(p.dropped[i]) + " configurations dropped in angle recovery\n";
    }
  }
  r += "motion norm: " + io::fmt(p.motion_norm) + "\n";
  r += "cluster space: " + std::string(p.cluster_space == ClusterSpace::Weights ? "weights" : "joints") +
       ", k: " + std::to_string(p.clusters->k) + ", iterations: " + std::to_string(p.clusters->iterations) +
       ", inertia: " + io::fmt(p.clusters->inertia) + "\n";
  r += "selected row: " + std::to_string(p.selected.front()) + "\n";
  r += "weight residual: " + io::fmt(p.weights.residual()) + "\n";
  r += "achieved translation: (" + io::fmt(m.achieved_translation.x) + ", " +
       io::fmt(m.achieved_translation.y) + ") cm, rotation: " + io::fmt(m.achieved_rotation.deg()) +
       " deg\n";
  r += "relative error: " + io::fmt(m.relative_error) + "\n";
  b.report = r;
  b.plan = std::move(p);
  return b;
}

inline io::BundleInput cmd_sweep(const Options& o) {
  const auto [spec, built] = load(o);
  const PlannerConfig cfg = planner_config(o);
  const FingerChain& f = finger_by_id(built.scene, o.finger);
  const auto tasks = sweep_tasks(built.task, o.steps);
  const SweepCloud cloud = workspace_sweep(f, built.scene.object0(), tasks, cfg.mode, cfg.sampler);

  io::BundleInput b;
  b.scene = GraspScene(built.scene.object0(), {f});
  b.shape = spec.shape;
  SamplerStats total;
  for (const auto& t : cloud.tasks) total += t.stats;
  for (auto p : cloud.points) {
    fill_angles(f, p.solution);
    b.configurations.push_back({p.task_index, p.solution, false});
    b.cluster_samples.push_back(joint_features(p.solution));
  }
  std::string r = header(spec, built, o);
  r += "sweep finger: " + std::to_string(f.id()) + ", tasks: " + std::to_string(tasks.size()) + "\n";
  for (std::size_t t = 0; t < cloud.tasks.size(); ++t) {
    const auto& a = cloud.tasks[t];
    r += "  task " + std::to_string(t) + " (" + describe(tasks[t]) + "): accepted " +
         std::to_string(a.stats.accepted) + " of " + std::to_string(a.stats.attempts);
    if (a.error) r += ", " + std::string(to_string(*a.error)) + ": " + a.message;
    r += "\n";
  }
  r += io::stats_line("total", total);
  r += "singularity filter rejections: " + std::to_string(total.rejected_singular) + "\n";
  r += "cloud points: " + std::to_string(cloud.points.size()) + "\n";
  if (!b.cluster_samples.empty()) {
    const std::size_t k = std::min(o.k, count_distinct(b.cluster_samples));
    b.clusters = kmeans(b.cluster_samples, k, SeedMode::PlusPlus, derive_seed(o.seed, 0xc1057e5ULL));
    r += "clusters (joint space): k " + std::to_string(k) + ", inertia " + io::fmt(b.clusters->inertia) + "\n";
  }
  b.report = r;
  return b;
}

inline io::BundleInput cmd_suite(const Options& o) {
  if (o.scenarios.empty()) throw Error(ErrorCode::UsageError, "suite needs at least one --scenario");
  std::vector<ScenarioSpec> specs;
  for (const auto& path : o.scenarios) specs.push_back(io::parse_scenario(path));
  const PlannerConfig cfg = planner_config(o);
  const SuiteReport rep = run_suite(specs, o.reps, o.seed, cfg);
  io::BundleInput b;
  b.report = io::suite_table(rep);
  return b;
}

inline std::string cmd_report(const Options& o) {
  const auto [spec, built] = load(o);
  const PlannerConfig cfg = planner_config(o);
  const auto rows = io::parse_configurations_csv(
      io::read_file(std::filesystem::path(o.out) / "configurations.csv"));
  const auto tasks = sweep_tasks(built.task, o.steps);
  std::size_t ok = 0;
  std::string failures;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.task_index >= tasks.size()) {
      failures += "  row " + std::to_string(i + 1) + ": task index out of range\n";
      continue;
    }
    const FingerChain& f = finger_by_id(built.scene, row.solution.finger_id);
    const Vec2 target = contact_target(f, built.scene.object0(), tasks[row.task_index], cfg.mode);
    const auto bad = check_solution(f, target, distance(target, f.contact0()), row.solution, cfg.sampler);
    if (bad) {
      failures += "  row " + std::to_string(i + 1) + ": " + *bad + "\n";
    } else {
      ++ok;
    }
  }
  std::string r = header(spec, built, o);
  r += "re-validated configurations: " + std::to_string(ok) + " of " + std::to_string(rows.size()) + "\n";
  return r + failures;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Planar multi-finger kinematics planner", "mfk"};
  app.require_subcommand(1, 1);
  Options o;

  auto common = [&](CLI::App* sub, bool many_scenarios) {
    if (many_scenarios) {
      sub->add_option("--scenario", o.scenarios, "Scenario JSON file (repeatable)")->required();
    } else {
      sub->add_option("--scenario", o.scenarios, "Scenario JSON file")->required()->expected(1);
    }
    sub->add_option("--out", o.out, "Output directory")->required();
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--epsilon-f", o.epsilon_f, "Cost acceptance band around 1");
    sub->add_option("--epsilon-len", o.epsilon_len, "Relative link-length tolerance");
    sub->add_option("--strategy", o.strategy, "Sampling strategy")
        ->check(CLI::IsMember({"paper", "manifold"}));
    sub->add_option("--contact-mode", o.contact_mode, "Contact update for rolling")
        ->check(CLI::IsMember({"paper", "geometric"}));
    sub->add_option("--k", o.k, "Cluster count");
    sub->add_option("--count", o.count, "Configurations per finger");
    sub->add_option("--max-attempts", o.max_attempts, "Sampling budget per finger and task");
    sub->add_option("--workers", o.workers, "Concurrent sampling batches (0: all cores)");
    sub->add_flag("-v,--verbose", o.verbosity, "More diagnostics on stderr");
  };
  CLI::App* solve = app.add_subcommand("solve", "Sample configurations for every finger");
  CLI::App* plan_cmd = app.add_subcommand("plan", "Plan the manipulation and select a strategy");
  CLI::App* sweep = app.add_subcommand("sweep", "Configuration cloud of one finger over a task family");
  CLI::App* cluster = app.add_subcommand("cluster", "Plan and cluster in a chosen feature space");
  CLI::App* suite = app.add_subcommand("suite", "Repeated plans over several scenarios");
  CLI::App* report = app.add_subcommand("report", "Re-validate a written configurations.csv");
  for (CLI::App* sub : {solve, plan_cmd, sweep, cluster, report}) common(sub, false);
  common(suite, true);
  sweep->add_option("--finger", o.finger, "Finger id to sweep");
  for (CLI::App* sub : {sweep, report}) {
    sub->add_option("--steps", o.steps, "Sweep scale steps on each side");
  }
  cluster->add_option("--space", o.space, "Cluster feature space")
      ->check(CLI::IsMember({"auto", "weights", "joints"}));
  suite->add_option("--reps", o.reps, "Repetitions per scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  o.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (o.subcommand == "report") {
      const std::string text = cmd_report(o);
      const auto entry = io::write_atomic(std::filesystem::path(o.out) / "report.txt", text);
      out << entry.path.string() << '\t' << entry.size << '\n';
      return 0;
    }
    io::BundleInput bundle;
    if (o.subcommand == "solve") bundle = cmd_solve(o);
    else if (o.subcommand == "plan" || o.subcommand == "cluster") bundle = plan_bundle(o);
    else if (o.subcommand == "sweep") bundle = cmd_sweep(o);
    else bundle = cmd_suite(o);
    if (o.verbosity > 0) err << bundle.report;
    for (const auto& e : io::emit_bundle(bundle, o.out)) {
      out << e.path.string() << '\t' << e.size << '\n';
    }
    return 0;
  } catch (const Error& e) {
    err << "mfk " << o.subcommand << ": " << e.what() << '\n';
    return exit_status(e.code());
  } catch (const std::exception& e) {
    err << "mfk " << o.subcommand << ": " << to_string(ErrorCode::IoError) << ": " << e.what() << '\n';
    return exit_status(ErrorCode::IoError);
  }
}

}  // namespace mfk::cli

#endif  // MFK_TOOLS_CLI_HPP
