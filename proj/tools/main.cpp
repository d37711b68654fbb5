// Command-line driver: solve the discrete problem, run the verification
// pipeline, inspect reduced Young functions and radial barriers, evaluate
// norms, and sweep a config axis.
//
// Exit codes: 0 success / all checks passed, 1 numerical failure or failed
// check, 2 invalid configuration or hypotheses violated in strict mode.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "barrier.hpp"
#include "common.hpp"
#include "config.hpp"
#include "expr.hpp"
#include "grid.hpp"
#include "harness.hpp"
#include "pde.hpp"
#include "profiles.hpp"
#include "rearrange.hpp"
#include "verify.hpp"
#include "young.hpp"

using namespace anisym;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs* args, bool needs_out) {
  cmd->add_option("--config", args->config_path, "experiment config file")
      ->required();
  if (needs_out) {
    cmd->add_option("--out", args->out_dir, "output directory");
  }
  auto* seed_opt = cmd->add_option("--seed", args->seed, "seed override");
  cmd->callback([args, seed_opt]() { args->seed_set = seed_opt->count() > 0; });
}

ExperimentConfig load_config(const CommonArgs& args) {
  std::optional<std::uint64_t> seed;
  if (args.seed_set) seed = args.seed;
  return ExperimentConfig::load(args.config_path, seed);
}

int cmd_verify(const CommonArgs& args) {
  const ExperimentConfig cfg = load_config(args);
  const RunArtifacts art = run_experiment(cfg, args.out_dir);
  std::printf("run %s: empirical_C=%.6g pass=%s status=%d\n",
              cfg.run_id.c_str(), art.empirical_c, art.pass ? "yes" : "no",
              art.status);
  if (!art.report_path.empty()) {
    std::printf("report: %s\n", art.report_path.c_str());
  }
  return art.status;
}

int cmd_solve(const CommonArgs& args) {
  const ExperimentConfig cfg = load_config(args);
  const DiscreteProblem prob = cfg.build_problem();
  const SolveResult sol = solve(prob, cfg.solver_options());

  nlohmann::json summary;
  summary["converged"] = sol.converged;
  summary["iterations"] = sol.iterations;
  summary["energy"] = sol.energy;
  summary["grad_norm"] = sol.grad_norm;
  summary["relative_grad"] = sol.relative_grad;
  summary["u_max"] = sol.u.max_abs();
  summary["residual_max"] = residual(prob, sol.u);
  std::cout << summary.dump(2) << "\n";
  return sol.converged ? 0 : 1;
}

int cmd_symmetrize(const CommonArgs& args) {
  const ExperimentConfig cfg = load_config(args);
  const YoungSpec young = cfg.build_young();
  const OneDimYoung reduced = klimov_symmetrize(young);

  nlohmann::json out;
  if (const auto* power = std::get_if<PowerSumSpec>(&young.family())) {
    const auto constants =
        power_sum_klimov(power->p, power->lambda, young.dim());
    out["p_bar"] = constants.p_bar;
    out["constant"] = constants.lambda;
  }
  nlohmann::json samples = nlohmann::json::array();
  for (int i = 0; i <= 40; ++i) {
    const double s = 0.01 * std::pow(1e4, i / 40.0);  // [0.01, 100]
    samples.push_back({s, reduced.eval(s)});
  }
  out["samples"] = samples;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_barrier(const CommonArgs& args) {
  const ExperimentConfig cfg = load_config(args);
  const DiscreteProblem prob = cfg.build_problem();
  const ComparisonOptions copts = cfg.comparison_options();

  BarrierSpec spec;
  spec.phi = klimov_symmetrize(YoungSpec::power_sum(prob.p, prob.lambda));
  spec.dim = prob.domain.dim();
  spec.c1 = copts.c1;
  spec.c2 = copts.c2;
  const double measure = copts.analytic_measure > 0.0
                             ? copts.analytic_measure
                             : prob.domain.domain_measure();
  spec.f_star = decreasing_rearrangement(prob.f).stretched(measure);
  if (prob.g.empty()) {
    spec.g_profile = StepProfile::constant(0.0, measure);
  } else {
    GridFunction composed = prob.domain;
    for (std::size_t j = 0; j < composed.size(); ++j) {
      if (!composed.mask(j)) continue;
      double mag2 = 0.0;
      for (const auto& gi : prob.g) mag2 += gi.value(j) * gi.value(j);
      composed.value(j) =
          conjugate_value_1d(spec.phi, copts.c2 * std::sqrt(mag2));
    }
    spec.g_profile = decreasing_rearrangement(composed).stretched(measure);
  }

  const BarrierWellPosed wellposed = barrier_wellposed(spec);
  nlohmann::json out;
  out["measure"] = measure;
  out["wellposed"] = {
      {"psi_range_unbounded", wellposed.psi_range_unbounded},
      {"pointwise_range_ok", wellposed.pointwise_range_ok},
      {"gradient_energy_finite", wellposed.gradient_energy_finite},
      {"gradient_energy", wellposed.gradient_energy},
      {"data_admissible", wellposed.data_admissible},
      {"ok", wellposed.ok()}};
  if (wellposed.ok()) {
    const RadialProfile v = barrier_solution(spec);
    out["barrier_max"] = v.eval_measure(0.0);
    std::ostringstream csv;
    csv << "s,v\n";
    const auto& nodes = v.nodes();
    const auto& values = v.values();
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      csv << nodes[k] << ',' << values[k] << '\n';
    }
    write_file_atomic(args.out_dir + "/barrier.csv", csv.str());
    out["barrier_csv_path"] = args.out_dir + "/barrier.csv";
  } else if (!wellposed.notes.empty()) {
    out["notes"] = wellposed.notes;
  }
  std::cout << out.dump(2) << "\n";
  return wellposed.ok() ? 0 : 1;
}

int cmd_norms(const CommonArgs& args) {
  std::cout << norms_report(load_config_file(args.config_path));
  return 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& axis,
              const std::vector<std::string>& values, int workers) {
  const ExperimentConfig base = load_config(args);
  const SweepResult sweep =
      run_sweep(base, axis, values, args.out_dir, workers);
  std::printf("sweep over %s: %zu runs, worst status %d\n", axis.c_str(),
              sweep.runs.size(), sweep.status);
  std::printf("summary: %s\n", sweep.csv_path.c_str());
  return sweep.status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anisotropic symmetrization toolbox"};
  app.require_subcommand(1);

  CommonArgs verify_args, solve_args, symmetrize_args, barrier_args,
      norms_args, sweep_args;
  std::string sweep_axis;
  std::vector<std::string> sweep_values;
  int sweep_workers = static_cast<int>(
      std::max(1u, std::thread::hardware_concurrency()));

  auto* verify_cmd =
      app.add_subcommand("verify", "solve and run the verification pipeline");
  add_common(verify_cmd, &verify_args, true);

  auto* solve_cmd = app.add_subcommand("solve", "solve the discrete problem");
  add_common(solve_cmd, &solve_args, false);

  auto* symmetrize_cmd = app.add_subcommand(
      "symmetrize", "print the reduced radial Young function");
  add_common(symmetrize_cmd, &symmetrize_args, false);

  auto* barrier_cmd =
      app.add_subcommand("barrier", "build the radial barrier for the data");
  add_common(barrier_cmd, &barrier_args, true);

  auto* norms_cmd =
      app.add_subcommand("norms", "evaluate a norm spec against a profile");
  add_common(norms_cmd, &norms_args, false);

  auto* sweep_cmd =
      app.add_subcommand("sweep", "run the pipeline across an axis of values");
  add_common(sweep_cmd, &sweep_args, true);
  sweep_cmd->add_option("--axis", sweep_axis, "dotted config key to vary")
      ->required();
  sweep_cmd
      ->add_option("--values", sweep_values,
                   "comma-separated values for the axis")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--workers", sweep_workers, "parallel runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify_cmd->parsed()) return cmd_verify(verify_args);
    if (solve_cmd->parsed()) return cmd_solve(solve_args);
    if (symmetrize_cmd->parsed()) return cmd_symmetrize(symmetrize_args);
    if (barrier_cmd->parsed()) return cmd_barrier(barrier_args);
    if (norms_cmd->parsed()) return cmd_norms(norms_args);
    if (sweep_cmd->parsed()) {
      return cmd_sweep(sweep_args, sweep_axis, sweep_values, sweep_workers);
    }
  } catch (const ValidationError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
