#include "harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "common.hpp"
#include "expr.hpp"
#include "grid.hpp"
#include "json.hpp"
#include "norms.hpp"
#include "rearrange.hpp"

namespace fs = std::filesystem;

namespace anisym {

namespace {

std::string format_number(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string hex16(std::uint64_t bits) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[bits & 0xf];
    bits >>= 4;
  }
  return out;
}

std::vector<double> ones(std::size_t n) { return std::vector<double>(n, 1.0); }

RegularityCase parse_regularity_case(const std::string& name) {
  if (name == "bounded" || name == "essential_sup") {
    return RegularityCase::kBounded;
  }
  if (name == "exponential_scale" || name == "exponential") {
    return RegularityCase::kExponentialScale;
  }
  if (name == "lorentz_scale" || name == "lorentz") {
    return RegularityCase::kLorentzScale;
  }
  throw ValidationError("unknown regularity case '" + name +
                        "' (expected \"bounded\", \"exponential_scale\" or "
                        "\"lorentz_scale\")");
}

// Interprets a sweep axis value: config syntax when it parses (numbers,
// booleans, quoted strings, arrays), a bare string otherwise.
ConfigValue parse_axis_value(const std::string& text) {
  try {
    const ConfigValue wrapped = parse_config("v = " + text + "\n");
    if (const ConfigValue* v = wrapped.find("v")) return *v;
  } catch (const ValidationError&) {
  }
  return ConfigValue(ConfigValue::Storage(text));
}

}  // namespace

ExperimentConfig ExperimentConfig::load(
    const std::string& path, std::optional<std::uint64_t> seed_override) {
  return from_value(load_config_file(path), seed_override);
}

ExperimentConfig ExperimentConfig::from_value(
    ConfigValue cfg, std::optional<std::uint64_t> seed_override) {
  ExperimentConfig out;
  out.raw = std::move(cfg);
  out.hash = config_hash(out.raw);
  out.seed = seed_override
                 ? *seed_override
                 : static_cast<std::uint64_t>(
                       out.raw.get_number("run.seed", 0.0));
  const std::uint64_t hash_bits =
      std::strtoull(out.hash.c_str(), nullptr, 16);
  out.run_id = out.raw.get_string("run.id", hex16(hash_bits ^ out.seed));
  return out;
}

GridFunction ExperimentConfig::build_domain() const {
  const std::string kind = raw.get_string("domain.kind");
  if (kind == "disk") {
    const double radius = raw.get_number("domain.radius");
    const double h = raw.get_number("domain.h");
    if (!(radius > 0.0) || !(h > 0.0)) {
      throw ValidationError("disk domain requires positive radius and h");
    }
    return make_disk_grid(radius, h);
  }
  if (kind == "box") {
    const auto lo = raw.get_number_list("domain.lo");
    const auto hi = raw.get_number_list("domain.hi");
    const double h = raw.get_number("domain.h");
    if (!(h > 0.0)) throw ValidationError("box domain requires positive h");
    return make_box_grid(lo, hi, h);
  }
  throw ValidationError("unknown domain kind '" + kind +
                        "' (expected \"disk\" or \"box\")");
}

double ExperimentConfig::analytic_measure() const {
  const std::string kind = raw.get_string("domain.kind");
  if (kind == "disk") {
    const double radius = raw.get_number("domain.radius");
    return unit_ball_volume(2) * radius * radius;
  }
  if (kind == "box") {
    const auto lo = raw.get_number_list("domain.lo");
    const auto hi = raw.get_number_list("domain.hi");
    if (lo.size() != hi.size()) {
      throw ValidationError("domain.lo and domain.hi must match in length");
    }
    double measure = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) measure *= hi[i] - lo[i];
    return measure;
  }
  throw ValidationError("unknown domain kind '" + kind + "'");
}

YoungSpec ExperimentConfig::build_young() const {
  const std::string family = raw.get_string("phi.family");
  if (family == "power_sum") {
    const auto p = raw.get_number_list("phi.p");
    const auto lambda = raw.has("phi.lambda")
                            ? raw.get_number_list("phi.lambda")
                            : ones(p.size());
    return YoungSpec::power_sum(p, lambda);
  }
  if (family == "log_perturbed_sum") {
    return YoungSpec::log_perturbed_sum(raw.get_number_list("phi.p"),
                                        raw.get_number_list("phi.alpha"),
                                        raw.get_number("phi.shift"));
  }
  if (family == "two_dim_coupled") {
    return YoungSpec::two_dim_coupled(
        raw.get_number("phi.alpha"), raw.get_number("phi.beta"),
        raw.get_number("phi.delta", 0.0),
        raw.get_number("phi.shift", 2.718281828459045));
  }
  throw ValidationError("unknown phi family '" + family + "'");
}

DiscreteProblem ExperimentConfig::build_problem() const {
  DiscreteProblem prob;
  prob.domain = build_domain();

  const YoungSpec young = build_young();
  const auto* power = std::get_if<PowerSumSpec>(&young.family());
  if (!power) {
    throw ValidationError(
        "the discrete solver supports only the weighted power-sum family");
  }
  prob.p = power->p;
  prob.lambda = power->lambda;

  const Expression f_expr = Expression::parse(raw.get_string("data.f", "0"));
  prob.f = prob.domain;
  fill_grid(prob.f,
            [&](const std::vector<double>& x) { return f_expr.eval(x); });

  if (raw.has("data.g")) {
    for (const auto& text : raw.get_string_list("data.g")) {
      const Expression g_expr = Expression::parse(text);
      GridFunction gi = prob.domain;
      fill_grid(gi,
                [&](const std::vector<double>& x) { return g_expr.eval(x); });
      prob.g.push_back(std::move(gi));
    }
  }
  prob.validate();
  return prob;
}

SolveOptions ExperimentConfig::solver_options() const {
  SolveOptions opts;
  opts.tol = raw.get_number("solver.tol", opts.tol);
  opts.max_iter =
      static_cast<int>(raw.get_number("solver.max_iter", opts.max_iter));
  opts.eps_start = raw.get_number("solver.eps_start", opts.eps_start);
  opts.eps_min = raw.get_number("solver.eps_min", opts.eps_min);
  opts.record_trace = raw.get_bool("solver.record_trace", opts.record_trace);
  opts.trace_stride = static_cast<int>(
      raw.get_number("solver.trace_stride", opts.trace_stride));
  return opts;
}

ComparisonOptions ExperimentConfig::comparison_options() const {
  ComparisonOptions opts;
  opts.c1 = raw.get_number("verify.c1", opts.c1);
  opts.c2 = raw.get_number("verify.c2", opts.c2);
  opts.threshold = raw.get_number("verify.threshold", opts.threshold);
  opts.edge_guard = raw.get_number("verify.edge_guard", opts.edge_guard);
  opts.calibrate_measure =
      raw.get_bool("verify.calibrate_measure", opts.calibrate_measure);
  opts.analytic_measure = analytic_measure();
  opts.barrier_nodes = static_cast<int>(
      raw.get_number("verify.barrier_nodes", opts.barrier_nodes));
  return opts;
}

RunArtifacts run_experiment(const ExperimentConfig& cfg,
                            const std::string& out_dir) {
  RunArtifacts art;
  art.out_dir = out_dir;
  std::error_code ec;
  fs::create_directories(out_dir, ec);

  nlohmann::json report;
  report["run_id"] = cfg.run_id;
  report["config_hash"] = cfg.hash;

  std::string margins_csv;
  std::string trace_csv;
  int status = 0;
  try {
    const DiscreteProblem prob = cfg.build_problem();
    const SolveOptions sopts = cfg.solver_options();
    const ComparisonOptions copts = cfg.comparison_options();

    const SolveResult sol = solve(prob, sopts);
    const ComparisonReport comp = comparison_report(prob, sol.u, copts);
    const double slack = cfg.raw.get_number("verify.slack", 0.05);
    const GradientEstimateReport grad =
        gradient_estimate_report(prob, sol.u, copts, slack);

    bool all_pass = sol.converged && comp.pass && grad.pass;

    report["empirical_C"] = comp.empirical_c;
    report["threshold"] = comp.threshold;
    report["measure"] = comp.measure_used;
    report["barrier_max"] = comp.barrier_max;
    report["margins_csv_path"] = "margins.csv";
    report["trace_csv_path"] = "trace.csv";
    if (!comp.notes.empty()) report["notes"] = comp.notes;
    report["solver"] = {{"converged", sol.converged},
                        {"iterations", sol.iterations},
                        {"energy", sol.energy},
                        {"grad_norm", sol.grad_norm},
                        {"relative_grad", sol.relative_grad}};
    report["gradient_estimate"] = {{"lhs", grad.lhs},
                                   {"rhs", grad.rhs},
                                   {"ratio", grad.ratio},
                                   {"pass", grad.pass}};
    report["conditions"] = {
        {"psi_range_unbounded", comp.wellposed.psi_range_unbounded},
        {"pointwise_range_ok", comp.wellposed.pointwise_range_ok},
        {"gradient_energy_finite", comp.wellposed.gradient_energy_finite},
        {"data_admissible", comp.wellposed.data_admissible},
        {"ok", comp.wellposed.ok()}};

    const StepProfile u_star = decreasing_rearrangement(sol.u);
    const StepProfile f_star = decreasing_rearrangement(prob.f);
    report["norms"] = {{"u_max", sol.u.max_abs()},
                       {"u_lorentz_2_2", lorentz_norm(u_star, 2.0, 2.0)},
                       {"f_lorentz_2_2", lorentz_norm(f_star, 2.0, 2.0)},
                       {"gradient_integral", grad.lhs}};

    if (cfg.raw.get_bool("verify.regularity", false)) {
      RegularityParams params;
      params.table_case =
          parse_regularity_case(cfg.raw.get_string("verify.regularity_case"));
      params.m = cfg.raw.get_number("verify.m");
      params.sigma = cfg.raw.get_number("verify.sigma", 2.0);
      params.allow_outside_hypotheses =
          cfg.raw.get_bool("verify.allow_outside_hypotheses", false);
      const RegularityReport reg = regularity_table(prob, sol.u, params);
      report["regularity"] = {
          {"case", cfg.raw.get_string("verify.regularity_case")},
          {"outside_hypotheses", reg.outside_hypotheses},
          {"lhs_norm", reg.lhs_norm},
          {"f_norm", reg.f_norm},
          {"rhs_combo", reg.rhs_combo},
          {"empirical_C", reg.empirical_c}};
      all_pass = all_pass && std::isfinite(reg.empirical_c);
    }

    if (cfg.raw.get_bool("verify.distributional", false)) {
      DistributionalParams params;
      params.m = cfg.raw.get_number("verify.m", params.m);
      params.gamma = cfg.raw.get_number("verify.gamma", params.gamma);
      if (cfg.raw.has("verify.truncation_levels")) {
        params.truncation_levels =
            cfg.raw.get_number_list("verify.truncation_levels");
      }
      params.allow_outside_hypotheses =
          cfg.raw.get_bool("verify.allow_outside_hypotheses", false);
      params.solver = sopts;
      const DistributionalReport dist =
          distributional_exponents_check(prob, params);
      nlohmann::json levels = nlohmann::json::array();
      for (const auto& level : dist.levels) {
        levels.push_back({{"level", level.level},
                          {"f_norm", level.f_norm},
                          {"grad_norms", level.grad_norms},
                          {"envelope", level.envelope}});
      }
      report["distributional"] = {
          {"outside_hypotheses", dist.outside_hypotheses},
          {"m_star", dist.m_star},
          {"q", dist.q},
          {"levels", levels},
          {"envelope_spread", dist.envelope_spread}};
    }

    report["pass"] = all_pass;
    status = all_pass ? 0 : 1;
    art.empirical_c = comp.empirical_c;
    art.pass = all_pass;

    std::ostringstream margins;
    margins << "s,u_star,v,ratio\n";
    for (const auto& row : comp.rows) {
      margins << format_number(row.s) << ',' << format_number(row.u_star)
              << ',' << format_number(row.v) << ',' << format_number(row.ratio)
              << '\n';
    }
    margins_csv = margins.str();

    std::ostringstream trace;
    trace << "iteration,eps,energy,grad_norm,step\n";
    for (const auto& row : sol.trace) {
      trace << row.iteration << ',' << format_number(row.eps) << ','
            << format_number(row.energy) << ',' << format_number(row.grad_norm)
            << ',' << format_number(row.step) << '\n';
    }
    trace_csv = trace.str();
  } catch (const ValidationError& e) {
    status = 2;
    report["error"] = e.what();
  } catch (const NumericalError& e) {
    status = 1;
    report["error"] = e.what();
  } catch (const std::exception& e) {
    status = 1;
    report["error"] = e.what();
  }

  report["status"] = status;
  art.status = status;
  try {
    if (!margins_csv.empty()) {
      write_file_atomic((fs::path(out_dir) / "margins.csv").string(),
                        margins_csv);
    }
    if (!trace_csv.empty()) {
      write_file_atomic((fs::path(out_dir) / "trace.csv").string(), trace_csv);
    }
    const std::string report_path = (fs::path(out_dir) / "report.json").string();
    write_file_atomic(report_path, report.dump(2) + "\n");
    art.report_path = report_path;
  } catch (const std::exception&) {
    if (art.status == 0) art.status = 1;
  }
  return art;
}

SweepResult run_sweep(const ExperimentConfig& base, const std::string& axis,
                      const std::vector<std::string>& values,
                      const std::string& out_dir, int workers) {
  if (axis.empty()) throw ValidationError("sweep axis must not be empty");
  if (values.empty()) throw ValidationError("sweep needs at least one value");
  std::error_code ec;
  fs::create_directories(out_dir, ec);

  struct Slot {
    RunArtifacts art;
    std::string run_id;
    double runtime = 0.0;
  };
  std::vector<Slot> slots(values.size());

  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= values.size()) return;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        ConfigValue modified = base.raw;
        modified.set(axis, parse_axis_value(values[i]));
        const ExperimentConfig cfg =
            ExperimentConfig::from_value(std::move(modified), base.seed);
        slots[i].run_id = cfg.run_id;
        slots[i].art = run_experiment(
            cfg, (fs::path(out_dir) / ("run_" + std::to_string(i))).string());
      } catch (const ValidationError&) {
        slots[i].art.status = 2;
      } catch (const std::exception&) {
        slots[i].art.status = 1;
      }
      slots[i].runtime =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
    }
  };

  const int n_threads =
      std::max(1, std::min<int>(workers, static_cast<int>(values.size())));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();

  SweepResult result;
  std::ostringstream csv;
  csv << "value,run_id,empirical_C,pass,status,runtime_s\n";
  char runtime_buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& slot = slots[i];
    std::snprintf(runtime_buf, sizeof(runtime_buf), "%.3f", slot.runtime);
    csv << values[i] << ',' << slot.run_id << ','
        << format_number(slot.art.empirical_c) << ','
        << (slot.art.pass ? "true" : "false") << ',' << slot.art.status << ','
        << runtime_buf << '\n';
    result.status = std::max(result.status, slot.art.status);
    result.runs.push_back(slot.art);
  }
  result.csv_path = (fs::path(out_dir) / "sweep.csv").string();
  write_file_atomic(result.csv_path, csv.str());
  return result;
}

std::string norms_report(const ConfigValue& cfg) {
  const std::string profile_kind = cfg.get_string("profile.kind");
  StepProfile profile;
  nlohmann::json profile_echo;
  profile_echo["kind"] = profile_kind;
  if (profile_kind == "indicator") {
    const double measure = cfg.get_number("profile.measure");
    if (!(measure > 0.0)) {
      throw ValidationError("profile.measure must be positive");
    }
    profile = StepProfile::constant(1.0, measure);
    profile_echo["measure"] = measure;
  } else if (profile_kind == "steps") {
    profile = StepProfile(cfg.get_number_list("profile.edges"),
                          cfg.get_number_list("profile.values"));
    profile_echo["pieces"] = profile.pieces();
  } else {
    throw ValidationError("unknown profile kind '" + profile_kind +
                          "' (expected \"indicator\" or \"steps\")");
  }

  const std::string kind = cfg.get_string("norm.kind");
  nlohmann::json norm_echo;
  norm_echo["kind"] = kind;
  double value = 0.0;
  if (kind == "lorentz") {
    const double p = cfg.get_number("norm.p");
    const double q = cfg.get_number("norm.q");
    norm_echo["p"] = p;
    norm_echo["q"] = q;
    value = lorentz_norm(profile, p, q);
  } else if (kind == "lorentz_zygmund") {
    const double p = cfg.get_number("norm.p");
    const double q = cfg.get_number("norm.q");
    const double alpha = cfg.get_number("norm.alpha");
    const double beta = cfg.get_number("norm.beta", 0.0);
    norm_echo["p"] = p;
    norm_echo["q"] = q;
    norm_echo["alpha"] = alpha;
    norm_echo["beta"] = beta;
    value = lorentz_zygmund_norm(profile, p, q, alpha, beta);
  } else if (kind == "luxemburg") {
    const double young_p = cfg.get_number("norm.young_p");
    const double coeff = cfg.get_number("norm.young_coeff", 1.0);
    norm_echo["young_p"] = young_p;
    norm_echo["young_coeff"] = coeff;
    value = luxemburg_norm(profile, OneDimYoung::power(coeff, young_p));
  } else if (kind == "orlicz_lorentz") {
    const double young_p = cfg.get_number("norm.young_p");
    const int n = static_cast<int>(cfg.get_number("norm.dim", 2.0));
    const bool normalize = cfg.get_bool("norm.normalize_at_zero", false);
    norm_echo["young_p"] = young_p;
    norm_echo["dim"] = n;
    norm_echo["normalize_at_zero"] = normalize;
    value = orlicz_lorentz_norm(profile, OneDimYoung::power(1.0, young_p), n,
                                normalize);
  } else {
    throw ValidationError("unknown norm kind '" + kind + "'");
  }

  nlohmann::json payload;
  payload["norm"] = norm_echo;
  payload["profile"] = profile_echo;
  payload["value"] = value;
  return payload.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  static std::atomic<std::uint64_t> counter{0};
  const fs::path target(path);
  fs::path dir = target.parent_path();
  if (dir.empty()) dir = ".";
  std::error_code ec;
  fs::create_directories(dir, ec);

  const fs::path tmp =
      dir / (target.filename().string() + ".tmp." +
             std::to_string(counter.fetch_add(1)));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out.good()) {
      throw NumericalError("cannot open '" + tmp.string() + "' for writing");
    }
    out.write(contents.data(),
              static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out.good()) {
      fs::remove(tmp, ec);
      throw NumericalError("failed while writing '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code cleanup;
    fs::remove(tmp, cleanup);
    throw NumericalError("cannot move '" + tmp.string() + "' into place: " +
                         ec.message());
  }
}

}  // namespace anisym
