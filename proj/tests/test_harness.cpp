#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "common.hpp"
#include "config.hpp"
#include "doctest.h"
#include "expr.hpp"
#include "json.hpp"

using namespace anisym;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("anisym_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const char* kDiskConfig = R"(
# constant-source disk check
[domain]
kind = "disk"
radius = 1.0
h = 0.125

[phi]
family = "power_sum"
p = [2.0, 2.0]
lambda = [1.0, 1.0]

[data]
f = "1"

[solver]
tol = 1e-9

[verify]
threshold = 1.5

[run]
seed = 3
)";

}  // namespace

TEST_CASE("config parser handles the documented grammar") {
  const auto cfg = parse_config(R"(
# top comment
title = "demo \"quoted\" name"
[domain]
kind = "disk"   # trailing comment
radius = 1.0
h = 0.125
limits = [1, 2.5, -3e-1]
opts = {tol = 1e-8, verbose = true}
bound = inf
neg = -inf
flag = false
[phi.inner]
p = [1.5, 3.0]
[nested]
a.b = 3.0
)");
  CHECK(cfg.get_string("title") == "demo \"quoted\" name");
  CHECK(cfg.get_string("domain.kind") == "disk");
  CHECK(cfg.get_number("domain.h") == doctest::Approx(0.125));
  const auto limits = cfg.get_number_list("domain.limits");
  REQUIRE(limits.size() == 3);
  CHECK(limits[1] == doctest::Approx(2.5));
  CHECK(limits[2] == doctest::Approx(-0.3));
  CHECK(cfg.get_number("domain.opts.tol") == doctest::Approx(1e-8));
  CHECK(cfg.get_bool("domain.opts.verbose", false));
  CHECK(std::isinf(cfg.get_number("domain.bound")));
  CHECK(cfg.get_number("domain.neg") < 0.0);
  CHECK(std::isinf(cfg.get_number("domain.neg")));
  CHECK_FALSE(cfg.get_bool("domain.flag", true));
  const auto p = cfg.get_number_list("phi.inner.p");
  REQUIRE(p.size() == 2);
  CHECK(p[0] == doctest::Approx(1.5));
  CHECK(cfg.get_number("nested.a.b") == doctest::Approx(3.0));

  // fallbacks and missing keys
  CHECK(cfg.get_number("domain.missing", 7.5) == doctest::Approx(7.5));
  CHECK_THROWS_AS(cfg.get_number("domain.missing"), ValidationError);
  CHECK_THROWS_AS(cfg.get_string("domain.h"), ValidationError);  // wrong type
}

TEST_CASE("config parser rejects malformed input with line information") {
  auto expect_throw_mentioning = [](const std::string& text) {
    try {
      parse_config(text);
      FAIL("expected a parse failure");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
  };
  expect_throw_mentioning("key =\n");
  expect_throw_mentioning("[unclosed\nk = 1\n");
  expect_throw_mentioning("k = [1, 2\n");
  expect_throw_mentioning("= 3\n");
  expect_throw_mentioning("k = \"unterminated\n");
}

TEST_CASE("canonical form is stable across key order and number spelling") {
  const auto a = parse_config("[s]\nx = 2.0\ny = 1e1\n[t]\nz = \"v\"\n");
  const auto b = parse_config("[t]\nz = \"v\"\n[s]\ny = 10.0\nx = 2\n");
  CHECK(a.canonical() == b.canonical());
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);

  const auto c = parse_config("[s]\nx = 2.0\ny = 1e1\n[t]\nz = \"w\"\n");
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("expression language evaluates the documented grammar") {
  CHECK(Expression::parse("1 - 2*x1 + x2").eval({0.3, -0.5}) ==
        doctest::Approx(-0.1).epsilon(1e-13));
  CHECK(Expression::parse("2^(-1.2)").eval({}) ==
        doctest::Approx(0.4352752816480622).epsilon(1e-14));
  CHECK(Expression::parse("sin(pi*x1)").eval({0.5}) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(Expression::parse("max(x1, x2) + abs(min(x1, 0))").eval({-2, 3}) ==
        doctest::Approx(5.0));
  CHECK(Expression::parse("r").eval({3, 4}) == doctest::Approx(5.0));
  CHECK(Expression::parse("exp(log(7))").eval({}) ==
        doctest::Approx(7.0).epsilon(1e-12));
  CHECK(Expression::parse("2*3^2").eval({}) == doctest::Approx(18.0));
  CHECK(Expression::parse("2^3^2").eval({}) == doctest::Approx(512.0));
  CHECK(Expression::parse("0 - 3^2").eval({}) == doctest::Approx(-9.0));
  CHECK(std::isinf(Expression::parse("inf").eval({})));

  CHECK_THROWS_AS(Expression::parse("2 +"), ValidationError);
  CHECK_THROWS_AS(Expression::parse("foo(3)"), ValidationError);
  CHECK_THROWS_AS(Expression::parse("x1 @ 2"), ValidationError);
  CHECK_THROWS_AS(Expression::parse(""), ValidationError);
  CHECK_THROWS_AS(Expression::parse("x3").eval({1.0, 2.0}), ValidationError);
}

TEST_CASE("experiment config wires the domain, young spec and seeds") {
  auto cfg = ExperimentConfig::from_value(parse_config(kDiskConfig), {});
  CHECK(cfg.seed == 3);
  CHECK(cfg.hash.size() == 16);
  CHECK(cfg.run_id.size() == 16);

  const auto domain = cfg.build_domain();
  CHECK(domain.dim() == 2);
  // nodes at multiples of 1/8 with |x| <= 1 - 1/16: 177 of them
  CHECK(domain.masked_count() == 177);
  CHECK(cfg.analytic_measure() == doctest::Approx(kPi).epsilon(1e-12));

  const auto young = cfg.build_young();
  CHECK(young.dim() == 2);
  CHECK(young.eval({1.0, 2.0}) == doctest::Approx(5.0).epsilon(1e-13));

  const auto prob = cfg.build_problem();
  CHECK(prob.p.size() == 2);
  CHECK(prob.f.values().size() == prob.domain.size());

  // seed override changes the run id but not the config hash
  auto forced = ExperimentConfig::from_value(parse_config(kDiskConfig), 42);
  CHECK(forced.seed == 42);
  CHECK(forced.hash == cfg.hash);
  CHECK(forced.run_id != cfg.run_id);

  // a coarse-grid cross-check of the mask rule
  auto coarse = parse_config(kDiskConfig);
  coarse.set("domain.h", ConfigValue(ConfigValue::Storage(0.5)));
  const auto coarse_cfg = ExperimentConfig::from_value(coarse, {});
  CHECK(coarse_cfg.build_domain().masked_count() == 9);
}

TEST_CASE("invalid domain configurations are rejected") {
  auto bad_h = parse_config(kDiskConfig);
  bad_h.set("domain.h", ConfigValue(ConfigValue::Storage(0.0)));
  const auto cfg = ExperimentConfig::from_value(bad_h, {});
  CHECK_THROWS_AS(cfg.build_domain(), ValidationError);

  auto bad_kind = parse_config(kDiskConfig);
  bad_kind.set("domain.kind",
               ConfigValue(ConfigValue::Storage(std::string("octagon"))));
  CHECK_THROWS_AS(ExperimentConfig::from_value(bad_kind, {}).build_domain(),
                  ValidationError);

  // the discrete solver only accepts the weighted power-sum family
  auto log_phi = parse_config(kDiskConfig);
  log_phi.set("phi.family",
              ConfigValue(ConfigValue::Storage(std::string("log_perturbed_sum"))));
  log_phi.set("phi.alpha", [] {
    ConfigValue::Array arr{ConfigValue(ConfigValue::Storage(1.0)),
                           ConfigValue(ConfigValue::Storage(0.5))};
    return ConfigValue(ConfigValue::Storage(arr));
  }());
  log_phi.set("phi.shift", ConfigValue(ConfigValue::Storage(3.0)));
  const auto log_cfg = ExperimentConfig::from_value(log_phi, {});
  CHECK_NOTHROW(log_cfg.build_young());
  CHECK_THROWS_AS(log_cfg.build_problem(), ValidationError);
}

TEST_CASE("experiment run writes deterministic artifacts") {
  const auto out1 = fresh_dir("run1");
  const auto out2 = fresh_dir("run2");
  const auto cfg = ExperimentConfig::from_value(parse_config(kDiskConfig), {});

  const auto run1 = run_experiment(cfg, out1.string());
  CHECK(run1.status == 0);
  CHECK(run1.pass);
  CHECK(run1.empirical_c > 0.5);
  CHECK(run1.empirical_c < 1.5);

  const auto report_text = read_file(run1.report_path);
  const auto report = nlohmann::json::parse(report_text);
  CHECK(report.at("run_id").get<std::string>() == cfg.run_id);
  CHECK(report.at("config_hash").get<std::string>() == cfg.hash);
  CHECK(report.at("empirical_C").get<double>() ==
        doctest::Approx(run1.empirical_c));
  CHECK(report.at("pass").get<bool>());
  CHECK(report.contains("norms"));
  CHECK(report.contains("conditions"));
  const auto margins_rel = report.at("margins_csv_path").get<std::string>();
  for (const auto& key : {"time", "wall", "date", "stamp"}) {
    CHECK(report_text.find(key) == std::string::npos);
  }

  const auto margins = read_file((fs::path(run1.out_dir) / margins_rel).string());
  CHECK(margins.rfind("s,u_star,v,ratio", 0) == 0);
  CHECK(std::count(margins.begin(), margins.end(), '\n') > 10);
  CHECK(fs::exists(fs::path(run1.out_dir) / "trace.csv"));

  // rerun in a different directory: byte-identical report and margins
  const auto run2 = run_experiment(cfg, out2.string());
  CHECK(read_file(run2.report_path) == report_text);
  CHECK(read_file((fs::path(run2.out_dir) / margins_rel).string()) == margins);

  fs::remove_all(out1);
  fs::remove_all(out2);
}

TEST_CASE("failed checks and hypothesis violations map to exit statuses") {
  // comparison threshold impossible to meet -> status 1
  auto strict = parse_config(kDiskConfig);
  strict.set("verify.threshold", ConfigValue(ConfigValue::Storage(1e-6)));
  const auto out1 = fresh_dir("fail1");
  const auto r1 = run_experiment(ExperimentConfig::from_value(strict, {}),
                                 out1.string());
  CHECK(r1.status == 1);
  CHECK_FALSE(r1.pass);
  fs::remove_all(out1);

  // distributional check outside its hypotheses in strict mode -> status 2
  auto outside = parse_config(kDiskConfig);
  outside.set("phi.p", [] {
    ConfigValue::Array arr{ConfigValue(ConfigValue::Storage(2.5)),
                           ConfigValue(ConfigValue::Storage(2.5))};
    return ConfigValue(ConfigValue::Storage(arr));
  }());
  outside.set("verify.distributional", ConfigValue(ConfigValue::Storage(true)));
  outside.set("verify.truncation_levels", [] {
    ConfigValue::Array arr{ConfigValue(ConfigValue::Storage(4.0)),
                           ConfigValue(ConfigValue::Storage(8.0))};
    return ConfigValue(ConfigValue::Storage(arr));
  }());
  const auto out2 = fresh_dir("fail2");
  const auto r2 = run_experiment(ExperimentConfig::from_value(outside, {}),
                                 out2.string());
  CHECK(r2.status == 2);
  fs::remove_all(out2);
}

TEST_CASE("config file loading and the sweep driver") {
  const auto dir = fresh_dir("sweep");
  const auto cfg_path = (dir / "base.toml").string();
  write_file_atomic(cfg_path, kDiskConfig);
  const auto base = ExperimentConfig::load(cfg_path, {});
  CHECK(base.seed == 3);

  const auto sweep =
      run_sweep(base, "domain.h", {"0.25", "0.125"}, dir.string(), 2);
  CHECK(sweep.status == 0);
  REQUIRE(sweep.runs.size() == 2);
  CHECK(sweep.runs[0].status == 0);
  CHECK(sweep.runs[1].status == 0);

  const auto csv = read_file(sweep.csv_path);
  std::istringstream lines(csv);
  std::string header, row1, row2;
  REQUIRE(std::getline(lines, header));
  REQUIRE(std::getline(lines, row1));
  REQUIRE(std::getline(lines, row2));
  CHECK(header == "value,run_id,empirical_C,pass,status,runtime_s");
  CHECK(row1.rfind("0.25,", 0) == 0);
  CHECK(row2.rfind("0.125,", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("norm evaluation subcommand payload") {
  const auto cfg = parse_config(R"(
[norm]
kind = "lorentz"
p = 2.0
q = 1.0

[profile]
kind = "indicator"
measure = 1.0
)");
  const auto payload = nlohmann::json::parse(norms_report(cfg));
  CHECK(payload.at("norm").at("kind").get<std::string>() == "lorentz");
  CHECK(payload.at("value").get<double>() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("atomic writes replace content without partial states") {
  const auto dir = fresh_dir("atomic");
  const auto path = (dir / "x.txt").string();
  write_file_atomic(path, "first");
  CHECK(read_file(path) == "first");
  write_file_atomic(path, "second version");
  CHECK(read_file(path) == "second version");
  fs::remove_all(dir);
}
