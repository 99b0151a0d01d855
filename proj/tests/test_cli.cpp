#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "amis/commands.hpp"
#include "amis/config.hpp"
#include "amis/errors.hpp"
#include "amis/report_io.hpp"

using namespace amis;

namespace {

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "amis_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("config defaults cover every algorithm") {
  SUBCASE("GIS") {
    const ExperimentConfig cfg = parse_config_text(R"({"algorithm": "GIS"})");
    CHECK(cfg.initial_peaks == std::vector<ParameterPoint>{{5.0}});
    CHECK(cfg.initial_mixing_rates == std::vector<double>{1.0});
    CHECK(cfg.proposal_sigmas == std::vector<std::vector<double>>{{1.0}});
    CHECK(cfg.counterfactual_sigma == 1.0);
    CHECK(cfg.grid_size == 11);
    CHECK(cfg.n_samples == 100);
    CHECK(cfg.t_iterations == 10);
    CHECK(cfg.r_runs == 100);
    CHECK(cfg.landscape.mu_star == ParameterPoint{10.0});
    CHECK(cfg.landscape.sigma_star == 1.0);
    CHECK(cfg.landscape.amplitude == 100.0);
  }
  SUBCASE("MVU") {
    const ExperimentConfig cfg = parse_config_text(R"({"algorithm": "MVU"})");
    CHECK(cfg.initial_peaks == std::vector<ParameterPoint>{{5.0}, {5.0}});
    CHECK(cfg.initial_mixing_rates == std::vector<double>{0.8, 0.2});
    CHECK(cfg.proposal_sigmas == std::vector<std::vector<double>>{{1.0}, {3.0}});
    CHECK(cfg.counterfactual_sigma == 2.0);
  }
  SUBCASE("GU and PCU") {
    for (const char* text : {R"({"algorithm": "GU"})", R"({"algorithm": "PCU"})"}) {
      const ExperimentConfig cfg = parse_config_text(text);
      CHECK(cfg.initial_peaks == std::vector<ParameterPoint>{{3.0}, {5.0}, {7.0}});
      CHECK(cfg.initial_mixing_rates == std::vector<double>{0.2, 0.6, 0.2});
      CHECK(cfg.counterfactual_sigma == 1.0);
    }
    CHECK(parse_config_text(R"({"algorithm": "GU"})").peak_distance_coefficient == 1.5);
  }
  SUBCASE("defaults produce runnable configurations") {
    for (PolicyKind kind : {PolicyKind::Gis, PolicyKind::Mvu, PolicyKind::GreedyUpdate,
                            PolicyKind::PeakClusterUpdate}) {
      ExperimentConfig cfg = default_config(kind);
      CHECK_NOTHROW(validate_config(cfg));
      cfg.r_runs = 1;
      cfg.t_iterations = 1;
      CHECK_NOTHROW(run_experiment(cfg, false));
    }
  }
}

TEST_CASE("config validation errors name the field") {
  SUBCASE("unknown algorithm") {
    try {
      (void)parse_config_text(R"({"algorithm": "XGB"})");
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "algorithm");
    }
  }
  SUBCASE("simplex violation") {
    try {
      (void)parse_config_text(
          R"({"algorithm": "MVU", "initial_mixing_rates": [0.5, 0.6]})");
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "initial_mixing_rates");
    }
  }
  SUBCASE("even grid size") {
    try {
      (void)parse_config_text(R"({"algorithm": "GIS", "grid_size": 10})");
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "grid_size");
    }
  }
  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS((void)parse_config_text(R"({"algorithm": "GIS", "gama": 1.0})"),
                    ValidationError);
  }
  SUBCASE("scalar forms are accepted for peaks and landscape means") {
    const ExperimentConfig cfg = parse_config_text(
        R"({"algorithm": "PCU", "initial_peaks": [3, 5, 7], "landscape": {"mu_star": 10}})");
    CHECK(cfg.initial_peaks == std::vector<ParameterPoint>{{3.0}, {5.0}, {7.0}});
    CHECK(cfg.landscape.mu_star == ParameterPoint{10.0});
  }
}

TEST_CASE("config files parse from disk") {
  const auto path = temp_dir() / "config.json";
  {
    std::ofstream out(path);
    out << R"({"algorithm": "PCU", "gamma": 10.0, "ess_threshold": 0.4, "master_seed": 99})";
  }
  const ExperimentConfig cfg = parse_config(path.string());
  CHECK(cfg.algorithm == "PCU");
  CHECK(cfg.gamma == 10.0);
  CHECK(cfg.ess_threshold == 0.4);
  CHECK(cfg.master_seed == 99);
  CHECK(cfg.delta == 0.2);
  CHECK_THROWS_AS((void)parse_config((temp_dir() / "missing.json").string()), ValidationError);
}

TEST_CASE("report rows round-trip at 12 significant digits") {
  ExperimentConfig cfg = default_config(PolicyKind::GreedyUpdate);
  cfg.gamma = 10.0;
  cfg.r_runs = 6;
  cfg.master_seed = 2025;
  const ExperimentResult result = run_experiment(cfg, false);
  const std::string row = report_csv_row(result.report);
  const ParsedReportRow parsed = parse_report_row(row);
  CHECK(parsed.algo == "GU");
  CHECK(parsed.gamma == 10.0);
  CHECK(parsed.n == 100);
  CHECK(parsed.t == 10);
  CHECK(parsed.r == 6);
  CHECK(parsed.seed == 2025);
  CHECK(std::abs(parsed.mean_regret - result.report.mean_regret) <=
        1e-11 * std::max(std::abs(result.report.mean_regret), 1.0));
  CHECK(std::abs(parsed.mae - result.report.mae) <=
        1e-11 * std::max(std::abs(result.report.mae), 1.0));
  CHECK(std::abs(parsed.mse - result.report.mse) <=
        1e-11 * std::max(std::abs(result.report.mse), 1.0));
  CHECK(std::abs(parsed.var - result.report.var) <=
        1e-11 * std::max(std::abs(result.report.var), 1.0));
  CHECK(std::abs(parsed.prc - result.report.prc) <= 1e-11);
  if (result.report.fci) {
    REQUIRE(parsed.fci.has_value());
    CHECK(std::abs(*parsed.fci - *result.report.fci) <= 1e-11 * *result.report.fci);
  } else {
    CHECK_FALSE(parsed.fci.has_value());
  }
}

TEST_CASE("cmd_run writes a deterministic report and trace") {
  const auto out = temp_dir() / "run.csv";
  const auto trace_path = temp_dir() / "run_trace.jsonl";
  ExperimentConfig cfg = default_config(PolicyKind::Gis);
  cfg.r_runs = 3;
  cfg.master_seed = 7;
  cfg.out = out.string();
  cfg.trace = trace_path.string();
  REQUIRE(cmd_run(cfg) == 0);
  const std::string first = slurp(out);
  REQUIRE(cmd_run(cfg) == 0);
  CHECK(first == slurp(out));
  CHECK(first.rfind("algo,gamma,ess_threshold,n,t,r,seed,mean_regret,mae,mse,var,fci,prc\n", 0) ==
        0);

  const std::string trace_text = slurp(trace_path);
  std::istringstream lines(trace_text);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    ++count;
    CHECK(line.find("\"run\"") != std::string::npos);
    CHECK(line.find("\"iter\"") != std::string::npos);
    CHECK(line.find("\"peaks\"") != std::string::npos);
    CHECK(line.find("\"mixing_rates\"") != std::string::npos);
    CHECK(line.find("\"best_score\"") != std::string::npos);
    CHECK(line.find("\"major_peak\"") != std::string::npos);
    CHECK(line.find("\"regret_term\"") != std::string::npos);
  }
  CHECK(count == 30);  // 3 runs x 10 iterations
}

TEST_CASE("cmd_run fails cleanly on an unwritable path") {
  ExperimentConfig cfg = default_config(PolicyKind::Gis);
  cfg.r_runs = 1;
  cfg.t_iterations = 1;
  cfg.out = "/nonexistent_dir_amis/report.csv";
  CHECK(cmd_run(cfg) != 0);
  CHECK_FALSE(std::filesystem::exists("/nonexistent_dir_amis/report.csv"));
}

TEST_CASE("cmd_table") {
  SUBCASE("single cell matches cmd_run output") {
    const auto run_out = temp_dir() / "single_run.csv";
    const auto table_out = temp_dir() / "single_table.csv";
    ExperimentConfig cfg = default_config(PolicyKind::Mvu);
    cfg.gamma = 10.0;
    cfg.r_runs = 4;
    cfg.master_seed = 11;
    cfg.out = run_out.string();
    REQUIRE(cmd_run(cfg) == 0);

    TableOptions opts;
    opts.base = cfg;
    opts.base.out = table_out.string();
    opts.algorithms = {"MVU"};
    opts.gammas = {10.0};
    opts.ess_thresholds = {0.0};
    REQUIRE(cmd_table(opts) == 0);
    CHECK(slurp(run_out) == slurp(table_out));
  }
  SUBCASE("default matrix yields 24 rows") {
    const auto out = temp_dir() / "matrix.csv";
    TableOptions opts;
    opts.base = default_config(PolicyKind::Gis);
    opts.base.r_runs = 2;
    opts.base.t_iterations = 2;
    opts.base.out = out.string();
    REQUIRE(cmd_table(opts) == 0);
    std::istringstream lines(slurp(out));
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 25);  // header + 4 algos x 3 gammas x 2 thresholds
  }
  SUBCASE("empty algorithm list is a usage error") {
    TableOptions opts;
    opts.base = default_config(PolicyKind::Gis);
    opts.algorithms = {};
    CHECK(cmd_table(opts) == 2);
  }
}

TEST_CASE("cmd_sweep") {
  SUBCASE("single proposal writes one CSV") {
    const auto out = temp_dir() / "sweep.csv";
    SweepOptions opts;
    opts.proposals = {{{9.0}, 2.0, {}}};
    opts.grid_min = 8.0;
    opts.grid_max = 10.0;
    opts.grid_points = 5;
    opts.n_samples = 2000;
    opts.out = out.string();
    REQUIRE(cmd_sweep(opts) == 0);
    const std::string text = slurp(out);
    CHECK(text.rfind("grid_mean,estimate,true_value,abs_rel_error\n", 0) == 0);
    std::istringstream lines(text);
    std::string line;
    int rows = -1;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 5);
  }
  SUBCASE("multiple proposals write indexed CSVs") {
    const auto out = temp_dir() / "multi.csv";
    SweepOptions opts;
    opts.proposals = {{{1.0, 6.0, 11.0, 16.0}, 1.0, {}}, {{9.0}, 2.0, {}}};
    opts.grid_min = -2.0;
    opts.grid_max = 20.0;
    opts.grid_points = 12;
    opts.n_samples = 500;
    opts.out = out.string();
    REQUIRE(cmd_sweep(opts) == 0);
    CHECK(std::filesystem::exists(temp_dir() / "multi_0.csv"));
    CHECK(std::filesystem::exists(temp_dir() / "multi_1.csv"));
  }
  SUBCASE("empty grid is a usage error") {
    SweepOptions opts;
    opts.proposals = {{{9.0}, 2.0, {}}};
    opts.grid_points = 0;
    CHECK(cmd_sweep(opts) == 2);
  }
  SUBCASE("no proposals is a usage error") {
    SweepOptions opts;
    opts.grid_min = 0.0;
    opts.grid_max = 1.0;
    opts.grid_points = 2;
    CHECK(cmd_sweep(opts) == 2);
  }
}
