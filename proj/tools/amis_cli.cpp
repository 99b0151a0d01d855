#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "amis/commands.hpp"
#include "amis/config.hpp"
#include "amis/errors.hpp"

namespace {

std::vector<double> parse_reals(const std::string& text, const std::string& what) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    try {
      values.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw amis::ValidationError(what, "cannot parse number '" + token + "'");
    }
  }
  if (values.empty()) throw amis::ValidationError(what, "empty list");
  return values;
}

// "m1,m2,...@sigma" with an optional ":w1,w2,..." mixing-rate suffix.
amis::SweepProposalSpec parse_proposal_spec(const std::string& text) {
  amis::SweepProposalSpec spec;
  const auto at = text.find('@');
  if (at == std::string::npos) {
    throw amis::ValidationError("proposal", "expected means@sigma, got '" + text + "'");
  }
  spec.means = parse_reals(text.substr(0, at), "proposal means");
  std::string rest = text.substr(at + 1);
  const auto colon = rest.find(':');
  if (colon != std::string::npos) {
    spec.weights = parse_reals(rest.substr(colon + 1), "proposal weights");
    rest = rest.substr(0, colon);
  }
  try {
    spec.sigma = std::stod(rest);
  } catch (const std::exception&) {
    throw amis::ValidationError("proposal", "cannot parse sigma '" + rest + "'");
  }
  return spec;
}

struct SharedFlags {
  std::string config_path;
  std::string algo;
  double gamma = 0.0;
  double ess_threshold = 0.0;
  std::uint64_t seed = 0;
  std::size_t runs = 0;
  int iters = 0;
  std::size_t samples = 0;
  std::string out;
  std::string trace;
  bool parallel = true;
};

void add_shared_flags(CLI::App* cmd, SharedFlags& flags, bool with_algo) {
  cmd->add_option("--config", flags.config_path, "JSON config file");
  if (with_algo) {
    cmd->add_option("--algo", flags.algo, "algorithm: GIS, MVU, GU or PCU");
  }
  cmd->add_option("--gamma", flags.gamma, "noise ratio");
  cmd->add_option("--ess-threshold", flags.ess_threshold, "normalized ESS floor in [0,1)");
  cmd->add_option("--seed", flags.seed, "master seed");
  cmd->add_option("--runs", flags.runs, "repeated runs per cell");
  cmd->add_option("--iters", flags.iters, "tuning iterations per run");
  cmd->add_option("--samples", flags.samples, "samples per iteration");
  cmd->add_option("--out", flags.out, "output CSV path");
  cmd->add_option("--trace", flags.trace, "per-iteration trace path (JSON lines)");
  cmd->add_option("--parallel", flags.parallel, "run repeated runs in parallel");
}

// File values override algorithm defaults; flags override file values.
amis::ExperimentConfig resolve_config(const CLI::App* cmd, const SharedFlags& flags) {
  std::string text = "{}";
  if (cmd->count("--config")) {
    std::ifstream in(flags.config_path);
    if (!in) throw amis::ValidationError("config", "cannot open '" + flags.config_path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw amis::ValidationError("config", "not a JSON object");
  }
  const auto* algo_opt = cmd->get_option_no_throw("--algo");
  if (algo_opt != nullptr && algo_opt->count() > 0) j["algorithm"] = flags.algo;
  amis::ExperimentConfig cfg = amis::parse_config_text(j.dump());
  if (cmd->count("--gamma")) cfg.gamma = flags.gamma;
  if (cmd->count("--ess-threshold")) cfg.ess_threshold = flags.ess_threshold;
  if (cmd->count("--seed")) cfg.master_seed = flags.seed;
  if (cmd->count("--runs")) cfg.r_runs = flags.runs;
  if (cmd->count("--iters")) cfg.t_iterations = flags.iters;
  if (cmd->count("--samples")) cfg.n_samples = flags.samples;
  if (cmd->count("--out")) cfg.out = flags.out;
  if (cmd->count("--trace")) cfg.trace = flags.trace;
  if (cmd->count("--parallel")) cfg.parallel = flags.parallel;
  amis::validate_config(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive mixture importance sampling for offline parameter tuning"};
  app.require_subcommand(1);

  SharedFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "run one experiment cell and write a report row");
  add_shared_flags(run_cmd, run_flags, /*with_algo=*/true);

  SharedFlags table_flags;
  std::vector<std::string> table_algos{"GIS", "MVU", "GU", "PCU"};
  std::vector<double> table_gammas{0.0, 10.0, 100.0};
  std::vector<double> table_ess{0.0, 0.4};
  auto* table_cmd = app.add_subcommand("table", "run an (algorithm, gamma, ESS) matrix");
  add_shared_flags(table_cmd, table_flags, /*with_algo=*/false);
  table_cmd->add_option("--algos", table_algos, "algorithms to run")->delimiter(',');
  table_cmd->add_option("--gammas", table_gammas, "noise ratios")->delimiter(',');
  table_cmd->add_option("--ess-thresholds", table_ess, "ESS thresholds")->delimiter(',');

  std::vector<std::string> sweep_proposals;
  amis::SweepOptions sweep;
  double sweep_mu_star = 10.0;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "emit counterfactual estimates against the closed form");
  sweep_cmd->add_option("--proposal", sweep_proposals,
                        "proposal spec means@sigma[:weights], repeatable");
  sweep_cmd->add_option("--counterfactual-sigma", sweep.counterfactual_sigma,
                        "sigma of the counterfactual targets");
  sweep_cmd->add_option("--grid-min", sweep.grid_min, "lowest grid mean")->required();
  sweep_cmd->add_option("--grid-max", sweep.grid_max, "highest grid mean")->required();
  sweep_cmd->add_option("--grid-points", sweep.grid_points, "grid point count")->required();
  sweep_cmd->add_option("--sweep-samples", sweep.n_samples, "samples drawn from each proposal");
  sweep_cmd->add_option("--mu-star", sweep_mu_star, "landscape mean");
  sweep_cmd->add_option("--sigma-star", sweep.landscape.sigma_star, "landscape sigma");
  sweep_cmd->add_option("--amplitude", sweep.landscape.amplitude, "landscape amplitude");
  sweep_cmd->add_option("--seed", sweep.seed, "sampling seed");
  sweep_cmd->add_option("--out", sweep.out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return amis::cmd_run(resolve_config(run_cmd, run_flags));
    }
    if (table_cmd->parsed()) {
      amis::TableOptions opts;
      opts.base = resolve_config(table_cmd, table_flags);
      if (table_cmd->count("--out")) opts.base.out = table_flags.out;
      opts.algorithms = table_algos;
      opts.gammas = table_gammas;
      opts.ess_thresholds = table_ess;
      return amis::cmd_table(opts);
    }
    if (sweep_cmd->parsed()) {
      sweep.landscape.mu_star = {sweep_mu_star};
      for (const auto& text : sweep_proposals) {
        sweep.proposals.push_back(parse_proposal_spec(text));
      }
      return amis::cmd_sweep(sweep);
    }
  } catch (const amis::ValidationError& e) {
    std::cerr << "amis: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "amis: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
