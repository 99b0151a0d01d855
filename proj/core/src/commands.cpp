#include "amis/commands.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include "amis/errors.hpp"
#include "amis/report_io.hpp"

namespace amis {

namespace {

std::string indexed_path(const std::string& path, std::size_t index, std::size_t total) {
  if (total <= 1) return path;
  const std::filesystem::path p(path);
  std::filesystem::path out = p.parent_path();
  out /= p.stem().string() + "_" + std::to_string(index) + p.extension().string();
  return out.string();
}

}  // namespace

int cmd_run(const ExperimentConfig& cfg) {
  try {
    validate_config(cfg);
    const ExperimentResult result = run_experiment(cfg, cfg.parallel);
    std::string csv = report_csv_header();
    csv += '\n';
    csv += report_csv_row(result.report);
    csv += '\n';
    write_file_atomic(cfg.out, csv);
    if (!cfg.trace.empty()) {
      std::string lines;
      for (const auto& trace : result.traces) lines += trace_jsonl(trace);
      write_file_atomic(cfg.trace, lines);
    }
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "amis run: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "amis run: " << e.what() << '\n';
    return 1;
  }
}

int cmd_table(const TableOptions& opts) {
  if (opts.algorithms.empty()) {
    std::cerr << "amis table: no algorithms requested\n";
    return 2;
  }
  if (opts.gammas.empty() || opts.ess_thresholds.empty()) {
    std::cerr << "amis table: gamma and ESS-threshold lists must not be empty\n";
    return 2;
  }
  try {
    std::string csv = report_csv_header();
    csv += '\n';
    for (double ess_threshold : opts.ess_thresholds) {
      for (double gamma : opts.gammas) {
        for (const auto& algo : opts.algorithms) {
          const auto kind = policy_kind_from_string(algo);
          if (!kind) throw ValidationError("algorithm", "unknown algorithm '" + algo + "'");
          ExperimentConfig cfg = default_config(*kind);
          cfg.gamma = gamma;
          cfg.ess_threshold = ess_threshold;
          cfg.n_samples = opts.base.n_samples;
          cfg.t_iterations = opts.base.t_iterations;
          cfg.r_runs = opts.base.r_runs;
          cfg.master_seed = opts.base.master_seed;
          cfg.landscape = opts.base.landscape;
          cfg.self_normalized = opts.base.self_normalized;
          cfg.convergence_tolerance = opts.base.convergence_tolerance;
          const ExperimentResult result = run_experiment(cfg, opts.base.parallel);
          csv += report_csv_row(result.report);
          csv += '\n';
        }
      }
    }
    write_file_atomic(opts.base.out, csv);
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "amis table: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "amis table: " << e.what() << '\n';
    return 1;
  }
}

int cmd_sweep(const SweepOptions& opts) {
  if (opts.proposals.empty()) {
    std::cerr << "amis sweep: at least one proposal spec is required\n";
    return 2;
  }
  if (opts.grid_points < 1 || !(opts.grid_max >= opts.grid_min)) {
    std::cerr << "amis sweep: empty grid\n";
    return 2;
  }
  try {
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(opts.grid_points));
    if (opts.grid_points == 1) {
      grid.push_back(opts.grid_min);
    } else {
      const double step = (opts.grid_max - opts.grid_min) / (opts.grid_points - 1);
      for (int i = 0; i < opts.grid_points; ++i) grid.push_back(opts.grid_min + i * step);
    }
    const SyntheticLandscape land(opts.landscape.mu_star, opts.landscape.sigma_star,
                                  opts.landscape.amplitude, 0.0);
    for (std::size_t i = 0; i < opts.proposals.size(); ++i) {
      const auto& spec = opts.proposals[i];
      if (spec.means.empty()) {
        std::cerr << "amis sweep: proposal " << i << " has no means\n";
        return 2;
      }
      MixtureProposal q;
      for (double mean : spec.means) {
        q.components.push_back(GaussianComponent{{mean}, {spec.sigma}});
      }
      if (spec.weights.empty()) {
        q.weights.assign(spec.means.size(), 1.0 / static_cast<double>(spec.means.size()));
      } else {
        q.weights = spec.weights;
      }
      RandomStream rng(derive_seed(opts.seed, i));
      const auto points =
          counterfactual_sweep(land, q, opts.counterfactual_sigma, grid, opts.n_samples, rng);
      write_file_atomic(indexed_path(opts.out, i, opts.proposals.size()), sweep_csv(points));
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "amis sweep: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace amis
