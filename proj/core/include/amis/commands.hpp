#ifndef AMIS_COMMANDS_HPP
#define AMIS_COMMANDS_HPP

#include <string>
#include <vector>

#include "amis/config.hpp"
#include "amis/simulation.hpp"

namespace amis {

/// Runs one experiment cell and writes the CSV report (plus the optional
/// per-iteration trace). Returns 0 on success, 1 on failure, 2 on usage
/// errors.
int cmd_run(const ExperimentConfig& cfg);

struct TableOptions {
  ExperimentConfig base;  // landscape, counts, seed, paths shared by all cells
  std::vector<std::string> algorithms{"GIS", "MVU", "GU", "PCU"};
  std::vector<double> gammas{0.0, 10.0, 100.0};
  std::vector<double> ess_thresholds{0.0, 0.4};
};

/// Runs the full (ess, gamma, algorithm) matrix and writes one CSV row per
/// cell, ordered threshold-major then gamma then algorithm.
int cmd_table(const TableOptions& opts);

struct SweepProposalSpec {
  std::vector<double> means;
  double sigma = 1.0;
  std::vector<double> weights;  // empty: uniform
};

struct SweepOptions {
  LandscapeConfig landscape;
  std::vector<SweepProposalSpec> proposals;
  double counterfactual_sigma = 1.0;
  double grid_min = 0.0;
  double grid_max = 0.0;
  int grid_points = 0;
  std::size_t n_samples = 10000;
  std::uint64_t seed = 42;
  std::string out = "sweep.csv";
};

/// Emits the counterfactual-sweep CSV for each proposal spec. With several
/// specs the output paths get an index suffix before the extension.
int cmd_sweep(const SweepOptions& opts);

}  // namespace amis

#endif
