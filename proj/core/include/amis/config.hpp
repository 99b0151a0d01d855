#ifndef AMIS_CONFIG_HPP
#define AMIS_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amis/policies.hpp"

namespace amis {

struct LandscapeConfig {
  ParameterPoint mu_star{10.0};
  double sigma_star = 1.0;
  double amplitude = 100.0;
};

/// Full description of one experiment cell. Field names double as the
/// config-file schema; defaults are the per-algorithm simulation
/// hyper-parameters (see default_config).
struct ExperimentConfig {
  std::string algorithm = "GIS";
  double gamma = 0.0;
  double ess_threshold = 0.0;
  std::size_t n_samples = 100;
  int t_iterations = 10;
  std::size_t r_runs = 100;
  std::uint64_t master_seed = 42;

  LandscapeConfig landscape;

  std::vector<ParameterPoint> initial_peaks;
  std::vector<double> initial_mixing_rates;
  std::vector<std::vector<double>> proposal_sigmas;  // per component, per axis
  double counterfactual_sigma = 1.0;
  int grid_size = 11;
  double peak_distance_coefficient = 1.5;
  double delta = 0.2;
  double confidence_coefficient = 0.0;
  bool self_normalized = false;

  /// Absolute convergence tolerance override. When unset, a peak converges
  /// within 0.02 * |mu_star| per axis.
  std::optional<double> convergence_tolerance;

  std::string out = "report.csv";
  std::string trace;  // empty: no trace written
  bool parallel = true;
};

/// The per-algorithm defaults: GIS starts a single unit Gaussian at 5;
/// MVU co-locates sigmas [1, 3] with rates [0.8, 0.2] and counterfactual
/// sigma 2; GU/PCU start peaks [3, 5, 7] with rates [0.2, 0.6, 0.2].
ExperimentConfig default_config(PolicyKind kind);

/// Parses a JSON config file. Missing fields fall back to the defaults of
/// the selected algorithm; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& path);

/// Same, from an already-parsed JSON text (exposed for tests and the CLI).
ExperimentConfig parse_config_text(const std::string& text);

/// Throws ValidationError naming the offending field.
void validate_config(const ExperimentConfig& cfg);

Policy make_policy(const ExperimentConfig& cfg);
PolicyState make_initial_state(const ExperimentConfig& cfg);

}  // namespace amis

#endif
