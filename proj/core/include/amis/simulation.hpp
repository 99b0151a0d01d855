#ifndef AMIS_SIMULATION_HPP
#define AMIS_SIMULATION_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "amis/config.hpp"
#include "amis/policies.hpp"

namespace amis {

/// Source of KPI observations. Implementations must be safe for concurrent
/// use across runs; every run passes its own random stream.
class KpiOracle {
 public:
  virtual ~KpiOracle() = default;

  /// One (possibly noisy) KPI observation at x.
  virtual double observe(const ParameterPoint& x, RandomStream& rng) const = 0;

  /// Noiseless KPI when the landscape is known; synthetic oracles only.
  virtual std::optional<double> true_value(const ParameterPoint& /*x*/) const { return std::nullopt; }

  /// Location of the global optimum when known. Enables regret and
  /// convergence accounting; a live experiment backend returns nullopt.
  virtual std::optional<ParameterPoint> ground_truth() const { return std::nullopt; }
};

/// Gaussian KPI bump scaled by `amplitude`, plus N(0, gamma * sigma_star)
/// observation noise.
class SyntheticLandscape final : public KpiOracle {
 public:
  SyntheticLandscape(ParameterPoint mu_star, double sigma_star, double amplitude, double gamma);

  double observe(const ParameterPoint& x, RandomStream& rng) const override;
  std::optional<double> true_value(const ParameterPoint& x) const override;
  std::optional<ParameterPoint> ground_truth() const override { return mu_star_; }

  const ParameterPoint& mu_star() const { return mu_star_; }
  double sigma_star() const { return sigma_star_; }
  double amplitude() const { return amplitude_; }
  double gamma() const { return gamma_; }

 private:
  ParameterPoint mu_star_;
  double sigma_star_;
  double amplitude_;
  double gamma_;
};

SyntheticLandscape make_landscape(const ExperimentConfig& cfg);

/// Fraction of each ground-truth coordinate within which a peak counts as
/// converged (0.02 of the ground-truth mean).
inline constexpr double kConvergenceRelTolerance = 0.02;

struct IterationRecord {
  int iteration = 0;  // 1-based
  MixtureProposal proposal_before;
  std::size_t samples = 0;
  std::vector<ParameterPoint> selected_peaks;
  std::vector<double> mixing_rates;
  double best_score = 0.0;
  ParameterPoint major_peak;
  /// true_value(ground truth) - true_value(major peak); NaN when the oracle
  /// has no ground truth.
  double regret_term = std::numeric_limits<double>::quiet_NaN();
};

struct RunTrace {
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  std::vector<IterationRecord> records;
  ParameterPoint final_major_peak;
  bool converged = false;
  std::optional<int> first_convergence_iteration;
};

/// One tuning run: per iteration, sample n points from the proposal,
/// observe the KPI, generate and evaluate candidates, filter by normalized
/// ESS, score, and apply the policy update. Noise observations draw from a
/// sub-stream separate from proposal sampling, so changing gamma leaves the
/// sampled x sequence untouched.
RunTrace run_tuning(const Policy& policy, const PolicyState& initial, const KpiOracle& oracle,
                    std::size_t n_samples, int t_iterations, RandomStream& rng,
                    bool self_normalized = false,
                    std::optional<double> convergence_tolerance = std::nullopt);

/// Identity columns echoed into every report row.
struct ReportEcho {
  std::string algorithm;
  double gamma = 0.0;
  double ess_threshold = 0.0;
  std::size_t n_samples = 0;
  int t_iterations = 0;
  std::size_t r_runs = 0;
  std::uint64_t master_seed = 0;
};

struct ExperimentReport {
  double mean_regret = 0.0;
  double mae = 0.0;
  double mse = 0.0;
  double var = 0.0;
  std::optional<double> fci;  // absent when no run converged
  double prc = 0.0;
  std::size_t runs = 0;
  ReportEcho config;
};

/// Aggregates traces of equal length: mean regret over all (run, iteration)
/// terms; MAE/MSE/VAR of the signed final-peak errors; FCI averaged over
/// converged runs only; PRC the converged fraction.
ExperimentReport aggregate(std::span<const RunTrace> traces, const SyntheticLandscape& land);

struct ExperimentResult {
  ExperimentReport report;
  std::vector<RunTrace> traces;
};

/// R independent runs with streams derived from (master_seed, run_index),
/// then aggregation. Parallel and sequential execution produce identical
/// results.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool parallel);

struct SweepPoint {
  double grid_mean = 0.0;
  double estimate = 0.0;
  double true_value = 0.0;
};

/// For each grid mean, the importance-sampling estimate of E_p[f] from n
/// noiseless observations sampled under q, paired with the closed-form
/// expectation. One-dimensional only.
std::vector<SweepPoint> counterfactual_sweep(const SyntheticLandscape& land,
                                             const MixtureProposal& q, double sigma_p,
                                             std::span<const double> grid_means, std::size_t n,
                                             RandomStream& rng);

}  // namespace amis

#endif
