#ifndef AMIS_ESTIMATION_HPP
#define AMIS_ESTIMATION_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "amis/distributions.hpp"

namespace amis {

/// A counterfactual target distribution p: a simple Gaussian spawned from
/// one proposal component's candidate grid.
struct CounterfactualCandidate {
  GaussianComponent target;
  /// Index of the proposal component whose grid spawned this candidate.
  std::size_t source_component = 0;
  /// Signed offset of the target mean from the source mean, in units of the
  /// counterfactual sigma. Zero means "stay at the current mean".
  double grid_offset = 0.0;
};

/// Counterfactual estimate plus the diagnostics used for ranking and
/// filtering.
struct CandidateEvaluation {
  CounterfactualCandidate candidate;
  double estimate = 0.0;        // KPI units
  double ess = 0.0;             // effective count over the whole batch, in [1, n]
  double standard_error = 0.0;  // KPI units
  std::size_t n = 0;            // samples used
};

/// w_i = pdf(p, x_i) / pdf(q, x_i), computed through log densities.
/// Throws WeightUnderflowError naming the offending point if the proposal
/// density vanishes at some x_i or a ratio is not finite.
std::vector<double> importance_weights(const GaussianComponent& p, const MixtureProposal& q,
                                       std::span<const ParameterPoint> xs);

/// The plain importance-sampling estimator: (1/N) sum f_i * w_i.
double is_estimate(std::span<const double> f_values, std::span<const double> weights);

/// Self-normalized variant: sum f_i * w_i / sum w_i. Off by default
/// everywhere; exposed as an opt-in experiment knob.
double self_normalized_estimate(std::span<const double> f_values, std::span<const double> weights);

/// (sum w)^2 / sum w^2. Throws DegenerateWeightsError when all weights are
/// zero.
double ess(std::span<const double> weights);

/// ESS of the weights restricted to the samples drawn from one mixture
/// component (labels as produced by sample_mixture). Returns 0 when the
/// component produced no samples or only zero weights.
double cluster_ess(std::span<const double> weights, std::span<const std::size_t> labels,
                   std::size_t component);

/// Standard error of the plain estimator: sample standard deviation of the
/// per-sample terms f_i * w_i divided by sqrt(N). Requires N >= 2.
double is_stderr(std::span<const double> f_values, std::span<const double> weights);

/// Evaluates every candidate against the same sample set, preserving input
/// order. Underflow/degeneracy errors are rethrown tagged with the
/// candidate index.
std::vector<CandidateEvaluation> evaluate_candidates(std::span<const CounterfactualCandidate> cands,
                                                     const MixtureProposal& q,
                                                     std::span<const ParameterPoint> xs,
                                                     std::span<const double> f_values,
                                                     bool self_normalized = false);

/// Exact E_p[f] for a Gaussian-density landscape f(x) = amplitude *
/// N(x; mu0, sigma0): amplitude * N(p.mean; mu0, sqrt(sigma0^2 + p.sigma^2)).
/// One-dimensional only.
double true_gaussian_expectation(double amplitude, const ParameterPoint& mu0, double sigma0,
                                 const GaussianComponent& p);

}  // namespace amis

#endif
