#ifndef AMIS_POLICIES_HPP
#define AMIS_POLICIES_HPP

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "amis/estimation.hpp"

namespace amis {

enum class PolicyKind {
  Gis,               // single-Gaussian importance sampling baseline
  Mvu,               // multi-variance update: narrow exploit + fat-tail explore
  GreedyUpdate,      // score-based greedy peak selection (GU)
  PeakClusterUpdate  // rank-based peak cluster update (PCU)
};

const char* to_string(PolicyKind kind);
std::optional<PolicyKind> policy_kind_from_string(std::string_view name);

/// Policy selector plus the knobs each update rule reads.
struct Policy {
  PolicyKind kind = PolicyKind::Gis;
  /// GU: minimum peak separation, in units of the counterfactual sigma.
  double peak_distance_coefficient = 1.5;
  /// PCU: mixing-rate boost for the winning cluster.
  double delta = 0.2;
  /// Candidate score = estimate + confidence_coefficient * standard error.
  double confidence_coefficient = 0.0;
};

/// Mutable per-run state: the proposal plus candidate-generation knobs.
struct PolicyState {
  MixtureProposal proposal;
  double counterfactual_sigma = 1.0;  // sigma of every candidate target
  int grid_size = 11;                 // odd, so the current mean is always a candidate
  double ess_threshold = 0.0;         // normalized ESS floor in [0, 1)
  /// Set by greedy updates that had to ignore the separation constraint to
  /// terminate.
  bool distance_fallback = false;
};

/// Checks the state invariants, including the policy-specific shape
/// (GIS: K=1; MVU: K=2, shared mean, sigma2 > sigma1, pi2 < pi1).
void validate_policy_state(const Policy& policy, const PolicyState& state);

double candidate_score(const CandidateEvaluation& eval, double confidence_coefficient);

/// Emits grid_size candidates per exploration locus, means evenly spaced on
/// [mu - sigma_p, mu + sigma_p]. Loci: the single mean for GIS, the shared
/// mean for MVU, every component mean for GU/PCU. One-dimensional only.
std::vector<CounterfactualCandidate> generate_candidates(const Policy& policy,
                                                         const PolicyState& state);

/// Keeps evaluations with ess/n >= threshold. If nothing survives, returns
/// the single evaluation nearest (by |grid_offset|) to its source mean, so
/// an iteration can always "stay put".
std::vector<CandidateEvaluation> filter_by_ess(std::span<const CandidateEvaluation> evals,
                                               double threshold, std::size_t n);

/// Same filter driven by explicit normalized-ESS ratios (one per
/// evaluation). filter_by_ess delegates here with ess/n.
std::vector<CandidateEvaluation> filter_by_normalized_ess(
    std::span<const CandidateEvaluation> evals, std::span<const double> normalized_ess,
    double threshold);

/// Moves the single mean to the best-scoring candidate; sigma and weights
/// unchanged.
PolicyState gis_update(const PolicyState& state, std::span<const CandidateEvaluation> evals,
                       double confidence_coefficient = 0.0);

/// Moves both co-located means to the best-scoring candidate; sigmas and
/// mixing rates unchanged.
PolicyState mvu_update(const PolicyState& state, std::span<const CandidateEvaluation> evals,
                       double confidence_coefficient = 0.0);

/// Score-based greedy update: picks the best-scoring candidate, then
/// repeatedly the best remaining one at L1 distance > d from every selected
/// peak, until k peaks are chosen. Mixing rates are proportional to the
/// selected scores clamped at 1e-6. If the distance constraint becomes
/// unsatisfiable the best remaining candidates are taken regardless and the
/// state's distance_fallback flag is set.
PolicyState greedy_update(const PolicyState& state, std::span<const CandidateEvaluation> evals,
                          std::size_t k, double d, double confidence_coefficient = 0.0);

/// Rank-based peak cluster update: each cluster's peak moves to its own
/// best-scoring candidate; the cluster with the highest best score gets its
/// mixing rate boosted by delta, then the rates are renormalized. Clusters
/// with no surviving evaluation keep their peak and compete with score
/// -infinity.
PolicyState pcu_update(const PolicyState& state, std::span<const CandidateEvaluation> evals,
                       double delta, double confidence_coefficient = 0.0);

/// Dispatches to the update rule selected by the policy.
PolicyState apply_update(const Policy& policy, const PolicyState& state,
                         std::span<const CandidateEvaluation> evals);

/// Center first, then center +/- radius on the hypercube corners in
/// lexicographic sign order, truncated to max_peaks points.
std::vector<ParameterPoint> init_orthogonal_peaks(const ParameterPoint& center, double radius,
                                                  std::size_t max_peaks);

/// Mean of the component with the largest mixing rate (ties: lowest index).
ParameterPoint major_peak(const PolicyState& state);

}  // namespace amis

#endif
