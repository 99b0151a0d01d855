#include "amis/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace amis {

namespace {

constexpr double kScoreClamp = 1e-6;

std::size_t best_by_score(std::span<const CandidateEvaluation> evals, double cc) {
  std::size_t best = 0;
  double best_score = candidate_score(evals[0], cc);
  for (std::size_t i = 1; i < evals.size(); ++i) {
    const double s = candidate_score(evals[i], cc);
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

void require_nonempty(std::span<const CandidateEvaluation> evals, const char* who) {
  if (evals.empty()) {
    throw std::invalid_argument(std::string(who) + ": no candidates to select from");
  }
}

}  // namespace

const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Gis: return "GIS";
    case PolicyKind::Mvu: return "MVU";
    case PolicyKind::GreedyUpdate: return "GU";
    case PolicyKind::PeakClusterUpdate: return "PCU";
  }
  return "?";
}

std::optional<PolicyKind> policy_kind_from_string(std::string_view name) {
  if (name == "GIS") return PolicyKind::Gis;
  if (name == "MVU") return PolicyKind::Mvu;
  if (name == "GU") return PolicyKind::GreedyUpdate;
  if (name == "PCU") return PolicyKind::PeakClusterUpdate;
  return std::nullopt;
}

void validate_policy_state(const Policy& policy, const PolicyState& state) {
  validate(state.proposal);
  if (!(state.counterfactual_sigma > 0.0)) {
    throw std::invalid_argument("PolicyState: counterfactual_sigma must be positive");
  }
  if (state.grid_size < 1 || state.grid_size % 2 == 0) {
    throw std::invalid_argument("PolicyState: grid_size must be odd and >= 1");
  }
  if (!(state.ess_threshold >= 0.0 && state.ess_threshold < 1.0)) {
    throw std::invalid_argument("PolicyState: ess_threshold must lie in [0, 1)");
  }
  const std::size_t k = state.proposal.components.size();
  switch (policy.kind) {
    case PolicyKind::Gis:
      if (k != 1) throw std::invalid_argument("GIS state: needs exactly one component");
      break;
    case PolicyKind::Mvu: {
      if (k != 2) throw std::invalid_argument("MVU state: needs exactly two components");
      const auto& a = state.proposal.components[0];
      const auto& b = state.proposal.components[1];
      if (a.mean != b.mean) throw std::invalid_argument("MVU state: components must share a mean");
      if (!(b.sigma[0] > a.sigma[0])) {
        throw std::invalid_argument("MVU state: second component must have the larger sigma");
      }
      if (!(state.proposal.weights[1] < state.proposal.weights[0])) {
        throw std::invalid_argument("MVU state: second component must have the smaller weight");
      }
      break;
    }
    case PolicyKind::GreedyUpdate:
      if (!(policy.peak_distance_coefficient > 0.0)) {
        throw std::invalid_argument("GU policy: peak_distance_coefficient must be positive");
      }
      break;
    case PolicyKind::PeakClusterUpdate:
      if (!(policy.delta > 0.0)) {
        throw std::invalid_argument("PCU policy: delta must be positive");
      }
      break;
  }
}

double candidate_score(const CandidateEvaluation& eval, double confidence_coefficient) {
  return eval.estimate + confidence_coefficient * eval.standard_error;
}

std::vector<CounterfactualCandidate> generate_candidates(const Policy& policy,
                                                         const PolicyState& state) {
  const auto& components = state.proposal.components;
  if (components.empty() || components.front().mean.size() != 1) {
    throw std::invalid_argument("generate_candidates: candidate grids are one-dimensional only");
  }
  std::vector<std::size_t> loci;
  if (policy.kind == PolicyKind::GreedyUpdate || policy.kind == PolicyKind::PeakClusterUpdate) {
    loci.resize(components.size());
    std::iota(loci.begin(), loci.end(), std::size_t{0});
  } else {
    loci.push_back(0);  // single (or shared) mean
  }

  const int grid = state.grid_size;
  const double half = static_cast<double>(grid - 1) / 2.0;
  std::vector<CounterfactualCandidate> cands;
  cands.reserve(loci.size() * static_cast<std::size_t>(grid));
  for (std::size_t locus : loci) {
    const double mu = components[locus].mean[0];
    for (int j = 0; j < grid; ++j) {
      const double offset = grid == 1 ? 0.0 : (static_cast<double>(j) - half) / half;
      CounterfactualCandidate cand;
      cand.target.mean = {mu + offset * state.counterfactual_sigma};
      cand.target.sigma = {state.counterfactual_sigma};
      cand.source_component = locus;
      cand.grid_offset = offset;
      cands.push_back(std::move(cand));
    }
  }
  return cands;
}

std::vector<CandidateEvaluation> filter_by_normalized_ess(
    std::span<const CandidateEvaluation> evals, std::span<const double> normalized_ess,
    double threshold) {
  if (evals.size() != normalized_ess.size()) {
    throw std::invalid_argument("filter_by_normalized_ess: length mismatch");
  }
  if (!(threshold >= 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("filter_by_normalized_ess: threshold must lie in [0, 1)");
  }
  std::vector<CandidateEvaluation> kept;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    if (normalized_ess[i] >= threshold) kept.push_back(evals[i]);
  }
  if (kept.empty() && !evals.empty()) {
    // Stay-put fallback: the evaluation nearest its source mean survives.
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < evals.size(); ++i) {
      if (std::abs(evals[i].candidate.grid_offset) <
          std::abs(evals[nearest].candidate.grid_offset)) {
        nearest = i;
      }
    }
    kept.push_back(evals[nearest]);
  }
  return kept;
}

std::vector<CandidateEvaluation> filter_by_ess(std::span<const CandidateEvaluation> evals,
                                               double threshold, std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("filter_by_ess: n must be positive");
  }
  std::vector<double> ratios;
  ratios.reserve(evals.size());
  for (const auto& e : evals) ratios.push_back(e.ess / static_cast<double>(n));
  return filter_by_normalized_ess(evals, ratios, threshold);
}

PolicyState gis_update(const PolicyState& state, std::span<const CandidateEvaluation> evals,
                       double confidence_coefficient) {
  require_nonempty(evals, "gis_update");
  if (state.proposal.components.size() != 1) {
    throw std::invalid_argument("gis_update: needs a single-component proposal");
  }
  PolicyState next = state;
  next.distance_fallback = false;
  const auto& best = evals[best_by_score(evals, confidence_coefficient)];
  next.proposal.components[0].mean = best.candidate.target.mean;
  return next;
}

PolicyState mvu_update(const PolicyState& state, std::span<const CandidateEvaluation> evals,
                       double confidence_coefficient) {
  require_nonempty(evals, "mvu_update");
  if (state.proposal.components.size() != 2) {
    throw std::invalid_argument("mvu_update: needs a two-component proposal");
  }
  PolicyState next = state;
  next.distance_fallback = false;
  const auto& best = evals[best_by_score(evals, confidence_coefficient)];
  next.proposal.components[0].mean = best.candidate.target.mean;
  next.proposal.components[1].mean = best.candidate.target.mean;
  return next;
}

PolicyState greedy_update(const PolicyState& state, std::span<const CandidateEvaluation> evals,
                          std::size_t k, double d, double confidence_coefficient) {
  require_nonempty(evals, "greedy_update");
  if (k < 1) {
    throw std::invalid_argument("greedy_update: k must be >= 1");
  }
  if (d < 0.0) {
    throw std::invalid_argument("greedy_update: d must be nonnegative");
  }

  std::vector<std::size_t> order(evals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidate_score(evals[a], confidence_coefficient) >
           candidate_score(evals[b], confidence_coefficient);
  });

  std::vector<std::size_t> selected;
  std::vector<char> taken(evals.size(), 0);
  for (std::size_t idx : order) {
    if (selected.size() == k) break;
    const auto& mean = evals[idx].candidate.target.mean;
    const bool separated = std::all_of(selected.begin(), selected.end(), [&](std::size_t s) {
      return l1_distance(mean, evals[s].candidate.target.mean) > d;
    });
    if (separated) {
      selected.push_back(idx);
      taken[idx] = 1;
    }
  }
  bool fallback = false;
  if (selected.size() < k) {
    // Separation constraint unsatisfiable: take the best remaining
    // candidates regardless of distance so the update always terminates.
    fallback = true;
    for (std::size_t idx : order) {
      if (selected.size() == k) break;
      if (!taken[idx]) {
        selected.push_back(idx);
        taken[idx] = 1;
      }
    }
  }

  PolicyState next = state;
  next.distance_fallback = fallback;
  const auto& old_components = state.proposal.components;
  next.proposal.components.clear();
  next.proposal.weights.clear();
  double total = 0.0;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    GaussianComponent comp;
    comp.mean = evals[selected[i]].candidate.target.mean;
    comp.sigma = old_components[std::min(i, old_components.size() - 1)].sigma;
    next.proposal.components.push_back(std::move(comp));
    const double clamped =
        std::max(candidate_score(evals[selected[i]], confidence_coefficient), kScoreClamp);
    next.proposal.weights.push_back(clamped);
    total += clamped;
  }
  for (double& w : next.proposal.weights) w /= total;
  return next;
}

PolicyState pcu_update(const PolicyState& state, std::span<const CandidateEvaluation> evals,
                       double delta, double confidence_coefficient) {
  require_nonempty(evals, "pcu_update");
  if (!(delta > 0.0)) {
    throw std::invalid_argument("pcu_update: delta must be positive");
  }
  const std::size_t k = state.proposal.components.size();
  for (const auto& e : evals) {
    if (e.candidate.source_component >= k) {
      throw std::invalid_argument("pcu_update: candidate source outside the proposal");
    }
  }

  PolicyState next = state;
  next.distance_fallback = false;
  std::vector<double> best_scores(k, -std::numeric_limits<double>::infinity());
  std::vector<const CandidateEvaluation*> best(k, nullptr);
  for (const auto& e : evals) {
    const std::size_t cluster = e.candidate.source_component;
    const double s = candidate_score(e, confidence_coefficient);
    if (best[cluster] == nullptr || s > best_scores[cluster]) {
      best[cluster] = &e;
      best_scores[cluster] = s;
    }
  }
  for (std::size_t cluster = 0; cluster < k; ++cluster) {
    if (best[cluster] != nullptr) {
      next.proposal.components[cluster].mean = best[cluster]->candidate.target.mean;
    }
    // Clusters with no surviving evaluation keep their peak and compete
    // with score -infinity.
  }
  const std::size_t winner = static_cast<std::size_t>(
      std::max_element(best_scores.begin(), best_scores.end()) - best_scores.begin());
  next.proposal.weights[winner] += delta;
  double total = 0.0;
  for (double w : next.proposal.weights) total += w;
  for (double& w : next.proposal.weights) w /= total;
  return next;
}

PolicyState apply_update(const Policy& policy, const PolicyState& state,
                         std::span<const CandidateEvaluation> evals) {
  switch (policy.kind) {
    case PolicyKind::Gis:
      return gis_update(state, evals, policy.confidence_coefficient);
    case PolicyKind::Mvu:
      return mvu_update(state, evals, policy.confidence_coefficient);
    case PolicyKind::GreedyUpdate:
      return greedy_update(state, evals, state.proposal.components.size(),
                           policy.peak_distance_coefficient * state.counterfactual_sigma,
                           policy.confidence_coefficient);
    case PolicyKind::PeakClusterUpdate:
      return pcu_update(state, evals, policy.delta, policy.confidence_coefficient);
  }
  throw std::logic_error("apply_update: unknown policy kind");
}

std::vector<ParameterPoint> init_orthogonal_peaks(const ParameterPoint& center, double radius,
                                                  std::size_t max_peaks) {
  if (center.empty()) {
    throw std::invalid_argument("init_orthogonal_peaks: empty center");
  }
  if (!(radius > 0.0)) {
    throw std::invalid_argument("init_orthogonal_peaks: radius must be positive");
  }
  if (max_peaks < 1) {
    throw std::invalid_argument("init_orthogonal_peaks: max_peaks must be >= 1");
  }
  std::vector<ParameterPoint> peaks{center};
  const std::size_t dim = center.size();
  const std::uint64_t corner_count =
      dim >= 63 ? std::numeric_limits<std::uint64_t>::max() : (std::uint64_t{1} << dim);
  for (std::uint64_t corner = 0; corner < corner_count && peaks.size() < max_peaks; ++corner) {
    ParameterPoint p(dim);
    for (std::size_t axis = 0; axis < dim; ++axis) {
      // Axis 0 is the most significant bit: lexicographic sign order.
      const bool plus = (corner >> (dim - 1 - axis)) & 1;
      p[axis] = center[axis] + (plus ? radius : -radius);
    }
    peaks.push_back(std::move(p));
  }
  return peaks;
}

ParameterPoint major_peak(const PolicyState& state) {
  const auto& weights = state.proposal.weights;
  if (weights.empty()) {
    throw std::invalid_argument("major_peak: empty proposal");
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < weights.size(); ++k) {
    if (weights[k] > weights[best]) best = k;
  }
  return state.proposal.components[best].mean;
}

}  // namespace amis
