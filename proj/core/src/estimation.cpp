#include "amis/estimation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "amis/errors.hpp"

namespace amis {

namespace {

std::string describe_point(const ParameterPoint& x) {
  std::ostringstream oss;
  oss << "[";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) oss << ", ";
    oss << x[i];
  }
  oss << "]";
  return oss.str();
}

double weight_from_logs(double log_p, double log_q, const ParameterPoint& x) {
  if (!std::isfinite(log_q)) {
    throw WeightUnderflowError("proposal density vanished at sample " + describe_point(x));
  }
  const double w = std::exp(log_p - log_q);
  if (!std::isfinite(w)) {
    throw WeightUnderflowError("importance weight not finite at sample " + describe_point(x));
  }
  return w;
}

}  // namespace

std::vector<double> importance_weights(const GaussianComponent& p, const MixtureProposal& q,
                                       std::span<const ParameterPoint> xs) {
  if (xs.empty()) {
    throw std::invalid_argument("importance_weights: empty sample set");
  }
  std::vector<double> weights;
  weights.reserve(xs.size());
  for (const auto& x : xs) {
    weights.push_back(weight_from_logs(log_gaussian_pdf(p, x), log_mixture_pdf(q, x), x));
  }
  return weights;
}

double is_estimate(std::span<const double> f_values, std::span<const double> weights) {
  if (f_values.size() != weights.size()) {
    throw std::invalid_argument("is_estimate: length mismatch");
  }
  if (f_values.empty()) {
    throw std::invalid_argument("is_estimate: empty input");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < f_values.size(); ++i) {
    sum += f_values[i] * weights[i];
  }
  return sum / static_cast<double>(f_values.size());
}

double self_normalized_estimate(std::span<const double> f_values,
                                std::span<const double> weights) {
  if (f_values.size() != weights.size()) {
    throw std::invalid_argument("self_normalized_estimate: length mismatch");
  }
  if (f_values.empty()) {
    throw std::invalid_argument("self_normalized_estimate: empty input");
  }
  double weighted_sum = 0.0;
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < f_values.size(); ++i) {
    weighted_sum += f_values[i] * weights[i];
    weight_sum += weights[i];
  }
  if (weight_sum == 0.0) {
    throw DegenerateWeightsError("self_normalized_estimate: all weights are zero");
  }
  return weighted_sum / weight_sum;
}

double ess(std::span<const double> weights) {
  if (weights.empty()) {
    throw std::invalid_argument("ess: empty weight vector");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double w : weights) {
    sum += w;
    sum_sq += w * w;
  }
  if (sum_sq == 0.0) {
    throw DegenerateWeightsError("ess: all weights are zero");
  }
  return sum * sum / sum_sq;
}

double cluster_ess(std::span<const double> weights, std::span<const std::size_t> labels,
                   std::size_t component) {
  if (weights.size() != labels.size()) {
    throw std::invalid_argument("cluster_ess: length mismatch");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (labels[i] != component) continue;
    sum += weights[i];
    sum_sq += weights[i] * weights[i];
  }
  if (sum_sq == 0.0) return 0.0;
  return sum * sum / sum_sq;
}

double is_stderr(std::span<const double> f_values, std::span<const double> weights) {
  if (f_values.size() != weights.size()) {
    throw std::invalid_argument("is_stderr: length mismatch");
  }
  const std::size_t n = f_values.size();
  if (n < 2) {
    throw std::invalid_argument("is_stderr: need at least 2 samples");
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += f_values[i] * weights[i];
  mean /= static_cast<double>(n);
  double ssd = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = f_values[i] * weights[i] - mean;
    ssd += d * d;
  }
  const double sample_var = ssd / static_cast<double>(n - 1);
  return std::sqrt(sample_var / static_cast<double>(n));
}

std::vector<CandidateEvaluation> evaluate_candidates(std::span<const CounterfactualCandidate> cands,
                                                     const MixtureProposal& q,
                                                     std::span<const ParameterPoint> xs,
                                                     std::span<const double> f_values,
                                                     bool self_normalized) {
  if (cands.empty()) {
    throw std::invalid_argument("evaluate_candidates: empty candidate list");
  }
  if (xs.size() != f_values.size()) {
    throw std::invalid_argument("evaluate_candidates: sample/value length mismatch");
  }
  if (xs.empty()) {
    throw std::invalid_argument("evaluate_candidates: empty sample set");
  }

  // The proposal log density is shared by every candidate.
  std::vector<double> log_q(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    log_q[i] = log_mixture_pdf(q, xs[i]);
  }

  std::vector<CandidateEvaluation> evals;
  evals.reserve(cands.size());
  std::vector<double> weights(xs.size());
  for (std::size_t c = 0; c < cands.size(); ++c) {
    try {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        weights[i] = weight_from_logs(log_gaussian_pdf(cands[c].target, xs[i]), log_q[i], xs[i]);
      }
      CandidateEvaluation eval;
      eval.candidate = cands[c];
      eval.estimate = self_normalized ? self_normalized_estimate(f_values, weights)
                                      : is_estimate(f_values, weights);
      eval.ess = ess(weights);
      eval.standard_error = is_stderr(f_values, weights);
      eval.n = xs.size();
      evals.push_back(std::move(eval));
    } catch (const WeightUnderflowError& e) {
      throw WeightUnderflowError("candidate " + std::to_string(c) + ": " + e.what());
    } catch (const DegenerateWeightsError& e) {
      throw DegenerateWeightsError("candidate " + std::to_string(c) + ": " + e.what());
    }
  }
  return evals;
}

double true_gaussian_expectation(double amplitude, const ParameterPoint& mu0, double sigma0,
                                 const GaussianComponent& p) {
  if (mu0.size() != 1 || p.mean.size() != 1 || p.sigma.size() != 1) {
    throw std::invalid_argument("true_gaussian_expectation: one-dimensional only");
  }
  if (!(sigma0 > 0.0)) {
    throw std::invalid_argument("true_gaussian_expectation: sigma0 must be positive");
  }
  const double combined = std::sqrt(sigma0 * sigma0 + p.sigma[0] * p.sigma[0]);
  const GaussianComponent convolved{{mu0[0]}, {combined}};
  return amplitude * gaussian_pdf(convolved, {p.mean[0]});
}

}  // namespace amis
