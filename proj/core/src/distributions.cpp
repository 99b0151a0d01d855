#include "amis/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace amis {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * log(2*pi)
constexpr double kWeightSumTolerance = 1e-9;

void check_dimension(std::size_t expected, std::size_t actual, const char* what) {
  if (expected != actual) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(expected) + " vs " + std::to_string(actual) + ")");
  }
}

}  // namespace

void validate(const GaussianComponent& c) {
  if (c.mean.empty()) {
    throw std::invalid_argument("GaussianComponent: empty mean");
  }
  check_dimension(c.mean.size(), c.sigma.size(), "GaussianComponent");
  for (double m : c.mean) {
    if (!std::isfinite(m)) throw std::invalid_argument("GaussianComponent: non-finite mean");
  }
  for (double s : c.sigma) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("GaussianComponent: sigma entries must be positive and finite");
    }
  }
}

void validate(const MixtureProposal& q) {
  if (q.components.empty()) {
    throw std::invalid_argument("MixtureProposal: needs at least one component");
  }
  if (q.components.size() != q.weights.size()) {
    throw std::invalid_argument("MixtureProposal: component/weight count mismatch");
  }
  const std::size_t dim = q.components.front().mean.size();
  double total = 0.0;
  for (double w : q.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("MixtureProposal: weights must be nonnegative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw std::invalid_argument("MixtureProposal: weights must sum to 1, got " +
                                std::to_string(total));
  }
  for (const auto& c : q.components) {
    validate(c);
    check_dimension(dim, c.mean.size(), "MixtureProposal");
  }
}

double log_gaussian_pdf(const GaussianComponent& c, const ParameterPoint& x) {
  check_dimension(c.mean.size(), x.size(), "log_gaussian_pdf");
  check_dimension(c.mean.size(), c.sigma.size(), "log_gaussian_pdf");
  double log_density = 0.0;
  for (std::size_t axis = 0; axis < x.size(); ++axis) {
    const double z = (x[axis] - c.mean[axis]) / c.sigma[axis];
    log_density += -0.5 * z * z - std::log(c.sigma[axis]) - kHalfLog2Pi;
  }
  return log_density;
}

double gaussian_pdf(const GaussianComponent& c, const ParameterPoint& x) {
  return std::exp(log_gaussian_pdf(c, x));
}

double log_mixture_pdf(const MixtureProposal& q, const ParameterPoint& x) {
  if (q.components.empty() || q.components.size() != q.weights.size()) {
    throw std::invalid_argument("log_mixture_pdf: malformed mixture");
  }
  // log-sum-exp over log(pi_k) + log N_k(x); zero-weight components drop out.
  double max_term = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  terms.reserve(q.components.size());
  for (std::size_t k = 0; k < q.components.size(); ++k) {
    if (q.weights[k] <= 0.0) continue;
    const double term = std::log(q.weights[k]) + log_gaussian_pdf(q.components[k], x);
    terms.push_back(term);
    max_term = std::max(max_term, term);
  }
  if (terms.empty() || max_term == -std::numeric_limits<double>::infinity()) {
    return -std::numeric_limits<double>::infinity();
  }
  double sum = 0.0;
  for (double term : terms) sum += std::exp(term - max_term);
  return max_term + std::log(sum);
}

double mixture_pdf(const MixtureProposal& q, const ParameterPoint& x) {
  return std::exp(log_mixture_pdf(q, x));
}

MixtureSamples sample_mixture(const MixtureProposal& q, std::size_t n, RandomStream& rng) {
  validate(q);
  if (n < 1) {
    throw std::invalid_argument("sample_mixture: n must be >= 1");
  }
  const std::size_t dim = q.components.front().mean.size();
  MixtureSamples out;
  out.points.reserve(n);
  out.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = rng.categorical(q.weights);
    const auto& c = q.components[k];
    ParameterPoint x(dim);
    for (std::size_t axis = 0; axis < dim; ++axis) {
      x[axis] = rng.normal(c.mean[axis], c.sigma[axis]);
    }
    out.points.push_back(std::move(x));
    out.labels.push_back(k);
  }
  return out;
}

std::vector<ParameterPoint> sample(const MixtureProposal& q, std::size_t n, RandomStream& rng) {
  return sample_mixture(q, n, rng).points;
}

double l1_distance(const ParameterPoint& a, const ParameterPoint& b) {
  check_dimension(a.size(), b.size(), "l1_distance");
  double total = 0.0;
  for (std::size_t axis = 0; axis < a.size(); ++axis) {
    total += std::abs(a[axis] - b[axis]);
  }
  return total;
}

}  // namespace amis
