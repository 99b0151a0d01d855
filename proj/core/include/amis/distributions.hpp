#ifndef AMIS_DISTRIBUTIONS_HPP
#define AMIS_DISTRIBUTIONS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "amis/random.hpp"

namespace amis {

/// A point in the tunable-parameter space (d >= 1 finite coordinates).
using ParameterPoint = std::vector<double>;

/// Single Gaussian with a diagonal (per-axis) scale vector.
struct GaussianComponent {
  ParameterPoint mean;
  std::vector<double> sigma;
};

/// Gaussian mixture proposal: K components plus a mixing-rate simplex.
///
/// Invariants (checked by validate): K >= 1, weights nonnegative and summing
/// to one within 1e-9, every sigma entry positive and finite, all components
/// sharing one dimension. K = 1 degenerates to a plain Gaussian proposal.
struct MixtureProposal {
  std::vector<GaussianComponent> components;
  std::vector<double> weights;
};

void validate(const GaussianComponent& c);
void validate(const MixtureProposal& q);

/// Log density of the diagonal Gaussian at x (product over axes).
double log_gaussian_pdf(const GaussianComponent& c, const ParameterPoint& x);

double gaussian_pdf(const GaussianComponent& c, const ParameterPoint& x);

/// Log mixture density via log-sum-exp over the components, so that ratios
/// of far-tail densities stay finite downstream.
double log_mixture_pdf(const MixtureProposal& q, const ParameterPoint& x);

double mixture_pdf(const MixtureProposal& q, const ParameterPoint& x);

/// A sampled batch with the categorical component attribution kept
/// alongside each point.
struct MixtureSamples {
  std::vector<ParameterPoint> points;
  std::vector<std::size_t> labels;
};

/// Draws n points: component k with probability weights[k], then each axis
/// from Normal(mean[axis], sigma[axis]). Deterministic given the stream.
MixtureSamples sample_mixture(const MixtureProposal& q, std::size_t n, RandomStream& rng);

/// Points-only convenience wrapper around sample_mixture.
std::vector<ParameterPoint> sample(const MixtureProposal& q, std::size_t n, RandomStream& rng);

/// Sum of per-axis absolute differences.
double l1_distance(const ParameterPoint& a, const ParameterPoint& b);

}  // namespace amis

#endif
