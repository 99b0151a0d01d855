#include "amis/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "amis/errors.hpp"

namespace amis {

namespace {

constexpr double kToleranceSlack = 1e-9;  // float dust on grid-lattice peaks

bool within_tolerance(const ParameterPoint& peak, const ParameterPoint& target,
                      const std::optional<double>& absolute_tol) {
  for (std::size_t axis = 0; axis < peak.size(); ++axis) {
    const double tol =
        absolute_tol ? *absolute_tol : kConvergenceRelTolerance * std::abs(target[axis]);
    if (std::abs(peak[axis] - target[axis]) > tol + kToleranceSlack) return false;
  }
  return true;
}

bool is_multi_locus(PolicyKind kind) {
  return kind == PolicyKind::GreedyUpdate || kind == PolicyKind::PeakClusterUpdate;
}

}  // namespace

SyntheticLandscape::SyntheticLandscape(ParameterPoint mu_star, double sigma_star, double amplitude,
                                       double gamma)
    : mu_star_(std::move(mu_star)), sigma_star_(sigma_star), amplitude_(amplitude), gamma_(gamma) {
  if (mu_star_.empty()) {
    throw std::invalid_argument("SyntheticLandscape: empty ground-truth mean");
  }
  if (!(sigma_star_ > 0.0)) {
    throw std::invalid_argument("SyntheticLandscape: sigma_star must be positive");
  }
  if (!(gamma_ >= 0.0)) {
    throw std::invalid_argument("SyntheticLandscape: gamma must be nonnegative");
  }
}

double SyntheticLandscape::observe(const ParameterPoint& x, RandomStream& rng) const {
  const double noiseless = *true_value(x);
  // Draw even at gamma = 0 so all noise streams advance identically.
  return noiseless + rng.normal(0.0, 1.0) * gamma_ * sigma_star_;
}

std::optional<double> SyntheticLandscape::true_value(const ParameterPoint& x) const {
  GaussianComponent bump;
  bump.mean = mu_star_;
  bump.sigma.assign(mu_star_.size(), sigma_star_);
  return amplitude_ * gaussian_pdf(bump, x);
}

SyntheticLandscape make_landscape(const ExperimentConfig& cfg) {
  return SyntheticLandscape(cfg.landscape.mu_star, cfg.landscape.sigma_star,
                            cfg.landscape.amplitude, cfg.gamma);
}

RunTrace run_tuning(const Policy& policy, const PolicyState& initial, const KpiOracle& oracle,
                    std::size_t n_samples, int t_iterations, RandomStream& rng,
                    bool self_normalized, std::optional<double> convergence_tolerance) {
  if (n_samples < 2) {
    throw std::invalid_argument("run_tuning: n_samples must be >= 2");
  }
  if (t_iterations < 1) {
    throw std::invalid_argument("run_tuning: t_iterations must be >= 1");
  }
  validate_policy_state(policy, initial);

  RandomStream sample_rng = rng.spawn();
  RandomStream noise_rng = rng.spawn();
  const std::optional<ParameterPoint> truth = oracle.ground_truth();
  const std::optional<double> optimum_value =
      truth ? oracle.true_value(*truth) : std::nullopt;

  RunTrace trace;
  trace.records.reserve(static_cast<std::size_t>(t_iterations));
  PolicyState state = initial;
  for (int it = 1; it <= t_iterations; ++it) {
    try {
      const MixtureSamples batch = sample_mixture(state.proposal, n_samples, sample_rng);
      std::vector<double> f_values;
      f_values.reserve(n_samples);
      for (const auto& x : batch.points) {
        f_values.push_back(oracle.observe(x, noise_rng));
      }

      const auto cands = generate_candidates(policy, state);
      const auto evals =
          evaluate_candidates(cands, state.proposal, batch.points, f_values, self_normalized);

      std::vector<CandidateEvaluation> kept;
      if (state.ess_threshold > 0.0 && is_multi_locus(policy.kind)) {
        // Multi-modal policies judge weight degeneracy within each peak
        // cluster: global normalization would cap a minor cluster's ratio
        // near its mixing rate and silently freeze it.
        std::vector<double> ratios;
        ratios.reserve(evals.size());
        for (const auto& e : evals) {
          const auto weights = importance_weights(e.candidate.target, state.proposal, batch.points);
          const std::size_t cluster = e.candidate.source_component;
          const auto count = static_cast<double>(
              std::count(batch.labels.begin(), batch.labels.end(), cluster));
          ratios.push_back(count > 0.0
                               ? cluster_ess(weights, batch.labels, cluster) / count
                               : 0.0);
        }
        kept = filter_by_normalized_ess(evals, ratios, state.ess_threshold);
      } else {
        kept = filter_by_ess(evals, state.ess_threshold, n_samples);
      }

      double best_score = -std::numeric_limits<double>::infinity();
      for (const auto& e : kept) {
        best_score = std::max(best_score, candidate_score(e, policy.confidence_coefficient));
      }

      PolicyState next = apply_update(policy, state, kept);

      IterationRecord record;
      record.iteration = it;
      record.proposal_before = state.proposal;
      record.samples = n_samples;
      for (const auto& c : next.proposal.components) record.selected_peaks.push_back(c.mean);
      record.mixing_rates = next.proposal.weights;
      record.best_score = best_score;
      record.major_peak = major_peak(next);
      if (truth && optimum_value) {
        record.regret_term = *optimum_value - *oracle.true_value(record.major_peak);
      }
      if (!trace.converged && truth &&
          within_tolerance(record.major_peak, *truth, convergence_tolerance)) {
        trace.converged = true;
        trace.first_convergence_iteration = it;
      }
      trace.records.push_back(std::move(record));
      state = std::move(next);
    } catch (const std::exception& e) {
      throw std::runtime_error("iteration " + std::to_string(it) + ": " + e.what());
    }
  }
  trace.final_major_peak = major_peak(state);
  return trace;
}

ExperimentReport aggregate(std::span<const RunTrace> traces, const SyntheticLandscape& land) {
  if (traces.empty()) {
    throw std::invalid_argument("aggregate: no traces");
  }
  const std::size_t t = traces.front().records.size();
  for (const auto& trace : traces) {
    if (trace.records.size() != t) {
      throw std::invalid_argument("aggregate: traces differ in iteration count");
    }
  }
  if (land.mu_star().size() != 1) {
    throw std::invalid_argument("aggregate: error metrics are one-dimensional only");
  }

  ExperimentReport report;
  report.runs = traces.size();
  double regret_sum = 0.0;
  double abs_err_sum = 0.0;
  double sq_err_sum = 0.0;
  double err_sum = 0.0;
  double fci_sum = 0.0;
  std::size_t converged = 0;
  for (const auto& trace : traces) {
    for (const auto& record : trace.records) regret_sum += record.regret_term;
    const double e = trace.final_major_peak[0] - land.mu_star()[0];
    abs_err_sum += std::abs(e);
    sq_err_sum += e * e;
    err_sum += e;
    if (trace.converged) {
      ++converged;
      fci_sum += static_cast<double>(*trace.first_convergence_iteration);
    }
  }
  const auto r = static_cast<double>(traces.size());
  report.mean_regret = regret_sum / (r * static_cast<double>(t));
  report.mae = abs_err_sum / r;
  report.mse = sq_err_sum / r;
  const double bias = err_sum / r;
  report.var = report.mse - bias * bias;
  report.prc = static_cast<double>(converged) / r;
  if (converged > 0) {
    report.fci = fci_sum / static_cast<double>(converged);
  }
  return report;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool parallel) {
  validate_config(cfg);
  const Policy policy = make_policy(cfg);
  const PolicyState initial = make_initial_state(cfg);
  const SyntheticLandscape land = make_landscape(cfg);

  std::vector<RunTrace> traces(cfg.r_runs);
  const auto run_one = [&](std::size_t run) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, run);
    RandomStream stream(seed);
    try {
      RunTrace trace = run_tuning(policy, initial, land, cfg.n_samples, cfg.t_iterations, stream,
                                  cfg.self_normalized, cfg.convergence_tolerance);
      trace.run_index = run;
      trace.seed = seed;
      traces[run] = std::move(trace);
    } catch (const std::exception& e) {
      throw std::runtime_error("run " + std::to_string(run) + ": " + e.what());
    }
  };

  if (!parallel || cfg.r_runs < 2) {
    for (std::size_t run = 0; run < cfg.r_runs; ++run) run_one(run);
  } else {
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), cfg.r_runs);
    std::mutex failure_mutex;
    std::size_t failed_run = cfg.r_runs;
    std::exception_ptr failure;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t run = w; run < cfg.r_runs; run += workers) {
          try {
            run_one(run);
          } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (run < failed_run) {
              failed_run = run;
              failure = std::current_exception();
            }
            return;
          }
        }
      });
    }
    for (auto& worker : pool) worker.join();
    if (failure) std::rethrow_exception(failure);
  }

  ExperimentResult result;
  result.report = aggregate(traces, land);
  result.report.config = ReportEcho{cfg.algorithm, cfg.gamma,  cfg.ess_threshold, cfg.n_samples,
                                    cfg.t_iterations, cfg.r_runs, cfg.master_seed};
  result.traces = std::move(traces);
  return result;
}

std::vector<SweepPoint> counterfactual_sweep(const SyntheticLandscape& land,
                                             const MixtureProposal& q, double sigma_p,
                                             std::span<const double> grid_means, std::size_t n,
                                             RandomStream& rng) {
  validate(q);
  if (q.components.front().mean.size() != 1 || land.mu_star().size() != 1) {
    throw std::invalid_argument("counterfactual_sweep: one-dimensional only");
  }
  if (grid_means.empty()) {
    throw std::invalid_argument("counterfactual_sweep: empty grid");
  }
  if (!(sigma_p > 0.0)) {
    throw std::invalid_argument("counterfactual_sweep: sigma_p must be positive");
  }
  if (n < 1) {
    throw std::invalid_argument("counterfactual_sweep: n must be >= 1");
  }

  const auto xs = sample(q, n, rng);
  std::vector<double> f_values;
  f_values.reserve(n);
  for (const auto& x : xs) f_values.push_back(*land.true_value(x));

  std::vector<SweepPoint> points;
  points.reserve(grid_means.size());
  for (double mean : grid_means) {
    GaussianComponent target{{mean}, {sigma_p}};
    const auto weights = importance_weights(target, q, xs);
    SweepPoint point;
    point.grid_mean = mean;
    point.estimate = is_estimate(f_values, weights);
    point.true_value =
        true_gaussian_expectation(land.amplitude(), land.mu_star(), land.sigma_star(), target);
    points.push_back(point);
  }
  return points;
}

}  // namespace amis
