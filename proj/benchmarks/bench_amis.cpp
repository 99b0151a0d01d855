#include <benchmark/benchmark.h>

#include "amis/simulation.hpp"

namespace {

using namespace amis;

const MixtureProposal& cluster_proposal() {
  static const MixtureProposal q{
      {{{3.0}, {1.0}}, {{5.0}, {1.0}}, {{7.0}, {1.0}}}, {0.2, 0.6, 0.2}};
  return q;
}

void BM_MixtureLogPdf(benchmark::State& state) {
  const auto& q = cluster_proposal();
  double x = 2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_mixture_pdf(q, {x}));
    x += 1e-6;
  }
}
BENCHMARK(BM_MixtureLogPdf);

void BM_SampleMixture(benchmark::State& state) {
  const auto& q = cluster_proposal();
  RandomStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_mixture(q, static_cast<std::size_t>(state.range(0)), rng));
  }
}
BENCHMARK(BM_SampleMixture)->Arg(100)->Arg(1000);

void BM_EvaluateCandidates(benchmark::State& state) {
  const auto& q = cluster_proposal();
  RandomStream rng(2);
  const auto samples = sample_mixture(q, 100, rng);
  std::vector<double> f(samples.points.size(), 1.0);
  Policy policy{PolicyKind::PeakClusterUpdate};
  PolicyState ps;
  ps.proposal = q;
  const auto cands = generate_candidates(policy, ps);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_candidates(cands, q, samples.points, f));
  }
}
BENCHMARK(BM_EvaluateCandidates);

void BM_GreedyUpdate(benchmark::State& state) {
  PolicyState ps;
  ps.proposal = cluster_proposal();
  std::vector<CandidateEvaluation> evals;
  for (int i = 0; i < 33; ++i) {
    CandidateEvaluation e;
    e.candidate.target = {{2.0 + 0.2 * i}, {1.0}};
    e.candidate.source_component = static_cast<std::size_t>(i / 11);
    e.estimate = std::sin(i * 0.7);
    e.n = 100;
    evals.push_back(e);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_update(ps, evals, 3, 1.5));
  }
}
BENCHMARK(BM_GreedyUpdate);

void BM_TuningRun(benchmark::State& state) {
  const ExperimentConfig cfg = default_config(PolicyKind::PeakClusterUpdate);
  const Policy policy = make_policy(cfg);
  const PolicyState initial = make_initial_state(cfg);
  const SyntheticLandscape land = make_landscape(cfg);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    RandomStream rng(++seed);
    benchmark::DoNotOptimize(run_tuning(policy, initial, land, 100, 10, rng));
  }
}
BENCHMARK(BM_TuningRun);

}  // namespace

BENCHMARK_MAIN();
