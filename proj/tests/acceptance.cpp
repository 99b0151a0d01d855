// Acceptance suite: runs every gate criterion at desk scale
// (N = 100, T = 10, R = 100 per cell) and prints one PASS/FAIL line per
// criterion. Exit status is the number of failed criteria.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "amis/commands.hpp"
#include "amis/report_io.hpp"
#include "amis/simulation.hpp"
#include "oracles.hpp"

using namespace amis;

namespace {

std::uint64_t g_seed = 42;  // overridable via argv[1]
int g_failures = 0;

void report(int id, const std::string& label, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << label;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << '\n';
  if (!pass) ++g_failures;
}

std::string fmt(double v) { return format_double(v); }

ExperimentConfig cell_config(const std::string& algo, double gamma, double ess,
                             std::uint64_t seed) {
  ExperimentConfig cfg = default_config(*policy_kind_from_string(algo));
  cfg.gamma = gamma;
  cfg.ess_threshold = ess;
  cfg.master_seed = seed;
  return cfg;
}

const ExperimentResult& run_cell(const std::string& algo, double gamma, double ess,
                                 std::uint64_t seed) {
  static std::map<std::string, ExperimentResult> cache;
  std::ostringstream key;
  key << algo << '/' << gamma << '/' << ess << '/' << seed;
  auto it = cache.find(key.str());
  if (it == cache.end()) {
    it = cache.emplace(key.str(), run_experiment(cell_config(algo, gamma, ess, seed), true)).first;
  }
  return it->second;
}

const std::vector<std::string> kAlgos{"GIS", "MVU", "GU", "PCU"};

// --- criteria 1-3: noiseless convergence ---------------------------------

void criterion_1() {
  bool pass = true;
  std::ostringstream detail;
  for (const auto& algo : kAlgos) {
    const double prc = run_cell(algo, 0.0, 0.0, g_seed).report.prc;
    pass = pass && prc == 1.0;
    detail << algo << "=" << fmt(prc) << ' ';
  }
  report(1, "gamma=0, ESS=0: every algorithm converges in all runs", pass, detail.str());
}

void criterion_2() {
  // Normative trajectory: iterate the GIS update on closed-form candidate
  // scores; the walk must be 5 -> 6 -> 7 -> 8 -> 9 -> 10.
  const Policy policy{PolicyKind::Gis};
  PolicyState state = make_initial_state(cell_config("GIS", 0.0, 0.0, g_seed));
  std::vector<double> walk;
  for (int it = 0; it < 5; ++it) {
    std::vector<CandidateEvaluation> evals;
    for (const auto& cand : generate_candidates(policy, state)) {
      CandidateEvaluation e;
      e.candidate = cand;
      e.estimate = true_gaussian_expectation(100.0, {10.0}, 1.0, cand.target);
      e.ess = 100.0;
      e.n = 100;
      evals.push_back(e);
    }
    state = gis_update(state, evals);
    walk.push_back(state.proposal.components[0].mean[0]);
  }
  const bool walk_ok = walk == std::vector<double>{6.0, 7.0, 8.0, 9.0, 10.0};

  const auto& cell = run_cell("GIS", 0.0, 0.0, g_seed);
  const bool fci_ok = cell.report.fci.has_value() && *cell.report.fci == 5.0;
  std::ostringstream detail;
  detail << "closed-form walk 5";
  for (double m : walk) detail << "->" << fmt(m);
  detail << ", FCI=" << (cell.report.fci ? fmt(*cell.report.fci) : "none");
  report(2, "gamma=0 GIS: FCI exactly 5 with the 5->6->7->8->9->10 trajectory",
         walk_ok && fci_ok, detail.str());
}

void criterion_3() {
  const auto& gis = run_cell("GIS", 0.0, 0.0, g_seed).report;
  const auto& mvu = run_cell("MVU", 0.0, 0.0, g_seed).report;
  const auto& gu = run_cell("GU", 0.0, 0.0, g_seed).report;
  const bool have = gis.fci && mvu.fci && gu.fci;
  const bool pass = have && *mvu.fci <= *gis.fci && *gu.fci <= *gis.fci;
  std::ostringstream detail;
  if (have) {
    detail << "FCI MVU=" << fmt(*mvu.fci) << " GU=" << fmt(*gu.fci) << " GIS=" << fmt(*gis.fci);
  } else {
    detail << "missing FCI";
  }
  report(3, "gamma=0: MVU and GU converge at least as fast as GIS", pass, detail.str());
}

// --- criteria 4-6: noisy convergence orderings ----------------------------

void criterion_4() {
  const double gis = run_cell("GIS", 10.0, 0.0, g_seed).report.prc;
  const double mvu = run_cell("MVU", 10.0, 0.0, g_seed).report.prc;
  const double gu = run_cell("GU", 10.0, 0.0, g_seed).report.prc;
  const double pcu = run_cell("PCU", 10.0, 0.0, g_seed).report.prc;
  const bool pass =
      gu >= 0.95 && pcu >= 0.95 && gis <= 0.80 && mvu > gis && gu > gis && pcu > gis;
  std::ostringstream detail;
  detail << "PRC GIS=" << fmt(gis) << " MVU=" << fmt(mvu) << " GU=" << fmt(gu)
         << " PCU=" << fmt(pcu);
  report(4, "gamma=10: GU/PCU >= 0.95, GIS <= 0.80, every mixture variant beats GIS", pass,
         detail.str());
}

void criterion_5() {
  const double gis = run_cell("GIS", 10.0, 0.0, g_seed).report.mean_regret;
  bool pass = true;
  std::ostringstream detail;
  detail << "regret GIS=" << fmt(gis);
  for (const auto& algo : {"MVU", "GU", "PCU"}) {
    const double regret = run_cell(algo, 10.0, 0.0, g_seed).report.mean_regret;
    pass = pass && regret < gis;
    detail << ' ' << algo << "=" << fmt(regret);
  }
  report(5, "gamma=10: every mixture variant has lower mean regret than GIS", pass, detail.str());
}

void criterion_6() {
  const double gis = run_cell("GIS", 100.0, 0.0, g_seed).report.prc;
  bool pass = true;
  std::ostringstream detail;
  detail << "PRC GIS=" << fmt(gis);
  for (const auto& algo : {"MVU", "GU", "PCU"}) {
    const double prc = run_cell(algo, 100.0, 0.0, g_seed).report.prc;
    pass = pass && gis < prc;
    detail << ' ' << algo << "=" << fmt(prc);
  }
  report(6, "gamma=100: every mixture variant converges more often than GIS", pass, detail.str());
}

// --- criteria 7-8: ESS filtering ------------------------------------------

double pooled_var(const std::vector<const ExperimentResult*>& cells) {
  std::vector<RunTrace> all;
  for (const auto* cell : cells) {
    all.insert(all.end(), cell->traces.begin(), cell->traces.end());
  }
  const SyntheticLandscape land({10.0}, 1.0, 100.0, 0.0);
  return aggregate(all, land).var;
}

void criterion_7() {
  const auto& unfiltered = run_cell("GIS", 100.0, 0.0, g_seed);
  const auto& filtered = run_cell("GIS", 100.0, 0.4, g_seed);
  double var0 = unfiltered.report.var;
  double var4 = filtered.report.var;
  std::ostringstream detail;
  detail << "VAR ess0=" << fmt(var0) << " ess0.4=" << fmt(var4);
  const double margin = std::abs(var0 - var4) / std::max(var0, var4);
  if (margin < 0.10) {
    // Noise guard: margin under 10 percent, pool a second seed.
    const auto& unfiltered_b = run_cell("GIS", 100.0, 0.0, g_seed + 1);
    const auto& filtered_b = run_cell("GIS", 100.0, 0.4, g_seed + 1);
    var0 = pooled_var({&unfiltered, &unfiltered_b});
    var4 = pooled_var({&filtered, &filtered_b});
    detail << "; pooled with seed " << g_seed + 1 << ": ess0=" << fmt(var0)
           << " ess0.4=" << fmt(var4);
  }
  report(7, "gamma=100 GIS: the ESS=0.4 filter reduces convergence variance", var4 < var0,
         detail.str());
}

void criterion_8() {
  const double gu = run_cell("GU", 100.0, 0.4, g_seed).report.prc;
  const double mvu = run_cell("MVU", 100.0, 0.4, g_seed).report.prc;
  std::ostringstream detail;
  detail << "PRC GU=" << fmt(gu) << " MVU=" << fmt(mvu);
  report(8, "gamma=100, ESS=0.4: GU converges more often than MVU", gu > mvu, detail.str());
}

// --- criteria 9-13: estimator and policy properties ------------------------

void criterion_9() {
  std::mt19937_64 gen(1234);
  std::uniform_real_distribution<double> mu(-5.0, 5.0);
  std::uniform_real_distribution<double> sigma(0.2, 3.0);
  std::normal_distribution<double> value(0.0, 10.0);
  bool pass = true;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const GaussianComponent p{{mu(gen)}, {sigma(gen)}};
    const MixtureProposal q{{p}, {1.0}};
    const std::size_t n = 2 + trial % 64;
    std::vector<ParameterPoint> xs;
    std::vector<double> f;
    std::normal_distribution<double> draw(p.mean[0], p.sigma[0]);
    for (std::size_t i = 0; i < n; ++i) {
      xs.push_back({draw(gen)});
      f.push_back(value(gen));
    }
    const double estimate = is_estimate(f, importance_weights(p, q, xs));
    const double mean = oracle::mean(f);
    const double rel = std::abs(estimate - mean) / std::max(1.0, std::abs(mean));
    worst = std::max(worst, rel);
    pass = pass && rel <= 1e-12;
  }
  report(9, "p=q identity: the IS estimate is the sample mean", pass,
         "worst relative deviation " + fmt(worst) + " over 1000 sets");
}

void criterion_10() {
  std::mt19937_64 gen(777);
  std::uniform_real_distribution<double> mu_q_dist(5.0, 15.0);
  std::uniform_real_distribution<double> sigma_dist(0.5, 2.0);
  std::uniform_real_distribution<double> shift(-1.0, 1.0);
  int hits = 0;
  RandomStream rng(g_seed ^ 0xabcdef);
  for (int trial = 0; trial < 50; ++trial) {
    const double mu_q = mu_q_dist(gen);
    const double s = sigma_dist(gen);
    const double mu_p = mu_q + shift(gen) * s;
    const MixtureProposal q{{{{mu_q}, {s}}}, {1.0}};
    const GaussianComponent p{{mu_p}, {s}};
    const auto xs = sample(q, 10000, rng);
    std::vector<double> f;
    for (const auto& x : xs) f.push_back(100.0 * oracle::normal_pdf(x[0], 10.0, 1.0));
    const auto ws = importance_weights(p, q, xs);
    const double estimate = is_estimate(f, ws);
    const double se = is_stderr(f, ws);
    const double truth = true_gaussian_expectation(100.0, {10.0}, 1.0, p);
    if (std::abs(estimate - truth) <= 4.0 * se) ++hits;
  }
  report(10, "closed-form oracle: estimates within 4 standard errors", hits >= 48,
         std::to_string(hits) + "/50 tuples inside the band");
}

void criterion_11() {
  std::mt19937_64 gen(321);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool pass = ess(std::vector<double>{1.0, 3.0}) == 1.6;
  for (int trial = 0; trial < 1000 && pass; ++trial) {
    const std::size_t n = 1 + trial % 64;
    std::vector<double> w(n);
    for (double& x : w) x = u(gen);
    w[trial % n] += 1e-9;
    const double e = ess(w);
    pass = e >= 1.0 - 1e-12 && e <= static_cast<double>(n) * (1.0 + 1e-12);
    if (trial % 7 == 0) {
      const std::vector<double> uniform(n, 0.25 + u(gen));
      pass = pass && std::abs(ess(uniform) - static_cast<double>(n)) <= 1e-9 * n;
    }
  }
  report(11, "ESS bounds, uniform-weight equality, and the [1,3] hand value", pass, "");
}

void criterion_12() {
  std::mt19937_64 gen(987);
  std::uniform_real_distribution<double> mean_dist(-10.0, 10.0);
  std::uniform_real_distribution<double> score_dist(-5.0, 5.0);
  std::uniform_real_distribution<double> d_dist(0.0, 4.0);
  std::uniform_int_distribution<int> count_dist(1, 12);

  PolicyState gis;
  gis.proposal = {{{{5.0}, {1.0}}}, {1.0}};
  PolicyState mvu;
  mvu.proposal = {{{{5.0}, {1.0}}, {{5.0}, {3.0}}}, {0.8, 0.2}};
  PolicyState cluster;
  cluster.proposal = {{{{3.0}, {1.0}}, {{5.0}, {1.0}}, {{7.0}, {1.0}}}, {0.2, 0.6, 0.2}};

  const auto simplex_ok = [](const PolicyState& s) {
    double total = 0.0;
    for (double w : s.proposal.weights) {
      if (w < 0.0) return false;
      total += w;
    }
    return std::abs(total - 1.0) <= 1e-9;
  };

  bool pass = true;
  for (int trial = 0; trial < 1000 && pass; ++trial) {
    std::vector<CandidateEvaluation> evals;
    const int count = count_dist(gen);
    for (int i = 0; i < count; ++i) {
      CandidateEvaluation e;
      e.candidate.target = {{mean_dist(gen)}, {1.0}};
      e.candidate.source_component = static_cast<std::size_t>(i % 3);
      e.estimate = score_dist(gen);
      e.ess = 50.0;
      e.n = 100;
      evals.push_back(e);
    }
    const double d = d_dist(gen);
    const auto a = gis_update(gis, evals);
    const auto b = mvu_update(mvu, evals);
    const auto c = greedy_update(cluster, evals, 3, d);
    const auto e2 = pcu_update(cluster, evals, 0.2);
    pass = simplex_ok(a) && simplex_ok(b) && simplex_ok(c) && simplex_ok(e2);
    if (pass && !c.distance_fallback) {
      for (std::size_t i = 0; i < c.proposal.components.size() && pass; ++i) {
        for (std::size_t j = i + 1; j < c.proposal.components.size() && pass; ++j) {
          pass = l1_distance(c.proposal.components[i].mean, c.proposal.components[j].mean) > d;
        }
      }
    }
  }
  report(12, "simplex preserved by every update; GU separation or fallback flag", pass,
         "1000 fuzz iterations per policy");
}

void criterion_13() {
  PolicyState cluster;
  cluster.proposal = {{{{3.0}, {1.0}}, {{5.0}, {1.0}}, {{7.0}, {1.0}}}, {0.2, 0.6, 0.2}};

  std::vector<CandidateEvaluation> gu_evals;
  const double means[] = {5.0, 5.1, 7.0};
  const double scores[] = {3.0, 2.9, 1.0};
  for (int i = 0; i < 3; ++i) {
    CandidateEvaluation e;
    e.candidate.target = {{means[i]}, {1.0}};
    e.estimate = scores[i];
    e.n = 100;
    gu_evals.push_back(e);
  }
  const auto gu = greedy_update(cluster, gu_evals, 2, 1.5);
  bool pass = gu.proposal.components.size() == 2 &&
              std::abs(gu.proposal.components[0].mean[0] - 5.0) <= 1e-9 &&
              std::abs(gu.proposal.components[1].mean[0] - 7.0) <= 1e-9 &&
              std::abs(gu.proposal.weights[0] - 0.75) <= 1e-9 &&
              std::abs(gu.proposal.weights[1] - 0.25) <= 1e-9;

  std::vector<CandidateEvaluation> pcu_evals;
  for (int i = 0; i < 3; ++i) {
    CandidateEvaluation e;
    e.candidate.target = {{cluster.proposal.components[i].mean[0]}, {1.0}};
    e.candidate.source_component = static_cast<std::size_t>(i);
    e.estimate = i == 0 ? 9.0 : (i == 1 ? 3.0 : 1.0);
    e.n = 100;
    pcu_evals.push_back(e);
  }
  const auto pcu = pcu_update(cluster, pcu_evals, 0.2);
  // The boosted vector [0.4, 0.6, 0.2] renormalizes over its own sum 1.2
  // so the result stays a simplex.
  pass = pass && std::abs(pcu.proposal.weights[0] - 0.4 / 1.2) <= 1e-9 &&
         std::abs(pcu.proposal.weights[1] - 0.6 / 1.2) <= 1e-9 &&
         std::abs(pcu.proposal.weights[2] - 0.2 / 1.2) <= 1e-9;
  report(13, "GU and PCU hand traces reproduce exactly", pass,
         "GU peaks [5,7] pi [0.75,0.25]; PCU pi [0.33333,0.5,0.16667]");
}

// --- criteria 14-16: harness-level guarantees ------------------------------

void criterion_14() {
  const auto dir = std::filesystem::temp_directory_path() / "amis_acceptance";
  std::filesystem::create_directories(dir);
  const auto seq_path = dir / "matrix_seq.csv";
  const auto par_path = dir / "matrix_par.csv";
  TableOptions opts;
  opts.base = default_config(PolicyKind::Gis);
  opts.base.master_seed = g_seed;
  opts.base.out = seq_path.string();
  opts.base.parallel = false;
  int rc = cmd_table(opts);
  opts.base.out = par_path.string();
  opts.base.parallel = true;
  rc += cmd_table(opts);

  const auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };
  const std::string seq = slurp(seq_path);
  const std::string par = slurp(par_path);
  std::size_t rows = 0;
  for (char ch : seq) rows += ch == '\n' ? 1 : 0;
  const bool pass = rc == 0 && !seq.empty() && seq == par && rows == 25;
  report(14, "full matrix: sequential and parallel runs emit byte-identical CSV", pass,
         std::to_string(rows) + " lines");
}

void criterion_15() {
  const SyntheticLandscape land({10.0}, 1.0, 100.0, 0.0);
  const MixtureProposal q{{{{9.0}, {1.0}}}, {1.0}};
  const std::vector<double> on_policy{8.0, 8.25, 8.5, 8.75, 9.0, 9.25, 9.5, 9.75, 10.0};
  const std::vector<double> far{-2.0, 22.0};  // 11 and 13 sigma away from the mean
  int on_total = 0, on_close = 0, far_total = 0, far_wild = 0;
  for (int trial = 0; trial < 20; ++trial) {
    RandomStream rng(derive_seed(g_seed, 9000 + trial));
    const auto near_points = counterfactual_sweep(land, q, 1.0, on_policy, 10000, rng);
    for (const auto& p : near_points) {
      ++on_total;
      if (std::abs(p.estimate - p.true_value) / std::abs(p.true_value) < 0.05) ++on_close;
    }
    const auto far_points = counterfactual_sweep(land, q, 1.0, far, 10000, rng);
    for (const auto& p : far_points) {
      ++far_total;
      if (std::abs(p.estimate - p.true_value) / std::abs(p.true_value) > 0.25) ++far_wild;
    }
  }
  const bool pass = on_close == on_total && far_wild >= static_cast<int>(0.8 * far_total);
  std::ostringstream detail;
  detail << "on-policy " << on_close << '/' << on_total << " under 5%; far " << far_wild << '/'
         << far_total << " over 25%";
  report(15, "sweep: on-policy estimates align, far off-policy estimates diverge", pass,
         detail.str());
}

void criterion_16() {
  // Recompute the bias from the traces of every cached cell and check the
  // decomposition in the emitted reports.
  bool pass = true;
  double worst = 0.0;
  for (const auto& algo : kAlgos) {
    for (double gamma : {0.0, 10.0, 100.0}) {
      const auto& cell = run_cell(algo, gamma, 0.0, g_seed);
      double bias = 0.0;
      for (const auto& trace : cell.traces) bias += trace.final_major_peak[0] - 10.0;
      bias /= static_cast<double>(cell.traces.size());
      const double gap = std::abs(cell.report.mse - (cell.report.var + bias * bias));
      worst = std::max(worst, gap);
      pass = pass && gap <= 1e-9;
    }
  }
  report(16, "MSE = VAR + bias^2 in every emitted report", pass,
         "worst decomposition gap " + fmt(worst));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_seed = std::strtoull(argv[1], nullptr, 10);
  std::cout << "acceptance suite, master seed " << g_seed << "\n";
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  criterion_14();
  criterion_15();
  criterion_16();
  std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criteria failed")
            << '\n';
  return g_failures;
}
