#include "amis/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "amis/errors.hpp"

namespace amis {

namespace {

using nlohmann::json;

ParameterPoint point_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>()};
  if (j.is_array()) {
    ParameterPoint p;
    for (const auto& v : j) {
      if (!v.is_number()) throw ValidationError(field, "expected numbers");
      p.push_back(v.get<double>());
    }
    if (p.empty()) throw ValidationError(field, "empty point");
    return p;
  }
  throw ValidationError(field, "expected a number or an array of numbers");
}

std::vector<ParameterPoint> points_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ValidationError(field, "expected a nonempty array");
  std::vector<ParameterPoint> points;
  for (const auto& v : j) points.push_back(point_from_json(v, field));
  return points;
}

std::vector<double> reals_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ValidationError(field, "expected a nonempty array");
  std::vector<double> values;
  for (const auto& v : j) {
    if (!v.is_number()) throw ValidationError(field, "expected numbers");
    values.push_back(v.get<double>());
  }
  return values;
}

template <typename T>
T scalar_from_json(const json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ValidationError(field, "unexpected value type");
  }
}

}  // namespace

ExperimentConfig default_config(PolicyKind kind) {
  ExperimentConfig cfg;
  cfg.algorithm = to_string(kind);
  switch (kind) {
    case PolicyKind::Gis:
      cfg.initial_peaks = {{5.0}};
      cfg.initial_mixing_rates = {1.0};
      cfg.proposal_sigmas = {{1.0}};
      cfg.counterfactual_sigma = 1.0;
      break;
    case PolicyKind::Mvu:
      cfg.initial_peaks = {{5.0}, {5.0}};
      cfg.initial_mixing_rates = {0.8, 0.2};
      cfg.proposal_sigmas = {{1.0}, {3.0}};
      cfg.counterfactual_sigma = 2.0;
      break;
    case PolicyKind::GreedyUpdate:
    case PolicyKind::PeakClusterUpdate:
      cfg.initial_peaks = {{3.0}, {5.0}, {7.0}};
      cfg.initial_mixing_rates = {0.2, 0.6, 0.2};
      cfg.proposal_sigmas = {{1.0}, {1.0}, {1.0}};
      cfg.counterfactual_sigma = 1.0;
      break;
  }
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("json", e.what());
  }
  if (!j.is_object()) throw ValidationError("json", "top level must be an object");

  std::string algorithm = "GIS";
  if (j.contains("algorithm")) {
    algorithm = scalar_from_json<std::string>(j.at("algorithm"), "algorithm");
  }
  const auto kind = policy_kind_from_string(algorithm);
  if (!kind) throw ValidationError("algorithm", "unknown algorithm '" + algorithm + "'");

  ExperimentConfig cfg = default_config(*kind);
  for (const auto& [key, value] : j.items()) {
    if (key == "algorithm") {
      // already consumed
    } else if (key == "gamma") {
      cfg.gamma = scalar_from_json<double>(value, key);
    } else if (key == "ess_threshold") {
      cfg.ess_threshold = scalar_from_json<double>(value, key);
    } else if (key == "n_samples") {
      cfg.n_samples = scalar_from_json<std::size_t>(value, key);
    } else if (key == "t_iterations") {
      cfg.t_iterations = scalar_from_json<int>(value, key);
    } else if (key == "r_runs") {
      cfg.r_runs = scalar_from_json<std::size_t>(value, key);
    } else if (key == "master_seed") {
      cfg.master_seed = scalar_from_json<std::uint64_t>(value, key);
    } else if (key == "landscape") {
      if (!value.is_object()) throw ValidationError(key, "expected an object");
      for (const auto& [lkey, lvalue] : value.items()) {
        if (lkey == "mu_star") {
          cfg.landscape.mu_star = point_from_json(lvalue, "landscape.mu_star");
        } else if (lkey == "sigma_star") {
          cfg.landscape.sigma_star = scalar_from_json<double>(lvalue, "landscape.sigma_star");
        } else if (lkey == "amplitude") {
          cfg.landscape.amplitude = scalar_from_json<double>(lvalue, "landscape.amplitude");
        } else {
          throw ValidationError("landscape." + lkey, "unknown field");
        }
      }
    } else if (key == "initial_peaks") {
      cfg.initial_peaks = points_from_json(value, key);
    } else if (key == "initial_mixing_rates") {
      cfg.initial_mixing_rates = reals_from_json(value, key);
    } else if (key == "proposal_sigmas") {
      cfg.proposal_sigmas.clear();
      for (const auto& p : points_from_json(value, key)) cfg.proposal_sigmas.push_back(p);
    } else if (key == "counterfactual_sigma") {
      cfg.counterfactual_sigma = scalar_from_json<double>(value, key);
    } else if (key == "grid_size") {
      cfg.grid_size = scalar_from_json<int>(value, key);
    } else if (key == "peak_distance_coefficient") {
      cfg.peak_distance_coefficient = scalar_from_json<double>(value, key);
    } else if (key == "delta") {
      cfg.delta = scalar_from_json<double>(value, key);
    } else if (key == "confidence_coefficient") {
      cfg.confidence_coefficient = scalar_from_json<double>(value, key);
    } else if (key == "self_normalized") {
      cfg.self_normalized = scalar_from_json<bool>(value, key);
    } else if (key == "convergence_tolerance") {
      cfg.convergence_tolerance = scalar_from_json<double>(value, key);
    } else if (key == "out") {
      cfg.out = scalar_from_json<std::string>(value, key);
    } else if (key == "trace") {
      cfg.trace = scalar_from_json<std::string>(value, key);
    } else if (key == "parallel") {
      cfg.parallel = scalar_from_json<bool>(value, key);
    } else {
      throw ValidationError(key, "unknown field");
    }
  }

  // MVU's shared mean may be written once; expand it to both components.
  if (*kind == PolicyKind::Mvu && cfg.initial_peaks.size() == 1) {
    cfg.initial_peaks.push_back(cfg.initial_peaks.front());
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("config", "cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void validate_config(const ExperimentConfig& cfg) {
  const auto kind = policy_kind_from_string(cfg.algorithm);
  if (!kind) throw ValidationError("algorithm", "unknown algorithm '" + cfg.algorithm + "'");
  if (cfg.n_samples < 1) throw ValidationError("n_samples", "must be >= 1");
  if (cfg.t_iterations < 1) throw ValidationError("t_iterations", "must be >= 1");
  if (cfg.r_runs < 1) throw ValidationError("r_runs", "must be >= 1");
  if (!(cfg.gamma >= 0.0)) throw ValidationError("gamma", "must be nonnegative");
  if (!(cfg.ess_threshold >= 0.0 && cfg.ess_threshold < 1.0)) {
    throw ValidationError("ess_threshold", "must lie in [0, 1)");
  }
  if (cfg.grid_size < 1 || cfg.grid_size % 2 == 0) {
    throw ValidationError("grid_size", "must be odd and >= 1");
  }
  if (!(cfg.counterfactual_sigma > 0.0)) {
    throw ValidationError("counterfactual_sigma", "must be positive");
  }
  if (!(cfg.landscape.sigma_star > 0.0)) {
    throw ValidationError("landscape.sigma_star", "must be positive");
  }
  if (cfg.convergence_tolerance && !(*cfg.convergence_tolerance > 0.0)) {
    throw ValidationError("convergence_tolerance", "must be positive");
  }

  const std::size_t k = cfg.initial_mixing_rates.size();
  if (k == 0) throw ValidationError("initial_mixing_rates", "must not be empty");
  double total = 0.0;
  for (double w : cfg.initial_mixing_rates) {
    if (!(w >= 0.0)) throw ValidationError("initial_mixing_rates", "entries must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("initial_mixing_rates", "must sum to 1");
  }
  if (cfg.initial_peaks.size() != k) {
    throw ValidationError("initial_peaks", "length must match initial_mixing_rates");
  }
  if (cfg.proposal_sigmas.size() != k) {
    throw ValidationError("proposal_sigmas", "length must match initial_mixing_rates");
  }
  const std::size_t dim = cfg.landscape.mu_star.size();
  if (dim == 0) throw ValidationError("landscape.mu_star", "must not be empty");
  for (const auto& peak : cfg.initial_peaks) {
    if (peak.size() != dim) {
      throw ValidationError("initial_peaks", "peak dimension must match landscape.mu_star");
    }
  }
  for (const auto& sigma : cfg.proposal_sigmas) {
    if (sigma.size() != dim) {
      throw ValidationError("proposal_sigmas", "sigma dimension must match landscape.mu_star");
    }
    for (double s : sigma) {
      if (!(s > 0.0)) throw ValidationError("proposal_sigmas", "entries must be positive");
    }
  }

  try {
    validate_policy_state(make_policy(cfg), make_initial_state(cfg));
  } catch (const std::invalid_argument& e) {
    throw ValidationError("initial_peaks", e.what());
  }
}

Policy make_policy(const ExperimentConfig& cfg) {
  const auto kind = policy_kind_from_string(cfg.algorithm);
  if (!kind) throw ValidationError("algorithm", "unknown algorithm '" + cfg.algorithm + "'");
  Policy policy;
  policy.kind = *kind;
  policy.peak_distance_coefficient = cfg.peak_distance_coefficient;
  policy.delta = cfg.delta;
  policy.confidence_coefficient = cfg.confidence_coefficient;
  return policy;
}

PolicyState make_initial_state(const ExperimentConfig& cfg) {
  PolicyState state;
  for (std::size_t i = 0; i < cfg.initial_peaks.size(); ++i) {
    GaussianComponent c;
    c.mean = cfg.initial_peaks[i];
    c.sigma = cfg.proposal_sigmas[i];
    state.proposal.components.push_back(std::move(c));
  }
  state.proposal.weights = cfg.initial_mixing_rates;
  state.counterfactual_sigma = cfg.counterfactual_sigma;
  state.grid_size = cfg.grid_size;
  state.ess_threshold = cfg.ess_threshold;
  return state;
}

}  // namespace amis
