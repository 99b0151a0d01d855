#ifndef AMIS_REPORT_IO_HPP
#define AMIS_REPORT_IO_HPP

#include <optional>
#include <span>
#include <string>

#include "amis/simulation.hpp"

namespace amis {

/// Shortest formatting that survives a parse round-trip at 12 significant
/// digits ("%.12g").
std::string format_double(double value);

/// "algo,gamma,ess_threshold,n,t,r,seed,mean_regret,mae,mse,var,fci,prc"
std::string report_csv_header();

/// One CSV row; fci is left empty when no run converged.
std::string report_csv_row(const ExperimentReport& report);

struct ParsedReportRow {
  std::string algo;
  double gamma = 0.0;
  double ess_threshold = 0.0;
  std::size_t n = 0;
  int t = 0;
  std::size_t r = 0;
  std::uint64_t seed = 0;
  double mean_regret = 0.0;
  double mae = 0.0;
  double mse = 0.0;
  double var = 0.0;
  std::optional<double> fci;
  double prc = 0.0;
};

ParsedReportRow parse_report_row(const std::string& line);

/// Line-delimited JSON, one record per iteration, fields: run, iter, peaks,
/// mixing_rates, best_score, major_peak, regret_term.
std::string trace_jsonl(const RunTrace& trace);

/// "grid_mean,estimate,true_value,abs_rel_error" rows.
std::string sweep_csv(std::span<const SweepPoint> points);

/// Writes via a temporary file and rename, so a failure leaves no partial
/// file behind. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace amis

#endif
