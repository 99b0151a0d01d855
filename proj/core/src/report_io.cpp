#include "amis/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace amis {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

nlohmann::ordered_json point_to_json(const ParameterPoint& p) {
  return nlohmann::ordered_json(p);
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string report_csv_header() {
  return "algo,gamma,ess_threshold,n,t,r,seed,mean_regret,mae,mse,var,fci,prc";
}

std::string report_csv_row(const ExperimentReport& report) {
  const auto& echo = report.config;
  std::ostringstream row;
  row << echo.algorithm << ',' << format_double(echo.gamma) << ','
      << format_double(echo.ess_threshold) << ',' << echo.n_samples << ',' << echo.t_iterations
      << ',' << echo.r_runs << ',' << echo.master_seed << ',' << format_double(report.mean_regret)
      << ',' << format_double(report.mae) << ',' << format_double(report.mse) << ','
      << format_double(report.var) << ',' << (report.fci ? format_double(*report.fci) : "") << ','
      << format_double(report.prc);
  return row.str();
}

ParsedReportRow parse_report_row(const std::string& line) {
  const auto fields = split_csv(line);
  if (fields.size() != 13) {
    throw std::invalid_argument("parse_report_row: expected 13 fields, got " +
                                std::to_string(fields.size()));
  }
  ParsedReportRow row;
  row.algo = fields[0];
  row.gamma = std::stod(fields[1]);
  row.ess_threshold = std::stod(fields[2]);
  row.n = std::stoull(fields[3]);
  row.t = std::stoi(fields[4]);
  row.r = std::stoull(fields[5]);
  row.seed = std::stoull(fields[6]);
  row.mean_regret = std::stod(fields[7]);
  row.mae = std::stod(fields[8]);
  row.mse = std::stod(fields[9]);
  row.var = std::stod(fields[10]);
  if (!fields[11].empty()) row.fci = std::stod(fields[11]);
  row.prc = std::stod(fields[12]);
  return row;
}

std::string trace_jsonl(const RunTrace& trace) {
  std::ostringstream out;
  for (const auto& record : trace.records) {
    nlohmann::ordered_json line;
    line["run"] = trace.run_index;
    line["iter"] = record.iteration;
    nlohmann::ordered_json peaks = nlohmann::ordered_json::array();
    for (const auto& peak : record.selected_peaks) peaks.push_back(point_to_json(peak));
    line["peaks"] = peaks;
    line["mixing_rates"] = record.mixing_rates;
    line["best_score"] = record.best_score;
    line["major_peak"] = point_to_json(record.major_peak);
    line["regret_term"] = record.regret_term;
    out << line.dump() << '\n';
  }
  return out.str();
}

std::string sweep_csv(std::span<const SweepPoint> points) {
  std::ostringstream out;
  out << "grid_mean,estimate,true_value,abs_rel_error\n";
  for (const auto& point : points) {
    const double rel = point.true_value != 0.0
                           ? std::abs(point.estimate - point.true_value) / std::abs(point.true_value)
                           : std::numeric_limits<double>::infinity();
    out << format_double(point.grid_mean) << ',' << format_double(point.estimate) << ','
        << format_double(point.true_value) << ',' << format_double(rel) << '\n';
  }
  return out.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open '" + tmp + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed while writing '" + tmp + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move '" + tmp + "' to '" + path + "'");
  }
}

}  // namespace amis
