#include "gcv/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gcv {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool parse_double(const std::string& s, double& value) {
  if (s.empty()) return false;
  char* end = nullptr;
  value = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

bool is_na(const std::string& s) { return s == "NA"; }

}  // namespace

std::string format_sig(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

double round_sig(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  const double mag = std::floor(std::log10(std::abs(x)));
  const double scale = std::pow(10.0, 5.0 - mag);
  return std::round(x * scale) / scale;
}

DataMatrix read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_csv_line(line));
  }
  if (rows.empty()) throw std::runtime_error("read_csv: no data rows");

  // Header row iff any first-row token is neither numeric nor NA.
  bool has_header = false;
  for (const auto& tok : rows[0]) {
    double v;
    if (!is_na(tok) && !parse_double(tok, v)) {
      has_header = true;
      break;
    }
  }

  DataMatrix data;
  std::size_t first_data = 0;
  if (has_header) {
    data.col_ids = rows[0];
    first_data = 1;
    if (rows.size() == 1) throw std::runtime_error("read_csv: header but no data rows");
  }

  const std::size_t n = rows.size() - first_data;
  const std::size_t p = rows[first_data].size();
  data.values.resize(n, p);
  BoolMatrix mask = BoolMatrix::Constant(n, p, true);
  bool any_missing = false;

  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[first_data + i];
    if (row.size() != p) {
      std::ostringstream msg;
      msg << "read_csv: ragged row " << (first_data + i + 1) << " (expected " << p
          << " fields, found " << row.size() << ")";
      throw std::runtime_error(msg.str());
    }
    for (std::size_t j = 0; j < p; ++j) {
      if (is_na(row[j])) {
        data.values(i, j) = 0.0;
        mask(i, j) = false;
        any_missing = true;
        continue;
      }
      double v;
      if (!parse_double(row[j], v)) {
        std::ostringstream msg;
        msg << "read_csv: non-numeric cell '" << row[j] << "' at row "
            << (first_data + i + 1) << ", column " << (j + 1);
        throw std::runtime_error(msg.str());
      }
      data.values(i, j) = v;
    }
  }
  if (any_missing) data.mask = std::move(mask);
  data.validate();
  return data;
}

DataMatrix read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return read_csv(in);
}

void write_csv(const DataMatrix& data, std::ostream& out) {
  if (!data.col_ids.empty()) {
    for (Index j = 0; j < data.cols(); ++j)
      out << (j ? "," : "") << data.col_ids[j];
    out << "\n";
  }
  char buf[64];
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index j = 0; j < data.cols(); ++j) {
      if (j) out << ",";
      if (!data.observed(i, j)) {
        out << "NA";
      } else {
        std::snprintf(buf, sizeof(buf), "%.17g", data.values(i, j));
        out << buf;
      }
    }
    out << "\n";
  }
}

void write_csv_file(const DataMatrix& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  write_csv(data, out);
}

void write_cv_report_csv(const CvReport& report, std::uint64_t seed, std::ostream& out) {
  out << "# seed=" << seed << " selected_k=" << report.selected_k
      << " corrected=" << (report.corrected ? 1 : 0) << "\n";
  out << "k,fold_r,fold_s,cv_error\n";
  for (std::size_t ki = 0; ki < report.k_grid.size(); ++ki)
    for (std::size_t f = 0; f < report.folds.size(); ++f)
      out << report.k_grid[ki] << "," << report.folds[f].first << ","
          << report.folds[f].second << "," << format_sig(report.errors(ki, f)) << "\n";
}

nlohmann::ordered_json cv_report_json(const CvReport& report, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["corrected"] = report.corrected;
  j["k_grid"] = report.k_grid;
  auto folds = nlohmann::ordered_json::array();
  for (const auto& [r, s] : report.folds) folds.push_back({r, s});
  j["folds"] = std::move(folds);
  auto errors = nlohmann::ordered_json::array();
  for (std::size_t ki = 0; ki < report.k_grid.size(); ++ki) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t f = 0; f < report.folds.size(); ++f)
      row.push_back(round_sig(report.errors(ki, f)));
    errors.push_back(std::move(row));
  }
  j["errors"] = std::move(errors);
  auto means = nlohmann::ordered_json::array();
  for (Index i = 0; i < report.mean_error.size(); ++i)
    means.push_back(round_sig(report.mean_error[i]));
  j["mean_error"] = std::move(means);
  j["selected_k"] = report.selected_k;
  return j;
}

nlohmann::ordered_json kmeans_model_json(const KMeansModel& model) {
  nlohmann::ordered_json j;
  j["k"] = model.k();
  j["dims"] = model.centers.cols();
  auto centers = nlohmann::ordered_json::array();  // row-major
  for (Index g = 0; g < model.centers.rows(); ++g)
    for (Index d = 0; d < model.centers.cols(); ++d)
      centers.push_back(model.centers(g, d));
  j["centers"] = std::move(centers);
  j["labels"] = std::vector<int>(model.labels.data(), model.labels.data() + model.labels.size());
  j["dispersion"] = model.dispersion;
  return j;
}

KMeansModel kmeans_model_from_json(const nlohmann::ordered_json& j) {
  KMeansModel model;
  const int k = j.at("k").get<int>();
  const Index dims = j.at("dims").get<Index>();
  const auto centers = j.at("centers").get<std::vector<double>>();
  if (static_cast<Index>(centers.size()) != k * dims)
    throw std::runtime_error("kmeans_model_from_json: centers size mismatch");
  model.centers.resize(k, dims);
  for (Index g = 0; g < k; ++g)
    for (Index d = 0; d < dims; ++d) model.centers(g, d) = centers[g * dims + d];
  const auto labels = j.at("labels").get<std::vector<int>>();
  model.labels = Eigen::Map<const IntVector>(labels.data(), labels.size());
  model.dispersion = j.at("dispersion").get<double>();
  return model;
}

nlohmann::ordered_json simspec_json(const SimSpec& spec) {
  nlohmann::ordered_json j;
  j["setting"] = setting_name(spec.setting);
  j["k_true"] = spec.k_true;
  j["dims"] = spec.dims;
  j["cluster_sizes"] = spec.cluster_sizes;
  j["rho"] = spec.rho;
  j["noise_cols"] = spec.noise_cols;
  j["var_ratio"] = spec.var_ratio;
  j["t_dof"] = spec.t_dof;
  if (spec.tau)
    j["tau"] = *spec.tau;
  else
    j["tau"] = nullptr;
  j["seed"] = spec.seed;
  return j;
}

SimSpec simspec_from_json(const nlohmann::ordered_json& j) {
  SimSpec spec;
  spec.setting = setting_from_name(j.at("setting").get<std::string>());
  spec.k_true = j.at("k_true").get<int>();
  spec.dims = j.at("dims").get<int>();
  spec.cluster_sizes = j.at("cluster_sizes").get<std::vector<int>>();
  if (j.contains("rho")) spec.rho = j["rho"].get<double>();
  if (j.contains("noise_cols")) spec.noise_cols = j["noise_cols"].get<int>();
  if (j.contains("var_ratio")) spec.var_ratio = j["var_ratio"].get<double>();
  if (j.contains("t_dof")) spec.t_dof = j["t_dof"].get<double>();
  if (j.contains("tau") && !j["tau"].is_null()) spec.tau = j["tau"].get<double>();
  if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
  spec.validate();
  return spec;
}

SimSpec read_simspec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  nlohmann::ordered_json j;
  in >> j;
  return simspec_from_json(j);
}

void write_summary_csv(const std::vector<MethodSummary>& rows, std::uint64_t seed,
                       std::ostream& out) {
  out << "# seed=" << seed << "\n";
  out << "method,setting,param,correct,total,wilson_low,wilson_high\n";
  for (const auto& r : rows)
    out << r.method << "," << r.setting << "," << format_sig(r.param) << "," << r.correct
        << "," << r.total << "," << format_sig(r.wilson_low) << ","
        << format_sig(r.wilson_high) << "\n";
}

nlohmann::ordered_json summary_json(const std::vector<MethodSummary>& rows,
                                    std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["method"] = r.method;
    row["setting"] = r.setting;
    row["param"] = round_sig(r.param);
    row["correct"] = r.correct;
    row["total"] = r.total;
    row["wilson_low"] = round_sig(r.wilson_low);
    row["wilson_high"] = round_sig(r.wilson_high);
    arr.push_back(std::move(row));
  }
  j["rows"] = std::move(arr);
  return j;
}

}  // namespace gcv
