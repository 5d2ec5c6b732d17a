#ifndef GCV_IO_HPP
#define GCV_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcv/data_matrix.hpp"
#include "gcv/evaluation.hpp"
#include "gcv/gabriel.hpp"
#include "gcv/kmeans.hpp"
#include "gcv/simgen.hpp"

namespace gcv {

/// Six significant digits; the format every CLI-facing writer uses.
std::string format_sig(double x);
/// Round to six significant digits (for values embedded in JSON).
double round_sig(double x);

/// CSV data files: comma separated, header row optional (auto-detected),
/// `NA` marks a missing entry, ragged rows are rejected.
DataMatrix read_csv(std::istream& in);
DataMatrix read_csv_file(const std::string& path);
void write_csv(const DataMatrix& data, std::ostream& out);
void write_csv_file(const DataMatrix& data, const std::string& path);

/// Long-format fold errors: columns (k, fold_r, fold_s, cv_error), preceded
/// by a `# seed=...` comment so persisted output pins its seed.
void write_cv_report_csv(const CvReport& report, std::uint64_t seed, std::ostream& out);
nlohmann::ordered_json cv_report_json(const CvReport& report, std::uint64_t seed);

nlohmann::ordered_json kmeans_model_json(const KMeansModel& model);
KMeansModel kmeans_model_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json simspec_json(const SimSpec& spec);
SimSpec simspec_from_json(const nlohmann::ordered_json& j);
SimSpec read_simspec_file(const std::string& path);

/// Columns (method, setting, param, correct, total, wilson_low, wilson_high).
void write_summary_csv(const std::vector<MethodSummary>& rows, std::uint64_t seed,
                       std::ostream& out);
nlohmann::ordered_json summary_json(const std::vector<MethodSummary>& rows,
                                    std::uint64_t seed);

}  // namespace gcv

#endif  // GCV_IO_HPP
