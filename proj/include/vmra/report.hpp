#ifndef VMRA_REPORT_HPP
#define VMRA_REPORT_HPP

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vmra/harness.hpp"

namespace vmra::harness {

inline constexpr std::string_view kCsvHeader =
	"model,Z,max_users,total_users,avg_alloc_frac,max_alloc_frac,avg_response_ms,violation_ratio";

/// Filesystem failure while writing results; the message carries the path.
class OutputError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

struct CsvRow
{
	std::string model;
	std::size_t zones = 0;
	std::size_t max_users = 0;
	std::size_t total_users = 0;
	double avg_alloc_frac = 0.0;
	double max_alloc_frac = 0.0;
	double avg_response_ms = 0.0;
	double violation_ratio = 0.0;
};

/// Header plus one row per cell, in the result's order.
std::string to_csv(const ScenarioResult& result);

/// Inverse of to_csv (at the printed precision). Throws std::invalid_argument
/// on a malformed document.
std::vector<CsvRow> parse_csv(std::string_view text);

/// "fig4.csv", "fig5.csv", "fig6_fig7.csv", "fig8_fig9.csv".
std::string csv_file_name(Scenario scenario);

/// SVG figures derived from a scenario's CSV.
std::vector<std::string> figure_file_names(Scenario scenario);

/// Writes the CSV and its figures into `out_dir` (created if missing) and
/// returns the written paths. Throws OutputError.
std::vector<std::filesystem::path> emit_results(const ScenarioResult& result,
                                                const std::filesystem::path& out_dir);

} // namespace vmra::harness

#endif // VMRA_REPORT_HPP
