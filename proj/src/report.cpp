#include "vmra/report.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "vmra/svg.hpp"

namespace vmra::harness {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(std::string_view line, char sep)
{
	std::vector<std::string> fields;
	std::string cur;
	for (char ch : line) {
		if (ch == sep) {
			fields.push_back(cur);
			cur.clear();
		} else if (ch != '\r') {
			cur += ch;
		}
	}
	fields.push_back(cur);
	return fields;
}

template <typename Get>
svg::Chart chart_by_model(const std::vector<CsvRow>& rows, std::string title, std::string y_label, Get get)
{
	std::map<std::string, svg::Series> by_model;
	std::vector<std::string> order;
	for (const auto& r : rows) {
		if (!by_model.count(r.model)) {
			order.push_back(r.model);
			by_model[r.model].name = r.model;
		}
		by_model[r.model].points.emplace_back(static_cast<double>(r.zones), get(r));
	}
	svg::Chart chart{std::move(title), "Number of zones", std::move(y_label), {}};
	for (const auto& name : order) {
		chart.series.push_back(by_model[name]);
	}
	return chart;
}

std::vector<svg::Chart> figure(Scenario scenario, std::size_t index, const std::vector<CsvRow>& rows)
{
	switch (scenario) {
	case Scenario::kMaxUsers:
		return {chart_by_model(rows, "Maximum users served in a zone", "Users per zone",
			[](const CsvRow& r) { return static_cast<double>(r.max_users); })};
	case Scenario::kTotalUsers:
		return {chart_by_model(rows, "Total users served across zones", "Users",
			[](const CsvRow& r) { return static_cast<double>(r.total_users); })};
	case Scenario::kMeetByAll:
	case Scenario::kMeetBySome: {
		const std::string tag = scenario == Scenario::kMeetByAll ? "Meet-By-All" : "Meet-By-Some";
		if (index == 0) {
			return {
				chart_by_model(rows, "(a) Average allocated resources, " + tag, "Fraction of data center",
					[](const CsvRow& r) { return r.avg_alloc_frac; }),
				chart_by_model(rows, "(b) Maximum allocated resources, " + tag, "Fraction of data center",
					[](const CsvRow& r) { return r.max_alloc_frac; }),
			};
		}
		return {chart_by_model(rows, "Average mixing response time, " + tag, "Milliseconds",
			[](const CsvRow& r) { return r.avg_response_ms; })};
	}
	}
	return {};
}

void write_file(const fs::path& path, const std::string& content)
{
	std::ofstream out(path, std::ios::binary | std::ios::trunc);
	if (!out) {
		throw OutputError(fmt::format("cannot open {} for writing", path.string()));
	}
	out << content;
	out.flush();
	if (!out) {
		throw OutputError(fmt::format("failed writing {}", path.string()));
	}
}

} // namespace

std::string to_csv(const ScenarioResult& result)
{
	std::string out(kCsvHeader);
	out += '\n';
	for (const auto& c : result.cells) {
		out += fmt::format("{},{},{},{},{:.6f},{:.6f},{:.3f},{:.6f}\n",
			to_string(c.model), c.zones, c.max_users_per_zone, c.total_users,
			c.avg_alloc_fraction, c.max_alloc_fraction, c.avg_response_ms, c.violation_ratio);
	}
	return out;
}

std::vector<CsvRow> parse_csv(std::string_view text)
{
	std::vector<CsvRow> rows;
	std::istringstream in{std::string(text)};
	std::string line;
	if (!std::getline(in, line) || split(line, ',') != split(kCsvHeader, ',')) {
		throw std::invalid_argument("parse_csv: missing or unexpected header");
	}
	std::size_t lineno = 1;
	while (std::getline(in, line)) {
		++lineno;
		if (line.empty()) {
			continue;
		}
		const auto f = split(line, ',');
		if (f.size() != 8) {
			throw std::invalid_argument(fmt::format("parse_csv: line {} has {} fields", lineno, f.size()));
		}
		try {
			rows.push_back({f[0], std::stoul(f[1]), std::stoul(f[2]), std::stoul(f[3]),
				std::stod(f[4]), std::stod(f[5]), std::stod(f[6]), std::stod(f[7])});
		} catch (const std::logic_error&) {
			throw std::invalid_argument(fmt::format("parse_csv: line {} is not numeric", lineno));
		}
	}
	return rows;
}

std::string csv_file_name(Scenario scenario)
{
	switch (scenario) {
	case Scenario::kMaxUsers: return "fig4.csv";
	case Scenario::kTotalUsers: return "fig5.csv";
	case Scenario::kMeetByAll: return "fig6_fig7.csv";
	case Scenario::kMeetBySome: return "fig8_fig9.csv";
	}
	return "results.csv";
}

std::vector<std::string> figure_file_names(Scenario scenario)
{
	switch (scenario) {
	case Scenario::kMaxUsers: return {"fig4.svg"};
	case Scenario::kTotalUsers: return {"fig5.svg"};
	case Scenario::kMeetByAll: return {"fig6.svg", "fig7.svg"};
	case Scenario::kMeetBySome: return {"fig8.svg", "fig9.svg"};
	}
	return {};
}

std::vector<fs::path> emit_results(const ScenarioResult& result, const fs::path& out_dir)
{
	std::error_code ec;
	fs::create_directories(out_dir, ec);
	if (ec || !fs::is_directory(out_dir)) {
		throw OutputError(fmt::format("cannot create output directory {}: {}", out_dir.string(),
			ec ? ec.message() : "not a directory"));
	}
	std::vector<fs::path> written;
	const std::string csv = to_csv(result);
	written.push_back(out_dir / csv_file_name(result.scenario));
	write_file(written.back(), csv);

	const auto rows = parse_csv(csv);
	const auto names = figure_file_names(result.scenario);
	for (std::size_t i = 0; i < names.size(); ++i) {
		written.push_back(out_dir / names[i]);
		write_file(written.back(), svg::render(figure(result.scenario, i, rows)));
	}
	return written;
}

} // namespace vmra::harness
