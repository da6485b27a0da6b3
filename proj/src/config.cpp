#include "vmra/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

namespace vmra {

using nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte)
{
	std::size_t line = 1;
	std::size_t column = 1;
	// nlohmann reports the 1-based position of the last byte read.
	const std::size_t stop = byte == 0 ? 0 : std::min(byte - 1, text.size());
	for (std::size_t i = 0; i < stop; ++i) {
		if (text[i] == '\n') {
			++line;
			column = 1;
		} else {
			++column;
		}
	}
	return {line, column};
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> known)
{
	const std::set<std::string> allowed(known.begin(), known.end());
	for (const auto& [key, _] : obj.items()) {
		if (!allowed.count(key)) {
			throw ConfigParseError(fmt::format("unknown key '{}{}'", where, key));
		}
	}
}

const json& expect_object(const json& value, const std::string& where)
{
	if (!value.is_object()) {
		throw ConfigParseError(fmt::format("'{}' must be an object", where));
	}
	return value;
}

double read_number(const json& obj, const char* key, const std::string& where, double fallback)
{
	if (!obj.contains(key)) {
		return fallback;
	}
	const auto& v = obj.at(key);
	if (!v.is_number()) {
		throw ConfigParseError(fmt::format("'{}{}' must be a number", where, key));
	}
	return v.get<double>();
}

std::size_t read_count(const json& v, const std::string& what)
{
	if (!v.is_number_unsigned()) {
		throw ConfigParseError(fmt::format("'{}' must be a non-negative integer", what));
	}
	return v.get<std::size_t>();
}

std::vector<std::size_t> read_counts(const json& v, const std::string& what)
{
	if (!v.is_array()) {
		throw ConfigParseError(fmt::format("'{}' must be an array of integers", what));
	}
	std::vector<std::size_t> out;
	for (const auto& item : v) {
		out.push_back(read_count(item, what));
	}
	return out;
}

std::vector<double> read_table(const json& v, const std::string& what)
{
	if (!v.is_array()) {
		throw ConfigParseError(fmt::format("'{}' must be an array of numbers", what));
	}
	std::vector<double> out;
	for (const auto& item : v) {
		if (!item.is_number()) {
			throw ConfigParseError(fmt::format("'{}' must be an array of numbers", what));
		}
		out.push_back(item.get<double>());
	}
	return out;
}

MixingParams read_params(const json& obj)
{
	expect_object(obj, "params");
	reject_unknown(obj, "params.", {"num_zones", "servers_per_zone", "t_int", "t_ext", "t_mix_slope",
		"r_mix_per_source", "r_operating", "r_capacity", "t_qos"});
	MixingParams p = default_params();
	if (obj.contains("num_zones")) {
		p.num_zones = read_count(obj.at("num_zones"), "params.num_zones");
	}
	if (obj.contains("servers_per_zone")) {
		p.servers_per_zone = read_count(obj.at("servers_per_zone"), "params.servers_per_zone");
	}
	p.t_int = Milliseconds(read_number(obj, "t_int", "params.", p.t_int.value()));
	p.t_ext = Milliseconds(read_number(obj, "t_ext", "params.", p.t_ext.value()));
	p.t_mix_slope = Milliseconds(read_number(obj, "t_mix_slope", "params.", p.t_mix_slope.value()));
	p.r_mix_per_source = Megabytes(read_number(obj, "r_mix_per_source", "params.", p.r_mix_per_source.value()));
	p.r_operating = Megabytes(read_number(obj, "r_operating", "params.", p.r_operating.value()));
	p.r_capacity = Megabytes(read_number(obj, "r_capacity", "params.", p.r_capacity.value()));
	p.t_qos = Milliseconds(read_number(obj, "t_qos", "params.", p.t_qos.value()));
	return p;
}

ScenarioSettings read_scenario(const json& obj)
{
	expect_object(obj, "scenario");
	reject_unknown(obj, "scenario.", {"zone_range", "models", "seed", "fixed_nodes", "zone_users"});
	ScenarioSettings s;
	if (obj.contains("zone_range")) {
		s.zone_range = read_counts(obj.at("zone_range"), "scenario.zone_range");
	}
	if (obj.contains("models")) {
		const auto& models = obj.at("models");
		if (!models.is_array()) {
			throw ConfigParseError("'scenario.models' must be an array of model names");
		}
		s.models.clear();
		for (const auto& m : models) {
			const auto tag = m.is_string() ? harness::parse_model(m.get<std::string>()) : std::nullopt;
			if (!tag) {
				throw ConfigParseError(fmt::format(
					"'scenario.models' entry {} is not one of VMRA, MCU, CMCU, FixedNodes", m.dump()));
			}
			s.models.push_back(*tag);
		}
	}
	if (obj.contains("seed")) {
		const auto& seed = obj.at("seed");
		if (!seed.is_number_unsigned()) {
			throw ConfigParseError("'scenario.seed' must be a non-negative integer");
		}
		s.seed = seed.get<std::uint64_t>();
	}
	if (obj.contains("fixed_nodes") && !obj.at("fixed_nodes").is_null()) {
		s.fixed_nodes = read_count(obj.at("fixed_nodes"), "scenario.fixed_nodes");
	}
	if (obj.contains("zone_users")) {
		s.zone_users = read_counts(obj.at("zone_users"), "scenario.zone_users");
	}
	return s;
}

} // namespace

ConfigParseError::ConfigParseError(const std::string& message, std::optional<std::size_t> line,
                                   std::optional<std::size_t> column)
: std::runtime_error(line ? fmt::format("line {}, column {}: {}", *line, column.value_or(0), message) : message),
  line_(line),
  column_(column)
{
}

harness::ScenarioConfig CliConfig::scenario_config(harness::Scenario which, std::size_t jobs) const
{
	harness::ScenarioConfig cfg;
	cfg.params = params;
	cfg.zone_range = scenario.zone_range;
	cfg.scenario = which;
	cfg.models = scenario.models;
	cfg.seed = scenario.seed;
	cfg.fixed_nodes = scenario.fixed_nodes;
	cfg.zone_users = scenario.zone_users;
	cfg.jobs = jobs;
	return cfg;
}

CliConfig parse_config(std::string_view text)
{
	json doc;
	try {
		doc = json::parse(text.begin(), text.end());
	} catch (const json::parse_error& e) {
		const auto [line, column] = line_column(text, e.byte);
		std::string what = e.what();
		const auto colon = what.find("error: ");
		throw ConfigParseError(colon == std::string::npos ? what : what.substr(colon + 7), line, column);
	}
	expect_object(doc, "<root>");
	reject_unknown(doc, "", {"params", "t_mix_table", "r_mix_table", "scenario", "output_dir"});

	CliConfig cfg;
	if (doc.contains("params")) {
		cfg.params = read_params(doc.at("params"));
	}
	if (doc.contains("t_mix_table")) {
		cfg.params.t_mix_table = read_table(doc.at("t_mix_table"), "t_mix_table");
	}
	if (doc.contains("r_mix_table")) {
		cfg.params.r_mix_table = read_table(doc.at("r_mix_table"), "r_mix_table");
	}
	if (doc.contains("scenario")) {
		cfg.scenario = read_scenario(doc.at("scenario"));
	}
	if (doc.contains("output_dir")) {
		if (!doc.at("output_dir").is_string()) {
			throw ConfigParseError("'output_dir' must be a string");
		}
		cfg.output_dir = doc.at("output_dir").get<std::string>();
	}
	return cfg;
}

CliConfig load_config(const std::filesystem::path& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw ConfigReadError(fmt::format("cannot read config file {}", path.string()));
	}
	std::ostringstream buf;
	buf << in.rdbuf();
	return parse_config(buf.str());
}

std::string to_json(const CliConfig& config)
{
	const auto& p = config.params;
	json doc = json::object();
	doc["params"] = {
		{"num_zones", p.num_zones},
		{"servers_per_zone", p.servers_per_zone},
		{"t_int", p.t_int.value()},
		{"t_ext", p.t_ext.value()},
		{"t_mix_slope", p.t_mix_slope.value()},
		{"r_mix_per_source", p.r_mix_per_source.value()},
		{"r_operating", p.r_operating.value()},
		{"r_capacity", p.r_capacity.value()},
		{"t_qos", p.t_qos.value()},
	};
	if (!p.t_mix_table.empty()) {
		doc["t_mix_table"] = p.t_mix_table;
	}
	if (!p.r_mix_table.empty()) {
		doc["r_mix_table"] = p.r_mix_table;
	}
	json models = json::array();
	for (auto m : config.scenario.models) {
		models.push_back(harness::to_string(m));
	}
	doc["scenario"] = {
		{"zone_range", config.scenario.zone_range},
		{"models", models},
		{"seed", config.scenario.seed},
		{"fixed_nodes", config.scenario.fixed_nodes ? json(*config.scenario.fixed_nodes) : json(nullptr)},
		{"zone_users", config.scenario.zone_users},
	};
	doc["output_dir"] = config.output_dir.string();
	return doc.dump(2) + "\n";
}

} // namespace vmra
