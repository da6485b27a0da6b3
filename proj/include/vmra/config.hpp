#ifndef VMRA_CONFIG_HPP
#define VMRA_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vmra/harness.hpp"
#include "vmra/params.hpp"

namespace vmra {

/// Malformed configuration document: bad JSON, wrong types, unknown keys.
/// Syntax errors carry a 1-based line and column.
class ConfigParseError : public std::runtime_error
{
public:
	ConfigParseError(const std::string& message, std::optional<std::size_t> line = std::nullopt,
	                 std::optional<std::size_t> column = std::nullopt);

	std::optional<std::size_t> line() const { return line_; }
	std::optional<std::size_t> column() const { return column_; }

private:
	std::optional<std::size_t> line_;
	std::optional<std::size_t> column_;
};

/// Config file could not be read.
class ConfigReadError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

struct ScenarioSettings
{
	std::vector<std::size_t> zone_range{1, 2, 3, 4, 5, 6};
	std::vector<harness::ModelTag> models{harness::ModelTag::kVmra, harness::ModelTag::kMcu,
	                                      harness::ModelTag::kCmcu, harness::ModelTag::kFixedNodes};
	std::uint64_t seed = 0;
	std::optional<std::size_t> fixed_nodes;
	std::vector<std::size_t> zone_users;

	friend bool operator==(const ScenarioSettings&, const ScenarioSettings&) = default;
};

struct CliConfig
{
	MixingParams params = default_params();
	ScenarioSettings scenario;
	std::filesystem::path output_dir = "results";

	harness::ScenarioConfig scenario_config(harness::Scenario which, std::size_t jobs) const;

	friend bool operator==(const CliConfig&, const CliConfig&) = default;
};

/// Parses a JSON document. Missing keys take the default_params() values; unknown
/// keys are rejected. Throws ConfigParseError. Parameter invariants are not
/// checked here (see validate_params).
CliConfig parse_config(std::string_view text);

/// Reads and parses a file. Throws ConfigReadError or ConfigParseError.
CliConfig load_config(const std::filesystem::path& path);

/// Every field written out explicitly; parse_config(to_json(c)) == c.
std::string to_json(const CliConfig& config);

} // namespace vmra

#endif // VMRA_CONFIG_HPP
