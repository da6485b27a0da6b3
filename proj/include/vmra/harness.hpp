#ifndef VMRA_HARNESS_HPP
#define VMRA_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vmra/params.hpp"
#include "vmra/response.hpp"

namespace vmra::harness {

/// Declaration order is the result ordering.
enum class ModelTag { kVmra, kMcu, kCmcu, kFixedNodes };

enum class Scenario { kMaxUsers, kTotalUsers, kMeetByAll, kMeetBySome };

std::string to_string(ModelTag model);
std::string to_string(Scenario scenario);   // "max-users", "meet-by-all", ...
std::optional<ModelTag> parse_model(std::string_view text);
std::optional<Scenario> parse_scenario(std::string_view text);

struct ScenarioConfig
{
	MixingParams params = default_params();
	std::vector<std::size_t> zone_range{1, 2, 3, 4, 5, 6};
	Scenario scenario = Scenario::kMaxUsers;
	std::vector<ModelTag> models{ModelTag::kVmra, ModelTag::kMcu, ModelTag::kCmcu, ModelTag::kFixedNodes};
	std::uint64_t seed = 0;  // reserved: every model here is deterministic
	std::optional<std::size_t> fixed_nodes;  // defaults to servers_per_zone
	// Per-zone user counts for asymmetric studies; applied to the Meet-By-*
	// cells whose zone count equals its length.
	std::vector<std::size_t> zone_users;
	std::size_t jobs = 1;
};

/// Throws ConfigError on an empty zone range or model list, a zero zone
/// count, or invalid parameters.
void validate_config(const ScenarioConfig& cfg);

struct CellResult
{
	ModelTag model;
	std::size_t zones = 0;
	std::size_t max_users_per_zone = 0;
	std::size_t total_users = 0;
	double avg_alloc_fraction = 0.0;
	double max_alloc_fraction = 0.0;
	double avg_response_ms = 0.0;
	double violation_ratio = 0.0;
	std::size_t vm_count = 0;
	bool capacity_exceeded = false;
	std::optional<std::size_t> oracle_max_users;  // max-users style cells only
};

struct ScenarioResult
{
	Scenario scenario = Scenario::kMaxUsers;
	std::vector<CellResult> cells;
};

/**
 * Exhaustive, heuristic-independent bound on the users one zone can serve.
 *
 * VMRA: the largest m for which some VM count α gives an even split within
 * the QoS threshold and that split first-fits onto the zone's servers.
 * Baselines: the largest m the model's closed form serves within QoS and
 * capacity.
 */
std::size_t max_users_oracle(const MixingParams& p, ModelTag model, std::size_t fixed_nodes);

/// Upper bound on the users any model can serve in one zone, used to cap
/// scans.
std::size_t user_scan_bound(const MixingParams& p);

/// Outcome of one zone after its users arrived one by one.
struct ZoneOutcome
{
	std::size_t users = 0;   // users actually served
	std::size_t vm_count = 0;
	ResponseBreakdown breakdown;  // includes the cross-zone wait
	double avg_alloc_fraction = 0.0;  // mean over arrivals 1..users
	double max_alloc_fraction = 0.0;
	bool capacity_exceeded = false;
};

/// Runs `model` in every zone (p.num_zones must equal users_per_zone.size())
/// and adds the wait each zone spends on the slowest one.
std::vector<ZoneOutcome> compose_zones(ModelTag model, std::span<const std::size_t> users_per_zone,
                                       const MixingParams& p, std::size_t fixed_nodes);

ScenarioResult run_scenario(const ScenarioConfig& cfg);

} // namespace vmra::harness

#endif // VMRA_HARNESS_HPP
