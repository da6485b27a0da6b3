#include "vmra/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "vmra/allocation.hpp"
#include "vmra/baselines.hpp"
#include "vmra/heuristic.hpp"

namespace vmra::harness {

namespace {

constexpr std::size_t kScanCeiling = 1'000'000;

bool qos_ok(Milliseconds rt, const MixingParams& p)
{
	return fits_within(rt, p.t_qos);
}

bool fits_server(std::size_t vms, std::size_t users, const MixingParams& p)
{
	return fits_within(p.r_operating * static_cast<double>(vms) + r_mix(users, p), p.r_capacity);
}

// Even split of m over alpha VMs, largest first, packed first-fit.
bool even_split_packs(std::size_t m, std::size_t alpha, const MixingParams& p)
{
	const std::size_t big = m % alpha;
	const std::size_t base = m / alpha;
	std::vector<std::size_t> vms(p.servers_per_zone, 0);
	std::vector<std::size_t> users(p.servers_per_zone, 0);
	for (std::size_t j = 0; j < alpha; ++j) {
		const std::size_t part = j < big ? base + 1 : base;
		bool placed = false;
		for (std::size_t s = 0; s < p.servers_per_zone && !placed; ++s) {
			if (fits_server(vms[s] + 1, users[s] + part, p)) {
				++vms[s];
				users[s] += part;
				placed = true;
			}
		}
		if (!placed) {
			return false;
		}
	}
	return true;
}

bool vmra_oracle_serves(std::size_t m, const MixingParams& p)
{
	for (std::size_t alpha = 1; alpha <= m; ++alpha) {
		const std::size_t v = (m + alpha - 1) / alpha;
		const Milliseconds rt = t_mix(v, p) + p.t_int + t_mix(alpha, p) + effective_t_ext(p) + t_mix(p.num_zones, p);
		if (qos_ok(rt, p) && even_split_packs(m, alpha, p)) {
			return true;
		}
	}
	return false;
}

bool baseline_oracle_serves(ModelTag model, std::size_t m, const MixingParams& p, std::size_t nodes)
{
	const Milliseconds shared = effective_t_ext(p) + t_mix(p.num_zones, p);
	switch (model) {
	case ModelTag::kMcu:
		return qos_ok(t_mix(m, p) + shared, p) && fits_within(r_mix(m, p), p.r_capacity);
	case ModelTag::kCmcu:
		return qos_ok(t_mix(m, p) + shared, p) && fits_server(1, m, p);
	case ModelTag::kFixedNodes: {
		const std::size_t v = (m + nodes - 1) / nodes;
		return qos_ok(t_mix(v, p) + p.t_int + t_mix(nodes, p) + shared, p) && fits_server(1, v, p);
	}
	case ModelTag::kVmra:
		break;
	}
	return false;
}

baselines::Model to_baseline(ModelTag model)
{
	switch (model) {
	case ModelTag::kMcu: return baselines::Model::kMcu;
	case ModelTag::kCmcu: return baselines::Model::kCmcu;
	default: return baselines::Model::kFixedNodes;
	}
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body)
{
	jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
	if (jobs == 1) {
		for (std::size_t i = 0; i < count; ++i) {
			body(i);
		}
		return;
	}
	std::atomic<std::size_t> next{0};
	std::exception_ptr failure;
	std::atomic<bool> failed{false};
	std::vector<std::thread> workers;
	for (std::size_t w = 0; w < jobs; ++w) {
		workers.emplace_back([&] {
			for (std::size_t i = next++; i < count; i = next++) {
				try {
					body(i);
				} catch (...) {
					if (!failed.exchange(true)) {
						failure = std::current_exception();
					}
				}
			}
		});
	}
	for (auto& t : workers) {
		t.join();
	}
	if (failure) {
		std::rethrow_exception(failure);
	}
}

ZoneOutcome run_vmra_zone(std::size_t users, const MixingParams& p)
{
	ZoneOutcome out;
	HeuristicState state;
	const double pool = p.r_capacity.value() * static_cast<double>(p.servers_per_zone);
	double sum = 0.0;
	for (std::size_t k = 1; k <= users; ++k) {
		auto admission = admit_one(std::move(state), p);
		state = std::move(admission.state);
		if (state.saturated) {
			break;
		}
		const double frac = zone_load(state.alloc, p).value() / pool;
		sum += frac;
		out.max_alloc_fraction = std::max(out.max_alloc_fraction, frac);
	}
	out.users = state.alloc.num_users;
	out.vm_count = state.alloc.vm_count();
	if (out.users > 0) {
		out.avg_alloc_fraction = sum / static_cast<double>(out.users);
		out.breakdown = zone_breakdown(state.alloc.v_max(), out.vm_count, p);
	}
	return out;
}

ZoneOutcome run_baseline_zone(ModelTag model, std::size_t users, const MixingParams& p, std::size_t nodes)
{
	ZoneOutcome out;
	out.users = users;
	if (users == 0) {
		return out;
	}
	const auto kind = to_baseline(model);
	MixingParams unbounded = p;
	unbounded.r_capacity = Megabytes(std::numeric_limits<double>::infinity());
	const double pool = baselines::resource_pool(kind, p).value();
	double sum = 0.0;
	for (std::size_t k = 1; k <= users; ++k) {
		const auto e = baselines::evaluate(kind, k, unbounded, nodes);
		if (kind == baselines::Model::kMcu) {
			if (!fits_within(r_mix(k, p), p.r_capacity)) {
				out.capacity_exceeded = true;
			}
		} else {
			const std::size_t per_mixer = kind == baselines::Model::kCmcu ? k : (k + nodes - 1) / nodes;
			if (!fits_server(1, per_mixer, p)) {
				out.capacity_exceeded = true;
			}
		}
		const double allocated = kind == baselines::Model::kMcu ? p.r_capacity.value() : e.allocated.value();
		const double frac = allocated / pool;
		sum += frac;
		out.max_alloc_fraction = std::max(out.max_alloc_fraction, frac);
	}
	out.avg_alloc_fraction = sum / static_cast<double>(users);
	out.breakdown = baselines::evaluate(kind, users, unbounded, nodes).breakdown;
	out.vm_count = kind == baselines::Model::kFixedNodes ? nodes : 1;
	return out;
}

std::size_t model_max_users(ModelTag model, const MixingParams& p, std::size_t nodes)
{
	if (model == ModelTag::kVmra) {
		return run_to_capacity(p, user_scan_bound(p) + 1).max_served;
	}
	return baselines::max_users_qos(to_baseline(model), p, nodes);
}

} // namespace

std::string to_string(ModelTag model)
{
	switch (model) {
	case ModelTag::kVmra: return "VMRA";
	case ModelTag::kMcu: return "MCU";
	case ModelTag::kCmcu: return "CMCU";
	case ModelTag::kFixedNodes: return "FixedNodes";
	}
	return "unknown";
}

std::string to_string(Scenario scenario)
{
	switch (scenario) {
	case Scenario::kMaxUsers: return "max-users";
	case Scenario::kTotalUsers: return "total-users";
	case Scenario::kMeetByAll: return "meet-by-all";
	case Scenario::kMeetBySome: return "meet-by-some";
	}
	return "unknown";
}

std::optional<ModelTag> parse_model(std::string_view text)
{
	for (auto m : {ModelTag::kVmra, ModelTag::kMcu, ModelTag::kCmcu, ModelTag::kFixedNodes}) {
		if (text == to_string(m)) {
			return m;
		}
	}
	return std::nullopt;
}

std::optional<Scenario> parse_scenario(std::string_view text)
{
	for (auto s : {Scenario::kMaxUsers, Scenario::kTotalUsers, Scenario::kMeetByAll, Scenario::kMeetBySome}) {
		if (text == to_string(s)) {
			return s;
		}
	}
	return std::nullopt;
}

void validate_config(const ScenarioConfig& cfg)
{
	validate_params(cfg.params);
	if (cfg.zone_range.empty()) {
		throw ConfigError("zone_range", "at least one zone count is required");
	}
	for (auto z : cfg.zone_range) {
		if (z == 0) {
			throw ConfigError("zone_range", "zone counts must be at least 1");
		}
	}
	if (cfg.models.empty()) {
		throw ConfigError("models", "at least one model is required");
	}
	if (cfg.fixed_nodes && *cfg.fixed_nodes == 0) {
		throw ConfigError("fixed_nodes", "at least one node is required");
	}
}

std::size_t user_scan_bound(const MixingParams& p)
{
	std::size_t v_cap = 0;
	while (v_cap < kScanCeiling && qos_ok(zone_response_time(v_cap + 1, 1, p), p)) {
		++v_cap;
	}
	std::size_t alpha_cap = 0;
	while (alpha_cap < kScanCeiling && qos_ok(zone_response_time(1, alpha_cap + 1, p), p)) {
		++alpha_cap;
	}
	// Single mixers skip the intra-zone exchange, so they may hold a few more
	// sources than one VM of the fork/join pipeline.
	std::size_t single = 0;
	while (single < kScanCeiling && qos_ok(t_mix(single + 1, p) + effective_t_ext(p) + t_mix(p.num_zones, p), p)) {
		++single;
	}
	std::size_t bound = std::max(single, std::min(kScanCeiling, v_cap * std::max<std::size_t>(alpha_cap, 1)));
	if (p.r_mix_per_source.value() > 0.0 && p.r_mix_table.empty()) {
		const auto per_server = static_cast<std::size_t>(p.r_capacity.value() / p.r_mix_per_source.value());
		bound = std::min(bound, std::max(single, per_server * p.servers_per_zone));
	}
	return std::min(bound, kScanCeiling);
}

std::size_t max_users_oracle(const MixingParams& p, ModelTag model, std::size_t fixed_nodes)
{
	const std::size_t bound = user_scan_bound(p);
	std::size_t best = 0;
	for (std::size_t m = 1; m <= bound; ++m) {
		const bool ok = model == ModelTag::kVmra ? vmra_oracle_serves(m, p)
		                                         : baseline_oracle_serves(model, m, p, fixed_nodes);
		if (ok) {
			best = m;
		}
	}
	return best;
}

std::vector<ZoneOutcome> compose_zones(ModelTag model, std::span<const std::size_t> users_per_zone,
                                       const MixingParams& p, std::size_t fixed_nodes)
{
	if (users_per_zone.size() != p.num_zones) {
		throw std::invalid_argument(fmt::format(
			"compose_zones: {} zone user counts for {} zones", users_per_zone.size(), p.num_zones));
	}
	std::vector<ZoneOutcome> zones;
	std::vector<Milliseconds> local;
	for (const auto users : users_per_zone) {
		zones.push_back(model == ModelTag::kVmra ? run_vmra_zone(users, p)
		                                         : run_baseline_zone(model, users, p, fixed_nodes));
		local.push_back(zones.back().breakdown.t_local_mix + zones.back().breakdown.t_vm_merge);
	}
	const auto waits = cross_zone_waits(local);
	for (std::size_t z = 0; z < zones.size(); ++z) {
		if (zones[z].users > 0) {
			zones[z].breakdown.t_wait = waits[z];
		}
	}
	return zones;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg)
{
	validate_config(cfg);
	const std::size_t nodes = cfg.fixed_nodes.value_or(cfg.params.servers_per_zone);

	std::vector<std::size_t> zone_counts = cfg.zone_range;
	std::sort(zone_counts.begin(), zone_counts.end());
	zone_counts.erase(std::unique(zone_counts.begin(), zone_counts.end()), zone_counts.end());
	std::vector<ModelTag> models = cfg.models;
	std::sort(models.begin(), models.end());
	models.erase(std::unique(models.begin(), models.end()), models.end());

	// Every model's QoS-bounded maximum per zone count, VMRA always included
	// because Meet-By-Some is anchored on it.
	std::vector<ModelTag> bound_models = models;
	if (!std::binary_search(bound_models.begin(), bound_models.end(), ModelTag::kVmra)) {
		bound_models.insert(bound_models.begin(), ModelTag::kVmra);
	}
	const std::size_t nz = zone_counts.size();
	std::vector<std::size_t> maxima(bound_models.size() * nz, 0);
	parallel_for(maxima.size(), cfg.jobs, [&](std::size_t k) {
		const auto model = bound_models[k / nz];
		maxima[k] = model_max_users(model, with_zones(cfg.params, zone_counts[k % nz]), nodes);
	});
	const auto max_of = [&](ModelTag model, std::size_t zi) {
		const auto pos = std::find(bound_models.begin(), bound_models.end(), model) - bound_models.begin();
		return maxima[static_cast<std::size_t>(pos) * nz + zi];
	};

	ScenarioResult result;
	result.scenario = cfg.scenario;
	result.cells.resize(models.size() * nz);
	parallel_for(result.cells.size(), cfg.jobs, [&](std::size_t k) {
		const ModelTag model = models[k / nz];
		const std::size_t zi = k % nz;
		const std::size_t zones = zone_counts[zi];
		const MixingParams p = with_zones(cfg.params, zones);

		std::size_t per_zone = 0;
		switch (cfg.scenario) {
		case Scenario::kMaxUsers:
		case Scenario::kTotalUsers:
			per_zone = max_of(model, zi);
			break;
		case Scenario::kMeetByAll:
			per_zone = std::numeric_limits<std::size_t>::max();
			for (auto m : models) {
				per_zone = std::min(per_zone, max_of(m, zi));
			}
			break;
		case Scenario::kMeetBySome:
			per_zone = max_of(ModelTag::kVmra, zi);
			break;
		}
		std::vector<std::size_t> users(zones, per_zone);
		const bool meet = cfg.scenario == Scenario::kMeetByAll || cfg.scenario == Scenario::kMeetBySome;
		if (meet && cfg.zone_users.size() == zones) {
			users = cfg.zone_users;
		}

		const auto outcomes = compose_zones(model, users, p, nodes);
		CellResult cell;
		cell.model = model;
		cell.zones = zones;
		double response = 0.0;
		double ratio = 0.0;
		double avg_alloc = 0.0;
		for (const auto& z : outcomes) {
			cell.max_users_per_zone = std::max(cell.max_users_per_zone, z.users);
			cell.total_users += z.users;
			cell.vm_count = std::max(cell.vm_count, z.vm_count);
			cell.capacity_exceeded = cell.capacity_exceeded || z.capacity_exceeded;
			cell.max_alloc_fraction = std::max(cell.max_alloc_fraction, z.max_alloc_fraction);
			avg_alloc += z.avg_alloc_fraction;
			const double rt = z.breakdown.total().value();
			response += rt;
			if (rt > 0.0 && !fits_within(z.breakdown.total(), p.t_qos)) {
				ratio += (rt - p.t_qos.value()) / rt;
			}
		}
		const double count = static_cast<double>(outcomes.size());
		cell.avg_alloc_fraction = avg_alloc / count;
		cell.avg_response_ms = response / count;
		cell.violation_ratio = ratio / count;
		if (!meet) {
			cell.oracle_max_users = max_users_oracle(p, model, nodes);
		}
		result.cells[k] = cell;
	});
	return result;
}

} // namespace vmra::harness
