#include "vmra/validate.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "vmra/response.hpp"

namespace vmra {

int equation_number(Constraint c)
{
	switch (c) {
	case Constraint::kSingleHost: return 3;
	case Constraint::kUserAssignment: return 4;
	case Constraint::kHostedIfUsed: return 5;
	case Constraint::kNonEmpty: return 6;
	case Constraint::kServerCapacity: return 13;
	case Constraint::kMaxUsers: return 14;
	case Constraint::kQos: return 15;
	}
	return 0;
}

std::string to_string(Constraint c)
{
	const char* name = "";
	switch (c) {
	case Constraint::kSingleHost: name = "single host"; break;
	case Constraint::kUserAssignment: name = "user assignment"; break;
	case Constraint::kHostedIfUsed: name = "hosted if used"; break;
	case Constraint::kNonEmpty: name = "non-empty VM"; break;
	case Constraint::kServerCapacity: name = "server capacity"; break;
	case Constraint::kMaxUsers: name = "max users"; break;
	case Constraint::kQos: name = "QoS"; break;
	}
	return fmt::format("({}) {}", equation_number(c), name);
}

ViolationReport validate_allocation(const ZoneAllocation& alloc, const MixingParams& p)
{
	ViolationReport report;
	const std::size_t n_servers = p.servers_per_zone;
	const std::size_t entries = std::max(alloc.vm_server.size(), alloc.vm_users.size());
	const auto host_of = [&](std::size_t j) {
		return j < alloc.vm_server.size() ? alloc.vm_server[j] : kUnhosted;
	};
	const auto users_of = [&](std::size_t j) {
		return j < alloc.vm_users.size() ? alloc.vm_users[j] : std::size_t{0};
	};
	// A VM with an out-of-zone host is placed, just invalidly; only (3) reports it.
	const auto hosted = [&](std::size_t j) { return host_of(j) != kUnhosted; };
	const std::size_t big_m = alloc.num_users + 1;

	for (std::size_t j = 0; j < entries; ++j) {
		const std::size_t host = host_of(j);
		if (host != kUnhosted && host >= n_servers) {
			report.push_back({Constraint::kSingleHost, std::nullopt, j,
				fmt::format("VM {} placed on server {} outside the zone's {} servers", j, host, n_servers)});
		}
	}

	std::size_t connected = 0;
	for (std::size_t j = 0; j < entries; ++j) {
		connected += users_of(j);
	}
	if (connected != alloc.num_users) {
		report.push_back({Constraint::kUserAssignment, std::nullopt, std::nullopt,
			fmt::format("VMs serve {} users but the zone has {}", connected, alloc.num_users)});
	}

	for (std::size_t j = 0; j < entries; ++j) {
		const std::size_t x = hosted(j) ? 1 : 0;
		if (users_of(j) > big_m * x) {
			report.push_back({Constraint::kHostedIfUsed, std::nullopt, j,
				fmt::format("VM {} serves {} users but is not hosted", j, users_of(j))});
		}
	}

	for (std::size_t j = 0; j < entries; ++j) {
		const std::size_t x = hosted(j) ? 1 : 0;
		if (users_of(j) < x) {
			report.push_back({Constraint::kNonEmpty, host_of(j), j,
				fmt::format("VM {} on server {} serves no users", j, host_of(j))});
		}
	}

	for (std::size_t s = 0; s < n_servers; ++s) {
		std::size_t vms = 0;
		std::size_t users = 0;
		for (std::size_t j = 0; j < entries; ++j) {
			if (host_of(j) == s) {
				++vms;
				users += users_of(j);
			}
		}
		if (vms == 0) {
			continue;
		}
		const Megabytes load = p.r_operating * static_cast<double>(vms) + r_mix(users, p);
		if (!fits_within(load, p.r_capacity)) {
			report.push_back({Constraint::kServerCapacity, s, std::nullopt,
				fmt::format("server {} needs {} MB of {} MB ({} VMs, {} users)",
					s, load.value(), p.r_capacity.value(), vms, users)});
		}
	}

	std::size_t max_users = 0;
	for (std::size_t j = 0; j < entries; ++j) {
		max_users = std::max(max_users, users_of(j));
	}
	const std::size_t v_z = alloc.declared_v_max.value_or(max_users);
	if (alloc.declared_v_max) {
		if (v_z < 1) {
			report.push_back({Constraint::kMaxUsers, std::nullopt, std::nullopt,
				"declared V_z must be at least 1"});
		}
		for (std::size_t j = 0; j < entries; ++j) {
			if (users_of(j) > v_z) {
				report.push_back({Constraint::kMaxUsers, std::nullopt, j,
					fmt::format("VM {} serves {} users, above V_z = {}", j, users_of(j), v_z)});
			}
		}
	}

	std::size_t vm_count = 0;
	for (std::size_t j = 0; j < entries; ++j) {
		vm_count += hosted(j) ? 1 : 0;
	}
	if (vm_count >= 1 && v_z >= 1) {
		const Milliseconds rt = zone_response_time(v_z, vm_count, p);
		if (!fits_within(rt, p.t_qos)) {
			report.push_back({Constraint::kQos, std::nullopt, std::nullopt,
				fmt::format("response time {} ms exceeds {} ms (V_z = {}, {} VMs)",
					rt.value(), p.t_qos.value(), v_z, vm_count)});
		}
	}

	return report;
}

std::vector<Constraint> violated_constraints(const ViolationReport& report)
{
	std::set<Constraint> seen;
	for (const auto& v : report) {
		seen.insert(v.constraint);
	}
	return {seen.begin(), seen.end()};
}

} // namespace vmra
