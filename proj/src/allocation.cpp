#include "vmra/allocation.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace vmra {

ZoneAllocation ZoneAllocation::create(std::size_t num_users,
                                      std::vector<std::size_t> vm_server,
                                      std::vector<std::size_t> vm_users)
{
	if (vm_server.size() != vm_users.size()) {
		throw std::invalid_argument(fmt::format(
			"allocation: {} host entries for {} VMs", vm_server.size(), vm_users.size()));
	}
	for (std::size_t j = 0; j < vm_users.size(); ++j) {
		if (vm_users[j] == 0) {
			throw std::invalid_argument(fmt::format("allocation: VM {} has no users", j));
		}
	}
	const auto total = std::accumulate(vm_users.begin(), vm_users.end(), std::size_t{0});
	if (total != num_users) {
		throw std::invalid_argument(fmt::format(
			"allocation: VMs serve {} users, expected {}", total, num_users));
	}
	return ZoneAllocation{num_users, std::move(vm_server), std::move(vm_users), std::nullopt};
}

std::size_t ZoneAllocation::v_max() const
{
	if (declared_v_max) {
		return *declared_v_max;
	}
	return vm_users.empty() ? 0 : *std::max_element(vm_users.begin(), vm_users.end());
}

std::size_t ZoneAllocation::servers_used() const
{
	std::set<std::size_t> hosts;
	for (std::size_t j = 0; j < vm_server.size(); ++j) {
		if (vm_server[j] != kUnhosted) {
			hosts.insert(vm_server[j]);
		}
	}
	return hosts.size();
}

std::size_t server_users(const ZoneAllocation& alloc, std::size_t server)
{
	std::size_t users = 0;
	const std::size_t n = std::min(alloc.vm_server.size(), alloc.vm_users.size());
	for (std::size_t j = 0; j < n; ++j) {
		if (alloc.vm_server[j] == server) {
			users += alloc.vm_users[j];
		}
	}
	return users;
}

std::size_t server_vms(const ZoneAllocation& alloc, std::size_t server)
{
	return static_cast<std::size_t>(std::count(alloc.vm_server.begin(), alloc.vm_server.end(), server));
}

Megabytes server_load(const ZoneAllocation& alloc, std::size_t server, const MixingParams& p)
{
	if (server >= p.servers_per_zone) {
		throw std::domain_error(fmt::format(
			"server_load: server {} outside zone of {} servers", server, p.servers_per_zone));
	}
	const std::size_t vms = server_vms(alloc, server);
	if (vms == 0) {
		return Megabytes(0.0);
	}
	return p.r_operating * static_cast<double>(vms) + r_mix(server_users(alloc, server), p);
}

Megabytes zone_load(const ZoneAllocation& alloc, const MixingParams& p)
{
	Megabytes total(0.0);
	for (std::size_t s = 0; s < p.servers_per_zone; ++s) {
		total += server_load(alloc, s, p);
	}
	return total;
}

} // namespace vmra
