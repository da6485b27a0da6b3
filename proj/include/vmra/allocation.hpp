#ifndef VMRA_ALLOCATION_HPP
#define VMRA_ALLOCATION_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "vmra/params.hpp"

namespace vmra {

/// Host index of a VM that is not placed on any server.
inline constexpr std::size_t kUnhosted = std::numeric_limits<std::size_t>::max();

/**
 * Placement state of one zone.
 *
 * Entry j describes VM j: `vm_server[j]` is its host and `vm_users[j]` the
 * number of sources connected to it. Users are interchangeable, so only the
 * counts are kept. The aggregate is deliberately unchecked so that invalid
 * states can be represented and reported by validate_allocation();
 * `create()` is the checked constructor.
 */
struct ZoneAllocation
{
	std::size_t num_users = 0;
	std::vector<std::size_t> vm_server;
	std::vector<std::size_t> vm_users;
	// Explicit V_z. When absent, V_z is max(vm_users).
	std::optional<std::size_t> declared_v_max;

	/// Throws std::invalid_argument on mismatched lengths, an empty VM, or
	/// counts that do not add up to `num_users`.
	static ZoneAllocation create(std::size_t num_users,
	                             std::vector<std::size_t> vm_server,
	                             std::vector<std::size_t> vm_users);

	std::size_t vm_count() const { return vm_users.size(); }

	/// Effective V_z; 0 for an allocation without users.
	std::size_t v_max() const;

	/// Number of distinct hosts in use.
	std::size_t servers_used() const;

	friend bool operator==(const ZoneAllocation&, const ZoneAllocation&) = default;
};

/// R_O·(VMs on server) + R_mix(users on server). Throws std::domain_error if
/// `server` is outside the zone.
Megabytes server_load(const ZoneAllocation& alloc, std::size_t server, const MixingParams& p);

/// Sum of server_load over all servers of the zone.
Megabytes zone_load(const ZoneAllocation& alloc, const MixingParams& p);

/// Users hosted on `server`.
std::size_t server_users(const ZoneAllocation& alloc, std::size_t server);

/// VMs hosted on `server`.
std::size_t server_vms(const ZoneAllocation& alloc, std::size_t server);

} // namespace vmra

#endif // VMRA_ALLOCATION_HPP
