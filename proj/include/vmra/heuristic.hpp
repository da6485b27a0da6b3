#ifndef VMRA_HEURISTIC_HPP
#define VMRA_HEURISTIC_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vmra/allocation.hpp"
#include "vmra/params.hpp"

namespace vmra {

/// How an arrival was handled.
enum class Phase
{
	kReusedVm,         // joined a VM below V_z
	kFirstVm,          // created the zone's first VM
	kGrewVm,           // joined a VM at V_z, raising V_z by one
	kNewVmSameServer,  // new VM on a server already in use, users rebalanced
	kNewVmNewServer,   // new VM on a fresh server, users rebalanced
	kRejected,         // QoS or capacity cannot be met; the zone is saturated
};

inline constexpr std::size_t kPhaseCount = 6;

std::string to_string(Phase phase);

struct Decision
{
	Phase phase;
	std::optional<std::size_t> vm;  // VM that received the user, when meaningful
};

struct HeuristicState
{
	ZoneAllocation alloc;
	std::size_t used_servers = 0;
	std::size_t max_served = 0;
	bool saturated = false;

	friend bool operator==(const HeuristicState&, const HeuristicState&) = default;
};

struct Admission
{
	Decision decision;
	HeuristicState state;
};

/**
 * Admits arrival number `state.alloc.num_users + 1`.
 *
 * Tries, in order: first VM of an empty zone; joining the least-loaded VM
 * below V_z; growing V_z in place; a new VM on a used server; a new VM on
 * the next unused server. The last two rebalance every user evenly and then
 * repair per-server capacity. If none works the arrival is rejected and the
 * state is saturated for good.
 *
 * Throws std::logic_error when called on a saturated state.
 */
Admission admit_one(HeuristicState state, const MixingParams& p);

/// Even split of m users over `alpha` VMs, largest first. Throws
/// std::domain_error when m < alpha (a VM would be empty).
std::vector<std::size_t> rebalance(std::size_t m, std::size_t alpha);

struct RunResult
{
	std::size_t alpha = 0;
	std::vector<std::size_t> users;
	std::size_t max_served = 0;
	HeuristicState state;
	std::array<std::size_t, kPhaseCount> phase_counts{};
};

/// Feeds arrivals 1..m_target through admit_one, stopping at saturation.
RunResult run_to_capacity(const MixingParams& p, std::size_t m_target);

} // namespace vmra

#endif // VMRA_HEURISTIC_HPP
