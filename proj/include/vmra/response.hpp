#ifndef VMRA_RESPONSE_HPP
#define VMRA_RESPONSE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "vmra/params.hpp"

namespace vmra {

/**
 * Fork/join mixing latency of one zone, stage by stage: VMs mix their local
 * sources in parallel, exchange results inside the data center, merge the VM
 * outputs, exchange with other zones, then merge the zone outputs. `t_wait`
 * is the time spent waiting for slower zones before the final merge.
 */
struct ResponseBreakdown
{
	Milliseconds t_local_mix;
	Milliseconds t_intra;
	Milliseconds t_vm_merge;
	Milliseconds t_wait;
	Milliseconds t_inter;
	Milliseconds t_zone_merge;

	Milliseconds total() const
	{
		return t_local_mix + t_intra + t_vm_merge + t_wait + t_inter + t_zone_merge;
	}

	friend bool operator==(const ResponseBreakdown&, const ResponseBreakdown&) = default;
};

/// Per-stage latency of a zone with `vm_count` VMs, the largest serving
/// `v_max` sources. Throws std::domain_error if either count is zero.
ResponseBreakdown zone_breakdown(std::size_t v_max, std::size_t vm_count, const MixingParams& p);

/// zone_breakdown(...).total(): the QoS-constrained response time of a zone.
Milliseconds zone_response_time(std::size_t v_max, std::size_t vm_count, const MixingParams& p);

/// The two mixing terms that differ between zones: T_mix(V_z) + T_mix(α_z).
Milliseconds local_mixing_time(std::size_t v_max, std::size_t vm_count, const MixingParams& p);

/// Time each zone waits for the slowest one: max(local) − local[z].
/// Throws std::domain_error on empty input.
std::vector<Milliseconds> cross_zone_waits(std::span<const Milliseconds> local_times);

} // namespace vmra

#endif // VMRA_RESPONSE_HPP
