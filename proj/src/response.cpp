#include "vmra/response.hpp"

#include <algorithm>
#include <stdexcept>

namespace vmra {

ResponseBreakdown zone_breakdown(std::size_t v_max, std::size_t vm_count, const MixingParams& p)
{
	if (v_max == 0 || vm_count == 0) {
		throw std::domain_error("zone_response_time: a zone needs at least one VM with one source");
	}
	ResponseBreakdown b;
	b.t_local_mix = t_mix(v_max, p);
	b.t_intra = p.t_int;
	b.t_vm_merge = t_mix(vm_count, p);
	b.t_wait = Milliseconds(0.0);
	b.t_inter = effective_t_ext(p);
	b.t_zone_merge = t_mix(p.num_zones, p);
	return b;
}

Milliseconds zone_response_time(std::size_t v_max, std::size_t vm_count, const MixingParams& p)
{
	return zone_breakdown(v_max, vm_count, p).total();
}

Milliseconds local_mixing_time(std::size_t v_max, std::size_t vm_count, const MixingParams& p)
{
	return t_mix(v_max, p) + t_mix(vm_count, p);
}

std::vector<Milliseconds> cross_zone_waits(std::span<const Milliseconds> local_times)
{
	if (local_times.empty()) {
		throw std::domain_error("cross_zone_waits: at least one zone is required");
	}
	const Milliseconds slowest = *std::max_element(local_times.begin(), local_times.end());
	std::vector<Milliseconds> waits;
	waits.reserve(local_times.size());
	for (const Milliseconds local : local_times) {
		waits.push_back(std::max(Milliseconds(0.0), slowest - local));
	}
	return waits;
}

} // namespace vmra
