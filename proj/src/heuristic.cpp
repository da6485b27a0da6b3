#include "vmra/heuristic.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

#include <fmt/format.h>

#include "vmra/response.hpp"

namespace vmra {

namespace {

bool server_fits(std::size_t vms, std::size_t users, const MixingParams& p)
{
	return fits_within(p.r_operating * static_cast<double>(vms) + r_mix(users, p), p.r_capacity);
}

// Room for one more user on the host of `vm`.
bool host_accepts_user(const ZoneAllocation& alloc, std::size_t vm, const MixingParams& p)
{
	const std::size_t host = alloc.vm_server[vm];
	return server_fits(server_vms(alloc, host), server_users(alloc, host) + 1, p);
}

// Largest user total a server holding `vms` VMs can mix.
std::size_t user_capacity(std::size_t vms, std::size_t bound, const MixingParams& p)
{
	if (!server_fits(vms, 0, p)) {
		return 0;
	}
	std::size_t lo = 0;
	std::size_t hi = bound;
	while (lo < hi) {
		const std::size_t mid = lo + (hi - lo + 1) / 2;
		if (server_fits(vms, mid, p)) {
			lo = mid;
		} else {
			hi = mid - 1;
		}
	}
	return lo;
}

// Caps overloaded servers and hands their surplus to the least-loaded
// servers, raising V_z only as far as needed.
std::optional<std::vector<std::size_t>> repair_capacity(const std::vector<std::size_t>& vm_server,
                                                        std::vector<std::size_t> counts,
                                                        const MixingParams& p)
{
	const std::size_t n = p.servers_per_zone;
	std::size_t m = 0;
	std::vector<std::size_t> vms(n, 0);
	std::vector<std::size_t> totals(n, 0);
	for (std::size_t j = 0; j < counts.size(); ++j) {
		++vms[vm_server[j]];
		totals[vm_server[j]] += counts[j];
		m += counts[j];
	}

	bool overloaded = false;
	std::vector<std::size_t> caps(n, 0);
	for (std::size_t s = 0; s < n; ++s) {
		if (vms[s] == 0) {
			continue;
		}
		caps[s] = user_capacity(vms[s], m, p);
		if (caps[s] < vms[s]) {
			return std::nullopt;
		}
		overloaded = overloaded || totals[s] > caps[s];
	}
	if (!overloaded) {
		return counts;
	}

	const auto reachable = [&](std::size_t v) {
		std::size_t sum = 0;
		for (std::size_t s = 0; s < n; ++s) {
			sum += std::min(vms[s] * v, caps[s]);
		}
		return sum;
	};
	std::size_t v = *std::max_element(counts.begin(), counts.end());
	while (v <= m && reachable(v) < m) {
		++v;
	}
	if (v > m) {
		return std::nullopt;
	}

	std::size_t assigned = 0;
	for (std::size_t s = 0; s < n; ++s) {
		totals[s] = std::min({totals[s], caps[s], vms[s] * v});
		assigned += totals[s];
	}
	for (std::size_t surplus = m - assigned; surplus > 0; --surplus) {
		std::optional<std::size_t> target;
		for (std::size_t s = 0; s < n; ++s) {
			if (vms[s] == 0 || totals[s] >= std::min(caps[s], vms[s] * v)) {
				continue;
			}
			const auto load = [&](std::size_t t) {
				return p.r_operating * static_cast<double>(vms[t]) + r_mix(totals[t], p);
			};
			if (!target || load(s) < load(*target)) {
				target = s;
			}
		}
		assert(target);
		++totals[*target];
	}

	for (std::size_t s = 0; s < n; ++s) {
		if (vms[s] == 0) {
			continue;
		}
		const auto split = rebalance(totals[s], vms[s]);
		std::size_t next = 0;
		for (std::size_t j = 0; j < counts.size(); ++j) {
			if (vm_server[j] == s) {
				counts[j] = split[next++];
			}
		}
	}
	return counts;
}

// Adds a VM on `server` and spreads all `m` users over the enlarged set.
std::optional<ZoneAllocation> grow_and_rebalance(const ZoneAllocation& alloc, std::size_t server,
                                                 std::size_t m, const MixingParams& p)
{
	ZoneAllocation next = alloc;
	next.num_users = m;
	next.vm_server.push_back(server);
	auto counts = repair_capacity(next.vm_server, rebalance(m, next.vm_server.size()), p);
	if (!counts) {
		return std::nullopt;
	}
	next.vm_users = std::move(*counts);
	if (!fits_within(zone_response_time(next.v_max(), next.vm_count(), p), p.t_qos)) {
		return std::nullopt;
	}
	return next;
}

Admission reject(HeuristicState state)
{
	state.saturated = true;
	state.max_served = state.alloc.num_users;
	return {{Phase::kRejected, std::nullopt}, std::move(state)};
}

Admission accept(HeuristicState state, Phase phase, std::optional<std::size_t> vm)
{
	state.max_served = state.alloc.num_users;
	return {{phase, vm}, std::move(state)};
}

} // namespace

std::string to_string(Phase phase)
{
	switch (phase) {
	case Phase::kReusedVm: return "reused_vm";
	case Phase::kFirstVm: return "first_vm";
	case Phase::kGrewVm: return "grew_vm";
	case Phase::kNewVmSameServer: return "new_vm_same_server";
	case Phase::kNewVmNewServer: return "new_vm_new_server";
	case Phase::kRejected: return "rejected";
	}
	return "unknown";
}

std::vector<std::size_t> rebalance(std::size_t m, std::size_t alpha)
{
	if (alpha == 0 || m < alpha) {
		throw std::domain_error(fmt::format(
			"rebalance: cannot spread {} users over {} VMs without an empty VM", m, alpha));
	}
	std::vector<std::size_t> users(alpha, 0);
	std::size_t remaining = m;
	for (std::size_t j = alpha; j >= 1; --j) {
		users[j - 1] = remaining / j;
		remaining -= users[j - 1];
	}
	assert(remaining == 0);
	assert(users.front() == (m + alpha - 1) / alpha && users.back() == m / alpha);
	return users;
}

Admission admit_one(HeuristicState state, const MixingParams& p)
{
	if (state.saturated) {
		throw std::logic_error("admit_one: the zone is saturated and admits no further users");
	}
	ZoneAllocation& alloc = state.alloc;
	const std::size_t m = alloc.num_users + 1;
	const std::size_t alpha = alloc.vm_count();

	if (alpha == 0) {
		if (!server_fits(1, 1, p) || !fits_within(zone_response_time(1, 1, p), p.t_qos)) {
			return reject(std::move(state));
		}
		alloc = ZoneAllocation::create(1, {0}, {1});
		state.used_servers = 1;
		return accept(std::move(state), Phase::kFirstVm, 0);
	}

	const std::size_t v_z = alloc.v_max();

	std::optional<std::size_t> lightest;
	for (std::size_t j = 0; j < alpha; ++j) {
		if (alloc.vm_users[j] < v_z && host_accepts_user(alloc, j, p)
		    && (!lightest || alloc.vm_users[j] < alloc.vm_users[*lightest])) {
			lightest = j;
		}
	}
	if (lightest) {
		++alloc.vm_users[*lightest];
		alloc.num_users = m;
		return accept(std::move(state), Phase::kReusedVm, lightest);
	}

	if (fits_within(zone_response_time(v_z + 1, alpha, p), p.t_qos)) {
		for (std::size_t j = 0; j < alpha; ++j) {
			if (alloc.vm_users[j] == v_z && host_accepts_user(alloc, j, p)) {
				++alloc.vm_users[j];
				alloc.num_users = m;
				return accept(std::move(state), Phase::kGrewVm, j);
			}
		}
	}

	// The rebalanced QoS test is shared by both new-VM phases.
	const std::size_t spread = (m + alpha) / (alpha + 1);
	if (!fits_within(zone_response_time(spread, alpha + 1, p), p.t_qos)) {
		return reject(std::move(state));
	}

	for (std::size_t s = 0; s < state.used_servers; ++s) {
		if (!server_fits(server_vms(alloc, s) + 1, server_users(alloc, s) + 1, p)) {
			continue;
		}
		if (auto next = grow_and_rebalance(alloc, s, m, p)) {
			alloc = std::move(*next);
			return accept(std::move(state), Phase::kNewVmSameServer, alpha);
		}
	}

	if (state.used_servers < p.servers_per_zone && server_fits(1, 1, p)) {
		if (auto next = grow_and_rebalance(alloc, state.used_servers, m, p)) {
			alloc = std::move(*next);
			++state.used_servers;
			return accept(std::move(state), Phase::kNewVmNewServer, alpha);
		}
	}

	return reject(std::move(state));
}

RunResult run_to_capacity(const MixingParams& p, std::size_t m_target)
{
	RunResult result;
	for (std::size_t m = 1; m <= m_target && !result.state.saturated; ++m) {
		auto admission = admit_one(std::move(result.state), p);
		++result.phase_counts[static_cast<std::size_t>(admission.decision.phase)];
		result.state = std::move(admission.state);
	}
	result.alpha = result.state.alloc.vm_count();
	result.users = result.state.alloc.vm_users;
	result.max_served = result.state.max_served;
	return result;
}

} // namespace vmra
