#include "vmra/baselines.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace vmra::baselines {

namespace {

// Scan ceiling when neither QoS nor capacity bounds the model.
constexpr std::size_t kScanLimit = 1'000'000;

void require_users(std::size_t m, const char* who)
{
	if (m == 0) {
		throw std::domain_error(fmt::format("{}: at least one user is required", who));
	}
}

double violation(Milliseconds rt, const MixingParams& p)
{
	if (rt.value() <= 0.0 || fits_within(rt, p.t_qos)) {
		return 0.0;
	}
	return (rt - p.t_qos).value() / rt.value();
}

ResponseBreakdown single_mixer(std::size_t m, const MixingParams& p)
{
	ResponseBreakdown b;
	b.t_local_mix = t_mix(m, p);
	b.t_inter = effective_t_ext(p);
	b.t_zone_merge = t_mix(p.num_zones, p);
	return b;
}

bool serves(Model model, std::size_t m, const MixingParams& p, std::size_t n_nodes)
{
	try {
		const auto e = evaluate(model, m, p, n_nodes);
		return fits_within(e.response(), p.t_qos);
	} catch (const CapacityExceeded&) {
		return false;
	}
}

} // namespace

std::string to_string(Model model)
{
	switch (model) {
	case Model::kMcu: return "MCU";
	case Model::kCmcu: return "CMCU";
	case Model::kFixedNodes: return "FixedNodes";
	}
	return "unknown";
}

Evaluation mcu_eval(std::size_t m, const MixingParams& p)
{
	require_users(m, "mcu_eval");
	if (!fits_within(r_mix(m, p), p.r_capacity)) {
		throw CapacityExceeded(fmt::format("MCU: mixing {} sources needs {} MB of {} MB",
			m, r_mix(m, p).value(), p.r_capacity.value()));
	}
	Evaluation e;
	e.allocated = p.r_capacity;
	e.breakdown = single_mixer(m, p);
	e.violation_ratio = violation(e.response(), p);
	return e;
}

Evaluation cmcu_eval(std::size_t m, const MixingParams& p)
{
	require_users(m, "cmcu_eval");
	const Megabytes need = p.r_operating + r_mix(m, p);
	if (!fits_within(need, p.r_capacity)) {
		throw CapacityExceeded(fmt::format("CMCU: {} sources need {} MB of {} MB",
			m, need.value(), p.r_capacity.value()));
	}
	Evaluation e;
	e.allocated = need;
	e.breakdown = single_mixer(m, p);
	e.violation_ratio = violation(e.response(), p);
	return e;
}

Evaluation fixed_nodes_eval(std::size_t m, std::size_t n_nodes, const MixingParams& p, bool enforce_qos)
{
	require_users(m, "fixed_nodes_eval");
	if (n_nodes == 0) {
		throw std::domain_error("fixed_nodes_eval: at least one node is required");
	}
	const std::size_t per_node = (m + n_nodes - 1) / n_nodes;
	if (!fits_within(p.r_operating + r_mix(per_node, p), p.r_capacity)) {
		throw CapacityExceeded(fmt::format("FixedNodes: {} sources per node need {} MB of {} MB",
			per_node, (p.r_operating + r_mix(per_node, p)).value(), p.r_capacity.value()));
	}
	Evaluation e;
	e.allocated = p.r_operating * static_cast<double>(n_nodes) + r_mix(m, p);
	e.breakdown.t_local_mix = t_mix(per_node, p);
	e.breakdown.t_intra = p.t_int;
	e.breakdown.t_vm_merge = t_mix(n_nodes, p);
	e.breakdown.t_inter = effective_t_ext(p);
	e.breakdown.t_zone_merge = t_mix(p.num_zones, p);
	e.violation_ratio = violation(e.response(), p);
	if (enforce_qos) {
		e.max_users_qos = max_users_qos(Model::kFixedNodes, p, n_nodes);
	}
	return e;
}

Evaluation evaluate(Model model, std::size_t m, const MixingParams& p, std::size_t n_nodes)
{
	switch (model) {
	case Model::kMcu: return mcu_eval(m, p);
	case Model::kCmcu: return cmcu_eval(m, p);
	case Model::kFixedNodes: return fixed_nodes_eval(m, n_nodes, p);
	}
	throw std::invalid_argument("evaluate: unknown model");
}

std::size_t max_users_qos(Model model, const MixingParams& p, std::size_t n_nodes)
{
	// Response time and load are both non-decreasing in m, so the first
	// unserved m ends the scan.
	std::size_t best = 0;
	for (std::size_t m = 1; m <= kScanLimit && serves(model, m, p, n_nodes); ++m) {
		best = m;
	}
	return best;
}

Megabytes idle_footprint(Model model, const MixingParams& p, std::size_t n_nodes)
{
	switch (model) {
	case Model::kMcu: return p.r_capacity;
	case Model::kCmcu: return Megabytes(0.0);
	case Model::kFixedNodes: return p.r_operating * static_cast<double>(n_nodes);
	}
	return Megabytes(0.0);
}

Megabytes resource_pool(Model model, const MixingParams& p)
{
	if (model == Model::kFixedNodes) {
		return p.r_capacity * static_cast<double>(p.servers_per_zone);
	}
	return p.r_capacity;
}

BaselineResult make_baseline(Model model, const MixingParams& p, std::size_t n_nodes)
{
	BaselineResult r;
	r.model_tag = model;
	r.max_users_qos = max_users_qos(model, p, n_nodes);
	r.allocated_mb = [model, p, n_nodes](std::size_t m) {
		return m == 0 ? idle_footprint(model, p, n_nodes) : evaluate(model, m, p, n_nodes).allocated;
	};
	r.response_time = [model, p, n_nodes](std::size_t m) {
		return evaluate(model, m, p, n_nodes).response();
	};
	return r;
}

} // namespace vmra::baselines
