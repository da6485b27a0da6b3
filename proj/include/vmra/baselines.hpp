#ifndef VMRA_BASELINES_HPP
#define VMRA_BASELINES_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "vmra/params.hpp"
#include "vmra/response.hpp"

namespace vmra::baselines {

/// Comparison models: a statically provisioned MCU, the same single mixer
/// with on-demand resources (CMCU), and a fixed pool of mixing nodes with
/// an even user split standing in for a queuing-model allocator.
enum class Model { kMcu, kCmcu, kFixedNodes };

std::string to_string(Model model);

class CapacityExceeded : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

struct Evaluation
{
	Megabytes allocated;
	ResponseBreakdown breakdown;
	double violation_ratio = 0.0;                 // max(0, (RT − T_ε) / RT)
	std::optional<std::size_t> max_users_qos;     // fixed nodes with enforce_qos only

	Milliseconds response() const { return breakdown.total(); }
};

/// Single mixer over one fully provisioned server.
Evaluation mcu_eval(std::size_t m, const MixingParams& p);

/// Single mixer sized on demand: R_O + R_mix(m).
Evaluation cmcu_eval(std::size_t m, const MixingParams& p);

/// `n_nodes` mixers, one per server, users split evenly.
Evaluation fixed_nodes_eval(std::size_t m, std::size_t n_nodes, const MixingParams& p, bool enforce_qos = false);

Evaluation evaluate(Model model, std::size_t m, const MixingParams& p, std::size_t n_nodes);

/// Largest m the model serves within QoS and capacity (0 if none).
std::size_t max_users_qos(Model model, const MixingParams& p, std::size_t n_nodes);

/// Allocation with no users: full server for MCU, nothing for CMCU,
/// the nodes' operating overhead for the fixed pool.
Megabytes idle_footprint(Model model, const MixingParams& p, std::size_t n_nodes);

/// Data-center resources a model's allocation is measured against.
Megabytes resource_pool(Model model, const MixingParams& p);

struct BaselineResult
{
	Model model_tag;
	std::size_t max_users_qos = 0;
	std::function<Megabytes(std::size_t)> allocated_mb;
	std::function<Milliseconds(std::size_t)> response_time;
};

BaselineResult make_baseline(Model model, const MixingParams& p, std::size_t n_nodes);

} // namespace vmra::baselines

#endif // VMRA_BASELINES_HPP
