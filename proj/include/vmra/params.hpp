#ifndef VMRA_PARAMS_HPP
#define VMRA_PARAMS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "vmra/units.hpp"

namespace vmra {

/**
 * Model constants for one data-center zone and its surroundings.
 *
 * Mixing time and mixing resources default to linear forms
 * (slope·(k−1) and per_source·k). Either may be replaced by an explicit
 * value table; beyond the end of a table the last step is extrapolated.
 */
struct MixingParams
{
	std::size_t num_zones = 1;
	std::size_t servers_per_zone = 3;
	Milliseconds t_int{10.0};
	Milliseconds t_ext{15.0};  // ignored when num_zones == 1
	Milliseconds t_mix_slope{7.0};
	Megabytes r_mix_per_source{20.0};
	Megabytes r_operating{400.0};
	Megabytes r_capacity{10240.0};
	Milliseconds t_qos{300.0};

	// t_mix_table[k-1] = T_mix(k); empty selects the linear form.
	std::vector<double> t_mix_table;
	// r_mix_table[k] = R_mix(k); empty selects the linear form.
	std::vector<double> r_mix_table;

	bool has_tables() const { return !t_mix_table.empty() || !r_mix_table.empty(); }

	friend bool operator==(const MixingParams&, const MixingParams&) = default;
};

/// Invalid configuration value; `field()` names the offending parameter.
class ConfigError : public std::runtime_error
{
public:
	ConfigError(std::string field, const std::string& message)
	: std::runtime_error(field + ": " + message), field_(std::move(field))
	{
	}

	const std::string& field() const { return field_; }

private:
	std::string field_;
};

/// Reference parameter set (3 servers, 300 ms threshold) with a single zone.
MixingParams default_params();

/// Time to mix k sources. Throws std::domain_error for k == 0.
Milliseconds t_mix(std::size_t k, const MixingParams& p);

/// Resources to mix k sources; r_mix(0) == 0.
Megabytes r_mix(std::size_t k, const MixingParams& p);

/// Inter-zone exchange time actually charged: zero for a single zone.
Milliseconds effective_t_ext(const MixingParams& p);

/// Copy of `base` configured for `zones` zones.
MixingParams with_zones(MixingParams base, std::size_t zones);

/**
 * Checks every parameter invariant. Throws ConfigError on the first hard
 * failure; returns soft warnings (currently: operating overhead not
 * dominating the per-source cost by at least 10×).
 */
std::vector<std::string> validate_params(const MixingParams& p);

} // namespace vmra

#endif // VMRA_PARAMS_HPP
