#include "vmra/params.hpp"

#include <fmt/format.h>

namespace vmra {

namespace {

double table_lookup(const std::vector<double>& table, std::size_t index, double fallback_step)
{
	if (index < table.size()) {
		return table[index];
	}
	const double step = table.size() >= 2 ? table.back() - table[table.size() - 2] : fallback_step;
	return table.back() + step * static_cast<double>(index - (table.size() - 1));
}

void require_non_negative(double value, const char* field)
{
	if (!(value >= 0.0)) {
		throw ConfigError(field, fmt::format("must be non-negative, got {}", value));
	}
}

void check_table(const std::vector<double>& table, const char* field, const char* anchor)
{
	if (table.empty()) {
		return;
	}
	if (table.front() != 0.0) {
		throw ConfigError(field, fmt::format("first entry must be 0 ({})", anchor));
	}
	for (std::size_t i = 1; i < table.size(); ++i) {
		if (table[i] < table[i - 1]) {
			throw ConfigError(field, fmt::format("must be non-decreasing (entry {} < entry {})", i, i - 1));
		}
	}
}

} // namespace

MixingParams default_params()
{
	return MixingParams{};
}

Milliseconds t_mix(std::size_t k, const MixingParams& p)
{
	if (k == 0) {
		throw std::domain_error("t_mix: mixing zero sources is undefined");
	}
	if (p.t_mix_table.empty()) {
		return p.t_mix_slope * static_cast<double>(k - 1);
	}
	return Milliseconds(table_lookup(p.t_mix_table, k - 1, p.t_mix_slope.value()));
}

Megabytes r_mix(std::size_t k, const MixingParams& p)
{
	if (p.r_mix_table.empty()) {
		return p.r_mix_per_source * static_cast<double>(k);
	}
	return Megabytes(table_lookup(p.r_mix_table, k, p.r_mix_per_source.value()));
}

Milliseconds effective_t_ext(const MixingParams& p)
{
	return p.num_zones <= 1 ? Milliseconds(0.0) : p.t_ext;
}

MixingParams with_zones(MixingParams base, std::size_t zones)
{
	base.num_zones = zones;
	return base;
}

std::vector<std::string> validate_params(const MixingParams& p)
{
	if (p.num_zones < 1) {
		throw ConfigError("num_zones", "at least one zone is required");
	}
	if (p.servers_per_zone < 1) {
		throw ConfigError("servers_per_zone", "at least one server is required");
	}
	require_non_negative(p.t_int.value(), "t_int");
	require_non_negative(p.t_ext.value(), "t_ext");
	require_non_negative(p.t_mix_slope.value(), "t_mix_slope");
	require_non_negative(p.r_mix_per_source.value(), "r_mix_per_source");
	require_non_negative(p.r_operating.value(), "r_operating");
	require_non_negative(p.r_capacity.value(), "r_capacity");
	require_non_negative(p.t_qos.value(), "t_qos");
	check_table(p.t_mix_table, "t_mix_table", "T_mix(1) = 0");
	check_table(p.r_mix_table, "r_mix_table", "R_mix(0) = 0");

	if (!(p.r_operating > p.r_mix_per_source)) {
		throw ConfigError("r_operating",
			fmt::format("VM operating overhead ({} MB) must exceed the per-source mixing cost ({} MB)",
				p.r_operating.value(), p.r_mix_per_source.value()));
	}
	if (!fits_within(p.r_operating + r_mix(1, p), p.r_capacity)) {
		throw ConfigError("r_capacity",
			fmt::format("a server of {} MB cannot host one VM with one source ({} MB)",
				p.r_capacity.value(), (p.r_operating + r_mix(1, p)).value()));
	}
	const Milliseconds floor_rt = t_mix(1, p) + p.t_int + t_mix(1, p) + effective_t_ext(p) + t_mix(p.num_zones, p);
	if (!fits_within(floor_rt, p.t_qos)) {
		throw ConfigError("t_qos",
			fmt::format("threshold {} ms is below the minimum achievable response time {} ms",
				p.t_qos.value(), floor_rt.value()));
	}

	std::vector<std::string> warnings;
	if (p.r_operating < p.r_mix_per_source * 10.0) {
		warnings.push_back(fmt::format(
			"r_operating ({} MB) is less than 10x r_mix_per_source ({} MB); "
			"VM overhead may not dominate the cost of adding a source",
			p.r_operating.value(), p.r_mix_per_source.value()));
	}
	return warnings;
}

} // namespace vmra
