#include "vmra/ilp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "vmra/response.hpp"

namespace vmra::ilp {

namespace {

std::string var_name(const char* prefix, std::size_t i, std::size_t j)
{
	return fmt::format("{}_{}_{}", prefix, i, j);
}

std::size_t largest_qos_v(std::size_t alpha, const IlpInstance& inst)
{
	std::size_t best = 0;
	for (std::size_t v = 1; v <= inst.n_users; ++v) {
		if (!fits_within(zone_response_time(v, alpha, inst.params), inst.params.t_qos)) {
			break;
		}
		best = v;
	}
	return best;
}

class PartitionSearch
{
public:
	PartitionSearch(const IlpInstance& inst, std::size_t budget, std::size_t& nodes)
	: inst_(inst), budget_(budget), nodes_(nodes)
	{
	}

	// True when a partition with max ≤ v_max fits on the servers.
	bool run(std::size_t alpha, std::size_t v_max)
	{
		alpha_ = alpha;
		vms_.assign(inst_.n_servers, 0);
		users_.assign(inst_.n_servers, 0);
		hosts_.clear();
		counts_.clear();
		opened_ = 0;
		return descend(inst_.n_users, v_max, 0, 0);
	}

	bool exhausted() const { return exhausted_; }
	const std::vector<std::size_t>& hosts() const { return hosts_; }
	const std::vector<std::size_t>& counts() const { return counts_; }

private:
	bool descend(std::size_t remaining, std::size_t bound, std::size_t prev_u, std::size_t prev_s)
	{
		if (++nodes_ > budget_) {
			exhausted_ = true;
			return false;
		}
		const std::size_t left = alpha_ - counts_.size();
		if (left == 0) {
			return remaining == 0;
		}
		if (remaining < left) {
			return false;
		}
		const std::size_t hi = std::min(bound, remaining - (left - 1));
		const std::size_t lo = (remaining + left - 1) / left;
		for (std::size_t u = hi; u >= lo && u >= 1; --u) {
			const std::size_t last_server = std::min(opened_, inst_.n_servers - 1);
			for (std::size_t s = 0; s <= last_server; ++s) {
				if (u == prev_u && s < prev_s) {
					continue;
				}
				const Megabytes load = inst_.params.r_operating * static_cast<double>(vms_[s] + 1)
				                     + r_mix(users_[s] + u, inst_.params);
				if (!fits_within(load, inst_.params.r_capacity)) {
					continue;
				}
				const bool opens = s == opened_;
				++vms_[s];
				users_[s] += u;
				opened_ += opens ? 1 : 0;
				hosts_.push_back(s);
				counts_.push_back(u);
				if (descend(remaining - u, u, u, s)) {
					return true;
				}
				hosts_.pop_back();
				counts_.pop_back();
				opened_ -= opens ? 1 : 0;
				users_[s] -= u;
				--vms_[s];
				if (exhausted_) {
					return false;
				}
			}
			if (u == 1) {
				break;
			}
		}
		return false;
	}

	const IlpInstance& inst_;
	std::size_t budget_;
	std::size_t& nodes_;
	bool exhausted_ = false;
	std::size_t alpha_ = 0;
	std::size_t opened_ = 0;
	std::vector<std::size_t> vms_;
	std::vector<std::size_t> users_;
	std::vector<std::size_t> hosts_;
	std::vector<std::size_t> counts_;
};

void append_expression(std::string& out, const IlpInstance& inst, const std::vector<Term>& terms)
{
	for (std::size_t k = 0; k < terms.size(); ++k) {
		if (k > 0 && k % 8 == 0) {
			out += "\n   ";
		}
		const double coeff = terms[k].coeff;
		const std::string& name = inst.variables[terms[k].var].name;
		const bool negative = coeff < 0.0;
		const double magnitude = std::fabs(coeff);
		if (k == 0) {
			out += negative ? "- " : "";
		} else {
			out += negative ? " - " : " + ";
		}
		if (magnitude != 1.0) {
			out += format_number(magnitude);
			out += ' ';
		}
		out += name;
	}
}

const char* sense_text(Sense s)
{
	switch (s) {
	case Sense::kLessEqual: return "<=";
	case Sense::kGreaterEqual: return ">=";
	case Sense::kEqual: return "=";
	}
	return "=";
}

void append_names(std::string& out, const IlpInstance& inst, VarKind kind)
{
	std::size_t on_line = 0;
	for (const auto& v : inst.variables) {
		if (v.kind != kind) {
			continue;
		}
		if (on_line == 0) {
			out += ' ';
		}
		out += ' ';
		out += v.name;
		if (++on_line == 10) {
			out += '\n';
			on_line = 0;
		}
	}
	if (on_line != 0) {
		out += '\n';
	}
}

} // namespace

std::string format_number(double value)
{
	if (value == 0.0) {
		return "0";
	}
	if (std::fabs(value) < 1e15 && value == std::trunc(value)) {
		return fmt::format("{}", static_cast<long long>(value));
	}
	std::string text = fmt::format("{:.12f}", value);
	while (!text.empty() && text.back() == '0') {
		text.pop_back();
	}
	if (!text.empty() && text.back() == '.') {
		text.pop_back();
	}
	return text;
}

IlpInstance build_instance(const MixingParams& p, std::size_t m_users)
{
	validate_params(p);
	if (m_users == 0) {
		throw std::invalid_argument("build_instance: at least one user is required");
	}
	if (p.has_tables()) {
		throw std::invalid_argument("build_instance: the ILP needs the linear T_mix/R_mix forms, not value tables");
	}

	IlpInstance inst;
	inst.n_servers = p.servers_per_zone;
	inst.n_users = m_users;
	inst.n_zones = p.num_zones;
	inst.params = p;
	inst.big_m = m_users + 1;

	const std::size_t n = inst.n_servers;
	const std::size_t m = inst.n_users;
	const double md = static_cast<double>(m);

	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = 0; j < m; ++j) {
			inst.variables.push_back({var_name("x", i, j), VarKind::kBinary, 0.0, 1.0});
		}
	}
	for (std::size_t j = 0; j < m; ++j) {
		inst.variables.push_back({fmt::format("u_{}", j), VarKind::kInteger, 0.0, md});
	}
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = 0; j < m; ++j) {
			inst.variables.push_back({var_name("c", i, j), VarKind::kInteger, 0.0, md});
		}
	}
	inst.variables.push_back({"Vz", VarKind::kInteger, 1.0, md});

	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = 0; j < m; ++j) {
			inst.objective.push_back({inst.x(i, j), 1.0});
		}
	}
	inst.objective.push_back({inst.vz(), 1.0 / md});

	auto hosts_of = [&](std::size_t j, double coeff) {
		std::vector<Term> terms;
		for (std::size_t i = 0; i < n; ++i) {
			terms.push_back({inst.x(i, j), coeff});
		}
		return terms;
	};

	for (std::size_t j = 0; j < m; ++j) {
		inst.rows.push_back({fmt::format("eq3_{}", j), 3, hosts_of(j, 1.0), Sense::kLessEqual, 1.0});
	}
	{
		std::vector<Term> terms;
		for (std::size_t j = 0; j < m; ++j) {
			terms.push_back({inst.u(j), 1.0});
		}
		inst.rows.push_back({"eq4", 4, std::move(terms), Sense::kEqual, md});
	}
	for (std::size_t j = 0; j < m; ++j) {
		std::vector<Term> terms{{inst.u(j), 1.0}};
		auto x = hosts_of(j, -static_cast<double>(inst.big_m));
		terms.insert(terms.end(), x.begin(), x.end());
		inst.rows.push_back({fmt::format("eq5_{}", j), 5, std::move(terms), Sense::kLessEqual, 0.0});
	}
	for (std::size_t j = 0; j < m; ++j) {
		std::vector<Term> terms{{inst.u(j), 1.0}};
		auto x = hosts_of(j, -1.0);
		terms.insert(terms.end(), x.begin(), x.end());
		inst.rows.push_back({fmt::format("eq6_{}", j), 6, std::move(terms), Sense::kGreaterEqual, 0.0});
	}
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = 0; j < m; ++j) {
			inst.rows.push_back({var_name("eq9", i, j), 9,
				{{inst.c(i, j), 1.0}, {inst.x(i, j), -md}}, Sense::kLessEqual, 0.0});
		}
	}
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = 0; j < m; ++j) {
			inst.rows.push_back({var_name("eq10", i, j), 10,
				{{inst.c(i, j), 1.0}, {inst.u(j), -1.0}}, Sense::kLessEqual, 0.0});
		}
	}
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = 0; j < m; ++j) {
			inst.rows.push_back({var_name("eq11", i, j), 11,
				{{inst.c(i, j), 1.0}, {inst.u(j), -1.0}, {inst.x(i, j), -md}}, Sense::kGreaterEqual, -md});
		}
	}
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = 0; j < m; ++j) {
			inst.rows.push_back({var_name("eq12", i, j), 12, {{inst.c(i, j), 1.0}}, Sense::kGreaterEqual, 0.0});
		}
	}
	for (std::size_t i = 0; i < n; ++i) {
		std::vector<Term> terms;
		for (std::size_t j = 0; j < m; ++j) {
			terms.push_back({inst.x(i, j), p.r_operating.value()});
		}
		for (std::size_t j = 0; j < m; ++j) {
			terms.push_back({inst.c(i, j), p.r_mix_per_source.value()});
		}
		inst.rows.push_back({fmt::format("eq13_{}", i), 13, std::move(terms), Sense::kLessEqual,
			p.r_capacity.value()});
	}
	for (std::size_t j = 0; j < m; ++j) {
		inst.rows.push_back({fmt::format("eq14_{}", j), 14,
			{{inst.u(j), 1.0}, {inst.vz(), -1.0}}, Sense::kLessEqual, 0.0});
	}
	{
		// slope·(V_z − 1) + T_int + slope·(Σx − 1) + T_ext + slope·(Z − 1) ≤ T_ε
		const double slope = p.t_mix_slope.value();
		std::vector<Term> terms{{inst.vz(), slope}};
		for (std::size_t i = 0; i < n; ++i) {
			for (std::size_t j = 0; j < m; ++j) {
				terms.push_back({inst.x(i, j), slope});
			}
		}
		const double rhs = p.t_qos.value() - p.t_int.value() - effective_t_ext(p).value()
		                 - slope * static_cast<double>(p.num_zones - 1) + 2.0 * slope;
		inst.rows.push_back({"eq15", 15, std::move(terms), Sense::kLessEqual, rhs});
	}
	return inst;
}

SolveResult solve_exact(const IlpInstance& inst, std::size_t node_budget)
{
	SolveResult result;
	const std::size_t m = inst.n_users;
	bool qos_reachable = false;
	PartitionSearch search(inst, node_budget, result.nodes);

	for (std::size_t alpha = 1; alpha <= m; ++alpha) {
		const std::size_t v_hi = largest_qos_v(alpha, inst);
		const std::size_t v_lo = (m + alpha - 1) / alpha;
		if (v_hi < v_lo) {
			continue;
		}
		qos_reachable = true;
		for (std::size_t v = v_lo; v <= v_hi; ++v) {
			if (search.run(alpha, v)) {
				IlpSolution sol;
				sol.alloc = ZoneAllocation::create(m, search.hosts(), search.counts());
				sol.objective_value = static_cast<double>(alpha) + static_cast<double>(sol.alloc.v_max()) / static_cast<double>(m);
				sol.optimal = true;
				result.status = SolveStatus::kOptimal;
				result.solution = std::move(sol);
				return result;
			}
			if (search.exhausted()) {
				result.status = SolveStatus::kBudgetExhausted;
				return result;
			}
		}
	}
	result.status = SolveStatus::kInfeasible;
	result.binding = qos_reachable ? Binding::kCapacity : Binding::kQos;
	return result;
}

std::string export_lp(const IlpInstance& inst)
{
	std::string out;
	out += fmt::format("\\ Video mixing allocation: {} zone(s), {} server(s), {} user(s)\n",
		inst.n_zones, inst.n_servers, inst.n_users);
	out += "Minimize\n obj: ";
	append_expression(out, inst, inst.objective);
	out += "\nSubject To\n";
	for (const auto& row : inst.rows) {
		out += ' ';
		out += row.name;
		out += ": ";
		append_expression(out, inst, row.terms);
		out += fmt::format(" {} {}\n", sense_text(row.sense), format_number(row.rhs));
	}
	out += "Bounds\n";
	for (const auto& v : inst.variables) {
		if (v.kind == VarKind::kBinary) {
			continue;
		}
		out += fmt::format(" {} <= {} <= {}\n", format_number(v.lower), v.name, format_number(v.upper));
	}
	out += "Generals\n";
	append_names(out, inst, VarKind::kInteger);
	out += "Binaries\n";
	append_names(out, inst, VarKind::kBinary);
	out += "End\n";
	return out;
}

std::optional<std::vector<double>> encode(const IlpInstance& inst, const ZoneAllocation& alloc)
{
	if (alloc.vm_users.size() > inst.n_users || alloc.vm_server.size() > inst.n_users) {
		return std::nullopt;
	}
	std::vector<double> values(inst.variables.size(), 0.0);
	std::size_t max_u = 0;
	for (std::size_t j = 0; j < alloc.vm_users.size(); ++j) {
		const auto u = alloc.vm_users[j];
		values[inst.u(j)] = static_cast<double>(u);
		max_u = std::max(max_u, u);
		const std::size_t host = j < alloc.vm_server.size() ? alloc.vm_server[j] : kUnhosted;
		if (host < inst.n_servers) {
			values[inst.x(host, j)] = 1.0;
			values[inst.c(host, j)] = static_cast<double>(u);
		}
	}
	for (std::size_t j = alloc.vm_users.size(); j < alloc.vm_server.size(); ++j) {
		if (alloc.vm_server[j] < inst.n_servers) {
			values[inst.x(alloc.vm_server[j], j)] = 1.0;
		}
	}
	values[inst.vz()] = static_cast<double>(alloc.declared_v_max.value_or(max_u));
	return values;
}

bool satisfied(const Row& row, std::span<const double> values)
{
	double lhs = 0.0;
	for (const auto& t : row.terms) {
		lhs += t.coeff * values[t.var];
	}
	switch (row.sense) {
	case Sense::kLessEqual: return lhs <= row.rhs + kTolerance;
	case Sense::kGreaterEqual: return lhs >= row.rhs - kTolerance;
	case Sense::kEqual: return std::fabs(lhs - row.rhs) <= kTolerance;
	}
	return false;
}

double objective_value(const IlpInstance& inst, std::span<const double> values)
{
	double total = 0.0;
	for (const auto& t : inst.objective) {
		total += t.coeff * values[t.var];
	}
	return total;
}

Verification verify_solution(const IlpInstance& inst, const ZoneAllocation& alloc)
{
	Verification v;
	bool structural = false;
	for (std::size_t j = 0; j < alloc.vm_server.size(); ++j) {
		const auto host = alloc.vm_server[j];
		if (host != kUnhosted && host >= inst.n_servers) {
			v.violated.push_back(fmt::format("host_{}", j));
			structural = true;
		}
	}
	const auto values = encode(inst, alloc);
	if (!values) {
		v.violated.push_back("vm_columns");
		return v;
	}
	std::set<int> equations;
	for (const auto& row : inst.rows) {
		if (!satisfied(row, *values)) {
			v.violated.push_back(row.name);
			equations.insert(row.equation);
		}
	}
	for (std::size_t k = 0; k < inst.variables.size(); ++k) {
		const auto& var = inst.variables[k];
		const double value = (*values)[k];
		if (value < var.lower - kTolerance || value > var.upper + kTolerance) {
			v.violated.push_back("bound:" + var.name);
		}
	}
	v.equations.assign(equations.begin(), equations.end());
	v.objective = objective_value(inst, *values);
	v.feasible = v.violated.empty() && !structural;
	return v;
}

} // namespace vmra::ilp
