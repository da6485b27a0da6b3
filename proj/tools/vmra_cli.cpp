// vmra: command-line front end for the video-mixing allocation library.
//
// Exit codes: 0 ok, 1 invalid parameters, 2 malformed config or usage,
// 3 infeasible (or unproven) instance, 4 I/O failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "CLI11.hpp"
#include "vmra/allocation.hpp"
#include "vmra/config.hpp"
#include "vmra/harness.hpp"
#include "vmra/heuristic.hpp"
#include "vmra/ilp.hpp"
#include "vmra/report.hpp"
#include "vmra/response.hpp"
#include "vmra/validate.hpp"

namespace {

enum ExitCode : int
{
	kOk = 0,
	kInvalid = 1,
	kParse = 2,
	kInfeasible = 3,
	kIo = 4,
};

struct Overrides
{
	std::optional<std::size_t> zones;
	std::optional<std::size_t> servers;
};

vmra::CliConfig load(const std::string& path, const Overrides& o)
{
	auto cfg = vmra::load_config(path);
	if (o.zones) {
		cfg.params.num_zones = *o.zones;
	}
	if (o.servers) {
		cfg.params.servers_per_zone = *o.servers;
	}
	// Hard errors propagate as ConfigError; warnings surface in `validate`.
	vmra::validate_params(cfg.params);
	return cfg;
}

// Three decimals, trailing zeros trimmed down to one ("2.0", "2.512").
std::string short_decimal(double v)
{
	std::string s = fmt::format("{:.3f}", v);
	while (s.size() > 2 && s.back() == '0' && s[s.size() - 2] != '.') {
		s.pop_back();
	}
	return s;
}

std::string format_breakdown(const vmra::ResponseBreakdown& b)
{
	return fmt::format("local_mix={} intra={} vm_merge={} wait={} inter={} zone_merge={} total={} ms",
		b.t_local_mix.value(), b.t_intra.value(), b.t_vm_merge.value(), b.t_wait.value(),
		b.t_inter.value(), b.t_zone_merge.value(), b.total().value());
}

int cmd_validate(const std::string& path, bool print_normalized)
{
	const auto cfg = vmra::load_config(path);
	const auto warnings = vmra::validate_params(cfg.params);
	for (const auto& w : warnings) {
		std::cerr << "warning: " << w << "\n";
	}
	if (print_normalized) {
		std::cout << vmra::to_json(cfg);
	} else {
		std::cout << fmt::format("config ok ({} warning{})\n", warnings.size(), warnings.size() == 1 ? "" : "s");
	}
	return kOk;
}

int cmd_heuristic(const std::string& path, const Overrides& o, std::size_t users, const std::string& csv_path)
{
	const auto cfg = load(path, o);
	const auto& p = cfg.params;

	std::string trace = "m,phase,alpha,v_max,servers_used,allocated_mb,response_ms\n";
	vmra::RunResult run;
	for (std::size_t m = 1; m <= users && !run.state.saturated; ++m) {
		auto admission = vmra::admit_one(std::move(run.state), p);
		++run.phase_counts[static_cast<std::size_t>(admission.decision.phase)];
		run.state = std::move(admission.state);
		const auto& alloc = run.state.alloc;
		const double rt = alloc.vm_count() ? vmra::zone_response_time(alloc.v_max(), alloc.vm_count(), p).value() : 0.0;
		trace += fmt::format("{},{},{},{},{},{},{}\n", m, vmra::to_string(admission.decision.phase),
			alloc.vm_count(), alloc.v_max(), run.state.used_servers, vmra::zone_load(alloc, p).value(), rt);
	}
	run.alpha = run.state.alloc.vm_count();
	run.users = run.state.alloc.vm_users;
	run.max_served = run.state.max_served;

	if (run.alpha == 0) {
		std::cout << fmt::format("alpha=0 Max_M={}\n", run.max_served);
	} else {
		std::cout << fmt::format("alpha={} U=[{}] Max_M={}\n", run.alpha, fmt::join(run.users, ","), run.max_served);
	}
	std::string phases;
	for (std::size_t k = 0; k < vmra::kPhaseCount; ++k) {
		phases += fmt::format("{}{}={}", k ? " " : "", vmra::to_string(static_cast<vmra::Phase>(k)), run.phase_counts[k]);
	}
	std::cout << "phases: " << phases << "\n";
	if (run.alpha > 0) {
		std::cout << fmt::format("servers_used={} hosts=[{}]\n", run.state.used_servers,
			fmt::join(run.state.alloc.vm_server, ","));
		std::cout << "response: " << format_breakdown(vmra::zone_breakdown(run.state.alloc.v_max(), run.alpha, p)) << "\n";
	}
	if (run.state.saturated) {
		std::cout << fmt::format("saturated: arrival {} rejected\n", run.max_served + 1);
	}
	if (!csv_path.empty()) {
		std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
		if (!(out << trace)) {
			std::cerr << "error: cannot write " << csv_path << "\n";
			return kIo;
		}
	}
	return kOk;
}

int cmd_solve(const std::string& path, const Overrides& o, std::size_t users, std::size_t budget)
{
	const auto cfg = load(path, o);
	const auto inst = vmra::ilp::build_instance(cfg.params, users);
	const auto result = vmra::ilp::solve_exact(inst, budget);
	switch (result.status) {
	case vmra::ilp::SolveStatus::kOptimal: {
		const auto& sol = *result.solution;
		std::cout << fmt::format("objective={} partition=[{}] servers=[{}]\n", short_decimal(sol.objective_value),
			fmt::join(sol.alloc.vm_users, ","), fmt::join(sol.alloc.vm_server, ","));
		std::cout << fmt::format("alpha={} V_z={} objective_exact={:.9f} nodes={} status=optimal\n",
			sol.alloc.vm_count(), sol.alloc.v_max(), sol.objective_value, result.nodes);
		const auto check = vmra::ilp::verify_solution(inst, sol.alloc);
		std::cout << "verify: " << (check.feasible ? "feasible" : "INFEASIBLE") << "\n";
		return check.feasible ? kOk : kInfeasible;
	}
	case vmra::ilp::SolveStatus::kInfeasible:
		std::cerr << fmt::format("infeasible: no allocation of {} users satisfies the {}\n", users,
			result.binding == vmra::ilp::Binding::kQos ? "QoS threshold, constraint (15)" : "server capacity, constraint (13)");
		return kInfeasible;
	case vmra::ilp::SolveStatus::kBudgetExhausted:
		std::cerr << fmt::format("undecided: node budget of {} exhausted before a proof\n", budget);
		return kInfeasible;
	}
	return kInfeasible;
}

int cmd_export_lp(const std::string& path, const Overrides& o, std::size_t users, const std::string& out_path)
{
	const auto cfg = load(path, o);
	const auto inst = vmra::ilp::build_instance(cfg.params, users);
	const std::string text = vmra::ilp::export_lp(inst);
	std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
	if (!(out << text) || !out.flush()) {
		std::cerr << "error: cannot write " << out_path << "\n";
		return kIo;
	}
	std::cout << fmt::format("wrote {} ({} variables, {} constraints)\n", out_path, inst.variables.size(), inst.rows.size());
	return kOk;
}

void summarize(const vmra::harness::ScenarioResult& res)
{
	using vmra::harness::Scenario;
	const auto names = vmra::harness::figure_file_names(res.scenario);
	auto column = [&](auto get) {
		std::string line;
		std::string current;
		for (const auto& c : res.cells) {
			const auto model = vmra::harness::to_string(c.model);
			if (model != current) {
				line += fmt::format("{}{}=[", current.empty() ? "" : "] ", model);
				current = model;
			} else {
				line += ",";
			}
			line += get(c);
		}
		return line + (current.empty() ? "" : "]");
	};
	for (std::size_t i = 0; i < names.size(); ++i) {
		std::string values;
		switch (res.scenario) {
		case Scenario::kMaxUsers:
			values = column([](const auto& c) { return fmt::format("{}", c.max_users_per_zone); });
			break;
		case Scenario::kTotalUsers:
			values = column([](const auto& c) { return fmt::format("{}", c.total_users); });
			break;
		default:
			values = i == 0 ? column([](const auto& c) { return fmt::format("{:.3f}", c.avg_alloc_fraction); })
			                : column([](const auto& c) { return fmt::format("{:.1f}", c.avg_response_ms); });
		}
		std::cout << fmt::format("{}: {}\n", names[i], values);
	}
}

int cmd_experiment(const std::string& path, const std::string& scenario, const std::string& out_dir,
                   std::size_t jobs)
{
	const auto cfg = load(path, {});
	std::vector<vmra::harness::Scenario> todo;
	if (scenario == "all") {
		todo = {vmra::harness::Scenario::kMaxUsers, vmra::harness::Scenario::kTotalUsers,
			vmra::harness::Scenario::kMeetByAll, vmra::harness::Scenario::kMeetBySome};
	} else {
		todo = {*vmra::harness::parse_scenario(scenario)};
	}
	const std::filesystem::path dir = out_dir.empty() ? cfg.output_dir : std::filesystem::path(out_dir);
	for (const auto which : todo) {
		const auto res = vmra::harness::run_scenario(cfg.scenario_config(which, jobs));
		vmra::harness::emit_results(res, dir);
		summarize(res);
	}
	return kOk;
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Video mixing resource allocation: heuristic, exact ILP, baselines and experiments"};
	app.require_subcommand(1);

	std::string config;
	Overrides overrides;
	std::size_t users = 0;
	bool print_normalized = false;
	std::string csv_path;
	std::size_t budget = vmra::ilp::kDefaultNodeBudget;
	std::string out_path;
	std::string scenario = "all";
	std::size_t jobs = 1;

	auto* validate = app.add_subcommand("validate", "Check a config file against the parameter invariants");
	validate->add_option("config", config, "JSON config file")->required();
	validate->add_flag("--print-normalized", print_normalized, "Echo the config with every field explicit");

	auto add_instance_options = [&](CLI::App* sub, bool users_required) {
		sub->add_option("config", config, "JSON config file")->required();
		auto* u = sub->add_option("--users,-m", users, "Number of users in the zone");
		if (users_required) {
			u->required();
		}
		sub->add_option("--zone-count,-z", overrides.zones, "Override params.num_zones");
		sub->add_option("--servers,-n", overrides.servers, "Override params.servers_per_zone");
	};

	auto* heuristic = app.add_subcommand("heuristic", "Admit users one by one with the incremental allocator");
	add_instance_options(heuristic, true);
	heuristic->add_option("--csv", csv_path, "Write a per-arrival trace");

	auto* solve = app.add_subcommand("solve", "Solve the allocation ILP exactly");
	add_instance_options(solve, true);
	solve->add_option("--node-budget", budget, "Search node budget");

	auto* export_lp = app.add_subcommand("export-lp", "Write the allocation ILP in CPLEX-LP format");
	add_instance_options(export_lp, true);
	export_lp->add_option("--out,-o", out_path, "Output .lp file")->required();

	auto* experiment = app.add_subcommand("experiment", "Run a scenario and write CSV and SVG results");
	experiment->add_option("config", config, "JSON config file")->required();
	experiment->add_option("--scenario,-s", scenario, "max-users, total-users, meet-by-all, meet-by-some or all")
		->check(CLI::IsMember({"max-users", "total-users", "meet-by-all", "meet-by-some", "all"}));
	experiment->add_option("--out,-o", out_path, "Output directory (default: config output_dir)");
	experiment->add_option("--jobs,-j", jobs, "Parallel scenario cells")->check(CLI::PositiveNumber);

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		const int code = app.exit(e);
		return code == 0 ? kOk : kParse;
	}

	try {
		if (*validate) {
			return cmd_validate(config, print_normalized);
		}
		if (*heuristic) {
			return cmd_heuristic(config, overrides, users, csv_path);
		}
		if (*solve) {
			return cmd_solve(config, overrides, users, budget);
		}
		if (*export_lp) {
			return cmd_export_lp(config, overrides, users, out_path);
		}
		if (*experiment) {
			return cmd_experiment(config, scenario, out_path, jobs);
		}
	} catch (const vmra::ConfigParseError& e) {
		std::cerr << "error: " << config << ": " << e.what() << "\n";
		return kParse;
	} catch (const vmra::ConfigReadError& e) {
		std::cerr << "error: " << e.what() << "\n";
		return kIo;
	} catch (const vmra::ConfigError& e) {
		std::cerr << "error: " << e.what() << "\n";
		return kInvalid;
	} catch (const vmra::harness::OutputError& e) {
		std::cerr << "error: " << e.what() << "\n";
		return kIo;
	} catch (const std::invalid_argument& e) {
		std::cerr << "error: " << e.what() << "\n";
		return kInvalid;
	}
	return kParse;
}
