#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "vmra/harness.hpp"
#include "vmra/report.hpp"
#include "vmra/response.hpp"

using namespace vmra;
using namespace vmra::harness;
namespace fs = std::filesystem;

namespace {

ScenarioConfig config(Scenario s)
{
	ScenarioConfig cfg;
	cfg.scenario = s;
	return cfg;
}

const CellResult& cell(const ScenarioResult& r, ModelTag m, std::size_t z)
{
	for (const auto& c : r.cells) {
		if (c.model == m && c.zones == z) {
			return c;
		}
	}
	throw std::runtime_error("cell not found");
}

std::string slurp(const fs::path& p)
{
	std::ifstream in(p, std::ios::binary);
	std::ostringstream s;
	s << in.rdbuf();
	return s.str();
}

} // namespace

TEST_CASE("max-users oracle anchors")
{
	const auto p = default_params();
	CHECK(max_users_oracle(p, ModelTag::kVmra, 3) == 462);
	CHECK(max_users_oracle(p, ModelTag::kMcu, 3) == 43);
	CHECK(max_users_oracle(p, ModelTag::kCmcu, 3) == 43);
	CHECK(max_users_oracle(p, ModelTag::kFixedNodes, 3) == 120);
	// Two zones: 7(V + alpha) + 18 <= 300 forces V + alpha <= 40, so 20 x 20.
	CHECK(max_users_oracle(with_zones(p, 2), ModelTag::kVmra, 3) == 400);
	CHECK(oracle::vmra_max_users(with_zones(p, 2), 600) == 400);
	CHECK(max_users_oracle(with_zones(p, 6), ModelTag::kVmra, 3) == 324);
	for (std::size_t z = 1; z <= 6; ++z) {
		CHECK(max_users_oracle(with_zones(p, z), ModelTag::kVmra, 3) == oracle::vmra_max_users(with_zones(p, z), 600));
	}
}

TEST_CASE("max-users scenario")
{
	const auto r = run_scenario(config(Scenario::kMaxUsers));
	CHECK(r.cells.size() == 24);
	std::size_t prev = SIZE_MAX;
	for (std::size_t z = 1; z <= 6; ++z) {
		const auto& c = cell(r, ModelTag::kVmra, z);
		CHECK(c.oracle_max_users == std::optional<std::size_t>{c.max_users_per_zone});
		CHECK(c.max_users_per_zone <= prev);
		CHECK(c.total_users == z * c.max_users_per_zone);
		prev = c.max_users_per_zone;
		for (auto m : {ModelTag::kMcu, ModelTag::kCmcu, ModelTag::kFixedNodes}) {
			const auto& b = cell(r, m, z);
			CHECK(b.oracle_max_users == std::optional<std::size_t>{b.max_users_per_zone});
			CHECK(b.max_users_per_zone < c.max_users_per_zone);
		}
	}
	CHECK(cell(r, ModelTag::kVmra, 1).max_users_per_zone == 462);
	CHECK(cell(r, ModelTag::kMcu, 1).max_users_per_zone == 43);
	// Cells come out sorted by model, then zone count.
	CHECK(r.cells.front().model == ModelTag::kVmra);
	CHECK(r.cells.back().model == ModelTag::kFixedNodes);
	CHECK(r.cells.back().zones == 6);
}

TEST_CASE("total-users scenario")
{
	const auto r = run_scenario(config(Scenario::kTotalUsers));
	CHECK(cell(r, ModelTag::kVmra, 1).total_users == 462);
	CHECK(cell(r, ModelTag::kVmra, 2).total_users == 800);
	CHECK(cell(r, ModelTag::kVmra, 6).total_users == 1944);
	for (std::size_t z = 2; z <= 6; ++z) {
		CHECK(cell(r, ModelTag::kVmra, z).total_users > cell(r, ModelTag::kVmra, z - 1).total_users);
	}
}

TEST_CASE("meet-by-all scenario")
{
	const auto r = run_scenario(config(Scenario::kMeetByAll));
	const auto& v = cell(r, ModelTag::kVmra, 1);
	CHECK(v.max_users_per_zone == 43);
	CHECK(v.vm_count == 2);
	for (const auto& c : r.cells) {
		CHECK(c.avg_response_ms <= 300.0);
		CHECK(c.violation_ratio == 0.0);
		CHECK_FALSE(c.capacity_exceeded);
		CHECK_FALSE(c.oracle_max_users);
	}
	CHECK(cell(r, ModelTag::kMcu, 1).avg_alloc_fraction == 1.0);
	CHECK(cell(r, ModelTag::kMcu, 1).max_alloc_fraction == 1.0);
	// CMCU on one server: (400 + 20 * 43) / 10240 at its peak.
	CHECK(cell(r, ModelTag::kCmcu, 1).max_alloc_fraction == doctest::Approx(1260.0 / 10240.0));
	// VMRA at 43 users: two VMs on one server out of three.
	CHECK(v.max_alloc_fraction == doctest::Approx(1660.0 / 30720.0));
}

TEST_CASE("meet-by-some scenario")
{
	const auto r = run_scenario(config(Scenario::kMeetBySome));
	for (std::size_t z = 1; z <= 6; ++z) {
		CHECK(cell(r, ModelTag::kVmra, z).violation_ratio == 0.0);
		const double f = cell(r, ModelTag::kFixedNodes, z).violation_ratio;
		CHECK(f > 0.60);
		CHECK(f < 0.75);
		CHECK(cell(r, ModelTag::kMcu, z).violation_ratio > f);
	}
	CHECK(cell(r, ModelTag::kFixedNodes, 1).violation_ratio == doctest::Approx(795.0 / 1095.0));
	CHECK(cell(r, ModelTag::kFixedNodes, 6).violation_ratio == doctest::Approx(523.0 / 823.0));
	CHECK(cell(r, ModelTag::kFixedNodes, 1).max_users_per_zone == 462);
}

TEST_CASE("capacity overruns are flagged, not hidden")
{
	auto cfg = config(Scenario::kMeetBySome);
	cfg.params.r_capacity = Megabytes(4000);
	cfg.zone_range = {1};
	const auto r = run_scenario(cfg);
	CHECK(cell(r, ModelTag::kCmcu, 1).capacity_exceeded);
	CHECK_FALSE(cell(r, ModelTag::kVmra, 1).capacity_exceeded);
}

TEST_CASE("zone composition adds the cross-zone wait")
{
	const auto p = with_zones(default_params(), 3);
	const std::vector<std::size_t> symmetric{50, 50, 50};
	for (const auto& z : compose_zones(ModelTag::kVmra, symmetric, p, 3)) {
		CHECK(z.breakdown.t_wait.value() == 0.0);
	}
	const std::vector<std::size_t> skewed{10, 300, 40};
	const auto out = compose_zones(ModelTag::kVmra, skewed, p, 3);
	const double slow = out[1].breakdown.total().value();
	CHECK(out[1].breakdown.t_wait.value() == 0.0);
	for (const auto& z : out) {
		CHECK(z.breakdown.total().value() == doctest::Approx(slow));
	}
	CHECK_THROWS_AS(compose_zones(ModelTag::kVmra, symmetric, default_params(), 3), std::invalid_argument);
}

TEST_CASE("per-zone user overrides apply to matching meet cells")
{
	auto cfg = config(Scenario::kMeetBySome);
	cfg.zone_range = {2, 3};
	cfg.zone_users = {100, 20, 60};
	const auto r = run_scenario(cfg);
	CHECK(cell(r, ModelTag::kVmra, 3).total_users == 180);
	CHECK(cell(r, ModelTag::kVmra, 3).max_users_per_zone == 100);
	CHECK(cell(r, ModelTag::kVmra, 2).total_users == 800);
}

TEST_CASE("results do not depend on the job count")
{
	for (auto s : {Scenario::kMaxUsers, Scenario::kMeetByAll, Scenario::kMeetBySome}) {
		auto cfg = config(s);
		const auto serial = to_csv(run_scenario(cfg));
		cfg.jobs = 4;
		CHECK(to_csv(run_scenario(cfg)) == serial);
	}
}

TEST_CASE("config validation")
{
	auto cfg = config(Scenario::kMaxUsers);
	cfg.zone_range.clear();
	CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
	cfg = config(Scenario::kMaxUsers);
	cfg.models.clear();
	CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
	cfg = config(Scenario::kMaxUsers);
	cfg.zone_range = {0};
	CHECK_THROWS_AS(run_scenario(cfg), ConfigError);
	CHECK(parse_model("VMRA") == ModelTag::kVmra);
	CHECK_FALSE(parse_model("vmra"));
	CHECK(parse_scenario("meet-by-some") == Scenario::kMeetBySome);
	CHECK_FALSE(parse_scenario("fig4"));
}

TEST_CASE("CSV and figures")
{
	ScenarioResult empty;
	CHECK(to_csv(empty) == std::string(kCsvHeader) + "\n");
	CHECK(parse_csv(to_csv(empty)).empty());
	CHECK_THROWS_AS(parse_csv("nope\n"), std::invalid_argument);

	const auto r = run_scenario(config(Scenario::kMeetBySome));
	const auto csv = to_csv(r);
	const auto rows = parse_csv(csv);
	REQUIRE(rows.size() == 24);
	CHECK(rows[0].model == "VMRA");
	CHECK(rows[18].model == "FixedNodes");
	CHECK(rows[18].violation_ratio == doctest::Approx(0.726027));

	const fs::path dir = fs::temp_directory_path() / "vmra_harness_test";
	fs::remove_all(dir);
	const auto written = emit_results(r, dir);
	REQUIRE(written.size() == 3);
	CHECK(written[0].filename() == "fig8_fig9.csv");
	CHECK(slurp(written[0]) == csv);
	for (std::size_t i = 1; i < written.size(); ++i) {
		const auto svg = slurp(written[i]);
		CHECK(svg.rfind("<svg", 0) == 0);
		CHECK(svg.find("FixedNodes") != std::string::npos);
		CHECK(svg.find("href") == std::string::npos);
	}
	CHECK(slurp(emit_results(r, dir)[1]) == slurp(written[1]));
	fs::remove_all(dir);

	std::ofstream(fs::temp_directory_path() / "vmra_not_a_dir") << "x";
	CHECK_THROWS_AS(emit_results(r, fs::temp_directory_path() / "vmra_not_a_dir"), OutputError);
	fs::remove(fs::temp_directory_path() / "vmra_not_a_dir");
}

TEST_CASE("random per-zone local times compose consistently")
{
	std::mt19937_64 rng(3);
	std::uniform_real_distribution<double> d(0.0, 500.0);
	for (int t = 0; t < 500; ++t) {
		std::vector<Milliseconds> local(1 + rng() % 8);
		for (auto& l : local) {
			l = Milliseconds(d(rng));
		}
		const auto w = cross_zone_waits(local);
		double top = 0;
		for (auto l : local) {
			top = std::max(top, l.value());
		}
		bool zero = false;
		for (std::size_t i = 0; i < w.size(); ++i) {
			CHECK(w[i].value() >= 0.0);
			zero = zero || w[i].value() == 0.0;
			CHECK(local[i].value() + w[i].value() == doctest::Approx(top));
		}
		CHECK(zero);
	}
}
