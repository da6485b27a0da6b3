#ifndef VMRA_ILP_HPP
#define VMRA_ILP_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vmra/allocation.hpp"
#include "vmra/params.hpp"

namespace vmra::ilp {

enum class VarKind { kBinary, kInteger };
enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct Variable
{
	std::string name;
	VarKind kind;
	double lower;
	double upper;
};

struct Term
{
	std::size_t var;
	double coeff;
};

/// One linear constraint, tagged with the model equation it encodes.
struct Row
{
	std::string name;
	int equation;
	std::vector<Term> terms;
	Sense sense;
	double rhs;
};

/**
 * The allocation ILP of one zone, fully expanded.
 *
 * Variables are laid out as x_{i,j} (server i hosts VM j), then u_j, then
 * the linearisation variables c_{i,j}, then V_z. The user-to-VM matrix is
 * aggregated into u_j because users are interchangeable.
 */
struct IlpInstance
{
	std::size_t n_servers = 0;
	std::size_t n_users = 0;
	std::size_t n_zones = 0;
	MixingParams params;
	std::size_t big_m = 0;
	std::vector<Variable> variables;
	std::vector<Term> objective;
	std::vector<Row> rows;

	std::size_t x(std::size_t i, std::size_t j) const { return i * n_users + j; }
	std::size_t u(std::size_t j) const { return n_servers * n_users + j; }
	std::size_t c(std::size_t i, std::size_t j) const { return n_servers * n_users + n_users + i * n_users + j; }
	std::size_t vz() const { return 2 * n_servers * n_users + n_users; }
};

/// Builds the instance for `m_users` users. Requires the linear mixing forms
/// (value tables cannot be written as linear rows); throws ConfigError for
/// invalid parameters and std::invalid_argument for m_users == 0 or tables.
IlpInstance build_instance(const MixingParams& p, std::size_t m_users);

struct IlpSolution
{
	ZoneAllocation alloc;
	double objective_value = 0.0;
	bool optimal = false;
};

enum class SolveStatus { kOptimal, kInfeasible, kBudgetExhausted };

/// Which constraint family rules out every allocation.
enum class Binding { kNone, kQos, kCapacity };

struct SolveResult
{
	SolveStatus status = SolveStatus::kInfeasible;
	std::optional<IlpSolution> solution;
	Binding binding = Binding::kNone;
	std::size_t nodes = 0;
};

inline constexpr std::size_t kDefaultNodeBudget = 5'000'000;

/**
 * Exact minimisation of VM count + V_z/M_z.
 *
 * VM counts are tried in ascending order and, for each, V_z ascending from
 * ⌈M/α⌉ up to the largest value allowed by the QoS row. For a candidate
 * (α, V_z) a depth-first search enumerates non-increasing user partitions
 * together with a placement on interchangeable servers, pruning on server
 * capacity. Since 0 < V_z/M_z <= 1 for every feasible point, the first hit is
 * optimal. Intended for desk-scale instances (M_z up to a few dozen).
 */
SolveResult solve_exact(const IlpInstance& inst, std::size_t node_budget = kDefaultNodeBudget);

/// CPLEX-LP text, byte-stable for identical instances.
std::string export_lp(const IlpInstance& inst);

/// Variable vector encoding `alloc` (c_{i,j} = u_j·x_{i,j}, V_z as declared
/// or max(u)). Returns std::nullopt if the allocation has more VMs than the
/// instance has VM columns or a host outside the zone.
std::optional<std::vector<double>> encode(const IlpInstance& inst, const ZoneAllocation& alloc);

bool satisfied(const Row& row, std::span<const double> values);
double objective_value(const IlpInstance& inst, std::span<const double> values);

struct Verification
{
	bool feasible = false;
	double objective = 0.0;
	std::vector<std::string> violated;  // row or bound names
	std::vector<int> equations;         // distinct equation tags, ascending
};

/// Evaluates every row and bound of the instance on `alloc`.
Verification verify_solution(const IlpInstance& inst, const ZoneAllocation& alloc);

/// Exact decimal rendering used in LP text ("2", "0.333333333333").
std::string format_number(double value);

} // namespace vmra::ilp

#endif // VMRA_ILP_HPP
