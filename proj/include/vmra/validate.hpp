#ifndef VMRA_VALIDATE_HPP
#define VMRA_VALIDATE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vmra/allocation.hpp"
#include "vmra/params.hpp"

namespace vmra {

/// Constraint families checked on a concrete allocation, named by the
/// equation of the allocation model they come from.
enum class Constraint
{
	kSingleHost,      // (3) a VM lives on exactly one server of the zone
	kUserAssignment,  // (4) every user is connected to exactly one VM
	kHostedIfUsed,    // (5) a VM with users must be hosted
	kNonEmpty,        // (6) a hosted VM serves at least one user
	kServerCapacity,  // (13) operating overhead plus mixing fits the server
	kMaxUsers,        // (14) V_z bounds every VM's user count
	kQos,             // (15) zone response time within the threshold
};

int equation_number(Constraint c);
std::string to_string(Constraint c);  // "(13) server capacity"

struct Violation
{
	Constraint constraint;
	std::optional<std::size_t> server;
	std::optional<std::size_t> vm;
	std::string detail;
};

using ViolationReport = std::vector<Violation>;

/// Checks (3)–(6), (13), (14) and (15). An empty report means the
/// allocation is feasible. Never throws on malformed allocations; entries
/// missing from the shorter of vm_server/vm_users read as unhosted/empty.
ViolationReport validate_allocation(const ZoneAllocation& alloc, const MixingParams& p);

/// Distinct constraint families present in a report, in enum order.
std::vector<Constraint> violated_constraints(const ViolationReport& report);

} // namespace vmra

#endif // VMRA_VALIDATE_HPP
