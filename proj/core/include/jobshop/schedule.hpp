#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jobshop/instance.hpp"
#include "jobshop/types.hpp"

namespace jobshop {

// A (possibly partial) ordering of operations, scheduled left to right.
using OpOrder = std::vector<OperationId>;

// Complete schedule: start/completion per operation, dense op_index layout.
struct Schedule {
    std::vector<Time> start;
    std::vector<Time> completion;
    Time makespan = 0;

    Time start_of(const Instance& inst, OperationId op) const { return start[inst.op_index(op)]; }
    Time completion_of(const Instance& inst, OperationId op) const {
        return completion[inst.op_index(op)];
    }
};

// Thrown when an operation is scheduled before its job predecessor.
class MissingPrerequisiteError : public std::runtime_error {
public:
    explicit MissingPrerequisiteError(OperationId op)
        : std::runtime_error("Missing Prerequisite: operation " + to_string(op) +
                             " scheduled before its job predecessor"),
          op(op) {}
    OperationId op;
};

// Result of accumulating a partial order: completion times for the processed
// ops (-1 where untouched) and the running machine finish vector.
struct CfpResult {
    Time makespan = 0;
    std::vector<Time> start;          // -1 for ops not in the order
    std::vector<Time> completion;     // -1 for ops not in the order
    std::vector<Time> machine_finish; // one entry per machine
};

// Semi-active accumulation of `order`: each op starts at the max of its
// machine's finish time and its predecessor's completion; no idle time is
// inserted. `machine_finish_init` defaults to all zeros; `done_times`
// supplies completion times for predecessors scheduled before this call.
// Throws MissingPrerequisiteError when an op's predecessor is neither in
// done_times nor earlier in the order.
CfpResult cost_from_partial(const Instance& instance, std::span<const OperationId> order,
                            std::vector<Time> machine_finish_init = {},
                            const std::vector<std::pair<OperationId, Time>>& done_times = {});

// CFP over a complete order, packaged as a Schedule. Throws if the order
// does not cover every operation exactly once.
Schedule schedule_from_order(const Instance& instance, std::span<const OperationId> order);

// First violated constraint (job precedence, machine overlap, completion
// arithmetic, missing op), or nullopt when the schedule is feasible.
std::optional<std::string> validate_schedule(const Instance& instance, const Schedule& schedule);

// Ops of each machine sorted by start time; the order the schedule implies.
std::vector<std::vector<OperationId>> machine_orders_of(const Instance& instance,
                                                        const Schedule& schedule);

} // namespace jobshop
