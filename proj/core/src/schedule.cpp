#include "jobshop/schedule.hpp"

#include <algorithm>

namespace jobshop {

CfpResult cost_from_partial(const Instance& instance, std::span<const OperationId> order,
                            std::vector<Time> machine_finish_init,
                            const std::vector<std::pair<OperationId, Time>>& done_times) {
    const int n_ops = instance.n_ops();
    CfpResult res;
    res.start.assign(n_ops, -1);
    res.completion.assign(n_ops, -1);
    if (machine_finish_init.empty()) {
        res.machine_finish.assign(instance.n_machines(), 0);
    } else {
        if (static_cast<int>(machine_finish_init.size()) != instance.n_machines())
            throw std::invalid_argument("machine_finish_init size mismatch");
        res.machine_finish = std::move(machine_finish_init);
    }

    std::vector<Time> op_completion(n_ops, -1);
    for (const auto& [op, t] : done_times) op_completion[instance.op_index(op)] = t;

    for (const auto& op : order) {
        if (op.job < 0 || op.job >= instance.n_jobs() || op.position < 0 ||
            op.position >= instance.n_machines())
            throw std::invalid_argument("operation " + to_string(op) + " out of range");
        Time s = res.machine_finish[instance.machine_of(op)];
        if (auto pre = instance.predecessor(op)) {
            const Time pre_done = op_completion[instance.op_index(*pre)];
            if (pre_done < 0) throw MissingPrerequisiteError(op);
            s = std::max(s, pre_done);
        }
        const Time c = s + instance.duration_of(op);
        const int idx = instance.op_index(op);
        res.start[idx] = s;
        res.completion[idx] = c;
        op_completion[idx] = c;
        res.machine_finish[instance.machine_of(op)] = c;
    }

    res.makespan = 0;
    for (const Time t : res.machine_finish) res.makespan = std::max(res.makespan, t);
    return res;
}

Schedule schedule_from_order(const Instance& instance, std::span<const OperationId> order) {
    if (static_cast<int>(order.size()) != instance.n_ops())
        throw std::invalid_argument("order covers " + std::to_string(order.size()) + " of " +
                                    std::to_string(instance.n_ops()) + " operations");
    auto cfp = cost_from_partial(instance, order);
    for (const Time t : cfp.completion)
        if (t < 0) throw std::invalid_argument("order repeats an operation");
    Schedule s;
    s.start = std::move(cfp.start);
    s.completion = std::move(cfp.completion);
    s.makespan = cfp.makespan;
    return s;
}

std::optional<std::string> validate_schedule(const Instance& instance, const Schedule& schedule) {
    const int n_ops = instance.n_ops();
    if (static_cast<int>(schedule.start.size()) != n_ops ||
        static_cast<int>(schedule.completion.size()) != n_ops)
        return "schedule does not cover all operations";

    Time max_completion = 0;
    for (int i = 0; i < n_ops; ++i) {
        const OperationId op = instance.op_at(i);
        if (schedule.start[i] < 0) return "operation " + to_string(op) + " has negative start";
        if (schedule.completion[i] != schedule.start[i] + instance.duration_of(op))
            return "operation " + to_string(op) + " completion != start + duration";
        max_completion = std::max(max_completion, schedule.completion[i]);
    }
    if (schedule.makespan != max_completion)
        return "makespan " + std::to_string(schedule.makespan) +
               " != max completion " + std::to_string(max_completion);

    for (int j = 0; j < instance.n_jobs(); ++j) {
        for (int p = 1; p < instance.n_machines(); ++p) {
            const OperationId prev{j, p - 1}, cur{j, p};
            if (schedule.start[instance.op_index(cur)] <
                schedule.completion[instance.op_index(prev)])
                return "precedence violation: " + to_string(prev) + " -> " + to_string(cur);
        }
    }

    for (int m = 0; m < instance.n_machines(); ++m) {
        auto ops = instance.ops_on_machine(m);
        std::sort(ops.begin(), ops.end(), [&](const OperationId& a, const OperationId& b) {
            return schedule.start[instance.op_index(a)] < schedule.start[instance.op_index(b)];
        });
        for (size_t k = 1; k < ops.size(); ++k) {
            if (schedule.start[instance.op_index(ops[k])] <
                schedule.completion[instance.op_index(ops[k - 1])])
                return "overlap on machine " + std::to_string(m) + ": " +
                       to_string(ops[k - 1]) + " and " + to_string(ops[k]);
        }
    }
    return std::nullopt;
}

std::vector<std::vector<OperationId>> machine_orders_of(const Instance& instance,
                                                        const Schedule& schedule) {
    std::vector<std::vector<OperationId>> orders(instance.n_machines());
    for (int m = 0; m < instance.n_machines(); ++m) {
        orders[m] = instance.ops_on_machine(m);
        std::sort(orders[m].begin(), orders[m].end(),
                  [&](const OperationId& a, const OperationId& b) {
                      const Time sa = schedule.start[instance.op_index(a)];
                      const Time sb = schedule.start[instance.op_index(b)];
                      if (sa != sb) return sa < sb;
                      return a < b;
                  });
    }
    return orders;
}

} // namespace jobshop
