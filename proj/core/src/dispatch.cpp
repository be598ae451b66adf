#include "jobshop/dispatch.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "jobshop/disjunctive_graph.hpp"
#include "jobshop/one_machine.hpp"

namespace jobshop {

Schedule dispatch(const Instance& instance, DispatchRule rule) {
    const int n = instance.n_jobs();
    const int m = instance.n_machines();

    std::vector<int> next_position(n, 0);
    std::vector<Time> machine_free(m, 0);
    std::vector<Time> job_free(n, 0);
    std::vector<Time> work_remaining(n);
    for (int j = 0; j < n; ++j) work_remaining[j] = instance.job_length(j);

    // earliest completion over the ready ops of one machine
    auto machine_min_ect = [&](int mach) {
        Time ect = std::numeric_limits<Time>::max();
        for (int j = 0; j < n; ++j) {
            if (next_position[j] >= m) continue;
            const OperationId op{j, next_position[j]};
            if (instance.machine_of(op) != mach) continue;
            ect = std::min(ect,
                           std::max(machine_free[mach], job_free[j]) + instance.duration_of(op));
        }
        return ect;
    };

    OpOrder order;
    order.reserve(instance.n_ops());
    for (int step = 0; step < instance.n_ops(); ++step) {
        // dispatch among the non-dominated ready ops: an op is dominated when
        // it could only start after another op on its machine has finished
        std::vector<Time> min_ect(m, std::numeric_limits<Time>::max());
        for (int mach = 0; mach < m; ++mach) min_ect[mach] = machine_min_ect(mach);

        int pick = -1;
        for (int j = 0; j < n; ++j) {
            if (next_position[j] >= m) continue;
            const OperationId op{j, next_position[j]};
            const int mach = instance.machine_of(op);
            if (std::max(machine_free[mach], job_free[j]) >= min_ect[mach]) continue;
            if (pick < 0) {
                pick = j;
                continue;
            }
            bool better = false;
            switch (rule) {
            case DispatchRule::Mwr:
                better = work_remaining[j] > work_remaining[pick];
                break;
            case DispatchRule::Mor:
                better = (m - next_position[j]) > (m - next_position[pick]);
                break;
            case DispatchRule::Spt:
                better = instance.duration_of({j, next_position[j]}) <
                         instance.duration_of({pick, next_position[pick]});
                break;
            }
            if (better) pick = j;
            // equal rule values keep the lower (job, position) candidate
        }
        const OperationId op{pick, next_position[pick]};
        order.push_back(op);
        const int mach = instance.machine_of(op);
        const Time done = std::max(machine_free[mach], job_free[pick]) + instance.duration_of(op);
        machine_free[mach] = done;
        job_free[pick] = done;
        work_remaining[pick] -= instance.duration_of(op);
        ++next_position[pick];
    }
    return schedule_from_order(instance, order);
}

namespace {

// Cycle-proof fallback order: ascending head, then job index. New arcs then
// always point along current reachability, so no circuit can close.
std::vector<OperationId> order_by_heads(const Instance& instance, int machine,
                                        const std::vector<Time>& dist_from_source,
                                        const DisjunctiveGraph& g) {
    auto ops = instance.ops_on_machine(machine);
    std::sort(ops.begin(), ops.end(), [&](const OperationId& a, const OperationId& b) {
        const Time ra = dist_from_source[g.node_of(a)];
        const Time rb = dist_from_source[g.node_of(b)];
        if (ra != rb) return ra < rb;
        return a < b;
    });
    return ops;
}

struct SubproblemSolution {
    std::vector<OperationId> sequence;
    Time value = 0; // optimal max(C_j + q_j)
};

SubproblemSolution solve_machine_subproblem(const Instance& instance, int machine,
                                            const std::vector<Time>& heads,
                                            const std::vector<Time>& tails_after,
                                            const DisjunctiveGraph& g) {
    const auto& ops = instance.ops_on_machine(machine);
    OneMachineProblem pb;
    for (const auto& op : ops) {
        pb.release.push_back(heads[g.node_of(op)]);
        pb.processing.push_back(instance.duration_of(op));
        pb.due.push_back(-tails_after[g.node_of(op)]);
    }
    const auto res = solve_one_machine_lmax(pb);
    SubproblemSolution sol;
    sol.value = res.l_max;
    for (const int k : res.sequence) sol.sequence.push_back(ops[k]);
    return sol;
}

} // namespace

Schedule shifting_bottleneck(const Instance& instance, bool reoptimize) {
    const int m = instance.n_machines();
    std::vector<std::vector<OperationId>> orders(m);
    std::vector<char> sequenced(m, 0);

    auto fix_machine = [&](int k, const std::vector<OperationId>& seq) {
        orders[k] = seq;
        sequenced[k] = 1;
        if (!longest_path_from_source(build_partial_graph(instance, orders))) {
            // optimal sequence closed a circuit with earlier fixations
            auto tmp = orders;
            tmp[k].clear();
            const auto g = build_partial_graph(instance, tmp);
            orders[k] = order_by_heads(instance, k, *longest_path_from_source(g), g);
        }
    };

    auto resolve = [&](int k) -> SubproblemSolution {
        auto tmp = orders;
        tmp[k].clear();
        const auto g = build_partial_graph(instance, tmp);
        const auto heads = longest_path_from_source(g);
        const auto to_sink = longest_path_to_sink(g);
        std::vector<Time> tails_after(g.n_nodes());
        for (int node = 1; node <= g.n_ops(); ++node)
            tails_after[node] = (*to_sink)[node] - g.duration_of_node(node);
        return solve_machine_subproblem(instance, k, *heads, tails_after, g);
    };

    for (int round = 0; round < m; ++round) {
        int bottleneck = -1;
        SubproblemSolution best;
        for (int k = 0; k < m; ++k) {
            if (sequenced[k]) continue;
            auto sol = resolve(k);
            if (bottleneck < 0 || sol.value > best.value) {
                bottleneck = k;
                best = std::move(sol);
            }
        }
        fix_machine(bottleneck, best.sequence);

        if (reoptimize) {
            for (int k = 0; k < m; ++k) {
                if (!sequenced[k] || k == bottleneck) continue;
                fix_machine(k, resolve(k).sequence);
            }
        }
    }

    const auto g = build_graph(instance, orders);
    return graph_to_schedule(g);
}

} // namespace jobshop
