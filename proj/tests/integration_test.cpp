#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "jobshop/decision_diagram.hpp"
#include "jobshop/disjunctive_graph.hpp"
#include "jobshop/dispatch.hpp"
#include "jobshop/schedule.hpp"

using namespace jobshop;

namespace {

// Start-ordered permutation of a feasible schedule. Same-machine starts are
// distinct, and job predecessors finish strictly before their successors
// start, so any tie-break yields a CFP-valid order.
OpOrder order_of(const Instance& inst, const Schedule& s) {
    OpOrder order;
    for (int j = 0; j < inst.n_jobs(); ++j)
        for (int p = 0; p < inst.n_machines(); ++p) order.push_back({j, p});
    std::sort(order.begin(), order.end(), [&](const OperationId& a, const OperationId& b) {
        const Time sa = s.start[inst.op_index(a)];
        const Time sb = s.start[inst.op_index(b)];
        if (sa != sb) return sa < sb;
        return a < b;
    });
    return order;
}

} // namespace

TEST_CASE("every module's schedule feeds back through CFP at its makespan or better") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const auto inst = generate_random_instance(5 + seed % 3, 4 + seed % 3, seed * 53);

        std::vector<Schedule> produced;
        produced.push_back(dispatch(inst, DispatchRule::Spt));
        produced.push_back(dispatch(inst, DispatchRule::Mwr));
        produced.push_back(dispatch(inst, DispatchRule::Mor));
        produced.push_back(shifting_bottleneck(inst, true));
        auto dd = compile_restricted(inst, DdModel::M2, 32, RankMode::Cost, 2);
        for (auto& s : dd.schedules) produced.push_back(std::move(s));
        const auto g = build_graph(inst, machine_orders_of(inst, produced.front()));
        produced.push_back(graph_to_schedule(lns1_refine(g, 2000).best_graph));

        for (const auto& s : produced) {
            REQUIRE(!validate_schedule(inst, s));
            const auto cfp = cost_from_partial(inst, order_of(inst, s));
            CHECK(cfp.makespan <= s.makespan);
        }
    }
}

TEST_CASE("SB with reoptimization never averages worse without it") {
    double with = 0, without = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto inst = generate_random_instance(7, 6, seed * 101);
        with += static_cast<double>(shifting_bottleneck(inst, true).makespan);
        without += static_cast<double>(shifting_bottleneck(inst, false).makespan);
    }
    CHECK(with <= without);
}

TEST_CASE("restricted DD solutions refine below the best dispatch rule on average") {
    double dd_refined = 0, best_rule = 0;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto inst = generate_random_instance(8, 8, seed * 71);
        Time rule_best = dispatch(inst, DispatchRule::Mor).makespan;
        rule_best = std::min(rule_best, dispatch(inst, DispatchRule::Mwr).makespan);
        best_rule += static_cast<double>(rule_best);

        const auto res = compile_restricted(inst, DdModel::M2, 100, RankMode::Cost, 8);
        Time refined = res.best_makespan;
        for (const auto& s : res.schedules) {
            const auto g = build_graph(inst, machine_orders_of(inst, s));
            refined = std::min(refined, lns1_refine(g, 3000).best_makespan);
        }
        dd_refined += static_cast<double>(refined);
    }
    CHECK(dd_refined < best_rule);
}
