#include <doctest.h>

#include "jobshop/dispatch.hpp"
#include "jobshop/schedule.hpp"
#include "oracle.hpp"

using namespace jobshop;

namespace {
const char* kT1 = "2 2\n0 3 1 2\n1 2 0 4";
}

TEST_CASE("SPT picks the 2-unit op first and lands on the optimum of T1") {
    const auto t1 = parse_instance(kT1);
    const auto s = dispatch(t1, DispatchRule::Spt);
    CHECK(s.start[t1.op_index({1, 0})] == 0); // O10 (d=2) first on its machine
    CHECK(s.makespan == 7);
    CHECK(!validate_schedule(t1, s));
}

TEST_CASE("MWR prefers job 1 (6 > 5 remaining) and lands on 7") {
    const auto t1 = parse_instance(kT1);
    const auto s = dispatch(t1, DispatchRule::Mwr);
    CHECK(s.start[t1.op_index({1, 0})] == 0);
    CHECK(s.makespan == 7);
}

TEST_CASE("MOR breaks the all-equal tie toward job 0 and stays feasible") {
    const auto t1 = parse_instance(kT1);
    const auto s = dispatch(t1, DispatchRule::Mor);
    CHECK(s.start[t1.op_index({0, 0})] == 0);
    CHECK(s.makespan == 7);
    CHECK(!validate_schedule(t1, s));
}

TEST_CASE("a single job schedules identically under every rule") {
    const auto inst = parse_instance("1 3\n0 4 2 2 1 7");
    const auto a = dispatch(inst, DispatchRule::Spt);
    const auto b = dispatch(inst, DispatchRule::Mwr);
    const auto c = dispatch(inst, DispatchRule::Mor);
    CHECK(a.start == b.start);
    CHECK(b.start == c.start);
    CHECK(a.makespan == 13);
}

TEST_CASE("all rules produce feasible schedules on random instances") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto inst = generate_random_instance(4 + seed % 4, 3 + seed % 4, seed);
        for (const auto rule : {DispatchRule::Mwr, DispatchRule::Mor, DispatchRule::Spt}) {
            const auto s = dispatch(inst, rule);
            CHECK(!validate_schedule(inst, s));
        }
    }
}

TEST_CASE("shifting bottleneck solves T1 to the optimum") {
    const auto t1 = parse_instance(kT1);
    for (const bool reopt : {false, true}) {
        const auto s = shifting_bottleneck(t1, reopt);
        CHECK(!validate_schedule(t1, s));
        CHECK(s.makespan == 7);
    }
}

TEST_CASE("shifting bottleneck stays feasible on random instances") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const auto inst = generate_random_instance(4 + seed % 3, 3 + seed % 3, seed * 3);
        for (const bool reopt : {false, true}) {
            const auto s = shifting_bottleneck(inst, reopt);
            CHECK(!validate_schedule(inst, s));
            CHECK(s.makespan > 0);
        }
    }
}

TEST_CASE("shifting bottleneck beats pure dispatching on average") {
    double sb = 0, rules = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto inst = generate_random_instance(6, 6, seed * 11);
        sb += static_cast<double>(shifting_bottleneck(inst, true).makespan);
        rules += static_cast<double>(dispatch(inst, DispatchRule::Spt).makespan);
    }
    CHECK(sb < rules);
}
