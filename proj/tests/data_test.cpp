#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "jobshop/bench.hpp"
#include "jobshop/instance.hpp"

using namespace jobshop;

namespace {

const char* kNames[] = {"abz5",  "abz6",  "ft10",  "la16",  "la17",  "la18",
                        "la19",  "la20",  "orb01", "orb02", "orb03", "orb04",
                        "orb05", "orb06", "orb07", "orb08", "orb09", "orb10"};

Instance load(const std::string& name) {
    const auto path = std::filesystem::path(JOBSHOP_DATA_DIR) / "jsplib" / name;
    std::ifstream in(path);
    REQUIRE(in);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str(), name);
}

} // namespace

TEST_CASE("the bundled registry covers all 18 classic instances") {
    const auto registry =
        load_optima_registry((std::filesystem::path(JOBSHOP_DATA_DIR) / "optima.txt").string());
    CHECK(registry.size() == 18);
    for (const auto* name : kNames) CHECK(registry.count(name) == 1);
    CHECK(registry.at("ft10") == 930);
    CHECK(registry.at("abz5") == 1234);
    CHECK(registry.at("orb07") == 397);
}

TEST_CASE("every bundled instance parses as a full-permutation 10x10") {
    for (const auto* name : kNames) {
        const auto inst = load(name);
        CHECK(inst.n_jobs() == 10);
        CHECK(inst.n_machines() == 10);
        CHECK(inst.n_ops() == 100);
    }
}

TEST_CASE("simple load bounds stay below the registered optima") {
    const auto registry =
        load_optima_registry((std::filesystem::path(JOBSHOP_DATA_DIR) / "optima.txt").string());
    for (const auto* name : kNames) {
        const auto inst = load(name);
        const Time opt = registry.at(name);
        Time lb = 0;
        for (int m = 0; m < inst.n_machines(); ++m) lb = std::max(lb, inst.machine_load(m));
        for (int j = 0; j < inst.n_jobs(); ++j) lb = std::max(lb, inst.job_length(j));
        INFO(name, ": load bound ", lb, " vs optimum ", opt);
        CHECK(lb <= opt);
    }
}
