#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "jobshop/bench.hpp"

using namespace jobshop;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("bench_test_" + name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("overage arithmetic") {
    CHECK(compute_overage(1023, 930) == doctest::Approx(10.0));
    CHECK(compute_overage(930, 930) == doctest::Approx(0.0));
    CHECK_THROWS_WITH_AS(compute_overage(900, 930), doctest::Contains("broken optimum registry"),
                         std::runtime_error);
    CHECK_THROWS_AS(compute_overage(5, 0), std::invalid_argument);
}

TEST_CASE("optima registry parsing") {
    TempFile good("registry.txt", "# classic instances\nft10 930\nabz5 1234\n");
    const auto reg = load_optima_registry(good.path);
    CHECK(reg.size() == 2);
    CHECK(reg.at("ft10") == 930);

    TempFile empty("empty.txt", "");
    CHECK(load_optima_registry(empty.path).empty());

    TempFile bad("bad.txt", "ft10 abc\n");
    CHECK_THROWS_WITH_AS(load_optima_registry(bad.path), doctest::Contains("line 1"),
                         std::runtime_error);

    CHECK_THROWS_AS(load_optima_registry("no_such_file_here.txt"), std::runtime_error);
}

TEST_CASE("a tiny exact-computed suite reports zero overage") {
    TempFile t1("t1.jss", "2 2\n0 3 1 2\n1 2 0 4\n");
    BenchConfig cfg;
    cfg.instance_files = {t1.path};
    cfg.heuristics = {{HeuristicSpec::Kind::Spt}, {HeuristicSpec::Kind::Mor}};
    cfg.optima = OptimaSource::ExactCompute;
    const auto report = run_suite(cfg);
    REQUIRE(report.rows.size() == 2);
    for (const auto& row : report.rows) {
        CHECK(row.error.empty());
        CHECK(row.makespan == 7);
        REQUIRE(row.overage_pct);
        CHECK(*row.overage_pct == doctest::Approx(0.0));
    }
}

TEST_CASE("exact-compute optima refuse large instances") {
    BenchConfig cfg;
    cfg.gen_jobs = 4;
    cfg.gen_machines = 4; // 16 ops > 14
    cfg.gen_count = 1;
    cfg.heuristics = {{HeuristicSpec::Kind::Spt}};
    cfg.optima = OptimaSource::ExactCompute;
    CHECK_THROWS_AS(run_suite(cfg), std::invalid_argument);
}

TEST_CASE("optima none leaves the overage columns empty") {
    BenchConfig cfg;
    cfg.gen_jobs = 3;
    cfg.gen_machines = 3;
    cfg.gen_count = 2;
    cfg.heuristics = {{HeuristicSpec::Kind::Mwr}};
    const auto report = run_suite(cfg);
    REQUIRE(report.rows.size() == 2);
    for (const auto& row : report.rows) {
        CHECK(!row.optimum);
        CHECK(!row.overage_pct);
        CHECK(row.makespan > 0);
    }
    const auto csv = report.to_csv();
    CHECK(csv.find("instance,heuristic,makespan") == 0);
}

TEST_CASE("refinement never increases a makespan") {
    BenchConfig cfg;
    cfg.gen_jobs = 6;
    cfg.gen_machines = 5;
    cfg.gen_count = 4;
    cfg.refine = true;
    cfg.heuristics = {{HeuristicSpec::Kind::Mor},
                      {HeuristicSpec::Kind::RestrictedDd, DdModel::M2, 16, 4}};
    const auto report = run_suite(cfg);
    for (const auto& row : report.rows) {
        REQUIRE(row.error.empty());
        REQUIRE(row.makespan_after_lns1);
        CHECK(*row.makespan_after_lns1 <= row.makespan);
    }
}

TEST_CASE("suite results are identical across runs and worker counts") {
    BenchConfig cfg;
    cfg.gen_jobs = 5;
    cfg.gen_machines = 5;
    cfg.gen_count = 3;
    cfg.refine = true;
    cfg.heuristics = {{HeuristicSpec::Kind::Spt},
                      {HeuristicSpec::Kind::RestrictedDd, DdModel::M2, 32, 8}};

    const auto a = run_suite(cfg);
    cfg.workers = 4;
    const auto b = run_suite(cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].instance == b.rows[i].instance);
        CHECK(a.rows[i].heuristic == b.rows[i].heuristic);
        CHECK(a.rows[i].makespan == b.rows[i].makespan);
        CHECK(a.rows[i].makespan_after_lns1 == b.rows[i].makespan_after_lns1);
    }
}

TEST_CASE("the aggregate table mirrors the overage columns") {
    TempFile t1("t1b.jss", "2 2\n0 3 1 2\n1 2 0 4\n");
    BenchConfig cfg;
    cfg.instance_files = {t1.path};
    cfg.refine = true;
    cfg.heuristics = {{HeuristicSpec::Kind::Spt}};
    cfg.optima = OptimaSource::ExactCompute;
    const auto table = run_suite(cfg).to_table();
    CHECK(table.find("Heuristic") != std::string::npos);
    CHECK(table.find("After LNS1") != std::string::npos);
    CHECK(table.find("SPT") != std::string::npos);
    CHECK(table.find("0.0%") != std::string::npos);
}

TEST_CASE("heuristic labels") {
    CHECK(HeuristicSpec{HeuristicSpec::Kind::Spt}.label() == "SPT");
    HeuristicSpec dd{HeuristicSpec::Kind::RestrictedDd, DdModel::M1, 200};
    CHECK(dd.label() == "DD(m1,W=200)");
    HeuristicSpec sb{HeuristicSpec::Kind::ShiftingBottleneck};
    sb.reoptimize = false;
    CHECK(sb.label() == "SB-noreopt");
}
