#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jobshop/decision_diagram.hpp"
#include "jobshop/dispatch.hpp"
#include "jobshop/instance.hpp"

namespace jobshop {

struct HeuristicSpec {
    enum class Kind { Spt, Mwr, Mor, ShiftingBottleneck, RestrictedDd };
    Kind kind = Kind::Spt;
    // restricted-DD parameters
    DdModel model = DdModel::M2;
    std::size_t width = 400;
    int collect = 32;
    RankMode rank = RankMode::Cost;
    // shifting-bottleneck parameter
    bool reoptimize = true;

    std::string label() const;
};

enum class OptimaSource { None, Registry, ExactCompute };

struct BenchConfig {
    // instance sources: files and/or a generator batch
    std::vector<std::string> instance_files;
    int gen_jobs = 0; // generator inactive while 0
    int gen_machines = 0;
    int gen_count = 0;
    std::uint64_t gen_seed = 1;

    std::vector<HeuristicSpec> heuristics;
    bool refine = false;          // run the critical-path refinement afterwards
    long long lns1_budget = 10000;

    OptimaSource optima = OptimaSource::None;
    std::string optima_path;

    int workers = 1;
};

struct BenchRow {
    std::string instance;
    std::string heuristic;
    Time makespan = 0;
    std::optional<Time> makespan_after_lns1;
    std::optional<Time> optimum;
    std::optional<double> overage_pct;
    std::optional<double> overage_after_pct;
    double wall_ms = 0; // heuristic time only, refinement excluded
    std::string error;  // row failed when non-empty
};

struct BenchReport {
    std::vector<BenchRow> rows;

    std::string to_csv() const;
    // per-heuristic aggregate: mean time / overage / overage after refinement
    std::string to_table() const;
};

// 100 * (makespan - optimum) / optimum. A makespan below the optimum means a
// corrupt registry or an infeasibility bug, and throws.
double compute_overage(Time makespan, Time optimum);

// "name optimum" per line, '#' comments. Parse errors carry line numbers.
std::map<std::string, Time> load_optima_registry(const std::string& path);

BenchReport run_suite(const BenchConfig& config);

} // namespace jobshop
