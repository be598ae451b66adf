#include "jobshop/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "jobshop/disjunctive_graph.hpp"
#include "jobshop/schedule.hpp"

namespace jobshop {

std::string HeuristicSpec::label() const {
    switch (kind) {
    case Kind::Spt: return "SPT";
    case Kind::Mwr: return "MWR";
    case Kind::Mor: return "MOR";
    case Kind::ShiftingBottleneck: return reoptimize ? "SB" : "SB-noreopt";
    case Kind::RestrictedDd:
        return "DD(" + std::string(model == DdModel::M1 ? "m1" : "m2") +
               ",W=" + std::to_string(width) + ")";
    }
    return "?";
}

double compute_overage(Time makespan, Time optimum) {
    if (optimum < 1) throw std::invalid_argument("optimum must be >= 1");
    if (makespan < optimum)
        throw std::runtime_error("makespan " + std::to_string(makespan) +
                                 " below the registered optimum " + std::to_string(optimum) +
                                 ": broken optimum registry or infeasibility bug");
    return 100.0 * static_cast<double>(makespan - optimum) / static_cast<double>(optimum);
}

std::map<std::string, Time> load_optima_registry(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open optima registry " + path);
    std::map<std::string, Time> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        std::string name;
        long long value;
        if (!(fields >> name >> value))
            throw std::runtime_error(path + " line " + std::to_string(line_no) +
                                     ": expected \"name optimum\"");
        out[name] = static_cast<Time>(value);
    }
    return out;
}

namespace {

struct NamedInstance {
    Instance instance;
    std::optional<Time> optimum;
};

Schedule run_heuristic(const Instance& inst, const HeuristicSpec& spec,
                       std::vector<Schedule>& pool) {
    switch (spec.kind) {
    case HeuristicSpec::Kind::Spt: return dispatch(inst, DispatchRule::Spt);
    case HeuristicSpec::Kind::Mwr: return dispatch(inst, DispatchRule::Mwr);
    case HeuristicSpec::Kind::Mor: return dispatch(inst, DispatchRule::Mor);
    case HeuristicSpec::Kind::ShiftingBottleneck: return shifting_bottleneck(inst, spec.reoptimize);
    case HeuristicSpec::Kind::RestrictedDd: {
        auto res = compile_restricted(inst, spec.model, spec.width, spec.rank, spec.collect);
        pool = std::move(res.schedules);
        Schedule best = pool.front();
        for (const auto& s : pool)
            if (s.makespan < best.makespan) best = s;
        return best;
    }
    }
    throw std::logic_error("unknown heuristic kind");
}

Time refine_schedule(const Instance& inst, const Schedule& schedule, long long budget) {
    const auto g = build_graph(inst, machine_orders_of(inst, schedule));
    return lns1_refine(g, budget).best_makespan;
}

BenchRow run_cell(const NamedInstance& item, const HeuristicSpec& spec, const BenchConfig& cfg) {
    BenchRow row;
    row.instance = item.instance.name();
    row.heuristic = spec.label();
    try {
        std::vector<Schedule> pool;
        const auto t0 = std::chrono::steady_clock::now();
        Schedule best = run_heuristic(item.instance, spec, pool);
        const auto t1 = std::chrono::steady_clock::now();
        row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

        if (const auto violation = validate_schedule(item.instance, best))
            throw std::runtime_error("heuristic produced an infeasible schedule: " + *violation);
        row.makespan = best.makespan;

        if (cfg.refine) {
            // refinement runs on every collected solution and keeps the best;
            // its time stays out of wall_ms
            if (pool.empty()) pool.push_back(best);
            Time refined = best.makespan;
            for (const auto& s : pool)
                refined = std::min(refined, refine_schedule(item.instance, s, cfg.lns1_budget));
            row.makespan_after_lns1 = refined;
        }

        if (item.optimum) {
            row.optimum = item.optimum;
            row.overage_pct = compute_overage(row.makespan, *item.optimum);
            if (row.makespan_after_lns1)
                row.overage_after_pct = compute_overage(*row.makespan_after_lns1, *item.optimum);
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

std::string format_pct(const std::optional<double>& v) {
    if (!v) return "";
    std::ostringstream out;
    out << std::fixed << std::setprecision(1) << *v;
    return out.str();
}

} // namespace

std::string BenchReport::to_csv() const {
    std::ostringstream out;
    out << "instance,heuristic,makespan,makespan_after_lns1,optimum,overage_pct,"
           "overage_after_pct,wall_ms,error\n";
    for (const auto& r : rows) {
        out << r.instance << "," << r.heuristic << ",";
        if (r.error.empty()) out << r.makespan;
        out << ",";
        if (r.makespan_after_lns1) out << *r.makespan_after_lns1;
        out << ",";
        if (r.optimum) out << *r.optimum;
        out << "," << format_pct(r.overage_pct) << "," << format_pct(r.overage_after_pct) << ","
            << std::fixed << std::setprecision(2) << r.wall_ms << "," << r.error << "\n";
    }
    return out.str();
}

std::string BenchReport::to_table() const {
    struct Agg {
        int n = 0;
        double time_ms = 0;
        double overage = 0;
        int n_overage = 0;
        double overage_after = 0;
        int n_after = 0;
    };
    std::vector<std::pair<std::string, Agg>> aggs;
    auto agg_of = [&](const std::string& label) -> Agg& {
        for (auto& [name, agg] : aggs)
            if (name == label) return agg;
        aggs.emplace_back(label, Agg{});
        return aggs.back().second;
    };
    for (const auto& r : rows) {
        if (!r.error.empty()) continue;
        auto& a = agg_of(r.heuristic);
        ++a.n;
        a.time_ms += r.wall_ms;
        if (r.overage_pct) {
            a.overage += *r.overage_pct;
            ++a.n_overage;
        }
        if (r.overage_after_pct) {
            a.overage_after += *r.overage_after_pct;
            ++a.n_after;
        }
    }

    std::ostringstream out;
    out << std::left << std::setw(16) << "Heuristic" << std::right << std::setw(10) << "Time"
        << std::setw(12) << "Overage" << std::setw(14) << "After LNS1" << "\n";
    for (const auto& [name, a] : aggs) {
        out << std::left << std::setw(16) << name << std::right << std::setw(9) << std::fixed
            << std::setprecision(2) << (a.n ? a.time_ms / a.n / 1000.0 : 0.0) << "s";
        if (a.n_overage)
            out << std::setw(11) << std::setprecision(1) << a.overage / a.n_overage << "%";
        else
            out << std::setw(12) << "-";
        if (a.n_after)
            out << std::setw(13) << std::setprecision(1) << a.overage_after / a.n_after << "%";
        else
            out << std::setw(14) << "-";
        out << "\n";
    }
    return out.str();
}

BenchReport run_suite(const BenchConfig& config) {
    // assemble instances
    std::vector<NamedInstance> items;
    for (const auto& path : config.instance_files) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open instance file " + path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        items.push_back({parse_instance(buffer.str(), std::filesystem::path(path).stem().string()),
                         std::nullopt});
    }
    for (int k = 0; k < config.gen_count; ++k)
        items.push_back({generate_random_instance(config.gen_jobs, config.gen_machines,
                                                  config.gen_seed + static_cast<std::uint64_t>(k)),
                         std::nullopt});
    if (items.empty()) throw std::invalid_argument("bench suite has no instances");
    if (config.heuristics.empty()) throw std::invalid_argument("bench suite has no heuristics");

    // optima
    if (config.optima == OptimaSource::Registry) {
        const auto registry = load_optima_registry(config.optima_path);
        for (auto& item : items) {
            const auto it = registry.find(item.instance.name());
            if (it != registry.end()) item.optimum = it->second;
        }
    } else if (config.optima == OptimaSource::ExactCompute) {
        for (auto& item : items) {
            if (item.instance.n_ops() > 14)
                throw std::invalid_argument("exact-compute optima need <= 14 operations, " +
                                            item.instance.name() + " has " +
                                            std::to_string(item.instance.n_ops()));
            item.optimum = full_expansion(item.instance, DdModel::M2).optimum;
        }
    }

    // cells in deterministic order, workers pull via an atomic cursor
    struct Cell {
        const NamedInstance* item;
        const HeuristicSpec* spec;
    };
    std::vector<Cell> cells;
    for (const auto& item : items)
        for (const auto& spec : config.heuristics) cells.push_back({&item, &spec});

    BenchReport report;
    report.rows.resize(cells.size());
    const int workers = std::max(1, config.workers);
    if (workers == 1) {
        for (size_t i = 0; i < cells.size(); ++i)
            report.rows[i] = run_cell(*cells[i].item, *cells[i].spec, config);
    } else {
        std::atomic<size_t> cursor{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (size_t i = cursor.fetch_add(1); i < cells.size(); i = cursor.fetch_add(1))
                    report.rows[i] = run_cell(*cells[i].item, *cells[i].spec, config);
            });
        }
        for (auto& t : pool) t.join();
    }
    return report;
}

} // namespace jobshop
