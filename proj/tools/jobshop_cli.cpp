#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "jobshop/bench.hpp"
#include "jobshop/decision_diagram.hpp"
#include "jobshop/disjunctive_graph.hpp"
#include "jobshop/dispatch.hpp"
#include "jobshop/instance.hpp"
#include "jobshop/lp_export.hpp"
#include "jobshop/schedule.hpp"

namespace {

using namespace jobshop;

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_instance(buffer.str(), std::filesystem::path(path).stem().string());
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

DdModel parse_model(const std::string& text) {
    if (text == "m1") return DdModel::M1;
    if (text == "m2") return DdModel::M2;
    throw CLI::ValidationError("--model must be m1 or m2");
}

HeuristicSpec spec_for_rule(const std::string& rule, DdModel model, std::size_t width,
                            int collect) {
    HeuristicSpec spec;
    if (rule == "spt") spec.kind = HeuristicSpec::Kind::Spt;
    else if (rule == "mwr") spec.kind = HeuristicSpec::Kind::Mwr;
    else if (rule == "mor") spec.kind = HeuristicSpec::Kind::Mor;
    else if (rule == "sb") spec.kind = HeuristicSpec::Kind::ShiftingBottleneck;
    else if (rule == "sb-noreopt") {
        spec.kind = HeuristicSpec::Kind::ShiftingBottleneck;
        spec.reoptimize = false;
    } else if (rule == "dd") {
        spec.kind = HeuristicSpec::Kind::RestrictedDd;
        spec.model = model;
        spec.width = width;
        spec.collect = collect;
    } else {
        throw CLI::ValidationError("unknown rule " + rule +
                                   " (want spt|mwr|mor|sb|sb-noreopt|dd)");
    }
    return spec;
}

void print_schedule(const Instance& inst, const Schedule& s) {
    std::cout << "makespan " << s.makespan << "\n";
    const auto orders = machine_orders_of(inst, s);
    for (int m = 0; m < inst.n_machines(); ++m) {
        std::cout << "M" << m << ":";
        for (const auto& op : orders[m])
            std::cout << " " << to_string(op) << "@" << s.start[inst.op_index(op)];
        std::cout << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"job shop scheduling toolkit"};
    app.require_subcommand(1);

    // ---- gen ----------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "write random instances to files");
    int gen_jobs = 10, gen_machines = 10, gen_count = 1;
    std::uint64_t gen_seed = 1;
    long long gen_lo = 1, gen_hi = 99;
    std::string gen_out = ".";
    gen->add_option("--jobs", gen_jobs, "jobs per instance");
    gen->add_option("--machines", gen_machines, "machines per instance");
    gen->add_option("--count", gen_count, "number of instances");
    gen->add_option("--seed", gen_seed, "seed of the first instance");
    gen->add_option("--lo", gen_lo, "minimum duration");
    gen->add_option("--hi", gen_hi, "maximum duration");
    gen->add_option("--out", gen_out, "output directory");

    // ---- solve --------------------------------------------------------
    auto* solve = app.add_subcommand("solve", "run one heuristic on one instance");
    std::string solve_file, solve_rule = "dd", solve_model = "m2";
    std::size_t solve_width = 400;
    int solve_collect = 32;
    bool solve_refine = false;
    solve->add_option("instance", solve_file, "instance file")->required();
    solve->add_option("--rule", solve_rule, "spt|mwr|mor|sb|sb-noreopt|dd");
    solve->add_option("--model", solve_model, "DD state model (m1|m2)");
    solve->add_option("--width", solve_width, "restricted DD width");
    solve->add_option("--collect", solve_collect, "schedules kept for refinement");
    solve->add_flag("--refine", solve_refine, "refine with the critical-path local search");

    // ---- bench --------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "run a heuristic suite and report overages");
    std::vector<std::string> bench_files;
    std::string bench_rules = "dd", bench_model = "m2", bench_widths = "400";
    std::string bench_gen, bench_optima = "none", bench_format = "table", bench_out;
    std::uint64_t bench_seed = 1;
    int bench_count = 0, bench_workers = 1, bench_collect = 32;
    bool bench_refine = false;
    bench->add_option("instances", bench_files, "instance files");
    bench->add_option("--gen", bench_gen, "random batch as NxM, e.g. 10x10");
    bench->add_option("--count", bench_count, "size of the random batch");
    bench->add_option("--seed", bench_seed, "seed of the first random instance");
    bench->add_option("--rule", bench_rules, "comma list of spt|mwr|mor|sb|sb-noreopt|dd");
    bench->add_option("--model", bench_model, "DD state model (m1|m2)");
    bench->add_option("--width", bench_widths, "comma list of DD widths");
    bench->add_option("--collect", bench_collect, "schedules each DD run keeps");
    bench->add_flag("--refine", bench_refine, "refine every solution, report both makespans");
    bench->add_option("--optima", bench_optima, "none | exact | registry file path");
    bench->add_option("--format", bench_format, "csv|table");
    bench->add_option("--workers", bench_workers, "parallel workers over instances");
    bench->add_option("--out", bench_out, "also write the CSV here");

    // ---- export -------------------------------------------------------
    auto* exp = app.add_subcommand("export", "write the disjunctive MIP and a start vector");
    std::string exp_file, exp_rule = "mor", exp_out = ".", exp_model = "m2";
    std::size_t exp_width = 400;
    bool exp_norefine = false;
    exp->add_option("instance", exp_file, "instance file")->required();
    exp->add_option("--rule", exp_rule, "heuristic for the start vector");
    exp->add_option("--model", exp_model, "DD state model (m1|m2)");
    exp->add_option("--width", exp_width, "restricted DD width");
    exp->add_flag("--no-refine", exp_norefine, "skip refinement of the start solution");
    exp->add_option("--out", exp_out, "output directory");

    // ---- exact --------------------------------------------------------
    auto* exact = app.add_subcommand("exact", "exact optimum of a small instance");
    std::string exact_file, exact_algo = "bnb", exact_model = "m2", exact_heur = "trailer";
    std::string exact_stats;
    std::size_t exact_width = 1000;
    exact->add_option("instance", exact_file, "instance file")->required();
    exact->add_option("--algo", exact_algo, "full|bnb|astar");
    exact->add_option("--model", exact_model, "DD state model for full expansion");
    exact->add_option("--width", exact_width, "DD width for branch and bound");
    exact->add_option("--heuristic", exact_heur, "astar estimate: zero|trailer");
    exact->add_option("--stats", exact_stats, "write layer statistics CSV here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            std::filesystem::create_directories(gen_out);
            for (int k = 0; k < gen_count; ++k) {
                const auto inst =
                    generate_random_instance(gen_jobs, gen_machines, gen_seed + k, gen_lo, gen_hi);
                const auto path = std::filesystem::path(gen_out) / (inst.name() + ".jss");
                write_file(path.string(), write_instance(inst));
                std::cout << path.string() << "\n";
            }
        } else if (*solve) {
            const auto inst = load_instance(solve_file);
            const auto spec = spec_for_rule(solve_rule, parse_model(solve_model), solve_width,
                                            solve_collect);
            BenchConfig cfg;
            cfg.heuristics = {spec};
            cfg.refine = solve_refine;

            Schedule schedule;
            std::vector<Schedule> pool;
            switch (spec.kind) {
            case HeuristicSpec::Kind::Spt: schedule = dispatch(inst, DispatchRule::Spt); break;
            case HeuristicSpec::Kind::Mwr: schedule = dispatch(inst, DispatchRule::Mwr); break;
            case HeuristicSpec::Kind::Mor: schedule = dispatch(inst, DispatchRule::Mor); break;
            case HeuristicSpec::Kind::ShiftingBottleneck:
                schedule = shifting_bottleneck(inst, spec.reoptimize);
                break;
            case HeuristicSpec::Kind::RestrictedDd: {
                auto res = compile_restricted(inst, spec.model, spec.width, spec.rank,
                                              spec.collect);
                pool = std::move(res.schedules);
                schedule = pool.front();
                for (const auto& s : pool)
                    if (s.makespan < schedule.makespan) schedule = s;
                break;
            }
            }
            if (solve_refine) {
                if (pool.empty()) pool.push_back(schedule);
                Schedule best = schedule;
                for (const auto& s : pool) {
                    const auto g = build_graph(inst, machine_orders_of(inst, s));
                    const auto refined = lns1_refine(g);
                    if (refined.best_makespan < best.makespan)
                        best = graph_to_schedule(refined.best_graph);
                }
                schedule = best;
            }
            print_schedule(inst, schedule);
        } else if (*bench) {
            BenchConfig cfg;
            cfg.instance_files = bench_files;
            if (!bench_gen.empty()) {
                const auto x = bench_gen.find('x');
                if (x == std::string::npos)
                    throw std::runtime_error("--gen expects NxM, e.g. 10x10");
                cfg.gen_jobs = std::stoi(bench_gen.substr(0, x));
                cfg.gen_machines = std::stoi(bench_gen.substr(x + 1));
                cfg.gen_count = bench_count > 0 ? bench_count : 1;
                cfg.gen_seed = bench_seed;
            }
            std::stringstream rules(bench_rules);
            std::string rule;
            while (std::getline(rules, rule, ',')) {
                if (rule == "dd") {
                    std::stringstream widths(bench_widths);
                    std::string w;
                    while (std::getline(widths, w, ','))
                        cfg.heuristics.push_back(spec_for_rule("dd", parse_model(bench_model),
                                                               std::stoull(w), bench_collect));
                } else {
                    cfg.heuristics.push_back(spec_for_rule(rule, DdModel::M2, 0, 0));
                }
            }
            cfg.refine = bench_refine;
            cfg.workers = bench_workers;
            if (bench_optima == "none") cfg.optima = OptimaSource::None;
            else if (bench_optima == "exact") cfg.optima = OptimaSource::ExactCompute;
            else {
                cfg.optima = OptimaSource::Registry;
                cfg.optima_path = bench_optima;
            }

            const auto report = run_suite(cfg);
            bool failed = false;
            for (const auto& row : report.rows)
                if (!row.error.empty()) {
                    std::cerr << "row " << row.instance << "/" << row.heuristic << " failed: "
                              << row.error << "\n";
                    failed = true;
                }
            if (bench_format == "csv") std::cout << report.to_csv();
            else std::cout << report.to_table();
            if (!bench_out.empty()) write_file(bench_out, report.to_csv());
            if (failed) return 1;
        } else if (*exp) {
            const auto inst = load_instance(exp_file);
            Schedule start;
            if (exp_rule == "dd") {
                auto res = compile_restricted(inst, parse_model(exp_model), exp_width,
                                              RankMode::Cost, 1);
                start = res.schedules.front();
            } else if (exp_rule == "spt" || exp_rule == "mwr" || exp_rule == "mor") {
                const auto rule = exp_rule == "spt"   ? DispatchRule::Spt
                                  : exp_rule == "mwr" ? DispatchRule::Mwr
                                                      : DispatchRule::Mor;
                start = dispatch(inst, rule);
            } else if (exp_rule == "sb") {
                start = shifting_bottleneck(inst, true);
            } else {
                throw std::runtime_error("unknown start heuristic " + exp_rule);
            }
            if (!exp_norefine) {
                const auto g = build_graph(inst, machine_orders_of(inst, start));
                start = graph_to_schedule(lns1_refine(g).best_graph);
            }
            std::filesystem::create_directories(exp_out);
            const auto base = std::filesystem::path(exp_out) / inst.name();
            write_file(base.string() + ".lp", export_disjunctive_lp(inst));
            write_file(base.string() + ".mst", export_start_vector(inst, start));
            std::cout << base.string() << ".lp\n" << base.string() << ".mst\n";
        } else if (*exact) {
            const auto inst = load_instance(exact_file);
            if (exact_algo == "full") {
                const auto model = parse_model(exact_model);
                const auto res = full_expansion(inst, model);
                std::cout << "optimum " << res.optimum << "\nvalid_nodes " << res.valid_nodes
                          << "\nduplicates " << res.duplicates_folded << "\n";
            } else if (exact_algo == "bnb") {
                std::cout << "optimum " << dd_branch_and_bound(inst, exact_width) << "\n";
            } else if (exact_algo == "astar") {
                const auto h =
                    exact_heur == "zero" ? AStarHeuristic::Zero : AStarHeuristic::TrailerMax;
                const auto res = a_star_search(inst, h);
                std::cout << "optimum " << res.optimum << "\nexpansions " << res.expansions
                          << "\n";
            } else {
                throw std::runtime_error("unknown algorithm " + exact_algo);
            }
            if (!exact_stats.empty()) {
                const auto model = parse_model(exact_model);
                const auto res = compile_relaxed(inst, model, exact_width);
                write_file(exact_stats, layer_stats_csv(inst.name(), model, res.layer_stats));
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
