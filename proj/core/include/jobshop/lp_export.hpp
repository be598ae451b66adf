#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jobshop/instance.hpp"
#include "jobshop/schedule.hpp"

namespace jobshop {

// Disjunctive big-M model. Variables are the start times S_<job>_<pos>, the
// makespan Cmax, and one binary x_<i>_<j>_<k>_<l> per unordered same-machine
// pair, 1 when the lexicographically first op precedes. Completion times are
// collapsed into S + p.
struct MipModel {
    struct Constraint {
        std::string name;
        // sum of coef * variable >= rhs
        std::vector<std::pair<std::string, double>> terms;
        double rhs = 0;
    };

    std::vector<std::string> start_vars; // job-major
    std::vector<std::string> binary_vars;
    std::vector<Constraint> constraints;
    Time big_m = 0;
};

MipModel build_disjunctive_model(const Instance& instance);

// CPLEX-LP rendering: Minimize, Subject To, Bounds, Binaries, End. Output is
// byte-deterministic for a given instance.
std::string render_lp(const MipModel& model);

std::string export_disjunctive_lp(const Instance& instance);

// "name value" lines (comment header first): the start times, the implied
// pair binaries, then Cmax. Throws when the schedule is infeasible.
std::string export_start_vector(const Instance& instance, const Schedule& schedule);

// Evaluates a start-vector text against the model. Returns the first
// violated constraint description, or nullopt when every constraint holds.
std::optional<std::string> check_start_vector(const MipModel& model,
                                              const std::string& start_text);

} // namespace jobshop
