#pragma once

#include <vector>

#include "jobshop/types.hpp"

namespace jobshop {

// Single machine, release dates, max-lateness objective. Due dates may be
// negative: with tails q the equivalent due date is d = -q, so minimizing
// L_max = max(C_j - d_j) minimizes the delivery makespan max(C_j + q_j).
struct OneMachineProblem {
    std::vector<Time> release;
    std::vector<Time> processing;
    std::vector<Time> due;

    int n_jobs() const { return static_cast<int>(release.size()); }
};

struct OneMachineResult {
    std::vector<int> sequence;
    Time l_max = 0;
};

// Exact optimum by depth-first branch and bound. The Schrage schedule seeds
// the incumbent, the preemptive earliest-due-date relaxation bounds each
// node. Deterministic: Schrage breaks ties by (due date, job index) and
// branches are explored in ascending job index with strict improvement only.
OneMachineResult solve_one_machine_lmax(const OneMachineProblem& problem);

} // namespace jobshop
