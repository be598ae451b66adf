#include "jobshop/one_machine.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace jobshop {

namespace {

constexpr Time kInf = std::numeric_limits<Time>::max() / 4;

// Nonpreemptive greedy: among released jobs run the one with the earliest
// due date; when none is released, jump to the next release.
OneMachineResult schrage(const OneMachineProblem& pb) {
    const int n = pb.n_jobs();
    std::vector<char> used(n, 0);
    OneMachineResult res;
    res.sequence.reserve(n);
    Time t = 0;
    Time l_max = -kInf;
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        Time next_release = kInf;
        for (int j = 0; j < n; ++j) {
            if (used[j]) continue;
            if (pb.release[j] <= t) {
                if (pick < 0 || pb.due[j] < pb.due[pick]) pick = j;
            } else {
                next_release = std::min(next_release, pb.release[j]);
            }
        }
        if (pick < 0) {
            t = next_release;
            --step;
            continue;
        }
        used[pick] = 1;
        t = std::max(t, pb.release[pick]) + pb.processing[pick];
        l_max = std::max(l_max, t - pb.due[pick]);
        res.sequence.push_back(pick);
    }
    res.l_max = l_max;
    return res;
}

// Optimal value of the preemptive relaxation for the jobs in `remaining`,
// machine free from time t0. Preemptive earliest-due-date is exact for it.
Time preemptive_edd_bound(const OneMachineProblem& pb, const std::vector<char>& remaining,
                          Time t0) {
    const int n = pb.n_jobs();
    std::vector<Time> rem;
    std::vector<int> jobs;
    for (int j = 0; j < n; ++j) {
        if (remaining[j]) {
            jobs.push_back(j);
            rem.push_back(pb.processing[j]);
        }
    }
    if (jobs.empty()) return -kInf;

    Time t = t0;
    Time l_max = -kInf;
    size_t left = jobs.size();
    while (left > 0) {
        int pick = -1;
        Time next_release = kInf;
        for (size_t k = 0; k < jobs.size(); ++k) {
            if (rem[k] == 0) continue;
            const int j = jobs[k];
            if (pb.release[j] <= t) {
                if (pick < 0 || pb.due[j] < pb.due[jobs[pick]]) pick = static_cast<int>(k);
            } else {
                next_release = std::min(next_release, pb.release[j]);
            }
        }
        if (pick < 0) {
            t = next_release;
            continue;
        }
        // run until the picked job finishes or a more urgent job is released
        Time horizon = t + rem[pick];
        for (size_t k = 0; k < jobs.size(); ++k) {
            const int j = jobs[k];
            if (rem[k] > 0 && pb.release[j] > t && pb.release[j] < horizon &&
                pb.due[j] < pb.due[jobs[pick]])
                horizon = pb.release[j];
        }
        rem[pick] -= horizon - t;
        t = horizon;
        if (rem[pick] == 0) {
            l_max = std::max(l_max, t - pb.due[jobs[pick]]);
            --left;
        }
    }
    return l_max;
}

struct BnbContext {
    const OneMachineProblem& pb;
    std::vector<int> partial;
    std::vector<char> remaining;
    OneMachineResult best;
};

void branch(BnbContext& ctx, Time t, Time l_so_far) {
    const int n = ctx.pb.n_jobs();
    if (static_cast<int>(ctx.partial.size()) == n) {
        if (l_so_far < ctx.best.l_max) {
            ctx.best.l_max = l_so_far;
            ctx.best.sequence = ctx.partial;
        }
        return;
    }
    const Time bound = std::max(l_so_far, preemptive_edd_bound(ctx.pb, ctx.remaining, t));
    if (bound >= ctx.best.l_max) return;

    for (int j = 0; j < n; ++j) {
        if (!ctx.remaining[j]) continue;
        const Time c = std::max(t, ctx.pb.release[j]) + ctx.pb.processing[j];
        ctx.remaining[j] = 0;
        ctx.partial.push_back(j);
        branch(ctx, c, std::max(l_so_far, c - ctx.pb.due[j]));
        ctx.partial.pop_back();
        ctx.remaining[j] = 1;
    }
}

} // namespace

OneMachineResult solve_one_machine_lmax(const OneMachineProblem& pb) {
    const int n = pb.n_jobs();
    if (n < 1) throw std::invalid_argument("one-machine problem needs at least one job");
    if (static_cast<int>(pb.processing.size()) != n || static_cast<int>(pb.due.size()) != n)
        throw std::invalid_argument("one-machine field sizes differ");
    for (int j = 0; j < n; ++j)
        if (pb.release[j] < 0 || pb.processing[j] < 0)
            throw std::invalid_argument("release and processing times must be nonnegative");

    BnbContext ctx{pb, {}, std::vector<char>(n, 1), schrage(pb)};
    ctx.partial.reserve(n);
    branch(ctx, 0, -kInf);
    return ctx.best;
}

} // namespace jobshop
