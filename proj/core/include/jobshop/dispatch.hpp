#pragma once

#include "jobshop/instance.hpp"
#include "jobshop/schedule.hpp"

namespace jobshop {

enum class DispatchRule { Mwr, Mor, Spt };

// Greedy permutation construction: repeatedly pick the best rule value —
// most work remaining on its job (MWR), most operations remaining on its
// job (MOR), or shortest duration (SPT) — among the ready operations that
// are not dominated, i.e. that could start before some other ready op on
// their machine finishes. Ties break by (job, position) ascending. The
// permutation is evaluated semi-actively.
Schedule dispatch(const Instance& instance, DispatchRule rule);

// Sequences one machine at a time: heads and tails come from the partial
// disjunctive graph of the machines fixed so far, the next machine is the
// one whose exact 1|r_j|L_max optimum is largest, and its optimal sequence
// is fixed. With `reoptimize`, every previously fixed machine is re-solved
// once after each new fixation.
Schedule shifting_bottleneck(const Instance& instance, bool reoptimize = true);

} // namespace jobshop
