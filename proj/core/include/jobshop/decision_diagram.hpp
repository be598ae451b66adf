#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jobshop/instance.hpp"
#include "jobshop/schedule.hpp"
#include "jobshop/types.hpp"

namespace jobshop {

// M1 keeps every done operation with its completion time. M2 moves an
// operation whose job successor is done into the long-done set and drops its
// completion time from the state identity, which folds orderings that can no
// longer influence future costs.
enum class DdModel { M1, M2 };

// Node ordering for truncation/merging: the accumulated makespan alone, or
// the makespan with each machine's remaining work added on (results differ
// quite a bit between the two).
enum class RankMode { Cost, CostPlusTrailer };

// How completion times combine when states merge. WorstCase keeps the latest
// prerequisite completion seen on any merged path; Optimistic keeps the
// earliest, which makes the relaxed terminal value a certified lower bound.
enum class MergeMode { WorstCase, Optimistic };

// Inspectable state tuple. `done` is V, `long_done` is V_L (model 2),
// `maybe_done` is V_s with worst/best-case times in `maybe_completion`.
// completion[i] is 0 for ops outside `done`; identity compares all fields.
struct DdState {
    std::vector<int> done;
    std::vector<int> long_done;
    std::vector<int> maybe_done;
    std::vector<Time> completion;       // dense over op_index, 0 where absent
    std::vector<Time> maybe_completion; // dense over op_index, 0 where absent
    std::vector<Time> machine_finish;

    bool exact() const { return maybe_done.empty(); }
    friend bool operator==(const DdState&, const DdState&) = default;
};

DdState dd_root_state(const Instance& instance, DdModel model);

// Ops applicable to `state`: not yet done, job predecessor done (or at least
// maybe-done for relaxed states). Ascending op order.
std::vector<OperationId> dd_feasible_ops(const Instance& instance, DdModel model,
                                         const DdState& state);

struct DdTransitionResult {
    DdState state;
    Time cost = 0; // completion time of the applied op
};

// Applies one operation. Throws std::invalid_argument when the op is already
// done or its predecessor is missing.
DdTransitionResult dd_transition(const Instance& instance, DdModel model, const DdState& state,
                                 OperationId op);

// Merge of two same-layer states: machine finishes take the elementwise min,
// the sure sets intersect, everything done on only one side becomes
// maybe-done. Commutative, associative, idempotent.
DdState merge_states(const Instance& instance, DdModel model, const DdState& a, const DdState& b,
                     MergeMode mode = MergeMode::WorstCase);

struct LayerStat {
    int layer = 0;
    std::size_t width_before = 0; // deduplicated width before reduction
    std::size_t width_after = 0;
    std::size_t merges = 0;
    std::size_t prunes = 0;
};

std::string layer_stats_csv(const std::string& instance_name, DdModel model,
                            const std::vector<LayerStat>& stats);

struct RestrictedResult {
    std::vector<OpOrder> orders;      // best-first terminal orderings
    std::vector<Schedule> schedules;  // CFP evaluation of each order
    Time best_makespan = 0;
    std::vector<LayerStat> layer_stats;
};

// Width-W truncated diagram; always reaches the terminal layer with at least
// one feasible ordering (there is no cost filtering — adding any would break
// that guarantee). Returns up to `collect` best complete schedules.
RestrictedResult compile_restricted(const Instance& instance, DdModel model, std::size_t width,
                                    RankMode rank = RankMode::Cost, int collect = 1);

struct RelaxedResult {
    Time bound = 0;
    bool exact = false; // no merge and no prune happened: bound is the optimum
    std::size_t merges = 0;
    std::vector<LayerStat> layer_stats;
};

// Width-W diagram where over-wide layers merge their worst nodes pairwise.
// With MergeMode::Optimistic the returned terminal value is a lower bound on
// the optimum; with WorstCase it is reported as-is. Nodes whose accumulated
// cost exceeds `primal_bound` are pruned (LocB). If pruning empties the
// diagram the bound primal_bound + 1 is returned.
RelaxedResult compile_relaxed(const Instance& instance, DdModel model, std::size_t width,
                              std::optional<Time> primal_bound = std::nullopt,
                              MergeMode merge_mode = MergeMode::WorstCase);

struct ExpansionResult {
    Time optimum = 0;
    long long valid_nodes = 0;       // unique states stored across all layers
    long long duplicates_folded = 0; // transitions that landed on an existing state
};

// Exhaustive diagram, no truncation or merging. Throws when more than
// `node_cap` unique states would be stored.
ExpansionResult full_expansion(const Instance& instance, DdModel model,
                               long long node_cap = 50'000'000);

// Branch and bound over exact cutsets of model-2 relaxed diagrams (optimistic-mode
// merging, LocB pruning against the incumbent; primal updates from a
// restricted dive per open node). Returns the proven optimum.
Time dd_branch_and_bound(const Instance& instance, std::size_t width,
                         long long node_cap = 50'000'000);

enum class AStarHeuristic { Zero, TrailerMax };

struct AStarResult {
    Time optimum = 0;
    long long expansions = 0;
};

// Best-first search over model-2 states. Zero uses the accumulated makespan;
// TrailerMax adds per-machine and per-job remaining-work bounds (admissible
// and consistent, so the first terminal popped is optimal). Throws when the
// expansion or storage cap is exceeded, which a 10x10 instance will do.
AStarResult a_star_search(const Instance& instance,
                          AStarHeuristic heuristic = AStarHeuristic::TrailerMax,
                          long long expansion_cap = 10'000'000);

namespace detail {

// compile_restricted plus a cost filter. Exists so tests can demonstrate
// that filtering restricted layers by cost voids the always-feasible
// guarantee; not part of the public contract.
RestrictedResult compile_restricted_filtered(const Instance& instance, DdModel model,
                                             std::size_t width, RankMode rank, int collect,
                                             std::optional<Time> cost_filter);

} // namespace detail

} // namespace jobshop
