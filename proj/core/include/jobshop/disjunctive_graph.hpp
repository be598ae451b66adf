#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jobshop/instance.hpp"
#include "jobshop/schedule.hpp"
#include "jobshop/types.hpp"

namespace jobshop {

// Disjunctive graph of a machine ordering: node 0 is the source, node
// 1 + op_index(op) holds each operation, the last node is the sink. Arcs out
// of an operation carry its duration; source arcs weigh 0. Job-precedence,
// source and sink arcs are fixed; machine-order arcs are not. Cycles are
// representable (they surface as a `cyclic` verdict from longest_path).
class DisjunctiveGraph {
public:
    struct Arc {
        int from = 0;
        int to = 0;
        Time weight = 0;
        bool fixed = false;

        friend bool operator==(const Arc&, const Arc&) = default;
    };

    DisjunctiveGraph(int n_jobs, int n_machines, std::vector<Time> op_durations,
                     std::vector<Arc> arcs);

    static constexpr int source_node() { return 0; }
    int sink_node() const { return n_ops() + 1; }
    int n_ops() const { return n_jobs_ * n_machines_; }
    int n_jobs() const { return n_jobs_; }
    int n_machines() const { return n_machines_; }
    int n_nodes() const { return n_ops() + 2; }

    int node_of(OperationId op) const { return 1 + op.job * n_machines_ + op.position; }
    OperationId op_of(int node) const {
        const int idx = node - 1;
        return OperationId{idx / n_machines_, idx % n_machines_};
    }
    bool is_op_node(int node) const { return node >= 1 && node <= n_ops(); }

    Time duration_of_node(int node) const { return op_durations_[node - 1]; }

    const std::vector<Arc>& arcs() const { return arcs_; }
    std::vector<Arc>& arcs() { return arcs_; }

private:
    int n_jobs_ = 0;
    int n_machines_ = 0;
    std::vector<Time> op_durations_;
    std::vector<Arc> arcs_;
};

struct CriticalPath {
    std::vector<DisjunctiveGraph::Arc> arcs; // ordered source -> sink
    Time length = 0;
};

// Graph for a complete selection: every machine order must be a permutation
// of that machine's operations. The result may contain cycles; they are
// detected by longest_path, not here.
DisjunctiveGraph build_graph(const Instance& instance,
                             const std::vector<std::vector<OperationId>>& machine_orders);

// Like build_graph but machines with an empty order contribute no arcs.
// Shifting-bottleneck style partial selections use this.
DisjunctiveGraph build_partial_graph(const Instance& instance,
                                     const std::vector<std::vector<OperationId>>& machine_orders);

// Longest source->sink path by topological dynamic program. Ties are broken
// toward the lowest-numbered predecessor, which pins down one deterministic
// critical path. Returns nullopt when the graph has a cycle.
std::optional<CriticalPath> longest_path(const DisjunctiveGraph& graph);

// Longest path length from the source to every node; nullopt when cyclic.
std::optional<std::vector<Time>> longest_path_from_source(const DisjunctiveGraph& graph);

// Longest path length from every node to the sink; nullopt when cyclic.
std::optional<std::vector<Time>> longest_path_to_sink(const DisjunctiveGraph& graph);

// Replaces critical arc (i, j) by (j, i) weighted with j's duration. The arc
// must be non-fixed and lie on `path`; the result is guaranteed acyclic for
// any critical arc of an acyclic graph.
DisjunctiveGraph reverse_critical_arc(const DisjunctiveGraph& graph, const CriticalPath& path,
                                      const DisjunctiveGraph::Arc& arc);

struct Lns1Result {
    Time best_makespan = 0;
    DisjunctiveGraph best_graph;
    long long visits = 0;
};

// Recursive critical-path refinement: reverse each non-fixed critical arc,
// recurse, restore, keep the best orientation seen. `budget` bounds the
// number of node visits; an orientation memo prevents re-expanding a
// machine-arc selection. With strict_descent, branches whose length exceeds
// the parent length are cut (drop it to search more space). Never returns a
// length worse than the input's.
Lns1Result lns1_refine(const DisjunctiveGraph& graph, long long budget = 10000,
                       bool strict_descent = true);

// start(op) = longest source->op distance; throws on cyclic input.
Schedule graph_to_schedule(const DisjunctiveGraph& graph);

// Debug dump, one line per machine: "M<k>: job.pos job.pos ...", operations
// in schedule order. Requires an acyclic graph.
std::string orientation_dump(const Instance& instance, const DisjunctiveGraph& graph);

} // namespace jobshop
