#include "jobshop/disjunctive_graph.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace jobshop {

namespace {

std::vector<std::vector<std::pair<int, Time>>> in_arcs_of(const DisjunctiveGraph& g) {
    std::vector<std::vector<std::pair<int, Time>>> in(g.n_nodes());
    for (const auto& a : g.arcs()) in[a.to].emplace_back(a.from, a.weight);
    return in;
}

// Kahn order; empty when the graph is cyclic.
std::vector<int> topological_order(const DisjunctiveGraph& g) {
    std::vector<int> indegree(g.n_nodes(), 0);
    std::vector<std::vector<int>> out(g.n_nodes());
    for (const auto& a : g.arcs()) {
        ++indegree[a.to];
        out[a.from].push_back(a.to);
    }
    std::vector<int> queue;
    queue.reserve(g.n_nodes());
    for (int v = 0; v < g.n_nodes(); ++v)
        if (indegree[v] == 0) queue.push_back(v);
    for (size_t head = 0; head < queue.size(); ++head) {
        for (const int w : out[queue[head]])
            if (--indegree[w] == 0) queue.push_back(w);
    }
    if (static_cast<int>(queue.size()) != g.n_nodes()) return {};
    return queue;
}

} // namespace

DisjunctiveGraph::DisjunctiveGraph(int n_jobs, int n_machines, std::vector<Time> op_durations,
                                   std::vector<Arc> arcs)
    : n_jobs_(n_jobs), n_machines_(n_machines), op_durations_(std::move(op_durations)),
      arcs_(std::move(arcs)) {
    if (static_cast<int>(op_durations_.size()) != n_ops())
        throw std::invalid_argument("op duration vector size mismatch");
}

DisjunctiveGraph build_partial_graph(const Instance& instance,
                                     const std::vector<std::vector<OperationId>>& machine_orders) {
    if (static_cast<int>(machine_orders.size()) != instance.n_machines())
        throw std::invalid_argument("need one order list per machine");

    std::vector<Time> durations(instance.n_ops());
    for (int i = 0; i < instance.n_ops(); ++i)
        durations[i] = instance.duration_of(instance.op_at(i));

    std::vector<DisjunctiveGraph::Arc> arcs;
    DisjunctiveGraph g(instance.n_jobs(), instance.n_machines(), durations, {});

    for (int j = 0; j < instance.n_jobs(); ++j) {
        arcs.push_back({DisjunctiveGraph::source_node(), g.node_of({j, 0}), 0, true});
        for (int p = 1; p < instance.n_machines(); ++p)
            arcs.push_back({g.node_of({j, p - 1}), g.node_of({j, p}),
                            instance.duration_of({j, p - 1}), true});
        const OperationId last{j, instance.n_machines() - 1};
        arcs.push_back({g.node_of(last), g.sink_node(), instance.duration_of(last), true});
    }

    for (int m = 0; m < instance.n_machines(); ++m) {
        const auto& order = machine_orders[m];
        if (order.empty()) continue;
        std::set<OperationId> seen;
        for (const auto& op : order) {
            if (instance.machine_of(op) != m)
                throw std::invalid_argument("operation " + to_string(op) + " is not on machine " +
                                            std::to_string(m));
            if (!seen.insert(op).second)
                throw std::invalid_argument("operation " + to_string(op) +
                                            " listed twice for machine " + std::to_string(m));
        }
        for (size_t k = 1; k < order.size(); ++k)
            arcs.push_back({g.node_of(order[k - 1]), g.node_of(order[k]),
                            instance.duration_of(order[k - 1]), false});
    }

    return DisjunctiveGraph(instance.n_jobs(), instance.n_machines(), std::move(durations),
                            std::move(arcs));
}

DisjunctiveGraph build_graph(const Instance& instance,
                             const std::vector<std::vector<OperationId>>& machine_orders) {
    if (static_cast<int>(machine_orders.size()) != instance.n_machines())
        throw std::invalid_argument("need one order list per machine");
    for (int m = 0; m < instance.n_machines(); ++m)
        if (machine_orders[m].size() != instance.ops_on_machine(m).size())
            throw std::invalid_argument("machine " + std::to_string(m) + " order lists " +
                                        std::to_string(machine_orders[m].size()) + " of " +
                                        std::to_string(instance.ops_on_machine(m).size()) +
                                        " operations");
    return build_partial_graph(instance, machine_orders);
}

std::optional<std::vector<Time>> longest_path_from_source(const DisjunctiveGraph& g) {
    const auto order = topological_order(g);
    if (order.empty()) return std::nullopt;
    const auto in = in_arcs_of(g);
    std::vector<Time> dist(g.n_nodes(), 0);
    for (const int v : order)
        for (const auto& [u, w] : in[v]) dist[v] = std::max(dist[v], dist[u] + w);
    return dist;
}

std::optional<std::vector<Time>> longest_path_to_sink(const DisjunctiveGraph& g) {
    const auto order = topological_order(g);
    if (order.empty()) return std::nullopt;
    std::vector<std::vector<std::pair<int, Time>>> out(g.n_nodes());
    for (const auto& a : g.arcs()) out[a.from].emplace_back(a.to, a.weight);
    std::vector<Time> dist(g.n_nodes(), 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        for (const auto& [v, w] : out[*it]) dist[*it] = std::max(dist[*it], dist[v] + w);
    return dist;
}

std::optional<CriticalPath> longest_path(const DisjunctiveGraph& g) {
    const auto order = topological_order(g);
    if (order.empty()) return std::nullopt;

    std::vector<std::vector<std::pair<int, int>>> in(g.n_nodes()); // (pred, arc index)
    for (size_t i = 0; i < g.arcs().size(); ++i) in[g.arcs()[i].to].emplace_back(g.arcs()[i].from, i);
    for (auto& preds : in)
        std::sort(preds.begin(), preds.end()); // lowest predecessor wins ties

    constexpr Time kUnset = std::numeric_limits<Time>::min();
    std::vector<Time> dist(g.n_nodes(), kUnset);
    std::vector<int> best_arc(g.n_nodes(), -1);
    dist[DisjunctiveGraph::source_node()] = 0;

    for (const int v : order) {
        for (const auto& [u, ai] : in[v]) {
            if (dist[u] == kUnset) continue;
            const Time cand = dist[u] + g.arcs()[ai].weight;
            if (cand > dist[v]) {
                dist[v] = cand;
                best_arc[v] = ai;
            }
        }
    }

    CriticalPath path;
    path.length = dist[g.sink_node()];
    int node = g.sink_node();
    while (node != DisjunctiveGraph::source_node()) {
        const int ai = best_arc[node];
        if (ai < 0) throw std::logic_error("sink unreachable from source");
        path.arcs.push_back(g.arcs()[ai]);
        node = g.arcs()[ai].from;
    }
    std::reverse(path.arcs.begin(), path.arcs.end());
    return path;
}

namespace {

// Complements the machine pair (u, v). Every other pair keeps its order, so
// in the chain encoding the neighbor arcs rewire to the adjacent swap:
// p->u->v->q becomes p->v->u->q. Applying it again on (v, u) undoes it.
void reverse_machine_arc_in_place(DisjunctiveGraph& g, int u, int v) {
    int idx_uv = -1, idx_pu = -1, idx_vq = -1;
    auto& arcs = g.arcs();
    for (size_t i = 0; i < arcs.size(); ++i) {
        const auto& a = arcs[i];
        if (a.fixed) continue;
        if (a.from == u && a.to == v) idx_uv = static_cast<int>(i);
        else if (a.to == u) idx_pu = static_cast<int>(i);
        else if (a.from == v) idx_vq = static_cast<int>(i);
    }
    if (idx_uv < 0) throw std::invalid_argument("machine arc not found in graph");
    arcs[idx_uv] = {v, u, g.duration_of_node(v), false};
    if (idx_pu >= 0) arcs[idx_pu].to = v;
    if (idx_vq >= 0) arcs[idx_vq] = {u, arcs[idx_vq].to, g.duration_of_node(u), false};
}

} // namespace

DisjunctiveGraph reverse_critical_arc(const DisjunctiveGraph& graph, const CriticalPath& path,
                                      const DisjunctiveGraph::Arc& arc) {
    if (arc.fixed)
        throw std::invalid_argument("cannot reverse a fixed arc");
    const bool on_path = std::any_of(path.arcs.begin(), path.arcs.end(), [&](const auto& a) {
        return a.from == arc.from && a.to == arc.to;
    });
    if (!on_path)
        throw std::invalid_argument("arc is not on the provided critical path");

    DisjunctiveGraph out = graph;
    reverse_machine_arc_in_place(out, arc.from, arc.to);
    return out;
}

namespace {

// Canonical key of the machine-arc orientation: sorted (from, to) pairs.
std::vector<int> orientation_key(const DisjunctiveGraph& g) {
    std::vector<int> key;
    for (const auto& a : g.arcs())
        if (!a.fixed) key.push_back(a.from * (g.n_nodes() + 1) + a.to);
    std::sort(key.begin(), key.end());
    return key;
}

} // namespace

Lns1Result lns1_refine(const DisjunctiveGraph& input, long long budget, bool strict_descent) {
    auto initial = longest_path(input);
    if (!initial) throw std::invalid_argument("lns1_refine requires an acyclic graph");

    Lns1Result res{initial->length, input, 0};
    if (budget <= 0) return res;

    DisjunctiveGraph g = input;
    std::set<std::vector<int>> expanded;
    std::set<std::pair<int, int>> locked; // complemented pairs along the current branch

    std::function<Time(Time)> visit = [&](Time parent_len) -> Time {
        ++res.visits;
        const auto p = longest_path(g); // acyclic: reversals of critical arcs stay circuit-free
        const Time len = p->length;
        if (len < res.best_makespan) {
            res.best_makespan = len;
            res.best_graph = g;
        }
        if (strict_descent && len > parent_len) return len;
        if (!expanded.insert(orientation_key(g)).second) return len;

        Time s = len;
        for (const auto& arc : p->arcs) {
            if (arc.fixed) continue;
            const auto pair = std::minmax(arc.from, arc.to);
            if (locked.count(pair)) continue;
            if (res.visits >= budget) break;

            reverse_machine_arc_in_place(g, arc.from, arc.to);
            locked.insert(pair);
            const Time t = visit(s);
            locked.erase(pair);
            reverse_machine_arc_in_place(g, arc.to, arc.from);
            if (t < s) s = t;
        }
        return s;
    };

    visit(std::numeric_limits<Time>::max());
    return res;
}

Schedule graph_to_schedule(const DisjunctiveGraph& graph) {
    const auto dist = longest_path_from_source(graph);
    if (!dist) throw std::invalid_argument("graph_to_schedule requires an acyclic graph");

    Schedule s;
    s.start.resize(graph.n_ops());
    s.completion.resize(graph.n_ops());
    for (int i = 0; i < graph.n_ops(); ++i) {
        s.start[i] = (*dist)[i + 1];
        s.completion[i] = s.start[i] + graph.duration_of_node(i + 1);
    }
    s.makespan = (*dist)[graph.sink_node()];
    return s;
}

std::string orientation_dump(const Instance& instance, const DisjunctiveGraph& graph) {
    const Schedule s = graph_to_schedule(graph);
    const auto orders = machine_orders_of(instance, s);
    std::ostringstream out;
    for (int m = 0; m < instance.n_machines(); ++m) {
        out << "M" << m << ":";
        for (const auto& op : orders[m]) out << " " << to_string(op);
        out << "\n";
    }
    return out.str();
}

} // namespace jobshop
