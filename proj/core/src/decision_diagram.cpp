#include "jobshop/decision_diagram.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace jobshop {

namespace {

constexpr Time kInfTime = std::numeric_limits<Time>::max() / 4;

using Word = std::uint32_t;

inline bool test_bit(const Word* words, int bit) {
    return (words[bit >> 5] >> (bit & 31)) & 1u;
}
inline void set_bit(Word* words, int bit) { words[bit >> 5] |= Word(1) << (bit & 31); }
inline void clear_bit(Word* words, int bit) { words[bit >> 5] &= ~(Word(1) << (bit & 31)); }

// Op-set order: the set whose smallest differing member is present compares
// lower, matching a lexicographic compare of the sorted id lists.
inline int cmp_sets(const Word* a, const Word* b, int words) {
    for (int w = 0; w < words; ++w) {
        if (a[w] != b[w]) {
            const Word diff = a[w] ^ b[w];
            const Word lsb = diff & (~diff + 1u);
            return (a[w] & lsb) ? -1 : 1;
        }
    }
    return 0;
}

inline int cmp_words(const Word* a, const Word* b, int count) {
    for (int i = 0; i < count; ++i) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

// Packed layout, all uint32 words:
//   [V bits][V_L bits (m2)][f_O per op][f_M per machine][V_s bits][f_s per op]
// The two trailing segments exist only for relaxed diagrams. Times are
// stored as uint32; the engine refuses instances whose total duration does
// not fit.
struct DdEngine {
    const Instance& inst;
    DdModel model;
    bool relaxed;

    int n_ops;
    int n_machines;
    int v_words;
    std::size_t off_vl, off_fo, off_fm, off_vs, off_fs, stride;

    std::vector<int> mach_of;
    std::vector<Word> dur;
    std::vector<Time> machine_total;
    std::vector<Time> job_total;

    DdEngine(const Instance& instance, DdModel m, bool relax)
        : inst(instance), model(m), relaxed(relax) {
        n_ops = instance.n_ops();
        n_machines = instance.n_machines();
        if (instance.total_duration() > static_cast<Time>(std::numeric_limits<Word>::max() / 2))
            throw std::invalid_argument("instance durations too large for the DD engine");
        v_words = (n_ops + 31) / 32;
        const std::size_t vl_words = model == DdModel::M2 ? v_words : 0;
        off_vl = static_cast<std::size_t>(v_words);
        off_fo = off_vl + vl_words;
        off_fm = off_fo + static_cast<std::size_t>(n_ops);
        off_vs = off_fm + static_cast<std::size_t>(n_machines);
        off_fs = off_vs + (relaxed ? static_cast<std::size_t>(v_words) : 0);
        stride = off_fs + (relaxed ? static_cast<std::size_t>(n_ops) : 0);

        mach_of.resize(n_ops);
        dur.resize(n_ops);
        machine_total.assign(n_machines, 0);
        job_total.assign(instance.n_jobs(), 0);
        for (int i = 0; i < n_ops; ++i) {
            const OperationId op = instance.op_at(i);
            mach_of[i] = instance.machine_of(op);
            dur[i] = static_cast<Word>(instance.duration_of(op));
            machine_total[mach_of[i]] += instance.duration_of(op);
            job_total[op.job] += instance.duration_of(op);
        }
    }

    const Word* v(const Word* s) const { return s; }
    const Word* vl(const Word* s) const { return s + off_vl; }
    const Word* vs(const Word* s) const { return s + off_vs; }
    Word* v(Word* s) const { return s; }
    Word* vl(Word* s) const { return s + off_vl; }
    Word* vs(Word* s) const { return s + off_vs; }

    bool in_done(const Word* s, int op) const {
        if (test_bit(v(s), op)) return true;
        return model == DdModel::M2 && test_bit(vl(s), op);
    }
    bool in_any(const Word* s, int op) const {
        if (in_done(s, op)) return true;
        return relaxed && test_bit(vs(s), op);
    }

    void make_root(Word* s) const { std::memset(s, 0, stride * sizeof(Word)); }

    Time cost(const Word* s) const {
        Word best = 0;
        for (int i = 0; i < n_machines; ++i) best = std::max(best, s[off_fm + i]);
        return static_cast<Time>(best);
    }

    int depth_of(const Word* s) const {
        int d = 0;
        for (int w = 0; w < v_words; ++w) d += std::popcount(v(s)[w]);
        if (model == DdModel::M2)
            for (int w = 0; w < v_words; ++w) d += std::popcount(vl(s)[w]);
        return d;
    }

    // Ops not done whose predecessor is at least maybe-done, ascending.
    int feasible(const Word* s, int* out) const {
        int count = 0;
        const int m = n_machines;
        for (int j = 0; j < inst.n_jobs(); ++j) {
            bool prev_present = true;
            for (int p = 0; p < m; ++p) {
                const int idx = j * m + p;
                const bool done = in_done(s, idx);
                if (!done && prev_present) out[count++] = idx;
                const bool present = done || (relaxed && test_bit(vs(s), idx));
                if (!present) break;
                prev_present = present;
            }
        }
        return count;
    }

    Time completion_estimate(const Word* s, int op) const {
        if (test_bit(v(s), op)) return static_cast<Time>(s[off_fo + op]);
        if (relaxed && test_bit(vs(s), op)) return static_cast<Time>(s[off_fs + op]);
        return 0; // long-done times are dropped from the state
    }

    // In-place transition; returns the op's completion time.
    Time apply(Word* s, int x) const {
        Time start = static_cast<Time>(s[off_fm + mach_of[x]]);
        const int pre = (x % n_machines) ? x - 1 : -1;
        if (pre >= 0) start = std::max(start, completion_estimate(s, pre));
        const Time c = start + static_cast<Time>(dur[x]);

        if (relaxed && test_bit(vs(s), x)) {
            clear_bit(vs(s), x);
            s[off_fs + x] = 0;
        }
        set_bit(v(s), x);
        s[off_fo + x] = static_cast<Word>(c);
        s[off_fm + mach_of[x]] = static_cast<Word>(c);

        if (model == DdModel::M2 && pre >= 0 && test_bit(v(s), pre)) {
            clear_bit(v(s), pre);
            s[off_fo + pre] = 0;
            set_bit(vl(s), pre);
        }
        return c;
    }

    void merge(const Word* a, const Word* b, Word* out, MergeMode mode) const {
        const bool take_max = mode == MergeMode::WorstCase;
        std::memset(out, 0, stride * sizeof(Word));

        for (int i = 0; i < n_machines; ++i)
            out[off_fm + i] = std::min(a[off_fm + i], b[off_fm + i]);
        for (int w = 0; w < v_words; ++w) out[w] = a[w] & b[w];
        if (model == DdModel::M2)
            for (int w = 0; w < v_words; ++w) out[off_vl + w] = a[off_vl + w] & b[off_vl + w];

        // everything sure on one side only, plus prior maybes
        for (int w = 0; w < v_words; ++w) {
            Word any = a[w] | b[w] | a[off_vs + w] | b[off_vs + w];
            Word sure = out[w];
            if (model == DdModel::M2) {
                any |= a[off_vl + w] | b[off_vl + w];
                sure |= out[off_vl + w];
            }
            out[off_vs + w] = any & ~sure;
        }

        for (int x = 0; x < n_ops; ++x) {
            if (test_bit(out, x)) {
                const Word fa = a[off_fo + x], fb = b[off_fo + x];
                out[off_fo + x] = take_max ? std::max(fa, fb) : std::min(fa, fb);
            } else if (test_bit(out + off_vs, x)) {
                Word acc = 0;
                bool got = false;
                auto feed = [&](Word value, bool present) {
                    if (!present) return;
                    acc = got ? (take_max ? std::max(acc, value) : std::min(acc, value)) : value;
                    got = true;
                };
                feed(a[off_fo + x], test_bit(a, x));
                feed(b[off_fo + x], test_bit(b, x));
                feed(a[off_fs + x], test_bit(a + off_vs, x));
                feed(b[off_fs + x], test_bit(b + off_vs, x));
                if (model == DdModel::M2) {
                    // long-done times are dropped, so they contribute a zero
                    feed(0, test_bit(a + off_vl, x));
                    feed(0, test_bit(b + off_vl, x));
                }
                out[off_fs + x] = got ? acc : 0;
            }
        }
    }

    Time rank(const Word* s, RankMode mode, Time node_cost) const {
        if (mode == RankMode::Cost) return node_cost;
        // remaining work per machine over ops not done and not maybe-done
        Time best = node_cost;
        std::vector<Time> remaining(machine_total);
        for (int x = 0; x < n_ops; ++x)
            if (in_any(s, x)) remaining[mach_of[x]] -= static_cast<Time>(dur[x]);
        for (int i = 0; i < n_machines; ++i)
            best = std::max(best, static_cast<Time>(s[off_fm + i]) + remaining[i]);
        return best;
    }

    bool exact_state(const Word* s) const {
        if (!relaxed) return true;
        for (int w = 0; w < v_words; ++w)
            if (s[off_vs + w]) return false;
        return true;
    }

    // Canonical identity order: V, V_L, f_O, f_M, V_s, f_s.
    int cmp(const Word* a, const Word* b) const {
        if (int c = cmp_sets(a, b, v_words)) return c;
        if (model == DdModel::M2)
            if (int c = cmp_sets(a + off_vl, b + off_vl, v_words)) return c;
        if (int c = cmp_words(a + off_fo, b + off_fo,
                              static_cast<int>(off_fm - off_fo) + n_machines))
            return c;
        if (!relaxed) return 0;
        if (int c = cmp_sets(a + off_vs, b + off_vs, v_words)) return c;
        return cmp_words(a + off_fs, b + off_fs, n_ops);
    }

    bool equal(const Word* a, const Word* b) const {
        return std::memcmp(a, b, stride * sizeof(Word)) == 0;
    }
};

struct CompileOptions {
    bool relaxed = false;
    std::size_t width = std::numeric_limits<std::size_t>::max();
    RankMode rank = RankMode::Cost;
    MergeMode merge_mode = MergeMode::WorstCase;
    std::optional<Time> cost_filter;
    long long node_cap = 50'000'000;
    bool keep_parents = false;
    bool want_cutset = false;
    int collect = 0;
};

struct LayerNodes {
    std::vector<Word> arena;
    std::vector<int> parent;  // index into the previous layer, -1 for roots/merged
    std::vector<int> via_op;
    std::vector<Time> cost;
    std::size_t count = 0;
};

struct CompileOutput {
    Time best_terminal_cost = kInfTime;
    long long valid_nodes = 0;
    long long duplicates = 0;
    std::size_t merges_total = 0;
    std::size_t prunes_total = 0;
    int first_merge_layer = -1; // relative to the root layer
    std::vector<LayerStat> stats;
    std::vector<OpOrder> collected_orders;
    std::vector<std::pair<std::vector<Word>, OpOrder>> cutset;
};

OpOrder recover_order(const DdEngine& eng, const std::vector<LayerNodes>& layers, int layer,
                      std::size_t node) {
    OpOrder order;
    int l = layer;
    auto idx = static_cast<int>(node);
    while (l > 0) {
        const auto& L = layers[l];
        if (L.parent[idx] < 0) throw std::logic_error("order recovery crossed a merged node");
        order.push_back(eng.inst.op_at(L.via_op[idx]));
        idx = L.parent[idx];
        --l;
    }
    std::reverse(order.begin(), order.end());
    return order;
}

CompileOutput compile_core(const DdEngine& eng, const CompileOptions& opt, const Word* root) {
    const std::size_t stride = eng.stride;
    const int root_depth = eng.depth_of(root);
    const int n_layers = eng.n_ops - root_depth;
    const bool bounded = opt.width != std::numeric_limits<std::size_t>::max();
    if (bounded && opt.width < 1) throw std::invalid_argument("width must be >= 1");

    std::vector<LayerNodes> layers(opt.keep_parents ? n_layers + 1 : 2);
    auto& first = layers[0];
    first.arena.assign(root, root + stride);
    first.parent = {-1};
    first.via_op = {-1};
    first.cost = {eng.cost(root)};
    first.count = 1;

    CompileOutput out;
    out.valid_nodes = 1;

    std::vector<Word> scratch;
    std::vector<int> feas(eng.n_ops);

    for (int layer = 1; layer <= n_layers; ++layer) {
        const auto& cur = layers[opt.keep_parents ? layer - 1 : (layer - 1) & 1];

        // expand
        scratch.clear();
        struct Cand {
            std::size_t state;
            int parent;
            int op;
            Time cost;
            Time rank = 0;
        };
        std::vector<Cand> cand;
        std::size_t layer_prunes = 0;
        for (std::size_t i = 0; i < cur.count; ++i) {
            const Word* s = cur.arena.data() + i * stride;
            const int n_feas = eng.feasible(s, feas.data());
            for (int k = 0; k < n_feas; ++k) {
                const std::size_t off = scratch.size();
                scratch.insert(scratch.end(), s, s + stride);
                const Time c = eng.apply(scratch.data() + off, feas[k]);
                const Time node_cost = std::max(cur.cost[i], c);
                if (opt.cost_filter && node_cost > *opt.cost_filter) {
                    scratch.resize(off);
                    ++layer_prunes;
                    continue;
                }
                cand.push_back({off, static_cast<int>(i), feas[k], node_cost});
            }
        }
        out.prunes_total += layer_prunes;

        // dedup on full identity; the surviving candidate is the one with
        // the smallest (parent, op), which keeps recovered orders stable
        std::vector<std::uint32_t> order(cand.size());
        std::iota(order.begin(), order.end(), 0u);
        const Word* base = scratch.data();
        std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
            const int c = eng.cmp(base + cand[x].state, base + cand[y].state);
            if (c != 0) return c < 0;
            if (cand[x].parent != cand[y].parent) return cand[x].parent < cand[y].parent;
            return cand[x].op < cand[y].op;
        });
        std::vector<std::uint32_t> kept;
        kept.reserve(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i > 0 && eng.cmp(base + cand[order[i]].state, base + cand[kept.back()].state) == 0) {
                ++out.duplicates;
                continue;
            }
            kept.push_back(order[i]);
        }

        const std::size_t width_before = kept.size();
        std::size_t layer_merges = 0;

        if (bounded && kept.size() > opt.width) {
            for (auto& idx : kept)
                cand[idx].rank = eng.rank(base + cand[idx].state, opt.rank, cand[idx].cost);
            auto rank_less = [&](std::uint32_t x, std::uint32_t y) {
                if (cand[x].rank != cand[y].rank) return cand[x].rank < cand[y].rank;
                return eng.cmp(base + cand[x].state, base + cand[y].state) < 0;
            };
            std::sort(kept.begin(), kept.end(), rank_less);

            if (!opt.relaxed) {
                kept.resize(opt.width);
            } else {
                while (kept.size() > opt.width) {
                    const auto worst2 = kept.back();
                    kept.pop_back();
                    const auto worst1 = kept.back();
                    kept.pop_back();
                    const std::size_t off = scratch.size();
                    scratch.resize(off + stride);
                    base = scratch.data();
                    eng.merge(base + cand[worst1].state, base + cand[worst2].state,
                              scratch.data() + off, opt.merge_mode);
                    ++layer_merges;
                    Cand merged{off, -1, -1, eng.cost(scratch.data() + off)};
                    merged.rank = eng.rank(base + off, opt.rank, merged.cost);
                    cand.push_back(merged);
                    const auto id = static_cast<std::uint32_t>(cand.size() - 1);
                    auto pos = std::lower_bound(kept.begin(), kept.end(), id, rank_less);
                    // fold if an identical state already sits at this rank
                    bool dup = false;
                    for (auto it = pos;
                         it != kept.end() && cand[*it].rank == merged.rank && !dup; ++it)
                        dup = eng.cmp(base + cand[*it].state, base + off) == 0;
                    for (auto it = std::make_reverse_iterator(pos);
                         it != kept.rend() && cand[*it].rank == merged.rank && !dup; ++it)
                        dup = eng.cmp(base + cand[*it].state, base + off) == 0;
                    if (dup)
                        ++out.duplicates;
                    else
                        kept.insert(pos, id);
                }
            }
        }
        if (layer_merges > 0 && out.first_merge_layer < 0) out.first_merge_layer = layer;
        out.merges_total += layer_merges;

        out.stats.push_back({layer, width_before, kept.size(), layer_merges, layer_prunes});
        out.valid_nodes += static_cast<long long>(kept.size());
        if (out.valid_nodes > opt.node_cap)
            throw std::runtime_error("DD node cap exceeded (" + std::to_string(opt.node_cap) +
                                     " states)");

        auto& next = layers[opt.keep_parents ? layer : layer & 1];
        next.arena.resize(kept.size() * stride);
        next.parent.resize(kept.size());
        next.via_op.resize(kept.size());
        next.cost.resize(kept.size());
        next.count = kept.size();
        for (std::size_t i = 0; i < kept.size(); ++i) {
            const auto& c = cand[kept[i]];
            std::memcpy(next.arena.data() + i * stride, base + c.state, stride * sizeof(Word));
            next.parent[i] = c.parent;
            next.via_op[i] = c.op;
            next.cost[i] = c.cost;
        }
    }

    // terminal layer
    const auto& last = layers[opt.keep_parents ? n_layers : n_layers & 1];
    for (std::size_t i = 0; i < last.count; ++i)
        out.best_terminal_cost = std::min(out.best_terminal_cost, last.cost[i]);

    if (opt.collect > 0 && last.count > 0) {
        std::vector<std::uint32_t> order(last.count);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
            if (last.cost[x] != last.cost[y]) return last.cost[x] < last.cost[y];
            return eng.cmp(last.arena.data() + x * stride, last.arena.data() + y * stride) < 0;
        });
        const auto take = std::min<std::size_t>(order.size(), static_cast<std::size_t>(opt.collect));
        for (std::size_t i = 0; i < take; ++i)
            out.collected_orders.push_back(recover_order(eng, layers, n_layers, order[i]));
    }

    if (opt.want_cutset && out.first_merge_layer > 1) {
        const int cut_layer = out.first_merge_layer - 1;
        const auto& L = layers[cut_layer];
        for (std::size_t i = 0; i < L.count; ++i) {
            std::vector<Word> state(L.arena.begin() + i * stride,
                                    L.arena.begin() + (i + 1) * stride);
            out.cutset.emplace_back(std::move(state), recover_order(eng, layers, cut_layer, i));
        }
    }

    return out;
}

std::vector<Word> pack_state(const DdEngine& eng, const DdState& state) {
    std::vector<Word> s(eng.stride, 0);
    if (static_cast<int>(state.machine_finish.size()) != eng.n_machines)
        throw std::invalid_argument("machine_finish must have one entry per machine");
    auto check_op = [&](int op) {
        if (op < 0 || op >= eng.n_ops)
            throw std::invalid_argument("op index " + std::to_string(op) + " out of range");
    };
    for (const int op : state.done) {
        check_op(op);
        set_bit(s.data(), op);
    }
    for (const int op : state.long_done) {
        check_op(op);
        if (eng.model != DdModel::M2)
            throw std::invalid_argument("long_done set requires model m2");
        if (test_bit(s.data(), op))
            throw std::invalid_argument("op " + std::to_string(op) + " both done and long-done");
        set_bit(s.data() + eng.off_vl, op);
    }
    for (const int op : state.maybe_done) {
        check_op(op);
        if (eng.in_done(s.data(), op))
            throw std::invalid_argument("op " + std::to_string(op) + " both done and maybe-done");
        set_bit(s.data() + eng.off_vs, op);
    }
    if (!state.completion.empty()) {
        if (static_cast<int>(state.completion.size()) != eng.n_ops)
            throw std::invalid_argument("completion must be dense over all ops");
        for (int i = 0; i < eng.n_ops; ++i) {
            if (state.completion[i] < 0)
                throw std::invalid_argument("negative completion time");
            if (state.completion[i] > 0 && !test_bit(s.data(), i))
                throw std::invalid_argument("completion time on op outside the done set");
            s[eng.off_fo + i] = static_cast<Word>(state.completion[i]);
        }
    }
    if (!state.maybe_completion.empty()) {
        if (static_cast<int>(state.maybe_completion.size()) != eng.n_ops)
            throw std::invalid_argument("maybe_completion must be dense over all ops");
        for (int i = 0; i < eng.n_ops; ++i)
            s[eng.off_fs + i] = static_cast<Word>(state.maybe_completion[i]);
    }
    for (int i = 0; i < eng.n_machines; ++i) {
        if (state.machine_finish[i] < 0) throw std::invalid_argument("negative machine finish");
        s[eng.off_fm + i] = static_cast<Word>(state.machine_finish[i]);
    }
    return s;
}

DdState unpack_state(const DdEngine& eng, const Word* s) {
    DdState out;
    out.completion.assign(eng.n_ops, 0);
    out.maybe_completion.assign(eng.n_ops, 0);
    out.machine_finish.assign(eng.n_machines, 0);
    for (int i = 0; i < eng.n_ops; ++i) {
        if (test_bit(s, i)) out.done.push_back(i);
        if (eng.model == DdModel::M2 && test_bit(s + eng.off_vl, i)) out.long_done.push_back(i);
        if (eng.relaxed && test_bit(s + eng.off_vs, i)) out.maybe_done.push_back(i);
        out.completion[i] = static_cast<Time>(s[eng.off_fo + i]);
        if (eng.relaxed) out.maybe_completion[i] = static_cast<Time>(s[eng.off_fs + i]);
    }
    for (int i = 0; i < eng.n_machines; ++i)
        out.machine_finish[i] = static_cast<Time>(s[eng.off_fm + i]);
    return out;
}

RestrictedResult run_restricted(const Instance& instance, DdModel model, std::size_t width,
                                RankMode rank, int collect, std::optional<Time> cost_filter) {
    if (width < 1) throw std::invalid_argument("width must be >= 1");
    DdEngine eng(instance, model, false);
    std::vector<Word> root(eng.stride, 0);

    CompileOptions opt;
    opt.width = width;
    opt.rank = rank;
    opt.cost_filter = cost_filter;
    opt.keep_parents = true;
    opt.collect = std::max(collect, 1);

    auto core = compile_core(eng, opt, root.data());

    RestrictedResult res;
    res.layer_stats = std::move(core.stats);
    res.best_makespan = core.best_terminal_cost;
    res.orders = std::move(core.collected_orders);
    for (const auto& order : res.orders)
        res.schedules.push_back(schedule_from_order(instance, order));
    if (collect < 1) {
        res.orders.clear();
        res.schedules.clear();
    }
    return res;
}

} // namespace

DdState dd_root_state(const Instance& instance, DdModel model) {
    DdEngine eng(instance, model, true);
    std::vector<Word> root(eng.stride, 0);
    return unpack_state(eng, root.data());
}

std::vector<OperationId> dd_feasible_ops(const Instance& instance, DdModel model,
                                         const DdState& state) {
    DdEngine eng(instance, model, true);
    const auto s = pack_state(eng, state);
    std::vector<int> feas(eng.n_ops);
    const int count = eng.feasible(s.data(), feas.data());
    std::vector<OperationId> ops;
    ops.reserve(count);
    for (int i = 0; i < count; ++i) ops.push_back(instance.op_at(feas[i]));
    return ops;
}

DdTransitionResult dd_transition(const Instance& instance, DdModel model, const DdState& state,
                                 OperationId op) {
    DdEngine eng(instance, model, true);
    auto s = pack_state(eng, state);
    const int x = instance.op_index(op);
    if (x < 0 || x >= eng.n_ops) throw std::invalid_argument("op out of range");
    if (eng.in_done(s.data(), x))
        throw std::invalid_argument("transition precondition violated: " + to_string(op) +
                                    " is already done");
    if (op.position > 0) {
        const int pre = x - 1;
        if (!eng.in_any(s.data(), pre))
            throw std::invalid_argument("transition precondition violated: predecessor of " +
                                        to_string(op) + " is not done");
    }
    DdTransitionResult res;
    res.cost = eng.apply(s.data(), x);
    res.state = unpack_state(eng, s.data());
    return res;
}

DdState merge_states(const Instance& instance, DdModel model, const DdState& a, const DdState& b,
                     MergeMode mode) {
    DdEngine eng(instance, model, true);
    const auto pa = pack_state(eng, a);
    const auto pb = pack_state(eng, b);
    if (a.exact() && b.exact() &&
        a.done.size() + a.long_done.size() != b.done.size() + b.long_done.size())
        throw std::invalid_argument("merge_states requires states of the same layer");
    std::vector<Word> out(eng.stride, 0);
    eng.merge(pa.data(), pb.data(), out.data(), mode);
    return unpack_state(eng, out.data());
}

std::string layer_stats_csv(const std::string& instance_name, DdModel model,
                            const std::vector<LayerStat>& stats) {
    std::ostringstream out;
    out << "instance,model,layer,width_before,width_after,merges,prunes\n";
    for (const auto& s : stats)
        out << instance_name << "," << (model == DdModel::M1 ? "m1" : "m2") << "," << s.layer
            << "," << s.width_before << "," << s.width_after << "," << s.merges << ","
            << s.prunes << "\n";
    return out.str();
}

RestrictedResult compile_restricted(const Instance& instance, DdModel model, std::size_t width,
                                    RankMode rank, int collect) {
    return run_restricted(instance, model, width, rank, collect, std::nullopt);
}

namespace detail {
RestrictedResult compile_restricted_filtered(const Instance& instance, DdModel model,
                                             std::size_t width, RankMode rank, int collect,
                                             std::optional<Time> cost_filter) {
    return run_restricted(instance, model, width, rank, collect, cost_filter);
}
} // namespace detail

RelaxedResult compile_relaxed(const Instance& instance, DdModel model, std::size_t width,
                              std::optional<Time> primal_bound, MergeMode merge_mode) {
    if (width < 1) throw std::invalid_argument("width must be >= 1");
    DdEngine eng(instance, model, true);
    std::vector<Word> root(eng.stride, 0);

    CompileOptions opt;
    opt.relaxed = true;
    opt.width = width;
    opt.merge_mode = merge_mode;
    opt.cost_filter = primal_bound;

    auto core = compile_core(eng, opt, root.data());

    RelaxedResult res;
    res.layer_stats = std::move(core.stats);
    res.merges = core.merges_total;
    res.exact = core.merges_total == 0 && core.prunes_total == 0;
    if (core.best_terminal_cost >= kInfTime) {
        // everything beat the primal bound away; the bound itself is proven
        res.bound = primal_bound ? *primal_bound + 1 : 0;
    } else {
        res.bound = core.best_terminal_cost;
    }
    return res;
}

ExpansionResult full_expansion(const Instance& instance, DdModel model, long long node_cap) {
    DdEngine eng(instance, model, false);
    std::vector<Word> root(eng.stride, 0);

    CompileOptions opt;
    opt.node_cap = node_cap;

    auto core = compile_core(eng, opt, root.data());
    if (core.best_terminal_cost >= kInfTime)
        throw std::logic_error("full expansion produced no terminal state");
    return {core.best_terminal_cost, core.valid_nodes, core.duplicates};
}

Time dd_branch_and_bound(const Instance& instance, std::size_t width, long long node_cap) {
    if (width < 1) throw std::invalid_argument("width must be >= 1");
    DdEngine exact(instance, DdModel::M2, false);
    DdEngine relax(instance, DdModel::M2, true);

    auto repack_to_relaxed = [&](const Word* s) {
        std::vector<Word> out(relax.stride, 0);
        std::memcpy(out.data(), s, exact.off_fm * sizeof(Word)); // V, V_L, f_O
        std::memcpy(out.data() + relax.off_fm, s + exact.off_fm,
                    static_cast<std::size_t>(exact.n_machines) * sizeof(Word));
        return out;
    };
    auto repack_to_exact = [&](const Word* s) {
        std::vector<Word> out(exact.stride, 0);
        std::memcpy(out.data(), s, exact.off_fm * sizeof(Word));
        std::memcpy(out.data() + exact.off_fm, s + relax.off_fm,
                    static_cast<std::size_t>(exact.n_machines) * sizeof(Word));
        return out;
    };

    struct OpenNode {
        std::vector<Word> state;
        Time cost;
        long long seq;
    };
    auto cmp = [](const OpenNode& a, const OpenNode& b) {
        if (a.cost != b.cost) return a.cost > b.cost;
        return a.seq > b.seq;
    };
    std::priority_queue<OpenNode, std::vector<OpenNode>, decltype(cmp)> open(cmp);

    std::vector<Word> root(exact.stride, 0);
    long long seq = 0;
    open.push({root, 0, seq++});
    Time incumbent = kInfTime;
    std::vector<int> feas(exact.n_ops);

    while (!open.empty()) {
        OpenNode node = std::move(const_cast<OpenNode&>(open.top()));
        open.pop();
        if (node.cost >= incumbent) continue;

        // primal dive
        CompileOptions dive;
        dive.width = width;
        dive.node_cap = node_cap;
        auto restricted = compile_core(exact, dive, node.state.data());
        incumbent = std::min(incumbent, restricted.best_terminal_cost);

        // dual bound + cutset
        CompileOptions relax_opt;
        relax_opt.relaxed = true;
        relax_opt.width = width;
        relax_opt.merge_mode = MergeMode::Optimistic;
        relax_opt.cost_filter = incumbent;
        relax_opt.node_cap = node_cap;
        relax_opt.keep_parents = true;
        relax_opt.want_cutset = true;
        const auto relaxed_root = repack_to_relaxed(node.state.data());
        auto relaxed = compile_core(relax, relax_opt, relaxed_root.data());

        const Time bound =
            relaxed.best_terminal_cost >= kInfTime ? incumbent : relaxed.best_terminal_cost;
        if (bound >= incumbent) continue;
        if (relaxed.merges_total == 0) {
            // no merging: the relaxed diagram enumerated the subtree exactly
            incumbent = std::min(incumbent, bound);
            continue;
        }

        if (!relaxed.cutset.empty()) {
            for (auto& [packed, suffix] : relaxed.cutset) {
                auto child = repack_to_exact(packed.data());
                const Time c = exact.cost(child.data());
                if (c >= incumbent) continue;
                open.push({std::move(child), c, seq++});
            }
        } else {
            // merging started immediately; branch on the root's children
            const int n_feas = exact.feasible(node.state.data(), feas.data());
            for (int k = 0; k < n_feas; ++k) {
                std::vector<Word> child(node.state);
                exact.apply(child.data(), feas[k]);
                const Time c = exact.cost(child.data());
                if (c >= incumbent) continue;
                open.push({std::move(child), c, seq++});
            }
        }
    }
    return incumbent;
}

AStarResult a_star_search(const Instance& instance, AStarHeuristic heuristic,
                          long long expansion_cap) {
    DdEngine eng(instance, DdModel::M2, false);
    const std::size_t stride = eng.stride;

    std::vector<Word> arena;
    auto state_at = [&](std::size_t idx) { return arena.data() + idx * stride; };

    auto priority_of = [&](const Word* s) -> Time {
        const Time g = eng.cost(s);
        if (heuristic == AStarHeuristic::Zero) return g;
        Time best = g;
        std::vector<Time> machine_remaining(eng.machine_total);
        std::vector<Time> job_remaining(eng.job_total);
        for (int x = 0; x < eng.n_ops; ++x) {
            if (!eng.in_done(s, x)) continue;
            machine_remaining[eng.mach_of[x]] -= static_cast<Time>(eng.dur[x]);
            job_remaining[x / eng.n_machines] -= static_cast<Time>(eng.dur[x]);
        }
        for (int i = 0; i < eng.n_machines; ++i)
            best = std::max(best, static_cast<Time>(s[eng.off_fm + i]) + machine_remaining[i]);
        for (int j = 0; j < instance.n_jobs(); ++j) {
            Time ready = 0;
            for (int p = instance.n_machines() - 1; p >= 0; --p) {
                const int idx = j * eng.n_machines + p;
                if (test_bit(s, idx)) {
                    ready = static_cast<Time>(s[eng.off_fo + idx]);
                    break;
                }
            }
            best = std::max(best, ready + job_remaining[j]);
        }
        return best;
    };

    // open-addressed set of stored states
    std::size_t table_bits = 16;
    std::vector<std::uint32_t> table(std::size_t(1) << table_bits, UINT32_MAX);
    std::size_t stored = 0;
    auto hash_of = [&](const Word* s) {
        std::uint64_t h = 1469598103934665603ULL;
        for (std::size_t i = 0; i < stride; ++i) {
            h ^= s[i];
            h *= 1099511628211ULL;
        }
        return h;
    };
    std::function<bool(const Word*)> insert_if_absent = [&](const Word* s) -> bool {
        if (stored * 2 >= table.size()) {
            std::vector<std::uint32_t> bigger(table.size() * 2, UINT32_MAX);
            for (const auto idx : table) {
                if (idx == UINT32_MAX) continue;
                std::size_t slot = hash_of(state_at(idx)) & (bigger.size() - 1);
                while (bigger[slot] != UINT32_MAX) slot = (slot + 1) & (bigger.size() - 1);
                bigger[slot] = idx;
            }
            table = std::move(bigger);
        }
        std::size_t slot = hash_of(s) & (table.size() - 1);
        while (table[slot] != UINT32_MAX) {
            if (eng.equal(state_at(table[slot]), s)) return false;
            slot = (slot + 1) & (table.size() - 1);
        }
        arena.insert(arena.end(), s, s + stride);
        if (arena.size() > (std::size_t(1) << 28))
            throw std::runtime_error("A* node cap exceeded (state storage)");
        table[slot] = static_cast<std::uint32_t>(stored);
        ++stored;
        return true;
    };

    struct Entry {
        Time f;
        std::uint32_t idx;
    };
    auto entry_cmp = [&](const Entry& a, const Entry& b) {
        if (a.f != b.f) return a.f > b.f;
        return eng.cmp(state_at(a.idx), state_at(b.idx)) > 0;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(entry_cmp)> open(entry_cmp);

    std::vector<Word> root(stride, 0);
    insert_if_absent(root.data());
    open.push({priority_of(root.data()), 0});

    AStarResult res;
    std::vector<int> feas(eng.n_ops);
    std::vector<Word> parent(stride);
    std::vector<Word> child(stride);

    while (!open.empty()) {
        const Entry top = open.top();
        open.pop();
        // the arena may grow while children are inserted, so expand a copy
        std::memcpy(parent.data(), state_at(top.idx), stride * sizeof(Word));
        if (eng.depth_of(parent.data()) == eng.n_ops) {
            res.optimum = eng.cost(parent.data());
            return res;
        }
        if (++res.expansions > expansion_cap)
            throw std::runtime_error("A* expansion cap exceeded (" +
                                     std::to_string(expansion_cap) + ")");
        const int n_feas = eng.feasible(parent.data(), feas.data());
        for (int k = 0; k < n_feas; ++k) {
            std::memcpy(child.data(), parent.data(), stride * sizeof(Word));
            eng.apply(child.data(), feas[k]);
            const std::size_t idx = stored;
            if (insert_if_absent(child.data()))
                open.push({priority_of(child.data()), static_cast<std::uint32_t>(idx)});
        }
    }
    throw std::logic_error("A* exhausted the open list without reaching a terminal state");
}

} // namespace jobshop
