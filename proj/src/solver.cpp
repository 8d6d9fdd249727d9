#include "lcge/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "lcge/matching.hpp"

namespace lcge {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::feasible_timeout: return "feasible_timeout";
        case SolveStatus::infeasible_model: return "infeasible_model";
        case SolveStatus::out_of_memory: return "out_of_memory";
    }
    return "unknown";
}

SolveStatus solve_status_from_string(const std::string& s) {
    if (s == "optimal") return SolveStatus::optimal;
    if (s == "feasible_timeout") return SolveStatus::feasible_timeout;
    if (s == "infeasible_model") return SolveStatus::infeasible_model;
    if (s == "out_of_memory") return SolveStatus::out_of_memory;
    throw std::invalid_argument("unknown solve status: " + s);
}

namespace {

using Clock = std::chrono::steady_clock;

struct BranchItem {
    enum class Kind : unsigned char { mixed, split_rows, split_cols };
    Kind kind = Kind::mixed;
    int mes_index = -1;           // split items: constraint to partition
    int line_a = 0, line_b = 0;   // the two rows (split_rows) or columns (split_cols)
    Crossroad common{};           // mixed items
    IntervalSpec rect_rows{}, rect_cols{};
};

struct Context {
    const IlpModel* model = nullptr;
    int rows = 0, cols = 0;
    std::vector<BranchItem> items;
    // Variables in row-major order as a CSR over inner rows, for fast
    // residual-mask construction.
    std::vector<int> row_ptr;
    std::vector<int> var_col;
    std::vector<int> var_grid;
    Clock::time_point deadline;
    bool has_deadline = false;
    std::size_t memory_cap = 0;
    int threads = 1;

    int grid_index(Crossroad rc) const { return (rc.row - 1) * cols + (rc.col - 1); }
};

using Path = std::vector<std::pair<int, signed char>>;  // (item, child 1|2)

struct Shared {
    std::atomic<int> best{0};
    std::mutex best_mu;
    std::vector<Crossroad> best_set;
    std::atomic<std::uint64_t> nodes{0}, leaves{0};
    std::atomic<bool> timed_out{false};
    std::atomic<bool> out_of_memory{false};

    std::mutex pool_mu;
    std::condition_variable pool_cv;
    std::vector<Path> pool;
    std::atomic<int> pool_size{0};
    int active = 0;
    bool done = false;

    void offer_better(int value, std::vector<Crossroad> set) {
        std::lock_guard lk(best_mu);
        if (value > best.load(std::memory_order_relaxed)) {
            best.store(value, std::memory_order_relaxed);
            best_set = std::move(set);
        }
    }
};

constexpr int kNoItem = -1;
constexpr int kContradiction = -2;

struct Frame {
    int item = 0;
    int stage = 0;  // 0: child1 pending, 1: child2 pending, 2: done, 3: child2 offloaded
    std::size_t node_mark = 0;   // trail length before this node's propagation
    std::size_t child_mark = 0;  // trail length before the active child's decision
    bool did_one = false;
};

struct State {
    const Context* ctx = nullptr;
    Shared* sh = nullptr;
    std::vector<unsigned char> zero, one;
    std::vector<unsigned char> row_used, col_used;
    std::vector<int> trail;
    std::vector<Crossroad> ones;
    std::vector<Frame> stack;
    Path path;  // decisions from the task root down, for offloading
    EdgeMask residual;
    HopcroftKarp hk;
    std::uint64_t nodes = 0, leaves = 0;
    bool aborted = false;

    void init(const Context& c, Shared& s) {
        ctx = &c;
        sh = &s;
        residual.rows = c.rows;
        residual.cols = c.cols;
        residual.ptr.resize(c.rows + 1);
        reset();
    }

    void reset() {
        zero.assign(std::size_t(ctx->rows) * ctx->cols, 0);
        one.assign(zero.size(), 0);
        row_used.assign(ctx->rows + 1, 0);
        col_used.assign(ctx->cols + 1, 0);
        trail.clear();
        ones.clear();
        stack.clear();
        path.clear();
    }

    void set_zero(int gi) {
        zero[gi] = 1;
        trail.push_back(gi);
    }

    void undo_to(std::size_t mark) {
        while (trail.size() > mark) {
            zero[trail.back()] = 0;
            trail.pop_back();
        }
    }

    // Zeroes the live variables of a mixed item's rectangle.  Returns false
    // when the rectangle holds a variable already forced to one, i.e. the
    // current assignment is contradictory.
    bool zero_rectangle(const BranchItem& it) {
        for (int r = it.rect_rows.lo; r <= it.rect_rows.hi; ++r) {
            for (int c = it.rect_cols.lo; c <= it.rect_cols.hi; ++c) {
                int gi = (r - 1) * ctx->cols + (c - 1);
                if (!ctx->model->variable_mask[gi] || zero[gi]) continue;
                if (one[gi]) return false;
                set_zero(gi);
            }
        }
        return true;
    }

    // Scans items from `cursor`, applying forced resolutions.  Returns the
    // first item that still needs a decision, kNoItem at a leaf, or
    // kContradiction when the assignment cannot be completed.
    int propagate(int cursor) {
        const auto& items = ctx->items;
        for (int idx = cursor; idx < int(items.size()); ++idx) {
            const BranchItem& it = items[idx];
            if (it.kind == BranchItem::Kind::mixed) {
                int gc = ctx->grid_index(it.common);
                if (zero[gc]) continue;
                if (one[gc]) {
                    if (!zero_rectangle(it)) return kContradiction;
                    continue;
                }
                return idx;
            }
            const auto& ms = ctx->model->mes[it.mes_index].members;
            const bool by_rows = it.kind == BranchItem::Kind::split_rows;
            int live_a = 0, live_b = 0, ones_here = 0;
            for (const Crossroad& rc : ms) {
                int gi = ctx->grid_index(rc);
                if (zero[gi]) continue;
                if (one[gi]) {
                    ++ones_here;
                    continue;
                }
                ((by_rows ? rc.row : rc.col) == it.line_a ? live_a : live_b)++;
            }
            if (ones_here >= 2) return kContradiction;
            if (ones_here == 1) {
                for (const Crossroad& rc : ms) {
                    int gi = ctx->grid_index(rc);
                    if (!zero[gi] && !one[gi]) set_zero(gi);
                }
                continue;
            }
            if (live_a == 0 || live_b == 0 || live_a + live_b <= 1) continue;
            return idx;
        }
        return kNoItem;
    }

    void build_residual() {
        residual.col.clear();
        residual.ptr[0] = 0;
        for (int r = 1; r <= ctx->rows; ++r) {
            if (!row_used[r]) {
                for (int i = ctx->row_ptr[r - 1]; i < ctx->row_ptr[r]; ++i) {
                    int c = ctx->var_col[i];
                    if (!zero[ctx->var_grid[i]] && !col_used[c]) residual.col.push_back(c);
                }
            }
            residual.ptr[r] = int(residual.col.size());
        }
    }

    bool over_deadline() const { return ctx->has_deadline && Clock::now() >= ctx->deadline; }

    std::size_t working_bytes() const {
        return trail.capacity() * sizeof(int) + 2 * zero.capacity() +
               stack.capacity() * sizeof(Frame) + residual.col.capacity() * sizeof(int);
    }

    // Handles node entry after the parent's decision was applied: propagate,
    // bound, record leaves, push a frame when branching is required.  Returns
    // true when a frame was pushed.
    bool enter_node(int cursor) {
        ++nodes;
        if ((nodes & 1023) == 0) {
            if (sh->timed_out.load(std::memory_order_relaxed) ||
                sh->out_of_memory.load(std::memory_order_relaxed)) {
                aborted = true;
                return false;
            }
            if (working_bytes() > ctx->memory_cap) {
                sh->out_of_memory.store(true);
                aborted = true;
                return false;
            }
        }
        if (over_deadline()) {
            sh->timed_out.store(true);
            aborted = true;
            return false;
        }
        std::size_t node_mark = trail.size();
        int item = propagate(cursor);
        if (item == kContradiction) {
            undo_to(node_mark);
            return false;
        }
        build_residual();
        int ub = int(ones.size()) + hk.solve(residual);
        if (item == kNoItem) {
            ++leaves;
            if (ub > sh->best.load(std::memory_order_relaxed)) {
                std::vector<Crossroad> set(ones);
                for (auto [r, c] : hk.extract(residual).pairs) set.push_back({r, c});
                std::sort(set.begin(), set.end());
                sh->offer_better(ub, std::move(set));
            }
            undo_to(node_mark);
            return false;
        }
        if (ub <= sh->best.load(std::memory_order_relaxed)) {
            undo_to(node_mark);
            return false;
        }
        stack.push_back({item, 0, node_mark, 0, false});
        return true;
    }

    // Child 1 of a mixed item rejects the common crossroad; child 2 activates
    // it and clears its rectangle.  For split items child 1 keeps side A
    // alive, child 2 keeps side B.
    bool apply_child(const BranchItem& it, int child) {
        if (it.kind == BranchItem::Kind::mixed) {
            int gc = ctx->grid_index(it.common);
            if (child == 1) {
                set_zero(gc);
                return true;
            }
            if (row_used[it.common.row] || col_used[it.common.col]) return false;
            std::size_t mark = trail.size();
            if (!zero_rectangle(it)) {
                undo_to(mark);
                return false;
            }
            one[gc] = 1;
            row_used[it.common.row] = 1;
            col_used[it.common.col] = 1;
            ones.push_back(it.common);
            return true;
        }
        const auto& ms = ctx->model->mes[it.mes_index].members;
        const bool by_rows = it.kind == BranchItem::Kind::split_rows;
        const int dead_line = child == 1 ? it.line_b : it.line_a;
        for (const Crossroad& rc : ms) {
            if ((by_rows ? rc.row : rc.col) != dead_line) continue;
            int gi = ctx->grid_index(rc);
            if (!zero[gi]) set_zero(gi);
        }
        return true;
    }

    void unapply_one(const BranchItem& it) {
        int gc = ctx->grid_index(it.common);
        one[gc] = 0;
        row_used[it.common.row] = 0;
        col_used[it.common.col] = 0;
        ones.pop_back();
    }

    // Runs the subtree rooted at the replayed task path to exhaustion.
    void run(Path task) {
        reset();
        int cursor = 0;
        bool replay_ok = true;
        for (auto [item, child] : task) {
            if (propagate(cursor) != item || !apply_child(ctx->items[item], child)) {
                replay_ok = false;  // an earlier decision already closed this line
                break;
            }
            path.push_back({item, child});
            cursor = item;
        }
        if (replay_ok) dfs(cursor);
        sh->nodes.fetch_add(nodes, std::memory_order_relaxed);
        sh->leaves.fetch_add(leaves, std::memory_order_relaxed);
        nodes = leaves = 0;
    }

    void dfs(int cursor) {
        if (!enter_node(cursor)) return;
        while (!stack.empty()) {
            Frame& f = stack.back();
            const BranchItem& it = ctx->items[f.item];
            if (f.stage == 0) {
                f.stage = 1;
                maybe_offload(f, it);
                f.child_mark = trail.size();
                f.did_one = false;
                if (apply_child(it, 1)) {
                    path.push_back({f.item, 1});
                    if (enter_node(f.item)) continue;
                    if (aborted) break;
                    path.pop_back();
                    undo_to(stack.back().child_mark);
                } else {
                    undo_to(f.child_mark);
                }
            } else if (f.stage == 1) {
                f.stage = 2;
                f.child_mark = trail.size();
                if (apply_child(it, 2)) {
                    f.did_one = it.kind == BranchItem::Kind::mixed;
                    path.push_back({f.item, 2});
                    if (enter_node(f.item)) continue;
                    if (aborted) break;
                    path.pop_back();
                    Frame& g = stack.back();
                    if (g.did_one) unapply_one(ctx->items[g.item]);
                    g.did_one = false;
                    undo_to(g.child_mark);
                } else {
                    undo_to(f.child_mark);
                }
            } else {
                undo_to(f.node_mark);
                stack.pop_back();
                if (!stack.empty()) {
                    Frame& g = stack.back();
                    path.pop_back();
                    if (g.did_one) unapply_one(ctx->items[g.item]);
                    g.did_one = false;
                    undo_to(g.child_mark);
                }
            }
        }
    }

    void maybe_offload(Frame& f, const BranchItem&) {
        if (ctx->threads <= 1) return;
        if (path.size() >= 64) return;
        if (sh->pool_size.load(std::memory_order_relaxed) >= ctx->threads * 4) return;
        Path task = path;
        task.push_back({f.item, 2});
        {
            std::lock_guard lk(sh->pool_mu);
            sh->pool.push_back(std::move(task));
            sh->pool_size.store(int(sh->pool.size()), std::memory_order_relaxed);
        }
        sh->pool_cv.notify_one();
        f.stage = 3;  // this worker skips child 2
    }
};

Context build_context(const IlpModel& model, const SolverOptions& opts) {
    Context ctx;
    ctx.model = &model;
    ctx.rows = model.dims.inner_rows();
    ctx.cols = model.dims.inner_cols();
    ctx.threads = std::max(1, opts.threads);
    ctx.memory_cap = opts.memory_cap_bytes;
    if (opts.budget_seconds > 0) {
        ctx.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                          std::chrono::duration<double>(opts.budget_seconds));
        ctx.has_deadline = true;
    }

    ctx.row_ptr.assign(ctx.rows + 1, 0);
    ctx.var_col.reserve(model.variables.size());
    ctx.var_grid.reserve(model.variables.size());
    for (Crossroad rc : model.variables) {  // sorted row-major
        ctx.row_ptr[rc.row]++;
        ctx.var_col.push_back(rc.col);
        ctx.var_grid.push_back(ctx.grid_index(rc));
    }
    for (int r = 1; r <= ctx.rows; ++r) ctx.row_ptr[r] += ctx.row_ptr[r - 1];

    // One branch item per mixed pair, then one per horizontal/vertical pair
    // constraint.  Mixed items first: their accept child fixes a variable and
    // clears a whole rectangle, which moves the bound fastest.
    struct Keyed {
        BranchItem item;
        long long weight;
        std::tuple<int, int, int, int> tie;
    };
    std::vector<Keyed> mixed, splits;
    std::map<std::tuple<int, int, int, int>, bool> seen_pairs;
    for (std::size_t i = 0; i < model.mes.size(); ++i) {
        const MesConstraint& cons = model.mes[i];
        if (const auto* hh = std::get_if<HhProvenance>(&cons.provenance)) {
            BranchItem it;
            it.kind = BranchItem::Kind::split_rows;
            it.mes_index = int(i);
            it.line_a = hh->h.row;
            it.line_b = hh->k.row;
            splits.push_back({it, (long long)cons.members.size(), {int(i), 0, 0, 0}});
        } else if (const auto* vv = std::get_if<VvProvenance>(&cons.provenance)) {
            BranchItem it;
            it.kind = BranchItem::Kind::split_cols;
            it.mes_index = int(i);
            it.line_a = vv->v.col;
            it.line_b = vv->w.col;
            splits.push_back({it, (long long)cons.members.size(), {int(i), 0, 0, 0}});
        } else {
            const auto& mp = std::get<MixProvenance>(cons.provenance);
            auto key = std::make_tuple(mp.h.row, mp.h.cell_col, mp.v.cell_row, mp.v.col);
            if (!seen_pairs.emplace(key, true).second) continue;
            std::optional<MixedPairInfo> info = mixed_pair_info(model.dims, mp.h, mp.v);
            // A heuristic exclusion elsewhere can fix this pair's common to
            // zero.  Its surviving constraints then live on single lines,
            // which the row/column constraints already enforce.
            if (!model.is_variable(info->common)) continue;
            BranchItem it;
            it.kind = BranchItem::Kind::mixed;
            it.common = info->common;
            it.rect_rows = info->rect_rows;
            it.rect_cols = info->rect_cols;
            mixed.push_back({it, (long long)info->rect_cells, key});
        }
    }
    auto heavier = [](const Keyed& a, const Keyed& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.tie < b.tie;
    };
    std::sort(mixed.begin(), mixed.end(), heavier);
    std::sort(splits.begin(), splits.end(), heavier);
    ctx.items.reserve(mixed.size() + splits.size());
    for (const Keyed& k : mixed) ctx.items.push_back(k.item);
    for (const Keyed& k : splits) ctx.items.push_back(k.item);
    return ctx;
}

// Matching over all variables, then one repair sweep that deactivates every
// member after the first in any violated constraint.  The result is feasible
// for the model, which seeds the incumbent before search starts.
std::vector<Crossroad> greedy_incumbent(const IlpModel& model) {
    const int rows = model.dims.inner_rows(), cols = model.dims.inner_cols();
    EdgeMask mask = EdgeMask::from_crossroads(rows, cols, model.variables);
    BipartiteMatching match = max_matching(mask);
    std::vector<unsigned char> act(std::size_t(rows) * cols, 0);
    for (auto [r, c] : match.pairs) act[std::size_t(r - 1) * cols + (c - 1)] = 1;
    for (const MesConstraint& cons : model.mes) {
        bool kept = false;
        for (const Crossroad& rc : cons.members) {
            unsigned char& a = act[std::size_t(rc.row - 1) * cols + (rc.col - 1)];
            if (!a) continue;
            if (kept)
                a = 0;
            else
                kept = true;
        }
    }
    std::vector<Crossroad> out;
    for (auto [r, c] : match.pairs)
        if (act[std::size_t(r - 1) * cols + (c - 1)]) out.push_back({r, c});
    return out;
}

void worker_loop(const Context& ctx, Shared& sh) {
    State st;
    st.init(ctx, sh);
    std::unique_lock lk(sh.pool_mu);
    for (;;) {
        sh.pool_cv.wait(lk, [&] { return sh.done || !sh.pool.empty(); });
        if (sh.pool.empty()) {
            if (sh.done) return;
            continue;
        }
        Path task = std::move(sh.pool.back());
        sh.pool.pop_back();
        sh.pool_size.store(int(sh.pool.size()), std::memory_order_relaxed);
        ++sh.active;
        lk.unlock();
        st.run(std::move(task));
        lk.lock();
        --sh.active;
        if (st.aborted) {
            sh.pool.clear();
            sh.pool_size.store(0, std::memory_order_relaxed);
            sh.done = true;
            sh.pool_cv.notify_all();
            return;
        }
        if (sh.active == 0 && sh.pool.empty()) {
            sh.done = true;
            sh.pool_cv.notify_all();
        }
    }
}

}  // namespace

SolveResult solve(const IlpModel& model, const SolverOptions& opts) {
    const auto t0 = Clock::now();
    Context ctx = build_context(model, opts);
    Shared sh;
    std::vector<Crossroad> greedy = greedy_incumbent(model);
    sh.best.store(int(greedy.size()));
    sh.best_set = std::move(greedy);
    sh.pool.push_back({});
    sh.pool_size.store(1);

    if (ctx.threads == 1) {
        worker_loop(ctx, sh);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(ctx.threads);
        for (int i = 0; i < ctx.threads; ++i) pool.emplace_back([&] { worker_loop(ctx, sh); });
        for (auto& t : pool) t.join();
    }

    SolveResult res;
    res.objective = sh.best.load();
    res.activated = std::move(sh.best_set);
    if (sh.out_of_memory.load())
        res.status = SolveStatus::out_of_memory;
    else if (sh.timed_out.load())
        res.status = SolveStatus::feasible_timeout;
    else
        res.status = SolveStatus::optimal;
    res.stats.nodes = sh.nodes.load();
    res.stats.leaves = sh.leaves.load();
    res.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return res;
}

SolveResult solve_heuristic(const ChimeraGraph& g, double max_rect_ratio,
                            const SolverOptions& opts) {
    IlpModel model;
    try {
        model = build_model(g, ModelMode::with_ratio(max_rect_ratio), {opts.max_model_members});
    } catch (const ModelTooLarge&) {
        SolveResult res;
        res.status = SolveStatus::out_of_memory;
        return res;
    }
    return solve(model, opts);
}

}  // namespace lcge
