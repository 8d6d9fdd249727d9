#include "lcge/constraints.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>

namespace lcge {

IntervalSpec interval(int s1, CellComparator s2, int depth, int limit) {
    if (s1 < 1 || s1 > limit)
        throw std::invalid_argument("interval: cell index " + std::to_string(s1) +
                                    " outside 1.." + std::to_string(limit));
    if (2 * s1 <= s2.twice) return {1, depth * s1};
    return {depth * s1 - (depth - 1), depth * limit};
}

MesKind MesConstraint::kind() const {
    if (std::holds_alternative<HhProvenance>(provenance)) return MesKind::horizontal;
    if (std::holds_alternative<VvProvenance>(provenance)) return MesKind::vertical;
    return MesKind::mixed;
}

namespace {

// Keeps the available members of `row` x `cols` followed by `other_row` x
// `other_cols`, sorted, and drops the constraint when fewer than two remain.
void emit_row_pair(const ChimeraGraph& g, int row_a, IntervalSpec cols_a, int row_b,
                   IntervalSpec cols_b, MesProvenance prov, std::vector<MesConstraint>& out) {
    MesConstraint cons;
    cons.provenance = std::move(prov);
    for (int c = cols_a.lo; c <= cols_a.hi; ++c)
        if (g.crossroad_available({row_a, c})) cons.members.push_back({row_a, c});
    for (int c = cols_b.lo; c <= cols_b.hi; ++c)
        if (g.crossroad_available({row_b, c})) cons.members.push_back({row_b, c});
    if (cons.members.size() < 2) return;
    std::sort(cons.members.begin(), cons.members.end());
    out.push_back(std::move(cons));
}

void emit_col_pair(const ChimeraGraph& g, IntervalSpec rows_a, int col_a, IntervalSpec rows_b,
                   int col_b, MesProvenance prov, std::vector<MesConstraint>& out) {
    MesConstraint cons;
    cons.provenance = std::move(prov);
    for (int r = rows_a.lo; r <= rows_a.hi; ++r)
        if (g.crossroad_available({r, col_a})) cons.members.push_back({r, col_a});
    for (int r = rows_b.lo; r <= rows_b.hi; ++r)
        if (g.crossroad_available({r, col_b})) cons.members.push_back({r, col_b});
    if (cons.members.size() < 2) return;
    std::sort(cons.members.begin(), cons.members.end());
    out.push_back(std::move(cons));
}

}  // namespace

std::vector<MesConstraint> mes_horizontal_pair(const ChimeraGraph& g, HorizontalVertex h,
                                               HorizontalVertex k) {
    if (!g.horizontal_broken(h.row, h.cell_col) || !g.horizontal_broken(k.row, k.cell_col))
        throw std::invalid_argument("mes_horizontal_pair: vertices must be broken");
    std::vector<MesConstraint> out;
    if (h.row == k.row) return out;
    const ChimeraDims& d = g.dims();
    // Crossroads on h's own side of h conflict with those on k's far side:
    // both crosses get cut before reaching the other's column range.
    IntervalSpec own_h = interval(h.cell_col, CellComparator::at(k.cell_col), d.depth, d.cell_cols);
    IntervalSpec far_k = interval(k.cell_col, CellComparator::just_below(h.cell_col), d.depth, d.cell_cols);
    emit_row_pair(g, h.row, own_h, k.row, far_k, HhProvenance{h, k, 1}, out);
    emit_row_pair(g, k.row, own_h, h.row, far_k, HhProvenance{h, k, 2}, out);
    return out;
}

std::vector<MesConstraint> mes_vertical_pair(const ChimeraGraph& g, VerticalVertex v,
                                             VerticalVertex w) {
    if (!g.vertical_broken(v.cell_row, v.col) || !g.vertical_broken(w.cell_row, w.col))
        throw std::invalid_argument("mes_vertical_pair: vertices must be broken");
    std::vector<MesConstraint> out;
    if (v.col == w.col) return out;
    const ChimeraDims& d = g.dims();
    IntervalSpec own_v = interval(v.cell_row, CellComparator::at(w.cell_row), d.depth, d.cell_rows);
    IntervalSpec far_w = interval(w.cell_row, CellComparator::just_below(v.cell_row), d.depth, d.cell_rows);
    emit_col_pair(g, own_v, v.col, far_w, w.col, VvProvenance{v, w, 1}, out);
    emit_col_pair(g, own_v, w.col, far_w, v.col, VvProvenance{v, w, 2}, out);
    return out;
}

std::optional<MixedPairInfo> mixed_pair_info(const ChimeraDims& dims, HorizontalVertex h,
                                             VerticalVertex v) {
    if (unit_cell_index(h.row, dims.depth) == v.cell_row) return std::nullopt;
    if (unit_cell_index(v.col, dims.depth) == h.cell_col) return std::nullopt;
    MixedPairInfo info;
    info.h = h;
    info.v = v;
    info.common = {h.row, v.col};
    info.rect_rows = interval(v.cell_row, CellComparator::at(unit_cell_index(h.row, dims.depth)),
                              dims.depth, dims.cell_rows);
    info.rect_cols = interval(h.cell_col, CellComparator::at(unit_cell_index(v.col, dims.depth)),
                              dims.depth, dims.cell_cols);
    info.rect_cells = info.rect_rows.cell_count(dims.depth) * info.rect_cols.cell_count(dims.depth);
    return info;
}

std::optional<MixedPairInfo> mixed_pair_info(const ChimeraGraph& g, HorizontalVertex h,
                                             VerticalVertex v) {
    return mixed_pair_info(g.dims(), h, v);
}

std::vector<MesConstraint> mes_mixed_pair(const ChimeraGraph& g, const MixedPairInfo& info) {
    std::vector<MesConstraint> out;
    if (!g.crossroad_available(info.common)) return out;
    const bool by_rows = info.rect_rows.length() <= info.rect_cols.length();
    if (by_rows) {
        for (int r = info.rect_rows.lo; r <= info.rect_rows.hi; ++r) {
            MesConstraint cons;
            cons.provenance = MixProvenance{info.h, info.v, true, r};
            cons.members.push_back(info.common);
            for (int c = info.rect_cols.lo; c <= info.rect_cols.hi; ++c)
                if (g.crossroad_available({r, c})) cons.members.push_back({r, c});
            if (cons.members.size() < 2) continue;
            std::sort(cons.members.begin(), cons.members.end());
            out.push_back(std::move(cons));
        }
    } else {
        for (int c = info.rect_cols.lo; c <= info.rect_cols.hi; ++c) {
            MesConstraint cons;
            cons.provenance = MixProvenance{info.h, info.v, false, c};
            cons.members.push_back(info.common);
            for (int r = info.rect_rows.lo; r <= info.rect_rows.hi; ++r)
                if (g.crossroad_available({r, c})) cons.members.push_back({r, c});
            if (cons.members.size() < 2) continue;
            std::sort(cons.members.begin(), cons.members.end());
            out.push_back(std::move(cons));
        }
    }
    return out;
}

ConstraintSet generate_constraints(const ChimeraGraph& g, std::optional<double> max_rect_ratio,
                                   std::size_t max_member_budget) {
    if (max_rect_ratio && (*max_rect_ratio < 0.0 || *max_rect_ratio > 1.0))
        throw std::invalid_argument("generate_constraints: max_rect_ratio must lie in [0, 1]");

    ConstraintSet set;
    std::size_t members = 0;
    // Dedup by member set without keeping a second copy of each set: bucket
    // by hash, compare against the stored constraint on collision.
    std::unordered_map<std::uint64_t, std::vector<int>> seen;
    auto hash_members = [](const std::vector<Crossroad>& ms) {
        std::uint64_t h = 1469598103934665603ull;
        for (const Crossroad& rc : ms) {
            h = (h ^ std::uint64_t(rc.row)) * 1099511628211ull;
            h = (h ^ std::uint64_t(rc.col)) * 1099511628211ull;
        }
        return h;
    };
    auto append = [&](std::vector<MesConstraint>&& cons) {
        for (MesConstraint& c : cons) {
            std::vector<int>& bucket = seen[hash_members(c.members)];
            bool fresh = true;
            for (int idx : bucket)
                if (set.constraints[idx].members == c.members) {
                    fresh = false;
                    break;
                }
            if (!fresh) continue;
            members += c.members.size();
            if (members > max_member_budget)
                throw ModelTooLarge("constraint set exceeds the member budget of " +
                                    std::to_string(max_member_budget));
            bucket.push_back(int(set.constraints.size()));
            set.constraints.push_back(std::move(c));
        }
    };

    const auto& bh = g.broken_horizontal();
    const auto& bv = g.broken_vertical();
    for (std::size_t i = 0; i < bh.size(); ++i)
        for (std::size_t j = i + 1; j < bh.size(); ++j)
            append(mes_horizontal_pair(g, bh[i], bh[j]));
    for (std::size_t i = 0; i < bv.size(); ++i)
        for (std::size_t j = i + 1; j < bv.size(); ++j)
            append(mes_vertical_pair(g, bv[i], bv[j]));

    const double cell_area = double(g.dims().cell_rows) * double(g.dims().cell_cols);
    for (const HorizontalVertex& h : bh) {
        for (const VerticalVertex& v : bv) {
            std::optional<MixedPairInfo> info = mixed_pair_info(g, h, v);
            if (!info) continue;
            if (max_rect_ratio && double(info->rect_cells) >= *max_rect_ratio * cell_area) {
                set.excluded.push_back(info->common);
                continue;
            }
            append(mes_mixed_pair(g, *info));
        }
    }

    std::sort(set.excluded.begin(), set.excluded.end());
    set.excluded.erase(std::unique(set.excluded.begin(), set.excluded.end()), set.excluded.end());
    return set;
}

}  // namespace lcge
