#include "lcge/embedding.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>

namespace lcge {

const char* to_string(FailureKind k) {
    switch (k) {
        case FailureKind::overlap: return "overlap";
        case FailureKind::disconnected: return "disconnected";
        case FailureKind::broken_vertex_used: return "broken_vertex_used";
        case FailureKind::pair_not_connected: return "pair_not_connected";
    }
    return "unknown";
}

Chain to_chain(const Cross& cross) {
    Chain c;
    c.crossroad = cross.crossroad;
    c.horizontal = cross.horizontal_vertices();
    c.vertical = cross.vertical_vertices();
    return c;
}

Embedding extract_embedding(const ChimeraGraph& g, std::span<const Crossroad> activated) {
    std::vector<Crossroad> sorted(activated.begin(), activated.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].row == sorted[i - 1].row)
            throw std::invalid_argument("extract_embedding: two crossroads on inner row " +
                                        std::to_string(sorted[i].row));
    std::set<int> cols;
    for (const Crossroad& rc : sorted)
        if (!cols.insert(rc.col).second)
            throw std::invalid_argument("extract_embedding: two crossroads on inner column " +
                                        std::to_string(rc.col));
    Embedding e;
    for (const Crossroad& rc : sorted) e.chains.push_back(to_chain(build_cross(g, rc)));
    return e;
}

namespace {

// Dense ids so chain membership can be looked up in O(1): horizontal
// vertices first, then vertical ones.
struct VertexIndex {
    const ChimeraDims dims;
    int h_count;

    explicit VertexIndex(const ChimeraDims& d)
        : dims(d), h_count(d.inner_rows() * d.cell_cols) {}

    int total() const { return h_count + dims.cell_rows * dims.inner_cols(); }
    int of(HorizontalVertex h) const { return (h.row - 1) * dims.cell_cols + (h.cell_col - 1); }
    int of(VerticalVertex v) const {
        return h_count + (v.cell_row - 1) * dims.inner_cols() + (v.col - 1);
    }
};

std::string describe(HorizontalVertex h) {
    return "horizontal (" + std::to_string(h.row) + ", " + std::to_string(h.cell_col) + ")";
}
std::string describe(VerticalVertex v) {
    return "vertical (" + std::to_string(v.cell_row) + ", " + std::to_string(v.col) + ")";
}

}  // namespace

VerificationReport verify_embedding(const ChimeraGraph& g, const Embedding& e) {
    const ChimeraDims& d = g.dims();
    VertexIndex index(d);
    VerificationReport report;
    report.clique_size = e.size();

    // owner[id] = chain index + 1, 0 = unused
    std::vector<int> owner(index.total(), 0);
    for (int i = 0; i < e.size(); ++i) {
        const Chain& chain = e.chains[i];
        auto claim = [&](int id, const std::string& name) {
            int& slot = owner[id];
            if (slot == i + 1) return;  // duplicate inside one chain is harmless
            if (slot != 0) {
                report.failures.push_back(
                    {FailureKind::overlap, slot - 1, i, name + " used by both chains"});
                return;
            }
            slot = i + 1;
        };
        for (const HorizontalVertex& h : chain.horizontal) {
            if (h.row < 1 || h.row > d.inner_rows() || h.cell_col < 1 || h.cell_col > d.cell_cols)
                throw std::invalid_argument("verify_embedding: " + describe(h) + " out of range");
            if (g.horizontal_broken(h.row, h.cell_col))
                report.failures.push_back(
                    {FailureKind::broken_vertex_used, i, -1, describe(h) + " is broken"});
            claim(index.of(h), describe(h));
        }
        for (const VerticalVertex& v : chain.vertical) {
            if (v.cell_row < 1 || v.cell_row > d.cell_rows || v.col < 1 || v.col > d.inner_cols())
                throw std::invalid_argument("verify_embedding: " + describe(v) + " out of range");
            if (g.vertical_broken(v.cell_row, v.col))
                report.failures.push_back(
                    {FailureKind::broken_vertex_used, i, -1, describe(v) + " is broken"});
            claim(index.of(v), describe(v));
        }
        if (chain.horizontal.empty() && chain.vertical.empty())
            report.failures.push_back({FailureKind::disconnected, i, -1, "chain is empty"});
    }

    // Per-chain connectivity over the real adjacency: intra-cell edges join a
    // horizontal vertex to the depth vertical vertices of its cell, inter-cell
    // edges join consecutive cells along a row or column.  Broken vertices
    // have no edges.
    for (int i = 0; i < e.size(); ++i) {
        const Chain& chain = e.chains[i];
        std::set<int> members;
        for (const HorizontalVertex& h : chain.horizontal) members.insert(index.of(h));
        for (const VerticalVertex& v : chain.vertical) members.insert(index.of(v));
        if (members.empty()) continue;

        std::set<int> visited;
        std::queue<int> frontier;
        auto visit = [&](int id) {
            if (members.count(id) && !visited.count(id)) {
                visited.insert(id);
                frontier.push(id);
            }
        };
        visit(*members.begin());
        while (!frontier.empty()) {
            int id = frontier.front();
            frontier.pop();
            if (id < index.h_count) {
                HorizontalVertex h{id / d.cell_cols + 1, id % d.cell_cols + 1};
                if (g.horizontal_broken(h.row, h.cell_col)) continue;
                if (h.cell_col > 1 && !g.horizontal_broken(h.row, h.cell_col - 1))
                    visit(index.of(HorizontalVertex{h.row, h.cell_col - 1}));
                if (h.cell_col < d.cell_cols && !g.horizontal_broken(h.row, h.cell_col + 1))
                    visit(index.of(HorizontalVertex{h.row, h.cell_col + 1}));
                int cell_row = unit_cell_index(h.row, d.depth);
                for (int c = (h.cell_col - 1) * d.depth + 1; c <= h.cell_col * d.depth; ++c)
                    if (!g.vertical_broken(cell_row, c)) visit(index.of(VerticalVertex{cell_row, c}));
            } else {
                int vid = id - index.h_count;
                VerticalVertex v{vid / d.inner_cols() + 1, vid % d.inner_cols() + 1};
                if (g.vertical_broken(v.cell_row, v.col)) continue;
                if (v.cell_row > 1 && !g.vertical_broken(v.cell_row - 1, v.col))
                    visit(index.of(VerticalVertex{v.cell_row - 1, v.col}));
                if (v.cell_row < d.cell_rows && !g.vertical_broken(v.cell_row + 1, v.col))
                    visit(index.of(VerticalVertex{v.cell_row + 1, v.col}));
                int cell_col = unit_cell_index(v.col, d.depth);
                for (int r = (v.cell_row - 1) * d.depth + 1; r <= v.cell_row * d.depth; ++r)
                    if (!g.horizontal_broken(r, cell_col)) visit(index.of(HorizontalVertex{r, cell_col}));
            }
        }
        if (visited.size() != members.size())
            report.failures.push_back({FailureKind::disconnected, i, -1,
                                       std::to_string(members.size() - visited.size()) +
                                           " vertices unreachable inside the chain"});
    }

    // Every pair of chains needs at least one hardware edge between them.
    std::vector<std::set<int>> member_sets(e.size());
    for (int i = 0; i < e.size(); ++i) {
        for (const HorizontalVertex& h : e.chains[i].horizontal) member_sets[i].insert(index.of(h));
        for (const VerticalVertex& v : e.chains[i].vertical) member_sets[i].insert(index.of(v));
    }
    for (int i = 0; i < e.size(); ++i) {
        for (int j = i + 1; j < e.size(); ++j) {
            bool connected = false;
            auto other_has = [&](int id) { return member_sets[j].count(id) != 0; };
            for (const HorizontalVertex& h : e.chains[i].horizontal) {
                if (g.horizontal_broken(h.row, h.cell_col)) continue;
                if (h.cell_col > 1 && !g.horizontal_broken(h.row, h.cell_col - 1) &&
                    other_has(index.of(HorizontalVertex{h.row, h.cell_col - 1})))
                    connected = true;
                if (h.cell_col < d.cell_cols && !g.horizontal_broken(h.row, h.cell_col + 1) &&
                    other_has(index.of(HorizontalVertex{h.row, h.cell_col + 1})))
                    connected = true;
                int cell_row = unit_cell_index(h.row, d.depth);
                for (int c = (h.cell_col - 1) * d.depth + 1; c <= h.cell_col * d.depth && !connected; ++c)
                    if (!g.vertical_broken(cell_row, c) && other_has(index.of(VerticalVertex{cell_row, c})))
                        connected = true;
                if (connected) break;
            }
            for (const VerticalVertex& v : e.chains[i].vertical) {
                if (connected) break;
                if (g.vertical_broken(v.cell_row, v.col)) continue;
                if (v.cell_row > 1 && !g.vertical_broken(v.cell_row - 1, v.col) &&
                    other_has(index.of(VerticalVertex{v.cell_row - 1, v.col})))
                    connected = true;
                if (v.cell_row < d.cell_rows && !g.vertical_broken(v.cell_row + 1, v.col) &&
                    other_has(index.of(VerticalVertex{v.cell_row + 1, v.col})))
                    connected = true;
                int cell_col = unit_cell_index(v.col, d.depth);
                for (int r = (v.cell_row - 1) * d.depth + 1; r <= v.cell_row * d.depth && !connected; ++r)
                    if (!g.horizontal_broken(r, cell_col) && other_has(index.of(HorizontalVertex{r, cell_col})))
                        connected = true;
            }
            if (!connected)
                report.failures.push_back(
                    {FailureKind::pair_not_connected, i, j, "no edge joins the two chains"});
        }
    }

    report.valid = report.failures.empty();
    return report;
}

}  // namespace lcge
