#include "lcge/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <vector>

namespace lcge {

namespace {

struct Search {
    const ChimeraGraph* g;
    std::uint64_t node_cap;
    std::uint64_t nodes = 0, leaves = 0;

    std::vector<Crossroad> avail;
    std::vector<Cross> crosses;
    std::vector<std::vector<bool>> meets;          // pairwise, by index into avail
    std::vector<int> rows;                         // distinct inner rows with candidates
    std::vector<std::pair<int, int>> row_ranges;   // [begin, end) into avail per row
    std::vector<char> col_used;

    std::vector<int> chosen;
    std::vector<int> best;

    void prepare() {
        avail = g->available_crossroads();
        crosses.reserve(avail.size());
        for (const Crossroad& rc : avail) crosses.push_back(build_cross(*g, rc));
        meets.assign(avail.size(), std::vector<bool>(avail.size(), false));
        for (std::size_t i = 0; i < avail.size(); ++i)
            for (std::size_t j = i + 1; j < avail.size(); ++j)
                meets[i][j] = meets[j][i] = crosses_meet(*g, crosses[i], crosses[j]);
        for (std::size_t i = 0; i < avail.size();) {
            std::size_t j = i;
            while (j < avail.size() && avail[j].row == avail[i].row) ++j;
            rows.push_back(avail[i].row);
            row_ranges.push_back({int(i), int(j)});
            i = j;
        }
        col_used.assign(g->dims().inner_cols() + 1, 0);
    }

    void dfs(std::size_t row_idx) {
        if (++nodes > node_cap)
            throw OracleCapExceeded("brute force search exceeded " + std::to_string(node_cap) +
                                    " nodes");
        if (chosen.size() > best.size()) best = chosen;
        if (row_idx == rows.size()) {
            ++leaves;
            return;
        }
        // Even taking one crossroad from every remaining row cannot beat the
        // incumbent: stop.
        if (chosen.size() + (rows.size() - row_idx) <= best.size()) return;

        auto [lo, hi] = row_ranges[row_idx];
        for (int i = lo; i < hi; ++i) {
            if (col_used[avail[i].col]) continue;
            bool ok = true;
            for (int c : chosen)
                if (!meets[c][i]) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(i);
            col_used[avail[i].col] = 1;
            dfs(row_idx + 1);
            col_used[avail[i].col] = 0;
            chosen.pop_back();
        }
        dfs(row_idx + 1);  // skip this row entirely
    }
};

}  // namespace

SolveResult brute_force_optimum(const ChimeraGraph& g, std::uint64_t node_cap) {
    const auto t0 = std::chrono::steady_clock::now();
    Search s;
    s.g = &g;
    s.node_cap = node_cap;
    s.prepare();
    s.dfs(0);

    SolveResult res;
    res.status = SolveStatus::optimal;
    res.objective = int(s.best.size());
    for (int i : s.best) res.activated.push_back(s.avail[i]);
    std::sort(res.activated.begin(), res.activated.end());
    res.stats.nodes = s.nodes;
    res.stats.leaves = s.leaves;
    res.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace lcge
