#pragma once

#include <span>
#include <utility>
#include <vector>

#include "lcge/chimera.hpp"

namespace lcge {

// Bipartite edge set between inner rows and inner columns, stored in
// compressed sparse row form.  Adjacency lists are kept sorted so matching
// results are deterministic.
struct EdgeMask {
    int rows = 0;
    int cols = 0;
    std::vector<int> ptr;  // rows+1 offsets into col
    std::vector<int> col;  // 1-based column indices

    static EdgeMask from_crossroads(int rows, int cols, std::span<const Crossroad> edges);
    int edge_count() const { return int(col.size()); }
};

struct BipartiteMatching {
    std::vector<std::pair<int, int>> pairs;  // (row, col), sorted by row
    int size() const { return int(pairs.size()); }
};

// Maximum-cardinality matching via Hopcroft-Karp.  Reusable across calls so
// the branch-and-bound can solve one relaxation per node without
// reallocating.
class HopcroftKarp {
public:
    int solve(const EdgeMask& mask);
    BipartiteMatching extract(const EdgeMask& mask) const;

private:
    bool bfs(const EdgeMask& mask);
    bool dfs(const EdgeMask& mask, int row);

    std::vector<int> match_row_, match_col_;  // 0 = unmatched
    std::vector<int> dist_;
    std::vector<int> queue_;
    std::vector<int> iter_;
};

BipartiteMatching max_matching(const EdgeMask& mask);

}  // namespace lcge
