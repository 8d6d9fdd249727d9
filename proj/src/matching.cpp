#include "lcge/matching.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace lcge {

EdgeMask EdgeMask::from_crossroads(int rows, int cols, std::span<const Crossroad> edges) {
    EdgeMask m;
    m.rows = rows;
    m.cols = cols;
    m.ptr.assign(rows + 1, 0);
    for (const Crossroad& rc : edges) {
        if (rc.row < 1 || rc.row > rows || rc.col < 1 || rc.col > cols)
            throw std::invalid_argument("EdgeMask: crossroad out of range");
        ++m.ptr[rc.row];
    }
    for (int r = 1; r <= rows; ++r) m.ptr[r] += m.ptr[r - 1];
    m.col.resize(edges.size());
    std::vector<int> cursor(m.ptr.begin(), m.ptr.end() - 1);
    for (const Crossroad& rc : edges) m.col[cursor[rc.row - 1]++] = rc.col;
    for (int r = 0; r < rows; ++r) std::sort(m.col.begin() + m.ptr[r], m.col.begin() + m.ptr[r + 1]);
    return m;
}

namespace {
constexpr int kInf = std::numeric_limits<int>::max();
}

bool HopcroftKarp::bfs(const EdgeMask& mask) {
    int head = 0, tail = 0;
    dist_.assign(mask.rows + 1, kInf);
    for (int r = 1; r <= mask.rows; ++r) {
        if (match_row_[r] == 0) {
            dist_[r] = 0;
            queue_[tail++] = r;
        }
    }
    bool found_free_col = false;
    while (head < tail) {
        int r = queue_[head++];
        for (int i = mask.ptr[r - 1]; i < mask.ptr[r]; ++i) {
            int c = mask.col[i];
            int nr = match_col_[c];
            if (nr == 0) {
                found_free_col = true;
            } else if (dist_[nr] == kInf) {
                dist_[nr] = dist_[r] + 1;
                queue_[tail++] = nr;
            }
        }
    }
    return found_free_col;
}

bool HopcroftKarp::dfs(const EdgeMask& mask, int row) {
    for (int& i = iter_[row]; i < mask.ptr[row]; ++i) {
        int c = mask.col[i];
        int nr = match_col_[c];
        if (nr == 0 || (dist_[nr] == dist_[row] + 1 && dfs(mask, nr))) {
            match_row_[row] = c;
            match_col_[c] = row;
            return true;
        }
    }
    dist_[row] = kInf;
    return false;
}

int HopcroftKarp::solve(const EdgeMask& mask) {
    match_row_.assign(mask.rows + 1, 0);
    match_col_.assign(mask.cols + 1, 0);
    queue_.resize(mask.rows + 1);
    iter_.resize(mask.rows + 1);
    int matched = 0;
    while (bfs(mask)) {
        for (int r = 1; r <= mask.rows; ++r) iter_[r] = mask.ptr[r - 1];
        for (int r = 1; r <= mask.rows; ++r)
            if (match_row_[r] == 0 && dfs(mask, r)) ++matched;
    }
    return matched;
}

BipartiteMatching HopcroftKarp::extract(const EdgeMask& mask) const {
    BipartiteMatching out;
    for (int r = 1; r <= mask.rows; ++r)
        if (r < int(match_row_.size()) && match_row_[r] != 0) out.pairs.emplace_back(r, match_row_[r]);
    return out;
}

BipartiteMatching max_matching(const EdgeMask& mask) {
    HopcroftKarp hk;
    hk.solve(mask);
    return hk.extract(mask);
}

}  // namespace lcge
