#pragma once

#include <compare>
#include <vector>

namespace lcge {

// Dimensions of a Chimera hardware graph: a cell_rows x cell_cols lattice of
// unit cells, each cell a complete bipartite graph K_{depth,depth}.  All
// indices in this project are 1-based.
struct ChimeraDims {
    int cell_rows = 1;
    int cell_cols = 1;
    int depth = 4;

    int inner_rows() const { return depth * cell_rows; }
    int inner_cols() const { return depth * cell_cols; }
    int total_vertices() const { return 2 * depth * cell_rows * cell_cols; }

    friend bool operator==(const ChimeraDims&, const ChimeraDims&) = default;
};

// Unit cell containing inner index x, i.e. ceil(x / depth).
int unit_cell_index(int x, int depth);

// Horizontally connected vertex: lives on inner row `row` and belongs to the
// cell in column `cell_col`.  Its inter-cell edges run left/right along the
// row; inside its cell it is adjacent to all depth vertically connected
// vertices.
struct HorizontalVertex {
    int row = 0;       // 1..depth*cell_rows
    int cell_col = 0;  // 1..cell_cols
    friend auto operator<=>(const HorizontalVertex&, const HorizontalVertex&) = default;
};

// Vertically connected vertex on inner column `col` in cell row `cell_row`.
struct VerticalVertex {
    int cell_row = 0;  // 1..cell_rows
    int col = 0;       // 1..depth*cell_cols
    friend auto operator<=>(const VerticalVertex&, const VerticalVertex&) = default;
};

// Identifies an intra-cell edge by the inner row and inner column it joins.
// The edge lives in cell (unit_cell_index(row), unit_cell_index(col)) and
// connects HorizontalVertex{row, u(col)} with VerticalVertex{u(row), col}.
struct Crossroad {
    int row = 0;
    int col = 0;
    friend auto operator<=>(const Crossroad&, const Crossroad&) = default;
};

inline HorizontalVertex horizontal_endpoint(const ChimeraDims& d, Crossroad rc) {
    return {rc.row, unit_cell_index(rc.col, d.depth)};
}
inline VerticalVertex vertical_endpoint(const ChimeraDims& d, Crossroad rc) {
    return {unit_cell_index(rc.row, d.depth), rc.col};
}

// Chimera graph with a (possibly empty) set of broken vertices.  Broken
// vertices are removed together with all their incident edges.  Immutable
// after construction; safe to share across threads.
class ChimeraGraph {
public:
    ChimeraGraph(ChimeraDims dims,
                 std::vector<HorizontalVertex> broken_horizontal,
                 std::vector<VerticalVertex> broken_vertical);

    const ChimeraDims& dims() const { return dims_; }
    const std::vector<HorizontalVertex>& broken_horizontal() const { return broken_h_; }
    const std::vector<VerticalVertex>& broken_vertical() const { return broken_v_; }
    int broken_count() const { return int(broken_h_.size() + broken_v_.size()); }
    double broken_ratio() const;

    bool horizontal_broken(int row, int cell_col) const {
        return h_mask_[std::size_t(row - 1) * dims_.cell_cols + (cell_col - 1)] != 0;
    }
    bool vertical_broken(int cell_row, int col) const {
        return v_mask_[std::size_t(cell_row - 1) * dims_.inner_cols() + (col - 1)] != 0;
    }

    // A crossroad is available when both endpoints of its edge are unbroken.
    bool crossroad_available(Crossroad rc) const;

    // All available crossroads in lexicographic (row, col) order.
    std::vector<Crossroad> available_crossroads() const;

private:
    ChimeraDims dims_;
    std::vector<HorizontalVertex> broken_h_;  // sorted
    std::vector<VerticalVertex> broken_v_;    // sorted
    std::vector<unsigned char> h_mask_;
    std::vector<unsigned char> v_mask_;
};

// Cross through an available crossroad: the horizontal arm is the maximal run
// of unbroken vertices on the crossroad's inner row, the vertical arm the
// maximal run on its inner column.  Arms are stored as inclusive cell ranges
// and always contain the crossroad's own cell.
struct Cross {
    Crossroad crossroad;
    int h_cell_lo = 0, h_cell_hi = 0;  // cell columns covered by the horizontal arm
    int v_cell_lo = 0, v_cell_hi = 0;  // cell rows covered by the vertical arm

    std::vector<HorizontalVertex> horizontal_vertices() const;
    std::vector<VerticalVertex> vertical_vertices() const;

    friend bool operator==(const Cross&, const Cross&) = default;
};

// Builds the maximal cross through an available crossroad.  Throws
// std::invalid_argument if the crossroad is out of range or unavailable.
Cross build_cross(const ChimeraGraph& g, Crossroad rc);

// True when some intra-cell edge joins one cross's horizontal arm to the
// other's vertical arm.  Crosses on the same inner row or column never meet
// by this definition; they conflict through the matching constraints instead.
bool crosses_meet(const ChimeraGraph& g, const Cross& a, const Cross& b);

}  // namespace lcge
