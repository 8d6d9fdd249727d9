#include "lcge/chimera.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace lcge {

int unit_cell_index(int x, int depth) {
    if (x < 1 || depth < 1)
        throw std::invalid_argument("unit_cell_index: indices are 1-based, got x=" +
                                    std::to_string(x) + " depth=" + std::to_string(depth));
    return (x + depth - 1) / depth;
}

namespace {

void validate_dims(const ChimeraDims& d) {
    if (d.cell_rows < 1 || d.cell_cols < 1 || d.depth < 1)
        throw std::invalid_argument("ChimeraGraph: all dimensions must be positive");
}

}  // namespace

ChimeraGraph::ChimeraGraph(ChimeraDims dims,
                           std::vector<HorizontalVertex> broken_horizontal,
                           std::vector<VerticalVertex> broken_vertical)
    : dims_(dims), broken_h_(std::move(broken_horizontal)), broken_v_(std::move(broken_vertical)) {
    validate_dims(dims_);
    std::sort(broken_h_.begin(), broken_h_.end());
    std::sort(broken_v_.begin(), broken_v_.end());
    if (std::adjacent_find(broken_h_.begin(), broken_h_.end()) != broken_h_.end())
        throw std::invalid_argument("ChimeraGraph: duplicate broken horizontal vertex");
    if (std::adjacent_find(broken_v_.begin(), broken_v_.end()) != broken_v_.end())
        throw std::invalid_argument("ChimeraGraph: duplicate broken vertical vertex");

    h_mask_.assign(std::size_t(dims_.inner_rows()) * dims_.cell_cols, 0);
    v_mask_.assign(std::size_t(dims_.cell_rows) * dims_.inner_cols(), 0);
    for (const auto& h : broken_h_) {
        if (h.row < 1 || h.row > dims_.inner_rows() || h.cell_col < 1 || h.cell_col > dims_.cell_cols)
            throw std::invalid_argument("ChimeraGraph: broken horizontal vertex (" +
                                        std::to_string(h.row) + ", " + std::to_string(h.cell_col) +
                                        ") out of range");
        h_mask_[std::size_t(h.row - 1) * dims_.cell_cols + (h.cell_col - 1)] = 1;
    }
    for (const auto& v : broken_v_) {
        if (v.cell_row < 1 || v.cell_row > dims_.cell_rows || v.col < 1 || v.col > dims_.inner_cols())
            throw std::invalid_argument("ChimeraGraph: broken vertical vertex (" +
                                        std::to_string(v.cell_row) + ", " + std::to_string(v.col) +
                                        ") out of range");
        v_mask_[std::size_t(v.cell_row - 1) * dims_.inner_cols() + (v.col - 1)] = 1;
    }
}

double ChimeraGraph::broken_ratio() const {
    return double(broken_count()) / double(dims_.total_vertices());
}

bool ChimeraGraph::crossroad_available(Crossroad rc) const {
    if (rc.row < 1 || rc.row > dims_.inner_rows() || rc.col < 1 || rc.col > dims_.inner_cols())
        throw std::invalid_argument("crossroad_available: crossroad (" + std::to_string(rc.row) +
                                    ", " + std::to_string(rc.col) + ") out of range");
    return !horizontal_broken(rc.row, unit_cell_index(rc.col, dims_.depth)) &&
           !vertical_broken(unit_cell_index(rc.row, dims_.depth), rc.col);
}

std::vector<Crossroad> ChimeraGraph::available_crossroads() const {
    std::vector<Crossroad> out;
    for (int r = 1; r <= dims_.inner_rows(); ++r)
        for (int c = 1; c <= dims_.inner_cols(); ++c)
            if (crossroad_available({r, c})) out.push_back({r, c});
    return out;
}

std::vector<HorizontalVertex> Cross::horizontal_vertices() const {
    std::vector<HorizontalVertex> out;
    for (int j = h_cell_lo; j <= h_cell_hi; ++j) out.push_back({crossroad.row, j});
    return out;
}

std::vector<VerticalVertex> Cross::vertical_vertices() const {
    std::vector<VerticalVertex> out;
    for (int i = v_cell_lo; i <= v_cell_hi; ++i) out.push_back({i, crossroad.col});
    return out;
}

Cross build_cross(const ChimeraGraph& g, Crossroad rc) {
    if (!g.crossroad_available(rc))
        throw std::invalid_argument("build_cross: crossroad (" + std::to_string(rc.row) + ", " +
                                    std::to_string(rc.col) + ") is not available");
    const ChimeraDims& d = g.dims();
    Cross x;
    x.crossroad = rc;
    x.h_cell_lo = x.h_cell_hi = unit_cell_index(rc.col, d.depth);
    x.v_cell_lo = x.v_cell_hi = unit_cell_index(rc.row, d.depth);
    while (x.h_cell_lo > 1 && !g.horizontal_broken(rc.row, x.h_cell_lo - 1)) --x.h_cell_lo;
    while (x.h_cell_hi < d.cell_cols && !g.horizontal_broken(rc.row, x.h_cell_hi + 1)) ++x.h_cell_hi;
    while (x.v_cell_lo > 1 && !g.vertical_broken(x.v_cell_lo - 1, rc.col)) --x.v_cell_lo;
    while (x.v_cell_hi < d.cell_rows && !g.vertical_broken(x.v_cell_hi + 1, rc.col)) ++x.v_cell_hi;
    return x;
}

namespace {

// Does an intra-cell edge join a's horizontal arm to b's vertical arm?  The
// candidate edge sits at (a.row, b.col); both endpoints must lie on the arms
// and be unbroken.
bool arm_meet(const ChimeraGraph& g, const Cross& a, const Cross& b) {
    const int depth = g.dims().depth;
    const int cell_col = unit_cell_index(b.crossroad.col, depth);
    const int cell_row = unit_cell_index(a.crossroad.row, depth);
    return cell_col >= a.h_cell_lo && cell_col <= a.h_cell_hi &&
           cell_row >= b.v_cell_lo && cell_row <= b.v_cell_hi &&
           !g.horizontal_broken(a.crossroad.row, cell_col) &&
           !g.vertical_broken(cell_row, b.crossroad.col);
}

}  // namespace

bool crosses_meet(const ChimeraGraph& g, const Cross& a, const Cross& b) {
    if (a.crossroad.row == b.crossroad.row || a.crossroad.col == b.crossroad.col) return false;
    return arm_meet(g, a, b) || arm_meet(g, b, a);
}

}  // namespace lcge
