#pragma once

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "lcge/chimera.hpp"

namespace lcge {

// Inclusive range of inner indices; empty when hi < lo.  Every interval
// produced here is aligned to unit cell boundaries.
struct IntervalSpec {
    int lo = 1;
    int hi = 0;

    bool empty() const { return hi < lo; }
    int length() const { return empty() ? 0 : hi - lo + 1; }
    bool contains(int x) const { return x >= lo && x <= hi; }
    // Number of unit cells covered; valid because lo/hi are cell aligned.
    int cell_count(int depth) const { return length() / depth; }

    friend bool operator==(const IntervalSpec&, const IntervalSpec&) = default;
};

// Cell comparator that can sit half a step below an integer cell index.
// Stored doubled so the half never touches floating point.
struct CellComparator {
    int twice = 0;
    static CellComparator at(int cell) { return {2 * cell}; }
    static CellComparator just_below(int cell) { return {2 * cell - 1}; }
};

// Inner-index interval on one side of cell s1: everything up to and including
// cell s1 when s1 <= s2, otherwise everything from cell s1 to the boundary.
// `limit` is the number of cells along the axis.
IntervalSpec interval(int s1, CellComparator s2, int depth, int limit);

// Where a constraint came from, enough to reconstruct its branching shape.
struct HhProvenance {
    HorizontalVertex h, k;
    int side = 1;  // 1: h keeps its own side, 2: sides swapped
};
struct VvProvenance {
    VerticalVertex v, w;
    int side = 1;
};
struct MixProvenance {
    HorizontalVertex h;
    VerticalVertex v;
    bool by_rows = true;  // aggregation axis
    int line = 0;         // the aggregated inner row (or column)
};
using MesProvenance = std::variant<HhProvenance, VvProvenance, MixProvenance>;

enum class MesKind { horizontal, vertical, mixed };

// "At most one of these crossroads" constraint.  Members are available
// crossroads, sorted; any two of them either share a row/column or have
// crosses that fail to meet.
struct MesConstraint {
    std::vector<Crossroad> members;
    MesProvenance provenance;
    MesKind kind() const;
};

// Geometry of the conflict between a broken horizontal and a broken vertical
// vertex: the crossroad whose arms both pairs of breaks clip, and the
// rectangle of crossroads cut off from it.
struct MixedPairInfo {
    HorizontalVertex h;
    VerticalVertex v;
    Crossroad common;
    IntervalSpec rect_rows;  // inner rows
    IntervalSpec rect_cols;  // inner columns
    int rect_cells = 0;      // rectangle area in unit cells
};

// Constraints for a pair of broken horizontal vertices on distinct inner
// rows; empty when the rows coincide.  Each returned constraint is filtered
// to available crossroads and dropped when fewer than two survive.
std::vector<MesConstraint> mes_horizontal_pair(const ChimeraGraph& g,
                                               HorizontalVertex h, HorizontalVertex k);
std::vector<MesConstraint> mes_vertical_pair(const ChimeraGraph& g,
                                             VerticalVertex v, VerticalVertex w);

// Empty when the two breaks share a cell row or cell column (no conflict).
std::optional<MixedPairInfo> mixed_pair_info(const ChimeraDims& dims,
                                             HorizontalVertex h, VerticalVertex v);
std::optional<MixedPairInfo> mixed_pair_info(const ChimeraGraph& g,
                                             HorizontalVertex h, VerticalVertex v);

// Aggregated constraints for one mixed pair: one constraint per line of the
// shorter rectangle axis, each containing the common crossroad plus that
// line's rectangle crossroads.  Empty when the common crossroad is broken.
std::vector<MesConstraint> mes_mixed_pair(const ChimeraGraph& g, const MixedPairInfo& info);

struct ConstraintSet {
    std::vector<MesConstraint> constraints;  // deduplicated, generation order
    std::vector<Crossroad> excluded;         // commons removed in heuristic mode, sorted
};

// Thrown when a model would exceed the configured size budget; the caller is
// expected to surface this as an out-of-memory result rather than crash.
class ModelTooLarge : public std::runtime_error {
public:
    explicit ModelTooLarge(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::size_t kDefaultMemberBudget = 150'000'000;

// All constraints for the graph.  With max_rect_ratio set (heuristic mode, m
// in [0,1]) every mixed pair whose rectangle covers at least m * cell_rows *
// cell_cols unit cells loses its common crossroad instead of generating
// constraints.  max_member_budget caps the total stored members.
ConstraintSet generate_constraints(const ChimeraGraph& g,
                                   std::optional<double> max_rect_ratio,
                                   std::size_t max_member_budget = kDefaultMemberBudget);

}  // namespace lcge
