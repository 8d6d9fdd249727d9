#pragma once

#include <iosfwd>
#include <vector>

#include "lcge/chimera.hpp"
#include "lcge/constraints.hpp"

namespace lcge {

// Exact mode keeps every mixed constraint; heuristic mode trades the mixed
// constraints of large-rectangle pairs for fixed zeros on their commons.
struct ModelMode {
    bool heuristic = false;
    double max_rect_ratio = 0.0;

    static ModelMode exact() { return {false, 0.0}; }
    static ModelMode with_ratio(double m) { return {true, m}; }

    friend bool operator==(const ModelMode&, const ModelMode&) = default;
};

struct ModelLimits {
    std::size_t max_mes_members = kDefaultMemberBudget;
};

// 0/1 program: maximize the number of activated crossroads subject to at most
// one activation per inner row, per inner column, and per MES constraint.
// Crossroads outside `variables` are fixed to zero.  Immutable once built.
struct IlpModel {
    ChimeraDims dims;
    ModelMode mode;
    int broken_h_count = 0;
    int broken_v_count = 0;
    std::vector<Crossroad> variables;   // sorted
    std::vector<MesConstraint> mes;     // members are variables, >= 2 each
    std::vector<Crossroad> fixed_zero;  // sorted complement of variables

    bool is_variable(Crossroad rc) const {
        return variable_mask[std::size_t(rc.row - 1) * dims.inner_cols() + (rc.col - 1)] != 0;
    }
    std::vector<unsigned char> variable_mask;
};

struct ModelStats {
    int num_vars = 0;
    int num_row_cons = 0;
    int num_col_cons = 0;
    int num_mes = 0;
    int num_fixed = 0;
};

IlpModel build_model(const ChimeraGraph& g, ModelMode mode, const ModelLimits& limits = {});

// Writes the model in CPLEX LP format with stable names (x_R_C, row_R, col_C,
// mes_K).  Matching constraints with no surviving variable are omitted; the
// output is byte-deterministic for a given model.
void export_lp(const IlpModel& model, std::ostream& out);

// Counts plus internal consistency checks; throws std::logic_error when a
// count exceeds its proven bound.
ModelStats model_stats(const IlpModel& model);

}  // namespace lcge
