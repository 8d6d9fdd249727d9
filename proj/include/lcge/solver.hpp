#pragma once

#include "lcge/model.hpp"
#include "lcge/solve_result.hpp"

namespace lcge {

struct SolverOptions {
    double budget_seconds = 3600.0;  // <= 0 means no limit; model build time not counted
    int threads = 1;
    std::size_t memory_cap_bytes = 2ull << 30;          // solver working set
    std::size_t max_model_members = kDefaultMemberBudget;  // used by solve_heuristic
};

// Exact branch and bound over the model's MES constraints.  Branching removes
// one constraint per node (two-way on which side survives, or on whether a
// mixed pair's common crossroad is activated); leaves and bounds are
// maximum-matching computations.  With threads == 1 the result, including the
// activated set, is deterministic; with more threads objective and status
// still match the single-threaded run.
SolveResult solve(const IlpModel& model, const SolverOptions& opts = {});

// Builds the reduced model for max_rect_ratio and solves it.  A model that
// exceeds opts.max_model_members yields an out_of_memory result instead of
// throwing.
SolveResult solve_heuristic(const ChimeraGraph& g, double max_rect_ratio,
                            const SolverOptions& opts = {});

}  // namespace lcge
