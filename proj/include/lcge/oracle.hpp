#pragma once

#include <cstdint>
#include <stdexcept>

#include "lcge/chimera.hpp"
#include "lcge/solve_result.hpp"

namespace lcge {

class OracleCapExceeded : public std::runtime_error {
public:
    explicit OracleCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Exhaustive search for the largest set of available crossroads that is
// pairwise compatible: distinct rows, distinct columns, crosses meeting.
// Independent of the constraint machinery on purpose; this is the reference
// the model-based solver is tested against.  Throws OracleCapExceeded when
// the search tree outgrows node_cap.
SolveResult brute_force_optimum(const ChimeraGraph& g, std::uint64_t node_cap = 50'000'000);

}  // namespace lcge
