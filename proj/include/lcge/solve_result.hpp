#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lcge/chimera.hpp"

namespace lcge {

enum class SolveStatus { optimal, feasible_timeout, infeasible_model, out_of_memory };

const char* to_string(SolveStatus s);
SolveStatus solve_status_from_string(const std::string& s);

struct SolveStats {
    std::uint64_t nodes = 0;
    std::uint64_t leaves = 0;
    double wall_seconds = 0.0;
};

struct SolveResult {
    int objective = 0;
    std::vector<Crossroad> activated;  // sorted
    SolveStatus status = SolveStatus::optimal;
    SolveStats stats;
};

}  // namespace lcge
