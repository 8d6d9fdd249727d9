#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lcge/model.hpp"
#include "lcge/solve_result.hpp"

namespace lcge {

struct BenchInstanceRow {
    int size = 0;
    double broken_ratio = 0.0;
    int instance_index = 0;
    std::uint64_t seed = 0;
    int objective = 0;
    SolveStatus status = SolveStatus::optimal;
    double wall_seconds = 0.0;
};

struct BenchAggregateRow {
    int size = 0;
    double broken_ratio = 0.0;
    double mean_ratio = 0.0;  // mean objective over the ideal clique size depth*size
    double median = 0.0;      // of the objectives
    double q1 = 0.0;
    double q3 = 0.0;
    int solved_count = 0;  // rows that reached optimal
};

// Linearly interpolated quantile on ascending values (the common "type 7"
// convention): position (n-1)*p.  Throws on an empty vector.
double quantile(std::span<const double> sorted_values, double p);

BenchAggregateRow aggregate_cell(int size, int depth, double broken_ratio,
                                 std::span<const BenchInstanceRow> rows);

// Instance seed for cell (size, ratio), index i, derived from the base seed.
// The ratio enters via llround(ratio * 1e9) so the same textual ratio always
// maps to the same seed.
std::uint64_t bench_instance_seed(std::uint64_t base_seed, int size, double ratio, int index);

struct BenchConfig {
    std::vector<int> sizes;
    std::vector<double> ratios;
    int instances_per_cell = 10;
    int depth = 4;
    ModelMode mode = ModelMode::exact();
    double budget_seconds = 3600.0;
    int threads = 1;
    int jobs = 1;  // cells solved concurrently
    std::uint64_t base_seed = 0;
    std::filesystem::path out_dir;
    std::size_t max_model_members = kDefaultMemberBudget;
};

// Runs the sweep, one CSV per cell plus instance and solution files, then a
// summary CSV with one aggregate row per cell.  Cells whose CSV already
// holds a complete set of rows are not re-solved, so an interrupted sweep
// resumes where it stopped.  Returns the number of cells that failed with an
// error; solver statuses like timeouts are recorded in the rows, not errors.
int run_bench(const BenchConfig& cfg, std::ostream& log);

std::vector<BenchInstanceRow> read_cell_csv(const std::filesystem::path& path);
void write_cell_csv(const std::filesystem::path& path, std::span<const BenchInstanceRow> rows);

}  // namespace lcge
