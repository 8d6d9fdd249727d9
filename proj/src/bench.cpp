#include "lcge/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lcge/embedding.hpp"
#include "lcge/instances.hpp"
#include "lcge/solver.hpp"

namespace lcge {

namespace fs = std::filesystem;

double quantile(std::span<const double> sorted_values, double p) {
    if (sorted_values.empty()) throw std::invalid_argument("quantile of empty sample");
    if (p <= 0.0) return sorted_values.front();
    if (p >= 1.0) return sorted_values.back();
    const double pos = p * static_cast<double>(sorted_values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0) return sorted_values[lo];
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

BenchAggregateRow aggregate_cell(int size, int depth, double broken_ratio,
                                 std::span<const BenchInstanceRow> rows) {
    if (rows.empty()) throw std::invalid_argument("aggregate_cell: no rows");
    BenchAggregateRow agg;
    agg.size = size;
    agg.broken_ratio = broken_ratio;
    std::vector<double> objectives;
    objectives.reserve(rows.size());
    double sum = 0.0;
    for (const BenchInstanceRow& row : rows) {
        objectives.push_back(static_cast<double>(row.objective));
        sum += row.objective;
        if (row.status == SolveStatus::optimal) ++agg.solved_count;
    }
    std::sort(objectives.begin(), objectives.end());
    const double ideal = static_cast<double>(depth) * size;
    agg.mean_ratio = sum / (static_cast<double>(rows.size()) * ideal);
    agg.median = quantile(objectives, 0.5);
    agg.q1 = quantile(objectives, 0.25);
    agg.q3 = quantile(objectives, 0.75);
    return agg;
}

std::uint64_t bench_instance_seed(std::uint64_t base_seed, int size, double ratio, int index) {
    const auto ratio_key = static_cast<std::uint64_t>(std::llround(ratio * 1e9));
    std::uint64_t x = base_seed;
    x ^= static_cast<std::uint64_t>(size) * 0x9E3779B97F4A7C15ull;
    x ^= ratio_key * 0xC2B2AE3D27D4EB4Full;
    x ^= static_cast<std::uint64_t>(index);
    return SplitMix64(x).next();
}

namespace {

std::string format_ratio(double ratio) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", ratio);
    return buf;
}

std::string cell_stem(int size, double ratio) {
    return "s" + std::to_string(size) + "_b" + format_ratio(ratio);
}

void write_atomic(const fs::path& path, const std::string& payload) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << payload;
    }
    fs::rename(tmp, path);
}

constexpr const char* kCellHeader =
    "size,broken_ratio,instance_index,seed,objective,status,wall_seconds";

}  // namespace

std::vector<BenchInstanceRow> read_cell_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != kCellHeader)
        throw std::runtime_error(path.string() + ": unexpected CSV header");
    std::vector<BenchInstanceRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 7)
            throw std::runtime_error(path.string() + ": malformed CSV row: " + line);
        BenchInstanceRow row;
        row.size = std::stoi(fields[0]);
        row.broken_ratio = std::stod(fields[1]);
        row.instance_index = std::stoi(fields[2]);
        row.seed = std::stoull(fields[3]);
        row.objective = std::stoi(fields[4]);
        row.status = solve_status_from_string(fields[5]);
        row.wall_seconds = std::stod(fields[6]);
        rows.push_back(row);
    }
    return rows;
}

void write_cell_csv(const fs::path& path, std::span<const BenchInstanceRow> rows) {
    std::string payload = kCellHeader;
    payload += '\n';
    char buf[256];
    for (const BenchInstanceRow& row : rows) {
        std::snprintf(buf, sizeof buf, "%d,%s,%d,%llu,%d,%s,%.3f\n", row.size,
                      format_ratio(row.broken_ratio).c_str(), row.instance_index,
                      static_cast<unsigned long long>(row.seed), row.objective,
                      to_string(row.status), row.wall_seconds);
        payload += buf;
    }
    write_atomic(path, payload);
}

namespace {

struct Cell {
    int size = 0;
    double ratio = 0.0;
};

std::vector<BenchInstanceRow> run_cell(const BenchConfig& cfg, const Cell& cell) {
    std::vector<BenchInstanceRow> rows;
    rows.reserve(cfg.instances_per_cell);
    for (int i = 0; i < cfg.instances_per_cell; ++i) {
        InstanceSpec spec;
        spec.cell_rows = cell.size;
        spec.cell_cols = cell.size;
        spec.depth = cfg.depth;
        spec.broken_ratio = cell.ratio;
        spec.seed = bench_instance_seed(cfg.base_seed, cell.size, cell.ratio, i);
        Instance inst = generate(spec);
        const std::string stem = cell_stem(cell.size, cell.ratio) + "_i" + std::to_string(i);
        write_instance(inst, cfg.out_dir / "instances" / (stem + ".json"));

        SolverOptions opts;
        opts.budget_seconds = cfg.budget_seconds;
        opts.threads = cfg.threads;
        opts.max_model_members = cfg.max_model_members;
        SolveResult result;
        if (cfg.mode.heuristic) {
            result = solve_heuristic(inst.graph, cfg.mode.max_rect_ratio, opts);
        } else {
            try {
                ModelLimits limits;
                limits.max_mes_members = cfg.max_model_members;
                IlpModel model = build_model(inst.graph, cfg.mode, limits);
                result = solve(model, opts);
            } catch (const ModelTooLarge&) {
                result.status = SolveStatus::out_of_memory;
            }
        }

        SolutionFile sol;
        sol.dims = inst.graph.dims();
        sol.mode = cfg.mode;
        sol.budget_seconds = cfg.budget_seconds;
        sol.threads = cfg.threads;
        sol.seed = spec.seed;
        sol.result = result;
        sol.embedding = extract_embedding(inst.graph, result.activated);
        write_solution(sol, cfg.out_dir / "solutions" / (stem + ".json"));

        BenchInstanceRow row;
        row.size = cell.size;
        row.broken_ratio = cell.ratio;
        row.instance_index = i;
        row.seed = spec.seed;
        row.objective = result.objective;
        row.status = result.status;
        row.wall_seconds = result.stats.wall_seconds;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

int run_bench(const BenchConfig& cfg, std::ostream& log) {
    if (cfg.sizes.empty() || cfg.ratios.empty())
        throw std::invalid_argument("bench needs at least one size and one ratio");
    if (cfg.instances_per_cell < 1) throw std::invalid_argument("instances_per_cell < 1");
    fs::create_directories(cfg.out_dir / "cells");
    fs::create_directories(cfg.out_dir / "instances");
    fs::create_directories(cfg.out_dir / "solutions");

    std::vector<Cell> cells;
    for (int size : cfg.sizes)
        for (double ratio : cfg.ratios) cells.push_back({size, ratio});

    std::mutex log_mu;
    std::atomic<std::size_t> next{0};
    std::atomic<int> failed{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= cells.size()) return;
            const Cell& cell = cells[idx];
            const fs::path csv = cfg.out_dir / "cells" / ("cell_" + cell_stem(cell.size, cell.ratio) + ".csv");
            try {
                if (fs::exists(csv)) {
                    auto rows = read_cell_csv(csv);
                    if (static_cast<int>(rows.size()) == cfg.instances_per_cell) {
                        std::lock_guard lock(log_mu);
                        log << "cell " << cell_stem(cell.size, cell.ratio) << ": reused\n";
                        continue;
                    }
                }
                auto rows = run_cell(cfg, cell);
                write_cell_csv(csv, rows);
                std::lock_guard lock(log_mu);
                log << "cell " << cell_stem(cell.size, cell.ratio) << ": done\n";
            } catch (const std::exception& e) {
                failed.fetch_add(1);
                std::lock_guard lock(log_mu);
                log << "cell " << cell_stem(cell.size, cell.ratio) << ": error: " << e.what()
                    << "\n";
            }
        }
    };
    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::string summary = "size,broken_ratio,mean_ratio,median,q1,q3,solved_count\n";
    char buf[256];
    for (const Cell& cell : cells) {
        const fs::path csv = cfg.out_dir / "cells" / ("cell_" + cell_stem(cell.size, cell.ratio) + ".csv");
        if (!fs::exists(csv)) continue;
        auto rows = read_cell_csv(csv);
        if (rows.empty()) continue;
        BenchAggregateRow agg = aggregate_cell(cell.size, cfg.depth, cell.ratio, rows);
        std::snprintf(buf, sizeof buf, "%d,%s,%.10g,%.10g,%.10g,%.10g,%d\n", agg.size,
                      format_ratio(agg.broken_ratio).c_str(), agg.mean_ratio, agg.median, agg.q1,
                      agg.q3, agg.solved_count);
        summary += buf;
    }
    write_atomic(cfg.out_dir / "summary.csv", summary);
    return failed.load();
}

}  // namespace lcge
