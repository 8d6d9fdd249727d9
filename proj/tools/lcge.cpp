#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lcge/bench.hpp"
#include "lcge/embedding.hpp"
#include "lcge/instances.hpp"
#include "lcge/model.hpp"
#include "lcge/oracle.hpp"
#include "lcge/solver.hpp"

namespace {

int default_threads() {
    if (const char* env = std::getenv("LCGE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != nullptr && *end == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
    }
    return 1;
}

int exit_for(lcge::SolveStatus status) {
    switch (status) {
        case lcge::SolveStatus::optimal: return 0;
        case lcge::SolveStatus::feasible_timeout: return 3;
        case lcge::SolveStatus::out_of_memory: return 4;
        case lcge::SolveStatus::infeasible_model: return 2;
    }
    return 2;
}

lcge::ModelMode mode_from(const std::optional<double>& heuristic_ratio) {
    if (heuristic_ratio) return lcge::ModelMode::with_ratio(*heuristic_ratio);
    return lcge::ModelMode::exact();
}

struct GenerateArgs {
    lcge::InstanceSpec spec;
    std::string out;
};

int cmd_generate(const GenerateArgs& args) {
    lcge::Instance inst = lcge::generate(args.spec);
    if (args.out.empty()) {
        lcge::write_instance(inst, std::cout);
    } else {
        lcge::write_instance(inst, args.out);
    }
    std::cerr << "generated " << inst.graph.dims().cell_rows << "x" << inst.graph.dims().cell_cols
              << " depth " << inst.graph.dims().depth << " with " << inst.graph.broken_count()
              << " broken vertices\n";
    return 0;
}

struct SolveArgs {
    std::string instance_path;
    std::string out;
    std::optional<double> heuristic_ratio;
    double budget_seconds = 3600.0;
    int threads = 1;
    double memory_gb = 2.0;
};

int cmd_solve(const SolveArgs& args) {
    lcge::Instance inst = lcge::read_instance(args.instance_path);

    lcge::SolverOptions opts;
    opts.budget_seconds = args.budget_seconds;
    opts.threads = args.threads;
    opts.memory_cap_bytes = static_cast<std::size_t>(args.memory_gb * (1ull << 30));

    const lcge::ModelMode mode = mode_from(args.heuristic_ratio);
    lcge::SolveResult result;
    if (mode.heuristic) {
        result = lcge::solve_heuristic(inst.graph, mode.max_rect_ratio, opts);
    } else {
        try {
            lcge::IlpModel model = lcge::build_model(inst.graph, mode);
            result = lcge::solve(model, opts);
        } catch (const lcge::ModelTooLarge& e) {
            std::cerr << e.what() << "\n";
            result.status = lcge::SolveStatus::out_of_memory;
        }
    }

    lcge::Embedding embedding = lcge::extract_embedding(inst.graph, result.activated);
    lcge::VerificationReport report = lcge::verify_embedding(inst.graph, embedding);
    if (!report.valid) {
        std::cerr << "internal error: solver output failed verification\n";
        return 2;
    }

    if (!args.out.empty()) {
        lcge::SolutionFile sol;
        sol.dims = inst.graph.dims();
        sol.mode = mode;
        sol.budget_seconds = args.budget_seconds;
        sol.threads = args.threads;
        if (inst.provenance) sol.seed = inst.provenance->seed;
        sol.result = result;
        sol.embedding = embedding;
        lcge::write_solution(sol, args.out);
    }

    std::cout << "objective " << result.objective << " status " << to_string(result.status)
              << " nodes " << result.stats.nodes << " leaves " << result.stats.leaves << " wall "
              << result.stats.wall_seconds << "s\n";
    return exit_for(result.status);
}

struct VerifyArgs {
    std::string instance_path;
    std::string solution_path;
};

int cmd_verify(const VerifyArgs& args) {
    lcge::Instance inst = lcge::read_instance(args.instance_path);
    lcge::SolutionFile sol = lcge::read_solution(args.solution_path);
    const lcge::ChimeraDims dims = inst.graph.dims();
    if (sol.dims.cell_rows != dims.cell_rows || sol.dims.cell_cols != dims.cell_cols ||
        sol.dims.depth != dims.depth) {
        std::cerr << "solution dimensions do not match the instance\n";
        return 2;
    }
    lcge::VerificationReport report = lcge::verify_embedding(inst.graph, sol.embedding);
    for (const lcge::VerificationFailure& f : report.failures) {
        std::cout << to_string(f.kind) << ": chain " << f.chain_a;
        if (f.chain_b >= 0) std::cout << " and " << f.chain_b;
        std::cout << ": " << f.detail << "\n";
    }
    if (!report.valid) {
        std::cout << "invalid\n";
        return 1;
    }
    std::cout << "valid clique of size " << report.clique_size << "\n";
    if (sol.result.objective != report.clique_size) {
        std::cout << "note: recorded objective " << sol.result.objective << " differs from "
                  << report.clique_size << " chains\n";
    }
    return 0;
}

struct ExportArgs {
    std::string instance_path;
    std::string out;
    std::optional<double> heuristic_ratio;
};

int cmd_export_lp(const ExportArgs& args) {
    lcge::Instance inst = lcge::read_instance(args.instance_path);
    lcge::IlpModel model = lcge::build_model(inst.graph, mode_from(args.heuristic_ratio));
    if (args.out.empty()) {
        lcge::export_lp(model, std::cout);
    } else {
        std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
        if (!out) {
            std::cerr << "cannot write " << args.out << "\n";
            return 2;
        }
        lcge::export_lp(model, out);
    }
    return 0;
}

struct BenchArgs {
    lcge::BenchConfig cfg;
    std::optional<double> heuristic_ratio;
    std::string out_dir;
};

int cmd_bench(BenchArgs& args) {
    args.cfg.mode = mode_from(args.heuristic_ratio);
    args.cfg.out_dir = args.out_dir;
    const int failed = lcge::run_bench(args.cfg, std::cerr);
    if (failed > 0) {
        std::cerr << failed << " cell(s) failed\n";
        return 2;
    }
    std::cout << "summary written to " << (args.cfg.out_dir / "summary.csv").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"largest complete graph embeddable into a broken Chimera graph"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a TOML file");

    GenerateArgs gen;
    gen.spec.depth = 4;
    CLI::App* generate = app.add_subcommand("generate", "generate a random broken instance");
    generate->add_option("--rows", gen.spec.cell_rows, "cell rows")->required();
    generate->add_option("--cols", gen.spec.cell_cols, "cell columns")->required();
    generate->add_option("--depth", gen.spec.depth, "vertices per cell side")->capture_default_str();
    generate->add_option("--broken-ratio", gen.spec.broken_ratio, "fraction of broken vertices")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    generate->add_option("--seed", gen.spec.seed, "generator seed")->required();
    generate->add_option("-o,--out", gen.out, "output file (default stdout)");

    SolveArgs solve;
    solve.threads = default_threads();
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve an instance to a chain embedding");
    solve_cmd->add_option("instance", solve.instance_path, "instance file")->required();
    solve_cmd->add_option("-o,--out", solve.out, "solution file");
    double solve_ratio = 0.0;
    CLI::Option* solve_h = solve_cmd
                               ->add_option("--heuristic", solve_ratio,
                                            "reduce the model with this max rectangle ratio")
                               ->check(CLI::Range(0.0, 1.0));
    solve_cmd->add_option("--timeout", solve.budget_seconds, "budget in seconds, <= 0 means none")
        ->capture_default_str();
    solve_cmd->add_option("--threads", solve.threads, "worker threads (env LCGE_THREADS)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("--memory-gb", solve.memory_gb, "solver memory cap in GiB")
        ->capture_default_str();

    VerifyArgs verify;
    CLI::App* verify_cmd = app.add_subcommand("verify", "check a solution against its instance");
    verify_cmd->add_option("instance", verify.instance_path, "instance file")->required();
    verify_cmd->add_option("solution", verify.solution_path, "solution file")->required();

    ExportArgs exp;
    CLI::App* export_cmd = app.add_subcommand("export-lp", "write the model in CPLEX LP format");
    export_cmd->add_option("instance", exp.instance_path, "instance file")->required();
    export_cmd->add_option("-o,--out", exp.out, "output file (default stdout)");
    double export_ratio = 0.0;
    CLI::Option* export_h = export_cmd
                                ->add_option("--heuristic", export_ratio,
                                             "reduce the model with this max rectangle ratio")
                                ->check(CLI::Range(0.0, 1.0));

    BenchArgs bench;
    bench.cfg.threads = default_threads();
    CLI::App* bench_cmd = app.add_subcommand("bench", "sweep sizes and broken ratios");
    bench_cmd->add_option("--sizes", bench.cfg.sizes, "lattice sizes, s gives an s x s grid")
        ->required()
        ->delimiter(',');
    bench_cmd->add_option("--ratios", bench.cfg.ratios, "broken vertex ratios")
        ->required()
        ->delimiter(',');
    bench_cmd->add_option("--instances", bench.cfg.instances_per_cell, "instances per cell")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--depth", bench.cfg.depth, "vertices per cell side")
        ->capture_default_str();
    double bench_ratio = 0.0;
    CLI::Option* bench_h = bench_cmd
                               ->add_option("--heuristic", bench_ratio,
                                            "reduce the model with this max rectangle ratio")
                               ->check(CLI::Range(0.0, 1.0));
    bench_cmd->add_option("--timeout", bench.cfg.budget_seconds, "budget per instance in seconds")
        ->capture_default_str();
    bench_cmd->add_option("--threads", bench.cfg.threads, "threads per solve (env LCGE_THREADS)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--jobs", bench.cfg.jobs, "cells solved concurrently")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", bench.cfg.base_seed, "base seed for the sweep")
        ->capture_default_str();
    bench_cmd->add_option("--out", bench.out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*generate) return cmd_generate(gen);
        if (*solve_cmd) {
            if (*solve_h) solve.heuristic_ratio = solve_ratio;
            return cmd_solve(solve);
        }
        if (*verify_cmd) return cmd_verify(verify);
        if (*export_cmd) {
            if (*export_h) exp.heuristic_ratio = export_ratio;
            return cmd_export_lp(exp);
        }
        if (*bench_cmd) {
            if (*bench_h) bench.heuristic_ratio = bench_ratio;
            return cmd_bench(bench);
        }
    } catch (const lcge::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
