#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>

#include "lcge/chimera.hpp"
#include "lcge/embedding.hpp"
#include "lcge/model.hpp"
#include "lcge/solve_result.hpp"

namespace lcge {

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// splitmix64: state advances by the 64-bit golden ratio constant, output is
// the finalizer (xor-shift-multiply twice, xor-shift).  Fixed here so
// generated instances are identical on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform draw from [0, n) by rejecting the biased tail.
    std::uint64_t bounded(std::uint64_t n);

private:
    std::uint64_t state_;
};

struct InstanceSpec {
    int cell_rows = 1;
    int cell_cols = 1;
    int depth = 4;
    double broken_ratio = 0.0;  // in [0, 1]
    std::uint64_t seed = 0;
};

struct InstanceProvenance {
    double broken_ratio = 0.0;
    std::uint64_t seed = 0;
};

struct Instance {
    ChimeraGraph graph;
    std::optional<InstanceProvenance> provenance;
};

// Breaks round(broken_ratio * total_vertices) vertices chosen uniformly from
// the joint pool of horizontal and vertical vertices, via a partial
// Fisher-Yates shuffle driven by SplitMix64(seed).
Instance generate(const InstanceSpec& spec);

Instance read_instance(std::istream& in);
Instance read_instance(const std::filesystem::path& path);
void write_instance(const Instance& inst, std::ostream& out);
void write_instance(const Instance& inst, const std::filesystem::path& path);

// Everything cmd_solve knows about a finished run, round-trippable through
// the solution file.
struct SolutionFile {
    ChimeraDims dims;
    ModelMode mode;
    double budget_seconds = 0.0;
    int threads = 1;
    std::optional<std::uint64_t> seed;
    SolveResult result;
    Embedding embedding;
};

SolutionFile read_solution(std::istream& in);
SolutionFile read_solution(const std::filesystem::path& path);
void write_solution(const SolutionFile& sol, std::ostream& out);
void write_solution(const SolutionFile& sol, const std::filesystem::path& path);

}  // namespace lcge
