#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcge/chimera.hpp"

namespace lcge {

// One logical clique vertex as a set of physical vertices.  Chains produced
// by the solver are crosses, but hand-written chains may have any shape, so
// the verifier works on the explicit vertex lists only.
struct Chain {
    std::optional<Crossroad> crossroad;  // activating crossroad, when the chain is a cross
    std::vector<HorizontalVertex> horizontal;
    std::vector<VerticalVertex> vertical;

    friend bool operator==(const Chain&, const Chain&) = default;
};

struct Embedding {
    std::vector<Chain> chains;
    int size() const { return int(chains.size()); }
};

Chain to_chain(const Cross& cross);

// Builds the chain family for a set of activated crossroads.  Throws
// std::invalid_argument when two crossroads share a row or column or one is
// unavailable.
Embedding extract_embedding(const ChimeraGraph& g, std::span<const Crossroad> activated);

enum class FailureKind { overlap, disconnected, broken_vertex_used, pair_not_connected };

const char* to_string(FailureKind k);

struct VerificationFailure {
    FailureKind kind;
    int chain_a = -1;
    int chain_b = -1;  // -1 for single-chain failures
    std::string detail;
};

struct VerificationReport {
    bool valid = false;
    int clique_size = 0;
    std::vector<VerificationFailure> failures;
};

// Checks a clique embedding from first principles: chains must be pairwise
// disjoint, internally connected in the hardware graph, free of broken
// vertices, and pairwise joined by at least one edge.  Adjacency is
// recomputed from coordinates here; nothing is shared with the model or
// solver.
VerificationReport verify_embedding(const ChimeraGraph& g, const Embedding& e);

}  // namespace lcge
