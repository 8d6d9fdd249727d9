#include "lcge/instances.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace lcge {

using nlohmann::json;

namespace {
constexpr int kInstanceFormat = 1;
constexpr int kSolutionFormat = 1;
}  // namespace

std::uint64_t SplitMix64::bounded(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("SplitMix64::bounded: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % n;
}

Instance generate(const InstanceSpec& spec) {
    if (spec.cell_rows < 1 || spec.cell_cols < 1 || spec.depth < 1)
        throw std::invalid_argument("generate: all dimensions must be positive");
    if (spec.broken_ratio < 0.0 || spec.broken_ratio > 1.0)
        throw std::invalid_argument("generate: broken_ratio must lie in [0, 1]");

    ChimeraDims dims{spec.cell_rows, spec.cell_cols, spec.depth};
    const std::int64_t total = dims.total_vertices();
    const std::int64_t count = std::llround(spec.broken_ratio * double(total));

    // Joint pool: indices below h_total are horizontal vertices in row-major
    // order, the rest vertical ones.
    const std::int64_t h_total = std::int64_t(dims.inner_rows()) * dims.cell_cols;
    std::vector<std::int64_t> pool(total);
    std::iota(pool.begin(), pool.end(), 0);
    SplitMix64 rng(spec.seed);
    for (std::int64_t i = 0; i < count; ++i) {
        std::int64_t j = i + std::int64_t(rng.bounded(std::uint64_t(total - i)));
        std::swap(pool[i], pool[j]);
    }

    std::vector<HorizontalVertex> broken_h;
    std::vector<VerticalVertex> broken_v;
    for (std::int64_t i = 0; i < count; ++i) {
        std::int64_t id = pool[i];
        if (id < h_total) {
            broken_h.push_back({int(id / dims.cell_cols) + 1, int(id % dims.cell_cols) + 1});
        } else {
            id -= h_total;
            broken_v.push_back({int(id / dims.inner_cols()) + 1, int(id % dims.inner_cols()) + 1});
        }
    }
    return {ChimeraGraph(dims, std::move(broken_h), std::move(broken_v)),
            InstanceProvenance{spec.broken_ratio, spec.seed}};
}

namespace {

json require(const json& j, const char* key, const char* what) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string(what) + ": missing field '" + key + "'");
    return *it;
}

int require_int(const json& j, const char* key, const char* what) {
    json v = require(j, key, what);
    if (!v.is_number_integer())
        throw ParseError(std::string(what) + ": field '" + key + "' must be an integer");
    return v.get<int>();
}

std::vector<std::array<int, 2>> require_pairs(const json& j, const char* key, const char* what) {
    json v = require(j, key, what);
    if (!v.is_array()) throw ParseError(std::string(what) + ": field '" + key + "' must be an array");
    std::vector<std::array<int, 2>> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const json& e = v[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
            throw ParseError(std::string(what) + ": entry " + std::to_string(i) + " of '" + key +
                             "' must be a pair of integers");
        out.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    return out;
}

json parse_stream(std::istream& in, const char* what) {
    try {
        return json::parse(in);
    } catch (const json::parse_error& err) {
        throw ParseError(std::string(what) + ": " + err.what());
    }
}

}  // namespace

Instance read_instance(std::istream& in) {
    json j = parse_stream(in, "instance");
    if (!j.is_object()) throw ParseError("instance: top level must be an object");
    int version = require_int(j, "format_version", "instance");
    if (version != kInstanceFormat)
        throw ParseError("instance: unsupported format_version " + std::to_string(version));
    ChimeraDims dims;
    dims.cell_rows = require_int(j, "cell_rows", "instance");
    dims.cell_cols = require_int(j, "cell_cols", "instance");
    dims.depth = require_int(j, "depth", "instance");

    std::vector<HorizontalVertex> bh;
    for (auto [a, b] : require_pairs(j, "broken_horizontal", "instance")) bh.push_back({a, b});
    std::vector<VerticalVertex> bv;
    for (auto [a, b] : require_pairs(j, "broken_vertical", "instance")) bv.push_back({a, b});

    std::optional<InstanceProvenance> prov;
    if (auto it = j.find("provenance"); it != j.end() && !it->is_null()) {
        InstanceProvenance p;
        json b = require(*it, "broken_ratio", "instance provenance");
        if (!b.is_number()) throw ParseError("instance provenance: broken_ratio must be a number");
        p.broken_ratio = b.get<double>();
        json s = require(*it, "seed", "instance provenance");
        if (!s.is_number_unsigned() && !s.is_number_integer())
            throw ParseError("instance provenance: seed must be an integer");
        p.seed = s.get<std::uint64_t>();
        prov = p;
    }
    try {
        return {ChimeraGraph(dims, std::move(bh), std::move(bv)), prov};
    } catch (const std::invalid_argument& err) {
        throw ParseError(std::string("instance: ") + err.what());
    }
}

Instance read_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("instance: cannot open " + path.string());
    return read_instance(in);
}

void write_instance(const Instance& inst, std::ostream& out) {
    const ChimeraGraph& g = inst.graph;
    json j;
    j["format_version"] = kInstanceFormat;
    j["cell_rows"] = g.dims().cell_rows;
    j["cell_cols"] = g.dims().cell_cols;
    j["depth"] = g.dims().depth;
    json bh = json::array();
    for (const HorizontalVertex& h : g.broken_horizontal()) bh.push_back({h.row, h.cell_col});
    j["broken_horizontal"] = std::move(bh);
    json bv = json::array();
    for (const VerticalVertex& v : g.broken_vertical()) bv.push_back({v.cell_row, v.col});
    j["broken_vertical"] = std::move(bv);
    if (inst.provenance) {
        j["provenance"] = {{"broken_ratio", inst.provenance->broken_ratio},
                           {"seed", inst.provenance->seed}};
    }
    out << j.dump(2) << '\n';
}

void write_instance(const Instance& inst, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("instance: cannot write " + path.string());
    write_instance(inst, out);
}

SolutionFile read_solution(std::istream& in) {
    json j = parse_stream(in, "solution");
    if (!j.is_object()) throw ParseError("solution: top level must be an object");
    int version = require_int(j, "format_version", "solution");
    if (version != kSolutionFormat)
        throw ParseError("solution: unsupported format_version " + std::to_string(version));

    SolutionFile sol;
    json inst = require(j, "instance", "solution");
    sol.dims.cell_rows = require_int(inst, "cell_rows", "solution instance");
    sol.dims.cell_cols = require_int(inst, "cell_cols", "solution instance");
    sol.dims.depth = require_int(inst, "depth", "solution instance");

    json mode = require(j, "mode", "solution");
    if (!mode.is_string()) throw ParseError("solution: mode must be a string");
    if (mode.get<std::string>() == "exact") {
        sol.mode = ModelMode::exact();
    } else if (mode.get<std::string>() == "heuristic") {
        json m = require(j, "max_rect_ratio", "solution");
        if (!m.is_number()) throw ParseError("solution: max_rect_ratio must be a number");
        sol.mode = ModelMode::with_ratio(m.get<double>());
    } else {
        throw ParseError("solution: unknown mode '" + mode.get<std::string>() + "'");
    }

    json budget = require(j, "budget_seconds", "solution");
    if (!budget.is_number()) throw ParseError("solution: budget_seconds must be a number");
    sol.budget_seconds = budget.get<double>();
    if (auto it = j.find("threads"); it != j.end() && it->is_number_integer())
        sol.threads = it->get<int>();
    if (auto it = j.find("seed"); it != j.end() && !it->is_null())
        sol.seed = it->get<std::uint64_t>();

    sol.result.objective = require_int(j, "objective", "solution");
    json status = require(j, "status", "solution");
    if (!status.is_string()) throw ParseError("solution: status must be a string");
    try {
        sol.result.status = solve_status_from_string(status.get<std::string>());
    } catch (const std::invalid_argument& err) {
        throw ParseError(std::string("solution: ") + err.what());
    }
    for (auto [r, c] : require_pairs(j, "activated", "solution"))
        sol.result.activated.push_back({r, c});

    json chains = require(j, "chains", "solution");
    if (!chains.is_array()) throw ParseError("solution: chains must be an array");
    for (std::size_t i = 0; i < chains.size(); ++i) {
        const json& cj = chains[i];
        const std::string what = "solution chain " + std::to_string(i);
        if (!cj.is_object()) throw ParseError(what + ": must be an object");
        Chain chain;
        if (auto it = cj.find("crossroad"); it != cj.end() && !it->is_null()) {
            const json& rc = *it;
            if (!rc.is_array() || rc.size() != 2 || !rc[0].is_number_integer() ||
                !rc[1].is_number_integer())
                throw ParseError(what + ": crossroad must be a pair of integers or null");
            chain.crossroad = Crossroad{rc[0].get<int>(), rc[1].get<int>()};
        }
        for (auto [a, b] : require_pairs(cj, "horizontal", what.c_str()))
            chain.horizontal.push_back({a, b});
        for (auto [a, b] : require_pairs(cj, "vertical", what.c_str()))
            chain.vertical.push_back({a, b});
        sol.embedding.chains.push_back(std::move(chain));
    }

    if (auto it = j.find("stats"); it != j.end() && it->is_object()) {
        if (auto n = it->find("nodes"); n != it->end()) sol.result.stats.nodes = n->get<std::uint64_t>();
        if (auto n = it->find("leaves"); n != it->end())
            sol.result.stats.leaves = n->get<std::uint64_t>();
        if (auto n = it->find("wall_seconds"); n != it->end())
            sol.result.stats.wall_seconds = n->get<double>();
    }
    return sol;
}

SolutionFile read_solution(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("solution: cannot open " + path.string());
    return read_solution(in);
}

void write_solution(const SolutionFile& sol, std::ostream& out) {
    json j;
    j["format_version"] = kSolutionFormat;
    j["instance"] = {{"cell_rows", sol.dims.cell_rows},
                     {"cell_cols", sol.dims.cell_cols},
                     {"depth", sol.dims.depth}};
    if (sol.mode.heuristic) {
        j["mode"] = "heuristic";
        j["max_rect_ratio"] = sol.mode.max_rect_ratio;
    } else {
        j["mode"] = "exact";
    }
    j["budget_seconds"] = sol.budget_seconds;
    j["threads"] = sol.threads;
    if (sol.seed)
        j["seed"] = *sol.seed;
    else
        j["seed"] = nullptr;
    j["objective"] = sol.result.objective;
    j["status"] = to_string(sol.result.status);
    json act = json::array();
    for (const Crossroad& rc : sol.result.activated) act.push_back({rc.row, rc.col});
    j["activated"] = std::move(act);
    json chains = json::array();
    for (const Chain& chain : sol.embedding.chains) {
        json cj;
        if (chain.crossroad)
            cj["crossroad"] = {chain.crossroad->row, chain.crossroad->col};
        else
            cj["crossroad"] = nullptr;
        json hs = json::array();
        for (const HorizontalVertex& h : chain.horizontal) hs.push_back({h.row, h.cell_col});
        cj["horizontal"] = std::move(hs);
        json vs = json::array();
        for (const VerticalVertex& v : chain.vertical) vs.push_back({v.cell_row, v.col});
        cj["vertical"] = std::move(vs);
        chains.push_back(std::move(cj));
    }
    j["chains"] = std::move(chains);
    j["stats"] = {{"nodes", sol.result.stats.nodes},
                  {"leaves", sol.result.stats.leaves},
                  {"wall_seconds", sol.result.stats.wall_seconds}};
    out << j.dump(2) << '\n';
}

void write_solution(const SolutionFile& sol, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("solution: cannot write " + path.string());
    write_solution(sol, out);
}

}  // namespace lcge
