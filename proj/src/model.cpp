#include "lcge/model.hpp"

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace lcge {

IlpModel build_model(const ChimeraGraph& g, ModelMode mode, const ModelLimits& limits) {
    std::optional<double> ratio;
    if (mode.heuristic) ratio = mode.max_rect_ratio;
    ConstraintSet set = generate_constraints(g, ratio, limits.max_mes_members);

    IlpModel model;
    model.dims = g.dims();
    model.mode = mode;
    model.broken_h_count = int(g.broken_horizontal().size());
    model.broken_v_count = int(g.broken_vertical().size());

    const int rows = model.dims.inner_rows();
    const int cols = model.dims.inner_cols();
    model.variable_mask.assign(std::size_t(rows) * cols, 0);
    for (Crossroad rc : g.available_crossroads())
        model.variable_mask[std::size_t(rc.row - 1) * cols + (rc.col - 1)] = 1;
    for (Crossroad rc : set.excluded)
        model.variable_mask[std::size_t(rc.row - 1) * cols + (rc.col - 1)] = 0;
    for (int r = 1; r <= rows; ++r)
        for (int c = 1; c <= cols; ++c)
            if (model.variable_mask[std::size_t(r - 1) * cols + (c - 1)])
                model.variables.push_back({r, c});
            else
                model.fixed_zero.push_back({r, c});

    // Re-filter members against the final variable set: a heuristic exclusion
    // can remove a crossroad that a surviving constraint still mentions.
    // Dropping it from the constraint is sound, a zero never uses the slot.
    std::unordered_map<std::uint64_t, std::vector<int>> seen;
    auto hash_members = [](const std::vector<Crossroad>& ms) {
        std::uint64_t h = 1469598103934665603ull;
        for (const Crossroad& rc : ms) {
            h = (h ^ std::uint64_t(rc.row)) * 1099511628211ull;
            h = (h ^ std::uint64_t(rc.col)) * 1099511628211ull;
        }
        return h;
    };
    for (MesConstraint& cons : set.constraints) {
        std::erase_if(cons.members, [&](Crossroad rc) { return !model.is_variable(rc); });
        if (cons.members.size() < 2) continue;
        std::vector<int>& bucket = seen[hash_members(cons.members)];
        bool fresh = true;
        for (int idx : bucket)
            if (model.mes[idx].members == cons.members) {
                fresh = false;
                break;
            }
        if (!fresh) continue;
        bucket.push_back(int(model.mes.size()));
        model.mes.push_back(std::move(cons));
    }
    return model;
}

namespace {

// Writes `prefix: t1 + t2 + ... cmp` wrapping long sums; continuation lines
// are valid LP-format syntax.
void write_sum_line(std::ostream& out, const std::string& name,
                    const std::vector<std::string>& terms, const char* trailer) {
    out << ' ' << name << ':';
    int on_line = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (on_line == 8) {
            out << '\n' << "   ";
            on_line = 0;
        }
        out << ' ';
        if (i > 0) out << "+ ";
        out << terms[i];
        ++on_line;
    }
    if (terms.empty()) out << " 0";
    if (trailer) out << ' ' << trailer;
    out << '\n';
}

std::string var_name(Crossroad rc) {
    return "x_" + std::to_string(rc.row) + "_" + std::to_string(rc.col);
}

}  // namespace

void export_lp(const IlpModel& model, std::ostream& out) {
    const int rows = model.dims.inner_rows();
    const int cols = model.dims.inner_cols();
    std::vector<std::vector<std::string>> by_row(rows), by_col(cols);
    std::vector<std::string> all;
    all.reserve(model.variables.size());
    for (Crossroad rc : model.variables) {
        std::string n = var_name(rc);
        by_row[rc.row - 1].push_back(n);
        by_col[rc.col - 1].push_back(n);
        all.push_back(std::move(n));
    }

    out << "Maximize\n";
    write_sum_line(out, "obj", all, nullptr);
    out << "Subject To\n";
    for (int r = 1; r <= rows; ++r)
        if (!by_row[r - 1].empty())
            write_sum_line(out, "row_" + std::to_string(r), by_row[r - 1], "<= 1");
    for (int c = 1; c <= cols; ++c)
        if (!by_col[c - 1].empty())
            write_sum_line(out, "col_" + std::to_string(c), by_col[c - 1], "<= 1");
    for (std::size_t k = 0; k < model.mes.size(); ++k) {
        std::vector<std::string> terms;
        terms.reserve(model.mes[k].members.size());
        for (Crossroad rc : model.mes[k].members) terms.push_back(var_name(rc));
        write_sum_line(out, "mes_" + std::to_string(k + 1), terms, "<= 1");
    }
    out << "Binary\n";
    for (const std::string& n : all) out << ' ' << n << '\n';
    out << "End\n";
}

ModelStats model_stats(const IlpModel& model) {
    ModelStats s;
    s.num_vars = int(model.variables.size());
    s.num_row_cons = model.dims.inner_rows();
    s.num_col_cons = model.dims.inner_cols();
    s.num_mes = int(model.mes.size());
    s.num_fixed = int(model.fixed_zero.size());

    const long long bh = model.broken_h_count, bv = model.broken_v_count;
    const long long total = (long long)model.dims.inner_rows() * model.dims.inner_cols();
    if (s.num_vars + s.num_fixed != total)
        throw std::logic_error("model_stats: variables and fixed zeros do not partition the grid");
    const long long longest_side = std::max(model.dims.inner_rows(), model.dims.inner_cols());
    const long long mes_bound = bh * bh - bh + bv * bv - bv + (longest_side - 1) * bh * bv;
    if (s.num_mes > mes_bound)
        throw std::logic_error("model_stats: " + std::to_string(s.num_mes) +
                               " MES constraints exceed the bound " + std::to_string(mes_bound));
    return s;
}

}  // namespace lcge
