#include "lcge/instances.hpp"

#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <sstream>

using namespace lcge;

TEST_CASE("pinned random sequence") {
    // Published reference outputs of splitmix64 for seed 0.
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xE220A8397B1DCDAFull);
    CHECK(rng.next() == 0x6E789E6AA1B965F4ull);
    CHECK(rng.next() == 0x06C45D188009454Full);
    CHECK(rng.next() == 0xF88BB8A8724C81ECull);
}

TEST_CASE("bounded draws") {
    SplitMix64 rng(42);
    const std::uint64_t expect[] = {3, 1, 8, 4, 0};
    for (std::uint64_t e : expect) CHECK(rng.bounded(10) == e);

    SplitMix64 rng2(7);
    for (int i = 0; i < 1000; ++i) CHECK(rng2.bounded(13) < 13);
    for (int i = 0; i < 10; ++i) CHECK(rng2.bounded(1) == 0);
    CHECK_THROWS_AS(rng2.bounded(0), std::invalid_argument);
}

TEST_CASE("generated break sets are pinned") {
    SUBCASE("single cell, depth one") {
        InstanceSpec spec{1, 1, 1, 0.5, 0};
        Instance inst = generate(spec);
        CHECK(inst.graph.broken_horizontal().empty());
        CHECK(inst.graph.broken_vertical() == std::vector<VerticalVertex>{{1, 1}});
    }
    SUBCASE("two cells") {
        InstanceSpec spec{1, 2, 1, 0.5, 0};
        Instance inst = generate(spec);
        CHECK(inst.graph.broken_horizontal() == std::vector<HorizontalVertex>{{1, 2}});
        CHECK(inst.graph.broken_vertical() == std::vector<VerticalVertex>{{1, 2}});
    }
}

TEST_CASE("generator invariants") {
    InstanceSpec spec{4, 4, 4, 0.2, 99};
    Instance a = generate(spec);
    // round(0.2 * 128) vertices, no duplicates (the graph would reject them).
    CHECK(a.graph.broken_count() == 26);
    REQUIRE(a.provenance.has_value());
    CHECK(a.provenance->broken_ratio == 0.2);
    CHECK(a.provenance->seed == 99);

    Instance b = generate(spec);
    CHECK(a.graph.broken_horizontal() == b.graph.broken_horizontal());
    CHECK(a.graph.broken_vertical() == b.graph.broken_vertical());

    spec.seed = 100;
    Instance c = generate(spec);
    CHECK((a.graph.broken_horizontal() != c.graph.broken_horizontal() ||
           a.graph.broken_vertical() != c.graph.broken_vertical()));

    spec.broken_ratio = 0.0;
    CHECK(generate(spec).graph.broken_count() == 0);
    spec.broken_ratio = 1.0;
    CHECK(generate(spec).graph.broken_count() == 128);

    spec.broken_ratio = 1.5;
    CHECK_THROWS_AS(generate(spec), std::invalid_argument);
    CHECK_THROWS_AS(generate(InstanceSpec{0, 1, 1, 0.0, 0}), std::invalid_argument);
}

TEST_CASE("instance files round trip") {
    InstanceSpec spec{3, 2, 4, 0.15, 12345};
    Instance inst = generate(spec);
    std::stringstream buf;
    write_instance(inst, buf);
    Instance back = read_instance(buf);
    CHECK(back.graph.dims() == inst.graph.dims());
    CHECK(back.graph.broken_horizontal() == inst.graph.broken_horizontal());
    CHECK(back.graph.broken_vertical() == inst.graph.broken_vertical());
    REQUIRE(back.provenance.has_value());
    CHECK(back.provenance->broken_ratio == 0.15);
    CHECK(back.provenance->seed == 12345);
}

TEST_CASE("instance parse errors carry context") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_instance(in);
    };
    CHECK_THROWS_AS(parse("{ not json"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse(R"({"format_version":1,"cell_rows":1,"cell_cols":1})"),
        doctest::Contains("missing field 'depth'"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse(R"({"format_version":2,"cell_rows":1,"cell_cols":1,"depth":1,)"
              R"("broken_horizontal":[],"broken_vertical":[]})"),
        doctest::Contains("format_version"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse(R"({"format_version":1,"cell_rows":1,"cell_cols":"x","depth":1,)"
              R"("broken_horizontal":[],"broken_vertical":[]})"),
        doctest::Contains("must be an integer"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse(R"({"format_version":1,"cell_rows":1,"cell_cols":1,"depth":1,)"
              R"("broken_horizontal":[[1]],"broken_vertical":[]})"),
        doctest::Contains("pair of integers"), ParseError);
    // Semantic problems surface as parse errors too, not bare exceptions.
    CHECK_THROWS_AS(
        parse(R"({"format_version":1,"cell_rows":1,"cell_cols":1,"depth":1,)"
              R"("broken_horizontal":[[5,1]],"broken_vertical":[]})"),
        ParseError);
    CHECK_THROWS_AS(
        parse(R"({"format_version":1,"cell_rows":1,"cell_cols":1,"depth":2,)"
              R"("broken_horizontal":[[1,1],[1,1]],"broken_vertical":[]})"),
        ParseError);
}

TEST_CASE("solution files round trip") {
    SolutionFile sol;
    sol.dims = {3, 3, 4};
    sol.mode = ModelMode::with_ratio(0.25);
    sol.budget_seconds = 60.0;
    sol.threads = 8;
    sol.seed = 4242;
    sol.result.objective = 2;
    sol.result.status = SolveStatus::feasible_timeout;
    sol.result.activated = {{1, 2}, {3, 4}};
    sol.result.stats = {100, 7, 1.25};
    sol.embedding.chains.push_back(Chain{Crossroad{1, 2}, {{1, 1}, {1, 2}}, {{1, 2}}});
    sol.embedding.chains.push_back(Chain{std::nullopt, {{3, 1}}, {{1, 4}, {2, 4}}});

    std::stringstream buf;
    write_solution(sol, buf);
    SolutionFile back = read_solution(buf);
    CHECK(back.dims == sol.dims);
    CHECK(back.mode == sol.mode);
    CHECK(back.budget_seconds == 60.0);
    CHECK(back.threads == 8);
    REQUIRE(back.seed.has_value());
    CHECK(*back.seed == 4242);
    CHECK(back.result.objective == 2);
    CHECK(back.result.status == SolveStatus::feasible_timeout);
    CHECK(back.result.activated == sol.result.activated);
    CHECK(back.result.stats.nodes == 100);
    CHECK(back.result.stats.leaves == 7);
    CHECK(back.result.stats.wall_seconds == 1.25);
    REQUIRE(back.embedding.size() == 2);
    CHECK(back.embedding.chains[0] == sol.embedding.chains[0]);
    CHECK(back.embedding.chains[1] == sol.embedding.chains[1]);

    SUBCASE("exact mode with no seed") {
        sol.mode = ModelMode::exact();
        sol.seed.reset();
        std::stringstream buf2;
        write_solution(sol, buf2);
        SolutionFile back2 = read_solution(buf2);
        CHECK_FALSE(back2.mode.heuristic);
        CHECK_FALSE(back2.seed.has_value());
    }
}

TEST_CASE("solution parse errors") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_solution(in);
    };
    CHECK_THROWS_AS(parse("[]"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse(R"({"format_version":1,"instance":{"cell_rows":1,"cell_cols":1,"depth":1},)"
              R"("mode":"sideways","budget_seconds":1,"objective":0,"status":"optimal",)"
              R"("activated":[],"chains":[]})"),
        doctest::Contains("unknown mode"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse(R"({"format_version":1,"instance":{"cell_rows":1,"cell_cols":1,"depth":1},)"
              R"("mode":"exact","budget_seconds":1,"objective":0,"status":"great",)"
              R"("activated":[],"chains":[]})"),
        doctest::Contains("unknown solve status"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse(R"({"format_version":1,"instance":{"cell_rows":1,"cell_cols":1,"depth":1},)"
              R"("mode":"exact","budget_seconds":1,"status":"optimal",)"
              R"("activated":[],"chains":[]})"),
        doctest::Contains("missing field 'objective'"), ParseError);
    CHECK_THROWS_AS(
        parse(R"({"format_version":1,"instance":{"cell_rows":1,"cell_cols":1,"depth":1},)"
              R"("mode":"exact","budget_seconds":1,"objective":0,"status":"optimal",)"
              R"("activated":[],"chains":[7]})"),
        ParseError);
}

TEST_CASE("file path round trip and missing files") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "lcge_instances_test";
    fs::create_directories(dir);
    InstanceSpec spec{2, 2, 2, 0.25, 7};
    Instance inst = generate(spec);
    write_instance(inst, dir / "inst.json");
    Instance back = read_instance(dir / "inst.json");
    CHECK(back.graph.broken_count() == inst.graph.broken_count());
    CHECK_THROWS_AS(read_instance(dir / "nope.json"), ParseError);
    CHECK_THROWS_AS(read_solution(dir / "nope.json"), ParseError);
    fs::remove_all(dir);
}
