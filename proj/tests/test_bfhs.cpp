#include <catch2/catch_amalgamated.hpp>

#include "abfhs/bfhs.hpp"
#include "abfhs/domains/explicit_graph.hpp"
#include "abfhs/domains/hanoi.hpp"
#include "abfhs/domains/tile.hpp"
#include "abfhs/oracle.hpp"

using namespace abfhs;

namespace {

// Directed chain v0 -> v1 -> ... -> v4 with an isolated target, so a call
// can sweep the chain without ever solving.
std::shared_ptr<ExplicitGraphSpace> make_chain() {
    ExplicitGraphSpace::Builder b;
    for (int i = 0; i <= 4; ++i) b.vertex("v" + std::to_string(i), 0);
    b.vertex("T", 0);
    for (int i = 0; i < 4; ++i) b.arc("v" + std::to_string(i), "v" + std::to_string(i + 1));
    return b.build();
}

GoalSpec never() {
    return GoalSpec::predicate([](const PackedState &) { return false; });
}

}  // namespace

TEST_CASE("seed lists are validated before any work happens") {
    auto graph = make_chain();
    ZeroHeuristic zero;
    RunStats stats;

    SECTION("no seeds means a vacuous failure") {
        BfhsCall call;
        call.bound = 5;
        auto out = run_bfhs(*graph, never(), zero, call, stats);
        CHECK_FALSE(out.solved);
        CHECK(out.next_f == kInfiniteCost);
        CHECK(out.generated == 0);
        CHECK(stats.total_generated == 0);
    }

    SECTION("duplicate seed states are rejected") {
        BfhsCall call;
        call.bound = 5;
        call.seeds = {{graph->state_of("v0"), 0, 0}, {graph->state_of("v0"), 2, 1}};
        CHECK_THROWS_AS(run_bfhs(*graph, never(), zero, call, stats), ArgumentError);
    }

    SECTION("a seed whose f exceeds the bound is rejected") {
        BfhsCall call;
        call.bound = 3;
        call.seeds = {{graph->state_of("v0"), 4, 0}};
        CHECK_THROWS_AS(run_bfhs(*graph, never(), zero, call, stats), ArgumentError);
        CHECK(stats.heuristic_evaluations == 0);  // validation is uncounted
    }

    SECTION("window sizes are tied to the graph class") {
        BfhsCall call;
        call.bound = 5;
        call.seeds = {{graph->state_of("v0"), 0, 0}};
        call.layers = 2;  // directed spaces need three layers
        CHECK_THROWS_AS(run_bfhs(*graph, never(), zero, call, stats), ArgumentError);

        HanoiSpace hanoi(2);
        BfhsCall hcall;
        hcall.bound = 3;
        hcall.seeds = {{hanoi.all_on_peg(0), 0, 0}};
        hcall.layers = 4;
        CHECK_THROWS_AS(run_bfhs(hanoi, never(), zero, hcall, stats), ArgumentError);
    }
}

TEST_CASE("a goal among the seeds wins at the lowest depth with zero work") {
    auto graph = make_chain();
    ZeroHeuristic zero;
    RunStats stats;
    BfhsCall call;
    call.bound = 9;
    call.seeds = {{graph->state_of("v4"), 5, 41}, {graph->state_of("v2"), 3, 42}};
    GoalSpec goal = GoalSpec::any_of({graph->state_of("v4"), graph->state_of("v2")});
    auto out = run_bfhs(*graph, goal, zero, call, stats);
    REQUIRE(out.solved);
    CHECK(out.cost == 3);
    CHECK(out.origin == 42);
    CHECK(out.goal_state == graph->state_of("v2"));
    CHECK(out.generated == 0);
    CHECK(out.expanded == 0);
}

TEST_CASE("worked-example calls against the best-first store replay exactly") {
    auto graph = make_worked_example_graph();
    VertexTableHeuristic h(graph);
    GoalSpec goal = GoalSpec::single(graph->state_of("Z"));

    RunStats astar_stats;
    AStarConfig astar_config;
    astar_config.node_threshold = 12;
    auto phase1 = run_astar(*graph, graph->state_of("S"), goal, h, astar_config, astar_stats);
    REQUIRE(phase1.status == SolveStatus::ThresholdReached);

    auto seed_for = [&](const char *name, Cost depth) {
        NodeId id = *phase1.store.find(graph->state_of(name));
        return BfhsSeed{graph->state_of(name), depth, id};
    };
    std::vector<BfhsSeed> deepest = {seed_for("H", 3), seed_for("I", 3), seed_for("J", 3),
                                     seed_for("K", 3)};

    SECTION("bound 8 refutes the deepest frontier nodes") {
        RunStats stats;
        BfhsCall call;
        call.bound = 8;
        call.seeds = deepest;
        call.external_store = &phase1.store;
        auto out = run_bfhs(*graph, goal, h, call, stats);
        CHECK_FALSE(out.solved);
        CHECK(out.next_f == 9);
        CHECK(out.generated == 4);
        CHECK(out.expanded == 4);
        CHECK(out.peak_stored == 4);  // nothing survives the bound
    }

    SECTION("bound 9 reaches the goal through the deep chain") {
        RunStats stats;
        BfhsCall call;
        call.bound = 9;
        call.seeds = deepest;
        call.external_store = &phase1.store;
        call.check_expansion_uniqueness = true;
        auto out = run_bfhs(*graph, goal, h, call, stats);
        REQUIRE(out.solved);
        CHECK(out.cost == 9);
        CHECK(out.goal_state == graph->state_of("Z"));
        CHECK(out.origin == *phase1.store.find(graph->state_of("H")));
        CHECK_FALSE(out.relay.has_value());
        CHECK(out.generated == 9);
        CHECK(out.expanded == 12);
        CHECK(out.uniqueness_violations == 0);
        CHECK(out.max_live_layers == 3);
    }

    SECTION("shallower frontier groups report their own next bounds") {
        RunStats stats;
        BfhsCall call;
        call.bound = 8;
        call.seeds = {seed_for("E", 2), seed_for("F", 2)};
        call.external_store = &phase1.store;
        auto out = run_bfhs(*graph, goal, h, call, stats);
        CHECK_FALSE(out.solved);
        CHECK(out.next_f == 9);
        CHECK(out.generated == 2);

        BfhsCall shallow;
        shallow.bound = 8;
        shallow.seeds = {seed_for("B", 1)};
        shallow.external_store = &phase1.store;
        auto bout = run_bfhs(*graph, goal, h, shallow, stats);
        CHECK_FALSE(bout.solved);
        CHECK(bout.next_f == 10);
        CHECK(bout.generated == 1);
    }
}

TEST_CASE("the best-first store prunes duplicates unless the call path is cheaper") {
    auto graph = ExplicitGraphSpace::Builder{}
                     .vertex("S", 0)
                     .vertex("X", 0)
                     .vertex("T", 0)
                     .arc("S", "X")
                     .arc("X", "T")
                     .build();
    ZeroHeuristic zero;
    GoalSpec goal = GoalSpec::single(graph->state_of("T"));

    auto call_with_stored_g = [&](Cost stored_g) {
        NodeStore store;
        store.insert(graph->state_of("X"), stored_g, 0, kNoNode);
        RunStats stats;
        BfhsCall call;
        call.bound = 9;
        call.seeds = {{graph->state_of("S"), 1, 7}};
        call.external_store = &store;
        return run_bfhs(*graph, goal, zero, call, stats);
    };

    // The call generates X at depth 2.
    auto equal = call_with_stored_g(2);
    CHECK_FALSE(equal.solved);  // stored g equal: the other search owns X
    CHECK(equal.next_f == kInfiniteCost);

    auto cheaper_there = call_with_stored_g(1);
    CHECK_FALSE(cheaper_there.solved);

    auto cheaper_here = call_with_stored_g(3);
    REQUIRE(cheaper_here.solved);  // stored g worse: the call keeps going
    CHECK(cheaper_here.cost == 3);
    CHECK(cheaper_here.origin == 7);
}

TEST_CASE("seed injection ignores the external store") {
    auto graph = ExplicitGraphSpace::Builder{}
                     .vertex("S", 0)
                     .vertex("X", 0)
                     .vertex("T", 0)
                     .arc("S", "X")
                     .arc("X", "T")
                     .build();
    ZeroHeuristic zero;
    NodeStore store;
    store.insert(graph->state_of("X"), 0, 0, kNoNode);  // cheaper than any seed
    RunStats stats;
    BfhsCall call;
    call.bound = 9;
    call.seeds = {{graph->state_of("X"), 1, 3}};
    call.external_store = &store;
    auto out = run_bfhs(*graph, GoalSpec::single(graph->state_of("T")), zero, call, stats);
    REQUIRE(out.solved);  // the seed still expands
    CHECK(out.cost == 2);
    CHECK(out.origin == 3);
}

TEST_CASE("relay freezing records a provably intermediate state") {
    HanoiSpace space(3);
    ZeroHeuristic zero;
    PackedState start = space.all_on_peg(0);
    GoalSpec goal = GoalSpec::single(space.all_on_peg(3));

    SECTION("an interior relay sits on an optimal path") {
        RunStats stats;
        BfhsCall call;
        call.bound = 5;
        call.seeds = {{start, 0, 0}};
        call.relay_depth = 2;
        auto out = run_bfhs(space, goal, zero, call, stats);
        REQUIRE(out.solved);
        CHECK(out.cost == 5);
        REQUIRE(out.relay.has_value());
        CHECK(out.relay->depth == 2);
        auto head = oracle_bfs(space, start, GoalSpec::single(out.relay->state));
        REQUIRE(head.solution.has_value());
        CHECK(head.solution->cost == 2);
        auto tail = oracle_bfs(space, out.relay->state, goal);
        REQUIRE(tail.solution.has_value());
        CHECK(tail.solution->cost == 3);
    }

    SECTION("relay depth zero hands back the seed itself") {
        RunStats stats;
        BfhsCall call;
        call.bound = 5;
        call.seeds = {{start, 0, 0}};
        call.relay_depth = 0;
        auto out = run_bfhs(space, goal, zero, call, stats);
        REQUIRE(out.solved);
        REQUIRE(out.relay.has_value());
        CHECK(out.relay->depth == 0);
        CHECK(out.relay->state == start);
    }

    SECTION("a relay depth past the solution never freezes") {
        RunStats stats;
        BfhsCall call;
        call.bound = 5;
        call.seeds = {{start, 0, 0}};
        call.relay_depth = 7;
        auto out = run_bfhs(space, goal, zero, call, stats);
        REQUIRE(out.solved);
        CHECK_FALSE(out.relay.has_value());
    }

    SECTION("the frozen layer refuses to freeze behind the expansion line") {
        LayerStore layers;
        layers.activate(0);
        layers.note_expanded(2);
        CHECK_THROWS_AS(layers.freeze_relay_layer(1), StateError);
        CHECK_NOTHROW(layers.freeze_relay_layer(3));
    }
}

TEST_CASE("operator masks sweep the 2x2 cycle without duplicate expansions") {
    TileSpace space(2, 2);
    ZeroHeuristic zero;
    PackedState goal_state = space.canonical_goal();
    auto dist = oracle_distances(space, goal_state, 100);
    REQUIRE(dist.size() == 12);
    std::size_t per_depth[7] = {};
    PackedState antipode;
    for (const auto &[state, d] : dist) {
        REQUIRE(d <= 6);
        ++per_depth[d];
        if (d == 6) antipode = state;
    }
    // One 12-cycle: single states at the ends, two per interior depth.
    CHECK(per_depth[0] == 1);
    CHECK(per_depth[6] == 1);
    for (int d = 1; d <= 5; ++d) CHECK(per_depth[d] == 2);

    SECTION("a bound at the diameter visits every state exactly once") {
        RunStats stats;
        BfhsCall call;
        call.bound = 6;
        call.seeds = {{goal_state, 0, 0}};
        call.check_expansion_uniqueness = true;
        auto out = run_bfhs(space, never(), zero, call, stats);
        CHECK_FALSE(out.solved);
        CHECK(out.expanded == 12);
        CHECK(out.generated == 12);  // two from the seed, one per interior state
        CHECK(out.uniqueness_violations == 0);
        // The far end is regenerated only through masked operators, so no
        // frontier survives and the space is proven exhausted.
        CHECK(out.next_f == kInfiniteCost);
        CHECK(out.max_live_layers <= 3);
        CHECK(out.peak_stored <= 6);  // far below the 12 stored states a full map needs
    }

    SECTION("a bound below the diameter reports the next f") {
        RunStats stats;
        BfhsCall call;
        call.bound = 5;
        call.seeds = {{goal_state, 0, 0}};
        call.check_expansion_uniqueness = true;
        auto out = run_bfhs(space, never(), zero, call, stats);
        CHECK_FALSE(out.solved);
        CHECK(out.next_f == 6);
        CHECK(out.expanded == 11);
        CHECK(out.generated == 12);
        CHECK(out.uniqueness_violations == 0);
        CHECK(out.heuristic_evaluations == 12);  // one per generated child
        CHECK(stats.total_generated == 12);
    }

    SECTION("the goal is recognized at generation time") {
        RunStats stats;
        BfhsCall call;
        call.bound = 6;
        call.seeds = {{goal_state, 0, 0}};
        auto out = run_bfhs(space, GoalSpec::single(antipode), zero, call, stats);
        REQUIRE(out.solved);
        CHECK(out.cost == 6);
        CHECK(out.goal_state == antipode);
    }
}

TEST_CASE("undirected calls accept a three-layer window without changing the sweep") {
    HanoiSpace space(3);
    ZeroHeuristic zero;
    GoalSpec goal = GoalSpec::single(space.all_on_peg(3));
    BfhsCall call;
    call.bound = 5;
    call.seeds = {{space.all_on_peg(0), 0, 0}};

    RunStats s2, s3;
    auto narrow = run_bfhs(space, goal, zero, call, s2);
    call.layers = 3;
    auto wide = run_bfhs(space, goal, zero, call, s3);
    REQUIRE(narrow.solved);
    REQUIRE(wide.solved);
    CHECK(narrow.cost == wide.cost);
    CHECK(narrow.generated == wide.generated);
    CHECK(narrow.expanded == wide.expanded);
    CHECK(wide.peak_stored >= narrow.peak_stored);
}

TEST_CASE("seeds already covered by the live window are not re-injected") {
    auto graph = make_chain();
    ZeroHeuristic zero;

    SECTION("a seed inside the window is skipped") {
        RunStats stats;
        BfhsCall call;
        call.bound = 20;
        call.seeds = {{graph->state_of("v0"), 0, 0}, {graph->state_of("v1"), 3, 1}};
        call.check_expansion_uniqueness = true;
        auto out = run_bfhs(*graph, never(), zero, call, stats);
        CHECK_FALSE(out.solved);
        CHECK(out.expanded == 5);  // v1 swept once, at its window depth
        CHECK(out.generated == 4);
        CHECK(out.uniqueness_violations == 0);
    }

    SECTION("a seed reached shallower inside the call is cancelled, not re-run") {
        RunStats stats;
        BfhsCall call;
        call.bound = 20;
        call.seeds = {{graph->state_of("v0"), 0, 0}, {graph->state_of("v1"), 4, 1}};
        call.check_expansion_uniqueness = true;
        auto out = run_bfhs(*graph, never(), zero, call, stats);
        CHECK(out.expanded == 5);  // the depth-4 copy is dominated by v1 at depth 1
        CHECK(out.generated == 4);
        CHECK(out.uniqueness_violations == 0);
    }

    SECTION("an exhausted window jumps to the next seed depth") {
        RunStats stats;
        BfhsCall call;
        call.bound = 20;
        call.seeds = {{graph->state_of("v0"), 0, 0}, {graph->state_of("T"), 7, 9}};
        auto out = run_bfhs(*graph, never(), zero, call, stats);
        CHECK_FALSE(out.solved);
        CHECK(out.expanded == 6);  // five from the chain, then the isolated seed
        CHECK(out.generated == 4);
        CHECK(out.next_f == kInfiniteCost);
    }
}

TEST_CASE("the generation budget interrupts a call") {
    HanoiSpace space(4);
    ZeroHeuristic zero;
    RunStats stats;
    SearchBudget budget;
    budget.max_generated = 40;
    BfhsCall call;
    call.bound = 9;
    call.seeds = {{space.all_on_peg(0), 0, 0}};
    CHECK_THROWS_AS(
        run_bfhs(space, GoalSpec::single(space.all_on_peg(3)), zero, call, stats, budget),
        BudgetExceeded);
    CHECK(stats.total_generated > 40);
}
