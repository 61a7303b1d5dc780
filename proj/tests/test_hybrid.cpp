#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "abfhs/bench.hpp"
#include "abfhs/domains/explicit_graph.hpp"
#include "abfhs/domains/tile.hpp"
#include "abfhs/hybrid.hpp"
#include "abfhs/oracle.hpp"

using namespace abfhs;

namespace {

std::set<std::string> seed_names(const ExplicitGraphSpace &g, const CallRecord &record) {
    std::set<std::string> names;
    for (const auto &seed : record.seeds) names.insert(g.describe_state(seed.state));
    return names;
}

NodeStore store_with_depths(const std::vector<Cost> &depths) {
    NodeStore store;
    for (Cost g : depths) store.insert(PackedState({reinterpret_cast<const std::uint8_t *>(&g),
                                                    sizeof g}),
                                       g, 0, kNoNode);
    return store;
}

}  // namespace

TEST_CASE("frontier partitioning chunks distinct depths deepest-first") {
    SECTION("six depths over three calls") {
        NodeStore store = store_with_depths({7, 8, 9, 10, 11, 12});
        std::vector<NodeId> nodes = {0, 1, 2, 3, 4, 5};
        auto sets = partition_frontier(store, nodes, 14, 3);
        REQUIRE(sets.size() == 3);
        CHECK(sets[0].max_g == 12);
        CHECK(sets[0].min_g == 11);
        CHECK(sets[0].members == std::vector<NodeId>{4, 5});  // shallow first
        CHECK(sets[1].max_g == 10);
        CHECK(sets[1].min_g == 9);
        CHECK(sets[2].max_g == 8);
        CHECK(sets[2].min_g == 7);
        for (const auto &set : sets) CHECK(set.current_f == 14);
    }

    SECTION("an uneven split leaves the shallowest group short") {
        NodeStore store = store_with_depths({0, 1, 2, 3, 4, 5, 6});
        std::vector<NodeId> nodes = {0, 1, 2, 3, 4, 5, 6};
        auto sets = partition_frontier(store, nodes, 9, 3);
        REQUIRE(sets.size() == 3);
        CHECK(sets[0].members.size() == 3);  // depths 4..6
        CHECK(sets[1].members.size() == 3);  // depths 1..3
        CHECK(sets[2].members.size() == 1);  // depth 0
        CHECK(sets[2].min_g == 0);
        CHECK(sets[2].max_g == 0);
    }

    SECTION("two depths under a single call share one set, shallow depth first") {
        NodeStore store = store_with_depths({3, 2, 3});
        std::vector<NodeId> nodes = {0, 1, 2};
        auto sets = partition_frontier(store, nodes, 6, 1);
        REQUIRE(sets.size() == 1);
        CHECK(sets[0].members == std::vector<NodeId>{1, 0, 2});
        CHECK(sets[0].min_g == 2);
        CHECK(sets[0].max_g == 3);
    }

    SECTION("no call limit means one set per distinct depth") {
        NodeStore store = store_with_depths({5, 3, 5, 8});
        std::vector<NodeId> nodes = {0, 1, 2, 3};
        auto sets = partition_frontier(store, nodes, 11, 0);
        REQUIRE(sets.size() == 3);
        CHECK(sets[0].members == std::vector<NodeId>{3});
        CHECK(sets[1].members == std::vector<NodeId>{0, 2});  // input order kept
        CHECK(sets[2].members == std::vector<NodeId>{1});
    }

    SECTION("an empty selection is a caller bug") {
        NodeStore store = store_with_depths({1});
        CHECK_THROWS_AS(partition_frontier(store, {}, 3, 2), ArgumentError);
    }
}

TEST_CASE("failed calls raise a set's scheduled f, solved calls never do") {
    FrontierSet set;
    set.current_f = 8;

    BfhsOutcome failed;
    failed.next_f = 9;
    update_set_f(set, failed);
    CHECK(set.current_f == 9);
    CHECK_FALSE(set.retired);

    BfhsOutcome stuck;
    stuck.next_f = 9;
    CHECK_THROWS_AS(update_set_f(set, stuck), InternalError);

    BfhsOutcome dead;
    dead.next_f = kInfiniteCost;
    update_set_f(set, dead);
    CHECK(set.retired);
    CHECK(set.current_f == kInfiniteCost);

    BfhsOutcome solved;
    solved.solved = true;
    CHECK_THROWS_AS(update_set_f(set, solved), ArgumentError);
}

TEST_CASE("the worked example runs phase two exactly as documented") {
    auto graph = make_worked_example_graph();
    VertexTableHeuristic h(graph);
    GoalSpec goal = GoalSpec::single(graph->state_of("Z"));
    HybridConfig config;
    config.node_threshold = 12;
    config.max_calls = 0;  // one call per distinct depth
    config.trace_seeds = true;
    config.check_expansion_uniqueness = true;
    RunStats stats;
    auto res = run_hybrid(*graph, graph->state_of("S"), goal, h, config, stats);

    REQUIRE(res.status == SolveStatus::Solved);
    CHECK_FALSE(res.phase1_solved);
    REQUIRE(res.solution.has_value());
    CHECK(res.solution->cost == 9);
    CHECK(validate_solution(*graph, graph->state_of("S"), goal, *res.solution));
    CHECK(graph->describe_state(res.solution->states[3]) == "H");
    CHECK(res.store.size() == 12);
    CHECK(res.frontier.size() == 7);

    // Bound 8: depth groups 3, 2, 1 in that order; all fail. Bound 9: the
    // deepest group solves before the depth-2 group is ever called.
    REQUIRE(res.calls.size() == 4);
    const auto &c0 = res.calls[0];
    CHECK(c0.bound == 8);
    CHECK(c0.min_depth == 3);
    CHECK(c0.max_depth == 3);
    CHECK(c0.seed_count == 4);
    CHECK(seed_names(*graph, c0) == std::set<std::string>{"H", "I", "J", "K"});
    CHECK_FALSE(c0.solved);
    CHECK(c0.next_f == 9);
    CHECK(c0.generated == 4);
    CHECK(c0.expanded == 4);

    const auto &c1 = res.calls[1];
    CHECK(c1.bound == 8);
    CHECK(c1.min_depth == 2);
    CHECK(c1.max_depth == 2);
    CHECK(seed_names(*graph, c1) == std::set<std::string>{"E", "F"});
    CHECK(c1.next_f == 9);
    CHECK(c1.generated == 2);

    const auto &c2 = res.calls[2];
    CHECK(c2.bound == 8);
    CHECK(c2.min_depth == 1);
    CHECK(seed_names(*graph, c2) == std::set<std::string>{"B"});
    CHECK(c2.next_f == 10);
    CHECK(c2.generated == 1);

    const auto &c3 = res.calls[3];
    CHECK(c3.bound == 9);
    CHECK(c3.seed_count == 4);
    CHECK(seed_names(*graph, c3) == std::set<std::string>{"H", "I", "J", "K"});
    CHECK(c3.solved);
    CHECK(c3.generated == 9);
    CHECK(c3.expanded == 12);
    CHECK(c3.peak_stored == 9);

    for (const auto &call : res.calls) CHECK(call.uniqueness_violations == 0);

    stats.finalize_buckets();
    CHECK(stats.peak_stored == 21);  // 12 stored plus the solved call's 9
    CHECK(stats.total_generated == 33);
    CHECK(stats.generated_prev_iterations == 18);
    CHECK(stats.generated_last_iteration == 9);
    CHECK(stats.generated_reconstruction == 6);
    REQUIRE(stats.iterations.size() == 4);
    Cost bounds[4] = {6, 7, 8, 9};
    std::uint64_t generated[4] = {3, 8, 7, 9};
    for (int i = 0; i < 4; ++i) {
        CHECK(stats.iterations[std::size_t(i)].bound == bounds[i]);
        CHECK(stats.iterations[std::size_t(i)].generated == generated[i]);
    }
    CHECK(stats.iterations[3].peak_stored == 21);
}

TEST_CASE("a small call limit merges depth groups without losing the answer") {
    auto graph = make_worked_example_graph();
    VertexTableHeuristic h(graph);
    GoalSpec goal = GoalSpec::single(graph->state_of("Z"));

    SECTION("four allowed calls behave like the unlimited schedule here") {
        HybridConfig config;
        config.node_threshold = 12;
        config.max_calls = 4;  // three distinct depths, so no merging happens
        RunStats stats;
        auto res = run_hybrid(*graph, graph->state_of("S"), goal, h, config, stats);
        REQUIRE(res.status == SolveStatus::Solved);
        CHECK(res.solution->cost == 9);
        REQUIRE(res.calls.size() == 4);
        CHECK(res.calls[3].solved);
    }

    SECTION("one allowed call sweeps all depths together") {
        HybridConfig config;
        config.node_threshold = 12;
        config.max_calls = 1;
        RunStats stats;
        auto res = run_hybrid(*graph, graph->state_of("S"), goal, h, config, stats);
        REQUIRE(res.status == SolveStatus::Solved);
        CHECK(res.solution->cost == 9);
        REQUIRE(res.calls.size() == 2);
        CHECK(res.calls[0].bound == 8);
        CHECK(res.calls[0].seed_count == 7);
        CHECK_FALSE(res.calls[0].solved);
        CHECK(res.calls[0].next_f == 9);
        CHECK(res.calls[1].bound == 9);
        CHECK(res.calls[1].seed_count == 7);
        CHECK(res.calls[1].solved);
    }
}

TEST_CASE("a run that solves under the threshold is the plain best-first run") {
    auto graph = make_worked_example_graph();
    VertexTableHeuristic h(graph);
    GoalSpec goal = GoalSpec::single(graph->state_of("Z"));

    HybridConfig config;
    config.node_threshold = 100;
    RunStats hybrid_stats;
    auto hybrid = run_hybrid(*graph, graph->state_of("S"), goal, h, config, hybrid_stats);

    RunStats astar_stats;
    auto plain = run_astar(*graph, graph->state_of("S"), goal, h, {}, astar_stats);
    astar_stats.finalize_buckets();

    REQUIRE(hybrid.status == SolveStatus::Solved);
    CHECK(hybrid.phase1_solved);
    CHECK(hybrid.calls.empty());
    REQUIRE(plain.status == SolveStatus::Solved);
    CHECK(hybrid.solution->cost == plain.solution->cost);
    CHECK(hybrid.solution->states == plain.solution->states);
    CHECK(hybrid_stats.peak_stored == astar_stats.peak_stored);
    CHECK(hybrid_stats.total_generated == astar_stats.total_generated);
    CHECK(hybrid_stats.generated_prev_iterations == astar_stats.generated_prev_iterations);
    CHECK(hybrid_stats.generated_last_iteration == astar_stats.generated_last_iteration);
    CHECK(hybrid_stats.expansions == astar_stats.expansions);
}

TEST_CASE("phase two proves unsolvability by retiring every frontier node") {
    SECTION("undirected component sweep") {
        TileSpace space(2, 2);
        ZeroHeuristic zero;
        std::vector<std::uint8_t> bytes = {0, 2, 1, 3};  // opposite parity
        PackedState impossible{std::span<const std::uint8_t>(bytes)};
        HybridConfig config;
        config.node_threshold = 4;
        RunStats stats;
        auto res = run_hybrid(space, space.canonical_goal(), GoalSpec::single(impossible), zero,
                              config, stats);
        CHECK(res.status == SolveStatus::Exhausted);
        CHECK_FALSE(res.solution.has_value());
        CHECK_FALSE(res.phase1_solved);
        CHECK_FALSE(res.calls.empty());
        CHECK(res.store.size() <= 4);
        bool saw_retirement = false;
        for (const auto &call : res.calls)
            if (!call.solved && call.next_f == kInfiniteCost) saw_retirement = true;
        CHECK(saw_retirement);
    }

    SECTION("directed dead end") {
        auto graph = ExplicitGraphSpace::Builder{}
                         .vertex("S", 0)
                         .vertex("A", 0)
                         .vertex("B", 0)
                         .vertex("T", 0)
                         .arc("S", "A")
                         .arc("A", "B")
                         .build();
        ZeroHeuristic zero;
        HybridConfig config;
        config.node_threshold = 2;
        RunStats stats;
        auto res = run_hybrid(*graph, graph->state_of("S"), GoalSpec::single(graph->state_of("T")),
                              zero, config, stats);
        CHECK(res.status == SolveStatus::Exhausted);
        REQUIRE(res.calls.size() == 2);
        CHECK(res.calls[0].bound == 1);
        CHECK(res.calls[0].next_f == 2);
        CHECK(res.calls[1].bound == 2);
        CHECK(res.calls[1].next_f == kInfiniteCost);
    }
}

TEST_CASE("a tile scramble forced into phase two still solves optimally") {
    TileSpace space(3, 3);
    ManhattanHeuristic h(space, space.canonical_goal());
    // Seed 12 of the no-undo walk lands at distance 12, deep enough that a
    // 12-node store cap cannot be satisfied by phase one.
    std::mt19937_64 rng{12};
    PackedState start = random_tile_walk(space, 22, rng);
    GoalSpec goal = GoalSpec::single(space.canonical_goal());
    auto oracle = oracle_bfs(space, start, goal);
    REQUIRE(oracle.solution.has_value());
    REQUIRE(oracle.solution->cost == 12);

    HybridConfig config;
    config.node_threshold = 12;
    config.max_calls = 0;
    config.check_expansion_uniqueness = true;
    RunStats stats;
    auto res = run_hybrid(space, start, goal, h, config, stats);

    REQUIRE(res.status == SolveStatus::Solved);
    CHECK_FALSE(res.phase1_solved);
    CHECK(res.solution->cost == oracle.solution->cost);
    CHECK(validate_solution(space, start, goal, *res.solution));
    REQUIRE_FALSE(res.calls.empty());

    // Calls run in rising bound order, deepest group first within a bound;
    // single-depth seeding off true best-first depths never re-expands.
    for (std::size_t i = 1; i < res.calls.size(); ++i) {
        const auto &prev = res.calls[i - 1];
        const auto &cur = res.calls[i];
        CHECK((cur.bound > prev.bound || (cur.bound == prev.bound && cur.max_depth <= prev.max_depth)));
    }
    for (const auto &call : res.calls) {
        CHECK(call.uniqueness_violations == 0);
        CHECK(call.min_depth <= call.max_depth);
        CHECK(call.seeds.empty());  // tracing was off
    }
    CHECK(res.calls.back().solved);

    stats.finalize_buckets();
    CHECK(stats.generated_prev_iterations + stats.generated_last_iteration +
              stats.generated_reconstruction ==
          stats.total_generated);
    // Peak = retained best-first store plus the widest call on top of it.
    CHECK(stats.peak_stored > res.store.size());
    CHECK(res.store.size() <= 12);
}

TEST_CASE("hybrid configuration is validated") {
    TileSpace space(2, 2);
    ZeroHeuristic zero;
    RunStats stats;
    HybridConfig config;  // zero threshold
    CHECK_THROWS_AS(run_hybrid(space, space.canonical_goal(),
                               GoalSpec::single(space.canonical_goal()), zero, config, stats),
                    ArgumentError);
}

TEST_CASE("the budget interrupts phase two") {
    TileSpace space(3, 3);
    ManhattanHeuristic h(space, space.canonical_goal());
    // Seed 8 of the no-undo walk is 24 moves out, far past what 60 generated
    // nodes can cover.
    std::mt19937_64 rng{8};
    PackedState start = random_tile_walk(space, 40, rng);
    HybridConfig config;
    config.node_threshold = 8;
    RunStats stats;
    SearchBudget budget;
    budget.max_generated = 60;
    CHECK_THROWS_AS(run_hybrid(space, start, GoalSpec::single(space.canonical_goal()), h, config,
                               stats, budget),
                    BudgetExceeded);
    CHECK(stats.total_generated > 60);
}
