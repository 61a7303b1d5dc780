#include <catch2/catch_amalgamated.hpp>

#include <unordered_set>

#include "abfhs/domains/explicit_graph.hpp"
#include "abfhs/domains/tile.hpp"
#include "abfhs/state_space.hpp"

using namespace abfhs;

TEST_CASE("packed states compare, hash, and round-trip bytes") {
    std::uint8_t raw[] = {3, 1, 4, 1, 5};
    PackedState a{std::span<const std::uint8_t>(raw)};
    PackedState b = a;
    CHECK(a == b);
    CHECK(a.size() == 5);
    CHECK(a[2] == 4);
    raw[4] = 9;
    PackedState c{std::span<const std::uint8_t>(raw)};
    CHECK(a != c);
    CHECK((a < c || c < a));
    std::unordered_set<PackedState> set{a, b, c};
    CHECK(set.size() == 2);
}

TEST_CASE("packed state rejects oversized payloads") {
    std::vector<std::uint8_t> raw(PackedState::kMaxBytes + 1, 0);
    CHECK_THROWS_AS(PackedState{std::span<const std::uint8_t>(raw)}, EncodingError);
}

TEST_CASE("saturating add clamps at the infinite cost") {
    CHECK(saturating_add(2, 3) == 5);
    CHECK(saturating_add(kInfiniteCost, 1) == kInfiniteCost);
    CHECK(saturating_add(kInfiniteCost - 1, 5) == kInfiniteCost);
    CHECK(saturating_add(0, kInfiniteCost) == kInfiniteCost);
}

TEST_CASE("goal specs match single states, sets, and predicates") {
    TileSpace tiles(2, 2);
    PackedState goal = tiles.canonical_goal();
    CHECK(GoalSpec::single(goal).matches(goal));
    CHECK(GoalSpec::single(goal).unique_state().has_value());

    std::vector<Successor> succ;
    tiles.successors(goal, succ);
    GoalSpec any = GoalSpec::any_of({succ[0].state, succ[1].state});
    CHECK(any.matches(succ[1].state));
    CHECK_FALSE(any.matches(goal));
    CHECK_FALSE(any.unique_state().has_value());

    GoalSpec pred = GoalSpec::predicate([](const PackedState &s) { return s[0] == 2; });
    CHECK(pred.matches(succ[1].state) == (succ[1].state[0] == 2));
    CHECK_FALSE(pred.unique_state().has_value());
}

TEST_CASE("solution validation walks real edges only") {
    auto graph = ExplicitGraphSpace::Builder()
                     .vertex("a", 0)
                     .vertex("b", 0)
                     .vertex("c", 0)
                     .arc("a", "b")
                     .arc("b", "c")
                     .build();
    GoalSpec goal = GoalSpec::single(graph->state_of("c"));
    Solution ok{2, {graph->state_of("a"), graph->state_of("b"), graph->state_of("c")}};
    std::string reason;
    CHECK(validate_solution(*graph, graph->state_of("a"), goal, ok, &reason));

    Solution wrong_len = ok;
    wrong_len.cost = 3;
    CHECK_FALSE(validate_solution(*graph, graph->state_of("a"), goal, wrong_len, &reason));

    Solution skips{1, {graph->state_of("a"), graph->state_of("c")}};
    CHECK_FALSE(validate_solution(*graph, graph->state_of("a"), goal, skips, &reason));
    CHECK_FALSE(reason.empty());

    Solution wrong_goal{1, {graph->state_of("a"), graph->state_of("b")}};
    CHECK_FALSE(validate_solution(*graph, graph->state_of("a"), goal, wrong_goal, &reason));

    Solution wrong_start{1, {graph->state_of("b"), graph->state_of("c")}};
    CHECK_FALSE(validate_solution(*graph, graph->state_of("a"), goal, wrong_start, &reason));
}

TEST_CASE("generation buckets always sum to the total") {
    RunStats stats;
    stats.total_generated = 100;
    stats.generated_last_iteration = 30;
    stats.generated_reconstruction = 7;
    stats.finalize_buckets();
    CHECK(stats.generated_prev_iterations == 63);
    CHECK(stats.generated_prev_iterations + stats.generated_last_iteration +
              stats.generated_reconstruction ==
          stats.total_generated);
}

TEST_CASE("nested searches inherit what is left of the node budget") {
    SearchBudget budget;
    budget.max_generated = 100;
    SearchBudget rest = remaining_budget(budget, 40);
    CHECK(*rest.max_generated == 60);
    CHECK_FALSE(rest.exceeded(60));
    CHECK(rest.exceeded(61));
    CHECK(*remaining_budget(budget, 200).max_generated == 0);
    CHECK_FALSE(remaining_budget(SearchBudget{}, 999).max_generated.has_value());
}

TEST_CASE("parse errors carry their line number") {
    ParseError e("bad token", 42);
    CHECK(std::string(e.what()).find("line 42") != std::string::npos);
    CHECK(std::string(e.what()).find("bad token") != std::string::npos);
}
