#pragma once

// Breadth-first iterative-deepening search: repeated cost-bounded BFHS
// calls from the start state with a geometrically growing bound, each call
// freezing a relay layer at a fixed fraction of the bound. A solved call
// yields only the solution cost plus the relay ancestor, so the actual
// path is rebuilt by two bounded best-first sub-searches that meet at the
// relay.

#include <utility>
#include <vector>

#include "abfhs/astar.hpp"
#include "abfhs/bfhs.hpp"

namespace abfhs {

struct BfidaConfig {
    // Relay depth for a call = bound * relay_num / relay_den (floored).
    int relay_num = 1;
    int relay_den = 4;
    bool check_expansion_uniqueness = false;
};

struct BfidaResult {
    SolveStatus status = SolveStatus::Exhausted;
    std::optional<Solution> solution;
    std::vector<CallRecord> calls;
};

// Rebuilds start -> ... -> outcome.goal_state after a solved call. With a
// relay: one search from the start to the relay state (depth-capped just
// above the relay depth, f-capped at the solution cost) and one from the
// relay to the goal state (f measured from the relay, capped at the
// remaining cost). Both reuse the original goal-directed heuristic, which
// stays admissible because every node on an optimal spliced path has
// g + h <= C*. Without a relay, one direct search does the job.
inline Solution reconstruct_two_phase(const StateSpace &space, const Heuristic &heuristic,
                                      const PackedState &start, const BfhsOutcome &outcome,
                                      RunStats &stats, const SearchBudget &budget = {}) {
    if (!outcome.solved) throw ArgumentError("reconstruction needs a solved outcome");
    Solution result;
    result.cost = outcome.cost;
    if (outcome.cost == 0) {
        result.states = {outcome.goal_state};
        return result;
    }

    auto bounded_path = [&](const PackedState &from, const PackedState &to, Cost cost_bound,
                            std::optional<Cost> g_bound, Cost expected_cost) {
        AStarConfig config;
        config.cost_bound = cost_bound;
        if (g_bound) config.g_bound = *g_bound;
        RunStats scratch;
        AStarResult sub = run_astar(space, from, GoalSpec::single(to), heuristic, config, scratch,
                                    remaining_budget(budget, stats.total_generated));
        stats.generated_reconstruction += scratch.total_generated;
        stats.total_generated += scratch.total_generated;
        stats.expansions += scratch.expansions;
        stats.heuristic_evaluations += scratch.heuristic_evaluations;
        stats.peak_stored = std::max(stats.peak_stored, scratch.peak_stored);
        if (sub.status != SolveStatus::Solved || sub.solution->cost != expected_cost)
            throw InternalError("path reconstruction sub-search failed");
        return std::move(*sub.solution);
    };

    if (outcome.relay && outcome.relay->depth > 0 && outcome.relay->depth < outcome.cost) {
        Cost relay_depth = outcome.relay->depth;
        Solution head = bounded_path(start, outcome.relay->state, outcome.cost, relay_depth + 1,
                                     relay_depth);
        Solution tail = bounded_path(outcome.relay->state, outcome.goal_state,
                                     outcome.cost - relay_depth, std::nullopt,
                                     outcome.cost - relay_depth);
        result.states = std::move(head.states);
        result.states.insert(result.states.end(), tail.states.begin() + 1, tail.states.end());
    } else {
        Solution whole = bounded_path(start, outcome.goal_state, outcome.cost, std::nullopt,
                                      outcome.cost);
        result.states = std::move(whole.states);
    }
    return result;
}

inline BfidaResult run_bfida(const StateSpace &space, const PackedState &start,
                             const GoalSpec &goal, const Heuristic &heuristic,
                             const BfidaConfig &config, RunStats &stats,
                             const SearchBudget &budget = {}) {
    if (config.relay_den < 1 || config.relay_num < 0 || config.relay_num > config.relay_den)
        throw ArgumentError("relay fraction must lie in [0, 1]");
    space.validate_state(start);

    BfidaResult result;
    Cost h0 = heuristic.evaluate(start);
    ++stats.heuristic_evaluations;
    if (h0 == kInfiniteCost) return result;  // heuristic proves the goal unreachable

    Cost bound = h0;
    while (true) {
        BfhsCall call;
        call.bound = bound;
        call.seeds = {BfhsSeed{start, 0, 0}};
        call.relay_depth =
            Cost(std::uint64_t(bound) * std::uint64_t(config.relay_num) / std::uint64_t(config.relay_den));
        call.check_expansion_uniqueness = config.check_expansion_uniqueness;

        BfhsOutcome out = run_bfhs(space, goal, heuristic, call, stats, budget);

        CallRecord record;
        record.bound = bound;
        record.seed_count = 1;
        record.solved = out.solved;
        record.next_f = out.next_f;
        record.generated = out.generated;
        record.expanded = out.expanded;
        record.peak_stored = out.peak_stored;
        record.uniqueness_violations = out.uniqueness_violations;
        record.max_live_layers = out.max_live_layers;
        result.calls.push_back(std::move(record));

        stats.iterations.push_back({bound, out.generated, out.expanded, out.peak_stored});
        stats.peak_stored = std::max(stats.peak_stored, out.peak_stored);
        stats.generated_last_iteration = out.generated;

        if (out.solved) {
            stats.solution_cost = out.cost;
            result.solution = reconstruct_two_phase(space, heuristic, start, out, stats, budget);
            result.status = SolveStatus::Solved;
            stats.finalize_buckets();
            return result;
        }
        if (out.next_f == kInfiniteCost) {
            stats.finalize_buckets();
            return result;  // space below any bound exhausted: unsolvable
        }
        if (out.next_f <= bound) throw InternalError("cost bound failed to increase");
        bound = out.next_f;
    }
}

}  // namespace abfhs
