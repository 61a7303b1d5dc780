#pragma once

// Two-phase search: best-first expansion until a storage threshold, then
// iterated cost-bounded BFHS over the surviving frontier. Each iteration
// partitions the frontier nodes whose scheduled f equals the current bound
// into depth groups, runs the deepest group first, and raises the f of a
// group's nodes to the call's next_f when it fails. The first solved call
// is optimal because every cheaper candidate was already refuted at a
// lower bound.

#include <unordered_map>
#include <utility>
#include <vector>

#include "abfhs/astar.hpp"
#include "abfhs/bfhs.hpp"

namespace abfhs {

struct HybridConfig {
    // Hard cap on nodes stored by the best-first phase.
    std::uint64_t node_threshold = 0;
    // Upper bound on BFHS calls per iteration; 0 means one call per
    // distinct frontier depth.
    std::uint64_t max_calls = 4;
    bool trace_seeds = false;
    bool check_expansion_uniqueness = false;
};

// One iteration's view of a group of frontier nodes that share a scheduled
// f-value. Groups are re-formed from live nodes every iteration.
struct FrontierSet {
    std::vector<NodeId> members;  // shallow depths first, insertion order within a depth
    Cost min_g = 0;
    Cost max_g = 0;
    Cost current_f = 0;
    bool retired = false;
};

struct HybridResult {
    SolveStatus status = SolveStatus::Exhausted;
    std::optional<Solution> solution;
    bool phase1_solved = false;  // solved before the threshold was ever hit
    std::vector<CallRecord> calls;
    NodeStore store;              // best-first-phase store (moved out at the end)
    std::vector<NodeId> frontier;
};

// Splits `nodes` (already filtered to one f-value) into depth groups,
// deepest first. With a call limit the distinct depths are chunked so the
// shallowest group is the short one; within a group, members are ordered
// shallowest depth first.
inline std::vector<FrontierSet> partition_frontier(const NodeStore &store,
                                                   const std::vector<NodeId> &nodes, Cost bound,
                                                   std::uint64_t max_calls) {
    if (nodes.empty()) throw ArgumentError("cannot partition an empty frontier selection");
    std::map<Cost, std::vector<NodeId>> by_depth;
    for (NodeId id : nodes) by_depth[store[id].g].push_back(id);

    std::size_t depths = by_depth.size();
    std::size_t groups = max_calls == 0 ? depths : std::min<std::size_t>(depths, max_calls);
    std::size_t span = (depths + groups - 1) / groups;  // distinct depths per group

    std::vector<FrontierSet> sets;
    sets.reserve(groups);
    auto it = by_depth.rbegin();
    while (it != by_depth.rend()) {
        std::vector<std::map<Cost, std::vector<NodeId>>::reverse_iterator> chunk;
        for (std::size_t i = 0; i < span && it != by_depth.rend(); ++i, ++it) chunk.push_back(it);
        FrontierSet set;
        set.current_f = bound;
        set.min_g = chunk.back()->first;
        set.max_g = chunk.front()->first;
        for (auto c = chunk.rbegin(); c != chunk.rend(); ++c)
            for (NodeId id : (*c)->second) set.members.push_back(id);
        sets.push_back(std::move(set));
    }
    return sets;
}

// Applies a failed call's next_f to the group. Bounds must rise strictly;
// an unreachable next_f retires the group's nodes for good.
inline void update_set_f(FrontierSet &set, const BfhsOutcome &outcome) {
    if (outcome.solved) throw ArgumentError("cannot update a frontier set from a solved call");
    if (outcome.next_f == kInfiniteCost) {
        set.current_f = kInfiniteCost;
        set.retired = true;
        return;
    }
    if (outcome.next_f <= set.current_f) throw InternalError("frontier f-value failed to increase");
    set.current_f = outcome.next_f;
}

// Rebuilds the solution after a solved BFHS call: the stored best-first
// path down to the originating frontier node, then one bounded best-first
// search from that node to the concrete goal state. Both pieces are
// provably tight (see run_hybrid), so the splice has cost outcome.cost.
inline Solution reconstruct_single(const StateSpace &space, const Heuristic &heuristic,
                                   const NodeStore &store, const BfhsOutcome &outcome,
                                   std::uint64_t base_resident, RunStats &stats,
                                   const SearchBudget &budget = {}) {
    if (!outcome.solved) throw ArgumentError("reconstruction needs a solved outcome");
    NodeId origin = NodeId(outcome.origin);
    Solution result;
    result.cost = outcome.cost;
    result.states = store.path_to(origin);
    Cost remaining = outcome.cost - store[origin].g;
    if (remaining == 0) return result;  // a seed itself matched the goal

    AStarConfig config;
    config.cost_bound = remaining;
    RunStats scratch;
    AStarResult sub = run_astar(space, store[origin].state, GoalSpec::single(outcome.goal_state),
                                heuristic, config, scratch,
                                remaining_budget(budget, stats.total_generated));
    stats.generated_reconstruction += scratch.total_generated;
    stats.total_generated += scratch.total_generated;
    stats.expansions += scratch.expansions;
    stats.heuristic_evaluations += scratch.heuristic_evaluations;
    stats.peak_stored = std::max(stats.peak_stored, base_resident + scratch.peak_stored);
    if (sub.status != SolveStatus::Solved || sub.solution->cost != remaining)
        throw InternalError("path reconstruction sub-search failed");
    result.states.insert(result.states.end(), sub.solution->states.begin() + 1,
                         sub.solution->states.end());
    return result;
}

inline HybridResult run_hybrid(const StateSpace &space, const PackedState &start,
                               const GoalSpec &goal, const Heuristic &heuristic,
                               const HybridConfig &config, RunStats &stats,
                               const SearchBudget &budget = {}) {
    if (config.node_threshold == 0) throw ArgumentError("node threshold must be positive");

    AStarConfig phase1_config;
    phase1_config.node_threshold = config.node_threshold;
    AStarResult phase1 = run_astar(space, start, goal, heuristic, phase1_config, stats, budget);

    HybridResult result;
    if (phase1.status == SolveStatus::Solved) {
        result.status = SolveStatus::Solved;
        result.solution = std::move(phase1.solution);
        result.phase1_solved = true;
        result.store = std::move(phase1.store);
        stats.finalize_buckets();
        return result;
    }
    if (phase1.status == SolveStatus::Exhausted) {
        result.store = std::move(phase1.store);
        stats.finalize_buckets();
        return result;  // whole space fit under the threshold: unsolvable
    }

    const NodeStore &store = phase1.store;
    const std::uint64_t base_resident = store.size();
    // Scheduled f per frontier node; starts at the node's own f and only
    // rises as calls covering the node fail.
    std::unordered_map<NodeId, Cost> node_f;
    for (NodeId id : phase1.frontier) node_f[id] = saturating_add(store[id].g, store[id].h);

    while (true) {
        Cost bound = kInfiniteCost;
        for (NodeId id : phase1.frontier) bound = std::min(bound, node_f.at(id));
        if (bound == kInfiniteCost) break;  // every frontier node refuted: unsolvable

        std::vector<NodeId> eligible;
        for (NodeId id : phase1.frontier)
            if (node_f.at(id) == bound) eligible.push_back(id);
        std::vector<FrontierSet> sets = partition_frontier(store, eligible, bound, config.max_calls);

        stats.generated_last_iteration = 0;
        std::uint64_t iter_expanded = 0;
        std::uint64_t iter_peak = 0;
        for (FrontierSet &set : sets) {
            BfhsCall call;
            call.bound = bound;
            call.external_store = &store;
            call.check_expansion_uniqueness = config.check_expansion_uniqueness;
            call.seeds.reserve(set.members.size());
            for (NodeId id : set.members)
                call.seeds.push_back({store[id].state, store[id].g, std::uint64_t(id)});

            BfhsOutcome out = run_bfhs(space, goal, heuristic, call, stats, budget);

            CallRecord record;
            record.bound = bound;
            record.min_depth = set.min_g;
            record.max_depth = set.max_g;
            record.seed_count = call.seeds.size();
            record.solved = out.solved;
            record.next_f = out.next_f;
            record.generated = out.generated;
            record.expanded = out.expanded;
            record.peak_stored = out.peak_stored;
            record.uniqueness_violations = out.uniqueness_violations;
            record.max_live_layers = out.max_live_layers;
            if (config.trace_seeds) record.seeds = call.seeds;
            result.calls.push_back(std::move(record));

            stats.generated_last_iteration += out.generated;
            iter_expanded += out.expanded;
            iter_peak = std::max(iter_peak, out.peak_stored);
            stats.peak_stored = std::max(stats.peak_stored, base_resident + out.peak_stored);

            if (out.solved) {
                stats.solution_cost = out.cost;
                stats.iterations.push_back(
                    {bound, stats.generated_last_iteration, iter_expanded, base_resident + iter_peak});
                result.solution = reconstruct_single(space, heuristic, store, out, base_resident,
                                                     stats, budget);
                result.status = SolveStatus::Solved;
                result.frontier = std::move(phase1.frontier);
                result.store = std::move(phase1.store);
                stats.finalize_buckets();
                return result;
            }
            update_set_f(set, out);
            for (NodeId id : set.members) node_f[id] = set.current_f;
        }
        stats.iterations.push_back(
            {bound, stats.generated_last_iteration, iter_expanded, base_resident + iter_peak});
    }
    result.frontier = std::move(phase1.frontier);
    result.store = std::move(phase1.store);
    stats.finalize_buckets();
    return result;
}

}  // namespace abfhs
