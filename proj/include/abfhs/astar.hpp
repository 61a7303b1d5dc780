#pragma once

// Best-first search over unit-cost spaces. Ordering is minimum f, then
// minimum h, then insertion order; the goal test runs at expansion. The
// open and closed sets live in one NodeStore so a run stopped by the
// storage threshold can hand its frontier and store to the hybrid driver.

#include <algorithm>
#include <queue>
#include <unordered_map>
#include <vector>

#include "abfhs/heuristics.hpp"
#include "abfhs/state_space.hpp"

namespace abfhs {

enum class SolveStatus : std::uint8_t { Solved, ThresholdReached, Exhausted };

inline const char *to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Solved: return "solved";
        case SolveStatus::ThresholdReached: return "threshold";
        case SolveStatus::Exhausted: return "exhausted";
    }
    return "?";
}

struct AStarConfig {
    // Hard cap on stored nodes; an expansion that would push the store
    // past it stops the run instead (the cap is never overshot).
    std::optional<std::uint64_t> node_threshold;
    Cost cost_bound = kInfiniteCost;  // prune children with f > cost_bound
    Cost g_bound = kInfiniteCost;     // prune children with g >= g_bound
};

class NodeStore {
public:
    struct Node {
        PackedState state;
        Cost g = 0;
        Cost h = 0;
        NodeId parent = kNoNode;
        bool closed = false;
    };

    NodeId insert(const PackedState &state, Cost g, Cost h, NodeId parent) {
        if (nodes_.size() >= std::size_t(kNoNode)) throw ResourceError("node store id space full");
        NodeId id = NodeId(nodes_.size());
        nodes_.push_back({state, g, h, parent, false});
        index_.emplace(state, id);
        return id;
    }

    std::optional<NodeId> find(const PackedState &state) const {
        auto it = index_.find(state);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    Node &operator[](NodeId id) { return nodes_[id]; }
    const Node &operator[](NodeId id) const { return nodes_[id]; }
    std::size_t size() const { return nodes_.size(); }

    // Start-first path through parent links.
    std::vector<PackedState> path_to(NodeId id) const {
        std::vector<PackedState> rev;
        for (NodeId n = id; n != kNoNode; n = nodes_[n].parent) rev.push_back(nodes_[n].state);
        return {rev.rbegin(), rev.rend()};
    }

private:
    std::vector<Node> nodes_;
    std::unordered_map<PackedState, NodeId> index_;
};

struct AStarResult {
    SolveStatus status = SolveStatus::Exhausted;
    std::optional<Solution> solution;
    // Stored nodes never expanded, in node id order; the hybrid driver
    // seeds its frontier sets from this after ThresholdReached.
    std::vector<NodeId> frontier;
    NodeStore store;
};

namespace detail {

struct OpenEntry {
    Cost f, h;
    std::uint64_t seq;
    NodeId id;
    Cost g;
};

struct OpenOrder {
    // std::priority_queue is a max-heap, so greater-than yields min-first.
    bool operator()(const OpenEntry &a, const OpenEntry &b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.h != b.h) return a.h > b.h;
        return a.seq > b.seq;
    }
};

}  // namespace detail

inline AStarResult run_astar(const StateSpace &space, const PackedState &start,
                             const GoalSpec &goal, const Heuristic &heuristic,
                             const AStarConfig &config, RunStats &stats,
                             const SearchBudget &budget = {}) {
    AStarResult res;
    NodeStore &store = res.store;
    std::priority_queue<detail::OpenEntry, std::vector<detail::OpenEntry>, detail::OpenOrder> open;
    std::uint64_t seq = 0;
    const std::size_t first_iteration = stats.iterations.size();

    auto note_peak = [&] {
        stats.peak_stored = std::max(stats.peak_stored, std::uint64_t(store.size()));
    };
    auto push = [&](NodeId id) {
        const auto &n = store[id];
        open.push({saturating_add(n.g, n.h), n.h, seq++, id, n.g});
    };

    Cost start_h = heuristic.evaluate(start);
    ++stats.heuristic_evaluations;
    if (start_h != kInfiniteCost && start_h <= config.cost_bound && 0 < config.g_bound) {
        push(store.insert(start, 0, start_h, kNoNode));
        note_peak();
    }

    // Generation count snapshot at the start of the newest f layer; on a
    // solve, everything after it is the final iteration's work.
    Cost max_popped_f = 0;
    bool popped_any = false;
    std::uint64_t layer_start_generated = 0;

    // One planned child of the expansion in progress. A probe first plans
    // the whole expansion, then commits only if the store stays within the
    // threshold; an aborted probe leaves no trace in the statistics.
    struct Action {
        PackedState state;
        Cost g = 0;                 // kInfiniteCost marks a pruned child
        Cost h = 0;
        NodeId existing = kNoNode;  // duplicate of this stored node
        bool evaluated = false;     // heuristic ran for this child
    };
    std::vector<Successor> succ;
    std::vector<Action> actions;

    while (!open.empty()) {
        detail::OpenEntry top = open.top();
        open.pop();
        if (store[top.id].g != top.g) continue;  // stale queue entry
        if (!popped_any || top.f > max_popped_f) {
            popped_any = true;
            max_popped_f = top.f;
            layer_start_generated = stats.total_generated;
            stats.iterations.push_back({top.f, 0, 0, 0});
        }

        if (goal.matches(store[top.id].state)) {
            Solution sol;
            sol.states = store.path_to(top.id);
            sol.cost = store[top.id].g;
            stats.solution_cost = sol.cost;
            stats.generated_last_iteration += stats.total_generated - layer_start_generated;
            res.status = SolveStatus::Solved;
            res.solution = std::move(sol);
            break;
        }
        if (budget.exceeded(stats.total_generated)) throw BudgetExceeded();

        space.successors(store[top.id].state, succ);
        actions.clear();
        std::uint64_t new_nodes = 0;
        for (const auto &sc : succ) {
            Action a;
            a.state = sc.state;
            Cost g = store[top.id].g + 1;
            if (g >= config.g_bound) {
                a.g = kInfiniteCost;
            } else if (auto existing = store.find(sc.state)) {
                a.g = g;
                a.existing = *existing;
            } else {
                a.h = heuristic.evaluate(sc.state);
                a.evaluated = true;
                if (a.h == kInfiniteCost || saturating_add(g, a.h) > config.cost_bound) {
                    a.g = kInfiniteCost;
                } else {
                    a.g = g;
                    ++new_nodes;
                }
            }
            actions.push_back(a);
        }
        if (config.node_threshold && store.size() + new_nodes > *config.node_threshold) {
            // The popped node stays unexpanded and therefore on the
            // frontier; nothing from the probe is committed.
            res.status = SolveStatus::ThresholdReached;
            break;
        }

        store[top.id].closed = true;
        ++stats.expansions;
        ++stats.iterations.back().expanded;
        for (const auto &a : actions) {
            ++stats.total_generated;
            ++stats.iterations.back().generated;
            if (a.evaluated) ++stats.heuristic_evaluations;
            if (a.g == kInfiniteCost) continue;
            if (a.existing != kNoNode) {
                auto &n = store[a.existing];
                if (a.g < n.g) {  // cannot fire under a consistent heuristic
                    n.g = a.g;
                    n.parent = top.id;
                    n.closed = false;
                    push(a.existing);
                }
                continue;
            }
            push(store.insert(a.state, a.g, a.h, top.id));
        }
        note_peak();
    }

    auto fresh = stats.iterations.begin() + std::ptrdiff_t(first_iteration);
    stats.iterations.erase(std::remove_if(fresh, stats.iterations.end(),
                                          [](const IterationStats &it) {
                                              return it.generated == 0 && it.expanded == 0;
                                          }),
                           stats.iterations.end());
    for (std::size_t i = first_iteration; i < stats.iterations.size(); ++i)
        stats.iterations[i].peak_stored = stats.peak_stored;

    if (res.status != SolveStatus::Solved) {
        for (std::size_t id = 0; id < store.size(); ++id)
            if (!store[NodeId(id)].closed) res.frontier.push_back(NodeId(id));
    }
    return res;
}

}  // namespace abfhs
