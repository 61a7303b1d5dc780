#pragma once

// Uninformed breadth-first reference solver. It shares no code with the
// search engines on purpose: tests compare engine results against this
// implementation, so it must stay an independent route to the answer.

#include <deque>
#include <unordered_map>
#include <vector>

#include "abfhs/state_space.hpp"

namespace abfhs {

struct OracleResult {
    std::optional<Solution> solution;  // nullopt when the goal is unreachable
    std::uint64_t stored = 0;
};

inline OracleResult oracle_bfs(const StateSpace &space, const PackedState &start,
                               const GoalSpec &goal, std::uint64_t max_stored = 20'000'000) {
    std::unordered_map<PackedState, PackedState> parent;  // state -> predecessor
    auto extract = [&](PackedState s) {
        Solution sol;
        std::vector<PackedState> rev;
        rev.push_back(s);
        while (!(rev.back() == start)) rev.push_back(parent.at(rev.back()));
        sol.states.assign(rev.rbegin(), rev.rend());
        sol.cost = Cost(sol.states.size() - 1);
        return sol;
    };

    OracleResult res;
    parent.emplace(start, start);
    if (goal.matches(start)) {
        res.solution = extract(start);
        res.stored = 1;
        return res;
    }
    std::deque<PackedState> queue;
    queue.push_back(start);
    std::vector<Successor> succ;
    while (!queue.empty()) {
        PackedState s = queue.front();
        queue.pop_front();
        space.successors(s, succ);
        for (const auto &sc : succ) {
            if (parent.count(sc.state)) continue;
            parent.emplace(sc.state, s);
            if (goal.matches(sc.state)) {
                res.solution = extract(sc.state);
                res.stored = parent.size();
                return res;
            }
            if (parent.size() > max_stored)
                throw ResourceError("reference solver exceeded its state cap");
            queue.push_back(sc.state);
        }
    }
    res.stored = parent.size();
    return res;
}

// Exhaustive distances from a start state; used to cross-check heuristics
// for admissibility and consistency on small spaces.
inline std::unordered_map<PackedState, Cost> oracle_distances(const StateSpace &space,
                                                              const PackedState &from,
                                                              std::uint64_t max_stored = 20'000'000) {
    std::unordered_map<PackedState, Cost> dist;
    dist.emplace(from, 0);
    std::deque<PackedState> queue;
    queue.push_back(from);
    std::vector<Successor> succ;
    while (!queue.empty()) {
        PackedState s = queue.front();
        queue.pop_front();
        Cost d = dist.at(s);
        space.successors(s, succ);
        for (const auto &sc : succ) {
            if (dist.count(sc.state)) continue;
            dist.emplace(sc.state, d + 1);
            if (dist.size() > max_stored)
                throw ResourceError("reference solver exceeded its state cap");
            queue.push_back(sc.state);
        }
    }
    return dist;
}

}  // namespace abfhs
