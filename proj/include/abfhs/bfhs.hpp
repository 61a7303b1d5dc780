#pragma once

// Cost-bounded breadth-first search with layered duplicate detection.
// A call starts from depth-tagged seed nodes, expands strictly by depth,
// prunes every generated node whose f exceeds the bound (folding the
// minimum such f into next_f), and optionally freezes one relay layer for
// divide-and-conquer reconstruction. Undirected spaces keep a 2-layer
// window plus per-node generating-operator masks so parents are never
// regenerated; directed spaces keep a 3-layer window.
//
// Seed depths come from the caller and may overestimate a state's true
// distance (a threshold-stopped best-first phase leaves unsettled g values
// on its frontier). When a seed's state is stored at a shallower depth
// within the same call, the pending deeper seed is cancelled and later
// re-reaches at or below a seeded depth are pruned; every state then enters
// at its minimum in-call depth, which keeps layer labels consistent and the
// layered duplicate detection sound.

#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "abfhs/astar.hpp"
#include "abfhs/heuristics.hpp"
#include "abfhs/state_space.hpp"

namespace abfhs {

struct BfhsSeed {
    PackedState state;
    Cost depth = 0;          // absolute g of the seed
    std::uint64_t origin = 0;  // caller tag, e.g. the frontier node id
};

struct BfhsCall {
    Cost bound = 0;
    std::vector<BfhsSeed> seeds;
    // Live-layer window: 0 picks 2 for UndirectedInvertible and 3 for
    // Directed. Directed spaces require 3; undirected accept 2 or 3.
    int layers = 0;
    std::optional<Cost> relay_depth;
    const NodeStore *external_store = nullptr;  // best-first-phase store
    bool check_expansion_uniqueness = false;    // debug accounting
};

struct BfhsRelay {
    PackedState state;
    Cost depth = 0;
};

struct BfhsOutcome {
    bool solved = false;
    // Solved fields.
    Cost cost = 0;
    PackedState goal_state;
    std::uint64_t origin = 0;
    std::optional<BfhsRelay> relay;
    // Failed field: minimum f over bound-pruned nodes, +infinity if none.
    Cost next_f = kInfiniteCost;
    // Call-local counters (the shared RunStats accumulates them too).
    std::uint64_t generated = 0;
    std::uint64_t expanded = 0;
    std::uint64_t peak_stored = 0;
    std::uint64_t heuristic_evaluations = 0;
    int max_live_layers = 0;
    std::uint64_t uniqueness_violations = 0;
};

// One call to BFHS as recorded by the drivers; enough to audit ordering
// and, with seeds kept, to replay the call.
struct CallRecord {
    Cost bound = 0;
    Cost min_depth = 0;
    Cost max_depth = 0;
    std::size_t seed_count = 0;
    bool solved = false;
    Cost next_f = kInfiniteCost;
    std::uint64_t generated = 0;
    std::uint64_t expanded = 0;
    std::uint64_t peak_stored = 0;
    std::uint64_t uniqueness_violations = 0;
    int max_live_layers = 0;
    std::vector<BfhsSeed> seeds;  // filled only when the driver traces seeds
};

// Per-depth node stores. One hash map per layer keeps whole-layer disposal
// cheap; at most `window` unfrozen layers are live, plus the frozen relay.
class LayerStore {
public:
    static constexpr std::uint32_t kNoRelayRef = 0xFFFFFFFFu;

    struct Node {
        PackedState state;
        std::uint64_t origin = 0;
        std::uint32_t relay = kNoRelayRef;  // index into the relay layer
        std::uint64_t arrived_ops = 0;      // operators that generated this node
    };

    struct Layer {
        Cost depth = 0;
        bool frozen = false;
        std::vector<Node> nodes;
        std::unordered_map<PackedState, std::uint32_t> index;
    };

    Layer &activate(Cost depth) {
        auto [it, fresh] = layers_.try_emplace(depth);
        if (fresh) it->second.depth = depth;
        return it->second;
    }

    Layer *find_layer(Cost depth) {
        auto it = layers_.find(depth);
        return it == layers_.end() ? nullptr : &it->second;
    }

    Node *lookup(const PackedState &state) {
        for (auto &[depth, layer] : layers_) {
            auto it = layer.index.find(state);
            if (it != layer.index.end()) return &layer.nodes[it->second];
        }
        return nullptr;
    }

    Node &insert(Layer &layer, Node node) {
        layer.index.emplace(node.state, std::uint32_t(layer.nodes.size()));
        layer.nodes.push_back(std::move(node));
        ++resident_;
        return layer.nodes.back();
    }

    // Retains the layer for the rest of the call and makes its nodes their
    // own relay ancestors; descendants inherit the reference.
    Layer &freeze_relay_layer(Cost depth) {
        if (expanded_through_ && *expanded_through_ >= depth)
            throw StateError("relay depth already expanded");
        Layer &layer = activate(depth);
        layer.frozen = true;
        relay_ = &layer;
        for (std::uint32_t i = 0; i < layer.nodes.size(); ++i) layer.nodes[i].relay = i;
        return layer;
    }

    const Layer *relay_layer() const { return relay_; }

    void note_expanded(Cost depth) { expanded_through_ = depth; }

    // Drops every unfrozen layer at or below `depth`.
    void drop_through(Cost depth) {
        for (auto it = layers_.begin(); it != layers_.end();) {
            if (it->first <= depth && !it->second.frozen) {
                resident_ -= it->second.nodes.size();
                it = layers_.erase(it);
            } else {
                ++it;
            }
        }
    }

    std::size_t resident_nodes() const { return resident_; }
    int live_layers() const { return int(layers_.size()); }

private:
    std::map<Cost, Layer> layers_;
    Layer *relay_ = nullptr;
    std::size_t resident_ = 0;
    std::optional<Cost> expanded_through_;
};

struct DuplicateVerdict {
    bool prune = false;
    LayerStore::Node *window_hit = nullptr;
};

// Window/relay lookup plus the best-first-store rule: a candidate already
// stored there with stored g <= candidate g is pruned (strict dominance is
// not required; equality means the other search owns the node).
inline DuplicateVerdict duplicate_check(LayerStore &layers, const NodeStore *external,
                                        const PackedState &state, Cost g) {
    DuplicateVerdict v;
    v.window_hit = layers.lookup(state);
    if (v.window_hit) {
        v.prune = true;
        return v;
    }
    if (external) {
        if (auto id = external->find(state)) v.prune = (*external)[*id].g <= g;
    }
    return v;
}

inline BfhsOutcome run_bfhs(const StateSpace &space, const GoalSpec &goal,
                            const Heuristic &heuristic, const BfhsCall &call, RunStats &stats,
                            const SearchBudget &budget = {}) {
    const bool undirected = space.graph_class() == GraphClass::UndirectedInvertible;
    int window = call.layers;
    if (window == 0) window = undirected ? 2 : 3;
    if (undirected ? (window != 2 && window != 3) : (window != 3))
        throw ArgumentError("unsupported live-layer window for this graph class");

    BfhsOutcome out;
    if (call.seeds.empty()) return out;

    // Seed validation: duplicate-free and within the bound. The same map
    // then guards against a seed state reappearing at another depth.
    std::unordered_map<PackedState, Cost> seed_guard;
    for (const auto &seed : call.seeds) {
        if (!seed_guard.emplace(seed.state, seed.depth).second)
            throw ArgumentError("duplicate seed state in call");
        if (saturating_add(seed.depth, heuristic.evaluate(seed.state)) > call.bound)
            throw ArgumentError("seed f-value exceeds the call bound");
    }

    // Minimum-depth goal seed wins before any expansion.
    {
        const BfhsSeed *best = nullptr;
        for (const auto &seed : call.seeds)
            if (goal.matches(seed.state) && (!best || seed.depth < best->depth)) best = &seed;
        if (best) {
            out.solved = true;
            out.cost = best->depth;
            out.goal_state = best->state;
            out.origin = best->origin;
            return out;
        }
    }

    std::vector<OperatorId> inverse;
    if (undirected) {
        if (space.operator_count() > 64)
            throw ResourceError("operator mask supports at most 64 operators");
        inverse.resize(space.operator_count());
        for (OperatorId op = 0; op < space.operator_count(); ++op) {
            auto inv = space.inverse_operator(op);
            if (!inv) throw InternalError("undirected space lacks an inverse operator");
            inverse[op] = *inv;
        }
    }

    std::map<Cost, std::vector<const BfhsSeed *>> seed_groups;
    for (const auto &seed : call.seeds) seed_groups[seed.depth].push_back(&seed);

    LayerStore layers;
    auto note_shape = [&] {
        out.peak_stored = std::max(out.peak_stored, std::uint64_t(layers.resident_nodes()));
        out.max_live_layers = std::max(out.max_live_layers, layers.live_layers());
    };
    auto inject = [&](Cost depth) {
        LayerStore::Layer &layer = layers.activate(depth);
        auto it = seed_groups.find(depth);
        if (it != seed_groups.end()) {
            for (const BfhsSeed *seed : it->second) {
                if (layers.lookup(seed->state)) continue;  // covered at a live depth
                layers.insert(layer, {seed->state, seed->origin, LayerStore::kNoRelayRef, 0});
            }
        }
        note_shape();
    };

    // Debug-only expansion histories for the uniqueness properties.
    std::unordered_set<PackedState> expanded_states;
    std::unordered_map<PackedState, std::set<Cost>> expanded_depths;

    std::vector<Successor> succ;
    Cost depth = seed_groups.begin()->first;
    inject(depth);

    while (true) {
        LayerStore::Layer *cur = layers.find_layer(depth);
        if (!cur || cur->nodes.empty()) {
            auto next_seeds = seed_groups.upper_bound(depth);
            if (next_seeds == seed_groups.end()) break;
            depth = next_seeds->first;
            if (depth >= 1) layers.drop_through(depth - 1);
            inject(depth);
            continue;
        }

        if (call.relay_depth && depth == *call.relay_depth) layers.freeze_relay_layer(depth);
        inject(depth + 1);
        LayerStore::Layer &next = *layers.find_layer(depth + 1);

        for (std::size_t i = 0; i < cur->nodes.size(); ++i) {
            if (budget.exceeded(stats.total_generated)) throw BudgetExceeded();
            const LayerStore::Node &node = cur->nodes[i];
            if (call.check_expansion_uniqueness) {
                if (undirected) {
                    if (!expanded_states.insert(node.state).second) ++out.uniqueness_violations;
                } else {
                    if (!expanded_depths[node.state].insert(depth).second)
                        ++out.uniqueness_violations;
                }
            }
            ++out.expanded;
            ++stats.expansions;
            space.successors(node.state, succ);
            for (const auto &sc : succ) {
                if (undirected && (node.arrived_ops >> inverse[sc.op]) & 1)
                    continue;  // would regenerate a parent
                ++out.generated;
                ++stats.total_generated;
                Cost g = depth + 1;
                Cost hv = heuristic.evaluate(sc.state);
                ++out.heuristic_evaluations;
                ++stats.heuristic_evaluations;
                Cost f = saturating_add(g, hv);
                if (f > call.bound) {
                    out.next_f = std::min(out.next_f, f);
                    continue;
                }
                if (goal.matches(sc.state)) {
                    out.solved = true;
                    out.cost = g;
                    out.goal_state = sc.state;
                    out.origin = node.origin;
                    if (node.relay != LayerStore::kNoRelayRef)
                        out.relay = BfhsRelay{layers.relay_layer()->nodes[node.relay].state,
                                              layers.relay_layer()->depth};
                    return out;
                }
                auto verdict = duplicate_check(layers, call.external_store, sc.state, g);
                if (verdict.window_hit) {
                    if (undirected) verdict.window_hit->arrived_ops |= std::uint64_t(1) << sc.op;
                    continue;
                }
                if (verdict.prune) continue;
                if (auto gi = seed_guard.find(sc.state);
                    gi != seed_guard.end() && gi->second != g) {
                    // At or below a depth this state was already seen at: the
                    // earlier occurrence explores a superset within the bound.
                    if (gi->second < g) continue;
                    // Shallower than the pending seed: cancel that seed so the
                    // state enters once, at its minimum in-call depth.
                    if (auto git = seed_groups.find(gi->second); git != seed_groups.end()) {
                        std::erase_if(git->second,
                                      [&](const BfhsSeed *s) { return s->state == sc.state; });
                        if (git->second.empty()) seed_groups.erase(git);
                    }
                    gi->second = g;
                }
                layers.insert(next, {sc.state, node.origin, node.relay,
                                     undirected ? std::uint64_t(1) << sc.op : 0});
                note_shape();
            }
        }
        layers.note_expanded(depth);
        if (window == 2) {
            layers.drop_through(depth);
        } else if (depth >= 1) {
            layers.drop_through(depth - 1);
        }
        ++depth;
    }
    return out;
}

}  // namespace abfhs
