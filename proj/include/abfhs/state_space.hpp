#pragma once

// Core abstractions for unit-cost state spaces: packed states, the
// StateSpace interface implemented by each domain, goal specs, solutions,
// and the run statistics shared by every search engine.

#include <array>
#include <chrono>
#include <cstdint>
#include <cstring>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace abfhs {

using Cost = std::uint32_t;
using OperatorId = std::uint32_t;
using NodeId = std::uint32_t;

inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max();
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

// g + h without wrapping past the infinity sentinel.
inline Cost saturating_add(Cost a, Cost b) {
    if (a == kInfiniteCost || b == kInfiniteCost) return kInfiniteCost;
    std::uint64_t s = std::uint64_t(a) + std::uint64_t(b);
    return s >= kInfiniteCost ? kInfiniteCost : Cost(s);
}

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EncodingError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class StateError : public Error {
public:
    using Error::Error;
};

class ResourceError : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string &msg, int line)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Fixed-length canonical byte encoding of a domain state. Equality of the
// bytes is equality of the states; every hash map in the toolkit keys on
// this directly.
class PackedState {
public:
    static constexpr std::size_t kMaxBytes = 32;

    PackedState() : size_(0) { bytes_.fill(0); }

    explicit PackedState(std::span<const std::uint8_t> bytes) {
        if (bytes.size() > kMaxBytes)
            throw EncodingError("packed state exceeds " + std::to_string(kMaxBytes) + " bytes");
        bytes_.fill(0);
        std::memcpy(bytes_.data(), bytes.data(), bytes.size());
        size_ = static_cast<std::uint8_t>(bytes.size());
    }

    std::size_t size() const { return size_; }
    const std::uint8_t *data() const { return bytes_.data(); }
    std::uint8_t operator[](std::size_t i) const { return bytes_[i]; }

    std::span<const std::uint8_t> bytes() const { return {bytes_.data(), size_}; }

    bool operator==(const PackedState &o) const {
        return size_ == o.size_ && std::memcmp(bytes_.data(), o.bytes_.data(), size_) == 0;
    }
    bool operator!=(const PackedState &o) const { return !(*this == o); }

    // Lexicographic; used only where a stable total order is needed.
    bool operator<(const PackedState &o) const {
        int c = std::memcmp(bytes_.data(), o.bytes_.data(), std::min(size_, o.size_));
        if (c != 0) return c < 0;
        return size_ < o.size_;
    }

    std::uint64_t hash() const {
        // FNV-1a, 64 bit.
        std::uint64_t h = 1469598103934665603ull;
        for (std::size_t i = 0; i < size_; ++i) {
            h ^= bytes_[i];
            h *= 1099511628211ull;
        }
        return h;
    }

private:
    std::array<std::uint8_t, kMaxBytes> bytes_;
    std::uint8_t size_;
};

enum class GraphClass {
    // Every operator has a declared inverse; engines use 2-layer duplicate
    // detection with parent-regeneration pruning.
    UndirectedInvertible,
    // No inverses; engines keep one extra previous layer instead.
    Directed,
};

struct Successor {
    PackedState state;
    OperatorId op;
};

// Abstract space induced by keeping a subset of state variables; used by
// pattern database construction. Indices are mixed-radix ranks of the
// retained variables' values, so tables are dense arrays.
class PatternSpace {
public:
    virtual ~PatternSpace() = default;
    virtual std::size_t table_size() const = 0;
    virtual std::size_t goal_index() const = 0;
    virtual std::size_t abstract_index(const PackedState &s) const = 0;
    // Neighbor enumeration of the abstract edge relation. All shipped PDB
    // domains are undirected, so this serves the backward sweep from the
    // abstract goal.
    virtual void abstract_neighbors(std::size_t index, std::vector<std::size_t> &out) const = 0;
};

class StateSpace {
public:
    virtual ~StateSpace() = default;

    // Identity string, also the PDB cache key prefix (encodes dimensions
    // and goal, e.g. "tile:4x4" or "hanoi4:d=5:goal=3").
    virtual std::string name() const = 0;

    virtual GraphClass graph_class() const = 0;

    // Bytes per packed state for this space.
    virtual std::size_t packed_size() const = 0;

    // Size of the operator id space; every Successor::op is < this.
    virtual std::size_t operator_count() const = 0;

    virtual std::string operator_name(OperatorId op) const {
        return "op" + std::to_string(op);
    }

    // All states one unit-cost step from s, in a fixed documented order so
    // node counts reproduce exactly. Throws EncodingError on malformed s.
    virtual void successors(const PackedState &s, std::vector<Successor> &out) const = 0;

    // Inverse operator for UndirectedInvertible spaces, absent for
    // Directed ones. Throws ArgumentError on an unknown id.
    virtual std::optional<OperatorId> inverse_operator(OperatorId op) const = 0;

    // Full validity check of an encoding (permutation bits etc.); used at
    // parse boundaries, not in search inner loops.
    virtual void validate_state(const PackedState &s) const = 0;

    // Pattern database support; the abstraction is relative to a concrete
    // goal arrangement. Domains without abstractions keep the default.
    virtual std::unique_ptr<PatternSpace> make_pattern_space(std::span<const int> /*pattern*/,
                                                             const PackedState & /*goal*/) const {
        throw ArgumentError(name() + " does not support pattern abstractions");
    }

    virtual std::string describe_state(const PackedState &s) const;
};

// Goal membership: a single state, a set, or an arbitrary predicate.
class GoalSpec {
public:
    static GoalSpec single(PackedState s) {
        GoalSpec g;
        g.states_.push_back(s);
        return g;
    }
    static GoalSpec any_of(std::vector<PackedState> states) {
        GoalSpec g;
        g.states_ = std::move(states);
        return g;
    }
    static GoalSpec predicate(std::function<bool(const PackedState &)> pred) {
        GoalSpec g;
        g.pred_ = std::move(pred);
        return g;
    }

    bool matches(const PackedState &s) const {
        if (pred_) return pred_(s);
        for (const auto &t : states_)
            if (t == s) return true;
        return false;
    }

    // The goal state when there is exactly one; heuristics need it.
    std::optional<PackedState> unique_state() const {
        if (!pred_ && states_.size() == 1) return states_[0];
        return std::nullopt;
    }

private:
    std::vector<PackedState> states_;
    std::function<bool(const PackedState &)> pred_;
};

struct AncestorRef {
    enum class Kind : std::uint8_t { None, Parent, FrontierOrigin, RelayOrigin };
    Kind kind = Kind::None;
    std::uint64_t id = 0;
};

// Node view used at engine API boundaries. f == g + h by construction.
struct SearchNode {
    PackedState state;
    Cost g = 0;
    Cost h = 0;
    AncestorRef ancestor;

    Cost f() const { return saturating_add(g, h); }
};

struct Solution {
    Cost cost = 0;
    std::vector<PackedState> states;  // start first, goal last; length == cost + 1
};

struct IterationStats {
    Cost bound = 0;
    std::uint64_t generated = 0;
    std::uint64_t expanded = 0;
    std::uint64_t peak_stored = 0;
};

struct RunStats {
    std::uint64_t peak_stored = 0;
    std::uint64_t generated_prev_iterations = 0;
    std::uint64_t generated_last_iteration = 0;
    std::uint64_t generated_reconstruction = 0;
    std::uint64_t total_generated = 0;
    std::uint64_t expansions = 0;
    std::uint64_t heuristic_evaluations = 0;
    std::vector<IterationStats> iterations;
    double wall_time_seconds = 0.0;
    std::optional<Cost> solution_cost;

    // total = prev + last + reconstruction; drivers call this when a run
    // finishes so the split is always coherent.
    void finalize_buckets() {
        generated_prev_iterations =
            total_generated - generated_last_iteration - generated_reconstruction;
    }
};

// Node/time caps shared by all engines; checked once per expansion.
struct SearchBudget {
    std::optional<std::uint64_t> max_generated;
    std::optional<double> max_seconds;
    std::chrono::steady_clock::time_point start_time = std::chrono::steady_clock::now();

    bool exceeded(std::uint64_t generated_so_far) const {
        if (max_generated && generated_so_far > *max_generated) return true;
        if (max_seconds) {
            auto dt = std::chrono::steady_clock::now() - start_time;
            if (std::chrono::duration<double>(dt).count() > *max_seconds) return true;
        }
        return false;
    }
};

// Rebases a budget for a nested search that counts generations from zero,
// so the overall cap still holds across the whole run.
inline SearchBudget remaining_budget(const SearchBudget &budget, std::uint64_t generated_so_far) {
    SearchBudget rest = budget;
    if (rest.max_generated)
        rest.max_generated =
            *rest.max_generated > generated_so_far ? *rest.max_generated - generated_so_far : 0;
    return rest;
}

// Thrown when a SearchBudget trips; the caller-owned RunStats already
// reflects everything done up to that point.
class BudgetExceeded : public std::exception {
public:
    const char *what() const noexcept override { return "search budget exceeded"; }
};

inline std::string StateSpace::describe_state(const PackedState &s) const {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(int(s[i]));
    }
    return out;
}

// True iff sol is a legal optimal-form path: starts at start, each pair of
// consecutive states is one operator apart, the last state is a goal, and
// cost == states.size() - 1. On failure, *reason names the first violation.
inline bool validate_solution(const StateSpace &space, const PackedState &start,
                              const GoalSpec &goal, const Solution &sol,
                              std::string *reason = nullptr) {
    auto fail = [&](const std::string &why) {
        if (reason) *reason = why;
        return false;
    };
    if (sol.states.empty()) return fail("empty state list");
    if (sol.states.size() != std::size_t(sol.cost) + 1)
        return fail("state count does not match cost + 1");
    if (!(sol.states.front() == start)) return fail("path does not begin at the start state");
    if (!goal.matches(sol.states.back())) return fail("final state fails the goal test");
    std::vector<Successor> succ;
    for (std::size_t i = 0; i + 1 < sol.states.size(); ++i) {
        space.successors(sol.states[i], succ);
        bool connected = false;
        for (const auto &sc : succ) {
            if (sc.state == sol.states[i + 1]) {
                connected = true;
                break;
            }
        }
        if (!connected)
            return fail("no operator connects step " + std::to_string(i) + " to step " +
                        std::to_string(i + 1));
    }
    if (reason) reason->clear();
    return true;
}

}  // namespace abfhs

template <>
struct std::hash<abfhs::PackedState> {
    std::size_t operator()(const abfhs::PackedState &s) const noexcept {
        return static_cast<std::size_t>(s.hash());
    }
};
