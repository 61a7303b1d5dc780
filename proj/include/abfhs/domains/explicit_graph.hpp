#pragma once

// Explicit directed graph with named vertices, unit-cost arcs, and a
// per-vertex heuristic table. States pack the vertex id as 4 bytes little
// endian; successor order is arc declaration order, and the arc's global
// declaration index is its operator id.

#include <unordered_map>
#include <vector>

#include "abfhs/state_space.hpp"

namespace abfhs {

class ExplicitGraphSpace final : public StateSpace {
public:
    struct Vertex {
        std::string name;
        Cost h = 0;
    };
    struct Arc {
        std::uint32_t from = 0;
        std::uint32_t to = 0;
    };

    class Builder {
    public:
        Builder &vertex(const std::string &name, Cost h) {
            if (ids_.count(name)) throw ArgumentError("duplicate vertex " + name);
            ids_[name] = std::uint32_t(vertices_.size());
            vertices_.push_back({name, h});
            return *this;
        }
        Builder &arc(const std::string &from, const std::string &to) {
            arcs_.push_back({id(from), id(to)});
            return *this;
        }
        std::shared_ptr<ExplicitGraphSpace> build() {
            return std::make_shared<ExplicitGraphSpace>(std::move(vertices_), std::move(arcs_));
        }

    private:
        std::uint32_t id(const std::string &name) const {
            auto it = ids_.find(name);
            if (it == ids_.end()) throw ArgumentError("unknown vertex " + name);
            return it->second;
        }
        std::vector<Vertex> vertices_;
        std::vector<Arc> arcs_;
        std::unordered_map<std::string, std::uint32_t> ids_;
    };

    ExplicitGraphSpace(std::vector<Vertex> vertices, std::vector<Arc> arcs)
        : vertices_(std::move(vertices)), arcs_(std::move(arcs)) {
        if (vertices_.empty()) throw ArgumentError("graph needs at least one vertex");
        for (std::uint32_t i = 0; i < vertices_.size(); ++i) ids_[vertices_[i].name] = i;
        // Group arc ids by source, keeping declaration order within a group.
        out_.resize(vertices_.size());
        for (std::uint32_t a = 0; a < arcs_.size(); ++a) {
            if (arcs_[a].from >= vertices_.size() || arcs_[a].to >= vertices_.size())
                throw ArgumentError("arc endpoint out of range");
            out_[arcs_[a].from].push_back(a);
        }
    }

    std::string name() const override { return "graph:" + std::to_string(vertices_.size()) + "v"; }
    GraphClass graph_class() const override { return GraphClass::Directed; }
    std::size_t packed_size() const override { return 4; }
    std::size_t operator_count() const override { return arcs_.size(); }

    std::string operator_name(OperatorId op) const override {
        if (op >= arcs_.size()) throw ArgumentError("unknown arc id");
        return vertices_[arcs_[op].from].name + "->" + vertices_[arcs_[op].to].name;
    }

    void successors(const PackedState &s, std::vector<Successor> &out) const override {
        out.clear();
        std::uint32_t v = vertex_of(s);
        for (std::uint32_t a : out_[v]) out.push_back({state_of(arcs_[a].to), a});
    }

    std::optional<OperatorId> inverse_operator(OperatorId op) const override {
        if (op >= arcs_.size()) throw ArgumentError("unknown arc id");
        return std::nullopt;
    }

    void validate_state(const PackedState &s) const override { vertex_of(s); }

    std::string describe_state(const PackedState &s) const override {
        return vertices_[vertex_of(s)].name;
    }

    std::size_t vertex_count() const { return vertices_.size(); }
    const std::string &vertex_name(std::uint32_t v) const { return vertices_[v].name; }
    Cost vertex_h(std::uint32_t v) const { return vertices_[v].h; }
    const std::vector<Arc> &arcs() const { return arcs_; }

    std::uint32_t id_of(const std::string &name) const {
        auto it = ids_.find(name);
        if (it == ids_.end()) throw ArgumentError("unknown vertex " + name);
        return it->second;
    }

    PackedState state_of(std::uint32_t v) const {
        if (v >= vertices_.size()) throw EncodingError("vertex id out of range");
        std::uint8_t buf[4] = {std::uint8_t(v), std::uint8_t(v >> 8), std::uint8_t(v >> 16),
                               std::uint8_t(v >> 24)};
        return PackedState({buf, 4});
    }

    PackedState state_of(const std::string &name) const { return state_of(id_of(name)); }

    std::uint32_t vertex_of(const PackedState &s) const {
        if (s.size() != 4) throw EncodingError("graph state must pack 4 bytes");
        std::uint32_t v = std::uint32_t(s[0]) | std::uint32_t(s[1]) << 8 |
                          std::uint32_t(s[2]) << 16 | std::uint32_t(s[3]) << 24;
        if (v >= vertices_.size()) throw EncodingError("vertex id out of range");
        return v;
    }

private:
    std::vector<Vertex> vertices_;
    std::vector<Arc> arcs_;
    std::vector<std::vector<std::uint32_t>> out_;
    std::unordered_map<std::string, std::uint32_t> ids_;
};

// Small directed worked example used across the test suite. Best-first
// expansion from S under the stored heuristic visits S, A, D, C, G before
// a 12-node store fills, leaving frontier {B, E, F, H, I, J, K}; the only
// goal path runs S, A, D, H, H1..H5, Z at cost 9.
inline std::shared_ptr<ExplicitGraphSpace> make_worked_example_graph() {
    ExplicitGraphSpace::Builder b;
    b.vertex("S", 6)
        .vertex("A", 6)
        .vertex("B", 7)
        .vertex("C", 6)
        .vertex("D", 5)
        .vertex("E", 6)
        .vertex("F", 6)
        .vertex("G", 5)
        .vertex("H", 5)
        .vertex("I", 5)
        .vertex("J", 5)
        .vertex("K", 5)
        .vertex("B1", 8)
        .vertex("E1", 6)
        .vertex("F1", 6)
        .vertex("I1", 5)
        .vertex("J1", 5)
        .vertex("K1", 5)
        .vertex("H1", 5)
        .vertex("H2", 4)
        .vertex("H3", 3)
        .vertex("H4", 2)
        .vertex("H5", 1)
        .vertex("Z", 0);
    b.arc("S", "A").arc("S", "B").arc("S", "C");
    b.arc("A", "D").arc("A", "E");
    b.arc("B", "B1");
    b.arc("C", "F").arc("C", "G");
    b.arc("D", "H").arc("D", "I");
    b.arc("E", "E1");
    b.arc("F", "F1");
    b.arc("G", "J").arc("G", "K");
    b.arc("H", "H1");
    b.arc("I", "I1");
    b.arc("J", "J1");
    b.arc("K", "K1");
    b.arc("H1", "H2");
    b.arc("H2", "H3");
    b.arc("H3", "H4");
    b.arc("H4", "H5");
    b.arc("H5", "Z");
    return b.build();
}

}  // namespace abfhs
