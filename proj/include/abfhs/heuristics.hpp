#pragma once

// Admissible, consistent heuristics over packed states, plus pattern
// database construction and on-disk caching.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <vector>

#include "abfhs/domains/explicit_graph.hpp"
#include "abfhs/domains/tile.hpp"
#include "abfhs/state_space.hpp"

namespace abfhs {

class Heuristic {
public:
    virtual ~Heuristic() = default;
    virtual Cost evaluate(const PackedState &s) const = 0;
    virtual std::string describe() const = 0;
};

using HeuristicPtr = std::shared_ptr<const Heuristic>;

class ZeroHeuristic final : public Heuristic {
public:
    Cost evaluate(const PackedState &) const override { return 0; }
    std::string describe() const override { return "zero"; }
};

class ManhattanHeuristic final : public Heuristic {
public:
    ManhattanHeuristic(const TileSpace &space, const PackedState &goal)
        : cells_(space.cells()), width_(space.width()) {
        space.validate_state(goal);
        // dist_[tile * cells + cell] = taxicab distance to the tile's goal
        // cell; the blank row stays zero.
        dist_.assign(std::size_t(cells_) * std::size_t(cells_), 0);
        for (int cell = 0; cell < cells_; ++cell) {
            std::uint8_t tile = goal[std::size_t(cell)];
            if (tile == 0) continue;
            for (int c = 0; c < cells_; ++c)
                dist_[std::size_t(tile) * std::size_t(cells_) + std::size_t(c)] =
                    std::uint8_t(std::abs(c / width_ - cell / width_) +
                                 std::abs(c % width_ - cell % width_));
        }
    }

    Cost evaluate(const PackedState &s) const override {
        Cost sum = 0;
        for (int c = 0; c < cells_; ++c)
            sum += dist_[std::size_t(s[std::size_t(c)]) * std::size_t(cells_) + std::size_t(c)];
        return sum;
    }

    std::string describe() const override { return "manhattan"; }

private:
    int cells_, width_;
    std::vector<std::uint8_t> dist_;
};

class VertexTableHeuristic final : public Heuristic {
public:
    explicit VertexTableHeuristic(std::shared_ptr<const ExplicitGraphSpace> graph)
        : graph_(std::move(graph)) {}

    Cost evaluate(const PackedState &s) const override {
        return graph_->vertex_h(graph_->vertex_of(s));
    }

    std::string describe() const override { return "table"; }

private:
    std::shared_ptr<const ExplicitGraphSpace> graph_;
};

class MaxOfHeuristic final : public Heuristic {
public:
    explicit MaxOfHeuristic(std::vector<HeuristicPtr> parts) : parts_(std::move(parts)) {
        if (parts_.empty()) throw ArgumentError("max-of needs at least one heuristic");
    }

    Cost evaluate(const PackedState &s) const override {
        Cost best = 0;
        for (const auto &p : parts_) best = std::max(best, p->evaluate(s));
        return best;
    }

    std::string describe() const override {
        std::string d = "max(";
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) d += ",";
            d += parts_[i]->describe();
        }
        return d + ")";
    }

private:
    std::vector<HeuristicPtr> parts_;
};

// Dense table of abstract goal distances, 16 bits per entry. 0xFFFF marks
// an abstract state the goal cannot reach; evaluate reports it as infinite,
// which is sound because the concrete goal is then unreachable too.
class PatternDatabase final : public Heuristic {
public:
    static constexpr std::uint16_t kUnreachable = 0xFFFF;

    PatternDatabase(std::shared_ptr<const PatternSpace> pattern, std::vector<std::uint16_t> table,
                    std::string key)
        : pattern_(std::move(pattern)), table_(std::move(table)), key_(std::move(key)) {
        if (table_.size() != pattern_->table_size())
            throw InternalError("pattern table size mismatch");
    }

    Cost evaluate(const PackedState &s) const override {
        std::uint16_t d = table_[pattern_->abstract_index(s)];
        return d == kUnreachable ? kInfiniteCost : Cost(d);
    }

    std::string describe() const override { return "pdb(" + key_ + ")"; }

    const std::string &key() const { return key_; }
    const std::vector<std::uint16_t> &table() const { return table_; }

private:
    std::shared_ptr<const PatternSpace> pattern_;
    std::vector<std::uint16_t> table_;
    std::string key_;
};

struct PdbOptions {
    // Upper bound on table entries; construction refuses larger patterns.
    std::uint64_t entry_budget = 100'000'000;
    // Directory for cache files; empty disables caching.
    std::string cache_dir;
};

namespace detail {

inline std::string pdb_key(const StateSpace &space, std::span<const int> pattern,
                           const PackedState &goal) {
    std::string key = space.name() + ":goal=";
    static const char *hex = "0123456789abcdef";
    for (std::size_t i = 0; i < goal.size(); ++i) {
        key += hex[goal[i] >> 4];
        key += hex[goal[i] & 15];
    }
    key += ":pattern=";
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (i) key += ',';
        key += std::to_string(pattern[i]);
    }
    return key;
}

inline std::string pdb_cache_file(const std::string &dir, const std::string &key) {
    std::string stem = key;
    for (char &c : stem)
        if (c == ':' || c == ',') c = '_';
    return (std::filesystem::path(dir) / (stem + ".pdb")).string();
}

inline constexpr char kPdbMagic[8] = {'A', 'B', 'F', 'P', 'D', 'B', '0', '1'};

inline void save_pdb_file(const std::string &path, const std::string &key,
                          const std::vector<std::uint16_t> &table) {
    std::filesystem::create_directories(std::filesystem::path(path).parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot write pattern database cache " + path);
    out.write(kPdbMagic, sizeof kPdbMagic);
    std::uint32_t klen = std::uint32_t(key.size());
    std::uint8_t head[12] = {
        std::uint8_t(klen), std::uint8_t(klen >> 8), std::uint8_t(klen >> 16),
        std::uint8_t(klen >> 24),
    };
    std::uint64_t count = table.size();
    for (int i = 0; i < 8; ++i) head[4 + i] = std::uint8_t(count >> (8 * i));
    out.write(reinterpret_cast<const char *>(head), sizeof head);
    out.write(key.data(), std::streamsize(key.size()));
    std::vector<std::uint8_t> bytes(table.size() * 2);
    for (std::size_t i = 0; i < table.size(); ++i) {
        bytes[2 * i] = std::uint8_t(table[i]);
        bytes[2 * i + 1] = std::uint8_t(table[i] >> 8);
    }
    out.write(reinterpret_cast<const char *>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw ResourceError("short write on pattern database cache " + path);
}

// Returns an empty vector when the file is absent or does not match the
// key; a matching header with truncated payload is an error.
inline std::vector<std::uint16_t> try_load_pdb_file(const std::string &path,
                                                    const std::string &key) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    char magic[8];
    std::uint8_t head[12];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kPdbMagic, sizeof magic) != 0)
        return {};
    if (!in.read(reinterpret_cast<char *>(head), sizeof head)) return {};
    std::uint32_t klen = std::uint32_t(head[0]) | std::uint32_t(head[1]) << 8 |
                         std::uint32_t(head[2]) << 16 | std::uint32_t(head[3]) << 24;
    std::uint64_t count = 0;
    for (int i = 0; i < 8; ++i) count |= std::uint64_t(head[4 + i]) << (8 * i);
    std::string file_key(klen, '\0');
    if (!in.read(file_key.data(), std::streamsize(klen)) || file_key != key) return {};
    std::vector<std::uint8_t> bytes(std::size_t(count) * 2);
    if (!in.read(reinterpret_cast<char *>(bytes.data()), std::streamsize(bytes.size())))
        throw ResourceError("pattern database cache " + path + " is truncated");
    std::vector<std::uint16_t> table(static_cast<std::size_t>(count));
    for (std::size_t i = 0; i < table.size(); ++i)
        table[i] = std::uint16_t(bytes[2 * i]) | std::uint16_t(bytes[2 * i + 1]) << 8;
    return table;
}

}  // namespace detail

// Breadth-first sweep outward from the abstract goal. Uses the cache when
// options name a directory and the file matches; otherwise builds and, with
// a cache directory set, writes the file.
inline std::shared_ptr<PatternDatabase> build_pdb(const StateSpace &space,
                                                  std::span<const int> pattern,
                                                  const PackedState &goal,
                                                  const PdbOptions &options = {}) {
    std::shared_ptr<PatternSpace> ps = space.make_pattern_space(pattern, goal);
    if (ps->table_size() > options.entry_budget)
        throw ResourceError("pattern table needs " + std::to_string(ps->table_size()) +
                            " entries, over the budget of " +
                            std::to_string(options.entry_budget));
    std::string key = detail::pdb_key(space, pattern, goal);
    if (!options.cache_dir.empty()) {
        auto cached =
            detail::try_load_pdb_file(detail::pdb_cache_file(options.cache_dir, key), key);
        if (!cached.empty()) return std::make_shared<PatternDatabase>(ps, std::move(cached), key);
    }

    std::vector<std::uint16_t> table(ps->table_size(), PatternDatabase::kUnreachable);
    std::vector<std::size_t> frontier{ps->goal_index()}, next, neighbors;
    table[ps->goal_index()] = 0;
    std::uint16_t depth = 0;
    while (!frontier.empty()) {
        if (depth + 1 >= PatternDatabase::kUnreachable)
            throw ResourceError("pattern space deeper than a 16-bit distance");
        ++depth;
        next.clear();
        for (std::size_t idx : frontier) {
            ps->abstract_neighbors(idx, neighbors);
            for (std::size_t n : neighbors) {
                if (table[n] != PatternDatabase::kUnreachable) continue;
                table[n] = depth;
                next.push_back(n);
            }
        }
        frontier.swap(next);
    }
    if (!options.cache_dir.empty())
        detail::save_pdb_file(detail::pdb_cache_file(options.cache_dir, key), key, table);
    return std::make_shared<PatternDatabase>(ps, std::move(table), key);
}

}  // namespace abfhs
