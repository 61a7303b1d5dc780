#pragma once

// Sliding-tile puzzle on a width x height board. A state is the row-major
// list of tile values per cell, 0 marking the blank. Operators move the
// blank: 0 up, 1 down, 2 left, 3 right, enumerated in that order.

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "abfhs/state_space.hpp"

namespace abfhs {

namespace detail {

// Parity of the permutation perm (true = odd), by cycle decomposition.
inline bool permutation_parity(std::span<const int> perm) {
    std::vector<char> seen(perm.size(), 0);
    int transpositions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (std::size_t j = i; !seen[j]; j = std::size_t(perm[j])) {
            seen[j] = 1;
            ++len;
        }
        transpositions += len - 1;
    }
    return transpositions % 2 != 0;
}

}  // namespace detail

class TilePatternSpace final : public PatternSpace {
public:
    TilePatternSpace(int width, int height, std::span<const int> pattern, const PackedState &goal)
        : width_(width), height_(height), cells_(width * height),
          pattern_(pattern.begin(), pattern.end()) {
        std::size_t size = 1;
        for (std::size_t i = 0; i < pattern_.size(); ++i) {
            if (size > std::numeric_limits<std::size_t>::max() / std::size_t(cells_))
                throw ResourceError("tile pattern table size overflows");
            size *= std::size_t(cells_);
        }
        table_size_ = size;
        goal_index_ = abstract_index(goal);
    }

    std::size_t table_size() const override { return table_size_; }
    std::size_t goal_index() const override { return goal_index_; }

    std::size_t abstract_index(const PackedState &s) const override {
        // Rank = mixed radix over the pattern tiles' cell positions.
        std::array<int, PackedState::kMaxBytes> pos_of{};
        for (int c = 0; c < cells_; ++c) pos_of[s[std::size_t(c)]] = c;
        std::size_t index = 0;
        for (std::size_t i = pattern_.size(); i-- > 0;)
            index = index * std::size_t(cells_) + std::size_t(pos_of[std::size_t(pattern_[i])]);
        return index;
    }

    void abstract_neighbors(std::size_t index, std::vector<std::size_t> &out) const override {
        out.clear();
        std::array<int, PackedState::kMaxBytes> pos{};
        std::uint64_t occupied = 0;
        std::size_t rest = index;
        for (std::size_t i = 0; i < pattern_.size(); ++i) {
            pos[i] = int(rest % std::size_t(cells_));
            rest /= std::size_t(cells_);
            occupied |= std::uint64_t(1) << pos[i];
        }
        std::size_t radix = 1;
        for (std::size_t i = 0; i < pattern_.size(); ++i) {
            int r = pos[i] / width_, c = pos[i] % width_;
            const int targets[4] = {
                r > 0 ? pos[i] - width_ : -1,
                r < height_ - 1 ? pos[i] + width_ : -1,
                c > 0 ? pos[i] - 1 : -1,
                c < width_ - 1 ? pos[i] + 1 : -1,
            };
            for (int t : targets) {
                if (t < 0) continue;
                if (occupied & (std::uint64_t(1) << t)) continue;
                out.push_back(index + std::size_t(t - pos[i]) * radix);
            }
            radix *= std::size_t(cells_);
        }
    }

private:
    int width_, height_, cells_;
    std::vector<int> pattern_;
    std::size_t table_size_;
    std::size_t goal_index_;
};

class TileSpace final : public StateSpace {
public:
    TileSpace(int width, int height) : width_(width), height_(height), cells_(width * height) {
        if (width < 2 || height < 2) throw ArgumentError("tile board must be at least 2x2");
        if (cells_ > int(PackedState::kMaxBytes))
            throw ArgumentError("tile board exceeds packed state capacity");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int cells() const { return cells_; }

    std::string name() const override {
        return "tile:" + std::to_string(width_) + "x" + std::to_string(height_);
    }

    GraphClass graph_class() const override { return GraphClass::UndirectedInvertible; }
    std::size_t packed_size() const override { return std::size_t(cells_); }
    std::size_t operator_count() const override { return 4; }

    std::string operator_name(OperatorId op) const override {
        static const char *names[4] = {"up", "down", "left", "right"};
        if (op >= 4) throw ArgumentError("unknown tile operator");
        return names[op];
    }

    void successors(const PackedState &s, std::vector<Successor> &out) const override {
        out.clear();
        if (s.size() != std::size_t(cells_)) throw EncodingError("tile state has wrong length");
        int blank = -1;
        for (int c = 0; c < cells_; ++c) {
            if (s[std::size_t(c)] == 0) {
                blank = c;
                break;
            }
        }
        if (blank < 0) throw EncodingError("tile state has no blank");
        int r = blank / width_, c = blank % width_;
        const int targets[4] = {
            r > 0 ? blank - width_ : -1,
            r < height_ - 1 ? blank + width_ : -1,
            c > 0 ? blank - 1 : -1,
            c < width_ - 1 ? blank + 1 : -1,
        };
        std::array<std::uint8_t, PackedState::kMaxBytes> buf{};
        std::memcpy(buf.data(), s.data(), s.size());
        for (OperatorId op = 0; op < 4; ++op) {
            int t = targets[op];
            if (t < 0) continue;
            std::swap(buf[std::size_t(blank)], buf[std::size_t(t)]);
            out.push_back({PackedState({buf.data(), s.size()}), op});
            std::swap(buf[std::size_t(blank)], buf[std::size_t(t)]);
        }
    }

    std::optional<OperatorId> inverse_operator(OperatorId op) const override {
        if (op >= 4) throw ArgumentError("unknown tile operator");
        return op ^ 1u;  // up<->down, left<->right
    }

    void validate_state(const PackedState &s) const override {
        if (s.size() != std::size_t(cells_)) throw EncodingError("tile state has wrong length");
        std::uint64_t seen = 0;
        for (int c = 0; c < cells_; ++c) {
            std::uint8_t v = s[std::size_t(c)];
            if (v >= cells_) throw EncodingError("tile value out of range");
            if (seen & (std::uint64_t(1) << v)) throw EncodingError("duplicate tile value");
            seen |= std::uint64_t(1) << v;
        }
    }

    std::unique_ptr<PatternSpace> make_pattern_space(std::span<const int> pattern,
                                                     const PackedState &goal) const override {
        validate_state(goal);
        if (pattern.size() > 12) throw ArgumentError("tile pattern is limited to 12 tiles");
        std::uint64_t seen = 0;
        for (int t : pattern) {
            if (t < 1 || t >= cells_) throw ArgumentError("tile pattern entries must be real tiles");
            if (seen & (std::uint64_t(1) << t)) throw ArgumentError("duplicate tile in pattern");
            seen |= std::uint64_t(1) << t;
        }
        return std::make_unique<TilePatternSpace>(width_, height_, pattern, goal);
    }

    PackedState canonical_goal() const {
        std::array<std::uint8_t, PackedState::kMaxBytes> buf{};
        for (int c = 0; c < cells_; ++c) buf[std::size_t(c)] = std::uint8_t(c);
        return PackedState({buf.data(), std::size_t(cells_)});
    }

    // Reachability test: the permutation relating the two arrangements must
    // have the same parity as the taxicab distance between the blanks.
    bool solvable(const PackedState &from, const PackedState &to) const {
        validate_state(from);
        validate_state(to);
        std::array<int, PackedState::kMaxBytes> pos_to{};
        for (int c = 0; c < cells_; ++c) pos_to[to[std::size_t(c)]] = c;
        std::vector<int> perm(static_cast<std::size_t>(cells_));
        int blank_from = 0, blank_to = 0;
        for (int c = 0; c < cells_; ++c) {
            std::uint8_t v = from[std::size_t(c)];
            perm[std::size_t(c)] = pos_to[v];
            if (v == 0) blank_from = c;
            if (to[std::size_t(c)] == 0) blank_to = c;
        }
        int blank_dist = std::abs(blank_from / width_ - blank_to / width_) +
                         std::abs(blank_from % width_ - blank_to % width_);
        return detail::permutation_parity(perm) == (blank_dist % 2 != 0);
    }

private:
    int width_, height_, cells_;
};

}  // namespace abfhs
