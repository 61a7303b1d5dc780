#pragma once

// Pancake sorting puzzle: a stack of n distinct pancakes 0..n-1, byte i
// holding the pancake at position i (0 = top). Operator k reverses the
// prefix of length k + 2, so there are n - 1 operators and each is its own
// inverse.

#include <algorithm>
#include <vector>

#include "abfhs/state_space.hpp"

namespace abfhs {

class PancakePatternSpace final : public PatternSpace {
public:
    PancakePatternSpace(int n, std::span<const int> pattern, const PackedState &goal)
        : n_(n), pattern_(pattern.begin(), pattern.end()) {
        std::size_t size = 1;
        for (std::size_t i = 0; i < pattern_.size(); ++i) {
            if (size > std::numeric_limits<std::size_t>::max() / std::size_t(n_))
                throw ResourceError("pancake pattern table size overflows");
            size *= std::size_t(n_);
        }
        table_size_ = size;
        goal_index_ = abstract_index(goal);
    }

    std::size_t table_size() const override { return table_size_; }
    std::size_t goal_index() const override { return goal_index_; }

    std::size_t abstract_index(const PackedState &s) const override {
        std::array<int, PackedState::kMaxBytes> pos_of{};
        for (int i = 0; i < n_; ++i) pos_of[s[std::size_t(i)]] = i;
        std::size_t index = 0;
        for (std::size_t i = pattern_.size(); i-- > 0;)
            index = index * std::size_t(n_) + std::size_t(pos_of[std::size_t(pattern_[i])]);
        return index;
    }

    void abstract_neighbors(std::size_t index, std::vector<std::size_t> &out) const override {
        out.clear();
        std::array<int, PackedState::kMaxBytes> pos{};
        std::size_t rest = index;
        for (std::size_t i = 0; i < pattern_.size(); ++i) {
            pos[i] = int(rest % std::size_t(n_));
            rest /= std::size_t(n_);
        }
        for (int k = 2; k <= n_; ++k) {
            std::size_t neighbor = 0;
            bool moved = false;
            for (std::size_t i = pattern_.size(); i-- > 0;) {
                int p = pos[i] < k ? k - 1 - pos[i] : pos[i];
                if (p != pos[i]) moved = true;
                neighbor = neighbor * std::size_t(n_) + std::size_t(p);
            }
            if (moved) out.push_back(neighbor);
        }
    }

private:
    int n_;
    std::vector<int> pattern_;
    std::size_t table_size_;
    std::size_t goal_index_;
};

class PancakeSpace final : public StateSpace {
public:
    explicit PancakeSpace(int n) : n_(n) {
        if (n < 2) throw ArgumentError("pancake stack must hold at least 2 pancakes");
        if (n > int(PackedState::kMaxBytes))
            throw ArgumentError("pancake stack exceeds packed state capacity");
    }

    int n() const { return n_; }

    std::string name() const override { return "pancake:" + std::to_string(n_); }
    GraphClass graph_class() const override { return GraphClass::UndirectedInvertible; }
    std::size_t packed_size() const override { return std::size_t(n_); }
    std::size_t operator_count() const override { return std::size_t(n_ - 1); }

    std::string operator_name(OperatorId op) const override {
        if (op >= operator_count()) throw ArgumentError("unknown pancake operator");
        return "flip" + std::to_string(op + 2);
    }

    void successors(const PackedState &s, std::vector<Successor> &out) const override {
        out.clear();
        if (s.size() != std::size_t(n_)) throw EncodingError("pancake state has wrong length");
        std::array<std::uint8_t, PackedState::kMaxBytes> buf{};
        std::memcpy(buf.data(), s.data(), s.size());
        for (OperatorId op = 0; op + 1 < std::size_t(n_); ++op) {
            std::reverse(buf.begin(), buf.begin() + op + 2);
            out.push_back({PackedState({buf.data(), s.size()}), op});
            std::reverse(buf.begin(), buf.begin() + op + 2);
        }
    }

    std::optional<OperatorId> inverse_operator(OperatorId op) const override {
        if (op >= operator_count()) throw ArgumentError("unknown pancake operator");
        return op;  // prefix reversal is an involution
    }

    void validate_state(const PackedState &s) const override {
        if (s.size() != std::size_t(n_)) throw EncodingError("pancake state has wrong length");
        std::uint64_t seen = 0;
        for (int i = 0; i < n_; ++i) {
            std::uint8_t v = s[std::size_t(i)];
            if (v >= n_) throw EncodingError("pancake value out of range");
            if (seen & (std::uint64_t(1) << v)) throw EncodingError("duplicate pancake value");
            seen |= std::uint64_t(1) << v;
        }
    }

    std::unique_ptr<PatternSpace> make_pattern_space(std::span<const int> pattern,
                                                     const PackedState &goal) const override {
        validate_state(goal);
        if (pattern.size() > 12) throw ArgumentError("pancake pattern is limited to 12 pancakes");
        std::uint64_t seen = 0;
        for (int p : pattern) {
            if (p < 0 || p >= n_) throw ArgumentError("pancake pattern entries out of range");
            if (seen & (std::uint64_t(1) << p)) throw ArgumentError("duplicate pancake in pattern");
            seen |= std::uint64_t(1) << p;
        }
        return std::make_unique<PancakePatternSpace>(n_, pattern, goal);
    }

    PackedState canonical_goal() const {
        std::array<std::uint8_t, PackedState::kMaxBytes> buf{};
        for (int i = 0; i < n_; ++i) buf[std::size_t(i)] = std::uint8_t(i);
        return PackedState({buf.data(), std::size_t(n_)});
    }

private:
    int n_;
};

}  // namespace abfhs
