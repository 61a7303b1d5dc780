#pragma once

// Four-peg Towers of Hanoi. Byte i holds the peg (0..3) of disc i, disc 0
// being the smallest. Operator id = from * 3 + rank(to) where rank skips
// the source peg, giving 12 operators enumerated in (from, to) order; each
// move transfers the top disc of `from`.

#include <algorithm>
#include <vector>

#include "abfhs/state_space.hpp"

namespace abfhs {

class HanoiPatternSpace final : public PatternSpace {
public:
    HanoiPatternSpace(std::span<const int> pattern, const PackedState &goal)
        : pattern_(pattern.begin(), pattern.end()) {
        // Ascending disc order: a pattern disc can move only when no
        // earlier (smaller) pattern disc shares its peg.
        std::sort(pattern_.begin(), pattern_.end());
        table_size_ = std::size_t(1) << (2 * pattern_.size());
        goal_index_ = abstract_index(goal);
    }

    std::size_t table_size() const override { return table_size_; }
    std::size_t goal_index() const override { return goal_index_; }

    std::size_t abstract_index(const PackedState &s) const override {
        std::size_t index = 0;
        for (std::size_t i = pattern_.size(); i-- > 0;)
            index = index * 4 + s[std::size_t(pattern_[i])];
        return index;
    }

    void abstract_neighbors(std::size_t index, std::vector<std::size_t> &out) const override {
        out.clear();
        std::array<int, PackedState::kMaxBytes> peg{};
        std::size_t rest = index;
        for (std::size_t i = 0; i < pattern_.size(); ++i) {
            peg[i] = int(rest & 3);
            rest >>= 2;
        }
        // blocked[p]: a smaller pattern disc sits on peg p.
        std::array<bool, 4> blocked{};
        std::size_t radix = 1;
        for (std::size_t i = 0; i < pattern_.size(); ++i) {
            if (!blocked[std::size_t(peg[i])]) {
                for (int to = 0; to < 4; ++to) {
                    if (to == peg[i] || blocked[std::size_t(to)]) continue;
                    out.push_back(index + std::size_t(to - peg[i]) * radix);
                }
            }
            blocked[std::size_t(peg[i])] = true;
            radix *= 4;
        }
    }

private:
    std::vector<int> pattern_;
    std::size_t table_size_;
    std::size_t goal_index_;
};

class HanoiSpace final : public StateSpace {
public:
    explicit HanoiSpace(int discs) : discs_(discs) {
        if (discs < 1) throw ArgumentError("hanoi needs at least one disc");
        if (discs > int(PackedState::kMaxBytes))
            throw ArgumentError("hanoi disc count exceeds packed state capacity");
    }

    int discs() const { return discs_; }

    std::string name() const override { return "hanoi4:" + std::to_string(discs_); }
    GraphClass graph_class() const override { return GraphClass::UndirectedInvertible; }
    std::size_t packed_size() const override { return std::size_t(discs_); }
    std::size_t operator_count() const override { return 12; }

    static int op_from(OperatorId op) { return int(op) / 3; }
    static int op_to(OperatorId op) {
        int r = int(op) % 3;
        return r < op_from(op) ? r : r + 1;
    }
    static OperatorId op_of(int from, int to) {
        return OperatorId(from * 3 + (to < from ? to : to - 1));
    }

    std::string operator_name(OperatorId op) const override {
        if (op >= 12) throw ArgumentError("unknown hanoi operator");
        return "peg" + std::to_string(op_from(op)) + "to" + std::to_string(op_to(op));
    }

    void successors(const PackedState &s, std::vector<Successor> &out) const override {
        out.clear();
        if (s.size() != std::size_t(discs_)) throw EncodingError("hanoi state has wrong length");
        // top[p] = smallest disc on peg p, or discs_ if empty.
        std::array<int, 4> top = {discs_, discs_, discs_, discs_};
        for (int d = discs_ - 1; d >= 0; --d) {
            std::uint8_t p = s[std::size_t(d)];
            if (p >= 4) throw EncodingError("hanoi peg out of range");
            top[p] = d;
        }
        std::array<std::uint8_t, PackedState::kMaxBytes> buf{};
        std::memcpy(buf.data(), s.data(), s.size());
        for (OperatorId op = 0; op < 12; ++op) {
            int from = op_from(op), to = op_to(op);
            int d = top[std::size_t(from)];
            if (d == discs_ || top[std::size_t(to)] < d) continue;
            buf[std::size_t(d)] = std::uint8_t(to);
            out.push_back({PackedState({buf.data(), s.size()}), op});
            buf[std::size_t(d)] = std::uint8_t(from);
        }
    }

    std::optional<OperatorId> inverse_operator(OperatorId op) const override {
        if (op >= 12) throw ArgumentError("unknown hanoi operator");
        return op_of(op_to(op), op_from(op));
    }

    void validate_state(const PackedState &s) const override {
        if (s.size() != std::size_t(discs_)) throw EncodingError("hanoi state has wrong length");
        for (int d = 0; d < discs_; ++d)
            if (s[std::size_t(d)] >= 4) throw EncodingError("hanoi peg out of range");
    }

    std::unique_ptr<PatternSpace> make_pattern_space(std::span<const int> pattern,
                                                     const PackedState &goal) const override {
        validate_state(goal);
        if (pattern.size() > 16) throw ArgumentError("hanoi pattern is limited to 16 discs");
        std::uint64_t seen = 0;
        for (int d : pattern) {
            if (d < 0 || d >= discs_) throw ArgumentError("hanoi pattern entries out of range");
            if (seen & (std::uint64_t(1) << d)) throw ArgumentError("duplicate disc in pattern");
            seen |= std::uint64_t(1) << d;
        }
        return std::make_unique<HanoiPatternSpace>(pattern, goal);
    }

    PackedState all_on_peg(int peg) const {
        if (peg < 0 || peg > 3) throw ArgumentError("hanoi peg must be 0..3");
        std::array<std::uint8_t, PackedState::kMaxBytes> buf{};
        for (int d = 0; d < discs_; ++d) buf[std::size_t(d)] = std::uint8_t(peg);
        return PackedState({buf.data(), std::size_t(discs_)});
    }

private:
    int discs_;
};

}  // namespace abfhs
