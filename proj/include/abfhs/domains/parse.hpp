#pragma once

// Text format for problem instances. Every file opens with `domain: <tag>`
// followed by domain-specific fields; `#` lines and blank lines are
// skipped. serialize_instance emits the canonical spelling, so
// parse -> serialize is byte-stable.
//
//   domain: tile          domain: hanoi4      domain: pancake
//   width: 3              discs: 5            n: 8
//   height: 3             start: 0            stack: 3 1 0 2 7 6 5 4
//   tiles: 1 2 5 ...      goal: 3
//
//   domain: graph
//   vertex S h=6
//   edge S A
//   start S
//   goal Z
//
// tile and pancake accept an optional `goal:` arrangement; hanoi start and
// goal accept one peg for all discs or one peg per disc.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "abfhs/domains/explicit_graph.hpp"
#include "abfhs/domains/hanoi.hpp"
#include "abfhs/domains/pancake.hpp"
#include "abfhs/domains/tile.hpp"
#include "abfhs/state_space.hpp"

namespace abfhs {

struct ParsedInstance {
    std::string domain;
    std::shared_ptr<StateSpace> space;
    PackedState start;
    PackedState goal_state;
    GoalSpec goal;
};

namespace detail {

struct Line {
    int number;
    std::string text;
};

inline std::vector<std::string> split_ws(const std::string &s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

inline std::vector<Line> content_lines(const std::string &text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::size_t i = line.find_first_not_of(" \t\r");
        if (i == std::string::npos) continue;
        std::size_t j = line.find_last_not_of(" \t\r");
        std::string body = line.substr(i, j - i + 1);
        if (body[0] == '#') continue;
        out.push_back({number, body});
    }
    return out;
}

// "key: v1 v2 ..." -> values; throws unless the line has the wanted key.
inline std::vector<long> int_field(const Line &line, const std::string &key) {
    const std::string prefix = key + ":";
    if (line.text.rfind(prefix, 0) != 0)
        throw ParseError("expected `" + key + ":`", line.number);
    auto toks = split_ws(line.text.substr(prefix.size()));
    std::vector<long> out;
    for (const auto &t : toks) {
        try {
            std::size_t used = 0;
            long v = std::stol(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
            out.push_back(v);
        } catch (const std::exception &) {
            throw ParseError("bad integer `" + t + "` in " + key, line.number);
        }
    }
    if (out.empty()) throw ParseError(key + " needs at least one value", line.number);
    return out;
}

inline PackedState bytes_state(const std::vector<long> &vals, int line) {
    std::array<std::uint8_t, PackedState::kMaxBytes> buf{};
    if (vals.size() > PackedState::kMaxBytes) throw ParseError("too many values", line);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] < 0 || vals[i] > 255) throw ParseError("value out of byte range", line);
        buf[i] = std::uint8_t(vals[i]);
    }
    return PackedState({buf.data(), vals.size()});
}

inline PackedState hanoi_arrangement(const HanoiSpace &space, const std::vector<long> &vals,
                                     int line) {
    if (vals.size() == 1) {
        if (vals[0] < 0 || vals[0] > 3) throw ParseError("peg must be 0..3", line);
        return space.all_on_peg(int(vals[0]));
    }
    if (vals.size() != std::size_t(space.discs()))
        throw ParseError("expected one peg or one peg per disc", line);
    return bytes_state(vals, line);
}

}  // namespace detail

inline ParsedInstance parse_instance(const std::string &text) {
    auto lines = detail::content_lines(text);
    if (lines.empty()) throw ParseError("empty instance", 1);
    auto head = detail::split_ws(lines[0].text);
    if (head.size() != 2 || head[0] != "domain:")
        throw ParseError("instance must start with `domain: <tag>`", lines[0].number);
    const std::string &tag = head[1];
    std::size_t at = 1;
    auto need = [&](const char *what) -> const detail::Line & {
        if (at >= lines.size())
            throw ParseError(std::string("missing ") + what, lines.back().number);
        return lines[at++];
    };

    ParsedInstance inst;
    inst.domain = tag;
    if (tag == "tile") {
        long w = detail::int_field(need("width"), "width").at(0);
        long h = detail::int_field(need("height"), "height").at(0);
        auto space = std::make_shared<TileSpace>(int(w), int(h));
        const auto &tiles_line = need("tiles");
        inst.start = detail::bytes_state(detail::int_field(tiles_line, "tiles"), tiles_line.number);
        inst.goal_state = space->canonical_goal();
        if (at < lines.size()) {
            const auto &g = lines[at++];
            inst.goal_state = detail::bytes_state(detail::int_field(g, "goal"), g.number);
        }
        space->validate_state(inst.start);
        space->validate_state(inst.goal_state);
        inst.space = space;
    } else if (tag == "hanoi4") {
        long discs = detail::int_field(need("discs"), "discs").at(0);
        auto space = std::make_shared<HanoiSpace>(int(discs));
        const auto &s = need("start");
        inst.start = detail::hanoi_arrangement(*space, detail::int_field(s, "start"), s.number);
        const auto &g = need("goal");
        inst.goal_state = detail::hanoi_arrangement(*space, detail::int_field(g, "goal"), g.number);
        space->validate_state(inst.start);
        space->validate_state(inst.goal_state);
        inst.space = space;
    } else if (tag == "pancake") {
        long n = detail::int_field(need("n"), "n").at(0);
        auto space = std::make_shared<PancakeSpace>(int(n));
        const auto &s = need("stack");
        inst.start = detail::bytes_state(detail::int_field(s, "stack"), s.number);
        inst.goal_state = space->canonical_goal();
        if (at < lines.size()) {
            const auto &g = lines[at++];
            inst.goal_state = detail::bytes_state(detail::int_field(g, "goal"), g.number);
        }
        space->validate_state(inst.start);
        space->validate_state(inst.goal_state);
        inst.space = space;
    } else if (tag == "graph") {
        ExplicitGraphSpace::Builder b;
        std::string start_name, goal_name;
        int start_line = 0;
        for (; at < lines.size(); ++at) {
            const auto &line = lines[at];
            auto toks = detail::split_ws(line.text);
            try {
                if (toks[0] == "vertex") {
                    if (toks.size() != 3 || toks[2].rfind("h=", 0) != 0)
                        throw ParseError("expected `vertex <name> h=<int>`", line.number);
                    b.vertex(toks[1], Cost(std::stoul(toks[2].substr(2))));
                } else if (toks[0] == "edge") {
                    if (toks.size() != 3) throw ParseError("expected `edge <from> <to>`", line.number);
                    b.arc(toks[1], toks[2]);
                } else if (toks[0] == "start") {
                    if (toks.size() != 2) throw ParseError("expected `start <name>`", line.number);
                    start_name = toks[1];
                    start_line = line.number;
                } else if (toks[0] == "goal") {
                    if (toks.size() != 2) throw ParseError("expected `goal <name>`", line.number);
                    goal_name = toks[1];
                } else {
                    throw ParseError("unknown graph directive `" + toks[0] + "`", line.number);
                }
            } catch (const ParseError &) {
                throw;
            } catch (const std::exception &e) {
                throw ParseError(e.what(), line.number);
            }
        }
        if (start_name.empty() || goal_name.empty())
            throw ParseError("graph instance needs start and goal lines", lines.back().number);
        auto space = b.build();
        try {
            inst.start = space->state_of(start_name);
            inst.goal_state = space->state_of(goal_name);
        } catch (const std::exception &e) {
            throw ParseError(e.what(), start_line);
        }
        inst.space = space;
    } else {
        throw ParseError("unknown domain `" + tag + "`", lines[0].number);
    }
    if (at < lines.size() && tag != "graph")
        throw ParseError("unexpected trailing line", lines[at].number);
    inst.goal = GoalSpec::single(inst.goal_state);
    return inst;
}

inline ParsedInstance parse_instance_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("cannot open instance file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

inline std::string serialize_instance(const ParsedInstance &inst) {
    std::ostringstream out;
    auto values = [](const PackedState &s) {
        std::string t;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (i) t += ' ';
            t += std::to_string(int(s[i]));
        }
        return t;
    };
    out << "domain: " << inst.domain << "\n";
    if (inst.domain == "tile") {
        auto space = std::dynamic_pointer_cast<TileSpace>(inst.space);
        out << "width: " << space->width() << "\n";
        out << "height: " << space->height() << "\n";
        out << "tiles: " << values(inst.start) << "\n";
        if (!(inst.goal_state == space->canonical_goal()))
            out << "goal: " << values(inst.goal_state) << "\n";
    } else if (inst.domain == "hanoi4") {
        auto space = std::dynamic_pointer_cast<HanoiSpace>(inst.space);
        auto peg_field = [&](const PackedState &s) {
            for (int p = 0; p < 4; ++p)
                if (s == space->all_on_peg(p)) return std::to_string(p);
            return values(s);
        };
        out << "discs: " << space->discs() << "\n";
        out << "start: " << peg_field(inst.start) << "\n";
        out << "goal: " << peg_field(inst.goal_state) << "\n";
    } else if (inst.domain == "pancake") {
        auto space = std::dynamic_pointer_cast<PancakeSpace>(inst.space);
        out << "n: " << space->n() << "\n";
        out << "stack: " << values(inst.start) << "\n";
        if (!(inst.goal_state == space->canonical_goal()))
            out << "goal: " << values(inst.goal_state) << "\n";
    } else if (inst.domain == "graph") {
        auto space = std::dynamic_pointer_cast<ExplicitGraphSpace>(inst.space);
        for (std::uint32_t v = 0; v < space->vertex_count(); ++v)
            out << "vertex " << space->vertex_name(v) << " h=" << space->vertex_h(v) << "\n";
        for (const auto &a : space->arcs())
            out << "edge " << space->vertex_name(a.from) << " " << space->vertex_name(a.to) << "\n";
        out << "start " << space->vertex_name(space->vertex_of(inst.start)) << "\n";
        out << "goal " << space->vertex_name(space->vertex_of(inst.goal_state)) << "\n";
    } else {
        throw ArgumentError("unknown domain `" + inst.domain + "`");
    }
    return out.str();
}

}  // namespace abfhs
