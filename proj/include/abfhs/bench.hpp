#pragma once

// Benchmark harness: turns a RunRequest into an engine run and a ResultRow,
// runs suite files, and generates seeded instance sets. Table and csv
// formatting live here; the CLI tool adds json on top.
//
// Reported wall time covers the engine run only; heuristic precomputation
// (PDB construction) is timed separately. With TimeMode::Zero both times
// are reported as 0 so repeated runs produce byte-identical output.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "abfhs/astar.hpp"
#include "abfhs/bfida.hpp"
#include "abfhs/bfhs.hpp"
#include "abfhs/domains/explicit_graph.hpp"
#include "abfhs/domains/parse.hpp"
#include "abfhs/domains/tile.hpp"
#include "abfhs/heuristics.hpp"
#include "abfhs/hybrid.hpp"
#include "abfhs/oracle.hpp"

namespace abfhs {

enum class Algorithm { AStar, Bfida, HybridInf, HybridK };
enum class OutputFormat { Table, Csv, Json };
enum class TimeMode { Real, Zero };

inline Algorithm parse_algorithm(const std::string &name) {
    if (name == "astar") return Algorithm::AStar;
    if (name == "bfida") return Algorithm::Bfida;
    if (name == "hybrid-inf") return Algorithm::HybridInf;
    if (name == "hybrid-k") return Algorithm::HybridK;
    throw ArgumentError("unknown algorithm `" + name + "`");
}

inline std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::AStar: return "astar";
        case Algorithm::Bfida: return "bfida";
        case Algorithm::HybridInf: return "hybrid-inf";
        case Algorithm::HybridK: return "hybrid-k";
    }
    return "?";
}

inline OutputFormat parse_format(const std::string &name) {
    if (name == "table") return OutputFormat::Table;
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw ArgumentError("unknown output format `" + name + "`");
}

struct RunRequest {
    std::string instance;        // file path or built-in id ("figure1")
    std::string label;           // row id; defaults to `instance`
    Algorithm algorithm = Algorithm::AStar;
    std::string heuristic = "auto";
    std::uint64_t node_threshold = 1'000'000;  // hybrid phase-1 cap
    std::uint64_t max_calls = 4;               // hybrid-k group limit
    std::optional<std::uint64_t> node_budget;
    std::optional<double> time_budget;
    OutputFormat format = OutputFormat::Table;
    std::uint64_t seed = 1;
    TimeMode time_mode = TimeMode::Real;
    bool trace_seeds = false;
    bool check_expansion_uniqueness = false;
};

struct ResultRow {
    std::string instance;
    std::string algorithm;
    std::uint64_t peak_stored = 0;
    std::uint64_t total_generated = 0;
    std::uint64_t prev_iterations = 0;
    std::uint64_t last_iteration = 0;
    std::uint64_t reconstruction = 0;  // json detail; folded into total
    std::uint64_t expansions = 0;      // json detail
    double wall_time_seconds = 0.0;
    double pdb_build_seconds = 0.0;
    std::optional<Cost> cost;
    std::string status;  // solved | budget-exceeded | unsolvable | error
};

struct SolveOutcome {
    ResultRow row;
    RunStats stats;
    std::optional<Solution> solution;
    std::vector<CallRecord> calls;  // bfida / hybrid call log
    std::shared_ptr<StateSpace> space;
    int exit_code = 0;  // 0 solved, 2 budget exceeded, 3 unsolvable
    std::string error_message;  // set on status "error" in suite runs
};

inline constexpr const char *kPdbCacheEnvVar = "ABFHS_PDB_DIR";

inline PdbOptions default_pdb_options() {
    PdbOptions options;
    if (const char *dir = std::getenv(kPdbCacheEnvVar)) options.cache_dir = dir;
    return options;
}

inline ParsedInstance load_instance(const std::string &id) {
    if (id == "figure1") {
        ParsedInstance inst;
        inst.domain = "graph";
        auto graph = make_worked_example_graph();
        inst.start = graph->state_of("S");
        inst.goal_state = graph->state_of("Z");
        inst.goal = GoalSpec::single(inst.goal_state);
        inst.space = std::move(graph);
        return inst;
    }
    return parse_instance_file(id);
}

struct BuiltHeuristic {
    HeuristicPtr heuristic;
    double build_seconds = 0.0;
};

namespace detail {

inline std::vector<int> parse_int_csv(const std::string &text) {
    std::vector<int> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (item.empty()) throw ArgumentError("empty entry in pattern list");
        out.push_back(std::stoi(item));
    }
    return out;
}

}  // namespace detail

// Heuristic specs: `zero`; `manhattan` (tile); `table` (explicit graph);
// `pdb:<tiles>` with `;` separating the patterns of a max-of ensemble,
// e.g. `pdb:1,2,3;4,5,6`; `auto` picks manhattan for tile, table for
// graph, zero otherwise.
inline BuiltHeuristic make_heuristic(const std::string &spec, const ParsedInstance &inst,
                                     const PdbOptions &pdb_options = default_pdb_options()) {
    BuiltHeuristic built;
    std::string choice = spec;
    if (choice == "auto") {
        if (inst.domain == "tile") choice = "manhattan";
        else if (inst.domain == "graph") choice = "table";
        else choice = "zero";
    }
    auto start = std::chrono::steady_clock::now();
    if (choice == "zero") {
        built.heuristic = std::make_shared<ZeroHeuristic>();
    } else if (choice == "manhattan") {
        auto tile = std::dynamic_pointer_cast<const TileSpace>(inst.space);
        if (!tile) throw ArgumentError("manhattan heuristic needs a tile instance");
        built.heuristic = std::make_shared<ManhattanHeuristic>(*tile, inst.goal_state);
    } else if (choice == "table") {
        auto graph = std::dynamic_pointer_cast<const ExplicitGraphSpace>(inst.space);
        if (!graph) throw ArgumentError("table heuristic needs an explicit-graph instance");
        built.heuristic = std::make_shared<VertexTableHeuristic>(std::move(graph));
    } else if (choice.rfind("pdb:", 0) == 0) {
        std::vector<HeuristicPtr> parts;
        std::string body = choice.substr(4);
        std::istringstream in(body);
        std::string group;
        while (std::getline(in, group, ';'))
            parts.push_back(build_pdb(*inst.space, detail::parse_int_csv(group), inst.goal_state,
                                      pdb_options));
        if (body.empty())
            parts.push_back(build_pdb(*inst.space, {}, inst.goal_state, pdb_options));
        built.heuristic = parts.size() == 1 ? parts.front()
                                            : std::make_shared<MaxOfHeuristic>(std::move(parts));
    } else {
        throw ArgumentError("unknown heuristic spec `" + spec + "`");
    }
    built.build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return built;
}

inline void validate_request(const RunRequest &request) {
    if (request.node_budget && *request.node_budget == 0)
        throw ArgumentError("node budget must be positive");
    if (request.time_budget && *request.time_budget <= 0)
        throw ArgumentError("time budget must be positive");
    if (request.node_threshold == 0) throw ArgumentError("node threshold must be positive");
    if (request.algorithm == Algorithm::HybridK && request.max_calls == 0)
        throw ArgumentError("hybrid-k needs a positive call limit (use hybrid-inf instead)");
}

// cli_solve: one request, one engine run, one row.
inline SolveOutcome cli_solve(const RunRequest &request) {
    validate_request(request);
    ParsedInstance inst = load_instance(request.instance);
    BuiltHeuristic built = make_heuristic(request.heuristic, inst);

    SolveOutcome out;
    out.space = inst.space;
    out.row.instance = request.label.empty() ? request.instance : request.label;
    out.row.algorithm = to_string(request.algorithm);

    SearchBudget budget;
    budget.max_generated = request.node_budget;
    budget.max_seconds = request.time_budget;

    bool budget_hit = false;
    auto engine_start = std::chrono::steady_clock::now();
    try {
        switch (request.algorithm) {
            case Algorithm::AStar: {
                AStarResult r = run_astar(*inst.space, inst.start, inst.goal, *built.heuristic,
                                          AStarConfig{}, out.stats, budget);
                out.stats.finalize_buckets();
                if (r.status == SolveStatus::Solved) out.solution = std::move(r.solution);
                break;
            }
            case Algorithm::Bfida: {
                BfidaResult r = run_bfida(*inst.space, inst.start, inst.goal, *built.heuristic,
                                          BfidaConfig{}, out.stats, budget);
                out.calls = std::move(r.calls);
                if (r.status == SolveStatus::Solved) out.solution = std::move(r.solution);
                break;
            }
            case Algorithm::HybridInf:
            case Algorithm::HybridK: {
                HybridConfig config;
                config.node_threshold = request.node_threshold;
                config.max_calls = request.algorithm == Algorithm::HybridInf ? 0 : request.max_calls;
                config.trace_seeds = request.trace_seeds;
                config.check_expansion_uniqueness = request.check_expansion_uniqueness;
                HybridResult r = run_hybrid(*inst.space, inst.start, inst.goal, *built.heuristic,
                                            config, out.stats, budget);
                out.calls = std::move(r.calls);
                if (r.status == SolveStatus::Solved) out.solution = std::move(r.solution);
                break;
            }
        }
    } catch (const BudgetExceeded &) {
        budget_hit = true;
        out.stats.finalize_buckets();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - engine_start).count();

    if (request.time_mode == TimeMode::Real) {
        out.stats.wall_time_seconds = elapsed;
        out.row.wall_time_seconds = elapsed;
        out.row.pdb_build_seconds = built.build_seconds;
    }

    if (out.solution) {
        std::string reason;
        if (!validate_solution(*inst.space, inst.start, inst.goal, *out.solution, &reason))
            throw InternalError("engine returned an invalid solution: " + reason);
    }

    out.row.peak_stored = out.stats.peak_stored;
    out.row.total_generated = out.stats.total_generated;
    out.row.prev_iterations = out.stats.generated_prev_iterations;
    out.row.last_iteration = out.stats.generated_last_iteration;
    out.row.reconstruction = out.stats.generated_reconstruction;
    out.row.expansions = out.stats.expansions;
    out.row.cost = out.stats.solution_cost;
    if (budget_hit) {
        out.row.status = "budget-exceeded";
        out.exit_code = 2;
    } else if (out.solution) {
        out.row.status = "solved";
        out.exit_code = 0;
    } else {
        out.row.status = "unsolvable";
        out.exit_code = 3;
    }
    return out;
}

// ---- output formatting ----------------------------------------------------

namespace detail {

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace detail

inline std::string csv_header() {
    return "instance,algorithm,peak_stored,total_generated,prev_iterations,last_iteration,"
           "time_s,cost,status";
}

inline std::string format_row_csv(const ResultRow &row) {
    std::string line = row.instance + ',' + row.algorithm;
    line += ',' + std::to_string(row.peak_stored);
    line += ',' + std::to_string(row.total_generated);
    line += ',' + std::to_string(row.prev_iterations);
    line += ',' + std::to_string(row.last_iteration);
    line += ',' + detail::fixed6(row.wall_time_seconds);
    line += ',';
    line += row.cost ? std::to_string(*row.cost) : std::string("-");
    line += ',' + row.status;
    return line;
}

// Aligned text table; counts on budget-exceeded rows carry a `>` marker
// since the run stopped partway.
inline std::string format_rows_table(const std::vector<ResultRow> &rows) {
    std::vector<std::array<std::string, 9>> cells;
    cells.push_back({"instance", "algorithm", "peak_stored", "total_generated", "prev_iterations",
                     "last_iteration", "time_s", "cost", "status"});
    for (const ResultRow &row : rows) {
        std::string marker = row.status == "budget-exceeded" ? ">" : "";
        cells.push_back({row.instance, row.algorithm, marker + std::to_string(row.peak_stored),
                         marker + std::to_string(row.total_generated),
                         std::to_string(row.prev_iterations), std::to_string(row.last_iteration),
                         detail::fixed6(row.wall_time_seconds),
                         row.cost ? std::to_string(*row.cost) : "-", row.status});
    }
    std::array<std::size_t, 9> width{};
    for (const auto &r : cells)
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    std::string out;
    for (const auto &r : cells) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c) out += "  ";
            out += r[c];
            if (c + 1 < r.size()) out.append(width[c] - r[c].size(), ' ');
        }
        out += '\n';
    }
    return out;
}

// ---- suites ---------------------------------------------------------------

struct WinCounts {
    int peak_wins = 0;
    int time_wins = 0;
};

struct BenchOutcome {
    std::vector<SolveOutcome> outcomes;
    std::map<std::string, WinCounts> summary;  // per algorithm label
};

// Suite line: `run <instance> <algorithm> [key=value ...]`; keys are
// heuristic, threshold, max-calls, node-budget, time-budget, seed, label.
// `#` comments and blank lines are skipped.
inline std::vector<RunRequest> parse_suite(const std::string &text, const RunRequest &defaults) {
    std::vector<RunRequest> requests;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        auto fields = detail::split_ws(line);
        if (fields.empty() || fields[0][0] == '#') continue;
        if (fields[0] != "run" || fields.size() < 3)
            throw ParseError("expected `run <instance> <algorithm> [key=value...]`", number);
        RunRequest request = defaults;
        request.instance = fields[1];
        request.label = fields[1];
        request.algorithm = parse_algorithm(fields[2]);
        for (std::size_t i = 3; i < fields.size(); ++i) {
            auto eq = fields[i].find('=');
            if (eq == std::string::npos)
                throw ParseError("expected key=value, got `" + fields[i] + "`", number);
            std::string key = fields[i].substr(0, eq), value = fields[i].substr(eq + 1);
            try {
                if (key == "heuristic") request.heuristic = value;
                else if (key == "threshold") request.node_threshold = std::stoull(value);
                else if (key == "max-calls") request.max_calls = std::stoull(value);
                else if (key == "node-budget") request.node_budget = std::stoull(value);
                else if (key == "time-budget") request.time_budget = std::stod(value);
                else if (key == "seed") request.seed = std::stoull(value);
                else if (key == "label") request.label = value;
                else throw ParseError("unknown suite key `" + key + "`", number);
            } catch (const std::invalid_argument &) {
                throw ParseError("bad value for `" + key + "`", number);
            } catch (const std::out_of_range &) {
                throw ParseError("value out of range for `" + key + "`", number);
            }
        }
        requests.push_back(std::move(request));
    }
    return requests;
}

// cli_bench: run every row (failures recorded, run continues) and count,
// per instance solved by several algorithms, which algorithm stored the
// fewest nodes and which finished fastest; ties award every holder.
inline BenchOutcome cli_bench(const std::vector<RunRequest> &requests) {
    BenchOutcome bench;
    for (const RunRequest &request : requests) {
        try {
            bench.outcomes.push_back(cli_solve(request));
        } catch (const std::exception &e) {
            SolveOutcome failed;
            failed.row.instance = request.label.empty() ? request.instance : request.label;
            failed.row.algorithm = to_string(request.algorithm);
            failed.row.status = "error";
            failed.exit_code = 1;
            failed.error_message = e.what();
            bench.outcomes.push_back(std::move(failed));
        }
        bench.summary.try_emplace(bench.outcomes.back().row.algorithm);
    }
    std::map<std::string, std::vector<const ResultRow *>> by_instance;
    for (const SolveOutcome &o : bench.outcomes)
        if (o.row.status == "solved") by_instance[o.row.instance].push_back(&o.row);
    for (const auto &[instance, group] : by_instance) {
        if (group.size() < 2) continue;
        std::uint64_t best_peak = group.front()->peak_stored;
        double best_time = group.front()->wall_time_seconds;
        for (const ResultRow *row : group) {
            best_peak = std::min(best_peak, row->peak_stored);
            best_time = std::min(best_time, row->wall_time_seconds);
        }
        for (const ResultRow *row : group) {
            if (row->peak_stored == best_peak) ++bench.summary[row->algorithm].peak_wins;
            if (row->wall_time_seconds == best_time) ++bench.summary[row->algorithm].time_wins;
        }
    }
    return bench;
}

inline std::string format_summary(const BenchOutcome &bench, OutputFormat format) {
    std::string out;
    for (const auto &[algorithm, wins] : bench.summary) {
        if (format == OutputFormat::Csv) out += "# ";
        out += "summary " + algorithm + " peak_wins=" + std::to_string(wins.peak_wins) +
               " time_wins=" + std::to_string(wins.time_wins) + "\n";
    }
    return out;
}

// ---- instance generation ---------------------------------------------------

struct GenOptions {
    std::string domain;  // tile | hanoi4 | pancake
    int count = 1;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    int width = 3, height = 3;  // tile
    int walk_length = 20;       // tile: random-walk steps from the goal
    int discs_min = 3, discs_max = 6;  // hanoi4: one instance per size
    int n = 8;                  // pancake: stack height
    bool with_oracle = false;   // also write an oracle.txt distance manifest
    std::uint64_t oracle_max_stored = 20'000'000;
};

namespace detail {

// mt19937_64 output reduced by modulo: biased in general but reproducible
// everywhere, which is what instance generation needs.
inline std::size_t draw(std::mt19937_64 &rng, std::size_t n) { return std::size_t(rng()) % n; }

}  // namespace detail

// Produces a solvable random-walk tile instance: walk `length` moves away
// from the canonical goal, never undoing the previous move.
inline PackedState random_tile_walk(const TileSpace &space, int length, std::mt19937_64 &rng) {
    PackedState state = space.canonical_goal();
    std::optional<OperatorId> last;
    std::vector<Successor> succ;
    for (int i = 0; i < length; ++i) {
        space.successors(state, succ);
        std::vector<const Successor *> options;
        for (const auto &s : succ)
            if (!last || s.op != *space.inverse_operator(*last)) options.push_back(&s);
        const Successor *pick = options[detail::draw(rng, options.size())];
        state = pick->state;
        last = pick->op;
    }
    return state;
}

inline std::vector<std::string> generate_instances(const GenOptions &options) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    if (options.count == 0) return files;
    fs::create_directories(options.out_dir);
    std::mt19937_64 rng(options.seed);
    std::vector<ParsedInstance> instances;
    std::vector<std::string> names;

    if (options.domain == "tile") {
        auto space = std::make_shared<TileSpace>(options.width, options.height);
        for (int i = 0; i < options.count; ++i) {
            ParsedInstance inst;
            inst.domain = "tile";
            inst.space = space;
            inst.start = random_tile_walk(*space, options.walk_length, rng);
            inst.goal_state = space->canonical_goal();
            inst.goal = GoalSpec::single(inst.goal_state);
            instances.push_back(std::move(inst));
            names.push_back("tile" + std::to_string(options.width) + "x" +
                            std::to_string(options.height) + "-s" + std::to_string(options.seed) +
                            "-" + std::to_string(i) + ".inst");
        }
    } else if (options.domain == "hanoi4") {
        if (options.discs_min < 1 || options.discs_max < options.discs_min)
            throw ArgumentError("bad hanoi disc range");
        for (int d = options.discs_min; d <= options.discs_max; ++d) {
            ParsedInstance inst;
            inst.domain = "hanoi4";
            auto space = std::make_shared<HanoiSpace>(d);
            inst.start = space->all_on_peg(0);
            inst.goal_state = space->all_on_peg(3);
            inst.goal = GoalSpec::single(inst.goal_state);
            inst.space = std::move(space);
            instances.push_back(std::move(inst));
            names.push_back("hanoi4-" + std::to_string(d) + ".inst");
        }
    } else if (options.domain == "pancake") {
        auto space = std::make_shared<PancakeSpace>(options.n);
        for (int i = 0; i < options.count; ++i) {
            std::vector<std::uint8_t> stack(std::size_t(options.n));
            for (int v = 0; v < options.n; ++v) stack[std::size_t(v)] = std::uint8_t(v);
            for (std::size_t j = stack.size(); j > 1; --j)
                std::swap(stack[j - 1], stack[detail::draw(rng, j)]);
            ParsedInstance inst;
            inst.domain = "pancake";
            inst.space = space;
            inst.start = PackedState(std::span<const std::uint8_t>(stack));
            inst.goal_state = space->canonical_goal();
            inst.goal = GoalSpec::single(inst.goal_state);
            instances.push_back(std::move(inst));
            names.push_back("pancake" + std::to_string(options.n) + "-s" +
                            std::to_string(options.seed) + "-" + std::to_string(i) + ".inst");
        }
    } else {
        throw ArgumentError("unknown generator domain `" + options.domain + "`");
    }

    std::string manifest;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        fs::path path = fs::path(options.out_dir) / names[i];
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ResourceError("cannot write " + path.string());
        out << serialize_instance(instances[i]);
        files.push_back(path.string());
        if (options.with_oracle) {
            OracleResult oracle = oracle_bfs(*instances[i].space, instances[i].start,
                                             instances[i].goal, options.oracle_max_stored);
            if (!oracle.solution) throw InternalError("generated instance is unsolvable");
            manifest += names[i] + " " + std::to_string(oracle.solution->cost) + "\n";
        }
    }
    if (options.with_oracle) {
        fs::path path = fs::path(options.out_dir) / "oracle.txt";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ResourceError("cannot write " + path.string());
        out << manifest;
        files.push_back(path.string());
    }
    return files;
}

}  // namespace abfhs
