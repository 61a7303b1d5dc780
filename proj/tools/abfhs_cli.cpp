// Command-line front end: solve one instance, run a benchmark suite,
// generate seeded instance sets, or run the uninformed-BFS reference
// solver. Exit codes: 0 solved/ok, 2 budget exceeded, 3 unsolvable,
// 1 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>

#include "abfhs/bench.hpp"

#if __has_include(<sys/utsname.h>)
#include <sys/utsname.h>
#endif

namespace {

std::string host_description() {
#if __has_include(<sys/utsname.h>)
    utsname u{};
    if (uname(&u) == 0)
        return std::string(u.sysname) + " " + u.release + " " + u.machine;
#endif
    return "unknown";
}

nlohmann::json row_json(const abfhs::SolveOutcome &outcome) {
    const abfhs::ResultRow &row = outcome.row;
    nlohmann::json j{
        {"instance", row.instance},
        {"algorithm", row.algorithm},
        {"peak_stored", row.peak_stored},
        {"total_generated", row.total_generated},
        {"prev_iterations", row.prev_iterations},
        {"last_iteration", row.last_iteration},
        {"reconstruction", row.reconstruction},
        {"expansions", row.expansions},
        {"time_s", row.wall_time_seconds},
        {"pdb_build_s", row.pdb_build_seconds},
        {"cost", row.cost ? nlohmann::json(*row.cost) : nlohmann::json()},
        {"status", row.status},
    };
    if (!outcome.error_message.empty()) j["error"] = outcome.error_message;
    if (!outcome.calls.empty()) {
        nlohmann::json calls = nlohmann::json::array();
        for (const abfhs::CallRecord &c : outcome.calls)
            calls.push_back({{"bound", c.bound},
                             {"min_depth", c.min_depth},
                             {"max_depth", c.max_depth},
                             {"seed_count", c.seed_count},
                             {"solved", c.solved},
                             {"next_f", c.next_f == abfhs::kInfiniteCost ? nlohmann::json()
                                                                         : nlohmann::json(c.next_f)},
                             {"generated", c.generated},
                             {"expanded", c.expanded},
                             {"peak_stored", c.peak_stored}});
        j["calls"] = std::move(calls);
    }
    return j;
}

nlohmann::json solution_json(const abfhs::SolveOutcome &outcome) {
    nlohmann::json states = nlohmann::json::array();
    for (const abfhs::PackedState &s : outcome.solution->states)
        states.push_back(outcome.space->describe_state(s));
    return states;
}

void add_request_options(CLI::App *cmd, abfhs::RunRequest &request, std::string &algorithm,
                         std::string &format, std::string &time_mode, std::string &domain) {
    cmd->add_option("--algorithm", algorithm, "astar | bfida | hybrid-inf | hybrid-k")
        ->default_val("astar");
    cmd->add_option("--domain", domain,
                    "expected instance domain (tile | hanoi4 | pancake | graph)");
    cmd->add_option("--heuristic", request.heuristic,
                    "zero | manhattan | table | pdb:<tiles>[;<tiles>...] | auto")
        ->default_val("auto");
    cmd->add_option("--threshold", request.node_threshold,
                    "best-first-phase node cap for hybrid runs");
    cmd->add_option("--max-calls", request.max_calls, "call limit per iteration for hybrid-k");
    cmd->add_option("--node-budget", [&request](const CLI::results_t &values) {
        request.node_budget = std::stoull(values.front());
        return true;
    }, "abort after this many generated nodes");
    cmd->add_option("--time-budget", [&request](const CLI::results_t &values) {
        request.time_budget = std::stod(values.front());
        return true;
    }, "abort after this many seconds");
    cmd->add_option("--format", format, "table | csv | json")->default_val("table");
    cmd->add_option("--seed", request.seed, "seed recorded with the run");
    cmd->add_option("--time-mode", time_mode,
                    "real | zero (zero makes repeated runs byte-identical)")
        ->default_val("real");
}

void finalize_request(abfhs::RunRequest &request, const std::string &algorithm,
                      const std::string &format, const std::string &time_mode) {
    request.algorithm = abfhs::parse_algorithm(algorithm);
    request.format = abfhs::parse_format(format);
    if (time_mode == "real") request.time_mode = abfhs::TimeMode::Real;
    else if (time_mode == "zero") request.time_mode = abfhs::TimeMode::Zero;
    else throw abfhs::ArgumentError("unknown time mode `" + time_mode + "`");
}

void check_domain(const std::string &expected, const std::string &instance) {
    if (expected.empty()) return;
    abfhs::ParsedInstance inst = abfhs::load_instance(instance);
    if (inst.domain != expected)
        throw abfhs::ArgumentError("instance is domain `" + inst.domain + "`, expected `" +
                                   expected + "`");
}

int run_solve(const abfhs::RunRequest &request, bool print_solution) {
    abfhs::SolveOutcome outcome = abfhs::cli_solve(request);
    switch (request.format) {
        case abfhs::OutputFormat::Csv:
            std::cout << abfhs::csv_header() << "\n" << abfhs::format_row_csv(outcome.row) << "\n";
            break;
        case abfhs::OutputFormat::Table:
            std::cout << abfhs::format_rows_table({outcome.row});
            if (print_solution && outcome.solution) {
                std::cout << "solution:\n";
                for (const abfhs::PackedState &s : outcome.solution->states)
                    std::cout << "  " << outcome.space->describe_state(s) << "\n";
            }
            break;
        case abfhs::OutputFormat::Json: {
            nlohmann::json j{{"schema_version", 1}, {"host", host_description()}};
            j["rows"] = nlohmann::json::array({row_json(outcome)});
            if (print_solution && outcome.solution) j["solution"] = solution_json(outcome);
            std::cout << j.dump(2) << "\n";
            break;
        }
    }
    return outcome.exit_code;
}

int run_bench(const std::string &suite_path, const abfhs::RunRequest &defaults) {
    std::ifstream in(suite_path, std::ios::binary);
    if (!in) throw abfhs::ResourceError("cannot open suite file " + suite_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::vector<abfhs::RunRequest> requests = abfhs::parse_suite(buf.str(), defaults);
    abfhs::BenchOutcome bench = abfhs::cli_bench(requests);

    for (const abfhs::SolveOutcome &o : bench.outcomes)
        if (!o.error_message.empty())
            std::cerr << o.row.instance << ": " << o.error_message << "\n";

    switch (defaults.format) {
        case abfhs::OutputFormat::Csv: {
            std::cout << abfhs::csv_header() << "\n";
            for (const abfhs::SolveOutcome &o : bench.outcomes)
                std::cout << abfhs::format_row_csv(o.row) << "\n";
            std::cout << abfhs::format_summary(bench, abfhs::OutputFormat::Csv);
            break;
        }
        case abfhs::OutputFormat::Table: {
            std::vector<abfhs::ResultRow> rows;
            for (const abfhs::SolveOutcome &o : bench.outcomes) rows.push_back(o.row);
            std::cout << abfhs::format_rows_table(rows) << "\n";
            std::cout << abfhs::format_summary(bench, abfhs::OutputFormat::Table);
            break;
        }
        case abfhs::OutputFormat::Json: {
            nlohmann::json j{{"schema_version", 1}, {"host", host_description()}};
            j["rows"] = nlohmann::json::array();
            for (const abfhs::SolveOutcome &o : bench.outcomes) j["rows"].push_back(row_json(o));
            j["summary"] = nlohmann::json::object();
            for (const auto &[algorithm, wins] : bench.summary)
                j["summary"][algorithm] = {{"peak_wins", wins.peak_wins},
                                           {"time_wins", wins.time_wins}};
            std::cout << j.dump(2) << "\n";
            break;
        }
    }
    return 0;
}

int run_oracle(const std::string &instance, std::uint64_t max_stored, bool print_solution) {
    abfhs::ParsedInstance inst = abfhs::load_instance(instance);
    abfhs::OracleResult result = abfhs::oracle_bfs(*inst.space, inst.start, inst.goal, max_stored);
    std::cout << "stored " << result.stored << "\n";
    if (!result.solution) {
        std::cout << "unsolvable\n";
        return 3;
    }
    std::cout << "cost " << result.solution->cost << "\n";
    if (print_solution)
        for (const abfhs::PackedState &s : result.solution->states)
            std::cout << "  " << inst.space->describe_state(s) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"memory-bounded optimal graph search toolkit"};
    app.require_subcommand(1);

    abfhs::RunRequest request;
    std::string algorithm = "astar", format = "table", time_mode = "real", domain;
    bool print_solution = false;

    CLI::App *solve = app.add_subcommand("solve", "run one algorithm on one instance");
    solve->add_option("--instance", request.instance, "instance file or built-in id (figure1)")
        ->required();
    solve->add_option("--label", request.label, "row label (defaults to the instance id)");
    solve->add_flag("--print-solution", print_solution, "also print the solution path");
    add_request_options(solve, request, algorithm, format, time_mode, domain);

    std::string suite_path;
    CLI::App *bench = app.add_subcommand("bench", "run a suite file of solve rows");
    bench->add_option("suite", suite_path, "suite file: `run <instance> <algorithm> [key=value]`")
        ->required();
    add_request_options(bench, request, algorithm, format, time_mode, domain);

    abfhs::GenOptions gen_options;
    CLI::App *gen = app.add_subcommand("gen", "generate seeded instance files");
    gen->add_option("--domain", gen_options.domain, "tile | hanoi4 | pancake")->required();
    gen->add_option("--count", gen_options.count, "instances to generate")->default_val(1);
    gen->add_option("--seed", gen_options.seed, "generator seed")->default_val(1);
    gen->add_option("--out", gen_options.out_dir, "output directory")->default_val(".");
    gen->add_option("--width", gen_options.width, "tile board width")->default_val(3);
    gen->add_option("--height", gen_options.height, "tile board height")->default_val(3);
    gen->add_option("--walk-length", gen_options.walk_length, "tile random-walk steps")
        ->default_val(20);
    gen->add_option("--discs-min", gen_options.discs_min, "smallest hanoi size")->default_val(3);
    gen->add_option("--discs-max", gen_options.discs_max, "largest hanoi size")->default_val(6);
    gen->add_option("--n", gen_options.n, "pancake stack height")->default_val(8);
    gen->add_flag("--with-oracle", gen_options.with_oracle,
                  "also write oracle.txt with certified distances");

    std::string oracle_instance;
    std::uint64_t oracle_max_stored = 20'000'000;
    CLI::App *oracle = app.add_subcommand("oracle", "uninformed breadth-first reference solver");
    oracle->add_option("--instance", oracle_instance, "instance file or built-in id")->required();
    oracle->add_option("--max-stored", oracle_max_stored, "node cap for the oracle");
    oracle->add_flag("--print-solution", print_solution, "also print the solution path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve->parsed()) {
            finalize_request(request, algorithm, format, time_mode);
            check_domain(domain, request.instance);
            return run_solve(request, print_solution);
        }
        if (bench->parsed()) {
            finalize_request(request, algorithm, format, time_mode);
            return run_bench(suite_path, request);
        }
        if (gen->parsed()) {
            for (const std::string &path : abfhs::generate_instances(gen_options))
                std::cout << path << "\n";
            return 0;
        }
        if (oracle->parsed()) return run_oracle(oracle_instance, oracle_max_stored, print_solution);
    } catch (const abfhs::ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const abfhs::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
