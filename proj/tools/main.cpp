#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cpg/commands.hpp"

namespace {

void add_common(CLI::App* cmd, cpg::RunConfig& config, bool needs_input = true) {
    auto* input = cmd->add_option("--input,-i", config.input, "system description file");
    if (needs_input) input->required();
    cmd->add_option("--output,-o", config.output, "output file (default stdout)");
    cmd->add_option("--max-nodes", config.max_nodes, "visited-node cap")
        ->capture_default_str();
}

void add_format(CLI::App* cmd, cpg::RunConfig& config) {
    cmd->add_option("--format", [&config](const std::vector<std::string>& values) {
            if (values.front() == "dot") config.format = cpg::RunConfig::Format::Dot;
            else if (values.front() == "json") config.format = cpg::RunConfig::Format::Json;
            else return false;
            return true;
        },
        "output format: dot|json");
    cmd->add_flag("--composites", config.show_composites,
                  "show composite indices in DOT node labels");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Concurrent program graph analyzer"};
    app.require_subcommand(1);

    cpg::RunConfig config;
    using Command = cpg::RunConfig::Command;

    auto* build = app.add_subcommand("build", "build the CPG and emit it");
    add_common(build, config);
    add_format(build, config);
    build->add_flag("--reduce-nsv", config.reduce_nsv,
                    "eliminate redundant non-shared edges during output");
    build->callback([&] { config.command = Command::Build; });

    auto* stats_cmd = app.add_subcommand("stats", "build the CPG and print statistics");
    add_common(stats_cmd, config);
    stats_cmd->add_flag("--reduce-nsv", config.reduce_nsv);
    stats_cmd->callback([&] { config.command = Command::Stats; });

    auto* dot = app.add_subcommand("dot", "build the CPG and emit DOT");
    add_common(dot, config);
    add_format(dot, config);
    dot->add_flag("--reduce-nsv", config.reduce_nsv);
    dot->callback([&] { config.command = Command::Dot; });

    auto* reduce = app.add_subcommand("reduce", "build with NSV reduction and emit");
    add_common(reduce, config);
    add_format(reduce, config);
    reduce->callback([&] { config.command = Command::Reduce; });

    auto* deadlock = app.add_subcommand("deadlock", "report reachable deadlocks");
    add_common(deadlock, config);
    deadlock->callback([&] { config.command = Command::Deadlock; });

    auto* certify = app.add_subcommand("certify", "deadlock-freedom certificate");
    add_common(certify, config);
    certify->callback([&] { config.command = Command::Certify; });

    auto* oracle = app.add_subcommand("oracle-check",
                                      "compare the CPG against brute-force execution");
    add_common(oracle, config, /*needs_input=*/false);
    oracle->add_option("--random", config.random_systems, "also check n random systems");
    oracle->add_option("--seed", config.seed, "seed for random systems")
        ->capture_default_str();
    oracle->callback([&] { config.command = Command::OracleCheck; });

    auto* bench = app.add_subcommand("bench", "client/server scaling statistics");
    bench->add_option("--clients,-k", config.clients, "number of clients")->required();
    bench->add_option("--output,-o", config.output, "output file (default stdout)");
    bench->add_option("--max-nodes", config.max_nodes, "visited-node cap");
    bench->callback([&] { config.command = Command::Bench; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cpg::kExitInputError;
    }

    return cpg::run_command(config, std::cout, std::cerr);
}
