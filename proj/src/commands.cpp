#include "cpg/commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "cpg/errors.hpp"
#include "cpg/oracle.hpp"
#include "cpg/reduce.hpp"
#include "cpg/systems.hpp"
#include "cpg/verify.hpp"

namespace cpg {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open input file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const RunConfig& config, std::ostream& out, const std::string& text) {
    if (config.output.empty()) {
        out << text;
        return;
    }
    std::ofstream file(config.output, std::ios::binary);
    if (!file) throw ValidationError("cannot open output file '" + config.output + "'");
    file << text;
}

SystemModel load_system(const RunConfig& config) {
    if (config.input.empty()) throw ValidationError("this command needs --input <file>");
    return parse_system(read_file(config.input));
}

std::string render_graph(const RunConfig& config, const Cpg& graph,
                         const DeadlockReport* report) {
    if (config.format == RunConfig::Format::Dot)
        return emit_dot(graph, {config.show_composites}, report);
    return stats_json(stats(graph, report)) + "\n";
}

int run_build(const RunConfig& config, std::ostream& out) {
    const auto system = load_system(config);
    const auto program = compose_program(system);
    const Cpg full = build_cpg(program, system, {config.max_nodes});
    // deadlock information always refers to the unreduced graph; node ids
    // survive reduction, so markings stay valid
    const auto report = detect_deadlocks(full);
    if (config.reduce_nsv || config.command == RunConfig::Command::Reduce) {
        const Cpg reduced = reduce_nsv(full, system.partition).graph;
        write_output(config, out, render_graph(config, reduced, &report));
    } else {
        write_output(config, out, render_graph(config, full, &report));
    }
    return kExitOk;
}

int run_deadlock(const RunConfig& config, std::ostream& out) {
    const auto system = load_system(config);
    const auto graph = build_cpg(compose_program(system), system, {config.max_nodes});
    const auto report = detect_deadlocks(graph);
    std::ostringstream text;
    if (report.deadlock_free()) {
        text << "no deadlocks: all " << graph.nodes.size()
             << " reachable nodes have a successor or are final\n";
    } else {
        for (const auto& w : report.deadlocked) {
            text << "deadlock at node " << w.node << " "
                 << graph.nodes[w.node].composite.str() << ", witness:";
            for (const auto& label : w.path_labels) text << " " << label.str();
            text << "\n";
        }
    }
    for (const auto n : report.leaked_semaphore_warnings)
        text << "warning: node " << n << " is final but a semaphore still holds permits\n";
    write_output(config, out, text.str());
    return report.deadlock_free() ? kExitOk : kExitDeadlock;
}

int run_certify(const RunConfig& config, std::ostream& out) {
    const auto system = load_system(config);
    write_output(config, out, certificate_json(certify_deadlock_free(system)) + "\n");
    return kExitOk;
}

int run_oracle_check(const RunConfig& config, std::ostream& out) {
    std::ostringstream text;
    bool all_equal = true;
    auto transition_list = [](const std::vector<OracleTransition>& ts) {
        std::string out = "[";
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (i) out += ", ";
            out += "\"" + to_decimal(ts[i].src) + " -> " + to_decimal(ts[i].dst) + " [" +
                   ts[i].label.str() + "]\"";
        }
        return out + "]";
    };
    auto check_one = [&](const SystemModel& system, const std::string& name) {
        const auto graph = build_cpg(compose_program(system), system, {config.max_nodes});
        const auto oracle = explore(system, config.max_nodes);
        const auto report = compare_with_cpg(oracle, graph);
        all_equal = all_equal && report.equal;
        text << "{\"system\": \"" << name << "\", \"equal\": "
             << (report.equal ? "true" : "false")
             << ", \"missing\": " << transition_list(report.missing)
             << ", \"extra\": " << transition_list(report.extra) << "}\n";
    };
    if (!config.input.empty()) check_one(parse_system(read_file(config.input)), config.input);
    if (config.random_systems > 0) {
        std::mt19937_64 rng(config.seed);
        for (std::uint32_t i = 0; i < config.random_systems; ++i)
            check_one(random_system(rng), "random[" + std::to_string(i) + "]");
    }
    if (config.input.empty() && config.random_systems == 0)
        throw ValidationError("oracle-check needs --input and/or --random <n>");
    write_output(config, out, text.str());
    return all_equal ? kExitOk : kExitInternal;
}

int run_bench(const RunConfig& config, std::ostream& out) {
    if (config.clients == 0) throw ValidationError("bench needs --clients <k>");
    const auto s = bench_client_server(config.clients, config.max_nodes);
    write_output(config, out, stats_json(s) + "\n");
    return kExitOk;
}

}  // namespace

CpgStats bench_client_server(std::uint32_t clients, std::uint64_t max_nodes) {
    const auto system = client_server_system(clients);
    const auto graph = build_cpg(compose_program(system), system, {max_nodes});
    const auto report = detect_deadlocks(graph);
    return stats(graph, &report);
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        switch (config.command) {
            case RunConfig::Command::Build:
            case RunConfig::Command::Stats:
            case RunConfig::Command::Reduce: return run_build(config, out);
            case RunConfig::Command::Dot: {
                RunConfig dot = config;
                dot.format = RunConfig::Format::Dot;
                return run_build(dot, out);
            }
            case RunConfig::Command::Deadlock: return run_deadlock(config, out);
            case RunConfig::Command::Certify: return run_certify(config, out);
            case RunConfig::Command::OracleCheck: return run_oracle_check(config, out);
            case RunConfig::Command::Bench: return run_bench(config, out);
        }
        err << "error: unknown command\n";
        return kExitInternal;
    } catch (const ResourceLimitError& e) {
        err << "error: " << e.what() << "\n";
        return kExitResourceCap;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const UnknownLabelError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace cpg
