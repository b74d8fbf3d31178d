#include "cpg/cpg.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <unordered_map>

#include "cpg/errors.hpp"

namespace cpg {

Cpg build_cpg(const LazyMatrix& program, const SystemModel& system, BuildOptions opts) {
    const auto start_time = std::chrono::steady_clock::now();
    program.reset_instrumentation();

    const auto radices = system.radices();
    Cpg cpg;
    cpg.potential_order = system.potential_order();

    std::unordered_map<BigIndex, std::uint64_t, BigIndexHash> dense_of;
    std::vector<BigIndex> level{0};
    dense_of.emplace(0, 0);
    cpg.parent_edge.push_back(std::nullopt);

    auto describe = [&](BigIndex composite) {
        NodeInfo info;
        info.composite = CompositeIndex::decompose(composite, radices);
        info.all_threads_terminal = true;
        for (std::size_t t = 0; t < system.threads.size(); ++t)
            if (!system.threads[t].matrix.row_empty(info.composite.digits[t]))
                info.all_threads_terminal = false;
        for (std::size_t s = 0; s < system.semaphores.size(); ++s)
            if (info.composite.digits[system.threads.size() + s] != 0)
                info.semaphores_at_entry = false;
        return info;
    };
    cpg.nodes.push_back(describe(0));
    cpg.nodes.back().dense_id = 0;

    while (!level.empty()) {
        std::vector<BigIndex> next_level;
        for (const auto row : level) {
            const auto src_id = dense_of.at(row);
            for (const auto& entry : program.successors(row)) {
                auto [it, inserted] = dense_of.emplace(entry.col, cpg.nodes.size());
                if (inserted) {
                    if (cpg.nodes.size() >= opts.max_nodes)
                        throw ResourceLimitError(
                            "CPG construction exceeded " + std::to_string(opts.max_nodes) +
                            " nodes (visited " + std::to_string(cpg.nodes.size()) +
                            " nodes, " + std::to_string(cpg.edges.size()) + " edges so far)");
                    auto info = describe(entry.col);
                    info.dense_id = it->second;
                    cpg.nodes.push_back(std::move(info));
                    cpg.parent_edge.push_back(CpgEdge{src_id, it->second, entry.label});
                    next_level.push_back(entry.col);
                }
                cpg.edges.push_back({src_id, it->second, entry.label});
            }
        }
        std::sort(next_level.begin(), next_level.end());
        level = std::move(next_level);
    }

    cpg.rows_evaluated = program.rows_evaluated();
    cpg.build_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start_time)
                       .count();
    return cpg;
}

namespace {

std::uint64_t id_bound(const Cpg& cpg) {
    std::uint64_t bound = 0;
    for (const auto& n : cpg.nodes) bound = std::max(bound, n.dense_id + 1);
    return bound;
}

}  // namespace

DeadlockReport detect_deadlocks(const Cpg& cpg) {
    DeadlockReport report;
    std::vector<bool> has_successor(id_bound(cpg), false);
    for (const auto& e : cpg.edges) has_successor[e.src] = true;
    // parent links exist only on graphs straight out of build_cpg; reduced
    // graphs keep the original ids but drop the chains
    const bool have_parents = cpg.parent_edge.size() == has_successor.size();

    for (const auto& node : cpg.nodes) {
        if (has_successor[node.dense_id]) continue;
        if (node.all_threads_terminal) {
            if (!node.semaphores_at_entry)
                report.leaked_semaphore_warnings.push_back(node.dense_id);
            continue;
        }
        DeadlockWitness witness;
        witness.node = node.dense_id;
        std::uint64_t cur = node.dense_id;
        if (have_parents) {
            while (cpg.parent_edge[cur]) {
                const auto& edge = *cpg.parent_edge[cur];
                witness.path_nodes.push_back(cur);
                witness.path_labels.push_back(edge.label);
                cur = edge.src;
            }
        }
        witness.path_nodes.push_back(cur);
        std::reverse(witness.path_nodes.begin(), witness.path_nodes.end());
        std::reverse(witness.path_labels.begin(), witness.path_labels.end());
        report.deadlocked.push_back(std::move(witness));
    }
    return report;
}

CpgStats stats(const Cpg& cpg, const DeadlockReport* report) {
    CpgStats s;
    s.nodes = cpg.nodes.size();
    s.edges = cpg.edges.size();
    s.potential_nodes = cpg.potential_order.str();
    s.build_ms = cpg.build_ms;
    s.deadlocks = report ? report->deadlocked.size() : 0;
    return s;
}

namespace {

std::string escape_dot(const std::string& text) {
    std::string out;
    for (const char c : text) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::string emit_dot(const Cpg& cpg, DotOptions opts, const DeadlockReport* report) {
    std::vector<bool> deadlocked(id_bound(cpg), false);
    if (report)
        for (const auto& w : report->deadlocked) deadlocked[w.node] = true;

    std::ostringstream out;
    out << "digraph cpg {\n";
    out << "  rankdir=LR;\n";
    out << "  __entry [shape=point, label=\"\"];\n";
    out << "  __entry -> n0;\n";
    for (const auto& node : cpg.nodes) {
        out << "  n" << node.dense_id << " [label=\"" << node.dense_id;
        if (opts.show_composites) out << "\\n" << node.composite.str();
        out << "\"";
        if (deadlocked[node.dense_id]) out << ", shape=doublecircle, color=red";
        else if (node.all_threads_terminal) out << ", shape=circle, peripheries=2";
        out << "];\n";
    }
    std::vector<CpgEdge> edges = cpg.edges;
    std::sort(edges.begin(), edges.end(), [](const CpgEdge& a, const CpgEdge& b) {
        return std::tuple(a.src, a.dst, a.label) < std::tuple(b.src, b.dst, b.label);
    });
    for (const auto& e : edges)
        out << "  n" << e.src << " -> n" << e.dst << " [label=\"" << escape_dot(e.label.str())
            << "\"];\n";
    out << "}\n";
    return out.str();
}

std::string stats_json(const CpgStats& s) {
    std::ostringstream out;
    out << "{\"nodes\": " << s.nodes << ", \"edges\": " << s.edges
        << ", \"potential_nodes\": \"" << s.potential_nodes << "\", \"build_ms\": " << s.build_ms
        << ", \"deadlocks\": " << s.deadlocks << "}";
    return out.str();
}

}  // namespace cpg
