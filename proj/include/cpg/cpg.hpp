#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpg/lazy_matrix.hpp"
#include "cpg/model.hpp"
#include "cpg/numeric.hpp"

namespace cpg {

struct NodeInfo {
    std::uint64_t dense_id = 0;
    CompositeIndex composite;            // one digit per thread, then per semaphore
    bool all_threads_terminal = false;   // every thread at a node without out-edges
    bool semaphores_at_entry = true;     // every semaphore holds no permits
};

struct CpgEdge {
    std::uint64_t src = 0;
    std::uint64_t dst = 0;
    Label label;
};

// The reachable part of the composed program matrix, with dense ids in
// first-visit BFS order (entry = 0) and provenance back to the composite
// indices of the full matrix.
struct Cpg {
    std::vector<NodeInfo> nodes;
    std::vector<CpgEdge> edges;
    // BFS parent links; parent_edge[id] is absent only for the entry.
    std::vector<std::optional<CpgEdge>> parent_edge;
    BigCount potential_order;
    double build_ms = 0.0;
    std::uint64_t rows_evaluated = 0;
};

struct BuildOptions {
    std::uint64_t max_nodes = 10'000'000;
};

// Explores P = compose_program(system) from composite index 0. Only
// reachable rows are ever evaluated; the frontier is expanded level by
// level in ascending composite order, so two builds of the same system are
// identical. Throws ResourceLimitError beyond max_nodes visited nodes.
Cpg build_cpg(const LazyMatrix& program, const SystemModel& system, BuildOptions opts = {});

struct DeadlockWitness {
    std::uint64_t node = 0;
    std::vector<std::uint64_t> path_nodes;   // entry ... node
    std::vector<Label> path_labels;          // one per step
};

struct DeadlockReport {
    std::vector<DeadlockWitness> deadlocked;
    // Nodes where all threads finished but a semaphore still holds permits.
    std::vector<std::uint64_t> leaked_semaphore_warnings;

    bool deadlock_free() const { return deadlocked.empty(); }
};

// Reachable nodes without successors that are not final. A clean report is
// conclusive; reported nodes may still be impossible under data conditions
// the model does not see.
DeadlockReport detect_deadlocks(const Cpg& cpg);

struct CpgStats {
    std::uint64_t nodes = 0;
    std::uint64_t edges = 0;
    std::string potential_nodes;
    double build_ms = 0.0;
    std::uint64_t deadlocks = 0;
};

CpgStats stats(const Cpg& cpg, const DeadlockReport* report = nullptr);
std::string stats_json(const CpgStats& s);

struct DotOptions {
    bool show_composites = false;
};

// Deterministic DOT rendering; deadlocked nodes are double-circled when a
// report is supplied.
std::string emit_dot(const Cpg& cpg, DotOptions opts = {},
                     const DeadlockReport* report = nullptr);

}  // namespace cpg
