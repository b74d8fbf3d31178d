#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cpg/label.hpp"
#include "cpg/lazy_matrix.hpp"
#include "cpg/numeric.hpp"
#include "cpg/sparse_matrix.hpp"

namespace cpg {

struct Statement {
    std::string text;
    std::set<std::string> accesses;  // shared variables touched
    std::optional<std::pair<LabelClass, std::string>> sem_call;  // P or V + semaphore id
    bool atomic_multi = false;  // atomic statement touching >= 2 shared variables

    bool accesses_shared() const { return !accesses.empty(); }
};

struct BasicBlock {
    std::vector<Statement> statements;

    // Number of statements touching at least one shared variable.
    int numsv() const;
    bool single_sem_call() const {
        return statements.size() == 1 && statements.front().sem_call.has_value();
    }
    bool single_atomic_multi() const {
        return statements.size() == 1 && statements.front().atomic_multi;
    }
    Label label() const;
};

struct CfgEdge {
    std::uint32_t src = 0;
    std::uint32_t dst = 0;
    BasicBlock block;
};

// Control flow graph; entry is node 0.
struct Cfg {
    std::uint32_t node_count = 1;
    std::vector<CfgEdge> edges;

    std::uint32_t out_degree(std::uint32_t node) const;
    // Throws ValidationError on unreachable nodes or out-degree > 2.
    void validate() const;
};

// Produces the refined CFG: each edge touches at most one shared variable
// (single atomic multi-access statements excepted) and each semaphore call
// sits alone on its edge. New interior nodes are appended after existing
// indices; concatenating the split blocks reproduces the original block.
Cfg split_edges(const Cfg& cfg);

struct SemaphoreSpec {
    std::string id;
    std::uint32_t capacity = 1;  // 1 = binary
};

// (capacity+1)-order tridiagonal matrix: p on the superdiagonal, v on the
// subdiagonal. State index counts held permits, 0 = all free.
SparseMatrix semaphore_matrix(const SemaphoreSpec& spec);

// Adjacency matrix of a split CFG. Throws on duplicate (src, dst) edges.
SparseMatrix thread_matrix(const Cfg& rcfg);

struct ThreadModel {
    std::string name;
    Cfg rcfg;
    SparseMatrix matrix;
};

struct SemaphoreModel {
    SemaphoreSpec spec;
    SparseMatrix matrix;
};

struct SystemModel {
    std::vector<ThreadModel> threads;
    std::vector<SemaphoreModel> semaphores;
    LabelPartition partition;

    // Component orders, threads first, then semaphores. These are the
    // radices of every composite index in the system.
    std::vector<std::uint32_t> radices() const;
    BigCount potential_order() const;
};

// Builds a validated SystemModel from thread CFGs (split here) and
// semaphore specs. Shared variable names must already be resolved in the
// statements' accesses sets.
SystemModel make_system(std::vector<std::pair<std::string, Cfg>> threads,
                        std::vector<SemaphoreSpec> semaphores);

// Parses the line-oriented system description format:
//
//   shared <var>
//   semaphore <id> capacity <n>
//   thread <name>
//     node <id>
//     edge <src> -> <dst> : <stmt> (';' <stmt>)*
//
// where <stmt> is p(<sem>) | v(<sem>) |
// <id> [reads <var>,...] [writes <var>,...] [atomic].
// Variables are shared when declared or when named by two or more threads.
SystemModel parse_system(std::string_view text);

// T (.) S, or plain interleaving when the system has no semaphores.
LazyMatrix compose_program(const SystemModel& system);

}  // namespace cpg
