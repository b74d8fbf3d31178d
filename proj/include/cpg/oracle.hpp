#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cpg/model.hpp"
#include "cpg/numeric.hpp"

namespace cpg {

struct Cpg;

// Explicit interpreter state: one program counter per thread, one held-permit
// count per semaphore. Maps bijectively to the composite row index.
struct ExecState {
    std::vector<std::uint32_t> pcs;
    std::vector<std::uint32_t> sems;

    auto operator<=>(const ExecState&) const = default;
};

struct OracleTransition {
    BigIndex src = 0;
    BigIndex dst = 0;
    Label label;

    auto operator<=>(const OracleTransition&) const = default;
};

struct OracleGraph {
    std::set<BigIndex> states;
    std::set<OracleTransition> transitions;
    std::vector<std::uint32_t> radices;

    std::vector<std::pair<BigIndex, Label>> successors_of(BigIndex state) const;
};

// Breadth-first execution of the product automaton under plain interleaving
// semantics: non-call edges are always enabled, a P-call needs a free
// permit, a V-call a held one. Deliberately naive.
OracleGraph explore(const SystemModel& system, std::uint64_t max_states = 10'000'000);

struct EquivalenceReport {
    bool equal = false;
    std::vector<OracleTransition> missing;       // in the oracle, not the CPG
    std::vector<OracleTransition> extra;         // in the CPG, not the oracle
    std::vector<BigIndex> missing_states;
    std::vector<BigIndex> extra_states;
};

EquivalenceReport compare_with_cpg(const OracleGraph& g, const Cpg& cpg);

// All entry-to-sink label sequences, lexicographically sorted. Throws on
// cyclic graphs or when the number of paths exceeds the limit.
std::vector<std::vector<std::string>> enumerate_maximal_paths(const OracleGraph& g,
                                                              std::size_t limit = 100000);

struct RandomSystemOptions {
    std::uint32_t max_threads = 3;
    std::uint32_t max_nodes = 5;
    std::uint32_t max_semaphores = 2;
    std::uint32_t max_capacity = 2;
};

// Entry-reachable by construction (spanning tree first, extra edges after),
// out-degree <= 2, no self loops.
SystemModel random_system(std::mt19937_64& rng, const RandomSystemOptions& opts = {});

}  // namespace cpg
