#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "cpg/cpg.hpp"
#include "cpg/label.hpp"

namespace cpg {

// Answers "can `from` reach `to`" on the unreduced reachable graph;
// per-source result sets are computed once and memoized.
class ReachabilityOracle {
public:
    explicit ReachabilityOracle(const Cpg& cpg);

    bool reaches(std::uint64_t from, std::uint64_t to) const;

private:
    std::vector<std::vector<std::pair<std::uint64_t, Label>>> adjacency_;
    mutable std::map<std::uint64_t, std::vector<bool>> closure_;
};

using NodeEdge = std::pair<std::uint64_t, std::uint64_t>;  // (src, dst)

// Greedy set cover: universe = done, an edge (n -> i) covers the done nodes
// from which n is reachable. Empty result means no full cover exists and
// nothing may be eliminated. Ties fall to the ascending (src, dst) edge.
std::set<NodeEdge> smallest_subset(const std::set<NodeEdge>& candidates,
                                   const std::set<std::uint64_t>& done,
                                   const ReachabilityOracle& reach);

// Exhaustive minimum cover for cross-checking the greedy choice; candidate
// sets of more than 20 edges are rejected.
std::set<NodeEdge> exact_smallest_subset(const std::set<NodeEdge>& candidates,
                                         const std::set<std::uint64_t>& done,
                                         const ReachabilityOracle& reach);

enum class LabelChoiceHeuristic {
    SmallestSetFirst,   // fewest deferred edges, name breaks ties
    LexicographicName,
};

// Picks the next deferred label to resolve; requires one non-empty set.
const Label& choose_label(const std::map<Label, std::set<NodeEdge>>& tbdnsv,
                          LabelChoiceHeuristic heuristic = LabelChoiceHeuristic::SmallestSetFirst);

// Snapshot taken after each outer-loop iteration.
struct ReductionIteration {
    std::set<std::uint64_t> tbd;
    std::map<Label, std::set<NodeEdge>> tbdnsv;
    std::set<std::uint64_t> done;
    // parked eliminations: (done snapshot, eliminated edges)
    std::vector<std::pair<std::set<std::uint64_t>, std::set<NodeEdge>>> reconsider;
};

struct ReductionTrace {
    std::vector<ReductionIteration> iterations;
};

struct ReduceOptions {
    LabelChoiceHeuristic heuristic = LabelChoiceHeuristic::SmallestSetFirst;
    bool record_trace = false;
};

struct ReducedCpg {
    Cpg graph;   // nodes keep their unreduced dense ids
    ReductionTrace trace;
};

// Emits the CPG while eliminating redundant NSV-labeled edges: non-NSV
// edges print immediately, NSV edges are deferred per label; when nothing
// else is pending, a cover subset of one label's edges is printed and the
// remainder is parked for reconsideration. An edge reaching back into a
// parked decision's region restores those edges. No loop of the unreduced
// graph is broken.
ReducedCpg reduce_nsv(const Cpg& full, const LabelPartition& partition,
                      ReduceOptions opts = {});

// Convenience: build then reduce.
Cpg output_cpg_reduced(const LazyMatrix& program, const SystemModel& system,
                       BuildOptions build_opts = {}, ReduceOptions reduce_opts = {});

}  // namespace cpg
