#include "cpg/reduce.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <stdexcept>

#include "cpg/errors.hpp"

namespace cpg {

ReachabilityOracle::ReachabilityOracle(const Cpg& cpg) {
    std::uint64_t bound = 0;
    for (const auto& n : cpg.nodes) bound = std::max(bound, n.dense_id + 1);
    adjacency_.resize(bound);
    for (const auto& e : cpg.edges) adjacency_[e.src].emplace_back(e.dst, e.label);
}

bool ReachabilityOracle::reaches(std::uint64_t from, std::uint64_t to) const {
    auto it = closure_.find(from);
    if (it == closure_.end()) {
        std::vector<bool> seen(adjacency_.size(), false);
        std::deque<std::uint64_t> frontier{from};
        seen[from] = true;
        while (!frontier.empty()) {
            const auto n = frontier.front();
            frontier.pop_front();
            for (const auto& [dst, label] : adjacency_[n])
                if (!seen[dst]) {
                    seen[dst] = true;
                    frontier.push_back(dst);
                }
        }
        it = closure_.emplace(from, std::move(seen)).first;
    }
    return to < it->second.size() && it->second[to];
}

std::set<NodeEdge> smallest_subset(const std::set<NodeEdge>& candidates,
                                   const std::set<std::uint64_t>& done,
                                   const ReachabilityOracle& reach) {
    if (candidates.empty()) throw std::invalid_argument("no candidate edges");
    std::map<NodeEdge, std::set<std::uint64_t>> covers;
    for (const auto& edge : candidates) {
        auto& cover = covers[edge];
        for (const auto d : done)
            if (reach.reaches(d, edge.first)) cover.insert(d);
    }
    std::set<std::uint64_t> uncovered = done;
    std::set<NodeEdge> chosen;
    while (!uncovered.empty()) {
        const NodeEdge* best = nullptr;
        std::size_t best_gain = 0;
        for (const auto& [edge, cover] : covers) {
            if (chosen.count(edge)) continue;
            std::size_t gain = 0;
            for (const auto d : cover) gain += uncovered.count(d);
            if (gain > best_gain) {  // ties keep the earlier (ascending) edge
                best_gain = gain;
                best = &edge;
            }
        }
        if (!best) return {};  // no full cover exists
        for (const auto d : covers[*best]) uncovered.erase(d);
        chosen.insert(*best);
    }
    return chosen;
}

std::set<NodeEdge> exact_smallest_subset(const std::set<NodeEdge>& candidates,
                                         const std::set<std::uint64_t>& done,
                                         const ReachabilityOracle& reach) {
    if (candidates.size() > 20)
        throw std::invalid_argument("exact cover limited to 20 candidates");
    const std::vector<NodeEdge> edges(candidates.begin(), candidates.end());
    std::set<NodeEdge> best;
    bool found = false;
    for (std::uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
        if (found && static_cast<std::size_t>(std::popcount(mask)) >= best.size()) continue;
        std::set<std::uint64_t> uncovered = done;
        std::set<NodeEdge> subset;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (!(mask & (1u << i))) continue;
            subset.insert(edges[i]);
            for (auto it = uncovered.begin(); it != uncovered.end();)
                it = reach.reaches(*it, edges[i].first) ? uncovered.erase(it) : std::next(it);
        }
        if (uncovered.empty() && (!found || subset.size() < best.size())) {
            best = std::move(subset);
            found = true;
        }
    }
    return best;
}

const Label& choose_label(const std::map<Label, std::set<NodeEdge>>& tbdnsv,
                          LabelChoiceHeuristic heuristic) {
    const Label* chosen = nullptr;
    for (const auto& [label, edges] : tbdnsv) {
        if (edges.empty()) continue;
        if (!chosen) {
            chosen = &label;
            continue;
        }
        if (heuristic == LabelChoiceHeuristic::SmallestSetFirst &&
            edges.size() < tbdnsv.at(*chosen).size())
            chosen = &label;
        // map order is ascending label, so the first hit wins name ties
    }
    if (!chosen) throw std::invalid_argument("all deferred-edge sets are empty");
    return *chosen;
}

namespace {

struct ParkedDecision {
    std::set<std::uint64_t> done_snapshot;
    std::set<NodeEdge> eliminated;
    std::set<std::uint64_t> region;  // endpoints of the eliminated edges
};

}  // namespace

ReducedCpg reduce_nsv(const Cpg& full, const LabelPartition& partition, ReduceOptions opts) {
    ReachabilityOracle reach(full);

    std::uint64_t bound = 0;
    for (const auto& n : full.nodes) bound = std::max(bound, n.dense_id + 1);
    std::vector<std::vector<std::pair<std::uint64_t, Label>>> adjacency(bound);
    for (const auto& e : full.edges) adjacency[e.src].emplace_back(e.dst, e.label);
    std::map<NodeEdge, Label> edge_label;
    for (const auto& e : full.edges) edge_label[{e.src, e.dst}] = e.label;

    std::set<std::uint64_t> tbd{0};
    std::map<Label, std::set<NodeEdge>> tbdnsv;
    std::set<std::uint64_t> done;
    std::vector<ParkedDecision> reconsider;

    std::vector<std::uint64_t> printed_nodes;
    std::set<NodeEdge> printed_edges;

    auto print_node = [&](std::uint64_t n) { printed_nodes.push_back(n); };
    auto print_edge = [&](NodeEdge e) { printed_edges.insert(e); };

    // A printed edge into a node of a parked region (or of the done set the
    // decision was justified with) revives the eliminated edges.
    auto reconsider_on = [&](std::uint64_t dst) {
        for (;;) {
            auto hit = std::find_if(reconsider.begin(), reconsider.end(),
                                    [&](const ParkedDecision& p) {
                                        return p.region.count(dst) != 0 ||
                                               p.done_snapshot.count(dst) != 0;
                                    });
            if (hit == reconsider.end()) break;
            for (const auto& edge : hit->eliminated)
                tbdnsv[edge_label.at(edge)].insert(edge);
            reconsider.erase(hit);
        }
    };

    ReducedCpg result;
    auto record_iteration = [&] {
        if (!opts.record_trace) return;
        ReductionIteration snap;
        snap.tbd = tbd;
        snap.done = done;
        for (const auto& [label, edges] : tbdnsv)
            if (!edges.empty()) snap.tbdnsv[label] = edges;
        for (const auto& parked : reconsider)
            snap.reconsider.emplace_back(parked.done_snapshot, parked.eliminated);
        result.trace.iterations.push_back(std::move(snap));
    };

    auto tbdnsv_nonempty = [&] {
        return std::any_of(tbdnsv.begin(), tbdnsv.end(),
                           [](const auto& kv) { return !kv.second.empty(); });
    };

    while (!tbd.empty() || tbdnsv_nonempty()) {
        if (!tbd.empty()) {
            const std::uint64_t n = *tbd.begin();  // smallest pending node id
            tbd.erase(tbd.begin());
            print_node(n);
            for (const auto& [dst, label] : adjacency[n]) {
                if (partition.nsv_labels().contains(label)) {
                    tbdnsv[label].insert({n, dst});
                } else {
                    if (!done.count(dst) && dst != n) tbd.insert(dst);
                    print_edge({n, dst});
                }
                reconsider_on(dst);
            }
            done.insert(n);
            for (auto it = tbd.begin(); it != tbd.end();)
                it = done.count(*it) ? tbd.erase(it) : std::next(it);
        } else {
            const Label label = choose_label(tbdnsv, opts.heuristic);
            auto& candidates = tbdnsv[label];
            std::set<NodeEdge> subset = smallest_subset(candidates, done, reach);
            if (subset.empty()) subset = candidates;  // nothing can be eliminated
            std::set<NodeEdge> eliminated;
            for (const auto& edge : candidates)
                if (!subset.count(edge)) eliminated.insert(edge);
            if (!eliminated.empty()) {
                ParkedDecision parked;
                parked.done_snapshot = done;
                for (const auto& [src, dst] : eliminated) {
                    parked.region.insert(src);
                    parked.region.insert(dst);
                }
                parked.eliminated = std::move(eliminated);
                reconsider.push_back(std::move(parked));
            }
            for (const auto& edge : subset) {
                print_edge(edge);
                if (!done.count(edge.second)) tbd.insert(edge.second);
            }
            candidates.clear();
        }
        record_iteration();
    }

    // assemble the reduced graph; ids stay as in the unreduced CPG
    std::set<std::uint64_t> kept(printed_nodes.begin(), printed_nodes.end());
    for (const auto& [src, dst] : printed_edges) {
        kept.insert(src);
        kept.insert(dst);
    }
    result.graph.potential_order = full.potential_order;
    result.graph.build_ms = full.build_ms;
    result.graph.rows_evaluated = full.rows_evaluated;
    for (const auto& n : full.nodes)
        if (kept.count(n.dense_id)) result.graph.nodes.push_back(n);
    for (const auto& [src, dst] : printed_edges)
        result.graph.edges.push_back({src, dst, edge_label.at({src, dst})});
    return result;
}

Cpg output_cpg_reduced(const LazyMatrix& program, const SystemModel& system,
                       BuildOptions build_opts, ReduceOptions reduce_opts) {
    const Cpg full = build_cpg(program, system, build_opts);
    return reduce_nsv(full, system.partition, reduce_opts).graph;
}

}  // namespace cpg
