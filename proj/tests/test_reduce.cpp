#include "doctest.h"

#include <random>

#include "cpg/oracle.hpp"
#include "cpg/reduce.hpp"
#include "cpg/systems.hpp"

using namespace cpg;

namespace {

std::uint64_t dense_of_composite(const Cpg& g, BigIndex composite) {
    for (const auto& n : g.nodes)
        if (n.composite.linear() == composite) return n.dense_id;
    FAIL("composite index not present");
    return ~0ull;
}

bool has_cycle_through(const Cpg& g, NodeEdge edge) {
    // does dst reach src back?
    ReachabilityOracle reach(g);
    return reach.reaches(edge.second, edge.first);
}

}  // namespace

TEST_CASE("the all-local two-thread system sequentializes to one path") {
    const auto system = cd_system();
    const auto full = build_cpg(compose_program(system), system);
    REQUIRE(full.nodes.size() == 9);

    auto reduced = reduce_nsv(full, system.partition, {LabelChoiceHeuristic::SmallestSetFirst, true});
    CHECK(reduced.graph.nodes.size() == 5);
    CHECK(reduced.graph.edges.size() == 4);

    // the surviving edges form the path a.b.c.d
    std::map<std::uint64_t, std::pair<std::uint64_t, std::string>> step;
    for (const auto& e : reduced.graph.edges) step[e.src] = {e.dst, e.label.str()};
    std::uint64_t at = 0;
    std::vector<std::string> labels;
    while (step.count(at)) {
        labels.push_back(step[at].second);
        at = step[at].first;
    }
    CHECK(labels == std::vector<std::string>{"a", "b", "c", "d"});
}

TEST_CASE("the nine-iteration reduction trace replays step for step") {
    const auto system = cd_system();
    const auto full = build_cpg(compose_program(system), system);
    const auto reduced =
        reduce_nsv(full, system.partition, {LabelChoiceHeuristic::SmallestSetFirst, true});
    const auto& trace = reduced.trace.iterations;
    REQUIRE(trace.size() == 9);

    // nodes are addressed by their composite index in the 3x3 lattice
    const auto n = [&](BigIndex comp) { return dense_of_composite(full, comp); };
    const auto a = Label::nsv("a");
    const auto b = Label::nsv("b");
    const auto c = Label::nsv("c");
    const auto d = Label::nsv("d");

    // iteration 1: entry processed, both its edges deferred
    CHECK(trace[0].done == std::set<std::uint64_t>{n(0)});
    CHECK(trace[0].tbd.empty());
    CHECK(trace[0].tbdnsv.at(a) == std::set<NodeEdge>{{n(0), n(3)}});
    CHECK(trace[0].tbdnsv.at(c) == std::set<NodeEdge>{{n(0), n(1)}});

    // iteration 2: label a resolved, its one edge printed
    CHECK(trace[1].tbd == std::set<std::uint64_t>{n(3)});
    CHECK(trace[1].tbdnsv.count(a) == 0);
    CHECK(trace[1].tbdnsv.at(c) == std::set<NodeEdge>{{n(0), n(1)}});

    // iteration 3: the node behind edge a processed
    CHECK(trace[2].done == std::set<std::uint64_t>{n(0), n(3)});
    CHECK(trace[2].tbdnsv.at(c) == std::set<NodeEdge>{{n(0), n(1)}, {n(3), n(4)}});
    CHECK(trace[2].tbdnsv.at(b) == std::set<NodeEdge>{{n(3), n(6)}});

    // iteration 4: label b chosen over the larger c set
    CHECK(trace[3].tbd == std::set<std::uint64_t>{n(6)});
    CHECK(trace[3].tbdnsv.count(b) == 0);

    // iteration 5: node 7 processed, third c edge deferred
    CHECK(trace[4].done == std::set<std::uint64_t>{n(0), n(3), n(6)});
    CHECK(trace[4].tbdnsv.at(c) ==
          std::set<NodeEdge>{{n(0), n(1)}, {n(3), n(4)}, {n(6), n(7)}});

    // iteration 6: the (7->8) edge covers all done nodes, the rest is cut
    // and parked together with the current done set
    CHECK(trace[5].tbd == std::set<std::uint64_t>{n(7)});
    CHECK(trace[5].tbdnsv.count(c) == 0);
    REQUIRE(trace[5].reconsider.size() == 1);
    CHECK(trace[5].reconsider[0].first == std::set<std::uint64_t>{n(0), n(3), n(6)});
    CHECK(trace[5].reconsider[0].second == std::set<NodeEdge>{{n(0), n(1)}, {n(3), n(4)}});

    // iteration 7: one d edge deferred
    CHECK(trace[6].done == std::set<std::uint64_t>{n(0), n(3), n(6), n(7)});
    CHECK(trace[6].tbdnsv.at(d) == std::set<NodeEdge>{{n(7), n(8)}});

    // iteration 8: d resolved
    CHECK(trace[7].tbd == std::set<std::uint64_t>{n(8)});
    CHECK(trace[7].tbdnsv.count(d) == 0);

    // iteration 9: final node printed, everything drained
    CHECK(trace[8].done == std::set<std::uint64_t>{n(0), n(3), n(6), n(7), n(8)});
    CHECK(trace[8].tbd.empty());
    CHECK(trace[8].tbdnsv.empty());

    // pending and processed sets never overlap
    for (const auto& it : trace)
        for (const auto node : it.tbd) CHECK(it.done.count(node) == 0);
}

TEST_CASE("a loops survive reduction when eliminating them would break cycles") {
    const auto system = ef_system();
    const auto full = build_cpg(compose_program(system), system);
    CHECK(full.nodes.size() == 8);
    CHECK(full.edges.size() == 12);

    const auto result =
        reduce_nsv(full, system.partition, {LabelChoiceHeuristic::SmallestSetFirst, true});
    const auto& reduced = result.graph;

    // one a edge is eliminated first and parked; the edge closing the loop
    // reaches back into the parked done set and revives it
    const auto n = [&](BigIndex comp) { return dense_of_composite(full, comp); };
    const auto& tr = result.trace.iterations;
    REQUIRE(tr.size() == 10);
    const auto a_label = Label::nsv("a");
    REQUIRE(tr[2].reconsider.size() == 1);
    CHECK(tr[2].reconsider[0].first == std::set<std::uint64_t>{n(0), n(2)});
    CHECK(tr[2].reconsider[0].second == std::set<NodeEdge>{{n(0), n(4)}});
    CHECK(tr[2].tbdnsv.count(a_label) == 0);
    CHECK(tr[5].reconsider.empty());  // the v edge back restored the decision
    CHECK(tr[5].tbdnsv.at(a_label) == std::set<NodeEdge>{{n(0), n(4)}});

    std::vector<CpgEdge> a_edges;
    for (const auto& e : reduced.edges)
        if (e.label == Label::nsv("a")) a_edges.push_back(e);
    REQUIRE(a_edges.size() == 2);

    // both loops are intact: each a edge lies on a cycle of the reduced graph
    for (const auto& e : a_edges) CHECK(has_cycle_through(reduced, {e.src, e.dst}));

    // every cycle of the unreduced graph has a counterpart: here the
    // reduction must keep the full edge set
    CHECK(reduced.edges.size() == 12);
    CHECK(reduced.nodes.size() == 8);
}

TEST_CASE("without NSV labels the reduction is the identity") {
    const auto system = mutex_system();  // only calls and shared steps
    const auto full = build_cpg(compose_program(system), system);
    const auto reduced = reduce_nsv(full, system.partition).graph;
    REQUIRE(reduced.nodes.size() == full.nodes.size());
    for (std::size_t i = 0; i < full.nodes.size(); ++i)
        CHECK(reduced.nodes[i].dense_id == full.nodes[i].dense_id);
    CHECK(reduced.edges.size() == full.edges.size());
}

TEST_CASE("reduction never grows the graph") {
    std::mt19937_64 rng(404);
    for (int round = 0; round < 40; ++round) {
        const auto system = random_system(rng);
        const auto full = build_cpg(compose_program(system), system);
        const auto reduced = reduce_nsv(full, system.partition).graph;
        CHECK(reduced.nodes.size() <= full.nodes.size());
        CHECK(reduced.edges.size() <= full.edges.size());
    }
}

TEST_CASE("greedy subset selection on the sequentialized lattice") {
    // path 0-a->1-b->2-c->3 plus deferred candidates mirroring iteration 6
    Cpg g;
    for (std::uint64_t i = 0; i < 9; ++i) {
        NodeInfo info;
        info.dense_id = i;
        g.nodes.push_back(info);
    }
    // unreduced reachability skeleton of the C-D lattice, 0-based composites
    const auto add = [&](std::uint64_t s, std::uint64_t t, const char* l) {
        g.edges.push_back({s, t, Label::nsv(l)});
    };
    add(0, 1, "c"); add(0, 3, "a"); add(1, 2, "d"); add(1, 4, "a"); add(2, 5, "a");
    add(3, 4, "c"); add(3, 6, "b"); add(4, 5, "d"); add(4, 7, "b"); add(5, 8, "b");
    add(6, 7, "c"); add(7, 8, "d");
    ReachabilityOracle reach(g);

    const std::set<NodeEdge> candidates{{0, 1}, {3, 4}, {6, 7}};
    const std::set<std::uint64_t> done{0, 3, 6};
    const auto subset = smallest_subset(candidates, done, reach);
    CHECK(subset == std::set<NodeEdge>{{6, 7}});
    CHECK(exact_smallest_subset(candidates, done, reach) == subset);

    // a single candidate covering everything is chosen as-is
    CHECK(smallest_subset({{6, 7}}, done, reach) == std::set<NodeEdge>{{6, 7}});
}

TEST_CASE("greedy subset needs two edges when no single edge covers") {
    // two disjoint branches from nowhere: 0 -> 1, 2 -> 3
    Cpg g;
    for (std::uint64_t i = 0; i < 4; ++i) {
        NodeInfo info;
        info.dense_id = i;
        g.nodes.push_back(info);
    }
    g.edges.push_back({0, 1, Label::nsv("x")});
    g.edges.push_back({2, 3, Label::nsv("x")});
    ReachabilityOracle reach(g);

    const std::set<NodeEdge> candidates{{0, 1}, {2, 3}};
    const std::set<std::uint64_t> done{0, 2};
    const auto subset = smallest_subset(candidates, done, reach);
    CHECK(subset == candidates);  // each edge covers half
    CHECK(exact_smallest_subset(candidates, done, reach) == subset);

    // an unreachable done node leaves no cover at all
    const auto none = smallest_subset(candidates, {0, 1, 2, 3}, reach);
    CHECK(none.empty());
}

TEST_CASE("greedy matches the exact minimum on random instances") {
    std::mt19937_64 rng(505);
    for (int round = 0; round < 40; ++round) {
        // random DAG-ish graph on 8 nodes
        Cpg g;
        for (std::uint64_t i = 0; i < 8; ++i) {
            NodeInfo info;
            info.dense_id = i;
            g.nodes.push_back(info);
        }
        std::uniform_int_distribution<std::uint64_t> node(0, 7);
        std::set<NodeEdge> seen;
        for (int e = 0; e < 10; ++e) {
            const auto s = node(rng), t = node(rng);
            if (s == t || seen.count({s, t})) continue;
            seen.insert({s, t});
            g.edges.push_back({s, t, Label::nsv("l")});
        }
        ReachabilityOracle reach(g);
        std::set<NodeEdge> candidates;
        for (int i = 0; i < 4 && !g.edges.empty(); ++i) {
            const auto& e = g.edges[node(rng) % g.edges.size()];
            candidates.insert({e.src, e.dst});
        }
        if (candidates.empty()) continue;
        const std::set<std::uint64_t> done{0, node(rng), node(rng)};
        const auto greedy = smallest_subset(candidates, done, reach);
        const auto exact = exact_smallest_subset(candidates, done, reach);
        CHECK(greedy.empty() == exact.empty());  // cover existence agrees
    }
}

TEST_CASE("label choice prefers the smallest set, then the name") {
    const auto a = Label::nsv("a");
    const auto b = Label::nsv("b");
    const auto c = Label::nsv("c");

    std::map<Label, std::set<NodeEdge>> tbdnsv;
    tbdnsv[a] = {{0, 1}};
    tbdnsv[c] = {{2, 3}};
    CHECK(choose_label(tbdnsv) == a);  // equal sizes, a wins the name tie

    tbdnsv[a].clear();
    tbdnsv[c].insert({4, 5});
    tbdnsv[b] = {{6, 7}};
    CHECK(choose_label(tbdnsv) == b);  // smallest set first

    tbdnsv[b].clear();
    CHECK(choose_label(tbdnsv) == c);  // single non-empty set

    tbdnsv[c].clear();
    CHECK_THROWS_AS(choose_label(tbdnsv), std::invalid_argument);
}

TEST_CASE("output_cpg_reduced is build followed by reduction") {
    const auto system = cd_system();
    const auto direct = output_cpg_reduced(compose_program(system), system);
    CHECK(direct.nodes.size() == 5);
    CHECK(direct.edges.size() == 4);
}
