#include "cpg/oracle.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "cpg/cpg.hpp"
#include "cpg/errors.hpp"

namespace cpg {

namespace {

BigIndex state_index(const ExecState& s, std::span<const std::uint32_t> radices) {
    BigIndex v = 0;
    std::size_t i = 0;
    for (const auto pc : s.pcs) v = v * radices[i++] + pc;
    for (const auto held : s.sems) v = v * radices[i++] + held;
    return v;
}

}  // namespace

std::vector<std::pair<BigIndex, Label>> OracleGraph::successors_of(BigIndex state) const {
    std::vector<std::pair<BigIndex, Label>> out;
    auto it = transitions.lower_bound(OracleTransition{state, 0, Label()});
    for (; it != transitions.end() && it->src == state; ++it)
        out.emplace_back(it->dst, it->label);
    return out;
}

OracleGraph explore(const SystemModel& system, std::uint64_t max_states) {
    OracleGraph g;
    g.radices = system.radices();

    std::map<std::string, std::size_t> sem_index;
    for (std::size_t i = 0; i < system.semaphores.size(); ++i)
        sem_index[system.semaphores[i].spec.id] = i;

    ExecState initial;
    initial.pcs.assign(system.threads.size(), 0);
    initial.sems.assign(system.semaphores.size(), 0);

    std::deque<ExecState> frontier{initial};
    g.states.insert(state_index(initial, g.radices));
    while (!frontier.empty()) {
        const ExecState state = frontier.front();
        frontier.pop_front();
        const BigIndex src = state_index(state, g.radices);
        for (std::size_t t = 0; t < system.threads.size(); ++t) {
            const auto& matrix = system.threads[t].matrix;
            for (const auto& edge : matrix.row(state.pcs[t])) {
                ExecState next = state;
                next.pcs[t] = edge.col;
                const auto& atom = edge.label.single();
                if (atom.cls == LabelClass::P) {
                    const auto si = sem_index.at(atom.sem);
                    if (state.sems[si] >= system.semaphores[si].spec.capacity) continue;
                    ++next.sems[si];
                } else if (atom.cls == LabelClass::V) {
                    const auto si = sem_index.at(atom.sem);
                    if (state.sems[si] == 0) continue;
                    --next.sems[si];
                }
                const BigIndex dst = state_index(next, g.radices);
                g.transitions.insert({src, dst, edge.label});
                if (g.states.insert(dst).second) {
                    if (g.states.size() > max_states)
                        throw ResourceLimitError("oracle exploration exceeded " +
                                                 std::to_string(max_states) + " states");
                    frontier.push_back(std::move(next));
                }
            }
        }
    }
    return g;
}

EquivalenceReport compare_with_cpg(const OracleGraph& g, const Cpg& cpg) {
    EquivalenceReport report;

    std::set<BigIndex> cpg_states;
    for (const auto& n : cpg.nodes) cpg_states.insert(n.composite.linear());
    std::set<OracleTransition> cpg_transitions;
    for (const auto& e : cpg.edges)
        cpg_transitions.insert({cpg.nodes[e.src].composite.linear(),
                                cpg.nodes[e.dst].composite.linear(), e.label});

    std::set_difference(g.states.begin(), g.states.end(), cpg_states.begin(),
                        cpg_states.end(), std::back_inserter(report.missing_states));
    std::set_difference(cpg_states.begin(), cpg_states.end(), g.states.begin(),
                        g.states.end(), std::back_inserter(report.extra_states));
    std::set_difference(g.transitions.begin(), g.transitions.end(), cpg_transitions.begin(),
                        cpg_transitions.end(), std::back_inserter(report.missing));
    std::set_difference(cpg_transitions.begin(), cpg_transitions.end(),
                        g.transitions.begin(), g.transitions.end(),
                        std::back_inserter(report.extra));
    report.equal = report.missing.empty() && report.extra.empty() &&
                   report.missing_states.empty() && report.extra_states.empty();
    return report;
}

namespace {

void paths_dfs(const OracleGraph& g, BigIndex state, std::vector<std::string>& prefix,
               std::vector<std::vector<std::string>>& out, std::size_t limit) {
    const auto succs = g.successors_of(state);
    if (succs.empty()) {
        if (out.size() >= limit)
            throw ResourceLimitError("maximal path enumeration exceeded limit");
        out.push_back(prefix);
        return;
    }
    for (const auto& [dst, label] : succs) {
        prefix.push_back(label.str());
        paths_dfs(g, dst, prefix, out, limit);
        prefix.pop_back();
    }
}

bool has_cycle(const OracleGraph& g) {
    enum class Mark { White, Grey, Black };
    std::map<BigIndex, Mark> marks;
    struct Frame {
        BigIndex state;
        std::vector<std::pair<BigIndex, Label>> succs;
        std::size_t next = 0;
    };
    for (const auto start : g.states) {
        if (marks.count(start)) continue;
        std::vector<Frame> stack{{start, g.successors_of(start)}};
        marks[start] = Mark::Grey;
        while (!stack.empty()) {
            auto& frame = stack.back();
            if (frame.next == frame.succs.size()) {
                marks[frame.state] = Mark::Black;
                stack.pop_back();
                continue;
            }
            const auto dst = frame.succs[frame.next++].first;
            const auto it = marks.find(dst);
            if (it == marks.end()) {
                marks[dst] = Mark::Grey;
                stack.push_back({dst, g.successors_of(dst)});
            } else if (it->second == Mark::Grey) {
                return true;
            }
        }
    }
    return false;
}

}  // namespace

std::vector<std::vector<std::string>> enumerate_maximal_paths(const OracleGraph& g,
                                                              std::size_t limit) {
    if (has_cycle(g))
        throw ValidationError("maximal paths undefined on a cyclic graph");
    std::vector<std::vector<std::string>> out;
    if (g.states.empty()) return out;
    std::vector<std::string> prefix;
    paths_dfs(g, 0, prefix, out, limit);
    std::sort(out.begin(), out.end());
    return out;
}

SystemModel random_system(std::mt19937_64& rng, const RandomSystemOptions& opts) {
    auto rand_in = [&rng](std::uint32_t lo, std::uint32_t hi) {
        return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
    };

    const auto sem_count = rand_in(0, opts.max_semaphores);
    std::vector<SemaphoreSpec> sems;
    for (std::uint32_t i = 0; i < sem_count; ++i)
        sems.push_back({"s" + std::to_string(i), rand_in(1, opts.max_capacity)});

    const auto thread_count = rand_in(1, opts.max_threads);
    std::vector<std::pair<std::string, Cfg>> threads;
    int label_counter = 0;
    for (std::uint32_t t = 0; t < thread_count; ++t) {
        Cfg cfg;
        cfg.node_count = rand_in(1, opts.max_nodes);
        std::set<std::pair<std::uint32_t, std::uint32_t>> used;
        auto add_edge = [&](std::uint32_t src, std::uint32_t dst) {
            Statement stmt;
            const auto kind = sem_count > 0 ? rand_in(0, 3) : rand_in(2, 3);
            switch (kind) {
                case 0:
                    stmt.sem_call = {LabelClass::P, sems[rand_in(0, sem_count - 1)].id};
                    stmt.text = "p(" + stmt.sem_call->second + ")";
                    break;
                case 1:
                    stmt.sem_call = {LabelClass::V, sems[rand_in(0, sem_count - 1)].id};
                    stmt.text = "v(" + stmt.sem_call->second + ")";
                    break;
                case 2:
                    stmt.text = "w" + std::to_string(label_counter++);
                    stmt.accesses.insert("x");
                    break;
                default: stmt.text = "n" + std::to_string(label_counter++); break;
            }
            cfg.edges.push_back({src, dst, BasicBlock{{stmt}}});
            used.insert({src, dst});
        };
        // spanning tree keeps every node reachable; parents stay within the
        // out-degree budget
        for (std::uint32_t n = 1; n < cfg.node_count; ++n) {
            std::vector<std::uint32_t> parents;
            for (std::uint32_t p = 0; p < n; ++p)
                if (cfg.out_degree(p) < 2) parents.push_back(p);
            add_edge(parents[rand_in(0, static_cast<std::uint32_t>(parents.size()) - 1)], n);
        }
        const auto extra = rand_in(0, cfg.node_count);
        for (std::uint32_t i = 0; i < extra && cfg.node_count > 1; ++i) {
            const auto src = rand_in(0, cfg.node_count - 1);
            auto dst = rand_in(0, cfg.node_count - 1);
            if (src == dst || used.count({src, dst}) || cfg.out_degree(src) >= 2) continue;
            add_edge(src, dst);
        }
        threads.emplace_back("t" + std::to_string(t), std::move(cfg));
    }
    return make_system(std::move(threads), std::move(sems));
}

}  // namespace cpg
