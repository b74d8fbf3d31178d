#include "cpg/model.hpp"

#include <algorithm>
#include <map>

#include "cpg/errors.hpp"

namespace cpg {

int BasicBlock::numsv() const {
    int n = 0;
    for (const auto& s : statements) n += s.accesses_shared() ? 1 : 0;
    return n;
}

Label BasicBlock::label() const {
    if (single_sem_call()) {
        const auto& [cls, sem] = *statements.front().sem_call;
        return cls == LabelClass::P ? Label::p_call(sem) : Label::v_call(sem);
    }
    std::string name;
    bool shared = false;
    for (const auto& s : statements) {
        if (!name.empty()) name += ";";
        name += s.text;
        shared |= s.accesses_shared();
    }
    return shared ? Label::sv(name) : Label::nsv(name);
}

std::uint32_t Cfg::out_degree(std::uint32_t node) const {
    std::uint32_t d = 0;
    for (const auto& e : edges) d += e.src == node ? 1 : 0;
    return d;
}

void Cfg::validate() const {
    if (node_count == 0) throw ValidationError("CFG must have at least the entry node");
    for (const auto& e : edges) {
        if (e.src >= node_count || e.dst >= node_count)
            throw ValidationError("edge (" + std::to_string(e.src) + "->" +
                                  std::to_string(e.dst) + ") references undeclared node");
        if (e.block.statements.empty())
            throw ValidationError("edge (" + std::to_string(e.src) + "->" +
                                  std::to_string(e.dst) + ") has an empty block");
    }
    for (std::uint32_t n = 0; n < node_count; ++n)
        if (out_degree(n) > 2)
            throw ValidationError("node " + std::to_string(n) + " has out-degree > 2");
    // reachability from the entry
    std::vector<bool> seen(node_count, false);
    std::vector<std::uint32_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const auto n = stack.back();
        stack.pop_back();
        for (const auto& e : edges)
            if (e.src == n && !seen[e.dst]) {
                seen[e.dst] = true;
                stack.push_back(e.dst);
            }
    }
    for (std::uint32_t n = 0; n < node_count; ++n)
        if (!seen[n])
            throw ValidationError("node " + std::to_string(n) + " unreachable from entry");
}

namespace {

// Partitions a block into the split parts. Semaphore calls and atomic
// multi-access statements stand alone; every other part closes right after
// its shared-variable access. A run of purely local statements attaches to
// the following access when one comes, otherwise to the preceding part.
std::vector<BasicBlock> split_block(const BasicBlock& block) {
    std::vector<BasicBlock> parts;
    BasicBlock current;          // pending run; an access always flushes it
    bool prev_absorbs = false;   // last part closed on an access and may grow
    auto settle_current = [&] {
        if (current.statements.empty()) return;
        if (prev_absorbs) {
            auto& prev = parts.back().statements;
            prev.insert(prev.end(), current.statements.begin(), current.statements.end());
        } else {
            parts.push_back(std::move(current));
        }
        current = {};
    };
    for (const auto& s : block.statements) {
        if (s.sem_call || s.atomic_multi) {
            settle_current();
            parts.push_back(BasicBlock{{s}});
            prev_absorbs = false;
            continue;
        }
        current.statements.push_back(s);
        if (s.accesses_shared()) {
            parts.push_back(std::move(current));
            current = {};
            prev_absorbs = true;
        }
    }
    settle_current();
    return parts;
}

}  // namespace

Cfg split_edges(const Cfg& cfg) {
    Cfg out;
    out.node_count = cfg.node_count;
    for (const auto& edge : cfg.edges) {
        auto parts = split_block(edge.block);
        if (parts.size() <= 1) {
            out.edges.push_back(edge);
            continue;
        }
        std::uint32_t from = edge.src;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            const bool last = i + 1 == parts.size();
            const std::uint32_t to = last ? edge.dst : out.node_count++;
            out.edges.push_back({from, to, std::move(parts[i])});
            from = to;
        }
    }
    return out;
}

SparseMatrix semaphore_matrix(const SemaphoreSpec& spec) {
    if (spec.capacity == 0) throw ValidationError("semaphore capacity must be >= 1");
    std::vector<MatrixEntry> entries;
    for (std::uint32_t s = 0; s < spec.capacity; ++s) {
        entries.push_back({s, s + 1, Label::p_call(spec.id)});
        entries.push_back({s + 1, s, Label::v_call(spec.id)});
    }
    return SparseMatrix(spec.capacity + 1, std::move(entries));
}

SparseMatrix thread_matrix(const Cfg& rcfg) {
    std::vector<MatrixEntry> entries;
    entries.reserve(rcfg.edges.size());
    for (const auto& e : rcfg.edges) entries.push_back({e.src, e.dst, e.block.label()});
    // SparseMatrix rejects duplicate (src, dst) pairs
    return SparseMatrix(rcfg.node_count, std::move(entries));
}

std::vector<std::uint32_t> SystemModel::radices() const {
    std::vector<std::uint32_t> r;
    r.reserve(threads.size() + semaphores.size());
    for (const auto& t : threads) r.push_back(t.matrix.order());
    for (const auto& s : semaphores) r.push_back(s.matrix.order());
    return r;
}

BigCount SystemModel::potential_order() const {
    BigCount total(1);
    for (const auto r : radices()) total *= r;
    return total;
}

SystemModel make_system(std::vector<std::pair<std::string, Cfg>> threads,
                        std::vector<SemaphoreSpec> semaphores) {
    if (threads.empty()) throw ValidationError("system needs at least one thread");

    std::set<std::string> sem_ids;
    for (const auto& s : semaphores)
        if (!sem_ids.insert(s.id).second)
            throw ValidationError("semaphore '" + s.id + "' declared twice");

    SystemModel system;
    std::set<Label> sync, sv, nsv;
    std::set<std::string> thread_names;
    for (auto& [name, cfg] : threads) {
        if (!thread_names.insert(name).second)
            throw ValidationError("thread '" + name + "' declared twice");
        cfg.validate();
        for (const auto& e : cfg.edges)
            for (const auto& s : e.block.statements) {
                if (s.sem_call && !sem_ids.count(s.sem_call->second))
                    throw ValidationError("thread '" + name + "' calls undeclared semaphore '" +
                                          s.sem_call->second + "'");
                if (s.sem_call && !s.accesses.empty())
                    throw ValidationError("statement '" + s.text +
                                          "' is a semaphore call and cannot access variables");
                if (s.accesses.size() >= 2 && !s.atomic_multi)
                    throw ValidationError(
                        "statement '" + s.text +
                        "' accesses several shared variables; mark it atomic or split it");
            }
        Cfg rcfg = split_edges(cfg);
        auto matrix = thread_matrix(rcfg);
        for (const auto& e : matrix.entries()) {
            switch (e.label.single().cls) {
                case LabelClass::P:
                case LabelClass::V: sync.insert(e.label); break;
                case LabelClass::SV: sv.insert(e.label); break;
                case LabelClass::NSV: nsv.insert(e.label); break;
            }
        }
        system.threads.push_back({std::move(name), std::move(rcfg), std::move(matrix)});
    }
    for (auto& spec : semaphores) {
        auto matrix = semaphore_matrix(spec);
        sync.insert(Label::p_call(spec.id));
        sync.insert(Label::v_call(spec.id));
        system.semaphores.push_back({std::move(spec), std::move(matrix)});
    }
    system.partition = LabelPartition(std::move(sync), std::move(sv), std::move(nsv));
    return system;
}

LazyMatrix compose_program(const SystemModel& system) {
    std::vector<LazyMatrix> thread_ms;
    thread_ms.reserve(system.threads.size());
    for (const auto& t : system.threads) thread_ms.emplace_back(t.matrix);
    LazyMatrix t = kfold_sum(thread_ms);
    if (system.semaphores.empty()) return t;
    std::vector<LazyMatrix> sem_ms;
    sem_ms.reserve(system.semaphores.size());
    for (const auto& s : system.semaphores) sem_ms.emplace_back(s.matrix);
    return merry(t, kfold_sum(sem_ms), system.partition);
}

}  // namespace cpg
