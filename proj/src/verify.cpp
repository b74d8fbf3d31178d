#include "cpg/verify.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <sstream>

#include "cpg/errors.hpp"

namespace cpg {

PvSets pv_sets(const SparseMatrix& m) {
    PvSets sets;
    for (const auto& e : m.entries()) {
        if (!e.label.is_sync_atom()) continue;
        const auto& atom = e.label.single();
        if (atom.cls == LabelClass::P)
            sets.p_set.insert({e.row, e.col, atom.sem});
        else
            sets.v_set.insert({e.col, e.row, atom.sem});
    }
    return sets;
}

bool is_pv_symmetric(const SparseMatrix& m) {
    const auto sets = pv_sets(m);
    return sets.p_set == sets.v_set;
}

namespace {

// Per-thread lockset labelling: propagate held-permit multisets from the
// entry along every edge. Any inconsistency, a P-call from a non-empty
// lockset, or a terminal node holding permits disqualifies the thread.
struct BracketCheck {
    bool ok = false;
    std::string detail;
};

BracketCheck bracket_discipline(const SparseMatrix& thread) {
    std::vector<std::optional<std::map<std::string, std::uint32_t>>> lockset(thread.order());
    lockset[0] = std::map<std::string, std::uint32_t>{};
    std::deque<std::uint32_t> frontier{0};
    while (!frontier.empty()) {
        const auto node = frontier.front();
        frontier.pop_front();
        for (const auto& e : thread.row(node)) {
            auto next = *lockset[node];
            if (e.label.is_sync_atom()) {
                const auto& atom = e.label.single();
                if (atom.cls == LabelClass::P) {
                    if (!next.empty())
                        return {false, "P-call on '" + atom.sem + "' while holding a permit (node " +
                                           std::to_string(node) + ")"};
                    ++next[atom.sem];
                } else {
                    auto it = next.find(atom.sem);
                    if (it == next.end() || it->second == 0)
                        return {false, "V-call on '" + atom.sem + "' without holding it (node " +
                                           std::to_string(node) + ")"};
                    if (--it->second == 0) next.erase(it);
                }
            }
            if (!lockset[e.col]) {
                lockset[e.col] = std::move(next);
                frontier.push_back(e.col);
            } else if (*lockset[e.col] != next) {
                return {false, "inconsistent held permits joining at node " +
                                   std::to_string(e.col)};
            }
        }
    }
    for (std::uint32_t n = 0; n < thread.order(); ++n) {
        if (!thread.row_empty(n)) continue;
        if (lockset[n] && !lockset[n]->empty())
            return {false, "terminal node " + std::to_string(n) + " still holds a permit"};
    }
    return {true, ""};
}

}  // namespace

Certificate certify_deadlock_free(const SystemModel& system) {
    Certificate cert;
    bool all_ok = true;
    for (const auto& s : system.semaphores) {
        ComponentCheck check;
        check.pv_symmetric = is_pv_symmetric(s.matrix);
        check.bracket_discipline = check.pv_symmetric;
        if (!check.pv_symmetric) {
            check.detail = "semaphore matrix is not p-v-symmetric";
            all_ok = false;
        }
        cert.per_component["semaphore " + s.spec.id] = std::move(check);
    }
    for (const auto& t : system.threads) {
        ComponentCheck check;
        check.pv_symmetric = is_pv_symmetric(t.matrix);
        const auto bracket = bracket_discipline(t.matrix);
        check.bracket_discipline = bracket.ok;
        check.detail = bracket.detail;
        if (!bracket.ok) all_ok = false;
        cert.per_component["thread " + t.name] = std::move(check);
    }

    cert.certified = all_ok;
    cert.reason = all_ok
                      ? "every thread uses semaphores in a bracket discipline and every "
                        "semaphore matrix is p-v-symmetric; the composition has no reachable "
                        "zero line for any replica count"
                      : "semaphore usage outside the certifiable class; run deadlock "
                        "detection for a definite answer";
    return cert;
}

std::string certificate_json(const Certificate& cert) {
    std::ostringstream out;
    out << "{\"certified\": " << (cert.certified ? "true" : "false") << ", \"reason\": \""
        << cert.reason << "\", \"per_component_symmetry\": {";
    bool first = true;
    for (const auto& [name, check] : cert.per_component) {
        if (!first) out << ", ";
        first = false;
        out << "\"" << name << "\": {\"pv_symmetric\": "
            << (check.pv_symmetric ? "true" : "false")
            << ", \"bracket_discipline\": " << (check.bracket_discipline ? "true" : "false");
        if (!check.detail.empty()) out << ", \"detail\": \"" << check.detail << "\"";
        out << "}";
    }
    out << "}}";
    return out.str();
}

SparseMatrix make_Mk(std::uint32_t k) {
    if (k == 0) throw ValidationError("star matrix needs k >= 1");
    std::vector<MatrixEntry> entries;
    for (std::uint32_t i = 1; i <= k; ++i) {
        const std::string sem = "s" + std::to_string(i);
        entries.push_back({0, i, Label::p_call(sem)});
        entries.push_back({i, 0, Label::v_call(sem)});
    }
    return SparseMatrix(k + 1, std::move(entries));
}

LazyMatrix make_sem_chain(std::uint32_t r) {
    if (r == 0) throw ValidationError("semaphore chain needs r >= 1");
    std::vector<LazyMatrix> sems;
    for (std::uint32_t i = 1; i <= r; ++i)
        sems.emplace_back(semaphore_matrix({"s" + std::to_string(i), 1}));
    return kfold_sum(sems);
}

}  // namespace cpg
