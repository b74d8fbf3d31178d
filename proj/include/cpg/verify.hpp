#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "cpg/lazy_matrix.hpp"
#include "cpg/model.hpp"
#include "cpg/sparse_matrix.hpp"

namespace cpg {

struct PvTriple {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    std::string sem;

    auto operator<=>(const PvTriple&) const = default;
};

// p_set holds (i, j, r) for every p_r at (i, j); v_set holds (j, i, r) for
// every v_r at (i, j) — indices exchanged. Non-call entries are ignored.
struct PvSets {
    std::set<PvTriple> p_set;
    std::set<PvTriple> v_set;
};

PvSets pv_sets(const SparseMatrix& m);

// True iff the p- and v-entries occur at transposed positions with matching
// semaphore ids.
bool is_pv_symmetric(const SparseMatrix& m);

struct ComponentCheck {
    bool pv_symmetric = false;       // sync-filtered positional symmetry
    bool bracket_discipline = false; // see certify_deadlock_free
    std::string detail;
};

struct Certificate {
    bool certified = false;
    std::string reason;
    std::map<std::string, ComponentCheck> per_component;
};

// Deadlock-freedom certificate, valid for any number of replicas of the
// given threads. Certifies when every semaphore matrix is p-v-symmetric and
// every thread uses semaphores in a bracket discipline: a consistent
// held-permit labelling exists in which terminal nodes hold nothing and
// every P-call starts from an empty lockset. Never reports a deadlock;
// anything outside the criterion comes back inconclusive.
Certificate certify_deadlock_free(const SystemModel& system);

std::string certificate_json(const Certificate& cert);

// The (k+1)-order star: p_1..p_k along row 0, v_1..v_k down column 0.
// Semaphore ids are "s1".."sk".
SparseMatrix make_Mk(std::uint32_t k);

// k-fold interleaving of binary semaphores S_1..S_r.
LazyMatrix make_sem_chain(std::uint32_t r);

}  // namespace cpg
