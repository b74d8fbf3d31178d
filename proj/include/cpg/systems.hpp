#pragma once

#include <cstdint>

#include "cpg/model.hpp"

namespace cpg {

// k identical clients looping acquire / serve / release on one binary
// semaphore. CPG size grows linearly: 2k+1 nodes, 3k edges, against a
// potential order of 2 * 3^k.
SystemModel client_server_system(std::uint32_t clients);

// Two threads locking two binary semaphores in opposite order; the classic
// reachable deadlock.
SystemModel crossed_lock_system();

// Two threads serializing one shared-variable access with a binary
// semaphore; large unreachable remainder.
SystemModel mutex_system();

// Two threads of two steps each, no synchronization; the complete
// interleaving lattice.
SystemModel cd_system();

// Loop thread (local step, acquire, shared step, release) next to a single
// shared read; the shape where eliminating either local edge breaks a loop.
SystemModel ef_system();

// n replicas of the (k+1)-node star thread (acquire any of k semaphores,
// release, repeat) with k binary semaphores. Certifiably deadlock-free.
SystemModel mk_system(std::uint32_t n_threads, std::uint32_t k_sems);

// n philosophers, n forks, left-then-right acquisition order.
SystemModel dining_philosophers(std::uint32_t n);

}  // namespace cpg
