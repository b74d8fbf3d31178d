#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "cpg/cpg.hpp"
#include "cpg/model.hpp"

namespace cpg {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDeadlock = 1;      // `deadlock` found a reachable deadlock
inline constexpr int kExitInputError = 2;    // parse or validation failure
inline constexpr int kExitResourceCap = 3;   // node cap exceeded
inline constexpr int kExitInternal = 70;

struct RunConfig {
    enum class Command { Build, Stats, Deadlock, Certify, Reduce, OracleCheck, Dot, Bench };
    enum class Format { Dot, Json };

    Command command = Command::Stats;
    std::string input;                 // system description file
    std::string output;                // empty = stdout
    Format format = Format::Json;
    std::uint64_t max_nodes = 10'000'000;
    bool reduce_nsv = false;
    bool show_composites = false;
    std::uint64_t seed = 1;
    std::uint32_t random_systems = 0;  // oracle-check: extra random instances
    std::uint32_t clients = 0;         // bench
};

// Runs one command, writing results to `out` and diagnostics to `err`.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

// Client/semaphore scaling series entry point used by `bench`.
CpgStats bench_client_server(std::uint32_t clients, std::uint64_t max_nodes = 10'000'000);

}  // namespace cpg
