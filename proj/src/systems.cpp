#include "cpg/systems.hpp"

#include "cpg/errors.hpp"

namespace cpg {

namespace {

Statement call(LabelClass cls, const std::string& sem) {
    Statement s;
    s.sem_call = {cls, sem};
    s.text = (cls == LabelClass::P ? "p(" : "v(") + sem + ")";
    return s;
}

Statement local_step(std::string name) {
    Statement s;
    s.text = std::move(name);
    return s;
}

Statement shared_step(std::string name, std::string var) {
    Statement s;
    s.text = std::move(name);
    s.accesses.insert(std::move(var));
    return s;
}

CfgEdge edge(std::uint32_t src, std::uint32_t dst, Statement stmt) {
    return {src, dst, BasicBlock{{std::move(stmt)}}};
}

}  // namespace

SystemModel client_server_system(std::uint32_t clients) {
    if (clients == 0) throw ValidationError("client-server system needs >= 1 client");
    std::vector<std::pair<std::string, Cfg>> threads;
    for (std::uint32_t i = 0; i < clients; ++i) {
        Cfg cfg;
        cfg.node_count = 3;
        cfg.edges = {edge(0, 1, call(LabelClass::P, "srv")),
                     edge(1, 2, local_step("a")),
                     edge(2, 0, call(LabelClass::V, "srv"))};
        threads.emplace_back("client" + std::to_string(i + 1), std::move(cfg));
    }
    return make_system(std::move(threads), {{"srv", 1}});
}

SystemModel crossed_lock_system() {
    Cfg t1;
    t1.node_count = 5;
    t1.edges = {edge(0, 1, call(LabelClass::P, "s1")), edge(1, 2, call(LabelClass::P, "s2")),
                edge(2, 3, call(LabelClass::V, "s2")), edge(3, 4, call(LabelClass::V, "s1"))};
    Cfg t2;
    t2.node_count = 5;
    t2.edges = {edge(0, 1, call(LabelClass::P, "s2")), edge(1, 2, call(LabelClass::P, "s1")),
                edge(2, 3, call(LabelClass::V, "s1")), edge(3, 4, call(LabelClass::V, "s2"))};
    return make_system({{"T1", std::move(t1)}, {"T2", std::move(t2)}},
                       {{"s1", 1}, {"s2", 1}});
}

SystemModel mutex_system() {
    Cfg t1;
    t1.node_count = 4;
    t1.edges = {edge(0, 1, call(LabelClass::P, "s")), edge(1, 2, shared_step("a", "x")),
                edge(2, 3, call(LabelClass::V, "s"))};
    Cfg t2;
    t2.node_count = 4;
    t2.edges = {edge(0, 1, call(LabelClass::P, "s")), edge(1, 2, shared_step("b", "x")),
                edge(2, 3, call(LabelClass::V, "s"))};
    return make_system({{"T1", std::move(t1)}, {"T2", std::move(t2)}}, {{"s", 1}});
}

SystemModel cd_system() {
    Cfg c;
    c.node_count = 3;
    c.edges = {edge(0, 1, local_step("a")), edge(1, 2, local_step("b"))};
    Cfg d;
    d.node_count = 3;
    d.edges = {edge(0, 1, local_step("c")), edge(1, 2, local_step("d"))};
    return make_system({{"C", std::move(c)}, {"D", std::move(d)}}, {});
}

SystemModel ef_system() {
    Cfg e;
    e.node_count = 4;
    e.edges = {edge(0, 1, local_step("a")), edge(1, 2, call(LabelClass::P, "s")),
               edge(2, 3, shared_step("b", "x")), edge(3, 0, call(LabelClass::V, "s"))};
    Cfg f;
    f.node_count = 2;
    f.edges = {edge(0, 1, shared_step("c", "x"))};
    return make_system({{"E", std::move(e)}, {"F", std::move(f)}}, {{"s", 1}});
}

SystemModel mk_system(std::uint32_t n_threads, std::uint32_t k_sems) {
    if (n_threads == 0 || k_sems == 0)
        throw ValidationError("star system needs >= 1 thread and >= 1 semaphore");
    std::vector<SemaphoreSpec> sems;
    for (std::uint32_t i = 1; i <= k_sems; ++i) sems.push_back({"s" + std::to_string(i), 1});
    std::vector<std::pair<std::string, Cfg>> threads;
    for (std::uint32_t t = 0; t < n_threads; ++t) {
        Cfg cfg;
        cfg.node_count = k_sems + 1;
        for (std::uint32_t i = 1; i <= k_sems; ++i) {
            cfg.edges.push_back(edge(0, i, call(LabelClass::P, "s" + std::to_string(i))));
            cfg.edges.push_back(edge(i, 0, call(LabelClass::V, "s" + std::to_string(i))));
        }
        threads.emplace_back("star" + std::to_string(t + 1), std::move(cfg));
    }
    return make_system(std::move(threads), std::move(sems));
}

SystemModel dining_philosophers(std::uint32_t n) {
    if (n < 2) throw ValidationError("dining philosophers needs >= 2 seats");
    std::vector<SemaphoreSpec> forks;
    for (std::uint32_t i = 0; i < n; ++i) forks.push_back({"fork" + std::to_string(i), 1});
    std::vector<std::pair<std::string, Cfg>> threads;
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::string left = "fork" + std::to_string(i);
        const std::string right = "fork" + std::to_string((i + 1) % n);
        Cfg cfg;
        cfg.node_count = 6;
        cfg.edges = {edge(0, 1, call(LabelClass::P, left)),
                     edge(1, 2, call(LabelClass::P, right)),
                     edge(2, 3, local_step("eat" + std::to_string(i))),
                     edge(3, 4, call(LabelClass::V, right)),
                     edge(4, 5, call(LabelClass::V, left))};
        threads.emplace_back("phil" + std::to_string(i), std::move(cfg));
    }
    return make_system(std::move(threads), std::move(forks));
}

}  // namespace cpg
