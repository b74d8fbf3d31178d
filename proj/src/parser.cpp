#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cpg/errors.hpp"
#include "cpg/model.hpp"

namespace cpg {

namespace {

struct RawStatement {
    std::string text;
    std::vector<std::string> reads;
    std::vector<std::string> writes;
    bool atomic = false;
    bool sv_shorthand = false;  // sv:<name> forces the variable shared
    std::optional<std::pair<LabelClass, std::string>> sem_call;
};

struct RawEdge {
    std::uint32_t src = 0;
    std::uint32_t dst = 0;
    std::vector<RawStatement> statements;
};

struct RawThread {
    std::string name;
    std::vector<RawEdge> edges;
    std::set<std::uint32_t> declared_nodes;
};

class LineLexer {
public:
    LineLexer(std::string_view line, int line_no) : line_(line), line_no_(line_no) {}

    void skip_ws() {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_])))
            ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= line_.size();
    }

    int column() const { return static_cast<int>(pos_) + 1; }

    [[noreturn]] void fail(const std::string& message) {
        throw ParseError(line_no_, column(), message);
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < line_.size() && line_[pos_] == c;
    }

    void expect(char c, const std::string& what) {
        if (!peek_is(c)) fail("expected '" + std::string(1, c) + "' " + what);
        ++pos_;
    }

    bool consume(std::string_view word) {
        skip_ws();
        if (line_.compare(pos_, word.size(), word) != 0) return false;
        const auto after = pos_ + word.size();
        if (after < line_.size() && is_ident_char(line_[after])) return false;
        pos_ = after;
        return true;
    }

    std::string ident(const std::string& what) {
        skip_ws();
        const auto start = pos_;
        while (pos_ < line_.size() && is_ident_char(line_[pos_])) ++pos_;
        if (pos_ == start) fail("expected " + what);
        return std::string(line_.substr(start, pos_ - start));
    }

    std::uint32_t number(const std::string& what) {
        skip_ws();
        const auto start = pos_;
        while (pos_ < line_.size() && std::isdigit(static_cast<unsigned char>(line_[pos_])))
            ++pos_;
        if (pos_ == start) fail("expected " + what);
        return static_cast<std::uint32_t>(
            std::stoul(std::string(line_.substr(start, pos_ - start))));
    }

    static bool is_ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
               c == '+' || c == '-' || c == ':' || c == '=';
    }

private:
    std::string_view line_;
    std::size_t pos_ = 0;
    int line_no_;
};

std::vector<std::string> parse_var_list(LineLexer& lex) {
    std::vector<std::string> vars;
    vars.push_back(lex.ident("variable name"));
    while (lex.peek_is(',')) {
        lex.expect(',', "in variable list");
        vars.push_back(lex.ident("variable name"));
    }
    return vars;
}

RawStatement parse_one_statement(LineLexer& lex) {
    RawStatement stmt;
    if (lex.consume("p")) {
        lex.expect('(', "after p");
        stmt.sem_call = {LabelClass::P, lex.ident("semaphore id")};
        lex.expect(')', "after semaphore id");
        stmt.text = "p(" + stmt.sem_call->second + ")";
        return stmt;
    }
    if (lex.consume("v")) {
        lex.expect('(', "after v");
        stmt.sem_call = {LabelClass::V, lex.ident("semaphore id")};
        lex.expect(')', "after semaphore id");
        stmt.text = "v(" + stmt.sem_call->second + ")";
        return stmt;
    }
    stmt.text = lex.ident("statement name");
    // sv:<name> and nsv:<name> are complete statements that pin the class
    for (const auto& [prefix, shared] :
         {std::pair<std::string_view, bool>{"sv:", true}, {"nsv:", false}}) {
        if (stmt.text.rfind(prefix, 0) != 0) continue;
        stmt.text = stmt.text.substr(prefix.size());
        if (stmt.text.empty()) lex.fail("expected a name after the class prefix");
        if (shared) {
            stmt.reads.push_back(stmt.text);
            stmt.sv_shorthand = true;
        }
        return stmt;
    }
    for (;;) {
        if (lex.consume("reads")) {
            auto vars = parse_var_list(lex);
            stmt.reads.insert(stmt.reads.end(), vars.begin(), vars.end());
        } else if (lex.consume("writes")) {
            auto vars = parse_var_list(lex);
            stmt.writes.insert(stmt.writes.end(), vars.begin(), vars.end());
        } else if (lex.consume("atomic")) {
            stmt.atomic = true;
        } else {
            break;
        }
    }
    return stmt;
}

}  // namespace

SystemModel parse_system(std::string_view text) {
    std::vector<SemaphoreSpec> semaphores;
    std::vector<RawThread> threads;
    std::set<std::string> declared_shared;
    RawThread* current = nullptr;

    std::istringstream stream{std::string(text)};
    std::string raw_line;
    int line_no = 0;
    while (std::getline(stream, raw_line)) {
        ++line_no;
        if (const auto hash = raw_line.find('#'); hash != std::string::npos)
            raw_line.erase(hash);
        LineLexer lex(raw_line, line_no);
        if (lex.at_end()) continue;

        if (lex.consume("shared")) {
            declared_shared.insert(lex.ident("shared variable name"));
            if (!lex.at_end()) lex.fail("trailing input after shared declaration");
        } else if (lex.consume("semaphore")) {
            SemaphoreSpec spec;
            spec.id = lex.ident("semaphore id");
            if (lex.consume("capacity")) {
                spec.capacity = lex.number("capacity");
                if (spec.capacity == 0)
                    throw ParseError(line_no, lex.column(), "capacity must be >= 1");
            }
            if (!lex.at_end()) lex.fail("trailing input after semaphore declaration");
            semaphores.push_back(std::move(spec));
        } else if (lex.consume("thread")) {
            RawThread t;
            t.name = lex.ident("thread name");
            if (!lex.at_end()) lex.fail("trailing input after thread declaration");
            threads.push_back(std::move(t));
            current = &threads.back();
        } else if (lex.consume("node")) {
            if (!current) lex.fail("node declaration outside a thread");
            current->declared_nodes.insert(lex.number("node id"));
            if (!lex.at_end()) lex.fail("trailing input after node declaration");
        } else if (lex.consume("edge")) {
            if (!current) lex.fail("edge declaration outside a thread");
            RawEdge edge;
            edge.src = lex.number("source node id");
            lex.expect('-', "in '->'");
            lex.expect('>', "in '->'");
            edge.dst = lex.number("destination node id");
            lex.expect(':', "before edge statements");
            edge.statements.push_back(parse_one_statement(lex));
            while (lex.peek_is(';')) {
                lex.expect(';', "between statements");
                edge.statements.push_back(parse_one_statement(lex));
            }
            if (!lex.at_end()) lex.fail("trailing input after edge statements");
            current->edges.push_back(std::move(edge));
        } else {
            lex.fail("unknown directive");
        }
    }

    if (threads.empty()) throw ParseError(line_no, 1, "system declares no thread");

    // Shared variables: declared ones, sv: shorthands, and anything named
    // by >= 2 threads.
    std::map<std::string, std::set<std::size_t>> users;
    for (std::size_t ti = 0; ti < threads.size(); ++ti)
        for (const auto& e : threads[ti].edges)
            for (const auto& s : e.statements) {
                for (const auto& var : s.reads) users[var].insert(ti);
                for (const auto& var : s.writes) users[var].insert(ti);
                if (s.sv_shorthand) declared_shared.insert(s.reads.front());
            }
    std::set<std::string> shared = declared_shared;
    for (const auto& [var, tids] : users)
        if (tids.size() >= 2) shared.insert(var);

    std::vector<std::pair<std::string, Cfg>> cfgs;
    for (auto& raw : threads) {
        Cfg cfg;
        std::uint32_t max_node = 0;
        for (const auto n : raw.declared_nodes) max_node = std::max(max_node, n);
        for (const auto& e : raw.edges) max_node = std::max({max_node, e.src, e.dst});
        cfg.node_count = max_node + 1;
        for (auto& e : raw.edges) {
            BasicBlock block;
            for (auto& rs : e.statements) {
                Statement stmt;
                stmt.text = std::move(rs.text);
                stmt.sem_call = rs.sem_call;
                for (const auto& var : rs.reads)
                    if (shared.count(var)) stmt.accesses.insert(var);
                for (const auto& var : rs.writes)
                    if (shared.count(var)) stmt.accesses.insert(var);
                stmt.atomic_multi = rs.atomic && stmt.accesses.size() >= 2;
                block.statements.push_back(std::move(stmt));
            }
            cfg.edges.push_back({e.src, e.dst, std::move(block)});
        }
        cfgs.emplace_back(std::move(raw.name), std::move(cfg));
    }

    return make_system(std::move(cfgs), std::move(semaphores));
}

}  // namespace cpg
