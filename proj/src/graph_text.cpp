#include "mswig/graph_text.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mswig {

namespace {

struct Statement {
    std::vector<std::string> tokens;
    int line;
    int col;
};

std::vector<Statement> tokenize(const std::string& text) {
    std::vector<Statement> out;
    Statement cur{{}, 1, 1};
    std::string tok;
    int line = 1, col = 0, tok_line = 1, tok_col = 1;
    bool comment = false;

    auto flush_tok = [&]() {
        if (!tok.empty()) {
            if (cur.tokens.empty()) {
                cur.line = tok_line;
                cur.col = tok_col;
            }
            cur.tokens.push_back(tok);
            tok.clear();
        }
    };
    auto flush_stmt = [&]() {
        flush_tok();
        if (!cur.tokens.empty()) out.push_back(cur);
        cur = Statement{{}, line, col};
    };

    for (char c : text + "\n") {
        ++col;
        if (c == '\n') {
            flush_stmt();
            ++line;
            col = 0;
            comment = false;
            continue;
        }
        if (comment) continue;
        if (c == '#') {
            comment = true;
            continue;
        }
        if (c == ';') {
            flush_stmt();
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush_tok();
            continue;
        }
        if (tok.empty()) {
            tok_line = line;
            tok_col = col;
        }
        tok += c;
    }
    return out;
}

[[noreturn]] void fail(const Statement& s, const std::string& msg) {
    std::ostringstream os;
    os << "graph parse error at line " << s.line << ", column " << s.col << ": " << msg;
    throw std::invalid_argument(os.str());
}

}  // namespace

MGraph parse_graph(const std::string& text) {
    MGraph g;
    for (const auto& s : tokenize(text)) {
        const auto& t = s.tokens;
        try {
            if (t[0] == "node") {
                if (t.size() != 3) fail(s, "expected: node <id> (obs|miss|latent)");
                NodeKind kind;
                if (t[2] == "obs")
                    kind = NodeKind::Observed;
                else if (t[2] == "miss")
                    kind = NodeKind::PartiallyMissing;
                else if (t[2] == "latent")
                    kind = NodeKind::Latent;
                else
                    fail(s, "unknown node kind '" + t[2] + "'");
                g.add_node(t[1], kind);
            } else if (t[0] == "sel") {
                if (t.size() != 4 || t[2] != "for") fail(s, "expected: sel <id> for <missId>");
                g.add_selection(t[1], t[3]);
            } else if (t[0] == "edge") {
                if (t.size() != 4 || t[2] != "->") fail(s, "expected: edge <a> -> <b>");
                g.add_edge(t[1], t[3]);
            } else if (t[0] == "bi") {
                if (t.size() != 4 || t[2] != "<->") fail(s, "expected: bi <a> <-> <b>");
                g.add_biedge(t[1], t[3]);
            } else {
                fail(s, "unknown statement '" + t[0] + "'");
            }
        } catch (const std::invalid_argument& e) {
            std::string what = e.what();
            if (what.rfind("graph parse error", 0) == 0) throw;
            fail(s, what);
        }
    }
    g.validate();
    return g;
}

MGraph parse_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open graph file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_graph(os.str());
}

std::string serialize_graph(const MGraph& g) {
    std::ostringstream os;
    for (const auto& n : g.nodes()) {
        switch (n.kind) {
            case NodeKind::Observed: os << "node " << n.id << " obs\n"; break;
            case NodeKind::PartiallyMissing: os << "node " << n.id << " miss\n"; break;
            case NodeKind::Latent: os << "node " << n.id << " latent\n"; break;
            case NodeKind::Selection: os << "sel " << n.id << " for " << n.of << "\n"; break;
            case NodeKind::Proxy: break;  // implied by sel
        }
    }
    for (const auto& [a, b] : g.edges()) {
        // Proxy wiring is implied by sel.
        if (g.node(b).kind == NodeKind::Proxy) continue;
        os << "edge " << a << " -> " << b << "\n";
    }
    for (const auto& [a, b] : g.biedges()) os << "bi " << a << " <-> " << b << "\n";
    return os.str();
}

std::string to_dot(const MGraph& g) {
    std::ostringstream os;
    os << "digraph m_graph {\n";
    for (const auto& n : g.nodes()) {
        os << "  " << n.id;
        switch (n.kind) {
            case NodeKind::Proxy: os << " [shape=doublecircle]"; break;
            case NodeKind::Latent: os << " [style=dashed]"; break;
            case NodeKind::Selection: os << " [shape=box]"; break;
            default: break;
        }
        os << ";\n";
    }
    for (const auto& [a, b] : g.edges()) os << "  " << a << " -> " << b << ";\n";
    for (const auto& [a, b] : g.biedges())
        os << "  " << a << " -> " << b << " [dir=both, style=dashed];\n";
    os << "}\n";
    return os.str();
}

}  // namespace mswig
