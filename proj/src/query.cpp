#include "sirup/query.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sirup {

std::string label_set_to_string(LabelSet s) {
    std::string out;
    if (has_label(s, kF)) out += "F";
    if (has_label(s, kT)) out += has_label(s, kF) ? ",T" : "T";
    if (has_label(s, kA)) out += out.empty() ? "A" : ",A";
    return out;
}

const char* ontology_name(Ontology o) {
    switch (o) {
        case Ontology::CovA: return "sirup";
        case Ontology::CovABot: return "ddsirup";
        case Ontology::CovTop: return "topsirup";
        case Ontology::CovTopBot: return "topddsirup";
    }
    return "?";
}

Ontology parse_ontology(const std::string& name) {
    if (name == "sirup") return Ontology::CovA;
    if (name == "ddsirup") return Ontology::CovABot;
    if (name == "topsirup") return Ontology::CovTop;
    if (name == "topddsirup") return Ontology::CovTopBot;
    throw DomainError("unknown ontology '" + name +
                      "' (expected sirup, ddsirup, topsirup or topddsirup)");
}

int Query::var(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(names_.size());
    ids_.emplace(name, id);
    names_.push_back(name);
    labels_.push_back(0);
    return id;
}

int Query::find_var(const std::string& name) const {
    auto it = ids_.find(name);
    return it == ids_.end() ? -1 : it->second;
}

int Query::role(const std::string& name) {
    auto it = role_ids_.find(name);
    if (it != role_ids_.end()) return it->second;
    int id = static_cast<int>(roles_.size());
    role_ids_.emplace(name, id);
    roles_.push_back(name);
    return id;
}

void Query::add_edge(int src, int role_id, int dst) {
    edges_.push_back(Edge{src, role_id, dst});
}

void Query::finalize() {
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    detect_path();
}

void Query::detect_path() {
    path_nodes_.clear();
    path_roles_.clear();
    int n = node_count();
    if (n == 0) return;
    if (edge_count() != n - 1) {
        if (n == 1 && edge_count() == 0) path_nodes_.push_back(0);
        return;
    }
    std::vector<int> out_edge(n, -1), indeg(n, 0), outdeg(n, 0);
    for (size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (++outdeg[e.src] > 1 || ++indeg[e.dst] > 1) return;
        out_edge[e.src] = static_cast<int>(i);
    }
    int start = -1;
    for (int v = 0; v < n; ++v) {
        if (indeg[v] == 0) {
            if (start != -1) return;  // two starts: disconnected
            start = v;
        }
    }
    if (start == -1) return;  // a cycle
    std::vector<int> nodes{start};
    std::vector<int> roles;
    int cur = start;
    while (out_edge[cur] != -1) {
        const Edge& e = edges_[out_edge[cur]];
        roles.push_back(e.role);
        cur = e.dst;
        nodes.push_back(cur);
    }
    if (static_cast<int>(nodes.size()) != n) return;  // detached cycle
    path_nodes_ = std::move(nodes);
    path_roles_ = std::move(roles);
}

bool Query::has_twin() const {
    for (LabelSet l : labels_)
        if (has_label(l, kF) && has_label(l, kT)) return true;
    return false;
}

NodeKinds node_kinds(const Query& q) {
    NodeKinds k;
    auto scan = [&](int v) {
        LabelSet l = q.labels(v);
        bool f = has_label(l, kF), t = has_label(l, kT);
        if (f && t)
            k.twins.push_back(v);
        else if (f)
            k.solitary_f.push_back(v);
        else if (t)
            k.solitary_t.push_back(v);
    };
    if (q.is_path()) {
        for (int v : q.path_nodes()) scan(v);  // path order
    } else {
        for (int v = 0; v < q.node_count(); ++v) scan(v);
    }
    return k;
}

CqArity cq_arity(const Query& q) {
    NodeKinds k = node_kinds(q);
    size_t f = k.solitary_f.size(), t = k.solitary_t.size();
    if (f == 0 || t == 0) return CqArity::Zero;
    if (f >= 2 && t >= 2) return CqArity::Two;
    return CqArity::One;
}

bool is_connected_query(const Query& q) {
    int n = q.node_count();
    if (n <= 1) return true;
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : q.edges()) {
        adj[e.src].push_back(e.dst);
        adj[e.dst].push_back(e.src);
    }
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    return count == n;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Cursor {
    const std::string& text;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    explicit Cursor(const std::string& t) : text(t) {}

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    char advance() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    void skip_ws_and_comments() {
        while (!eof()) {
            char c = peek();
            if (c == '#') {
                while (!eof() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, line, col);
    }

    std::string identifier() {
        if (eof() ||
            !(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
            fail("expected identifier");
        std::string id;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                          peek() == '_'))
            id += advance();
        return id;
    }

    void expect(char c) {
        if (eof() || peek() != c)
            fail(std::string("expected '") + c + "'");
        advance();
    }
};

struct Atom {
    std::string pred;
    std::vector<std::string> args;
    int line, col;
};

// Shared atom-list reader for queries and ABoxes.
std::vector<Atom> read_atoms(Cursor& cur) {
    std::vector<Atom> atoms;
    for (;;) {
        cur.skip_ws_and_comments();
        if (cur.eof()) break;
        Atom a;
        a.line = cur.line;
        a.col = cur.col;
        a.pred = cur.identifier();
        cur.skip_ws_and_comments();
        cur.expect('(');
        cur.skip_ws_and_comments();
        a.args.push_back(cur.identifier());
        cur.skip_ws_and_comments();
        if (!cur.eof() && cur.peek() == ',') {
            cur.advance();
            cur.skip_ws_and_comments();
            a.args.push_back(cur.identifier());
            cur.skip_ws_and_comments();
        }
        cur.expect(')');
        cur.skip_ws_and_comments();
        cur.expect('.');
        atoms.push_back(std::move(a));
    }
    return atoms;
}

LabelSet unary_label(const std::string& pred) {
    if (pred == "F") return kF;
    if (pred == "T") return kT;
    if (pred == "A") return kA;
    return 0;
}

// "[T] -R-> [ ] -R-> [F,T]"
Query parse_shorthand(Cursor& cur) {
    Query q;
    int prev = -1;
    int index = 0;
    int pending_role = -1;
    for (;;) {
        cur.skip_ws_and_comments();
        if (cur.eof()) break;
        if (cur.peek() == '[') {
            cur.advance();
            LabelSet l = 0;
            for (;;) {
                cur.skip_ws_and_comments();
                if (cur.eof()) cur.fail("unterminated '['");
                if (cur.peek() == ']') {
                    cur.advance();
                    break;
                }
                std::string id = cur.identifier();
                LabelSet bit = unary_label(id);
                if (bit == 0)
                    cur.fail("unknown node label '" + id + "'");
                l |= bit;
                cur.skip_ws_and_comments();
                if (!cur.eof() && cur.peek() == ',') cur.advance();
            }
            int v = q.var("x" + std::to_string(++index));
            q.add_label(v, l);
            if (prev != -1) {
                if (pending_role == -1) cur.fail("missing arrow between nodes");
                q.add_edge(prev, pending_role, v);
            }
            prev = v;
            pending_role = -1;
        } else if (cur.peek() == '-') {
            if (prev == -1 || pending_role != -1) cur.fail("unexpected arrow");
            cur.advance();
            std::string role = cur.identifier();
            cur.expect('-');
            cur.expect('>');
            pending_role = q.role(role);
        } else {
            cur.fail("expected '[' or '-Role->'");
        }
    }
    if (prev == -1) throw DomainError("empty query");
    if (pending_role != -1) throw DomainError("dangling arrow at end of query");
    q.finalize();
    return q;
}

}  // namespace

Query parse_query(const std::string& text) {
    Cursor cur(text);
    cur.skip_ws_and_comments();
    if (cur.eof()) throw DomainError("empty query");
    if (cur.peek() == '[') return parse_shorthand(cur);

    Query q;
    for (const Atom& a : read_atoms(cur)) {
        if (a.args.size() == 1) {
            LabelSet l = unary_label(a.pred);
            if (l == 0)
                throw ParseError("unknown unary predicate '" + a.pred + "'",
                                 a.line, a.col);
            q.add_label(q.var(a.args[0]), l);
        } else {
            int s = q.var(a.args[0]);
            int t = q.var(a.args[1]);
            q.add_edge(s, q.role(a.pred), t);
        }
    }
    if (q.node_count() == 0) throw DomainError("empty query");
    q.finalize();
    if (!is_connected_query(q))
        throw DomainError("query is not connected");
    return q;
}

std::string serialize_query(const Query& q) {
    std::ostringstream out;
    auto unary = [&](int v) {
        LabelSet l = q.labels(v);
        if (has_label(l, kF)) out << "F(" << q.var_name(v) << "). ";
        if (has_label(l, kT)) out << "T(" << q.var_name(v) << "). ";
        if (has_label(l, kA)) out << "A(" << q.var_name(v) << "). ";
    };
    if (q.is_path()) {
        const auto& nodes = q.path_nodes();
        const auto& roles = q.path_roles();
        for (size_t i = 0; i < nodes.size(); ++i) {
            unary(nodes[i]);
            if (i < roles.size())
                out << q.role_name(roles[i]) << "(" << q.var_name(nodes[i])
                    << "," << q.var_name(nodes[i + 1]) << "). ";
        }
    } else {
        for (int v = 0; v < q.node_count(); ++v) unary(v);
        for (const auto& e : q.edges())
            out << q.role_name(e.role) << "(" << q.var_name(e.src) << ","
                << q.var_name(e.dst) << "). ";
    }
    std::string s = out.str();
    if (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

Query swap_ft(const Query& q) {
    Query out;
    for (int v = 0; v < q.node_count(); ++v) {
        int id = out.var(q.var_name(v));
        LabelSet l = q.labels(v);
        LabelSet swapped = static_cast<LabelSet>(l & ~(kF | kT));
        if (has_label(l, kF)) swapped |= kT;
        if (has_label(l, kT)) swapped |= kF;
        out.add_label(id, swapped);
    }
    for (const auto& e : q.edges())
        out.add_edge(e.src, out.role(q.role_name(e.role)), e.dst);
    out.finalize();
    return out;
}

Query reverse_query(const Query& q) {
    Query out;
    for (int v = 0; v < q.node_count(); ++v) {
        int id = out.var(q.var_name(v));
        out.add_label(id, q.labels(v));
    }
    for (const auto& e : q.edges())
        out.add_edge(e.dst, out.role(q.role_name(e.role)), e.src);
    out.finalize();
    return out;
}

}  // namespace sirup
