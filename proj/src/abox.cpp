#include "sirup/abox.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sirup {

int ABox::ind(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(names_.size());
    ids_.emplace(name, id);
    names_.push_back(name);
    unary_.push_back(0);
    return id;
}

int ABox::find_ind(const std::string& name) const {
    auto it = ids_.find(name);
    return it == ids_.end() ? -1 : it->second;
}

int ABox::role(const std::string& name) {
    auto it = role_ids_.find(name);
    if (it != role_ids_.end()) return it->second;
    int id = static_cast<int>(roles_.size());
    role_ids_.emplace(name, id);
    roles_.push_back(name);
    return id;
}

int ABox::find_role(const std::string& name) const {
    auto it = role_ids_.find(name);
    return it == role_ids_.end() ? -1 : it->second;
}

void ABox::add_edge(int src, int role_id, int dst) {
    edges_.push_back(Edge{src, role_id, dst});
    finalized_ = false;
}

void ABox::finalize() {
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    finalized_ = true;
}

bool ABox::has_edge(int src, int role_id, int dst) const {
    Edge e{src, role_id, dst};
    if (finalized_)
        return std::binary_search(edges_.begin(), edges_.end(), e);
    return std::find(edges_.begin(), edges_.end(), e) != edges_.end();
}

bool ABox::has_twin() const {
    for (LabelSet l : unary_)
        if (has_label(l, kF) && has_label(l, kT)) return true;
    return false;
}

std::vector<int> ABox::insert_query(
    const Query& q, NameGen& gen,
    const std::unordered_map<int, LabelSet>& relabel,
    const std::unordered_map<int, int>& glue) {
    std::vector<int> map(q.node_count(), -1);
    for (int v = 0; v < q.node_count(); ++v) {
        auto g = glue.find(v);
        int id = g != glue.end() ? g->second : ind(gen.fresh(q.var_name(v)));
        auto r = relabel.find(v);
        set_label(id, r != relabel.end() ? r->second
                                         : static_cast<LabelSet>(q.labels(v)));
        map[v] = id;
    }
    for (const auto& e : q.edges())
        add_edge(map[e.src], role(q.role_name(e.role)), map[e.dst]);
    return map;
}

// ---------------------------------------------------------------------------

namespace {

// Duplicated tiny lexer; the query-side one lives in query.cpp and both
// stay independent so either grammar can evolve.
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
        if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }
};

}  // namespace

ABox parse_abox(const std::string& text) {
    ABox a;
    Cursor cur(text);
    for (;;) {
        cur.skip_ws_and_comments();
        if (cur.eof()) break;
        int line = cur.line, col = cur.col;
        std::string pred = cur.identifier();
        cur.skip_ws_and_comments();
        cur.expect('(');
        cur.skip_ws_and_comments();
        std::string first = cur.identifier();
        cur.skip_ws_and_comments();
        std::string second;
        bool binary = false;
        if (!cur.eof() && cur.peek() == ',') {
            cur.advance();
            cur.skip_ws_and_comments();
            second = cur.identifier();
            cur.skip_ws_and_comments();
            binary = true;
        }
        cur.expect(')');
        cur.skip_ws_and_comments();
        cur.expect('.');
        if (binary) {
            int s = a.ind(first);
            int t = a.ind(second);
            a.add_edge(s, a.role(pred), t);
        } else {
            LabelSet l = pred == "F"   ? kF
                         : pred == "T" ? kT
                         : pred == "A" ? kA
                                       : 0;
            if (l == 0)
                throw ParseError("unknown unary predicate '" + pred + "'",
                                 line, col);
            a.set_label(a.ind(first), l);
        }
    }
    a.finalize();
    return a;
}

std::string serialize_abox(const ABox& a) {
    std::ostringstream out;
    for (int i = 0; i < a.ind_count(); ++i) {
        LabelSet l = a.unary(i);
        if (has_label(l, kA)) out << "A(" << a.ind_name(i) << "). ";
        if (has_label(l, kF)) out << "F(" << a.ind_name(i) << "). ";
        if (has_label(l, kT)) out << "T(" << a.ind_name(i) << "). ";
    }
    out << "\n";
    for (const auto& e : a.edges())
        out << a.role_name(e.role) << "(" << a.ind_name(e.src) << ","
            << a.ind_name(e.dst) << "). ";
    std::string s = out.str();
    while (!s.empty() && (s.back() == ' ' || s.back() == '\n')) s.pop_back();
    return s;
}

ABox swap_ft(const ABox& a) {
    ABox out;
    for (int i = 0; i < a.ind_count(); ++i) {
        int id = out.ind(a.ind_name(i));
        LabelSet l = a.unary(i);
        LabelSet swapped = static_cast<LabelSet>(l & ~(kF | kT));
        if (has_label(l, kF)) swapped |= kT;
        if (has_label(l, kT)) swapped |= kF;
        out.set_label(id, swapped);
    }
    for (const auto& e : a.edges())
        out.add_edge(e.src, out.role(a.role_name(e.role)), e.dst);
    out.finalize();
    return out;
}

ABox reverse_abox(const ABox& a) {
    ABox out;
    for (int i = 0; i < a.ind_count(); ++i) {
        int id = out.ind(a.ind_name(i));
        out.set_label(id, a.unary(i));
    }
    for (const auto& e : a.edges())
        out.add_edge(e.dst, out.role(a.role_name(e.role)), e.src);
    out.finalize();
    return out;
}

std::vector<int> undecided_individuals(const ABox& a, Ontology o) {
    std::vector<int> out;
    for (int i = 0; i < a.ind_count(); ++i) {
        LabelSet l = a.unary(i);
        if (has_label(l, kF) || has_label(l, kT)) continue;
        if (is_total(o) || has_label(l, kA)) out.push_back(i);
    }
    return out;
}

ABox apply_labeling(const ABox& a, const Labeling& l) {
    ABox out = a;
    for (size_t i = 0; i < l.inds.size(); ++i)
        out.set_label(l.inds[i], l.choice[i]);
    return out;
}

std::string labeling_to_string(const ABox& a, const Labeling& l) {
    std::string s;
    for (size_t i = 0; i < l.inds.size(); ++i) {
        if (!s.empty()) s += " ";
        s += a.ind_name(l.inds[i]);
        s += l.choice[i] == kT ? "->T" : "->F";
    }
    return s;
}

Query abox_as_query(const ABox& a) {
    Query q;
    for (int i = 0; i < a.ind_count(); ++i) {
        int v = q.var(a.ind_name(i));
        q.add_label(v, a.unary(i));
    }
    for (const auto& e : a.edges())
        q.add_edge(e.src, q.role(a.role_name(e.role)), e.dst);
    q.finalize();
    return q;
}

ABox query_to_abox(const Query& q, NameGen& gen,
                   const std::unordered_map<int, LabelSet>& relabel) {
    ABox a;
    a.insert_query(q, gen, relabel);
    a.finalize();
    return a;
}

}  // namespace sirup
