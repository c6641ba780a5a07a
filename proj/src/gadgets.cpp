#include "sirup/gadgets.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sirup/classify.hpp"
#include "sirup/hom.hpp"

namespace sirup {

namespace {

// ---------------------------------------------------------------------------
// DIMACS tokenization shared by the CNF and QBF parsers

struct Token {
    std::string text;
    int line;
    int col;
};

std::vector<Token> dimacs_tokens(const std::string& text) {
    std::vector<Token> out;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        size_t first = raw.find_first_not_of(" \t\r");
        if (first == std::string::npos || raw[first] == 'c') continue;
        size_t i = first;
        while (i < raw.size()) {
            while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
            if (i >= raw.size()) break;
            size_t j = i;
            while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
            out.push_back({raw.substr(i, j - i), line, static_cast<int>(i) + 1});
            i = j;
        }
    }
    return out;
}

int token_int(const Token& t) {
    size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(t.text, &pos);
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + t.text + "'", t.line, t.col);
    }
    if (pos != t.text.size())
        throw ParseError("expected an integer, got '" + t.text + "'", t.line, t.col);
    return v;
}

// Reads "p cnf <variables> <clauses>" when present; returns the declared
// variable count or 0.
int read_problem_line(const std::vector<Token>& toks, size_t& i) {
    if (i >= toks.size() || toks[i].text != "p") return 0;
    if (i + 3 >= toks.size() || toks[i + 1].text != "cnf")
        throw ParseError("expected 'p cnf <variables> <clauses>'", toks[i].line, toks[i].col);
    int vars = token_int(toks[i + 2]);
    token_int(toks[i + 3]);  // clause count; informative only
    i += 4;
    return vars;
}

std::vector<std::array<int, 3>> read_clauses(const std::vector<Token>& toks, size_t i,
                                             int declared_vars, int* max_var) {
    std::vector<std::array<int, 3>> clauses;
    std::vector<int> cur;
    *max_var = 0;
    for (; i < toks.size(); ++i) {
        const Token& t = toks[i];
        if (t.text == "p")
            throw ParseError("duplicate problem line", t.line, t.col);
        int lit = token_int(t);
        if (lit == 0) {
            if (cur.size() != 3)
                throw ParseError("a clause must have exactly three literals", t.line, t.col);
            clauses.push_back({cur[0], cur[1], cur[2]});
            cur.clear();
            continue;
        }
        if (cur.size() == 3)
            throw ParseError("a clause must have exactly three literals", t.line, t.col);
        if (declared_vars > 0 && std::abs(lit) > declared_vars)
            throw ParseError("literal exceeds the declared variable count", t.line, t.col);
        *max_var = std::max(*max_var, std::abs(lit));
        cur.push_back(lit);
    }
    if (!cur.empty()) {
        const Token& t = toks.back();
        throw ParseError("unterminated clause (missing 0)", t.line, t.col);
    }
    return clauses;
}

}  // namespace

// ---------------------------------------------------------------------------
// 3-CNF and forall-exists 3SAT

void ThreeCNF::validate() const {
    if (variables < 1) throw DomainError("a 3-CNF needs at least one variable");
    if (clauses.empty()) throw DomainError("a 3-CNF needs at least one clause");
    for (const auto& c : clauses)
        for (int lit : c)
            if (lit == 0 || std::abs(lit) > variables)
                throw DomainError("clause literal out of range");
}

ThreeCNF parse_dimacs(const std::string& text) {
    auto toks = dimacs_tokens(text);
    size_t i = 0;
    ThreeCNF f;
    f.variables = read_problem_line(toks, i);
    int max_var = 0;
    f.clauses = read_clauses(toks, i, f.variables, &max_var);
    if (f.variables == 0) f.variables = max_var;
    f.validate();
    return f;
}

std::string serialize_dimacs(const ThreeCNF& f) {
    std::ostringstream out;
    out << "p cnf " << f.variables << ' ' << f.clauses.size() << '\n';
    for (const auto& c : f.clauses)
        out << c[0] << ' ' << c[1] << ' ' << c[2] << " 0\n";
    return out.str();
}

bool eval_cnf(const ThreeCNF& f, std::uint32_t assignment) {
    for (const auto& c : f.clauses) {
        bool sat = false;
        for (int lit : c) {
            bool v = (assignment >> (std::abs(lit) - 1)) & 1u;
            if ((lit > 0) == v) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

bool cnf_satisfiable(const ThreeCNF& f) {
    f.validate();
    if (f.variables > 20)
        throw DomainError("brute-force satisfiability is limited to 20 variables");
    for (std::uint32_t a = 0; a < (1u << f.variables); ++a)
        if (eval_cnf(f, a)) return true;
    return false;
}

void ForallExists3SAT::validate() const {
    if (x_vars < 0 || y_vars < 0 || x_vars + y_vars < 1)
        throw DomainError("a forall-exists formula needs at least one variable");
    if (clauses.empty()) throw DomainError("a forall-exists formula needs at least one clause");
    for (const auto& c : clauses) {
        for (int lit : c)
            if (lit == 0 || std::abs(lit) > x_vars + y_vars)
                throw DomainError("clause literal out of range");
        if (std::abs(c[0]) == std::abs(c[1]) || std::abs(c[0]) == std::abs(c[2]) ||
            std::abs(c[1]) == std::abs(c[2]))
            throw DomainError("a forall-exists clause may not repeat a variable");
    }
}

ForallExists3SAT parse_qdimacs(const std::string& text) {
    auto toks = dimacs_tokens(text);
    size_t i = 0;
    int declared = read_problem_line(toks, i);
    std::vector<int> universal, existential;
    bool seen_e = false;
    while (i < toks.size() && (toks[i].text == "a" || toks[i].text == "e")) {
        bool is_a = toks[i].text == "a";
        if (is_a && seen_e)
            throw ParseError("the universal block must precede the existential block",
                             toks[i].line, toks[i].col);
        if (!is_a) seen_e = true;
        ++i;
        bool closed = false;
        for (; i < toks.size(); ++i) {
            int v = token_int(toks[i]);
            if (v == 0) {
                closed = true;
                ++i;
                break;
            }
            if (v < 0)
                throw ParseError("quantifier lines list positive variables", toks[i].line,
                                 toks[i].col);
            (is_a ? universal : existential).push_back(v);
        }
        if (!closed) {
            const Token& t = toks.back();
            throw ParseError("unterminated quantifier line (missing 0)", t.line, t.col);
        }
    }
    ForallExists3SAT f;
    f.x_vars = static_cast<int>(universal.size());
    f.y_vars = static_cast<int>(existential.size());
    for (int k = 0; k < f.x_vars; ++k)
        if (universal[k] != k + 1)
            throw ParseError("universal variables must be numbered 1..m in order", 1, 1);
    for (int k = 0; k < f.y_vars; ++k)
        if (existential[k] != f.x_vars + k + 1)
            throw ParseError("existential variables must continue the numbering m+1..m+k", 1, 1);
    int max_var = 0;
    f.clauses = read_clauses(toks, i, declared, &max_var);
    if (f.x_vars + f.y_vars == 0) {
        // No quantifier lines: read the whole formula as existential.
        f.y_vars = declared > 0 ? declared : max_var;
    } else if (declared > 0 && declared != f.x_vars + f.y_vars) {
        throw ParseError("quantifier lines must cover the declared variables", 1, 1);
    }
    f.validate();
    return f;
}

std::string serialize_qdimacs(const ForallExists3SAT& f) {
    std::ostringstream out;
    out << "p cnf " << f.x_vars + f.y_vars << ' ' << f.clauses.size() << '\n';
    if (f.x_vars > 0) {
        out << 'a';
        for (int v = 1; v <= f.x_vars; ++v) out << ' ' << v;
        out << " 0\n";
    }
    if (f.y_vars > 0) {
        out << 'e';
        for (int v = f.x_vars + 1; v <= f.x_vars + f.y_vars; ++v) out << ' ' << v;
        out << " 0\n";
    }
    for (const auto& c : f.clauses)
        out << c[0] << ' ' << c[1] << ' ' << c[2] << " 0\n";
    return out.str();
}

namespace {

bool ae_clauses_hold(const ForallExists3SAT& f, std::uint32_t assignment) {
    for (const auto& c : f.clauses) {
        bool sat = false;
        for (int lit : c)
            if ((lit > 0) == (((assignment >> (std::abs(lit) - 1)) & 1u) != 0)) {
                sat = true;
                break;
            }
        if (!sat) return false;
    }
    return true;
}

// Exists y extending the given x-assignment (bits 0..x_vars-1).
bool ae_inner_sat(const ForallExists3SAT& f, std::uint32_t x_bits) {
    for (std::uint32_t b = 0; b < (1u << f.y_vars); ++b)
        if (ae_clauses_hold(f, x_bits | (b << f.x_vars))) return true;
    return false;
}

}  // namespace

bool qbf_truth(const ForallExists3SAT& f) {
    f.validate();
    if (f.x_vars + f.y_vars > 20)
        throw DomainError("brute-force QBF evaluation is limited to 20 variables");
    for (std::uint32_t a = 0; a < (1u << f.x_vars); ++a)
        if (!ae_inner_sat(f, a)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Mutilated chessboard

namespace {

// The fixed four-element tournament shared by the query rose, the square
// rose and the contact rose, over slots (left, up, right, down): left
// beats everything, right loses to everything, up beats down.
constexpr int kTournament[6][2] = {{0, 1}, {1, 2}, {0, 3}, {3, 2}, {1, 3}, {0, 2}};

Query chessboard_query() {
    Query q;
    int x = q.var("x");
    int rose[4] = {q.var("fl"), q.var("fu"), q.var("fr"), q.var("fd")};
    int y = q.var("y");
    int above = q.var("t2");
    int right = q.var("t1");
    int r = q.role("R");
    for (int k = 0; k < 4; ++k) {
        q.add_label(rose[k], kF);
        q.add_edge(x, r, rose[k]);
    }
    for (const auto& e : kTournament) q.add_edge(rose[e[0]], r, rose[e[1]]);
    q.add_label(above, kT);
    q.add_label(right, kT);
    q.add_edge(y, r, x);
    q.add_edge(y, r, above);
    q.add_edge(y, r, right);
    q.add_edge(above, r, right);
    q.finalize();
    return q;
}

}  // namespace

ChessboardGadget chessboard(int n) {
    if (n < 1) throw DomainError("chessboard size must be at least 1");
    ChessboardGadget g;
    g.n = n;
    g.query = chessboard_query();
    ABox& a = g.abox;
    int r = a.role("R");
    int side = 2 * n;
    auto present = [side](int i, int j) {
        if (i < 0 || j < 0 || i >= side || j >= side) return false;
        if (i == 0 && j == side - 1) return false;
        if (i == side - 1 && j == 0) return false;
        return true;
    };
    auto vl = [](int i, int j) { return "vl" + std::to_string(i) + "_" + std::to_string(j); };
    auto hl = [](int i, int j) { return "hl" + std::to_string(i) + "_" + std::to_string(j); };
    for (int i = 0; i < side; ++i) {
        for (int j = 0; j < side; ++j) {
            if (!present(i, j)) continue;
            std::string p = "s" + std::to_string(i) + "_" + std::to_string(j) + "_";
            int w = a.ind(p + "w");
            int rose[4] = {a.ind(p + "fl"), a.ind(p + "fu"), a.ind(p + "fr"), a.ind(p + "fd")};
            int z = a.ind(p + "z");
            int hub = a.ind(p + "t");
            int above = a.ind(p + "tu");
            int right = a.ind(p + "tr");
            int contact[4] = {a.ind(vl(i, j)), a.ind(hl(i, j + 1)), a.ind(vl(i + 1, j)),
                              a.ind(hl(i, j))};
            for (int k = 0; k < 4; ++k) {
                a.set_label(rose[k], kF);
                a.add_edge(w, r, rose[k]);
            }
            for (const auto& e : kTournament) a.add_edge(rose[e[0]], r, rose[e[1]]);
            a.add_edge(z, r, w);
            for (int k = 0; k < 4; ++k) a.add_edge(z, r, contact[k]);
            for (const auto& e : kTournament) a.add_edge(contact[e[0]], r, contact[e[1]]);
            a.set_label(above, kT);
            a.set_label(right, kT);
            a.add_edge(hub, r, z);
            a.add_edge(hub, r, above);
            a.add_edge(hub, r, right);
            a.add_edge(above, r, right);
            g.squares.push_back({i, j, {contact[0], contact[1], contact[2], contact[3]}});
        }
    }
    for (int i = 0; i <= side; ++i)
        for (int j = 0; j < side; ++j)
            if (int id = a.find_ind(vl(i, j)); id >= 0)
                a.set_label(id, present(i - 1, j) && present(i, j) ? kA : kF);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j <= side; ++j)
            if (int id = a.find_ind(hl(i, j)); id >= 0)
                a.set_label(id, present(i, j - 1) && present(i, j) ? kA : kF);
    a.finalize();
    return g;
}

// ---------------------------------------------------------------------------
// forall-exists 3SAT gadget

AESatGadget forall_exists(const ForallExists3SAT& phi, Ontology o) {
    phi.validate();
    if (is_total(o))
        throw DomainError("the forall-exists gadget needs an A-covering ontology");
    AESatGadget g;
    g.ontology = o;
    int m = phi.x_vars;

    // The query, built as a pattern: one centre per clause, per-clause
    // x-nodes labelled by the literal's sign, y-nodes shared globally.
    ABox pattern;
    for (int k = 1; k <= phi.y_vars; ++k) pattern.ind("y" + std::to_string(k));
    for (size_t c = 0; c < phi.clauses.size(); ++c) {
        std::string cs = "_c" + std::to_string(c + 1);
        int centre = pattern.ind("z" + cs);
        for (int i = 0; i < 3; ++i) {
            int lit = phi.clauses[c][i];
            int v = std::abs(lit);
            int role = pattern.role("R" + std::to_string(i + 1) + cs);
            int node;
            if (v <= m) {
                node = pattern.ind("x" + std::to_string(v) + cs);
                pattern.set_label(node, lit > 0 ? kT : kF);
            } else {
                node = pattern.ind("y" + std::to_string(v - m));
            }
            pattern.add_edge(centre, role, node);
        }
    }
    pattern.finalize();
    g.query = abox_as_query(pattern);

    // The data: per x-variable an undecided a* (plus its decided twin or
    // twin pair), per y-variable an unlabelled candidate pair, and per
    // clause one centre for every candidate triple that is not doomed to
    // falsify the clause.
    ABox& a = g.abox;
    struct Cand {
        int ind;
        bool witness;  // picking it can make the clause true on its own
    };
    std::vector<int> a_star(m + 1, -1);
    std::vector<std::vector<Cand>> x_cands(m + 1);
    for (int v = 1; v <= m; ++v) {
        a_star[v] = a.ind("as_x" + std::to_string(v));
        a.set_label(a_star[v], kA);
        g.x_star.push_back("as_x" + std::to_string(v));
        if (o == Ontology::CovA) {
            int both = a.ind("ao_x" + std::to_string(v));
            a.set_label(both, kF | kT);
            x_cands[v] = {{a_star[v], true}, {both, false}};
        } else {
            int af = a.ind("aF_x" + std::to_string(v));
            int at = a.ind("aT_x" + std::to_string(v));
            a.set_label(af, kF);
            a.set_label(at, kT);
            x_cands[v] = {{a_star[v], true}, {af, false}, {at, false}};
        }
    }
    std::vector<int> b_f(phi.y_vars + 1, -1), b_t(phi.y_vars + 1, -1);
    for (int k = 1; k <= phi.y_vars; ++k) {
        b_f[k] = a.ind("bF_y" + std::to_string(k));
        b_t[k] = a.ind("bT_y" + std::to_string(k));
    }
    for (size_t c = 0; c < phi.clauses.size(); ++c) {
        std::string cs = "_c" + std::to_string(c + 1);
        std::array<std::vector<Cand>, 3> cands;
        std::array<int, 3> roles{};
        for (int i = 0; i < 3; ++i) {
            int lit = phi.clauses[c][i];
            int v = std::abs(lit);
            roles[i] = a.role("R" + std::to_string(i + 1) + cs);
            if (v <= m)
                cands[i] = x_cands[v];
            else
                cands[i] = {{b_f[v - m], lit < 0}, {b_t[v - m], lit > 0}};
        }
        int next = 0;
        for (const Cand& e0 : cands[0])
            for (const Cand& e1 : cands[1])
                for (const Cand& e2 : cands[2]) {
                    if (!(e0.witness || e1.witness || e2.witness)) continue;
                    int centre = a.ind("d" + cs + "_" + std::to_string(next++));
                    a.add_edge(centre, roles[0], e0.ind);
                    a.add_edge(centre, roles[1], e1.ind);
                    a.add_edge(centre, roles[2], e2.ind);
                }
    }
    a.finalize();
    return g;
}

ABox with_x_assignment(const AESatGadget& g, std::uint32_t assignment) {
    ABox a = g.abox;
    for (size_t v = 0; v < g.x_star.size(); ++v) {
        int id = a.find_ind(g.x_star[v]);
        a.set_label(id, ((assignment >> v) & 1u) ? kT : kF);
    }
    return a;
}

// ---------------------------------------------------------------------------
// Reachability gadgets

namespace {

void check_graph(const Graph& g, int s, int t) {
    if (g.nodes < 1) throw DomainError("the graph needs at least one node");
    if (s < 0 || s >= g.nodes || t < 0 || t >= g.nodes)
        throw DomainError("s and t must be graph nodes");
    if (s == t) throw DomainError("s and t must be distinct");
    for (const auto& e : g.edges)
        if (e.first < 0 || e.first >= g.nodes || e.second < 0 || e.second >= g.nodes)
            throw DomainError("edge endpoint out of range");
}

}  // namespace

ABox reach_undirected(const Query& q, const Graph& g, int s, int t) {
    check_graph(g, s, t);
    for (const auto& e : g.edges)
        if (e.first == e.second) throw DomainError("self-loops are not supported");
    NodeKinds nk = node_kinds(q);
    if (!nk.twins.empty() || nk.solitary_f.empty() || nk.solitary_t.empty())
        throw DomainError(
            "the undirected gadget needs a twinless query with solitary F and T nodes");

    // q'': all solitary T's merged into one node, all solitary F's into
    // another, every label dropped.
    Query qq;
    std::vector<int> to(q.node_count(), -1);
    int xm = qq.var("u_t");
    int ym = qq.var("u_f");
    for (int v : nk.solitary_t) to[v] = xm;
    for (int v : nk.solitary_f) to[v] = ym;
    for (int v = 0; v < q.node_count(); ++v)
        if (to[v] < 0) to[v] = qq.var("m_" + q.var_name(v));
    for (const auto& e : q.edges())
        qq.add_edge(to[e.src], qq.role(q.role_name(e.role)), to[e.dst]);
    qq.finalize();

    ABox a;
    std::vector<int> node(g.nodes);
    for (int v = 0; v < g.nodes; ++v) node[v] = a.ind("v" + std::to_string(v));
    std::vector<std::pair<int, int>> seen;
    NameGen gen("e");
    for (const auto& e : g.edges) {
        auto key = std::minmax(e.first, e.second);
        std::pair<int, int> norm{key.first, key.second};
        if (std::find(seen.begin(), seen.end(), norm) != seen.end()) continue;
        seen.push_back(norm);
        a.insert_query(qq, gen, {}, {{xm, node[e.first]}, {ym, node[e.second]}});
        a.insert_query(qq, gen, {}, {{xm, node[e.second]}, {ym, node[e.first]}});
    }
    a.set_label(node[s], kT);
    a.set_label(node[t], kF);
    a.finalize();
    return a;
}

ABox reach_dag(const Query& q, const Graph& g, int s, int t) {
    check_graph(g, s, t);
    // Kahn's algorithm; a remainder means a directed cycle (self-loops
    // included).
    {
        std::vector<int> indeg(g.nodes, 0);
        std::vector<std::vector<int>> out(g.nodes);
        for (const auto& e : g.edges) {
            ++indeg[e.second];
            out[e.first].push_back(e.second);
        }
        std::queue<int> ready;
        for (int v = 0; v < g.nodes; ++v)
            if (indeg[v] == 0) ready.push(v);
        int removed = 0;
        while (!ready.empty()) {
            int v = ready.front();
            ready.pop();
            ++removed;
            for (int w : out[v])
                if (--indeg[w] == 0) ready.push(w);
        }
        if (removed != g.nodes) throw DomainError("the graph must be acyclic");
    }
    if (!q.is_path() || q.has_twin() || cq_arity(q) != CqArity::One)
        throw DomainError("the dag gadget needs a twinless path 1-CQ");

    // An adjacent marked pair: consecutive marked nodes of opposite kinds,
    // in path order.
    std::vector<int> marked;
    for (int v : q.path_nodes())
        if (q.labels(v) != 0) marked.push_back(v);
    int t_node = -1, f_node = -1;
    for (size_t i = 0; i + 1 < marked.size(); ++i) {
        if (q.labels(marked[i]) == q.labels(marked[i + 1])) continue;
        t_node = has_label(q.labels(marked[i]), kT) ? marked[i] : marked[i + 1];
        f_node = has_label(q.labels(marked[i]), kF) ? marked[i] : marked[i + 1];
        break;
    }

    ABox a;
    std::vector<int> node(g.nodes);
    for (int v = 0; v < g.nodes; ++v) node[v] = a.ind("v" + std::to_string(v));
    std::vector<std::pair<int, int>> seen;
    NameGen gen("e");
    for (const auto& e : g.edges) {
        if (std::find(seen.begin(), seen.end(), e) != seen.end()) continue;
        seen.push_back(e);
        a.insert_query(q, gen, {{t_node, kA}, {f_node, kA}},
                       {{t_node, node[e.first]}, {f_node, node[e.second]}});
    }
    a.set_label(node[s], kT);
    a.set_label(node[t], kF);
    a.finalize();
    return a;
}

// ---------------------------------------------------------------------------
// Monotone circuit gadget

namespace {

// Whether a non-output gate's A-node can dodge the query decides the gate
// value; the shapes below chain interval copies of the oriented query
// between its marked nodes. "Slots" are the two junctions carrying the
// gate's operand values: an operand that is a circuit input becomes a
// fresh node labelled with its assigned constant, an operand that is a
// gate reuses that gate's merge node.
struct SlotIn {
    int existing = -1;
    LabelSet label = kA;
};

class GateGadgets {
public:
    GateGadgets(ABox& a, const Query& q, const PathProfile& pr)
        : a_(a), q_(q), pr_(pr), gen_("g") {}

    using Span = std::pair<int, int>;  // path positions, empty when equal

    Span L, R1, R, S, T;
    bool tall_and = false;  // case (i): |S| exceeds |R1|

    int fresh(const char* base, LabelSet l) {
        int id = a_.ind(gen_.fresh(base));
        if (l != 0) a_.set_label(id, l);
        return id;
    }

    int slot(const SlotIn& s, const char* base) {
        return s.existing >= 0 ? s.existing : fresh(base, s.label);
    }

    // Copies the stretch of the query between the two path positions,
    // reusing the given individuals for its endpoints; interior nodes are
    // fresh and keep their query labels.
    void span(Span sp, int head, int tail) {
        const auto& nodes = q_.path_nodes();
        const auto& roles = q_.path_roles();
        int cur = head;
        for (int p = sp.first; p < sp.second; ++p) {
            int nxt = tail;
            if (p + 1 != sp.second) {
                nxt = a_.ind(gen_.fresh(q_.var_name(nodes[p + 1])));
                a_.set_label(nxt, q_.labels(nodes[p + 1]));
            }
            a_.add_edge(cur, a_.role(q_.role_name(roles[p])), nxt);
            cur = nxt;
        }
    }

    // Head/tail stubs: the query stretch before the first marked node and
    // after the last one, when nonempty. The free end keeps the query's
    // own label.
    void head_into(int x) {
        if (L.first == L.second) return;
        span(L, boundary(L.first, "h"), x);
    }
    void tail_from(int x) {
        if (T.first == T.second) return;
        span(T, x, boundary(T.second, "e"));
    }

    // -- case (i): l = 0, aperiodic, r >= 2 --------------------------------
    int and_gate_i(const SlotIn& ia, const SlotIn& ib) {
        bool r_empty = R.first == R.second;
        if (tall_and) {
            int c = fresh("c", kA);
            int ap = fresh("ap", ia.existing >= 0 ? kA : ia.label);
            int bp = fresh("bp", ib.existing >= 0 ? kA : ib.label);
            int aj = slot(ia, "a");
            int bj = slot(ib, "b");
            int v1, u, v2, v3, z;
            if (r_empty) {
                u = v1 = fresh("u", kT);
                v3 = v2 = fresh("v", kT);
                z = ap;
            } else {
                v1 = fresh("v1", kT);
                u = fresh("u", kT);
                v2 = fresh("v2", kT);
                v3 = fresh("v3", kT);
                z = fresh("z", kT);
            }
            head_into(c);
            head_into(ap);
            head_into(bp);
            span(R1, c, ap);
            span(R1, ap, v1);
            span(R1, bp, v2);
            if (!r_empty) {
                span(R, v1, u);
                span(R, ap, z);
                span(R, v2, v3);
            }
            span(S, u, aj);
            span(S, z, bp);
            span(S, v3, bj);
            tail_from(aj);
            tail_from(bp);
            tail_from(bj);
            return c;
        }
        int c = fresh("c", kA);
        int aj = slot(ia, "a");
        int bj = slot(ib, "b");
        head_into(c);
        if (r_empty) {
            span(R1, c, bj);
        } else {
            int zp = fresh("z", kT);
            span(R1, c, zp);
            span(R, zp, bj);
        }
        span(S, bj, aj);
        tail_from(aj);
        return c;
    }

    int or_gate_i(const SlotIn& ia, const SlotIn& ib) {
        bool r_empty = R.first == R.second;
        int c = fresh("c", kA);
        head_into(c);
        auto branch = [&](const SlotIn& s, const char* base) {
            int j = slot(s, base);
            int w1 = fresh("w", kT);
            span(R1, c, w1);
            int w2 = w1;
            if (!r_empty) {
                w2 = fresh("w", kT);
                span(R, w1, w2);
            }
            span(S, w2, j);
            tail_from(j);
        };
        branch(ia, "a");
        branch(ib, "b");
        return c;
    }

    // -- case (iii): l >= 1 and r >= 1 -------------------------------------
    int and_gate_iii_out(const SlotIn& ia, const SlotIn& ib) {
        int aj = slot(ia, "a");
        int f = fresh("f", kF);
        int bj = slot(ib, "b");
        head_into(aj);
        span(R, aj, f);
        span(S, f, bj);
        tail_from(bj);
        return -1;
    }

    int or_gate_iii(const SlotIn& ia, const SlotIn& ib, bool output) {
        int aj = slot(ia, "a");
        int bj = slot(ib, "b");
        int mid = output ? fresh("f", kF) : fresh("z", kA);
        int w = fresh("w", kT);
        head_into(aj);
        head_into(bj);
        span(R, aj, mid);
        span(R, bj, mid);
        span(S, mid, w);
        tail_from(w);
        return output ? -1 : mid;
    }

    int and_gate_iii(const SlotIn& ia, const SlotIn& ib) {
        int aj = slot(ia, "a");
        int bj = slot(ib, "b");
        int z = fresh("z", kA);
        head_into(aj);
        span(R, aj, z);
        head_into(z);
        span(S, z, bj);
        tail_from(bj);
        // The ladder: enough rungs that a false operand cannot be papered
        // over by wrapping values around the chain.
        int rungs = q_.size() + 2;
        int prev = z;
        for (int j = 1; j <= rungs; ++j) {
            int aj2 = fresh("lad", kA);
            span(R, prev, aj2);
            if (j < rungs) head_into(aj2);
            int tj = fresh("lt", kT);
            span(S, aj2, tj);
            tail_from(tj);
            prev = aj2;
        }
        return prev;
    }

private:
    ABox& a_;
    const Query& q_;
    const PathProfile& pr_;
    NameGen gen_;

    int boundary(int pos, const char* base) {
        int id = fresh(base, 0);
        a_.set_label(id, q_.labels(q_.path_nodes()[pos]));
        return id;
    }
};

}  // namespace

ABox circuit_gadget(const Query& q, const MonotoneCircuit& c,
                    const std::vector<bool>& alpha) {
    c.validate();
    std::vector<int> ins = c.inputs();
    if (alpha.size() != ins.size())
        throw DomainError("alpha must assign a value to every circuit input");
    for (const auto& gt : c.gates)
        if (gt.kind != GateKind::Input && (gt.in0 == c.output || gt.in1 == c.output))
            throw DomainError("the output gate must not feed another gate");
    if (!q.is_path() || q.has_twin() || cq_arity(q) != CqArity::One)
        throw DomainError("the circuit gadget needs a twinless path 1-CQ");

    PathProfile pr0 = analyze_path(q);
    bool mirrored = pr0.mirrored;
    Query oq = mirrored ? swap_ft(q) : q;
    PathProfile pr = analyze_path(oq);
    if (periodicity(pr) != Periodicity::Aperiodic)
        throw DomainError("the circuit gadget needs an aperiodic query");
    bool reversed = pr.lr->second == 0;
    if (reversed) {
        oq = reverse_query(oq);
        pr = analyze_path(oq);
    }
    int l = pr.lr->first;
    int r = pr.lr->second;

    ABox a;
    GateGadgets gg(a, oq, pr);
    auto pos = [&](int node) { return pr.position[node]; };
    bool case_i = l == 0;
    if (case_i) {
        // Marked nodes x_0 (the F) then x_1..x_r; the gadget repeats the
        // first interval up to the first role-sequence mismatch.
        std::vector<int> xs{pr.solitary_f[0]};
        xs.insert(xs.end(), pr.solitary_t.begin(), pr.solitary_t.end());
        int n = r;
        for (int i = 2; i <= r; ++i)
            if (pr.interval(i) != pr.interval(1)) {
                n = i;
                break;
            }
        gg.L = {0, pos(xs[0])};
        gg.R1 = {pos(xs[0]), pos(xs[1])};
        gg.R = {pos(xs[1]), pos(xs[n - 1])};
        gg.S = {pos(xs[n - 1]), pos(xs[n])};
        gg.T = {pos(xs[n]), oq.size()};
        gg.tall_and = (gg.S.second - gg.S.first) > (gg.R1.second - gg.R1.first);
    } else {
        int xm1 = pr.solitary_t[l - 1];
        int x0 = pr.solitary_f[0];
        int xr = pr.solitary_t[l + r - 1];
        gg.L = {0, pos(xm1)};
        gg.R = {pos(xm1), pos(x0)};
        gg.S = {pos(x0), pos(xr)};
        gg.T = {pos(xr), oq.size()};
    }

    std::unordered_map<int, bool> input_value;
    for (size_t i = 0; i < ins.size(); ++i) input_value[ins[i]] = alpha[i];
    std::vector<int> merge(c.gates.size(), -1);
    auto slot_for = [&](int child) -> SlotIn {
        if (c.gates[child].kind == GateKind::Input)
            return {-1, input_value[child] ? kT : kF};
        return {merge[child], kA};
    };
    for (int gi = 0; gi < static_cast<int>(c.gates.size()); ++gi) {
        const Gate& gt = c.gates[gi];
        if (gt.kind == GateKind::Input) continue;
        SlotIn ia = slot_for(gt.in0);
        SlotIn ib = slot_for(gt.in1);
        if (case_i)
            merge[gi] = gt.kind == GateKind::And ? gg.and_gate_i(ia, ib)
                                                 : gg.or_gate_i(ia, ib);
        else if (gi == c.output)
            merge[gi] = gt.kind == GateKind::And ? gg.and_gate_iii_out(ia, ib)
                                                 : gg.or_gate_iii(ia, ib, true);
        else
            merge[gi] = gt.kind == GateKind::And ? gg.and_gate_iii(ia, ib)
                                                 : gg.or_gate_iii(ia, ib, false);
    }
    if (case_i) {
        // The output gate's merge node is pinned to F: the circuit value
        // is true iff every model embeds the query somewhere.
        int mo = merge[c.output];
        a.clear_label(mo, kA);
        a.set_label(mo, kF);
    }
    a.finalize();
    if (reversed) a = reverse_abox(a);
    if (mirrored) a = swap_ft(a);
    return a;
}

// ---------------------------------------------------------------------------
// Cogwheels

namespace {

// Positional facts about an oriented 2-CQ (first solitary T before first
// solitary F) that the contact tables are phrased in.
struct TwoCq {
    Query oriented;
    bool swapped = false;
    PathProfile pr;
    std::vector<int> ts, fs;  // node ids, path order
    int t1 = -1, f1 = -1, f2 = -1, tlast = -1, tprev = -1;
    int tbox = -1;  // last T before f1
    int ttri = -1;  // first T after f1, when any
    int tdia = -1;  // T before f2 at distance delta(t1, f1) from f2, when any
    bool f1_early = false;  // f1 precedes the last T

    int pos(int node) const { return pr.position[node]; }
};

TwoCq orient_two_cq(const Query& q, const std::string& what) {
    if (!q.is_path() || q.has_twin() || cq_arity(q) != CqArity::Two)
        throw DomainError(what + " needs a twinless path 2-CQ");
    PathProfile p0 = analyze_path(q);
    TwoCq o;
    o.swapped = p0.position[p0.solitary_f.front()] < p0.position[p0.solitary_t.front()];
    o.oriented = o.swapped ? swap_ft(q) : q;
    o.pr = analyze_path(o.oriented);
    o.ts = o.pr.solitary_t;
    o.fs = o.pr.solitary_f;
    o.t1 = o.ts.front();
    o.f1 = o.fs.front();
    o.f2 = o.fs[1];
    o.tlast = o.ts.back();
    o.tprev = o.ts[o.ts.size() - 2];
    o.f1_early = o.pos(o.f1) < o.pos(o.tlast);
    for (int t : o.ts) {
        if (o.pos(t) < o.pos(o.f1))
            o.tbox = t;
        else if (o.ttri < 0)
            o.ttri = t;
    }
    for (int t : o.ts)
        if (o.pos(t) < o.pos(o.f2) &&
            o.pos(o.f2) - o.pos(t) == o.pos(o.f1) - o.pos(o.t1)) {
            o.tdia = t;
            break;
        }
    return o;
}

int ord_in(const std::vector<int>& nodes, int node) {
    return static_cast<int>(std::find(nodes.begin(), nodes.end(), node) - nodes.begin()) + 1;
}

ContactChoice mk_choice(const TwoCq& tc, int tnode, int fnode) {
    return {ord_in(tc.ts, tnode), ord_in(tc.fs, fnode)};
}

void check_wheel_choices(const TwoCq& tc, const std::vector<ContactChoice>& ch) {
    int n = static_cast<int>(ch.size());
    for (int j = 0; j < n; ++j) {
        if (ch[j].t_ord < 1 || ch[j].t_ord > static_cast<int>(tc.ts.size()) ||
            ch[j].f_ord < 1 || ch[j].f_ord > static_cast<int>(tc.fs.size()))
            throw DomainError("copy " + std::to_string(j) + ": contact ordinal out of range");
        if (tc.pos(tc.ts[ch[j].t_ord - 1]) >= tc.pos(tc.fs[ch[j].f_ord - 1]))
            throw DomainError("copy " + std::to_string(j) +
                              ": its T-contact must precede its F-contact in the query");
    }
    for (int j = 0; j < n; ++j) {
        int jn = (j + 1) % n;
        int fn = tc.fs[ch[j].f_ord - 1];
        int tn = tc.ts[ch[jn].t_ord - 1];
        if (tc.pos(tn) >= tc.pos(fn))
            throw DomainError("contact " + std::to_string(j) + ": the T-node copy " +
                              std::to_string(jn) +
                              " glues there must precede the F-node copy " +
                              std::to_string(j) + " glues there in the query");
    }
}

struct WheelParts {
    std::vector<std::vector<int>> copies;
    std::vector<int> contacts;
    std::vector<std::array<int, 2>> nodes;
};

WheelParts build_wheel(ABox& a, const TwoCq& tc, const std::vector<ContactChoice>& ch,
                       const std::string& prefix) {
    int n = static_cast<int>(ch.size());
    if (n < 2) throw DomainError("a cogwheel needs at least two copies");
    check_wheel_choices(tc, ch);
    WheelParts w;
    std::vector<int> t_ind(n, -1), f_ind(n, -1);
    for (int j = 0; j < n; ++j) {
        int tn = tc.ts[ch[j].t_ord - 1];
        int fn = tc.fs[ch[j].f_ord - 1];
        std::unordered_map<int, LabelSet> relabel{{tn, kA}, {fn, kA}};
        std::unordered_map<int, int> glue;
        if (j > 0) glue[tn] = f_ind[j - 1];
        if (j == n - 1) glue[fn] = t_ind[0];
        NameGen gen(prefix + std::to_string(j) + "_");
        auto map = a.insert_query(tc.oriented, gen, relabel, glue);
        t_ind[j] = map[tn];
        f_ind[j] = map[fn];
        w.copies.push_back(std::move(map));
        w.nodes.push_back({tn, fn});
    }
    w.contacts = f_ind;
    return w;
}

}  // namespace

int Cogwheel::distance(int i, int j) const {
    int d = std::abs(i - j) % n;
    return std::min(d, n - d);
}

Cogwheel cogwheel(const Query& q, int n, const std::map<int, ContactChoice>& choice) {
    TwoCq tc = orient_two_cq(q, "a cogwheel");
    if (n < 2) throw DomainError("a cogwheel needs at least two copies");
    std::vector<ContactChoice> table(n);
    for (const auto& [j, cc] : choice) {
        if (j < 0 || j >= n)
            throw DomainError("contact choice for copy " + std::to_string(j) +
                              " is out of range");
        table[j] = cc;
    }
    Cogwheel out;
    out.oriented = tc.oriented;
    out.swapped_ft = tc.swapped;
    out.n = n;
    out.choice = table;
    WheelParts w = build_wheel(out.abox, tc, table, "c");
    out.abox.finalize();
    if (tc.swapped) out.abox = swap_ft(out.abox);
    out.copies = std::move(w.copies);
    out.contacts = std::move(w.contacts);
    out.contact_nodes = std::move(w.nodes);
    return out;
}

// ---------------------------------------------------------------------------
// Bikes

namespace {

// Contact table of one bike wheel: defaults (t1, f2) everywhere, the
// connection neighbourhoods (radius |q| around the F- and T-connection)
// overridden per the model lemma's case tables.
std::vector<ContactChoice> bike_wheel_table(const TwoCq& tc, int n, int ic, int jc,
                                            bool black) {
    int radius = tc.oriented.size();
    std::vector<ContactChoice> tab(n);
    auto put = [&](int copy, int tnode, int fnode) {
        tab[((copy % n) + n) % n] = mk_choice(tc, tnode, fnode);
    };
    int d_gap = tc.pos(tc.tlast) - tc.pos(tc.tprev);
    int d_tf = tc.pos(tc.f1) - tc.pos(tc.tlast);
    int d_ff = tc.pos(tc.f2) - tc.pos(tc.f1);
    int d_t1f1 = tc.pos(tc.f1) - tc.pos(tc.t1);
    for (int k = -radius; k <= radius; ++k) {
        if (k == 0) {
            if (black)
                put(jc, tc.tbox, tc.f1_early ? tc.f1 : tc.f2);
            else
                put(jc, tc.t1, (!tc.f1_early && d_gap == d_tf) ? tc.f2 : tc.f1);
        } else {
            put(jc + k, tc.t1, tc.f1);
        }
    }
    for (int k = -radius; k <= radius; ++k) {
        if (k == 0)
            put(ic, tc.t1, tc.f2);
        else if (k < 0)
            put(ic + k, tc.t1, tc.f1);
        else
            put(ic + k, (!tc.f1_early && d_ff < d_t1f1) ? tc.t1 : tc.tbox,
                (!tc.f1_early && d_ff >= d_t1f1) ? tc.f2 : tc.f1);
    }
    return tab;
}

int t_connection_white_node(const TwoCq& tc) {
    return tc.f1_early ? tc.ttri : tc.tlast;
}

}  // namespace

Bike bike(const Query& q, int n) {
    TwoCq tc = orient_two_cq(q, "a bike");
    int min_n = 4 * tc.oriented.size() + 2;
    if (n == 0) n = min_n;
    if (n < min_n)
        throw DomainError("a bike needs at least 4|q| + 2 copies per wheel");
    int ic = 0;
    int jc = n / 2;
    auto tab_black = bike_wheel_table(tc, n, ic, jc, true);
    auto tab_white = bike_wheel_table(tc, n, ic, jc, false);

    Bike out;
    out.oriented = tc.oriented;
    out.swapped_ft = tc.swapped;
    out.n = n;
    out.f_conn_black = out.f_conn_white = ic;
    out.t_conn_black = out.t_conn_white = jc;
    WheelParts wb = build_wheel(out.abox, tc, tab_black, "b");
    WheelParts ww = build_wheel(out.abox, tc, tab_white, "w");
    int ct_white = t_connection_white_node(tc);
    NameGen gen_f("qf_"), gen_t("qt_");
    out.qf_copy = out.abox.insert_query(
        tc.oriented, gen_f, {{tc.f1, kA}, {tc.f2, kA}},
        {{tc.f1, wb.contacts[ic]}, {tc.f2, ww.contacts[ic]}});
    out.qt_copy = out.abox.insert_query(
        tc.oriented, gen_t, {{tc.t1, kA}, {ct_white, kA}},
        {{tc.t1, wb.contacts[jc]}, {ct_white, ww.contacts[jc]}});
    out.abox.finalize();
    if (tc.swapped) out.abox = swap_ft(out.abox);
    out.contact_black = wb.contacts;
    out.contact_white = ww.contacts;

    std::map<int, ContactChoice> mb, mw;
    for (int j = 0; j < n; ++j) {
        mb[j] = tab_black[j];
        mw[j] = tab_white[j];
    }
    out.wheel_black = cogwheel(q, n, mb);
    out.wheel_white = cogwheel(q, n, mw);
    return out;
}

// ---------------------------------------------------------------------------
// The psi-gadget

namespace {

// Contact overrides around a clause connection at contact index x of a
// wheel, per the special-triple position z the clause glues there.
void apply_clause_neighbourhood(std::vector<ContactChoice>& tab, const TwoCq& tc, int n,
                                int x, int z) {
    int radius = tc.oriented.size();
    auto put = [&](int copy, int tnode, int fnode) {
        tab[((copy % n) + n) % n] = mk_choice(tc, tnode, fnode);
    };
    int d_gap = tc.pos(tc.tlast) - tc.pos(tc.tprev);
    int d_tf = tc.pos(tc.f1) - tc.pos(tc.tlast);
    int d_ff = tc.pos(tc.f2) - tc.pos(tc.f1);
    int d_t1f1 = tc.pos(tc.f1) - tc.pos(tc.t1);
    for (int k = -radius; k <= radius; ++k) {
        int copy = x + k;
        switch (z) {
            case 0:
                if (k == 0)
                    put(copy, tc.tbox, tc.f1_early ? tc.f1 : tc.f2);
                else
                    put(copy, tc.t1, tc.f1);
                break;
            case 1:
                if (k <= 0) {
                    int tn = (tc.f1_early && tc.tdia >= 0) ? tc.tdia : tc.t1;
                    int fn;
                    if (tc.f1_early)
                        fn = tc.f2;
                    else
                        fn = (k == 0 && d_gap == d_tf) ? tc.f2 : tc.f1;
                    put(copy, tn, fn);
                } else {
                    put(copy, tc.f1_early ? tc.tbox : tc.t1, tc.f1);
                }
                break;
            default:
                if (k == 0)
                    put(copy, tc.t1, tc.f2);
                else if (k < 0)
                    put(copy, tc.t1, tc.f1);
                else
                    put(copy, (!tc.f1_early && d_ff < d_t1f1) ? tc.t1 : tc.tbox,
                        (!tc.f1_early && d_ff >= d_t1f1) ? tc.f2 : tc.f1);
                break;
        }
    }
}

}  // namespace

PsiGadget psi_gadget(const Query& q, const ThreeCNF& psi) {
    psi.validate();
    TwoCq tc = orient_two_cq(q, "the psi-gadget");
    int qsize = tc.oriented.size();
    int clause_count = static_cast<int>(psi.clauses.size());
    int spacing = 2 * qsize + 1;

    int s0 = tc.t1;
    int s1 = tc.f1_early ? tc.f1 : tc.tlast;
    int s2 = tc.f2;
    auto special_node = [&](int z) { return z == 0 ? s0 : z == 1 ? s1 : s2; };

    // Which wheel each literal's gluing lands on: the black wheel when the
    // literal's sign and the glued node's kind disagree about "true".
    struct GlueRef {
        int c;
        int z;
    };
    std::vector<std::array<std::vector<GlueRef>, 2>> pending(psi.variables + 1);
    for (int c = 0; c < clause_count; ++c)
        for (int z = 0; z < 3; ++z) {
            int lit = psi.clauses[c][z];
            bool is_f = has_label(tc.oriented.labels(special_node(z)), kF);
            bool black = (lit > 0) == is_f;
            pending[std::abs(lit)][black ? 0 : 1].push_back({c, z});
        }

    // Connection slots sit at contact indices 0, stride, 2*stride, ...; the
    // stride exceeds the override radius by one so that a default copy
    // buffers every pair of neighbourhoods. n grows past the floor when
    // repeated literals crowd one wheel.
    int stride = spacing + 1;
    int max_slots = 2;
    for (int p = 1; p <= psi.variables; ++p)
        for (int w = 0; w < 2; ++w)
            max_slots = std::max(max_slots, 2 + static_cast<int>(pending[p][w].size()));
    int n = std::max((clause_count + 2) * spacing, max_slots * stride);

    PsiGadget out;
    out.oriented = tc.oriented;
    out.swapped_ft = tc.swapped;
    out.n = n;
    out.psi = psi;
    out.special = {s0, s1, s2};
    ABox& a = out.abox;

    std::map<std::pair<int, int>, ClauseTarget> target_of;
    int ct_white = t_connection_white_node(tc);
    for (int p = 1; p <= psi.variables; ++p) {
        auto tab_black = bike_wheel_table(tc, n, 0, stride, true);
        auto tab_white = bike_wheel_table(tc, n, 0, stride, false);
        for (int w = 0; w < 2; ++w) {
            auto& tab = w == 0 ? tab_black : tab_white;
            const auto& refs = pending[p][w];
            for (size_t s = 0; s < refs.size(); ++s) {
                int x = static_cast<int>(2 + s) * stride;
                apply_clause_neighbourhood(tab, tc, n, x, refs[s].z);
                target_of[{refs[s].c, refs[s].z}] = {p, w == 1, x};
            }
        }
        std::string vp = "v" + std::to_string(p);
        WheelParts wb = build_wheel(a, tc, tab_black, vp + "b");
        WheelParts ww = build_wheel(a, tc, tab_white, vp + "w");
        NameGen gen_f(vp + "qf_"), gen_t(vp + "qt_");
        a.insert_query(tc.oriented, gen_f, {{tc.f1, kA}, {tc.f2, kA}},
                       {{tc.f1, wb.contacts[0]}, {tc.f2, ww.contacts[0]}});
        a.insert_query(tc.oriented, gen_t, {{tc.t1, kA}, {ct_white, kA}},
                       {{tc.t1, wb.contacts[stride]}, {ct_white, ww.contacts[stride]}});
        out.bikes.push_back({wb.contacts, ww.contacts, 0, stride});
    }

    for (int c = 0; c < clause_count; ++c) {
        std::unordered_map<int, LabelSet> relabel{{s0, kA}, {s1, kA}, {s2, kA}};
        std::unordered_map<int, int> glue;
        std::array<ClauseTarget, 3> wiring{};
        for (int z = 0; z < 3; ++z) {
            ClauseTarget tgt = target_of[{c, z}];
            wiring[z] = tgt;
            const VariableBike& vb = out.bikes[tgt.variable - 1];
            glue[special_node(z)] =
                (tgt.white ? vb.contact_white : vb.contact_black)[tgt.contact];
        }
        NameGen gen("q" + std::to_string(c + 1) + "_");
        out.clause_copies.push_back(a.insert_query(tc.oriented, gen, relabel, glue));
        out.wiring.push_back(wiring);
    }
    a.finalize();
    if (tc.swapped) a = swap_ft(a);
    return out;
}

ABox assignment_model(const PsiGadget& g, std::uint32_t assignment) {
    ABox m = g.abox;
    for (int p = 1; p <= g.psi.variables; ++p) {
        bool value = (assignment >> (p - 1)) & 1u;
        LabelSet black = (value != g.swapped_ft) ? kT : kF;
        LabelSet white = black == kT ? kF : kT;
        for (int ind : g.bikes[p - 1].contact_black) {
            m.clear_label(ind, kA);
            m.set_label(ind, black);
        }
        for (int ind : g.bikes[p - 1].contact_white) {
            m.clear_label(ind, kA);
            m.set_label(ind, white);
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Verification

std::string reduction_kind_name(ReductionKind kind) {
    switch (kind) {
        case ReductionKind::Chessboard: return "chessboard";
        case ReductionKind::ForallExists: return "ae3sat";
        case ReductionKind::ReachU: return "reach-u";
        case ReductionKind::ReachDag: return "reach-dag";
        case ReductionKind::Circuit: return "circuit";
        case ReductionKind::Wheel: return "wheel";
        case ReductionKind::Bike: return "bike";
        case ReductionKind::PsiStructured: return "psi";
    }
    return "unknown";
}

std::optional<ReductionKind> parse_reduction_kind(const std::string& name) {
    if (name == "chessboard") return ReductionKind::Chessboard;
    if (name == "ae3sat") return ReductionKind::ForallExists;
    if (name == "reach-u") return ReductionKind::ReachU;
    if (name == "reach-dag") return ReductionKind::ReachDag;
    if (name == "circuit") return ReductionKind::Circuit;
    if (name == "wheel") return ReductionKind::Wheel;
    if (name == "bike") return ReductionKind::Bike;
    if (name == "psi") return ReductionKind::PsiStructured;
    return std::nullopt;
}

namespace {

// Lowest failing index wins, so parallel runs report deterministically.
class FailureLog {
public:
    void record(std::uint64_t idx, std::string msg) {
        std::lock_guard<std::mutex> lock(mu_);
        if (!failed_ || idx < idx_) {
            failed_ = true;
            idx_ = idx;
            msg_ = std::move(msg);
        }
    }
    bool failed() const { return failed_; }
    const std::string& message() const { return msg_; }

private:
    std::mutex mu_;
    bool failed_ = false;
    std::uint64_t idx_ = 0;
    std::string msg_;
};

template <typename Body>
void for_each_index(std::uint64_t count, int jobs, Body&& body) {
#ifdef _OPENMP
    if (jobs != 1) {
        int threads = jobs == 0 ? omp_get_max_threads() : jobs;
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
        for (long long i = 0; i < static_cast<long long>(count); ++i)
            body(static_cast<std::uint64_t>(i));
        return;
    }
#endif
    for (std::uint64_t i = 0; i < count; ++i) body(i);
}

const Query& need_query(const VerifyParams& p, const char* kind) {
    if (!p.q) throw DomainError(std::string("verify ") + kind + " needs a query");
    return *p.q;
}

// -- chessboard ground truth: domino tilings are perfect matchings -----------

bool board_has_perfect_matching(const ChessboardGadget& g) {
    std::map<std::pair<int, int>, int> index;
    for (size_t i = 0; i < g.squares.size(); ++i)
        index[{g.squares[i].i, g.squares[i].j}] = static_cast<int>(i);
    std::vector<int> dark, light;  // by square colour
    std::vector<int> side(g.squares.size(), -1);
    for (size_t i = 0; i < g.squares.size(); ++i) {
        if ((g.squares[i].i + g.squares[i].j) % 2 == 0) {
            side[i] = static_cast<int>(dark.size());
            dark.push_back(static_cast<int>(i));
        } else {
            side[i] = static_cast<int>(light.size());
            light.push_back(static_cast<int>(i));
        }
    }
    if (dark.size() != light.size()) return false;
    std::vector<std::vector<int>> adj(dark.size());
    const int di[4] = {-1, 1, 0, 0};
    const int dj[4] = {0, 0, -1, 1};
    for (size_t d = 0; d < dark.size(); ++d) {
        const BoardSquare& sq = g.squares[dark[d]];
        for (int k = 0; k < 4; ++k) {
            auto it = index.find({sq.i + di[k], sq.j + dj[k]});
            if (it != index.end()) adj[d].push_back(side[it->second]);
        }
    }
    std::vector<int> match(light.size(), -1);
    std::vector<char> used;
    std::function<bool(int)> augment = [&](int u) -> bool {
        for (int v : adj[u]) {
            if (used[v]) continue;
            used[v] = 1;
            if (match[v] < 0 || augment(match[v])) {
                match[v] = u;
                return true;
            }
        }
        return false;
    };
    size_t matched = 0;
    for (size_t d = 0; d < dark.size(); ++d) {
        used.assign(light.size(), 0);
        if (augment(static_cast<int>(d))) ++matched;
    }
    return matched == dark.size();
}

VerificationReport verify_chessboard(const VerifyParams& p, const std::string& oracle) {
    VerificationReport rep;
    rep.kind = ReductionKind::Chessboard;
    rep.pass = true;
    if (is_total(p.ontology))
        throw DomainError("the chessboard reduction needs an A-covering ontology");
    std::mt19937_64 rng(p.seed);
    for (int k = 1; k <= p.board_n && rep.pass; ++k) {
        ChessboardGadget g = chessboard(k);
        bool tileable = board_has_perfect_matching(g);
        bool yes = certain_answer(p.ontology, g.query, g.abox, oracle, p.budget).answer;
        ++rep.instances;
        if (yes == tileable) {
            rep.pass = false;
            rep.counterexample = "board n=" + std::to_string(k) + ": certain answer " +
                                 (yes ? "yes" : "no") + " but the board is " +
                                 (tileable ? "tileable" : "untileable");
            break;
        }
        // Labeling probes: a model misses the query iff it covers the
        // board (every square exactly one T contact).
        std::vector<int> open = undecided_individuals(g.abox, p.ontology);
        std::vector<Labeling> probes;
        Labeling base{open, std::vector<std::uint8_t>(open.size(), kF)};
        probes.push_back(base);
        Labeling all_t = base;
        std::fill(all_t.choice.begin(), all_t.choice.end(), kT);
        probes.push_back(all_t);
        for (int s = 0; s < p.samples && !open.empty(); ++s) {
            Labeling l = base;
            for (auto& c : l.choice) c = (rng() & 1u) ? kT : kF;
            probes.push_back(l);
        }
        for (const Labeling& probe : probes) {
            std::unordered_map<int, LabelSet> chosen;
            for (size_t i = 0; i < probe.inds.size(); ++i)
                chosen[probe.inds[i]] = probe.choice[i];
            bool covering = true;
            for (const BoardSquare& sq : g.squares) {
                int t_count = 0;
                for (int cind : sq.contact) {
                    LabelSet l = g.abox.unary(cind);
                    auto it = chosen.find(cind);
                    if (it != chosen.end()) l |= it->second;
                    if (has_label(l, kT)) ++t_count;
                }
                if (t_count != 1) {
                    covering = false;
                    break;
                }
            }
            bool hom = find_homomorphism(g.query, g.abox, probe).has_value();
            ++rep.instances;
            if (hom == covering) {
                rep.pass = false;
                rep.counterexample = "board n=" + std::to_string(k) + ": a " +
                                     (covering ? "covering" : "non-covering") +
                                     " labeling " + (hom ? "admits" : "excludes") +
                                     " a homomorphism";
                break;
            }
        }
    }
    rep.note = "certain answers vs perfect-matching tileability, plus labeling probes";
    return rep;
}

// -- forall-exists ------------------------------------------------------------

VerificationReport verify_forall_exists(const VerifyParams& p, const std::string& oracle) {
    VerificationReport rep;
    rep.kind = ReductionKind::ForallExists;
    rep.pass = true;
    if (is_total(p.ontology))
        throw DomainError("the forall-exists reduction needs an A-covering ontology");
    std::vector<ForallExists3SAT> formulas;
    if (p.phi) {
        formulas.push_back(*p.phi);
    } else {
        for (int x = 0; x <= p.max_x; ++x)
            for (int y = 0; y <= p.max_y; ++y) {
                int vars = x + y;
                if (vars < 3) continue;
                std::vector<std::array<int, 3>> pool;
                for (int a = 1; a <= vars; ++a)
                    for (int b = a + 1; b <= vars; ++b)
                        for (int c = b + 1; c <= vars; ++c)
                            for (int signs = 0; signs < 8; ++signs)
                                pool.push_back({(signs & 1) ? -a : a,
                                                (signs & 2) ? -b : b,
                                                (signs & 4) ? -c : c});
                std::vector<int> pick;
                std::function<void(size_t)> grow = [&](size_t from) {
                    if (!pick.empty()) {
                        ForallExists3SAT f;
                        f.x_vars = x;
                        f.y_vars = y;
                        for (int idx : pick) f.clauses.push_back(pool[idx]);
                        formulas.push_back(std::move(f));
                    }
                    if (static_cast<int>(pick.size()) == p.max_clauses) return;
                    for (size_t i = from; i < pool.size(); ++i) {
                        pick.push_back(static_cast<int>(i));
                        grow(i + 1);
                        pick.pop_back();
                    }
                };
                grow(0);
            }
    }
    for (const ForallExists3SAT& f : formulas) {
        bool truth = qbf_truth(f);
        AESatGadget g = forall_exists(f, p.ontology);
        bool yes = certain_answer(p.ontology, g.query, g.abox, oracle, p.budget).answer;
        ++rep.instances;
        if (yes != truth) {
            rep.pass = false;
            rep.counterexample = "formula '" + serialize_qdimacs(f) + "': certain answer " +
                                 (yes ? "yes" : "no") + ", QBF " +
                                 (truth ? "true" : "false");
            break;
        }
        bool broke = false;
        for (std::uint32_t xa = 0; xa < (1u << f.x_vars); ++xa) {
            ABox fixed = with_x_assignment(g, xa);
            bool hom = find_homomorphism(g.query, fixed).has_value();
            bool inner = ae_inner_sat(f, xa);
            ++rep.instances;
            if (hom != inner) {
                rep.pass = false;
                rep.counterexample = "formula '" + serialize_qdimacs(f) +
                                     "', x-assignment " + std::to_string(xa) +
                                     ": homomorphism " + (hom ? "exists" : "missing") +
                                     ", inner formula " +
                                     (inner ? "satisfiable" : "unsatisfiable");
                broke = true;
                break;
            }
        }
        if (broke) break;
    }
    rep.note = "certain answers vs QBF truth plus the per-x-assignment model check";
    return rep;
}

// -- reachability --------------------------------------------------------------

VerificationReport verify_reach(const VerifyParams& p, const std::string& oracle,
                                bool directed) {
    VerificationReport rep;
    rep.kind = directed ? ReductionKind::ReachDag : ReductionKind::ReachU;
    rep.pass = true;
    const Query& q = need_query(p, directed ? "reach-dag" : "reach-u");
    Ontology o = p.ontology;
    if (directed && is_total(o))
        throw DomainError("the dag reduction needs an A-covering ontology");
    if (!directed && !is_total(o)) o = Ontology::CovTop;
    for (int k = 2; k <= p.max_nodes && rep.pass; ++k) {
        std::vector<std::pair<int, int>> slots;
        for (int u = 0; u < k; ++u)
            for (int v = u + 1; v < k; ++v) slots.push_back({u, v});
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << slots.size()) && rep.pass;
             ++mask) {
            Graph g;
            g.nodes = k;
            for (size_t b = 0; b < slots.size(); ++b)
                if ((mask >> b) & 1u) g.edges.push_back(slots[b]);
            // Ground truth reachability.
            std::vector<std::vector<char>> reach(k, std::vector<char>(k, 0));
            for (int s = 0; s < k; ++s) {
                std::queue<int> bfs;
                bfs.push(s);
                reach[s][s] = 1;
                while (!bfs.empty()) {
                    int u = bfs.front();
                    bfs.pop();
                    for (const auto& e : g.edges) {
                        int next = -1;
                        if (e.first == u) next = e.second;
                        else if (!directed && e.second == u) next = e.first;
                        if (next >= 0 && !reach[s][next]) {
                            reach[s][next] = 1;
                            bfs.push(next);
                        }
                    }
                }
            }
            for (int s = 0; s < k && rep.pass; ++s)
                for (int t = 0; t < k && rep.pass; ++t) {
                    if (s == t) continue;
                    ABox a = directed ? reach_dag(q, g, s, t) : reach_undirected(q, g, s, t);
                    bool yes = certain_answer(o, q, a, oracle, p.budget).answer;
                    ++rep.instances;
                    if (yes != static_cast<bool>(reach[s][t])) {
                        rep.pass = false;
                        rep.counterexample =
                            "n=" + std::to_string(k) + " mask=" + std::to_string(mask) +
                            " s=" + std::to_string(s) + " t=" + std::to_string(t) +
                            ": certain answer " + (yes ? "yes" : "no") + ", " +
                            (reach[s][t] ? "reachable" : "unreachable");
                    }
                }
        }
    }
    rep.note = directed ? "all dags vs directed reachability"
                        : "all undirected graphs vs connectivity (under a total ontology)";
    return rep;
}

// -- circuits ------------------------------------------------------------------

VerificationReport verify_circuit(const VerifyParams& p, const std::string& oracle) {
    VerificationReport rep;
    rep.kind = ReductionKind::Circuit;
    rep.pass = true;
    const Query& q = need_query(p, "circuit");
    if (is_total(p.ontology))
        throw DomainError("the circuit reduction needs an A-covering ontology");
    std::vector<MonotoneCircuit> circuits = enumerate_circuits(p.max_gates);
    struct Case {
        int circuit;
        std::uint32_t alpha;
    };
    std::vector<Case> cases;
    for (size_t ci = 0; ci < circuits.size(); ++ci) {
        size_t m = circuits[ci].inputs().size();
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask)
            cases.push_back({static_cast<int>(ci), mask});
    }
    FailureLog log;
    for_each_index(cases.size(), p.jobs, [&](std::uint64_t i) {
        const MonotoneCircuit& c = circuits[cases[i].circuit];
        size_t m = c.inputs().size();
        std::vector<bool> alpha(m);
        for (size_t b = 0; b < m; ++b) alpha[b] = (cases[i].alpha >> b) & 1u;
        bool want = eval_circuit(c, alpha);
        ABox a = circuit_gadget(q, c, alpha);
        bool yes = certain_answer(p.ontology, q, a, oracle, p.budget).answer;
        if (yes != want)
            log.record(i, "circuit '" + serialize_circuit(c) + "' alpha=" +
                              std::to_string(cases[i].alpha) + ": certain answer " +
                              (yes ? "yes" : "no") + ", circuit value " +
                              (want ? "true" : "false"));
    });
    rep.instances = static_cast<long>(cases.size());
    if (log.failed()) {
        rep.pass = false;
        rep.counterexample = log.message();
    }
    rep.note = "all circuits with up to " + std::to_string(p.max_gates) +
               " gates vs direct evaluation";
    return rep;
}

// -- wheel / bike / psi ----------------------------------------------------------

VerificationReport verify_wheel(const VerifyParams& p) {
    VerificationReport rep;
    rep.kind = ReductionKind::Wheel;
    rep.pass = true;
    const Query& q = need_query(p, "wheel");
    int n = p.wheel_n == 0 ? q.size() : p.wheel_n;
    if (n < q.size())
        throw DomainError("the wheel lemma needs at least |q| copies");
    if (n > 26) throw DomainError("wheel verification is limited to 26 contacts");
    Cogwheel w = cogwheel(q, n);
    std::vector<int> inds = w.contacts;
    std::sort(inds.begin(), inds.end());
    std::uint64_t full = (std::uint64_t(1) << n) - 1;
    FailureLog log;
    for_each_index(full + 1, p.jobs, [&](std::uint64_t mask) {
        Labeling lab;
        lab.inds = inds;
        lab.choice.resize(inds.size());
        for (int b = 0; b < n; ++b) lab.choice[b] = ((mask >> b) & 1u) ? kT : kF;
        bool hom = find_homomorphism(q, w.abox, lab).has_value();
        bool mixed = mask != 0 && mask != full;
        if (hom != mixed)
            log.record(mask, "n=" + std::to_string(n) + " labeling mask=" +
                                 std::to_string(mask) + ": homomorphism " +
                                 (hom ? "exists" : "missing") + " on a " +
                                 (mixed ? "mixed" : "constant") + " labeling");
    });
    rep.instances = static_cast<long>(full + 1);
    if (log.failed()) {
        rep.pass = false;
        rep.counterexample = log.message();
    }
    rep.note = "wheel model lemma, both directions, all contact labelings";
    return rep;
}

VerificationReport verify_bike(const VerifyParams& p) {
    VerificationReport rep;
    rep.kind = ReductionKind::Bike;
    rep.pass = true;
    const Query& q = need_query(p, "bike");
    Bike b = bike(q, p.wheel_n);
    std::vector<int> inds;
    inds.insert(inds.end(), b.contact_black.begin(), b.contact_black.end());
    inds.insert(inds.end(), b.contact_white.begin(), b.contact_white.end());
    std::sort(inds.begin(), inds.end());
    std::vector<char> is_black(b.abox.ind_count(), 0);
    for (int ind : b.contact_black) is_black[ind] = 1;
    auto make = [&](LabelSet black, LabelSet white) {
        Labeling lab;
        lab.inds = inds;
        for (int ind : inds) lab.choice.push_back(is_black[ind] ? black : white);
        return lab;
    };
    auto run = [&](const Labeling& lab, bool expect_hom, const std::string& what) {
        if (!rep.pass) return;
        bool hom = find_homomorphism(q, b.abox, lab).has_value();
        ++rep.instances;
        if (hom != expect_hom) {
            rep.pass = false;
            rep.counterexample = what + ": homomorphism " + (hom ? "exists" : "missing");
        }
    };
    run(make(kT, kF), false, "canonical labeling (black T, white F)");
    run(make(kF, kT), false, "canonical labeling (black F, white T)");
    run(make(kT, kT), true, "both wheels all T");
    std::mt19937_64 rng(p.seed);
    int produced = 0;
    while (produced < p.samples && rep.pass) {
        Labeling lab;
        lab.inds = inds;
        for (size_t i = 0; i < inds.size(); ++i)
            lab.choice.push_back((rng() & 1u) ? kT : kF);
        bool black_t = true, black_f = true, white_t = true, white_f = true;
        for (size_t i = 0; i < inds.size(); ++i) {
            bool t = lab.choice[i] == kT;
            if (is_black[inds[i]]) {
                black_t &= t;
                black_f &= !t;
            } else {
                white_t &= t;
                white_f &= !t;
            }
        }
        if ((black_t && white_f) || (black_f && white_t)) continue;  // canonical
        ++produced;
        run(lab, true, "sampled violating labeling #" + std::to_string(produced));
    }
    rep.note = "canonical opposite labelings exclude the query; " +
               std::to_string(produced) + " sampled violations admit it";
    return rep;
}

VerificationReport verify_psi(const VerifyParams& p) {
    VerificationReport rep;
    rep.kind = ReductionKind::PsiStructured;
    rep.pass = true;
    const Query& q = need_query(p, "psi");
    ThreeCNF psi = p.psi;
    psi.validate();
    if (psi.variables > 20)
        throw DomainError("psi verification is limited to 20 variables");
    PsiGadget g = psi_gadget(q, psi);
    FailureLog log;
    for_each_index(std::uint64_t(1) << psi.variables, p.jobs, [&](std::uint64_t mask) {
        ABox m = assignment_model(g, static_cast<std::uint32_t>(mask));
        bool hom = find_homomorphism(q, m).has_value();
        bool falsifies = !eval_cnf(psi, static_cast<std::uint32_t>(mask));
        if (hom != falsifies)
            log.record(mask, "assignment " + std::to_string(mask) + ": homomorphism " +
                                 (hom ? "exists" : "missing") + " but the assignment " +
                                 (falsifies ? "falsifies" : "satisfies") + " psi");
    });
    rep.instances = static_cast<long>(std::uint64_t(1) << psi.variables);
    if (log.failed()) {
        rep.pass = false;
        rep.counterexample = log.message();
    }
    rep.note =
        "assignment-induced models only; mixed labelings rest on the separately "
        "verified wheel and bike lemmas";
    return rep;
}

}  // namespace

VerificationReport verify_reduction(ReductionKind kind, const VerifyParams& params,
                                    const std::string& oracle) {
    switch (kind) {
        case ReductionKind::Chessboard: return verify_chessboard(params, oracle);
        case ReductionKind::ForallExists: return verify_forall_exists(params, oracle);
        case ReductionKind::ReachU: return verify_reach(params, oracle, false);
        case ReductionKind::ReachDag: return verify_reach(params, oracle, true);
        case ReductionKind::Circuit: return verify_circuit(params, oracle);
        case ReductionKind::Wheel: return verify_wheel(params);
        case ReductionKind::Bike: return verify_bike(params);
        case ReductionKind::PsiStructured: return verify_psi(params);
    }
    throw DomainError("unknown reduction kind");
}

}  // namespace sirup
