// Command-line front end: parsing, classification, answering, rewriting,
// cactus exploration, gadget synthesis and verification as reproducible
// batch runs. Exit codes: 0 success, 1 domain error, 2 usage error,
// 3 verification failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "sirup/abox.hpp"
#include "sirup/base.hpp"
#include "sirup/cactus.hpp"
#include "sirup/classify.hpp"
#include "sirup/datalog.hpp"
#include "sirup/gadgets.hpp"
#include "sirup/hom.hpp"
#include "sirup/oracle.hpp"
#include "sirup/query.hpp"

namespace {

using namespace sirup;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerification = 3;

struct VerificationFailure {
    std::string message;
};

// Collects the human-readable report plus the key=value sidecar. The
// sidecar goes to --sidecar when given, otherwise it is appended to the
// report output after a blank line.
class Report {
public:
    explicit Report(std::string sidecar_path) : sidecar_path_(std::move(sidecar_path)) {}

    void line(const std::string& text) { text_ += text + "\n"; }
    void kv(const std::string& key, const std::string& value) {
        keys_ += key + " = " + value + "\n";
    }
    void kv(const std::string& key, bool value) {
        kv(key, std::string(value ? "true" : "false"));
    }
    template <typename T,
              std::enable_if_t<std::is_integral_v<T> && !std::is_same_v<T, bool>,
                               int> = 0>
    void kv(const std::string& key, T value) {
        kv(key, std::to_string(value));
    }

    void emit() const {
        std::cout << text_;
        if (sidecar_path_.empty()) {
            if (!keys_.empty()) std::cout << "\n" << keys_;
        } else {
            std::ofstream out(sidecar_path_);
            if (!out) throw DomainError("cannot write sidecar '" + sidecar_path_ + "'");
            out << keys_;
        }
    }

private:
    std::string sidecar_path_;
    std::string text_;
    std::string keys_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write '" + path + "'");
    out << text;
}

Query load_query(const std::string& path) { return parse_query(slurp(path)); }
ABox load_abox(const std::string& path) { return parse_abox(slurp(path)); }

Ontology to_ontology(const std::string& name) { return parse_ontology(name); }

uint64_t effective_seed(uint64_t flag_value) {
    if (const char* env = std::getenv("SIRUP_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw DomainError("SIRUP_SEED must be an unsigned integer");
        }
    }
    return flag_value;
}

// Round-trip self-check every ABox-producing subcommand runs before
// writing: the serialized text must parse back to the same structure and
// re-serialize stably.
void self_check(const ABox& a, const std::string& text) {
    ABox back = parse_abox(text);
    if (back.ind_count() != a.ind_count() ||
        back.edges().size() != a.edges().size())
        throw VerificationFailure{"round-trip self-check failed: structure differs"};
    for (int i = 0; i < a.ind_count(); ++i) {
        int j = back.find_ind(a.ind_name(i));
        if (j < 0 || back.unary(j) != a.unary(i))
            throw VerificationFailure{"round-trip self-check failed at individual '" +
                                      a.ind_name(i) + "'"};
    }
    if (serialize_abox(parse_abox(serialize_abox(back))) != serialize_abox(back))
        throw VerificationFailure{"round-trip self-check failed: unstable text"};
}

// Writes (or prints) a gadget ABox with its provenance comment block.
void write_abox(const std::string& out_path, const ABox& a,
                const std::vector<std::string>& provenance, Report& rep) {
    std::string body = serialize_abox(a);
    self_check(a, body);
    std::string text;
    for (const std::string& p : provenance) text += "# provenance: " + p + "\n";
    text += body;
    if (out_path.empty()) {
        std::cout << text;
    } else {
        spill(out_path, text);
        rep.line("wrote " + out_path);
    }
    rep.kv("individuals", a.ind_count());
    rep.kv("edges", static_cast<long long>(a.edges().size()));
    rep.kv("self_check", true);
}

std::string yn(bool b) { return b ? "yes" : "no"; }

// ---------------------------------------------------------------------------
// classify

int run_classify(const std::string& cq, const std::string& ontology,
                 const std::string& sidecar) {
    Report rep(sidecar);
    Verdict v = tetrachotomy(load_query(cq), to_ontology(ontology));
    rep.line(verdict_text(v));
    rep.kv("class", class_name(v.cls));
    rep.kv("reason", reason_name(v.reason));
    rep.kv("mirrored", v.mirrored);
    rep.kv("fo_disjuncts", static_cast<long long>(v.fo_rewriting.size()));
    rep.kv("has_program", v.program.has_value());
    rep.emit();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// answer

int run_answer(const std::string& cq, const std::string& abox,
               const std::string& ontology, const std::string& method, int jobs,
               uint64_t enum_cap, uint64_t clause_cap, const std::string& sidecar) {
    Report rep(sidecar);
    Query q = load_query(cq);
    ABox a = load_abox(abox);
    Ontology o = to_ontology(ontology);
    OracleBudget budget;
    budget.enum_cap = enum_cap;
    budget.clause_cap = clause_cap;
    if (method == "both") {
        CertainAnswerReport e = certain_answer_enum(o, q, a, budget, jobs);
        CertainAnswerReport s = certain_answer_sat(o, q, a, budget);
        bool agree = e.answer == s.answer;
        rep.line(yn(e.answer) + " / " + yn(s.answer) +
                 (agree ? " (oracles agree)" : " (ORACLES DISAGREE)"));
        rep.kv("answer_enum", yn(e.answer));
        rep.kv("answer_sat", yn(s.answer));
        rep.kv("agree", agree);
        if (!agree) {
            rep.emit();
            std::cerr << "error: the two oracles disagree\n";
            return kExitVerification;
        }
        if (!e.answer && e.witness)
            rep.line("counter-model: " + labeling_to_string(a, *e.witness));
    } else {
        CertainAnswerReport r = certain_answer(o, q, a, method, budget, jobs);
        rep.line(yn(r.answer));
        rep.kv("answer", yn(r.answer));
        rep.kv("method", method);
        if (!r.answer && r.witness)
            rep.line("counter-model: " + labeling_to_string(a, *r.witness));
    }
    rep.emit();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// rewrite

int run_rewrite_fo(const std::string& cq, const std::string& ontology, int max_depth,
                   std::size_t count_cap, const std::string& out,
                   const std::string& sidecar) {
    Report rep(sidecar);
    FoProbeResult r = fo_probe(load_query(cq), to_ontology(ontology), max_depth,
                               count_cap);
    switch (r.kind) {
        case FoProbeResult::Kind::RewritableAtDepth:
            rep.line("rewritable at depth " + std::to_string(r.depth));
            rep.kv("kind", std::string("rewritable"));
            break;
        case FoProbeResult::Kind::NoBoundUpTo:
            rep.line("no rewriting bound up to depth " + std::to_string(r.depth));
            rep.kv("kind", std::string("no-bound"));
            break;
        case FoProbeResult::Kind::Inconclusive:
            rep.line("inconclusive (enumeration truncated)");
            rep.kv("kind", std::string("inconclusive"));
            break;
    }
    rep.line(r.note);
    rep.kv("depth", r.depth);
    rep.kv("disjuncts",
           static_cast<long long>(r.rewriting ? r.rewriting->disjuncts.size() : 0));
    if (r.rewriting && !out.empty()) {
        int i = 0;
        for (const Query& d : r.rewriting->disjuncts) {
            std::string path = out + std::to_string(i++) + ".cq";
            spill(path, serialize_query(d) + "\n");
            rep.line("wrote " + path);
        }
    }
    rep.emit();
    return kExitOk;
}

int run_rewrite_datalog(const std::string& cq, const std::string& ontology,
                        const std::string& out, const std::string& sidecar) {
    Report rep(sidecar);
    Query q = load_query(cq);
    Ontology o = to_ontology(ontology);
    DatalogProgram p = build_pi_q(q, o);
    StructuralReport sr = structural_check(p);
    std::string text = serialize_program(
        p, {"recursive rewriting for " + serialize_query(q) + " under " +
                ontology_name(o)});
    if (out.empty())
        std::cout << text;
    else {
        spill(out, text);
        rep.line("wrote " + out);
    }
    rep.kv("rules", static_cast<long long>(p.rules().size()));
    rep.kv("linear", sr.linear);
    rep.kv("symmetric", sr.symmetric);
    rep.kv("linear_stratified", sr.linear_stratified);
    rep.emit();
    return kExitOk;
}

int run_rewrite_symmetric(const std::string& q1, const std::string& qp,
                          const std::string& q2, const std::string& x,
                          const std::string& y, const std::string& ontology,
                          const std::string& out, const std::string& sidecar) {
    Report rep(sidecar);
    DatalogProgram p = build_symmetric_program(load_query(q1), load_query(qp),
                                               load_query(q2), x, y,
                                               to_ontology(ontology));
    StructuralReport sr = structural_check(p);
    std::string text = serialize_program(p, {"symmetric rewriting"});
    if (out.empty())
        std::cout << text;
    else {
        spill(out, text);
        rep.line("wrote " + out);
    }
    rep.kv("rules", static_cast<long long>(p.rules().size()));
    rep.kv("symmetric", sr.symmetric);
    rep.emit();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// cactus

int run_cactus(const std::string& mode, const std::string& cq,
               const std::string& ontology, int depth, std::size_t count_cap,
               bool with_prune, bool minimal, const std::string& out,
               const std::string& sidecar) {
    Report rep(sidecar);
    Query q = load_query(cq);
    Ontology o = to_ontology(ontology);
    if (mode == "probe") {
        return run_rewrite_fo(cq, ontology, depth, count_cap, out, sidecar);
    }
    CactusPool pool = enumerate_cactuses(q, o, depth, count_cap, with_prune);
    std::vector<Cactus> working =
        minimal ? minimal_filter(pool.cactuses) : pool.cactuses;
    rep.kv("enumerated", static_cast<long long>(pool.cactuses.size()));
    rep.kv("kept", static_cast<long long>(working.size()));
    rep.kv("truncated", pool.truncated);
    if (mode == "enumerate") {
        rep.line("enumerated " + std::to_string(pool.cactuses.size()) +
                 " cactuses up to depth " + std::to_string(depth) +
                 (pool.truncated ? " (truncated)" : "") +
                 (minimal ? ", " + std::to_string(working.size()) + " minimal" : ""));
        if (!out.empty()) {
            int i = 0;
            for (const Cactus& c : working)
                spill(out + std::to_string(i++) + ".abox", c.dump());
            rep.line("wrote " + std::to_string(working.size()) + " files at " + out +
                     "*.abox");
        }
    } else if (mode == "branching") {
        int best = 0;
        std::string witness;
        for (const Cactus& c : working) {
            BranchingReport br = branching_number(c);
            if (br.number >= best) {
                best = br.number;
                witness = c.canonical();
            }
        }
        rep.line("max branching number " + std::to_string(best) + " over " +
                 std::to_string(working.size()) + " cactuses" +
                 (pool.truncated ? " (pool truncated)" : ""));
        if (!witness.empty()) rep.line("witness: " + witness);
        rep.kv("max_branching", best);
    } else {
        throw CLI::ValidationError("cactus", "unknown mode '" + mode + "'");
    }
    rep.emit();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// gadget

Graph parse_graph_flags(int nodes, const std::vector<std::string>& edge_specs) {
    Graph g;
    g.nodes = nodes;
    for (const std::string& spec : edge_specs) {
        size_t comma = spec.find(',');
        if (comma == std::string::npos)
            throw CLI::ValidationError("--edge", "expected 'u,v', got '" + spec + "'");
        try {
            g.edges.emplace_back(std::stoi(spec.substr(0, comma)),
                                 std::stoi(spec.substr(comma + 1)));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--edge", "expected 'u,v', got '" + spec + "'");
        }
    }
    return g;
}

int run_gadget_chessboard(int n, const std::string& out, const std::string& query_out,
                          const std::string& sidecar) {
    Report rep(sidecar);
    ChessboardGadget g = chessboard(n);
    std::vector<std::string> prov;
    prov.push_back("mutilated " + std::to_string(2 * n) + "x" + std::to_string(2 * n) +
                   " board, " + std::to_string(g.squares.size()) + " squares");
    for (const BoardSquare& sq : g.squares)
        prov.push_back("square (" + std::to_string(sq.i) + "," + std::to_string(sq.j) +
                       "): individuals s" + std::to_string(sq.i) + "_" +
                       std::to_string(sq.j) + "_*, contacts " +
                       g.abox.ind_name(sq.contact[0]) + " " +
                       g.abox.ind_name(sq.contact[1]) + " " +
                       g.abox.ind_name(sq.contact[2]) + " " +
                       g.abox.ind_name(sq.contact[3]));
    write_abox(out, g.abox, prov, rep);
    if (!query_out.empty()) {
        spill(query_out, serialize_query(g.query) + "\n");
        rep.line("wrote " + query_out);
    }
    rep.kv("n", n);
    rep.kv("squares", static_cast<long long>(g.squares.size()));
    rep.emit();
    return kExitOk;
}

int run_gadget_ae3sat(const std::string& cnf, const std::string& ontology,
                      const std::string& out, const std::string& query_out,
                      const std::string& sidecar) {
    Report rep(sidecar);
    ForallExists3SAT phi = parse_qdimacs(slurp(cnf));
    AESatGadget g = forall_exists(phi, to_ontology(ontology));
    std::vector<std::string> prov;
    prov.push_back("forall-exists gadget: " + std::to_string(phi.x_vars) +
                   " universal / " + std::to_string(phi.y_vars) +
                   " existential variables, " + std::to_string(phi.clauses.size()) +
                   " clauses");
    std::string stars;
    for (const std::string& s : g.x_star) stars += " " + s;
    prov.push_back("undecided x-individuals:" + stars);
    prov.push_back("clause c has centres d_c<j>_* , one per witnessed triple");
    write_abox(out, g.abox, prov, rep);
    if (!query_out.empty()) {
        spill(query_out, serialize_query(g.query) + "\n");
        rep.line("wrote " + query_out);
    }
    rep.kv("x_vars", phi.x_vars);
    rep.kv("y_vars", phi.y_vars);
    rep.kv("clauses", static_cast<long long>(phi.clauses.size()));
    rep.emit();
    return kExitOk;
}

int run_gadget_reach(bool directed, const std::string& cq, int nodes,
                     const std::vector<std::string>& edges, int source, int target,
                     const std::string& out, const std::string& sidecar) {
    Report rep(sidecar);
    Query q = load_query(cq);
    Graph g = parse_graph_flags(nodes, edges);
    ABox a = directed ? reach_dag(q, g, source, target)
                      : reach_undirected(q, g, source, target);
    std::vector<std::string> prov;
    prov.push_back(std::string(directed ? "dag" : "undirected") +
                   " reachability gadget: graph nodes are individuals v0..v" +
                   std::to_string(nodes - 1) + ", T(v" + std::to_string(source) +
                   "), F(v" + std::to_string(target) + ")");
    prov.push_back(directed
                       ? "each edge (u,v) carries one query copy e<k>_* glued at "
                         "its marked pair"
                       : "each edge {u,v} carries two merged-query copies e<k>_*, "
                         "one per direction");
    write_abox(out, a, prov, rep);
    rep.kv("graph_nodes", nodes);
    rep.kv("graph_edges", static_cast<long long>(g.edges.size()));
    rep.emit();
    return kExitOk;
}

int run_gadget_circuit(const std::string& cq, const std::string& circ,
                       const std::string& alpha_bits, const std::string& out,
                       const std::string& sidecar) {
    Report rep(sidecar);
    Query q = load_query(cq);
    MonotoneCircuit c = parse_circuit(slurp(circ));
    std::vector<int> ins = c.inputs();
    if (alpha_bits.size() != ins.size())
        throw DomainError("--alpha needs one bit per circuit input (" +
                          std::to_string(ins.size()) + ")");
    std::vector<bool> alpha;
    for (char ch : alpha_bits) {
        if (ch != '0' && ch != '1')
            throw DomainError("--alpha must be a string of 0s and 1s");
        alpha.push_back(ch == '1');
    }
    ABox a = circuit_gadget(q, c, alpha);
    std::vector<std::string> prov;
    prov.push_back("circuit gadget for " + std::to_string(ins.size()) +
                   " inputs; expected value " +
                   std::string(eval_circuit(c, alpha) ? "true" : "false"));
    prov.push_back(
        "individuals g<k>_* belong to the k-th gate shape in gate order; "
        "inputs are fresh constant nodes");
    write_abox(out, a, prov, rep);
    rep.kv("inputs", static_cast<long long>(ins.size()));
    rep.kv("alpha", alpha_bits);
    rep.kv("circuit_value", eval_circuit(c, alpha));
    rep.emit();
    return kExitOk;
}

int run_gadget_wheel(const std::string& cq, int n,
                     const std::vector<std::string>& choice_specs,
                     const std::string& out, const std::string& sidecar) {
    Report rep(sidecar);
    Query q = load_query(cq);
    std::map<int, ContactChoice> choice;
    for (const std::string& spec : choice_specs) {
        int copy, t_ord, f_ord;
        if (std::sscanf(spec.c_str(), "%d:%d,%d", &copy, &t_ord, &f_ord) != 3)
            throw CLI::ValidationError("--choice",
                                       "expected 'copy:t,f', got '" + spec + "'");
        choice[copy] = {t_ord, f_ord};
    }
    Cogwheel w = cogwheel(q, n, choice);
    std::vector<std::string> prov;
    prov.push_back("cogwheel of " + std::to_string(w.n) + " copies" +
                   (w.swapped_ft ? " (built on the F/T-swapped query)" : ""));
    for (int j = 0; j < w.n; ++j)
        prov.push_back("copy " + std::to_string(j) + ": individuals c" +
                       std::to_string(j) + "_*, contact " +
                       w.abox.ind_name(w.contacts[j]) + " (choice t" +
                       std::to_string(w.choice[j].t_ord) + ",f" +
                       std::to_string(w.choice[j].f_ord) + ")");
    write_abox(out, w.abox, prov, rep);
    rep.kv("n", w.n);
    rep.kv("swapped_ft", w.swapped_ft);
    rep.emit();
    return kExitOk;
}

int run_gadget_bike(const std::string& cq, int n, const std::string& out,
                    const std::string& sidecar) {
    Report rep(sidecar);
    Bike b = bike(load_query(cq), n);
    std::vector<std::string> prov;
    prov.push_back("bike of two " + std::to_string(b.n) + "-copy wheels" +
                   (b.swapped_ft ? " (built on the F/T-swapped query)" : ""));
    prov.push_back("black wheel copies b<j>_*, white wheel copies w<j>_*");
    prov.push_back("F-connection copy qf_* glued at black contact " +
                   std::to_string(b.f_conn_black) + " and white contact " +
                   std::to_string(b.f_conn_white));
    prov.push_back("T-connection copy qt_* glued at black contact " +
                   std::to_string(b.t_conn_black) + " and white contact " +
                   std::to_string(b.t_conn_white));
    write_abox(out, b.abox, prov, rep);
    rep.kv("n", b.n);
    rep.kv("swapped_ft", b.swapped_ft);
    rep.emit();
    return kExitOk;
}

int run_gadget_psi(const std::string& cq, const std::string& cnf,
                   const std::string& assignment, const std::string& out,
                   const std::string& sidecar) {
    Report rep(sidecar);
    Query q = load_query(cq);
    ThreeCNF psi = parse_dimacs(slurp(cnf));
    PsiGadget g = psi_gadget(q, psi);
    ABox a = g.abox;
    std::vector<std::string> prov;
    prov.push_back("psi-gadget: " + std::to_string(psi.variables) + " variables, " +
                   std::to_string(psi.clauses.size()) + " clauses, wheels of " +
                   std::to_string(g.n) + " copies" +
                   (g.swapped_ft ? " (built on the F/T-swapped query)" : ""));
    for (int p = 1; p <= psi.variables; ++p)
        prov.push_back("variable p" + std::to_string(p) + ": bike with wheels v" +
                       std::to_string(p) + "b*/v" + std::to_string(p) +
                       "w*, connectors v" + std::to_string(p) + "qf_*/v" +
                       std::to_string(p) + "qt_*");
    for (size_t c = 0; c < g.wiring.size(); ++c) {
        std::string where;
        for (const ClauseTarget& t : g.wiring[c])
            where += " (p" + std::to_string(t.variable) +
                     (t.white ? ",white," : ",black,") + std::to_string(t.contact) +
                     ")";
        prov.push_back("clause " + std::to_string(c + 1) + ": copy q" +
                       std::to_string(c + 1) + "_* glued at" + where);
    }
    if (!assignment.empty()) {
        if (assignment.size() != static_cast<size_t>(psi.variables))
            throw DomainError("--assignment needs one bit per variable");
        std::uint32_t bits = 0;
        for (size_t i = 0; i < assignment.size(); ++i) {
            if (assignment[i] != '0' && assignment[i] != '1')
                throw DomainError("--assignment must be a string of 0s and 1s");
            if (assignment[i] == '1') bits |= 1u << i;
        }
        a = assignment_model(g, bits);
        prov.push_back("assignment model for bits " + assignment +
                       " (variable p<i> = bit i-1)");
    }
    write_abox(out, a, prov, rep);
    rep.kv("variables", psi.variables);
    rep.kv("clauses", static_cast<long long>(psi.clauses.size()));
    rep.kv("n", g.n);
    rep.emit();
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

int run_verify(const std::string& kind_name, const std::string& cq, int board_n,
               int max_gates, int max_nodes, int wheel_n, int samples,
               const std::string& cnf, const std::string& qcnf, int max_clauses,
               int max_x, int max_y, const std::string& ontology, uint64_t seed,
               int jobs, const std::string& oracle, const std::string& sidecar) {
    Report rep(sidecar);
    std::optional<ReductionKind> kind = parse_reduction_kind(kind_name);
    if (!kind)
        throw CLI::ValidationError("--kind", "unknown reduction '" + kind_name + "'");
    VerifyParams p;
    if (!cq.empty()) p.q = load_query(cq);
    p.board_n = board_n;
    p.max_gates = max_gates;
    p.max_nodes = max_nodes;
    p.wheel_n = wheel_n;
    p.samples = samples;
    if (!cnf.empty()) p.psi = parse_dimacs(slurp(cnf));
    if (!qcnf.empty()) p.phi = parse_qdimacs(slurp(qcnf));
    p.max_clauses = max_clauses;
    p.max_x = max_x;
    p.max_y = max_y;
    p.ontology = to_ontology(ontology);
    p.seed = effective_seed(seed);
    p.jobs = jobs;
    VerificationReport r = verify_reduction(*kind, p, oracle);
    rep.line(std::string(r.pass ? "pass" : "FAIL") + ": " +
             reduction_kind_name(r.kind) + ", " + std::to_string(r.instances) +
             " instances");
    rep.line(r.note);
    if (!r.pass) rep.line("counterexample: " + r.counterexample);
    rep.kv("kind", reduction_kind_name(r.kind));
    rep.kv("pass", r.pass);
    rep.kv("instances", r.instances);
    rep.kv("seed", static_cast<long long>(p.seed));
    rep.emit();
    return r.pass ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------------------
// export-cnf

int run_export_cnf(const std::string& cq, const std::string& abox,
                   const std::string& ontology, uint64_t clause_cap,
                   const std::string& out, const std::string& sidecar) {
    Report rep(sidecar);
    OracleBudget budget;
    budget.clause_cap = clause_cap;
    CNF cnf = ground_to_cnf(to_ontology(ontology), load_query(cq), load_abox(abox),
                            budget);
    std::string text = cnf.to_dimacs();
    if (out.empty())
        std::cout << text;
    else {
        spill(out, text);
        rep.line("wrote " + out);
    }
    rep.kv("variables", cnf.var_count());
    rep.kv("clauses", static_cast<long long>(cnf.clause_count()));
    rep.emit();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"d-sirup toolbox: answering, classification, rewriting and "
                 "hardness gadgets for covering-ontology queries"};
    app.require_subcommand(1);

    // Shared option storage. Subcommands bind to the fields they use.
    std::string cq, abox, ontology = "sirup", method = "sat", sidecar, out;
    std::string query_out, circ, cnf, qcnf, alpha, assignment, kind, mode;
    std::string q1, qp, q2, xname, yname;
    std::vector<std::string> edges, choices;
    int jobs = 1, depth = 3, board_n = 1, max_gates = 2, max_nodes = 4;
    int wheel_n = 0, samples = 50, max_clauses = 2, max_x = 2, max_y = 2;
    int nodes = 2, source = 0, target = 1, n = 1;
    uint64_t seed = 1, enum_cap = uint64_t(1) << 24, clause_cap = 10'000'000;
    std::size_t count_cap = 20000;
    bool with_prune = false, minimal = false;

    auto add_sidecar = [&](CLI::App* c) {
        c->add_option("--sidecar", sidecar,
                      "write key=value lines here instead of stdout");
    };

    CLI::App* c_classify = app.add_subcommand("classify", "tetrachotomy verdict");
    c_classify->add_option("--cq", cq, "query file")->required();
    c_classify->add_option("--ontology", ontology, "sirup|ddsirup");
    add_sidecar(c_classify);

    CLI::App* c_answer = app.add_subcommand("answer", "certain answer");
    c_answer->add_option("--cq", cq, "query file")->required();
    c_answer->add_option("--abox", abox, "data file")->required();
    c_answer->add_option("--ontology", ontology,
                         "sirup|ddsirup|topsirup|topddsirup");
    c_answer->add_option("--method", method, "enum|sat|both");
    c_answer->add_option("--jobs", jobs, "threads for the enumeration kernel");
    c_answer->add_option("--enum-cap", enum_cap, "labeling budget");
    c_answer->add_option("--clause-cap", clause_cap, "grounding budget");
    add_sidecar(c_answer);

    CLI::App* c_rewrite = app.add_subcommand("rewrite", "rewriting builders");
    c_rewrite->require_subcommand(1);
    CLI::App* c_fo = c_rewrite->add_subcommand("fo", "FO probe via cactuses");
    c_fo->add_option("--cq", cq, "query file")->required();
    c_fo->add_option("--ontology", ontology, "sirup|ddsirup");
    c_fo->add_option("--max-depth", depth, "probe depth bound");
    c_fo->add_option("--count-cap", count_cap, "pool size cap");
    c_fo->add_option("--out", out, "prefix for disjunct files <out><i>.cq");
    add_sidecar(c_fo);
    CLI::App* c_dl = c_rewrite->add_subcommand("datalog", "monadic recursion");
    c_dl->add_option("--cq", cq, "query file")->required();
    c_dl->add_option("--ontology", ontology, "sirup|ddsirup");
    c_dl->add_option("--out", out, "program file (.dl)");
    add_sidecar(c_dl);
    CLI::App* c_sym = c_rewrite->add_subcommand("symmetric", "symmetric datalog");
    c_sym->add_option("--q1", q1, "left block query")->required();
    c_sym->add_option("--qp", qp, "symmetric connector query")->required();
    c_sym->add_option("--q2", q2, "right block query")->required();
    c_sym->add_option("--x", xname, "anchor variable of q1/qp")->required();
    c_sym->add_option("--y", yname, "anchor variable of qp/q2")->required();
    c_sym->add_option("--ontology", ontology, "sirup|ddsirup");
    c_sym->add_option("--out", out, "program file (.dl)");
    add_sidecar(c_sym);

    CLI::App* c_cactus = app.add_subcommand("cactus", "cactus calculus");
    c_cactus->require_subcommand(1);
    for (const char* m : {"enumerate", "branching", "probe"}) {
        CLI::App* c = c_cactus->add_subcommand(m);
        c->add_option("--cq", cq, "query file")->required();
        c->add_option("--ontology", ontology, "sirup|ddsirup");
        c->add_option("--depth", depth, "depth bound");
        c->add_option("--count-cap", count_cap, "pool size cap");
        c->add_flag("--with-prune", with_prune, "interleave pruning");
        c->add_flag("--minimal", minimal, "apply the minimal filter");
        c->add_option("--out", out, "output prefix");
        add_sidecar(c);
    }

    CLI::App* c_gadget = app.add_subcommand("gadget", "hardness constructions");
    c_gadget->require_subcommand(1);
    CLI::App* g_board = c_gadget->add_subcommand("chessboard", "mutilated board");
    g_board->add_option("--n", n, "half board side")->required();
    g_board->add_option("--out", out, "data file (.abox)");
    g_board->add_option("--query-out", query_out, "query file (.cq)");
    add_sidecar(g_board);
    CLI::App* g_ae = c_gadget->add_subcommand("ae3sat", "forall-exists 3SAT");
    g_ae->add_option("--cnf", qcnf, "QDIMACS file")->required();
    g_ae->add_option("--ontology", ontology, "sirup|ddsirup");
    g_ae->add_option("--out", out, "data file (.abox)");
    g_ae->add_option("--query-out", query_out, "query file (.cq)");
    add_sidecar(g_ae);
    for (bool directed : {false, true}) {
        CLI::App* g = c_gadget->add_subcommand(directed ? "reach-dag" : "reach-u",
                                               directed ? "dag reachability"
                                                        : "undirected reachability");
        g->add_option("--cq", cq, "query file")->required();
        g->add_option("--nodes", nodes, "graph node count")->required();
        g->add_option("--edge", edges, "edge 'u,v' (repeatable)");
        g->add_option("--source", source, "source node");
        g->add_option("--target", target, "target node");
        g->add_option("--out", out, "data file (.abox)");
        add_sidecar(g);
    }
    CLI::App* g_circ = c_gadget->add_subcommand("circuit", "monotone circuit value");
    g_circ->add_option("--cq", cq, "query file")->required();
    g_circ->add_option("--circ", circ, "netlist file (.circ)")->required();
    g_circ->add_option("--alpha", alpha, "input bits in netlist order")->required();
    g_circ->add_option("--out", out, "data file (.abox)");
    add_sidecar(g_circ);
    CLI::App* g_wheel = c_gadget->add_subcommand("wheel", "cogwheel");
    g_wheel->add_option("--cq", cq, "query file")->required();
    g_wheel->add_option("--n", n, "number of copies")->required();
    g_wheel->add_option("--choice", choices, "contact choice 'copy:t,f' (repeatable)");
    g_wheel->add_option("--out", out, "data file (.abox)");
    add_sidecar(g_wheel);
    CLI::App* g_bike = c_gadget->add_subcommand("bike", "two connected wheels");
    g_bike->add_option("--cq", cq, "query file")->required();
    g_bike->add_option("--n", wheel_n, "copies per wheel (0 = smallest legal)");
    g_bike->add_option("--out", out, "data file (.abox)");
    add_sidecar(g_bike);
    CLI::App* g_psi = c_gadget->add_subcommand("psi", "full 3SAT reduction");
    g_psi->add_option("--cq", cq, "query file")->required();
    g_psi->add_option("--cnf", cnf, "DIMACS 3-CNF file")->required();
    g_psi->add_option("--assignment", assignment,
                      "emit the induced model for these bits instead");
    g_psi->add_option("--out", out, "data file (.abox)");
    add_sidecar(g_psi);

    CLI::App* c_verify = app.add_subcommand("verify", "reduction test suites");
    c_verify->add_option("--kind", kind,
                         "chessboard|ae3sat|reach-u|reach-dag|circuit|wheel|bike|psi")
        ->required();
    c_verify->add_option("--cq", cq, "query file (reductions built on a query)");
    c_verify->add_option("--board-n", board_n, "largest board half-side");
    c_verify->add_option("--max-gates", max_gates, "circuit gate bound");
    c_verify->add_option("--max-nodes", max_nodes, "graph node bound");
    c_verify->add_option("--wheel-n", wheel_n, "wheel size (0 = |q|)");
    c_verify->add_option("--samples", samples, "random probes per suite");
    c_verify->add_option("--cnf", cnf, "DIMACS 3-CNF for --kind psi");
    c_verify->add_option("--qcnf", qcnf, "QDIMACS formula for --kind ae3sat");
    c_verify->add_option("--max-clauses", max_clauses, "ae3sat enumeration bound");
    c_verify->add_option("--max-x", max_x, "ae3sat universal bound");
    c_verify->add_option("--max-y", max_y, "ae3sat existential bound");
    c_verify->add_option("--ontology", ontology, "ontology variant");
    c_verify->add_option("--seed", seed, "probe seed (SIRUP_SEED overrides)");
    c_verify->add_option("--jobs", jobs, "verification threads");
    c_verify->add_option("--oracle", method, "enum|sat certain-answer backend");
    add_sidecar(c_verify);

    CLI::App* c_export = app.add_subcommand("export-cnf", "grounding as DIMACS");
    c_export->add_option("--cq", cq, "query file")->required();
    c_export->add_option("--abox", abox, "data file")->required();
    c_export->add_option("--ontology", ontology, "ontology variant");
    c_export->add_option("--clause-cap", clause_cap, "grounding budget");
    c_export->add_option("--out", out, "DIMACS file (.cnf)");
    add_sidecar(c_export);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*c_classify) return run_classify(cq, ontology, sidecar);
        if (*c_answer)
            return run_answer(cq, abox, ontology, method, jobs, enum_cap, clause_cap,
                              sidecar);
        if (*c_rewrite) {
            if (c_rewrite->get_subcommands().at(0) == c_fo)
                return run_rewrite_fo(cq, ontology, depth, count_cap, out, sidecar);
            if (c_rewrite->get_subcommands().at(0) == c_dl)
                return run_rewrite_datalog(cq, ontology, out, sidecar);
            return run_rewrite_symmetric(q1, qp, q2, xname, yname, ontology, out,
                                         sidecar);
        }
        if (*c_cactus)
            return run_cactus(c_cactus->get_subcommands().at(0)->get_name(), cq,
                              ontology, depth, count_cap, with_prune, minimal, out,
                              sidecar);
        if (*c_gadget) {
            const std::string& g = c_gadget->get_subcommands().at(0)->get_name();
            if (g == "chessboard")
                return run_gadget_chessboard(n, out, query_out, sidecar);
            if (g == "ae3sat")
                return run_gadget_ae3sat(qcnf, ontology, out, query_out, sidecar);
            if (g == "reach-u" || g == "reach-dag")
                return run_gadget_reach(g == "reach-dag", cq, nodes, edges, source,
                                        target, out, sidecar);
            if (g == "circuit") return run_gadget_circuit(cq, circ, alpha, out, sidecar);
            if (g == "wheel") return run_gadget_wheel(cq, n, choices, out, sidecar);
            if (g == "bike") return run_gadget_bike(cq, wheel_n, out, sidecar);
            return run_gadget_psi(cq, cnf, assignment, out, sidecar);
        }
        if (*c_verify)
            return run_verify(kind, cq, board_n, max_gates, max_nodes, wheel_n,
                              samples, cnf, qcnf, max_clauses, max_x, max_y, ontology,
                              seed, jobs, method, sidecar);
        if (*c_export)
            return run_export_cnf(cq, abox, ontology, clause_cap, out, sidecar);
    } catch (const VerificationFailure& f) {
        std::cerr << "error: " << f.message << "\n";
        return kExitVerification;
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
