#ifndef SIRUP_GADGETS_HPP
#define SIRUP_GADGETS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sirup/abox.hpp"
#include "sirup/base.hpp"
#include "sirup/oracle.hpp"
#include "sirup/query.hpp"

namespace sirup {

// Hardness gadgets: ABox families on which the certain answer to a fixed
// query encodes a complete problem for the query's complexity class.
// Chessboard tilings and 3-CNF assignments feed the coNP constructions,
// quantified 3-CNFs the disjointness variant, monotone circuit values the
// P-hard case, and graph reachability the NL-hard ones. The cogwheel /
// bike machinery underneath the 2-CQ constructions is exposed on its own
// so the wheel and bike model lemmas can be checked by enumeration.
// verify_reduction replays every construction against brute force on
// small instances.

// ---------------------------------------------------------------------------
// Monotone circuits

enum class GateKind { Input, And, Or };

struct Gate {
    std::string name;
    GateKind kind = GateKind::Input;
    int in0 = -1;  // indices into MonotoneCircuit::gates; -1 for inputs
    int in1 = -1;
};

// A monotone Boolean circuit. Gates are stored in topological order
// (the netlist grammar only lets a gate use gates defined above it).
struct MonotoneCircuit {
    std::vector<Gate> gates;
    int output = -1;

    std::vector<int> inputs() const;  // input gates, declaration order
    int find_gate(const std::string& name) const;  // -1 when absent
    // Structural checks: two inputs per AND/OR, an output that is not an
    // input gate, in-range wiring. Throws DomainError.
    void validate() const;
};

// Netlist grammar, one statement per line ('#' starts a comment):
//   in x1
//   g1 = AND x1 x2
//   g2 = OR g1 x1
//   out g2
MonotoneCircuit parse_circuit(const std::string& text);
std::string serialize_circuit(const MonotoneCircuit& c);

// alpha[i] is the value fed to c.inputs()[i].
bool eval_circuit(const MonotoneCircuit& c, const std::vector<bool>& alpha);

// Every circuit with 1..max_non_input AND/OR gates where each non-output
// gate feeds a later one. Inputs are created on demand (never more than
// one fresh input per wiring slot), so the bound 2 yields circuits over
// at most three inputs. Isomorphic duplicates are allowed; the list is
// deterministic.
std::vector<MonotoneCircuit> enumerate_circuits(int max_non_input);

// ---------------------------------------------------------------------------
// 3-CNF inputs

// Clauses as signed 1-based DIMACS literals. A clause may mention the
// same variable more than once; (p v p v p) is legal.
struct ThreeCNF {
    int variables = 0;
    std::vector<std::array<int, 3>> clauses;
    void validate() const;  // throws DomainError
};

ThreeCNF parse_dimacs(const std::string& text);
std::string serialize_dimacs(const ThreeCNF& f);

// Bit p-1 of the assignment is the value of variable p.
bool eval_cnf(const ThreeCNF& f, std::uint32_t assignment);
bool cnf_satisfiable(const ThreeCNF& f);  // brute force, <= 20 variables

// forall x1..xm exists y1..yk: clauses. Variables 1..m are universal,
// m+1..m+k existential. Clauses may not repeat a variable.
struct ForallExists3SAT {
    int x_vars = 0;
    int y_vars = 0;
    std::vector<std::array<int, 3>> clauses;
    void validate() const;  // throws DomainError
};

// DIMACS with QDIMACS-style quantifier lines ("a 1 2 0" / "e 3 0").
ForallExists3SAT parse_qdimacs(const std::string& text);
std::string serialize_qdimacs(const ForallExists3SAT& f);
bool qbf_truth(const ForallExists3SAT& f);  // brute force, <= 20 variables

// ---------------------------------------------------------------------------
// Mutilated chessboard (coNP source instance family)

struct BoardSquare {
    int i = 0, j = 0;              // column, row on the 2n x 2n board
    std::array<int, 4> contact{};  // left, up, right, down individuals
};

// The fixed rose-and-tournament query together with the board ABox for a
// 2n x 2n chessboard with two opposite corner squares removed. Contacts
// between two present squares are labelled A, boundary contacts F; a
// model picks F or T per A-contact, it covers the board iff every square
// has exactly one T contact, and the query maps into the model iff some
// square breaks that rule. The missing corners make covering impossible,
// so the certain answer is "yes" for every n.
struct ChessboardGadget {
    Query query;  // independent of n
    ABox abox;
    int n = 0;
    std::vector<BoardSquare> squares;
};

ChessboardGadget chessboard(int n);

// ---------------------------------------------------------------------------
// forall-exists 3SAT (Pi^p_2 source for certain answers)

// Query and ABox encoding "for all x-assignments some y-assignment
// satisfies the clauses". The query has one centre per clause wired to
// per-clause x-nodes (labelled by the literal's sign) and shared y-nodes;
// the ABox offers every clause a centre for each not-all-falsifying way
// of picking candidate individuals. The x-individuals a*_x are labelled
// A, so each minimal model chooses an x-assignment.
struct AESatGadget {
    Query query;  // clause components share only y-nodes; may be disconnected
    ABox abox;
    Ontology ontology = Ontology::CovA;
    std::vector<std::string> x_star;  // a*_x individual names, x in 1..m
};

// o must be CovA or CovABot (the twin pair a"_x becomes two disjoint
// individuals under CovABot).
AESatGadget forall_exists(const ForallExists3SAT& phi, Ontology o);

// A_phi extended with the fixed x-assignment: bit p-1 labels a*_{x_p}
// with T when set, F otherwise. The result has no undecided individuals.
ABox with_x_assignment(const AESatGadget& g, std::uint32_t assignment);

// ---------------------------------------------------------------------------
// Reachability (NL sources)

struct Graph {
    int nodes = 0;
    std::vector<std::pair<int, int>> edges;
};

// Undirected s-t connectivity, for the total covering ontologies. q must
// be twinless with at least one solitary F and one solitary T. All
// solitary T's of q are merged into one node and all solitary F's into
// another, labels dropped; each graph edge {u,v} contributes that merged
// pattern in both orientations. s is labelled T and t is labelled F, and
// the certain answer under CovTop / CovTopBot says whether s and t are
// connected. Throws DomainError when q does not fit or s == t.
ABox reach_undirected(const Query& q, const Graph& g, int s, int t);

// Directed reachability on a dag, for CovA / CovABot. q must be a
// twinless path 1-CQ; the builder picks an adjacent solitary pair (one
// T, one F, nothing marked between them), relabels the pair A and glues
// it onto the endpoints of every dag edge (T-node onto the source), with
// fresh copies of the rest of q. s is labelled T and t F. Certain answer
// iff t is reachable from s. Throws DomainError when q does not fit,
// s == t, or g has a directed cycle.
ABox reach_dag(const Query& q, const Graph& g, int s, int t);

// ---------------------------------------------------------------------------
// Monotone circuit evaluation (P source)

// ABox whose certain answer under CovA (equivalently CovABot; the output
// is twinless) equals C(alpha), for an aperiodic twinless path 1-CQ q.
// The gate gadgets chain interval copies of q so that a gate's A-node can
// only avoid producing a query image when its value is forced to the
// gate's output under alpha. alpha[i] feeds c.inputs()[i].
ABox circuit_gadget(const Query& q, const MonotoneCircuit& c,
                    const std::vector<bool>& alpha);

// ---------------------------------------------------------------------------
// Cogwheels, bikes and the psi-gadget (coNP machinery for 2-CQs)

// Which T- and F-node a query copy donates as its contacts, as 1-based
// ordinals into the path-ordered solitary-T / solitary-F lists of the
// oriented query (t_ord 1 picks t1; f_ord 2 picks f2).
struct ContactChoice {
    int t_ord = 1;
    int f_ord = 2;
};

// n query copies glued contact-to-contact in a cycle: copy j's F-contact
// is copy j+1's T-contact, and every contact is relabelled A. Built in
// the orientation where the first solitary T precedes the first solitary
// F; when the input query has it the other way round the builder swaps F
// and T, constructs the wheel, and swaps the ABox labels back
// (swapped_ft records this; the covering axiom is symmetric in F and T,
// so the wheel lemma is unaffected).
struct Cogwheel {
    Query oriented;           // t1-before-f1 form actually used to build
    bool swapped_ft = false;
    int n = 0;
    ABox abox;                // labels restored to the input orientation
    std::vector<ContactChoice> choice;       // per copy, resolved
    std::vector<std::array<int, 2>> contact_nodes;  // per copy: {t,f} node ids
    std::vector<std::vector<int>> copies;    // copy j: query node -> individual
    std::vector<int> contacts;               // contact j = copy j's F-contact
    int distance(int i, int j) const;        // cyclic contact distance
};

// choice overrides individual copies; unlisted copies use {t1, f2}, which
// keeps every gluing legal for any 2-CQ in t1-before-f1 form. Each entry
// must keep the copy's T-contact strictly before its F-contact and each
// glued pair's T-node strictly before its F-node in the path order of the
// oriented query; violations throw DomainError naming the broken rule.
// q must be a twinless path 2-CQ and n >= 2.
Cogwheel cogwheel(const Query& q, int n,
                  const std::map<int, ContactChoice>& choice = {});

// Two disjoint n-cogwheels joined by one query copy glued F-side into
// both wheels and one glued T-side into both, with the wheels' contact
// choices adjusted around the connections so that a model avoids the
// query exactly when the wheels carry opposite constant contact values.
struct Bike {
    Query oriented;
    bool swapped_ft = false;
    int n = 0;
    ABox abox;
    Cogwheel wheel_black, wheel_white;  // standalone wheels, same tables
    std::vector<int> contact_black, contact_white;  // contacts inside abox
    int f_conn_black = 0, t_conn_black = 0;  // connection contact indices
    int f_conn_white = 0, t_conn_white = 0;
    std::vector<int> qf_copy, qt_copy;  // connector copies: node -> individual
};

// q must be a twinless path 2-CQ; n >= 4|q| + 2 keeps the two connection
// neighbourhoods disjoint (DomainError otherwise). n = 0 picks the
// smallest legal value.
Bike bike(const Query& q, int n = 0);

// Where one clause literal plugs into the psi-gadget.
struct ClauseTarget {
    int variable = 0;   // 1-based
    bool white = false; // which wheel of that variable's bike
    int contact = 0;    // contact index inside that wheel
};

// Per-variable bike bookkeeping inside a PsiGadget (contacts point into
// PsiGadget::abox; connection indices are shared by both wheels).
struct VariableBike {
    std::vector<int> contact_black, contact_white;
    int f_conn = 0;
    int t_conn = 0;
};

// One bike per variable of psi plus one query copy per clause, each
// clause copy's special triple relabelled A and glued onto a dedicated
// contact of the wheel that the literal's sign selects. For every total
// assignment the intended model labels each black wheel with the
// variable's value and each white wheel with its complement; the query
// then maps into the model iff the assignment falsifies some clause.
struct PsiGadget {
    Query oriented;
    bool swapped_ft = false;
    int n = 0;  // copies per wheel
    ThreeCNF psi;
    ABox abox;
    std::array<int, 3> special{};  // special-triple node ids in oriented
    std::vector<VariableBike> bikes;              // index = variable - 1
    std::vector<std::vector<int>> clause_copies;  // clause: node -> individual
    std::vector<std::array<ClauseTarget, 3>> wiring;
};

// q must be a twinless path 2-CQ. n is (#clauses + 2) * (2|q| + 1),
// enlarged when repeated literals crowd more connections onto one wheel
// than that floor can keep apart.
PsiGadget psi_gadget(const Query& q, const ThreeCNF& psi);

// The intended model for a total assignment (bit p-1 = variable p): all
// contacts of p's black wheel take p's value, the white wheel the
// complement, expressed in the labels of g.abox. No A labels remain.
ABox assignment_model(const PsiGadget& g, std::uint32_t assignment);

// ---------------------------------------------------------------------------
// Reduction verification

enum class ReductionKind {
    Chessboard,
    ForallExists,
    ReachU,
    ReachDag,
    Circuit,
    Wheel,
    Bike,
    PsiStructured,
};

std::string reduction_kind_name(ReductionKind kind);
// Accepts the CLI spellings: chessboard, ae3sat, reach-u, reach-dag,
// circuit, wheel, bike, psi.
std::optional<ReductionKind> parse_reduction_kind(const std::string& name);

// One flat parameter block for every kind; each kind reads its own slice.
struct VerifyParams {
    std::optional<Query> q;  // all kinds except Chessboard and ForallExists
    int board_n = 1;     // Chessboard: check boards 1..board_n
    int max_gates = 2;   // Circuit: non-input gate bound
    int max_nodes = 4;   // ReachU / ReachDag: graph size bound
    int wheel_n = 0;     // Wheel / Bike / PsiStructured copies; 0 = smallest
    int samples = 50;    // Bike: violating labelings; Chessboard: labelings
    ThreeCNF psi;        // PsiStructured
    std::optional<ForallExists3SAT> phi;  // ForallExists: only this formula
    int max_clauses = 2;  // ForallExists enumeration bounds
    int max_x = 2;
    int max_y = 2;
    Ontology ontology = Ontology::CovA;  // ForallExists / ReachU / ReachDag / Circuit
    std::uint64_t seed = 1;
    int jobs = 1;
    OracleBudget budget;
};

struct VerificationReport {
    ReductionKind kind = ReductionKind::Wheel;
    bool pass = false;
    long instances = 0;  // cases checked
    std::string note;    // summary, including any standing assumptions
    std::string counterexample;  // first failing case, serialized
};

// Replays a construction against ground truth. Chessboard / ForallExists /
// ReachU / ReachDag / Circuit compare the oracle's certain answer with
// brute force (tiling parity, QBF evaluation, graph search, circuit
// evaluation) over exhaustive small instances; Wheel checks the wheel
// model lemma over all contact labelings; Bike checks that the two
// opposite-constant labelings exclude the query and sampled violating
// labelings admit it; PsiStructured checks assignment-induced models
// only, which is what the clause wiring adds on top of the separately
// verified wheel and bike lemmas (the report says so). oracle picks the
// certain-answer decider as in certain_answer ("sat" or "enum").
VerificationReport verify_reduction(ReductionKind kind, const VerifyParams& params,
                                    const std::string& oracle = "sat");

}  // namespace sirup

#endif  // SIRUP_GADGETS_HPP
