#ifndef SIRUP_DATALOG_HPP
#define SIRUP_DATALOG_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sirup/abox.hpp"
#include "sirup/base.hpp"
#include "sirup/query.hpp"

namespace sirup {

// One atom of a rule: predicate name plus rule-local variable ids.
// The programs built here use arities 0 (the goal), 1 (node labels and
// the monadic recursion predicate) and 2 (roles), but the engine is
// arity-generic.
struct DatalogAtom {
    std::string pred;
    std::vector<int> args;

    bool operator==(const DatalogAtom&) const = default;
    bool operator<(const DatalogAtom& o) const {
        if (args.size() != o.args.size()) return args.size() < o.args.size();
        if (pred != o.pred) return pred < o.pred;
        return args < o.args;
    }
};

struct DatalogRule {
    DatalogAtom head;
    std::vector<DatalogAtom> body;
};

// A datalog program with the nullary goal G. Rules are safe (every head
// variable occurs in the body) and the goal never occurs in a body.
// Predicates occurring in some head are the IDB; every other predicate
// is an EDB read from the data (F, T, A and the role names).
class DatalogProgram {
public:
    static constexpr const char* kGoal = "G";

    // Validates safety, goal position and arity consistency, then brings
    // the body into the canonical order (unary atoms before binary ones,
    // then by predicate name and arguments) so emission is byte-stable.
    void add_rule(DatalogRule r);

    const std::vector<DatalogRule>& rules() const { return rules_; }
    const std::set<std::string>& idb() const { return idb_; }
    const std::set<std::string>& edb() const { return edb_; }
    int arity(const std::string& pred) const;  // -1 when unknown

private:
    std::vector<DatalogRule> rules_;
    std::set<std::string> idb_;
    std::set<std::string> edb_;
    std::map<std::string, int> arity_;
};

// One rule per line: "Head :- B1, B2." (bodyless rules print "Head.").
// Comment lines, when given, are emitted first, each prefixed "% ".
std::string serialize_program(const DatalogProgram& p,
                              const std::vector<std::string>& comments = {});

// All IDB facts derivable from the ABox, keyed by predicate, as tuples
// of individual ids. ABox facts over predicates the program never
// mentions are inert. seminaive toggles between the semi-naive engine
// and the naive round-based evaluation kept as a reference for
// differential testing; both saturate to the same fixpoint.
std::map<std::string, std::set<std::vector<int>>> saturate(
    const DatalogProgram& p, const ABox& a, bool seminaive = true);

// True iff the goal is derivable (semi-naive engine).
bool evaluate(const DatalogProgram& p, const ABox& a);
// Same answer from the naive reference engine.
bool evaluate_naive(const DatalogProgram& p, const ABox& a);

// Structural classification of a program.
struct StructuralReport {
    // Every rule body carries at most one IDB atom.
    bool linear = false;
    // The program is linear and every recursive rule, goal rules
    // excepted, has its head/IDB-atom swap in the program up to rule
    // equivalence (homomorphisms both ways with the head arguments
    // frozen).
    bool symmetric = false;
    // Finest stratification: IDB predicate -> stratum index, such that a
    // predicate is defined in one stratum and used only in that stratum
    // or later ones. Negation-free programs always admit one.
    std::optional<std::map<std::string, int>> stratification;
    // Each rule body has at most one occurrence of a head predicate from
    // the head's own stratum.
    bool linear_stratified = false;
};
StructuralReport structural_check(const DatalogProgram& p);

// The monadic program with goal G and a fresh predicate P for a 1-CQ q:
//
//   G    <- F(x), q', P(y1), ..., P(yn)
//   P(x) <- T(x)
//   P(x) <- A(x), q', P(y1), ..., P(yn)
//   G    <- F(x), T(x)                    (disjoint variants only)
//
// where x is the solitary-F node, y1..yn are the solitary-T nodes and
// q' is q minus those solitary atoms. Queries with the mirror profile
// (one solitary T, several solitary F) are handled by building the
// program for the F/T-swapped query and then swapping the F and T atoms
// of the result, which answers the original query. Throws DomainError
// when q is not a 1-CQ or when o is a total covering variant (the
// construction is specific to the A-covering ontologies).
DatalogProgram build_pi_q(const Query& q, Ontology o);

// Whether qp, read as a binary query qp(x, y), is equivalent to its
// reversal qp(y, x): two homomorphism checks between the query and its
// x/y-swapped copy with the answer nodes frozen.
bool is_symmetric_cq(const Query& qp, int x, int y);

// The symmetric program for a query assembled (by shared variable names)
// from F(x), q1(x), qp(x, y), q2(y), T(y), with x_name/y_name naming the
// anchor nodes:
//
//   G    <- q
//   G    <- F(x), q1(x), qp(x,y), P(y)
//   P(x) <- B(x), qp(x,y), q2(y), T(y)
//   P(x) <- B(x), qp(x,y), P(y), B(y)
//   G    <- F(x), T(x)                    (disjoint variants only)
//
// where B(z) abbreviates A(z), q1(z), q2(z) with fresh existential
// variables per occurrence. The decomposition must satisfy: (a) q1, qp,
// q2 contain no solitary F or T; (b) qp(x,y) is symmetric; (c) q1 and q2
// share no variables, and x resp. y are their only variables shared with
// qp. Violations throw DomainError naming the condition. The result is
// accepted as symmetric by structural_check.
DatalogProgram build_symmetric_program(const Query& q1, const Query& qp,
                                       const Query& q2,
                                       const std::string& x_name,
                                       const std::string& y_name, Ontology o);

}  // namespace sirup

#endif  // SIRUP_DATALOG_HPP
