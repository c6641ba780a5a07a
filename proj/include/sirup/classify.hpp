#ifndef SIRUP_CLASSIFY_HPP
#define SIRUP_CLASSIFY_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sirup/base.hpp"
#include "sirup/datalog.hpp"
#include "sirup/query.hpp"

namespace sirup {

// Positional analysis of a path query. The marked nodes (solitary F,
// solitary T, twins) are listed in path order. For a twinless 1-CQ the
// profile also records the (l, r) decomposition around the unique
// solitary F node x_0: l-many T nodes x_{-l} .. x_{-1} precede it and
// r-many T nodes x_1 .. x_r follow it, and interval i (-l <= i <= r+1)
// holds the role names between x_{i-1} and x_i, where x_{-l-1} is the
// first and x_{r+1} the last node of the path. Queries whose single
// solitary node is a T are analysed on the F/T-swapped query instead;
// `mirrored` records that.
struct PathProfile {
    std::vector<int> solitary_f;  // node ids, path order
    std::vector<int> solitary_t;  // node ids, path order
    std::vector<int> twins;       // node ids, path order
    bool mirrored = false;        // lr analysis ran on the swapped query
    // (l, r); present exactly for twinless 1-CQs.
    std::optional<std::pair<int, int>> lr;
    // Role-name sequences r_{-l} .. r_{r+1}; index i stored at slot i + l.
    // Their concatenation is the path's whole role sequence.
    std::vector<std::vector<std::string>> intervals;
    // Node id -> edge distance from the start of the path.
    std::vector<int> position;

    // Edge count between two nodes of the path.
    int delta(int a, int b) const;
    // Interval r_i for -l <= i <= r+1. Requires lr.
    const std::vector<std::string>& interval(int i) const;
};

// Computes the profile. Throws DomainError when q is not a path.
PathProfile analyze_path(const Query& q);

// Periodicity of a twinless 1-CQ, oriented so the unique solitary node
// is F. Right-periodic: all T nodes follow x_0, and either r = 1 or the
// intervals r_1 .. r_r carry the same role sequence and the tail r_{r+1}
// is copies of that sequence followed by a prefix of it. Left-periodic
// is the mirror image (r_0 .. r_{-(l-1)} repeat, the head r_{-l} is a
// suffix of the period followed by copies of it). Profiles without an
// lr decomposition map to NotOneCQ.
enum class Periodicity { RightPeriodic, LeftPeriodic, Aperiodic, NotOneCQ };

Periodicity periodicity(const PathProfile& p);

// The tetrachotomy: every path query with an A-covering ontology falls
// into exactly one of these data-complexity classes.
enum class ComplexityClass { AC0, NL, P, CONP };

enum class Reason {
    HasTwin,             // AC0, disjoint variant only
    ZeroCQ,              // AC0
    PeriodicOneCQLeft,   // NL
    PeriodicOneCQRight,  // NL
    AperiodicOneCQ,      // P
    TwoCQ,               // CONP
};

struct Verdict {
    ComplexityClass cls;
    Reason reason;
    // True when the query was classified via its F/T-swapped form.
    bool mirrored = false;
    // AC0 verdicts attach a union-of-CQs rewriting: evaluating the
    // disjuncts directly over an ABox decides the certain answer.
    std::vector<Query> fo_rewriting;
    // P verdicts attach the recursive datalog rewriting.
    std::optional<DatalogProgram> program;
};

// Classifies (o, q) for o in {CovA, CovABot}. Throws DomainError for
// total covering variants, for non-path queries, and for twin-containing
// non-0-CQs under plain CovA (no classification is known for those).
Verdict tetrachotomy(const Query& q, Ontology o);

// The one-node query F(x), T(x); the FO-rewriting attached to HasTwin
// verdicts and the extra disjunct the disjoint variants need on top of a
// plain-covering rewriting.
Query twin_query();

std::string class_name(ComplexityClass c);   // "AC0", "NL", "P", "coNP"
std::string reason_name(Reason r);           // "PeriodicOneCQ(Left)", ...
// One-line rendering, e.g. "NL (periodic 1-CQ, left)".
std::string verdict_text(const Verdict& v);

}  // namespace sirup

#endif  // SIRUP_CLASSIFY_HPP
