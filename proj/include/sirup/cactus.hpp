#ifndef SIRUP_CACTUS_HPP
#define SIRUP_CACTUS_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sirup/abox.hpp"
#include "sirup/oracle.hpp"
#include "sirup/query.hpp"

namespace sirup {

// The cactus calculus. A cactus is an ABox grown from a 1-CQ by
// repeatedly budding: picking an individual y that is still labelled by a
// solitary T, removing that T, relabelling y with A and attaching a fresh
// copy of the query with its solitary-F node glued onto y. Pruning
// removes a solitary T outright when the covering ontology still forces
// the query on the remainder. Cactuses double as Boolean CQs: the union
// of all cactuses up to a depth is the candidate FO-rewriting tested by
// fo_probe, and their skeleton branching behaviour separates the
// linear-recursion-friendly queries from the rest.
//
// Internally every cactus is kept in the orientation with exactly one
// solitary F in the query (queries with one solitary T and several
// solitary F's are handled by swapping F and T first; `mirrored` records
// that). Accessors that hand out ABoxes or CQs for external use swap the
// labels back.

// One query copy inside a cactus. The root segment is the query itself;
// every other segment was attached by budding and remembers where.
struct Segment {
    // query node -> individual id in Cactus::abox (oriented view).
    std::vector<int> node_map;
    // Individual whose T was consumed by this bud; -1 for the root.
    int budded_at = -1;
    // Query node (in the parent's copy) that individual came from; -1 root.
    int budded_site = -1;
    int parent = -1;  // segment index; -1 for the root
    std::vector<int> children;
    int depth = 0;  // edges from the root segment
};

class Cactus {
public:
    // The root cactus: the query itself read as an ABox.
    Cactus(const Query& q, Ontology o);

    // -- growth ------------------------------------------------------------
    // Buds at individual y (must be an open solitary T). Returns the grown
    // cactus; *this is unchanged.
    Cactus bud(int y) const;

    // Removes T(y) (y must be an open solitary T) when the ontology still
    // forces the query on the result; absent otherwise. method selects the
    // side-condition decider as in certain_answer ("sat" by default: the
    // grounding stays small on tree-shaped ABoxes).
    std::optional<Cactus> prune(int y, const std::string& method = "sat",
                                const OracleBudget& budget = {}) const;

    // -- the grown structure -----------------------------------------------
    const ABox& abox() const { return abox_; }  // oriented view
    // The cactus as data / as a Boolean CQ, in the orientation of the
    // original query (labels swapped back when mirrored).
    ABox as_abox() const;
    Query as_query() const;

    const std::vector<Segment>& segments() const { return segments_; }
    const std::set<int>& open_t() const { return open_t_; }
    const std::set<int>& pruned() const { return pruned_; }
    bool mirrored() const { return mirrored_; }
    const Query& oriented_query() const { return q_; }
    Ontology ontology() const { return o_; }
    int depth() const;  // max segment depth

    // Canonical form: segments serialized depth-first, each segment listing
    // its solitary-T sites in query-node order as open/pruned/(child).
    // Equal strings = isomorphic cactuses (budding sites are distinguished
    // by their position in the query). Used for deduplication.
    std::string canonical() const;

    // Atom count (unary labels + edges): the size measure for minimality.
    int atom_count() const;

    // ABox grammar dump plus a `# skeleton:` comment block (parent/child
    // pairs and budded nodes), in original orientation. parse_abox reads
    // the dump back (comments are skipped).
    std::string dump() const;

    // Rebuilds the ABox from the segment tree plus the pruned set and
    // checks it matches abox() atom for atom. Cheap structural self-check.
    bool reconstructible() const;

private:
    Cactus() = default;

    Query q_;  // oriented: exactly one solitary F
    Ontology o_ = Ontology::CovA;
    bool mirrored_ = false;
    ABox abox_;  // oriented view
    std::vector<Segment> segments_;
    std::set<int> open_t_;
    std::set<int> pruned_;
    std::vector<int> site_nodes_;  // solitary-T nodes of q_, ascending
    int solitary_f_ = -1;          // the unique solitary-F node of q_
};

// A depth-bounded enumeration result. `truncated` reports that count_cap
// stopped the walk before all cactuses within the depth bound were seen;
// it is never silent.
struct CactusPool {
    std::vector<Cactus> cactuses;
    bool truncated = false;
};

// All cactuses of depth <= depth_bound up to canonical-form isomorphism,
// depth-first, budding (and pruning, when with_prune) candidates ordered
// by segment creation order then query-node order; stops at count_cap
// with the truncation flag set. with_prune interleaves pruning with
// budding, so the pool is a fragment of the prune-closed class. Throws
// DomainError unless q is a 1-CQ (exactly one solitary F with at least
// one solitary T, or mirrored).
CactusPool enumerate_cactuses(const Query& q, Ontology o, int depth_bound,
                              std::size_t count_cap, bool with_prune,
                              const std::string& method = "sat",
                              const OracleBudget& budget = {});

// Removes every cactus that contains a distinct pool member as a
// labelled sub-ABox up to renaming (and collapses isomorphic duplicates
// to one survivor). Minimality is relative to the pool: the full
// prune-closed class is infinite, so callers must carry the enumeration
// frontier alongside. Order of survivors follows the input.
std::vector<Cactus> minimal_filter(const std::vector<Cactus>& pool);

// Branching ranks over the skeleton: leaves rank 0, a node with >= 2
// children of maximal child rank m gets m+1, otherwise m. number is the
// root's rank.
struct BranchingReport {
    std::vector<int> rank;  // per segment index
    int number = 0;
};

BranchingReport branching_number(const Cactus& c);

// A union-of-CQs rewriting: the cactuses of depth <= depth read as
// Boolean CQs, in the orientation of the source query.
struct UCQRewriting {
    std::vector<Query> disjuncts;
    int depth = 0;
};

// Depth probe for FO-rewritability: looks for the least d < max_depth
// such that every enumerated cactus deeper than d contains a homomorphic
// image of some cactus of depth <= d. The answer is exact relative to
// the enumerated frontier; `note` spells out what was verified.
struct FoProbeResult {
    enum class Kind { RewritableAtDepth, NoBoundUpTo, Inconclusive };
    Kind kind = Kind::Inconclusive;
    int depth = 0;  // d on success; max_depth for NoBoundUpTo
    std::optional<UCQRewriting> rewriting;
    std::string note;
};

// When the full pool up to max_depth fits under count_cap the probe is
// exact up to that frontier. Otherwise it falls back to refutation mode:
// depth d is ruled out by a witness cactus of depth d+1 embedding no
// cactus of depth <= d (sound as long as the depth-d pool is complete),
// and the probe reports Inconclusive when even that is cut off.
FoProbeResult fo_probe(const Query& q, Ontology o, int max_depth,
                       std::size_t count_cap,
                       const std::string& method = "sat",
                       const OracleBudget& budget = {});

}  // namespace sirup

#endif  // SIRUP_CACTUS_HPP
