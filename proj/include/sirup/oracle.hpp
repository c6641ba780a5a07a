#ifndef SIRUP_ORACLE_HPP
#define SIRUP_ORACLE_HPP

#include <cstdint>
#include <optional>

#include "sirup/abox.hpp"
#include "sirup/base.hpp"
#include "sirup/cnf.hpp"
#include "sirup/hom.hpp"
#include "sirup/query.hpp"

namespace sirup {

// Two independent certain-answer deciders. Enumeration walks every minimal
// model (one F/T choice per undecided individual) and looks for one that
// embeds no image of the query; grounding emits the equivalent
// propositional clause set and hands it to DPLL. They are used as ground
// truth against each other and against everything built on top.

struct OracleBudget {
    uint64_t enum_cap = uint64_t(1) << 24;  // max number of labelings
    uint64_t clause_cap = 10'000'000;       // max clauses before simplification
};

struct CertainAnswerReport {
    bool answer;
    enum class Method { Enumeration, Grounding } method;
    // Counter-model labeling, attached when the answer is "no".
    std::optional<Labeling> witness;
};

// Enumeration decider. jobs = 1 (the default) runs the serial reference
// loop; jobs = 0 or > 1 runs the parallel kernel with that many threads
// (0 = hardware default). Both return identical results: the counter-model,
// when one exists, is the least labeling in T-bit order, greedily relaxed
// toward F for readability.
CertainAnswerReport certain_answer_enum(Ontology o, const Query& q,
                                        const ABox& a,
                                        const OracleBudget& budget = {},
                                        int jobs = 1);

// The clause set whose unsatisfiability is the certain answer: covering
// (and, for the disjoint variants, disjointness) clauses per individual,
// a unit per ABox fact, and one all-negative clause per assignment of the
// query variables whose binary atoms all lie in the ABox.
CNF ground_to_cnf(Ontology o, const Query& q, const ABox& a,
                  const OracleBudget& budget = {});

// Grounding decider: ground_to_cnf + dpll_solve; a satisfying assignment
// converts back into a counter-model labeling.
CertainAnswerReport certain_answer_sat(Ontology o, const Query& q,
                                       const ABox& a,
                                       const OracleBudget& budget = {});

// Dispatch by name ("enum" / "sat"); used by the CLI and by callers that
// let the user pick the decider.
CertainAnswerReport certain_answer(Ontology o, const Query& q, const ABox& a,
                                   const std::string& method,
                                   const OracleBudget& budget = {},
                                   int jobs = 1);

}  // namespace sirup

#endif  // SIRUP_ORACLE_HPP
