#ifndef SIRUP_HOM_HPP
#define SIRUP_HOM_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sirup/abox.hpp"
#include "sirup/query.hpp"

namespace sirup {

// A witness mapping from query nodes to individuals; preserves every
// edge's role and maps each required node label onto an individual
// carrying it.
struct Homomorphism {
    std::vector<int> mapping;  // query node id -> individual id

    std::string to_string(const Query& q, const ABox& a) const;
};

// Reusable backtracking search for homomorphisms from a fixed query into
// a fixed ABox. The target's edge index and the query-side search plan
// (a connected visit order with forward-checking on labels) are built
// once; run() may then be called many times with different label
// overlays, which is what the model-enumeration oracle does in its
// inner loop. Instances are immutable after construction and safe to
// share between threads.
class HomSearch {
public:
    HomSearch(const Query& q, const ABox& target);

    // extra, when non-empty, has one LabelSet per target individual and
    // is OR-ed onto the stored labels (the labeling overlay).
    std::optional<Homomorphism> run(std::span<const LabelSet> extra = {}) const;

    // Same search restricted to injective mappings (used by the
    // containment filter over budded structures).
    std::optional<Homomorphism> run_injective(
        std::span<const LabelSet> extra = {}) const;

private:
    struct Step {
        int node;         // query node placed at this step
        int anchor_step;  // earlier step adjacent to it, -1 for the seed
        int anchor_role;  // role id (target side) linking them, -1 if none
        bool anchor_out;  // true: edge anchor -> node; false: node -> anchor
        LabelSet need;
        // Remaining edges between node and earlier-placed nodes to verify.
        struct Check {
            int other_step;
            int role;      // target role id, -1 when the role is absent
            bool out;      // true: edge other -> node
        };
        std::vector<Check> checks;
    };

    const ABox* target_;
    int n_nodes_;
    std::vector<Step> plan_;
    std::vector<LabelSet> base_labels_;
    // Out/in adjacency per (individual, role): individuals reachable by an
    // edge with that role.
    std::vector<std::vector<int>> out_adj_;  // [ind * roles + role]
    std::vector<std::vector<int>> in_adj_;
    std::vector<int> seed_candidates_;
    int role_count_;
    bool impossible_ = false;  // a query role missing from the target

    bool search(int depth, std::vector<int>& assign,
                std::span<const LabelSet> extra, bool injective,
                std::vector<char>& used) const;
};

std::optional<Homomorphism> find_homomorphism(const Query& q, const ABox& a);
std::optional<Homomorphism> find_homomorphism(const Query& q, const ABox& a,
                                              const Labeling& l);

}  // namespace sirup

#endif  // SIRUP_HOM_HPP
