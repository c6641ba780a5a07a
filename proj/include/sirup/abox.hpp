#ifndef SIRUP_ABOX_HPP
#define SIRUP_ABOX_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sirup/base.hpp"
#include "sirup/query.hpp"

namespace sirup {

// A finite set of ground facts: unary labels over {F, T, A} plus
// role-labelled edges between individuals. Set semantics; duplicate
// facts merge silently. ABoxes also carry budded structures and gadget
// outputs, so they need not be connected.
class ABox {
public:
    struct Edge {
        int src;
        int role;
        int dst;
        bool operator==(const Edge& o) const {
            return src == o.src && role == o.role && dst == o.dst;
        }
        bool operator<(const Edge& o) const {
            if (src != o.src) return src < o.src;
            if (role != o.role) return role < o.role;
            return dst < o.dst;
        }
    };

    // -- construction ------------------------------------------------------
    int ind(const std::string& name);              // get-or-create
    int find_ind(const std::string& name) const;   // -1 when absent
    int role(const std::string& name);
    int find_role(const std::string& name) const;  // -1 when absent
    void set_label(int individual, uint8_t l) { unary_[individual] |= l; }
    void clear_label(int individual, uint8_t l) {
        unary_[individual] &= static_cast<LabelSet>(~l);
    }
    void add_edge(int src, int role_id, int dst);
    void finalize();  // sorts and dedups the edge set

    // Copies a query into this ABox under fresh individual names from gen.
    // relabel maps query node -> replacement label set (absent = keep the
    // query's own labels); glue maps query node -> existing individual id
    // (those nodes merge onto the given individuals instead of getting
    // fresh names; relabel still applies to them when present). Returns
    // query node -> individual id.
    std::vector<int> insert_query(
        const Query& q, NameGen& gen,
        const std::unordered_map<int, LabelSet>& relabel = {},
        const std::unordered_map<int, int>& glue = {});

    // -- access ------------------------------------------------------------
    int ind_count() const { return static_cast<int>(names_.size()); }
    const std::string& ind_name(int individual) const { return names_[individual]; }
    LabelSet unary(int individual) const { return unary_[individual]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::string& role_name(int role_id) const { return roles_[role_id]; }
    int role_count() const { return static_cast<int>(roles_.size()); }
    bool has_edge(int src, int role_id, int dst) const;

    // Any individual labelled both F and T.
    bool has_twin() const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> ids_;
    std::vector<LabelSet> unary_;
    std::vector<std::string> roles_;
    std::unordered_map<std::string, int> role_ids_;
    std::vector<Edge> edges_;
    bool finalized_ = false;
};

ABox parse_abox(const std::string& text);
std::string serialize_abox(const ABox& a);

// Swap F and T labels on every individual (edges untouched).
ABox swap_ft(const ABox& a);
// Reverse every edge (labels untouched).
ABox reverse_abox(const ABox& a);

// Individuals the covering axiom leaves undecided: those lacking both F
// and T, restricted to A-labelled ones unless the ontology covers every
// individual. Ascending ids.
std::vector<int> undecided_individuals(const ABox& a, Ontology o);

// A choice of F or T for every undecided individual of a fixed ABox,
// i.e. one minimal model. inds is ascending; choice[i] is kF or kT.
struct Labeling {
    std::vector<int> inds;
    std::vector<uint8_t> choice;
};

// Materializes the minimal model: every chosen label is added, existing
// labels (including A) are retained.
ABox apply_labeling(const ABox& a, const Labeling& l);

std::string labeling_to_string(const ABox& a, const Labeling& l);

// Reads an ABox as a pattern to match (its individuals become variables),
// e.g. for evaluating budded structures as Boolean CQs. Does not require
// connectivity and skips the path analysis.
Query abox_as_query(const ABox& a);

// Builds the ABox a query describes: fresh individuals named by gen, the
// query's F/T labels kept, labels overridden per relabel (query node ->
// replacement label set).
ABox query_to_abox(const Query& q, NameGen& gen,
                   const std::unordered_map<int, LabelSet>& relabel = {});

}  // namespace sirup

#endif  // SIRUP_ABOX_HPP
