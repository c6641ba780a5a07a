#ifndef SIRUP_QUERY_HPP
#define SIRUP_QUERY_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sirup/base.hpp"

namespace sirup {

// A Boolean conjunctive query: a connected node-labelled digraph with
// role-labelled edges. Node labels are subsets of {F, T} for parsed
// queries; rewriting artifacts built from budded structures may also
// carry A. When the edges form a simple directed path visiting every
// node exactly once, the path layout is recorded in path_nodes/path_roles.
class Query {
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
    int var(const std::string& name);        // get-or-create node id
    int find_var(const std::string& name) const;  // -1 when absent
    int role(const std::string& name);       // get-or-create role id
    void add_label(int node, uint8_t l) { labels_[node] |= l; }
    void add_edge(int src, int role_id, int dst);
    // Dedups edges, checks connectivity, detects path shape. Must be
    // called once after the atoms have been added.
    void finalize();

    // -- access ------------------------------------------------------------
    int node_count() const { return static_cast<int>(names_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::string& var_name(int node) const { return names_[node]; }
    LabelSet labels(int node) const { return labels_[node]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::string& role_name(int role_id) const { return roles_[role_id]; }
    int role_count() const { return static_cast<int>(roles_.size()); }

    bool is_path() const { return !path_nodes_.empty(); }
    // Node ids in path order (size = node_count) and role ids along it
    // (size = edge_count). Empty when the query is not path-shaped.
    const std::vector<int>& path_nodes() const { return path_nodes_; }
    const std::vector<int>& path_roles() const { return path_roles_; }

    bool has_twin() const;
    // Number of edges; the conventional size measure for path queries.
    int size() const { return edge_count(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> ids_;
    std::vector<LabelSet> labels_;
    std::vector<std::string> roles_;
    std::unordered_map<std::string, int> role_ids_;
    std::vector<Edge> edges_;
    std::vector<int> path_nodes_;
    std::vector<int> path_roles_;

    void detect_path();
};

// Parses the atom grammar ("T(x). R(x,y).") or the path shorthand
// ("[T] -R-> [ ] -R-> [F,T]"). Throws ParseError with position info;
// throws DomainError when the atoms do not form a connected query.
Query parse_query(const std::string& text);

// Canonical re-serialization in the atom grammar; path queries list
// their atoms in path order. parse_query(serialize_query(q)) equals q
// up to node renaming.
std::string serialize_query(const Query& q);

// Swap the F and T labels on every node. The covering axiom is symmetric
// in F and T, so this preserves certain answers when applied to queries
// and data together.
Query swap_ft(const Query& q);

// Reverse every edge (for paths: read the path backwards). Preserves
// certain answers when applied to queries and data together.
Query reverse_query(const Query& q);

// Positions (node ids) of solitary-F nodes, solitary-T nodes and twins.
struct NodeKinds {
    std::vector<int> solitary_f;
    std::vector<int> solitary_t;
    std::vector<int> twins;
};
NodeKinds node_kinds(const Query& q);

// 0-CQ: no solitary F or no solitary T. 1-CQ: exactly one solitary node
// of one kind, at least one of the other. 2-CQ: at least two of each.
enum class CqArity { Zero, One, Two };
CqArity cq_arity(const Query& q);

}  // namespace sirup

#endif  // SIRUP_QUERY_HPP
