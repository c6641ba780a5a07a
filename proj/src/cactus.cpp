#include "sirup/cactus.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "sirup/hom.hpp"

namespace sirup {

namespace {

std::string segment_ind_name(int segment, const std::string& var) {
    return "s" + std::to_string(segment) + "_" + var;
}

}  // namespace

Cactus::Cactus(const Query& q, Ontology o) {
    int sf = 0;
    int st = 0;
    for (int v = 0; v < q.node_count(); ++v) {
        LabelSet l = q.labels(v);
        if (has_label(l, kF) && !has_label(l, kT)) ++sf;
        if (has_label(l, kT) && !has_label(l, kF)) ++st;
    }
    bool standard = sf == 1 && st >= 1;
    bool flipped = st == 1 && sf >= 2;
    if (!standard && !flipped)
        throw DomainError(
            "the cactus calculus needs a 1-CQ: exactly one solitary F with "
            "at least one solitary T (or the mirror image); got " +
            std::to_string(sf) + " solitary F and " + std::to_string(st) +
            " solitary T");
    mirrored_ = flipped;
    q_ = mirrored_ ? swap_ft(q) : q;
    o_ = o;

    for (int v = 0; v < q_.node_count(); ++v) {
        LabelSet l = q_.labels(v);
        if (has_label(l, kF) && !has_label(l, kT)) solitary_f_ = v;
        if (has_label(l, kT) && !has_label(l, kF)) site_nodes_.push_back(v);
    }

    std::unordered_map<int, int> glue;
    for (int v = 0; v < q_.node_count(); ++v)
        glue[v] = abox_.ind(segment_ind_name(0, q_.var_name(v)));
    NameGen unused("cactus_");
    Segment root;
    root.node_map = abox_.insert_query(q_, unused, {}, glue);
    abox_.finalize();
    segments_.push_back(std::move(root));
    for (int z : site_nodes_) open_t_.insert(segments_[0].node_map[z]);
}

Cactus Cactus::bud(int y) const {
    if (!open_t_.count(y))
        throw DomainError("bud: individual " +
                          (y >= 0 && y < abox_.ind_count() ? abox_.ind_name(y)
                                                           : std::to_string(y)) +
                          " is not an open solitary T");
    int owner = -1;
    int site = -1;
    for (int s = 0; s < static_cast<int>(segments_.size()) && owner < 0; ++s)
        for (int z : site_nodes_)
            if (segments_[s].node_map[z] == y) {
                owner = s;
                site = z;
                break;
            }

    Cactus c = *this;
    int k = static_cast<int>(c.segments_.size());
    c.abox_.clear_label(y, kT);
    std::unordered_map<int, int> glue;
    for (int v = 0; v < q_.node_count(); ++v)
        glue[v] = v == solitary_f_
                      ? y
                      : c.abox_.ind(segment_ind_name(k, q_.var_name(v)));
    std::unordered_map<int, LabelSet> relabel;
    relabel[solitary_f_] =
        static_cast<LabelSet>((q_.labels(solitary_f_) & ~kF) | kA);
    NameGen unused("cactus_");
    Segment seg;
    seg.node_map = c.abox_.insert_query(q_, unused, relabel, glue);
    c.abox_.finalize();
    seg.budded_at = y;
    seg.budded_site = site;
    seg.parent = owner;
    seg.depth = segments_[owner].depth + 1;
    c.segments_.push_back(std::move(seg));
    c.segments_[owner].children.push_back(k);
    c.open_t_.erase(y);
    for (int z : site_nodes_) c.open_t_.insert(c.segments_[k].node_map[z]);
    return c;
}

std::optional<Cactus> Cactus::prune(int y, const std::string& method,
                                    const OracleBudget& budget) const {
    if (!open_t_.count(y))
        throw DomainError("prune: individual " +
                          (y >= 0 && y < abox_.ind_count() ? abox_.ind_name(y)
                                                           : std::to_string(y)) +
                          " is not an open solitary T");
    Cactus c = *this;
    c.abox_.clear_label(y, kT);
    c.abox_.finalize();
    if (!certain_answer(o_, q_, c.abox_, method, budget).answer)
        return std::nullopt;
    c.open_t_.erase(y);
    c.pruned_.insert(y);
    return c;
}

ABox Cactus::as_abox() const { return mirrored_ ? swap_ft(abox_) : abox_; }

Query Cactus::as_query() const { return abox_as_query(as_abox()); }

int Cactus::depth() const {
    int d = 0;
    for (const auto& s : segments_) d = std::max(d, s.depth);
    return d;
}

std::string Cactus::canonical() const {
    // Child order is forced by the budded site's position in the query, so
    // a depth-first rendering with sites in query-node order is canonical.
    std::unordered_map<int, int> child_at;  // budded individual -> segment
    for (int s = 1; s < static_cast<int>(segments_.size()); ++s)
        child_at[segments_[s].budded_at] = s;
    std::string out;
    auto render = [&](auto&& self, int s) -> void {
        out += '[';
        for (int z : site_nodes_) {
            int i = segments_[s].node_map[z];
            auto c = child_at.find(i);
            if (c != child_at.end()) {
                out += '(';
                self(self, c->second);
                out += ')';
            } else if (pruned_.count(i)) {
                out += 'p';
            } else {
                out += 't';
            }
        }
        out += ']';
    };
    render(render, 0);
    if (mirrored_) out += 'm';
    return out;
}

int Cactus::atom_count() const {
    int n = static_cast<int>(abox_.edges().size());
    for (int i = 0; i < abox_.ind_count(); ++i)
        n += std::popcount(static_cast<unsigned>(abox_.unary(i)));
    return n;
}

std::string Cactus::dump() const {
    std::ostringstream out;
    out << "# skeleton: s0 root\n";
    for (int s = 1; s < static_cast<int>(segments_.size()); ++s)
        out << "# skeleton: s" << s << " parent=s" << segments_[s].parent
            << " budded=" << abox_.ind_name(segments_[s].budded_at) << "\n";
    for (int y : pruned_) out << "# pruned: " << abox_.ind_name(y) << "\n";
    if (mirrored_) out << "# mirrored\n";
    out << serialize_abox(as_abox());
    return out.str();
}

bool Cactus::reconstructible() const {
    ABox rebuilt;
    NameGen unused("cactus_");
    for (int s = 0; s < static_cast<int>(segments_.size()); ++s) {
        std::unordered_map<int, int> glue;
        for (int v = 0; v < q_.node_count(); ++v)
            glue[v] = rebuilt.ind(abox_.ind_name(segments_[s].node_map[v]));
        std::unordered_map<int, LabelSet> relabel;
        if (s > 0)
            relabel[solitary_f_] =
                static_cast<LabelSet>((q_.labels(solitary_f_) & ~kF) | kA);
        rebuilt.insert_query(q_, unused, relabel, glue);
    }
    for (int s = 1; s < static_cast<int>(segments_.size()); ++s)
        rebuilt.clear_label(rebuilt.find_ind(abox_.ind_name(segments_[s].budded_at)),
                            kT);
    for (int y : pruned_)
        rebuilt.clear_label(rebuilt.find_ind(abox_.ind_name(y)), kT);
    rebuilt.finalize();
    return serialize_abox(rebuilt) == serialize_abox(abox_);
}

// ---------------------------------------------------------------------------

namespace {

// Deterministic expansion candidates: segments in creation order, sites in
// query-node order, buds before prunes.
std::vector<Cactus> expansions(const Cactus& c, int depth_bound,
                               bool with_prune, const std::string& method,
                               const OracleBudget& budget) {
    std::vector<Cactus> out;
    const Query& q = c.oriented_query();
    std::vector<int> sites;
    for (int v = 0; v < q.node_count(); ++v)
        if (has_label(q.labels(v), kT) && !has_label(q.labels(v), kF))
            sites.push_back(v);
    for (const auto& seg : c.segments()) {
        for (int z : sites) {
            int y = seg.node_map[z];
            if (!c.open_t().count(y)) continue;
            if (seg.depth + 1 <= depth_bound) out.push_back(c.bud(y));
        }
    }
    if (with_prune)
        for (const auto& seg : c.segments())
            for (int z : sites) {
                int y = seg.node_map[z];
                if (!c.open_t().count(y)) continue;
                if (auto pruned = c.prune(y, method, budget))
                    out.push_back(std::move(*pruned));
            }
    return out;
}

}  // namespace

CactusPool enumerate_cactuses(const Query& q, Ontology o, int depth_bound,
                              std::size_t count_cap, bool with_prune,
                              const std::string& method,
                              const OracleBudget& budget) {
    CactusPool pool;
    Cactus root(q, o);
    if (count_cap == 0) {
        pool.truncated = true;
        return pool;
    }
    std::unordered_set<std::string> seen;
    seen.insert(root.canonical());
    pool.cactuses.push_back(std::move(root));
    std::vector<std::size_t> stack = {0};
    while (!stack.empty()) {
        std::size_t at = stack.back();
        stack.pop_back();
        // The pool vector grows while indices are on the stack; copy the
        // cactus so the reference cannot dangle.
        Cactus current = pool.cactuses[at];
        auto next = expansions(current, depth_bound, with_prune, method, budget);
        std::vector<std::size_t> added;
        for (auto& cand : next) {
            std::string key = cand.canonical();
            if (!seen.insert(key).second) continue;
            if (pool.cactuses.size() >= count_cap) {
                pool.truncated = true;
                return pool;
            }
            added.push_back(pool.cactuses.size());
            pool.cactuses.push_back(std::move(cand));
        }
        // Depth-first: expand the first new candidate next.
        for (auto it = added.rbegin(); it != added.rend(); ++it)
            stack.push_back(*it);
    }
    return pool;
}

namespace {

struct PoolStats {
    Query as_query;
    int atoms = 0;
    int nodes = 0;
    int edges = 0;
    int f_nodes = 0;
    int t_nodes = 0;
    int a_nodes = 0;
    std::unordered_map<std::string, int> role_edges;
    std::string canon;
};

PoolStats pool_stats(const Cactus& c) {
    PoolStats s;
    const ABox& a = c.abox();
    s.as_query = abox_as_query(a);
    s.atoms = c.atom_count();
    s.nodes = a.ind_count();
    s.edges = static_cast<int>(a.edges().size());
    for (int i = 0; i < a.ind_count(); ++i) {
        if (has_label(a.unary(i), kF)) ++s.f_nodes;
        if (has_label(a.unary(i), kT)) ++s.t_nodes;
        if (has_label(a.unary(i), kA)) ++s.a_nodes;
    }
    for (const auto& e : a.edges()) ++s.role_edges[a.role_name(e.role)];
    s.canon = c.canonical();
    return s;
}

// Quick necessary conditions for an injective label-preserving embedding
// of i into j.
bool may_embed(const PoolStats& i, const PoolStats& j) {
    if (i.nodes > j.nodes || i.edges > j.edges || i.atoms > j.atoms)
        return false;
    if (i.f_nodes > j.f_nodes || i.t_nodes > j.t_nodes ||
        i.a_nodes > j.a_nodes)
        return false;
    for (const auto& [role, n] : i.role_edges) {
        auto it = j.role_edges.find(role);
        if (it == j.role_edges.end() || n > it->second) return false;
    }
    return true;
}

}  // namespace

std::vector<Cactus> minimal_filter(const std::vector<Cactus>& pool) {
    int n = static_cast<int>(pool.size());
    std::vector<PoolStats> stats;
    stats.reserve(pool.size());
    for (const auto& c : pool) stats.push_back(pool_stats(c));
    // Total deterministic order: size, then canonical form, then index
    // (isomorphic duplicates share a canonical form; the earliest wins).
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (stats[a].atoms != stats[b].atoms)
            return stats[a].atoms < stats[b].atoms;
        if (stats[a].canon != stats[b].canon)
            return stats[a].canon < stats[b].canon;
        return a < b;
    });
    std::vector<int> rank(n);
    for (int pos = 0; pos < n; ++pos) rank[order[pos]] = pos;

    std::vector<bool> kept(n, true);
    for (int j = 0; j < n; ++j) {
        for (int i : order) {
            if (i == j) continue;
            if (rank[i] > rank[j]) break;  // only smaller-or-earlier members
            if (!may_embed(stats[i], stats[j])) continue;
            if (HomSearch(stats[i].as_query, pool[j].abox()).run_injective()) {
                kept[j] = false;
                break;
            }
        }
    }
    std::vector<Cactus> out;
    for (int j = 0; j < n; ++j)
        if (kept[j]) out.push_back(pool[j]);
    return out;
}

BranchingReport branching_number(const Cactus& c) {
    const auto& segs = c.segments();
    BranchingReport report;
    report.rank.assign(segs.size(), 0);
    // Children always carry larger indices than their parent, so a reverse
    // sweep visits every child before its parent.
    for (int s = static_cast<int>(segs.size()) - 1; s >= 0; --s) {
        if (segs[s].children.empty()) continue;
        int m = 0;
        for (int ch : segs[s].children) m = std::max(m, report.rank[ch]);
        int at_max = 0;
        for (int ch : segs[s].children)
            if (report.rank[ch] == m) ++at_max;
        report.rank[s] = at_max >= 2 ? m + 1 : m;
    }
    if (!segs.empty()) report.number = report.rank[0];
    return report;
}

namespace {

// Does some cactus in `low` map homomorphically into `target`? Both sides
// are in the oriented view, which is equivalent to checking the original
// orientation on both.
bool embeds_some(const std::vector<const Cactus*>& low, const Cactus& target) {
    for (const Cactus* l : low)
        if (find_homomorphism(abox_as_query(l->abox()), target.abox()))
            return true;
    return false;
}

UCQRewriting make_rewriting(const std::vector<const Cactus*>& low, int d) {
    UCQRewriting r;
    r.depth = d;
    for (const Cactus* c : low) r.disjuncts.push_back(c->as_query());
    return r;
}

}  // namespace

FoProbeResult fo_probe(const Query& q, Ontology o, int max_depth,
                       std::size_t count_cap, const std::string& method,
                       const OracleBudget& budget) {
    if (max_depth < 1) throw DomainError("fo_probe needs max_depth >= 1");
    FoProbeResult result;

    CactusPool full = enumerate_cactuses(q, o, max_depth, count_cap, false,
                                         method, budget);
    if (!full.truncated) {
        // The pool is complete up to max_depth: the probe is exact relative
        // to that frontier.
        for (int d = 0; d < max_depth; ++d) {
            std::vector<const Cactus*> low;
            std::vector<const Cactus*> high;
            for (const auto& c : full.cactuses)
                (c.depth() <= d ? low : high).push_back(&c);
            bool all = true;
            for (const Cactus* h : high)
                if (!embeds_some(low, *h)) {
                    all = false;
                    break;
                }
            if (all) {
                result.kind = FoProbeResult::Kind::RewritableAtDepth;
                result.depth = d;
                result.rewriting = make_rewriting(low, d);
                result.note =
                    "every cactus of depth <= " + std::to_string(max_depth) +
                    " and > " + std::to_string(d) +
                    " embeds a disjunct; the pool of " +
                    std::to_string(full.cactuses.size()) +
                    " cactuses is complete up to that frontier";
                return result;
            }
        }
        result.kind = FoProbeResult::Kind::NoBoundUpTo;
        result.depth = max_depth;
        result.note =
            "for each d < " + std::to_string(max_depth) +
            " some cactus of depth d+1 embeds no cactus of depth <= d; the "
            "pool of " +
            std::to_string(full.cactuses.size()) +
            " cactuses is complete up to depth " + std::to_string(max_depth);
        return result;
    }

    // The full pool exceeded the cap. Fall back to refutation mode: rule
    // out each d with a witness cactus of depth d+1 that embeds no member
    // of the complete depth-<= d pool. A witness refutes d even when the
    // deeper enumeration is truncated; confirming d needs a complete level.
    CactusPool low_pool = enumerate_cactuses(q, o, 0, count_cap, false,
                                             method, budget);
    if (low_pool.truncated) {
        result.kind = FoProbeResult::Kind::Inconclusive;
        result.note = "count cap " + std::to_string(count_cap) +
                      " cannot hold even the root cactus";
        return result;
    }
    for (int d = 0; d < max_depth; ++d) {
        CactusPool next = enumerate_cactuses(q, o, d + 1, count_cap, false,
                                             method, budget);
        std::vector<const Cactus*> low;
        for (const auto& c : low_pool.cactuses) low.push_back(&c);
        const Cactus* witness = nullptr;
        for (const auto& c : next.cactuses) {
            if (c.depth() != d + 1) continue;
            if (!embeds_some(low, c)) {
                witness = &c;
                break;
            }
        }
        if (!witness) {
            if (next.truncated) {
                result.kind = FoProbeResult::Kind::Inconclusive;
                result.depth = d;
                result.note =
                    "the depth-" + std::to_string(d + 1) +
                    " enumeration exceeded the count cap of " +
                    std::to_string(count_cap) +
                    " before a refuting witness appeared, and the level is "
                    "too incomplete to confirm depth " + std::to_string(d);
                return result;
            }
            result.kind = FoProbeResult::Kind::RewritableAtDepth;
            result.depth = d;
            result.rewriting = make_rewriting(low, d);
            result.note =
                "every cactus of depth " + std::to_string(d + 1) +
                " embeds a disjunct (complete level); deeper levels exceeded "
                "the count cap of " +
                std::to_string(count_cap) + " and were not verified";
            return result;
        }
        if (d + 1 < max_depth) {
            if (next.truncated) {
                result.kind = FoProbeResult::Kind::Inconclusive;
                result.depth = d + 1;
                result.note =
                    "depths up to " + std::to_string(d) +
                    " are refuted by witnesses, but the depth-" +
                    std::to_string(d + 1) +
                    " pool exceeded the count cap of " +
                    std::to_string(count_cap) +
                    " so deeper bounds cannot be decided";
                return result;
            }
            low_pool = std::move(next);
        }
    }
    result.kind = FoProbeResult::Kind::NoBoundUpTo;
    result.depth = max_depth;
    result.note =
        "each d < " + std::to_string(max_depth) +
        " is refuted by a depth-(d+1) cactus embedding no cactus of depth "
        "<= d (lower pools complete; witnesses found within the count cap "
        "of " +
        std::to_string(count_cap) + ")";
    return result;
}

}  // namespace sirup
