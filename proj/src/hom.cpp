#include "sirup/hom.hpp"

#include <algorithm>

namespace sirup {

std::string Homomorphism::to_string(const Query& q, const ABox& a) const {
    std::string s;
    for (size_t v = 0; v < mapping.size(); ++v) {
        if (!s.empty()) s += " ";
        s += q.var_name(static_cast<int>(v)) + "->" + a.ind_name(mapping[v]);
    }
    return s;
}

HomSearch::HomSearch(const Query& q, const ABox& target) : target_(&target) {
    n_nodes_ = q.node_count();
    role_count_ = std::max(1, target.role_count());
    int n_inds = target.ind_count();

    base_labels_.resize(n_inds);
    for (int i = 0; i < n_inds; ++i) base_labels_[i] = target.unary(i);

    out_adj_.assign(static_cast<size_t>(n_inds) * role_count_, {});
    in_adj_.assign(static_cast<size_t>(n_inds) * role_count_, {});
    for (const auto& e : target.edges()) {
        out_adj_[static_cast<size_t>(e.src) * role_count_ + e.role].push_back(e.dst);
        in_adj_[static_cast<size_t>(e.dst) * role_count_ + e.role].push_back(e.src);
    }
    for (auto& v : out_adj_) std::sort(v.begin(), v.end());
    for (auto& v : in_adj_) std::sort(v.begin(), v.end());

    seed_candidates_.resize(n_inds);
    for (int i = 0; i < n_inds; ++i) seed_candidates_[i] = i;

    // Translate query roles to target role ids; a role the target never
    // uses makes every mapping of its edges impossible.
    std::vector<int> role_map(q.role_count(), -1);
    for (int r = 0; r < q.role_count(); ++r)
        role_map[r] = target.find_role(q.role_name(r));
    for (const auto& e : q.edges())
        if (role_map[e.role] == -1) {
            impossible_ = true;
            return;
        }

    // Visit order: BFS over the query's undirected adjacency, each
    // component seeded on a maximally labelled node. Every non-seed node
    // is anchored to the edge that discovered it, so its candidates come
    // from an adjacency list; its remaining edges into placed nodes
    // become point checks.
    std::vector<std::vector<int>> incident(n_nodes_);
    for (size_t i = 0; i < q.edges().size(); ++i) {
        const auto& e = q.edges()[i];
        incident[e.src].push_back(static_cast<int>(i));
        if (e.dst != e.src) incident[e.dst].push_back(static_cast<int>(i));
    }

    auto label_score = [](LabelSet l) {
        return (l & 1) + ((l >> 1) & 1) + ((l >> 2) & 1);
    };
    std::vector<int> step_of(n_nodes_, -1);
    std::vector<int> anchor_edge(n_nodes_, -1);
    std::vector<int> via_from(n_nodes_, -1);
    std::vector<int> order;
    order.reserve(n_nodes_);
    size_t scan = 0;
    while (static_cast<int>(order.size()) < n_nodes_) {
        int seed = -1, best = -1;
        for (int v = 0; v < n_nodes_; ++v) {
            if (step_of[v] != -1) continue;
            int score = label_score(q.labels(v));
            if (score > best) {
                best = score;
                seed = v;
            }
        }
        step_of[seed] = static_cast<int>(order.size());
        order.push_back(seed);
        while (scan < order.size()) {
            int u = order[scan++];
            for (int ei : incident[u]) {
                const auto& e = q.edges()[ei];
                int w = e.src == u ? e.dst : e.src;
                if (w == u || step_of[w] != -1) continue;
                step_of[w] = static_cast<int>(order.size());
                anchor_edge[w] = ei;
                via_from[w] = u;
                order.push_back(w);
            }
        }
    }

    plan_.reserve(n_nodes_);
    for (int k = 0; k < n_nodes_; ++k) {
        int v = order[k];
        Step step;
        step.node = v;
        step.need = q.labels(v);
        step.anchor_step = -1;
        step.anchor_role = -1;
        step.anchor_out = false;
        if (anchor_edge[v] != -1) {
            const auto& e = q.edges()[anchor_edge[v]];
            step.anchor_step = step_of[via_from[v]];
            step.anchor_role = role_map[e.role];
            step.anchor_out = (e.src == via_from[v]);
        }
        for (int ei : incident[v]) {
            if (ei == anchor_edge[v]) continue;
            const auto& e = q.edges()[ei];
            int other = e.src == v ? e.dst : e.src;
            if (step_of[other] > k) continue;  // handled when other is placed
            step.checks.push_back(
                Step::Check{step_of[other], role_map[e.role], e.dst == v});
        }
        plan_.push_back(std::move(step));
    }
}

std::optional<Homomorphism> HomSearch::run(std::span<const LabelSet> extra) const {
    if (impossible_) return std::nullopt;
    std::vector<int> assign(n_nodes_, -1);
    std::vector<char> used;
    if (search(0, assign, extra, false, used))
        return Homomorphism{std::move(assign)};
    return std::nullopt;
}

std::optional<Homomorphism> HomSearch::run_injective(
    std::span<const LabelSet> extra) const {
    if (impossible_) return std::nullopt;
    std::vector<int> assign(n_nodes_, -1);
    std::vector<char> used(base_labels_.size(), 0);
    if (search(0, assign, extra, true, used))
        return Homomorphism{std::move(assign)};
    return std::nullopt;
}

bool HomSearch::search(int depth, std::vector<int>& assign,
                       std::span<const LabelSet> extra, bool injective,
                       std::vector<char>& used) const {
    if (depth == static_cast<int>(plan_.size())) return true;
    const Step& s = plan_[depth];
    const std::vector<int>* cands;
    if (s.anchor_step == -1) {
        cands = &seed_candidates_;
    } else {
        if (s.anchor_role == -1) return false;
        int anchored = assign[plan_[s.anchor_step].node];
        size_t key = static_cast<size_t>(anchored) * role_count_ + s.anchor_role;
        cands = s.anchor_out ? &out_adj_[key] : &in_adj_[key];
    }
    for (int c : *cands) {
        LabelSet have = base_labels_[c];
        if (!extra.empty()) have |= extra[c];
        if ((have & s.need) != s.need) continue;
        if (injective && used[c]) continue;
        bool ok = true;
        for (const auto& chk : s.checks) {
            if (chk.role == -1) {
                ok = false;
                break;
            }
            int other =
                chk.other_step == depth ? c : assign[plan_[chk.other_step].node];
            int from = chk.out ? other : c;
            int to = chk.out ? c : other;
            const auto& lst =
                out_adj_[static_cast<size_t>(from) * role_count_ + chk.role];
            if (!std::binary_search(lst.begin(), lst.end(), to)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        assign[s.node] = c;
        if (injective) used[c] = 1;
        if (search(depth + 1, assign, extra, injective, used)) return true;
        assign[s.node] = -1;
        if (injective) used[c] = 0;
    }
    return false;
}

std::optional<Homomorphism> find_homomorphism(const Query& q, const ABox& a) {
    return HomSearch(q, a).run();
}

std::optional<Homomorphism> find_homomorphism(const Query& q, const ABox& a,
                                              const Labeling& l) {
    std::vector<LabelSet> extra(a.ind_count(), 0);
    for (size_t i = 0; i < l.inds.size(); ++i) extra[l.inds[i]] |= l.choice[i];
    return HomSearch(q, a).run(extra);
}

}  // namespace sirup
