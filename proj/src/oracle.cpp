#include "sirup/oracle.hpp"

#include <algorithm>
#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sirup {

namespace {

std::string atom_key(const char* pred, const std::string& ind) {
    return std::string(pred) + "(" + ind + ")";
}

// Enumerates every assignment of the query variables whose binary atoms
// all land on ABox edges, invoking emit on each. Order is the same
// BFS-with-anchors plan the homomorphism search uses, minus label checks.
class GroundJoin {
public:
    GroundJoin(const Query& q, const ABox& a) : q_(q), a_(a) {
        role_map_.resize(q.role_count());
        for (int r = 0; r < q.role_count(); ++r)
            role_map_[r] = a.find_role(q.role_name(r));
        for (const auto& e : q.edges())
            if (role_map_[e.role] == -1) impossible_ = true;

        int n = q.node_count();
        incident_.resize(n);
        for (size_t i = 0; i < q.edges().size(); ++i) {
            const auto& e = q.edges()[i];
            incident_[e.src].push_back(static_cast<int>(i));
            if (e.dst != e.src) incident_[e.dst].push_back(static_cast<int>(i));
        }
        step_of_.assign(n, -1);
        anchor_edge_.assign(n, -1);
        via_from_.assign(n, -1);
        size_t scan = 0;
        while (static_cast<int>(order_.size()) < n) {
            int seed = 0;
            while (step_of_[seed] != -1) ++seed;
            step_of_[seed] = static_cast<int>(order_.size());
            order_.push_back(seed);
            while (scan < order_.size()) {
                int u = order_[scan++];
                for (int ei : incident_[u]) {
                    const auto& e = q_.edges()[ei];
                    int w = e.src == u ? e.dst : e.src;
                    if (w == u || step_of_[w] != -1) continue;
                    step_of_[w] = static_cast<int>(order_.size());
                    anchor_edge_[w] = ei;
                    via_from_[w] = u;
                    order_.push_back(w);
                }
            }
        }

        int roles = std::max(1, a.role_count());
        out_adj_.assign(static_cast<size_t>(a.ind_count()) * roles, {});
        in_adj_.assign(static_cast<size_t>(a.ind_count()) * roles, {});
        for (const auto& e : a.edges()) {
            out_adj_[static_cast<size_t>(e.src) * roles + e.role].push_back(e.dst);
            in_adj_[static_cast<size_t>(e.dst) * roles + e.role].push_back(e.src);
        }
        for (auto& v : out_adj_) std::sort(v.begin(), v.end());
        for (auto& v : in_adj_) std::sort(v.begin(), v.end());
        roles_ = roles;
    }

    template <class Emit>
    void enumerate(Emit emit) {
        if (impossible_ || q_.node_count() == 0 || a_.ind_count() == 0) return;
        std::vector<int> assign(q_.node_count(), -1);
        recurse(0, assign, emit);
    }

private:
    template <class Emit>
    void recurse(int depth, std::vector<int>& assign, Emit& emit) {
        if (depth == q_.node_count()) {
            emit(assign);
            return;
        }
        int v = order_[depth];
        if (anchor_edge_[v] == -1) {
            for (int c = 0; c < a_.ind_count(); ++c)
                try_candidate(depth, v, c, assign, emit);
            return;
        }
        const auto& e = q_.edges()[anchor_edge_[v]];
        int u = via_from_[v];
        size_t key =
            static_cast<size_t>(assign[u]) * roles_ + role_map_[e.role];
        const auto& cands = e.src == u ? out_adj_[key] : in_adj_[key];
        for (int c : cands) try_candidate(depth, v, c, assign, emit);
    }

    template <class Emit>
    void try_candidate(int depth, int v, int c, std::vector<int>& assign,
                       Emit& emit) {
        for (int ei : incident_[v]) {
            if (ei == anchor_edge_[v]) continue;
            const auto& e = q_.edges()[ei];
            int other = e.src == v ? e.dst : e.src;
            if (step_of_[other] > depth) continue;
            int o = other == v ? c : assign[other];
            int from = e.dst == v ? o : c;
            int to = e.dst == v ? c : o;
            const auto& lst =
                out_adj_[static_cast<size_t>(from) * roles_ + role_map_[e.role]];
            if (!std::binary_search(lst.begin(), lst.end(), to)) return;
        }
        assign[v] = c;
        recurse(depth + 1, assign, emit);
        assign[v] = -1;
    }

    const Query& q_;
    const ABox& a_;
    std::vector<int> role_map_;
    std::vector<std::vector<int>> incident_;
    std::vector<int> step_of_, anchor_edge_, via_from_, order_;
    std::vector<std::vector<int>> out_adj_, in_adj_;
    size_t roles_ = 1;
    bool impossible_ = false;
};

Labeling labeling_from_mask(const std::vector<int>& undec, uint64_t mask) {
    Labeling l;
    l.inds = undec;
    l.choice.resize(undec.size());
    for (size_t i = 0; i < undec.size(); ++i)
        l.choice[i] = (mask >> i) & 1 ? kT : kF;
    return l;
}

void apply_mask(std::vector<LabelSet>& extra, const std::vector<int>& undec,
                uint64_t mask) {
    for (size_t i = 0; i < undec.size(); ++i)
        extra[undec[i]] = (mask >> i) & 1 ? kT : kF;
}

// Greedily flips T choices back to F while the model still embeds no query
// image, purely to keep reported counter-models small and readable.
uint64_t minimize_counter_mask(const HomSearch& hs,
                               std::vector<LabelSet>& extra,
                               const std::vector<int>& undec, uint64_t mask) {
    for (size_t i = 0; i < undec.size(); ++i) {
        if (!((mask >> i) & 1)) continue;
        uint64_t flipped = mask & ~(uint64_t(1) << i);
        apply_mask(extra, undec, flipped);
        if (!hs.run(extra)) mask = flipped;
    }
    apply_mask(extra, undec, mask);
    return mask;
}

}  // namespace

CertainAnswerReport certain_answer_enum(Ontology o, const Query& q,
                                        const ABox& a,
                                        const OracleBudget& budget, int jobs) {
    using Method = CertainAnswerReport::Method;
    if (is_disjoint(o) && a.has_twin())
        return {true, Method::Enumeration, std::nullopt};

    std::vector<int> undec = undecided_individuals(a, o);
    if (undec.size() >= 63 ||
        (uint64_t(1) << undec.size()) > budget.enum_cap)
        throw BudgetError("model enumeration over " +
                          std::to_string(undec.size()) +
                          " undecided individuals exceeds the configured cap");
    const uint64_t total = uint64_t(1) << undec.size();

    HomSearch hs(q, a);
    uint64_t counter = total;  // first labeling without a query image

#ifdef _OPENMP
    bool parallel = jobs != 1;
#else
    bool parallel = false;
#endif

    if (!parallel) {
        std::vector<LabelSet> extra(a.ind_count(), 0);
        for (uint64_t mask = 0; mask < total; ++mask) {
            apply_mask(extra, undec, mask);
            if (!hs.run(extra)) {
                counter = minimize_counter_mask(hs, extra, undec, mask);
                break;
            }
        }
        if (counter == total) return {true, Method::Enumeration, std::nullopt};
        return {false, Method::Enumeration,
                labeling_from_mask(undec, counter)};
    }

#ifdef _OPENMP
    std::atomic<uint64_t> best(total);
    int threads = jobs > 1 ? jobs : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
    {
        std::vector<LabelSet> extra(a.ind_count(), 0);
#pragma omp for schedule(dynamic, 64)
        for (int64_t mask = 0; mask < static_cast<int64_t>(total); ++mask) {
            uint64_t m = static_cast<uint64_t>(mask);
            if (m >= best.load(std::memory_order_relaxed)) continue;
            apply_mask(extra, undec, m);
            if (!hs.run(extra)) {
                uint64_t cur = best.load(std::memory_order_relaxed);
                while (m < cur && !best.compare_exchange_weak(
                                      cur, m, std::memory_order_relaxed)) {
                }
            }
        }
    }
    counter = best.load();
    if (counter == total) return {true, Method::Enumeration, std::nullopt};
    std::vector<LabelSet> extra(a.ind_count(), 0);
    apply_mask(extra, undec, counter);
    counter = minimize_counter_mask(hs, extra, undec, counter);
    return {false, Method::Enumeration, labeling_from_mask(undec, counter)};
#else
    return {true, Method::Enumeration, std::nullopt};  // unreachable
#endif
}

CNF ground_to_cnf(Ontology o, const Query& q, const ABox& a,
                  const OracleBudget& budget) {
    CNF cnf;
    // Covering (and disjointness) clauses, then fact units, then the
    // per-assignment query clauses; variable numbering follows this order.
    for (int c = 0; c < a.ind_count(); ++c) {
        const std::string& name = a.ind_name(c);
        int f = cnf.var(atom_key("F", name));
        int t = cnf.var(atom_key("T", name));
        if (is_total(o)) {
            cnf.add_clause({f, t});
        } else {
            int av = cnf.var(atom_key("A", name));
            cnf.add_clause({-av, f, t});
        }
        if (is_disjoint(o)) cnf.add_clause({-f, -t});
    }
    for (int c = 0; c < a.ind_count(); ++c) {
        LabelSet l = a.unary(c);
        const std::string& name = a.ind_name(c);
        if (has_label(l, kF)) cnf.add_clause({cnf.var(atom_key("F", name))});
        if (has_label(l, kT)) cnf.add_clause({cnf.var(atom_key("T", name))});
        if (has_label(l, kA))
            cnf.add_clause({cnf.var(atom_key("A", name))});
    }

    uint64_t emitted = 0;
    GroundJoin join(q, a);
    join.enumerate([&](const std::vector<int>& assign) {
        if (++emitted > budget.clause_cap)
            throw BudgetError("grounding exceeds the configured clause cap");
        std::vector<int> clause;
        for (int v = 0; v < q.node_count(); ++v) {
            LabelSet l = q.labels(v);
            const std::string& name = a.ind_name(assign[v]);
            if (has_label(l, kF))
                clause.push_back(-cnf.var(atom_key("F", name)));
            if (has_label(l, kT))
                clause.push_back(-cnf.var(atom_key("T", name)));
            if (has_label(l, kA))
                clause.push_back(-cnf.var(atom_key("A", name)));
        }
        cnf.add_clause(std::move(clause));
    });
    return cnf;
}

CertainAnswerReport certain_answer_sat(Ontology o, const Query& q,
                                       const ABox& a,
                                       const OracleBudget& budget) {
    using Method = CertainAnswerReport::Method;
    CNF cnf = ground_to_cnf(o, q, a, budget);
    auto assignment = dpll_solve(cnf);
    if (!assignment) return {true, Method::Grounding, std::nullopt};

    Labeling witness;
    witness.inds = undecided_individuals(a, o);
    witness.choice.resize(witness.inds.size());
    for (size_t i = 0; i < witness.inds.size(); ++i) {
        int t = cnf.find_var(atom_key("T", a.ind_name(witness.inds[i])));
        witness.choice[i] = (t != 0 && (*assignment)[t]) ? kT : kF;
    }
    return {false, Method::Grounding, std::move(witness)};
}

CertainAnswerReport certain_answer(Ontology o, const Query& q, const ABox& a,
                                   const std::string& method,
                                   const OracleBudget& budget, int jobs) {
    if (method == "enum") return certain_answer_enum(o, q, a, budget, jobs);
    if (method == "sat") return certain_answer_sat(o, q, a, budget);
    throw DomainError("unknown oracle method '" + method +
                      "' (expected enum or sat)");
}

}  // namespace sirup
