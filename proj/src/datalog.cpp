#include "sirup/datalog.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace sirup {

namespace {

using Tuple = std::vector<int>;
using Facts = std::map<std::string, std::set<Tuple>>;

const std::set<Tuple>& find_or_empty(const Facts& f, const std::string& pred) {
    static const std::set<Tuple> kEmpty;
    auto it = f.find(pred);
    return it == f.end() ? kEmpty : it->second;
}

int max_var(const DatalogRule& r) {
    int m = -1;
    for (int v : r.head.args) m = std::max(m, v);
    for (const auto& a : r.body)
        for (int v : a.args) m = std::max(m, v);
    return m;
}

// Visit order for the body atoms: start from `first` (or the pre-bound
// variables), then keep picking an atom that shares a variable with what
// is already placed, so the join stays as selective as possible.
std::vector<int> body_order(const std::vector<DatalogAtom>& body, int first,
                            std::vector<char> bound) {
    std::vector<int> order;
    std::vector<char> placed(body.size(), 0);
    auto mark = [&](int i) {
        placed[i] = 1;
        order.push_back(i);
        for (int v : body[i].args) bound[v] = 1;
    };
    if (first >= 0) mark(first);
    while (order.size() < body.size()) {
        int pick = -1;
        for (int i = 0; i < static_cast<int>(body.size()) && pick < 0; ++i) {
            if (placed[i]) continue;
            for (int v : body[i].args)
                if (bound[v]) {
                    pick = i;
                    break;
                }
        }
        if (pick < 0)
            for (int i = 0; i < static_cast<int>(body.size()); ++i)
                if (!placed[i]) {
                    pick = i;
                    break;
                }
        mark(pick);
    }
    return order;
}

// Backtracking join over the body atoms in the given order. source maps
// a body position to its fact set; sink receives each complete variable
// assignment and returns true to stop the enumeration.
bool enumerate_matches(
    const std::vector<DatalogAtom>& body, const std::vector<int>& order,
    size_t k, std::vector<int>& assign,
    const std::function<const std::set<Tuple>*(int)>& source,
    const std::function<bool(const std::vector<int>&)>& sink) {
    if (k == order.size()) return sink(assign);
    const DatalogAtom& atom = body[order[k]];
    const std::set<Tuple>* facts = source(order[k]);
    for (const Tuple& t : *facts) {
        std::vector<int> bound_here;
        bool ok = true;
        for (size_t i = 0; i < atom.args.size() && ok; ++i) {
            int v = atom.args[i];
            if (assign[v] < 0) {
                assign[v] = t[i];
                bound_here.push_back(v);
            } else if (assign[v] != t[i]) {
                ok = false;
            }
        }
        if (ok && enumerate_matches(body, order, k + 1, assign, source, sink)) {
            for (int v : bound_here) assign[v] = -1;
            return true;
        }
        for (int v : bound_here) assign[v] = -1;
    }
    return false;
}

// Does the conjunction `from` map homomorphically into the fact set of
// the conjunction `to` (variables of `to` read as constants), extending
// the pinned partial map?
bool body_hom(const std::vector<DatalogAtom>& from,
              const std::vector<DatalogAtom>& to,
              const std::map<int, int>& pinned) {
    Facts target;
    for (const auto& a : to) target[a.pred].insert(a.args);
    int m = -1;
    for (const auto& a : from)
        for (int v : a.args) m = std::max(m, v);
    for (const auto& [v, c] : pinned) m = std::max(m, v);
    std::vector<int> assign(m + 1, -1);
    std::vector<char> bound(m + 1, 0);
    for (const auto& [v, c] : pinned) {
        assign[v] = c;
        bound[v] = 1;
    }
    std::vector<int> order = body_order(from, -1, bound);
    auto source = [&](int pos) { return &find_or_empty(target, from[pos].pred); };
    auto sink = [](const std::vector<int>&) { return true; };
    return enumerate_matches(from, order, 0, assign, source, sink);
}

bool rule_hom(const DatalogRule& from, const DatalogRule& to) {
    if (from.head.pred != to.head.pred) return false;
    if (from.head.args.size() != to.head.args.size()) return false;
    std::map<int, int> pinned;
    for (size_t i = 0; i < from.head.args.size(); ++i) {
        auto [it, fresh] = pinned.emplace(from.head.args[i], to.head.args[i]);
        if (!fresh && it->second != to.head.args[i]) return false;
    }
    return body_hom(from.body, to.body, pinned);
}

// Rule equivalence up to renaming: homomorphisms both ways with the head
// arguments frozen pointwise.
bool rules_equivalent(const DatalogRule& a, const DatalogRule& b) {
    return rule_hom(a, b) && rule_hom(b, a);
}

bool rule_safe(const DatalogRule& r) {
    std::set<int> body_vars;
    for (const auto& a : r.body) body_vars.insert(a.args.begin(), a.args.end());
    for (int v : r.head.args)
        if (!body_vars.count(v)) return false;
    return true;
}

const char* label_pred(uint8_t bit) {
    switch (bit) {
        case kF: return "F";
        case kT: return "T";
        default: return "A";
    }
}

// Appends the atoms of q to a rule body, node n rendered as variable
// node_var[n]; keep[n] selects which of n's labels survive.
void append_query_atoms(std::vector<DatalogAtom>& body, const Query& q,
                        const std::vector<int>& node_var,
                        const std::vector<LabelSet>& keep) {
    for (int n = 0; n < q.node_count(); ++n)
        for (uint8_t bit : {kF, kT, kA})
            if (has_label(keep[n], bit))
                body.push_back({label_pred(bit), {node_var[n]}});
    for (const auto& e : q.edges())
        body.push_back({q.role_name(e.role), {node_var[e.src], node_var[e.dst]}});
}

DatalogProgram swap_ft_atoms(const DatalogProgram& p) {
    auto swap_atom = [](DatalogAtom a) {
        if (a.pred == "F")
            a.pred = "T";
        else if (a.pred == "T")
            a.pred = "F";
        return a;
    };
    DatalogProgram out;
    for (const auto& r : p.rules()) {
        DatalogRule s;
        s.head = swap_atom(r.head);
        for (const auto& a : r.body) s.body.push_back(swap_atom(a));
        out.add_rule(std::move(s));
    }
    return out;
}

std::set<std::string> var_names(const Query& q) {
    std::set<std::string> names;
    for (int n = 0; n < q.node_count(); ++n) names.insert(q.var_name(n));
    return names;
}

}  // namespace

void DatalogProgram::add_rule(DatalogRule r) {
    std::map<std::string, int> arity = arity_;  // commit only on success
    auto check_atom = [&](const DatalogAtom& a, bool is_head) {
        if (a.pred.empty()) throw Error("datalog atom with an empty predicate");
        for (int v : a.args)
            if (v < 0) throw Error("datalog variable ids must be non-negative");
        if (a.pred == kGoal) {
            if (!is_head) throw Error("the goal may not occur in a rule body");
            if (!a.args.empty()) throw Error("the goal is nullary");
        }
        auto [it, fresh] = arity.emplace(a.pred, static_cast<int>(a.args.size()));
        if (!fresh && it->second != static_cast<int>(a.args.size()))
            throw Error("arity mismatch for predicate " + a.pred);
    };
    check_atom(r.head, true);
    for (const auto& a : r.body) check_atom(a, false);
    if (!rule_safe(r))
        throw Error("unsafe rule: every head variable must occur in the body");
    arity_ = std::move(arity);
    std::stable_sort(r.body.begin(), r.body.end());
    idb_.insert(r.head.pred);
    rules_.push_back(std::move(r));
    edb_.clear();
    for (const auto& rule : rules_)
        for (const auto& a : rule.body)
            if (!idb_.count(a.pred)) edb_.insert(a.pred);
}

int DatalogProgram::arity(const std::string& pred) const {
    auto it = arity_.find(pred);
    return it == arity_.end() ? -1 : it->second;
}

std::string serialize_program(const DatalogProgram& p,
                              const std::vector<std::string>& comments) {
    static const char* kNames[] = {"x", "y", "z", "u", "v", "w"};
    std::ostringstream out;
    for (const auto& c : comments) out << (c.empty() ? "%" : "% " + c) << "\n";
    for (const auto& r : p.rules()) {
        std::map<int, std::string> display;
        auto name_of = [&](int v) -> const std::string& {
            auto [it, fresh] = display.emplace(v, "");
            if (fresh) {
                size_t i = display.size() - 1;
                it->second = i < 6 ? kNames[i] : "x" + std::to_string(i + 1);
            }
            return it->second;
        };
        auto atom_str = [&](const DatalogAtom& a) {
            std::string s = a.pred;
            if (a.args.empty()) return s;
            s += "(";
            for (size_t i = 0; i < a.args.size(); ++i) {
                if (i) s += ",";
                s += name_of(a.args[i]);
            }
            s += ")";
            return s;
        };
        out << atom_str(r.head);
        if (!r.body.empty()) {
            out << " :- ";
            for (size_t i = 0; i < r.body.size(); ++i) {
                if (i) out << ", ";
                out << atom_str(r.body[i]);
            }
        }
        out << ".\n";
    }
    return out.str();
}

std::map<std::string, std::set<std::vector<int>>> saturate(
    const DatalogProgram& p, const ABox& a, bool seminaive) {
    Facts edb;
    for (int i = 0; i < a.ind_count(); ++i)
        for (uint8_t bit : {kF, kT, kA})
            if (has_label(a.unary(i), bit)) edb[label_pred(bit)].insert({i});
    for (const auto& e : a.edges())
        edb[a.role_name(e.role)].insert({e.src, e.dst});

    Facts full;
    auto derive = [&](const DatalogRule& r, const Facts* delta, int delta_pos,
                      Facts& sink_facts) {
        int m = max_var(r);
        std::vector<int> assign(m + 1, -1);
        std::vector<int> order =
            body_order(r.body, delta_pos, std::vector<char>(m + 1, 0));
        auto source = [&](int pos) -> const std::set<Tuple>* {
            const DatalogAtom& atom = r.body[pos];
            if (pos == delta_pos) return &find_or_empty(*delta, atom.pred);
            if (p.idb().count(atom.pred)) return &find_or_empty(full, atom.pred);
            return &find_or_empty(edb, atom.pred);
        };
        auto sink = [&](const std::vector<int>& asg) {
            Tuple h;
            h.reserve(r.head.args.size());
            for (int v : r.head.args) h.push_back(asg[v]);
            if (!find_or_empty(full, r.head.pred).count(h))
                sink_facts[r.head.pred].insert(std::move(h));
            return false;  // keep enumerating
        };
        enumerate_matches(r.body, order, 0, assign, source, sink);
    };
    auto idb_positions = [&](const DatalogRule& r) {
        std::vector<int> pos;
        for (int i = 0; i < static_cast<int>(r.body.size()); ++i)
            if (p.idb().count(r.body[i].pred)) pos.push_back(i);
        return pos;
    };
    auto merge = [&](Facts& fresh) {
        bool any = false;
        for (auto& [pred, tuples] : fresh)
            for (const auto& t : tuples) any |= full[pred].insert(t).second;
        return any;
    };

    if (seminaive) {
        // EDB-only rules fire once; after that every new fact must use at
        // least one fact from the previous wave, so each recursive rule is
        // joined with the delta plugged into each IDB position in turn.
        Facts delta;
        for (const auto& r : p.rules())
            if (idb_positions(r).empty()) derive(r, nullptr, -1, delta);
        merge(delta);
        while (!delta.empty()) {
            Facts next;
            for (const auto& r : p.rules())
                for (int pos : idb_positions(r)) derive(r, &delta, pos, next);
            merge(next);
            delta = std::move(next);
        }
    } else {
        // Naive reference evaluation: re-derive everything each round
        // until nothing new appears.
        for (bool changed = true; changed;) {
            Facts round;
            for (const auto& r : p.rules()) derive(r, nullptr, -1, round);
            changed = merge(round);
        }
    }
    return full;
}

bool evaluate(const DatalogProgram& p, const ABox& a) {
    auto facts = saturate(p, a, /*seminaive=*/true);
    return find_or_empty(facts, DatalogProgram::kGoal).count({}) > 0;
}

bool evaluate_naive(const DatalogProgram& p, const ABox& a) {
    auto facts = saturate(p, a, /*seminaive=*/false);
    return find_or_empty(facts, DatalogProgram::kGoal).count({}) > 0;
}

StructuralReport structural_check(const DatalogProgram& p) {
    StructuralReport rep;
    const auto& idb = p.idb();

    rep.linear = true;
    for (const auto& r : p.rules()) {
        int idb_atoms = 0;
        for (const auto& a : r.body) idb_atoms += idb.count(a.pred) ? 1 : 0;
        if (idb_atoms > 1) rep.linear = false;
    }

    // Finest stratification: strongly connected components of the
    // "head uses" graph over IDB predicates, each component one stratum
    // below everything that uses it.
    std::vector<std::string> preds(idb.begin(), idb.end());
    std::map<std::string, int> index;
    for (int i = 0; i < static_cast<int>(preds.size()); ++i) index[preds[i]] = i;
    int n = static_cast<int>(preds.size());
    std::vector<std::set<int>> uses(n);
    for (const auto& r : p.rules())
        for (const auto& a : r.body)
            if (idb.count(a.pred)) uses[index[r.head.pred]].insert(index[a.pred]);

    std::vector<int> comp(n, -1), low(n), num(n, -1), stack;
    int counter = 0, comps = 0;
    std::vector<char> on_stack(n, 0);
    std::function<void(int)> tarjan = [&](int v) {
        num[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
        for (int w : uses[v]) {
            if (num[w] < 0) {
                tarjan(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], num[w]);
            }
        }
        if (low[v] == num[v]) {
            while (true) {
                int w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                comp[w] = comps;
                if (w == v) break;
            }
            ++comps;
        }
    };
    for (int v = 0; v < n; ++v)
        if (num[v] < 0) tarjan(v);
    // Components come out in reverse topological order: everything a
    // component uses is numbered before it, so one pass assigns strata.
    std::vector<int> comp_stratum(comps, 0);
    for (int v = 0; v < n; ++v)
        for (int w : uses[v])
            if (comp[w] != comp[v])
                comp_stratum[comp[v]] =
                    std::max(comp_stratum[comp[v]], comp_stratum[comp[w]] + 1);
    std::map<std::string, int> strata;
    for (int v = 0; v < n; ++v) strata[preds[v]] = comp_stratum[comp[v]];
    rep.stratification = strata;

    rep.linear_stratified = true;
    for (const auto& r : p.rules()) {
        int s = strata[r.head.pred];
        int same = 0;
        for (const auto& a : r.body)
            if (idb.count(a.pred) && strata[a.pred] == s) ++same;
        if (same > 1) rep.linear_stratified = false;
    }

    // Symmetry: in a linear program, every recursive rule other than the
    // goal rules must have its head/IDB-atom swap present, where rules
    // are compared up to equivalence (the swap of a rule over a
    // symmetric join is typically a renaming, not a literal copy).
    rep.symmetric = rep.linear;
    if (rep.symmetric) {
        for (const auto& r : p.rules()) {
            if (r.head.pred == DatalogProgram::kGoal) continue;
            int pos = -1;
            for (int i = 0; i < static_cast<int>(r.body.size()); ++i)
                if (idb.count(r.body[i].pred)) pos = i;
            if (pos < 0) continue;
            DatalogRule counterpart;
            counterpart.head = r.body[pos];
            counterpart.body = r.body;
            counterpart.body.erase(counterpart.body.begin() + pos);
            counterpart.body.push_back(r.head);
            bool found = rule_safe(counterpart);
            if (found) {
                found = false;
                for (const auto& other : p.rules())
                    if (rules_equivalent(counterpart, other)) {
                        found = true;
                        break;
                    }
            }
            if (!found) {
                rep.symmetric = false;
                break;
            }
        }
    }
    return rep;
}

DatalogProgram build_pi_q(const Query& q, Ontology o) {
    if (is_total(o))
        throw DomainError(
            "the datalog construction is defined for the A-covering "
            "ontologies (sirup or ddsirup)");
    NodeKinds kinds = node_kinds(q);
    size_t nf = kinds.solitary_f.size(), nt = kinds.solitary_t.size();
    if (nf != 1 && nt == 1 && nf >= 1) {
        // Mirror profile: one solitary T, several solitary F. The program
        // for the F/T-swapped query answers the swapped query over swapped
        // data; swapping its F/T atoms back makes it read the original data.
        return swap_ft_atoms(build_pi_q(swap_ft(q), o));
    }
    if (nf != 1 || nt == 0)
        throw DomainError(
            "not a 1-CQ: need exactly one solitary F and at least one "
            "solitary T, or the mirror profile (got " +
            std::to_string(nf) + " solitary F, " + std::to_string(nt) +
            " solitary T)");

    int x = kinds.solitary_f[0];
    std::vector<int> node_var(q.node_count());
    for (int i = 0; i < q.node_count(); ++i) node_var[i] = i;
    std::vector<LabelSet> keep(q.node_count());
    for (int i = 0; i < q.node_count(); ++i) keep[i] = q.labels(i);
    keep[x] &= static_cast<LabelSet>(~kF);
    for (int y : kinds.solitary_t) keep[y] &= static_cast<LabelSet>(~kT);

    DatalogProgram prog;
    DatalogRule goal_rule;
    goal_rule.head = {DatalogProgram::kGoal, {}};
    goal_rule.body.push_back({"F", {x}});
    append_query_atoms(goal_rule.body, q, node_var, keep);
    for (int y : kinds.solitary_t) goal_rule.body.push_back({"P", {y}});
    prog.add_rule(std::move(goal_rule));

    prog.add_rule({{"P", {0}}, {{"T", {0}}}});

    DatalogRule step_rule;
    step_rule.head = {"P", {x}};
    step_rule.body.push_back({"A", {x}});
    append_query_atoms(step_rule.body, q, node_var, keep);
    for (int y : kinds.solitary_t) step_rule.body.push_back({"P", {y}});
    prog.add_rule(std::move(step_rule));

    if (is_disjoint(o))
        prog.add_rule({{DatalogProgram::kGoal, {}}, {{"F", {0}}, {"T", {0}}}});
    return prog;
}

bool is_symmetric_cq(const Query& qp, int x, int y) {
    if (x < 0 || x >= qp.node_count() || y < 0 || y >= qp.node_count())
        throw Error("answer nodes out of range");
    std::vector<int> ident(qp.node_count()), swapped(qp.node_count());
    std::vector<LabelSet> keep(qp.node_count());
    for (int i = 0; i < qp.node_count(); ++i) {
        ident[i] = i;
        swapped[i] = i == x ? y : i == y ? x : i;
        keep[i] = qp.labels(i);
    }
    std::vector<DatalogAtom> original, reversed;
    append_query_atoms(original, qp, ident, keep);
    append_query_atoms(reversed, qp, swapped, keep);
    std::map<int, int> frozen{{x, x}, {y, y}};
    return body_hom(reversed, original, frozen) &&
           body_hom(original, reversed, frozen);
}

DatalogProgram build_symmetric_program(const Query& q1, const Query& qp,
                                       const Query& q2,
                                       const std::string& x_name,
                                       const std::string& y_name, Ontology o) {
    if (is_total(o))
        throw DomainError(
            "the symmetric construction is defined for the A-covering "
            "ontologies (sirup or ddsirup)");
    if (x_name == y_name)
        throw DomainError("condition (c) violated: x and y must be distinct");
    if (qp.find_var(x_name) < 0 || qp.find_var(y_name) < 0)
        throw DomainError(
            "condition (c) violated: qp must contain both anchors " + x_name +
            " and " + y_name);
    if (q1.find_var(x_name) < 0)
        throw DomainError("condition (c) violated: q1 must contain " + x_name);
    if (q2.find_var(y_name) < 0)
        throw DomainError("condition (c) violated: q2 must contain " + y_name);

    auto check_no_solitary = [](const Query& comp, const char* which) {
        NodeKinds kinds = node_kinds(comp);
        if (!kinds.solitary_f.empty() || !kinds.solitary_t.empty())
            throw DomainError(std::string("condition (a) violated: ") + which +
                              " contains a solitary F or T");
    };
    check_no_solitary(q1, "q1");
    check_no_solitary(qp, "qp");
    check_no_solitary(q2, "q2");

    std::set<std::string> v1 = var_names(q1), vp = var_names(qp),
                          v2 = var_names(q2);
    auto intersect = [](const std::set<std::string>& a,
                        const std::set<std::string>& b) {
        std::set<std::string> out;
        for (const auto& s : a)
            if (b.count(s)) out.insert(s);
        return out;
    };
    if (!intersect(v1, v2).empty())
        throw DomainError("condition (c) violated: q1 and q2 share a variable");
    if (intersect(v1, vp) != std::set<std::string>{x_name})
        throw DomainError(
            "condition (c) violated: q1 and qp must share exactly " + x_name);
    if (intersect(v2, vp) != std::set<std::string>{y_name})
        throw DomainError(
            "condition (c) violated: q2 and qp must share exactly " + y_name);

    if (!is_symmetric_cq(qp, qp.find_var(x_name), qp.find_var(y_name)))
        throw DomainError("condition (b) violated: qp(x,y) is not symmetric");

    // Per-rule variable table. Component copies get their existential
    // variables keyed by a copy tag; anchor nodes are renamed onto the
    // shared rule variables.
    struct VarTable {
        std::map<std::string, int> ids;
        int var(const std::string& key) {
            auto [it, fresh] = ids.emplace(key, static_cast<int>(ids.size()));
            return it->second;
        }
    };
    auto add_component = [&](VarTable& vars, std::vector<DatalogAtom>& body,
                             const Query& comp, const std::string& tag,
                             const std::map<std::string, std::string>& anchor) {
        std::vector<int> node_var(comp.node_count());
        std::vector<LabelSet> keep(comp.node_count());
        for (int n = 0; n < comp.node_count(); ++n) {
            const std::string& name = comp.var_name(n);
            auto it = anchor.find(name);
            node_var[n] =
                vars.var(it != anchor.end() ? it->second : tag + "/" + name);
            keep[n] = comp.labels(n);
        }
        append_query_atoms(body, comp, node_var, keep);
    };

    DatalogProgram prog;
    const std::string ax = "@x", ay = "@y";

    {  // G <- q
        VarTable vars;
        DatalogRule r;
        r.head = {DatalogProgram::kGoal, {}};
        r.body.push_back({"F", {vars.var(ax)}});
        r.body.push_back({"T", {vars.var(ay)}});
        add_component(vars, r.body, q1, "q1", {{x_name, ax}});
        add_component(vars, r.body, qp, "qp", {{x_name, ax}, {y_name, ay}});
        add_component(vars, r.body, q2, "q2", {{y_name, ay}});
        prog.add_rule(std::move(r));
    }
    {  // G <- F(x), q1(x), qp(x,y), P(y)
        VarTable vars;
        DatalogRule r;
        r.head = {DatalogProgram::kGoal, {}};
        r.body.push_back({"F", {vars.var(ax)}});
        r.body.push_back({"P", {vars.var(ay)}});
        add_component(vars, r.body, q1, "q1", {{x_name, ax}});
        add_component(vars, r.body, qp, "qp", {{x_name, ax}, {y_name, ay}});
        prog.add_rule(std::move(r));
    }
    auto add_b = [&](VarTable& vars, std::vector<DatalogAtom>& body,
                     const std::string& at, const std::string& tag) {
        body.push_back({"A", {vars.var(at)}});
        add_component(vars, body, q1, tag + "1", {{x_name, at}});
        add_component(vars, body, q2, tag + "2", {{y_name, at}});
    };
    {  // P(x) <- B(x), qp(x,y), q2(y), T(y)
        VarTable vars;
        DatalogRule r;
        r.head = {"P", {vars.var(ax)}};
        r.body.push_back({"T", {vars.var(ay)}});
        add_b(vars, r.body, ax, "bx");
        add_component(vars, r.body, qp, "qp", {{x_name, ax}, {y_name, ay}});
        add_component(vars, r.body, q2, "q2", {{y_name, ay}});
        prog.add_rule(std::move(r));
    }
    {  // P(x) <- B(x), qp(x,y), P(y), B(y)
        VarTable vars;
        DatalogRule r;
        r.head = {"P", {vars.var(ax)}};
        r.body.push_back({"P", {vars.var(ay)}});
        add_b(vars, r.body, ax, "bx");
        add_component(vars, r.body, qp, "qp", {{x_name, ax}, {y_name, ay}});
        add_b(vars, r.body, ay, "by");
        prog.add_rule(std::move(r));
    }
    if (is_disjoint(o))
        prog.add_rule({{DatalogProgram::kGoal, {}}, {{"F", {0}}, {"T", {0}}}});
    return prog;
}

}  // namespace sirup
