#include "sirup/classify.hpp"

#include <algorithm>
#include <cstdlib>

namespace sirup {

namespace {

bool is_prefix(const std::vector<std::string>& word,
               const std::vector<std::string>& of) {
    return word.size() <= of.size() &&
           std::equal(word.begin(), word.end(), of.begin());
}

bool is_suffix(const std::vector<std::string>& word,
               const std::vector<std::string>& of) {
    return word.size() <= of.size() &&
           std::equal(word.rbegin(), word.rend(), of.rbegin());
}

// word ∈ period* · prefixes(period)? Strip whole copies from the front;
// whatever remains must be a (possibly empty) prefix of the period.
bool is_period_power_then_prefix(std::vector<std::string> word,
                                 const std::vector<std::string>& period) {
    while (word.size() >= period.size() && is_prefix(period, word))
        word.erase(word.begin(), word.begin() + period.size());
    return is_prefix(word, period);
}

// word ∈ suffixes(period) · period*? The mirror image: strip from the back.
bool is_suffix_then_period_power(std::vector<std::string> word,
                                 const std::vector<std::string>& period) {
    while (word.size() >= period.size() && is_suffix(period, word))
        word.erase(word.end() - period.size(), word.end());
    return is_suffix(word, period);
}

}  // namespace

int PathProfile::delta(int a, int b) const {
    return std::abs(position[a] - position[b]);
}

const std::vector<std::string>& PathProfile::interval(int i) const {
    if (!lr) throw DomainError("profile has no (l, r) decomposition");
    return intervals.at(static_cast<size_t>(i + lr->first));
}

PathProfile analyze_path(const Query& q) {
    if (!q.is_path())
        throw DomainError("query is not a path: " + serialize_query(q));

    PathProfile p;
    const auto& order = q.path_nodes();
    p.position.assign(q.node_count(), 0);
    for (int i = 0; i < static_cast<int>(order.size()); ++i)
        p.position[order[i]] = i;

    NodeKinds kinds = node_kinds(q);  // path order for path queries
    p.solitary_f = kinds.solitary_f;
    p.solitary_t = kinds.solitary_t;
    p.twins = kinds.twins;
    if (!p.twins.empty()) return p;

    // Orient so the unique solitary node is an F; a single solitary T
    // with F nodes around it is the mirrored case.
    const std::vector<int>* fs = &p.solitary_f;
    const std::vector<int>* ts = &p.solitary_t;
    if (fs->size() == 1 && !ts->empty()) {
        p.mirrored = false;
    } else if (ts->size() == 1 && !fs->empty()) {
        p.mirrored = true;
        std::swap(fs, ts);
    } else {
        return p;  // 0-CQ or 2-CQ: no (l, r) decomposition
    }

    int x0 = p.position[(*fs)[0]];
    int l = 0, r = 0;
    std::vector<int> cuts{0};  // positions bounding the intervals
    for (int t : *ts)
        if (p.position[t] < x0) {
            ++l;
            cuts.push_back(p.position[t]);
        }
    cuts.push_back(x0);
    for (int t : *ts)
        if (p.position[t] > x0) {
            ++r;
            cuts.push_back(p.position[t]);
        }
    cuts.push_back(q.edge_count());
    p.lr = {l, r};

    const auto& roles = q.path_roles();
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
        std::vector<std::string> seq;
        for (int e = cuts[k]; e < cuts[k + 1]; ++e)
            seq.push_back(q.role_name(roles[e]));
        p.intervals.push_back(std::move(seq));
    }
    return p;
}

Periodicity periodicity(const PathProfile& p) {
    if (!p.lr) return Periodicity::NotOneCQ;
    auto [l, r] = *p.lr;
    if (l == 0) {  // all T nodes follow x_0
        if (r == 1) return Periodicity::RightPeriodic;
        const auto& period = p.interval(1);
        for (int i = 2; i <= r; ++i)
            if (p.interval(i) != period) return Periodicity::Aperiodic;
        return is_period_power_then_prefix(p.interval(r + 1), period)
                   ? Periodicity::RightPeriodic
                   : Periodicity::Aperiodic;
    }
    if (r == 0) {  // all T nodes precede x_0
        if (l == 1) return Periodicity::LeftPeriodic;
        const auto& period = p.interval(0);
        for (int i = 1; i <= l - 1; ++i)
            if (p.interval(-i) != period) return Periodicity::Aperiodic;
        return is_suffix_then_period_power(p.interval(-l), period)
                   ? Periodicity::LeftPeriodic
                   : Periodicity::Aperiodic;
    }
    return Periodicity::Aperiodic;  // T nodes on both sides of x_0
}

Query twin_query() {
    Query q;
    int x = q.var("x");
    q.add_label(x, kF);
    q.add_label(x, kT);
    q.finalize();
    return q;
}

Verdict tetrachotomy(const Query& q, Ontology o) {
    if (is_total(o))
        throw DomainError(
            std::string("classification assumes the A-covering axiom; '") +
            ontology_name(o) + "' is a total covering variant");

    PathProfile p = analyze_path(q);
    Verdict v;

    if (!p.twins.empty()) {
        if (is_disjoint(o)) {
            // A twin in q forces a twin in any model, and the disjoint
            // variants admit twins only in inconsistent data: the twin
            // check alone decides the answer.
            v.cls = ComplexityClass::AC0;
            v.reason = Reason::HasTwin;
            v.fo_rewriting = {twin_query()};
            return v;
        }
        if (cq_arity(q) != CqArity::Zero)
            throw DomainError(
                "no classification is known for twin-containing non-0-CQs "
                "under plain covering (open problem); use the disjointness "
                "variant");
        // fall through: the 0-CQ rewriting works with twins
    }

    switch (cq_arity(q)) {
        case CqArity::Zero:
            v.cls = ComplexityClass::AC0;
            v.reason = Reason::ZeroCQ;
            // q itself is the rewriting; the disjoint variants also answer
            // yes on any twin-containing (inconsistent) ABox, so they get
            // the twin check as an extra disjunct.
            v.fo_rewriting = {q};
            if (is_disjoint(o)) v.fo_rewriting.push_back(twin_query());
            return v;
        case CqArity::Two:
            v.cls = ComplexityClass::CONP;
            v.reason = Reason::TwoCQ;
            return v;
        case CqArity::One:
            break;
    }

    v.mirrored = p.mirrored;
    switch (periodicity(p)) {
        case Periodicity::LeftPeriodic:
            v.cls = ComplexityClass::NL;
            v.reason = Reason::PeriodicOneCQLeft;
            return v;
        case Periodicity::RightPeriodic:
            v.cls = ComplexityClass::NL;
            v.reason = Reason::PeriodicOneCQRight;
            return v;
        case Periodicity::Aperiodic:
            v.cls = ComplexityClass::P;
            v.reason = Reason::AperiodicOneCQ;
            v.program = build_pi_q(q, o);
            return v;
        case Periodicity::NotOneCQ:
            break;
    }
    throw DomainError("internal: 1-CQ without (l, r) decomposition");
}

std::string class_name(ComplexityClass c) {
    switch (c) {
        case ComplexityClass::AC0: return "AC0";
        case ComplexityClass::NL: return "NL";
        case ComplexityClass::P: return "P";
        case ComplexityClass::CONP: return "coNP";
    }
    return "?";
}

std::string reason_name(Reason r) {
    switch (r) {
        case Reason::HasTwin: return "HasTwin";
        case Reason::ZeroCQ: return "ZeroCQ";
        case Reason::PeriodicOneCQLeft: return "PeriodicOneCQ(Left)";
        case Reason::PeriodicOneCQRight: return "PeriodicOneCQ(Right)";
        case Reason::AperiodicOneCQ: return "AperiodicOneCQ";
        case Reason::TwoCQ: return "TwoCQ";
    }
    return "?";
}

std::string verdict_text(const Verdict& v) {
    std::string s = class_name(v.cls) + " (";
    switch (v.reason) {
        case Reason::HasTwin: s += "twin"; break;
        case Reason::ZeroCQ: s += "0-CQ"; break;
        case Reason::PeriodicOneCQLeft: s += "periodic 1-CQ, left"; break;
        case Reason::PeriodicOneCQRight: s += "periodic 1-CQ, right"; break;
        case Reason::AperiodicOneCQ: s += "aperiodic 1-CQ"; break;
        case Reason::TwoCQ: s += "2-CQ"; break;
    }
    if (v.mirrored) s += ", mirrored";
    return s + ")";
}

}  // namespace sirup
