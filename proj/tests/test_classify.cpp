#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sirup/abox.hpp"
#include "sirup/classify.hpp"
#include "sirup/datalog.hpp"
#include "sirup/hom.hpp"
#include "sirup/oracle.hpp"
#include "sirup/query.hpp"
#include "sirup/random_gen.hpp"

using namespace sirup;

namespace {

// The introductory examples: q1 is coNP-complete, q2 P-complete,
// q3 NL-complete, q5 FO-rewritable thanks to its twin.
const char* kQ1 = "[F] -R-> [T] -R-> [F] -R-> [T]";
const char* kQ2 = "[T] -S-> [T] -R-> [F]";
const char* kQ3 = "[T] -R-> [T] -R-> [F]";
const char* kQ5 = "[T] -R-> [ ] -R-> [F,T]";

const std::vector<std::string> kEmpty;

bool ucq_maps(const std::vector<Query>& disjuncts, const ABox& a) {
    for (const Query& d : disjuncts)
        if (find_homomorphism(d, a)) return true;
    return false;
}

}  // namespace

TEST_CASE("profile of a two-left-T query") {
    Query q = parse_query(kQ3);
    PathProfile p = analyze_path(q);

    REQUIRE(p.solitary_t.size() == 2);
    REQUIRE(p.solitary_f.size() == 1);
    CHECK(p.twins.empty());
    CHECK_FALSE(p.mirrored);

    REQUIRE(p.lr.has_value());
    CHECK(p.lr->first == 2);
    CHECK(p.lr->second == 0);
    REQUIRE(p.intervals.size() == 4);  // r_{-2} .. r_1
    CHECK(p.interval(-2) == kEmpty);
    CHECK(p.interval(-1) == std::vector<std::string>{"R"});
    CHECK(p.interval(0) == std::vector<std::string>{"R"});
    CHECK(p.interval(1) == kEmpty);

    // Interval concatenation covers the whole role sequence.
    size_t total = 0;
    for (const auto& seq : p.intervals) total += seq.size();
    CHECK(static_cast<int>(total) == q.edge_count());

    // delta is the edge distance along the path.
    int b = q.path_nodes().front(), e = q.path_nodes().back();
    CHECK(p.delta(b, e) == q.size());
    CHECK(p.delta(e, b) == q.size());
    CHECK(p.delta(p.solitary_t[0], p.solitary_t[1]) == 1);
    CHECK(p.delta(b, b) == 0);
}

TEST_CASE("profile of twin and degenerate queries") {
    SECTION("a twin suppresses the decomposition") {
        Query q5 = parse_query(kQ5);
        PathProfile p = analyze_path(q5);
        REQUIRE(p.twins.size() == 1);
        CHECK(p.twins[0] == q5.path_nodes().back());
        CHECK(p.solitary_f.empty());
        CHECK(p.solitary_t.size() == 1);
        CHECK_FALSE(p.lr.has_value());
        CHECK(p.intervals.empty());
    }
    SECTION("a single labelled node") {
        Query q = parse_query("T(x).");
        PathProfile p = analyze_path(q);
        CHECK(p.solitary_t.size() == 1);
        CHECK(p.solitary_f.empty());
        CHECK_FALSE(p.lr.has_value());  // 0-CQ
        CHECK(q.edge_count() == 0);
    }
    SECTION("a lone F is a 0-CQ as well") {
        Query q = parse_query("[F] -R-> [ ]");
        PathProfile p = analyze_path(q);
        CHECK(p.solitary_f.size() == 1);
        CHECK_FALSE(p.lr.has_value());
        CHECK_FALSE(p.mirrored);
    }
    SECTION("two solitary nodes of each kind") {
        Query q1 = parse_query(kQ1);
        PathProfile p = analyze_path(q1);
        CHECK(p.solitary_f.size() == 2);
        CHECK(p.solitary_t.size() == 2);
        CHECK_FALSE(p.lr.has_value());
    }
    SECTION("interval access without a decomposition throws") {
        PathProfile p = analyze_path(parse_query(kQ1));
        CHECK_THROWS_AS(p.interval(0), DomainError);
    }
    SECTION("non-path queries are rejected") {
        Query q = parse_query("F(x). R(x,y). R(x,z). T(y). T(z).");
        CHECK_THROWS_AS(analyze_path(q), DomainError);
    }
}

TEST_CASE("profile of a single-T query is mirrored") {
    // F - R - F - R - T: the unique solitary node is a T, so the analysis
    // runs on the swapped query T - R - T - R - F.
    Query q = parse_query("[F] -R-> [F] -R-> [T]");
    PathProfile p = analyze_path(q);
    CHECK(p.solitary_f.size() == 2);
    CHECK(p.solitary_t.size() == 1);
    CHECK(p.mirrored);
    REQUIRE(p.lr.has_value());
    CHECK(p.lr->first == 2);
    CHECK(p.lr->second == 0);
    CHECK(p.interval(0) == std::vector<std::string>{"R"});
    CHECK(periodicity(p) == Periodicity::LeftPeriodic);
}

TEST_CASE("periodicity of the worked examples") {
    CHECK(periodicity(analyze_path(parse_query(kQ3))) ==
          Periodicity::LeftPeriodic);
    CHECK(periodicity(analyze_path(parse_query(kQ2))) ==
          Periodicity::Aperiodic);
    CHECK(periodicity(analyze_path(parse_query("[F] -R-> [T]"))) ==
          Periodicity::RightPeriodic);
    CHECK(periodicity(analyze_path(parse_query(kQ1))) ==
          Periodicity::NotOneCQ);
    CHECK(periodicity(analyze_path(parse_query(kQ5))) ==
          Periodicity::NotOneCQ);
}

TEST_CASE("periodicity boundary words") {
    SECTION("single T after the F is unconditionally periodic") {
        // r = 1 requires nothing of the tail.
        Query q = parse_query("[F] -S-> [T] -R-> [ ] -R-> [ ]");
        CHECK(periodicity(analyze_path(q)) == Periodicity::RightPeriodic);
    }
    SECTION("single T before the F is unconditionally periodic") {
        Query q = parse_query("[ ] -R-> [ ] -S-> [T] -U-> [F]");
        CHECK(periodicity(analyze_path(q)) == Periodicity::LeftPeriodic);
    }
    SECTION("tail may be a proper prefix of the period") {
        // period RS, tail R.
        Query q =
            parse_query("[F] -R-> [ ] -S-> [T] -R-> [ ] -S-> [T] -R-> [ ]");
        CHECK(periodicity(analyze_path(q)) == Periodicity::RightPeriodic);
    }
    SECTION("tail may repeat the period several times") {
        Query q = parse_query("[F] -R-> [T] -R-> [T] -R-> [ ] -R-> [ ]");
        CHECK(periodicity(analyze_path(q)) == Periodicity::RightPeriodic);
    }
    SECTION("a tail that is no prefix breaks periodicity") {
        Query q =
            parse_query("[F] -R-> [ ] -S-> [T] -R-> [ ] -S-> [T] -S-> [ ]");
        CHECK(periodicity(analyze_path(q)) == Periodicity::Aperiodic);
    }
    SECTION("unequal interior intervals break periodicity") {
        Query q = parse_query("[F] -R-> [T] -S-> [T]");
        CHECK(periodicity(analyze_path(q)) == Periodicity::Aperiodic);
    }
    SECTION("head may be a proper suffix of the period") {
        // period RS read towards the F, head S.
        Query q =
            parse_query("[ ] -S-> [T] -R-> [ ] -S-> [T] -R-> [ ] -S-> [F]");
        CHECK(periodicity(analyze_path(q)) == Periodicity::LeftPeriodic);
    }
    SECTION("a head that is no suffix breaks periodicity") {
        Query q =
            parse_query("[ ] -R-> [T] -R-> [ ] -S-> [T] -R-> [ ] -S-> [F]");
        CHECK(periodicity(analyze_path(q)) == Periodicity::Aperiodic);
    }
    SECTION("T nodes on both sides of the F are aperiodic") {
        Query q = parse_query("[T] -R-> [F] -R-> [T]");
        CHECK(periodicity(analyze_path(q)) == Periodicity::Aperiodic);
    }
}

TEST_CASE("tetrachotomy of the worked examples") {
    SECTION("two of each kind is coNP") {
        Verdict v = tetrachotomy(parse_query(kQ1), Ontology::CovABot);
        CHECK(v.cls == ComplexityClass::CONP);
        CHECK(v.reason == Reason::TwoCQ);
        CHECK(v.fo_rewriting.empty());
        CHECK_FALSE(v.program.has_value());
        CHECK(verdict_text(v) == "coNP (2-CQ)");
    }
    SECTION("aperiodic is P and carries the datalog rewriting") {
        Query q2 = parse_query(kQ2);
        for (Ontology o : {Ontology::CovA, Ontology::CovABot}) {
            Verdict v = tetrachotomy(q2, o);
            CHECK(v.cls == ComplexityClass::P);
            CHECK(v.reason == Reason::AperiodicOneCQ);
            REQUIRE(v.program.has_value());
            CHECK(serialize_program(*v.program) ==
                  serialize_program(build_pi_q(q2, o)));
            CHECK(verdict_text(v) == "P (aperiodic 1-CQ)");
        }
    }
    SECTION("periodic is NL") {
        Verdict v = tetrachotomy(parse_query(kQ3), Ontology::CovA);
        CHECK(v.cls == ComplexityClass::NL);
        CHECK(v.reason == Reason::PeriodicOneCQLeft);
        CHECK_FALSE(v.mirrored);
        CHECK_FALSE(v.program.has_value());
        CHECK(verdict_text(v) == "NL (periodic 1-CQ, left)");

        Verdict w = tetrachotomy(parse_query("[F] -R-> [T]"), Ontology::CovABot);
        CHECK(w.cls == ComplexityClass::NL);
        CHECK(w.reason == Reason::PeriodicOneCQRight);
        CHECK(verdict_text(w) == "NL (periodic 1-CQ, right)");
    }
    SECTION("a twin under the disjoint variant is FO-rewritable") {
        Verdict v = tetrachotomy(parse_query(kQ5), Ontology::CovABot);
        CHECK(v.cls == ComplexityClass::AC0);
        CHECK(v.reason == Reason::HasTwin);
        REQUIRE(v.fo_rewriting.size() == 1);
        CHECK(v.fo_rewriting[0].node_count() == 1);
        CHECK(v.fo_rewriting[0].labels(0) == (kF | kT));
        CHECK(verdict_text(v) == "AC0 (twin)");
    }
    SECTION("q5 is a 0-CQ, so plain covering classifies it too") {
        Verdict v = tetrachotomy(parse_query(kQ5), Ontology::CovA);
        CHECK(v.cls == ComplexityClass::AC0);
        CHECK(v.reason == Reason::ZeroCQ);
        REQUIRE(v.fo_rewriting.size() == 1);
        CHECK(serialize_query(v.fo_rewriting[0]) ==
              serialize_query(parse_query(kQ5)));
    }
    SECTION("0-CQ rewriting is the query itself") {
        Query q = parse_query("[T] -R-> [T]");
        Verdict plain = tetrachotomy(q, Ontology::CovA);
        CHECK(plain.cls == ComplexityClass::AC0);
        CHECK(plain.reason == Reason::ZeroCQ);
        REQUIRE(plain.fo_rewriting.size() == 1);
        CHECK(verdict_text(plain) == "AC0 (0-CQ)");

        // The disjoint variant answers yes on twin-containing data no
        // matter what, so its rewriting gets the twin disjunct.
        Verdict dd = tetrachotomy(q, Ontology::CovABot);
        REQUIRE(dd.fo_rewriting.size() == 2);
        CHECK(dd.fo_rewriting[1].node_count() == 1);
        CHECK(dd.fo_rewriting[1].labels(0) == (kF | kT));
    }
    SECTION("two T and two F without twins is coNP for plain covering") {
        Query q = parse_query("[T] -R-> [T] -R-> [F] -R-> [F]");
        Verdict v = tetrachotomy(q, Ontology::CovA);
        CHECK(v.cls == ComplexityClass::CONP);
        CHECK(v.reason == Reason::TwoCQ);
    }
}

TEST_CASE("tetrachotomy of mirrored queries") {
    SECTION("a periodic single-T query") {
        Verdict v = tetrachotomy(parse_query("[F] -R-> [F] -R-> [T]"),
                                 Ontology::CovA);
        CHECK(v.cls == ComplexityClass::NL);
        CHECK(v.reason == Reason::PeriodicOneCQLeft);
        CHECK(v.mirrored);
        CHECK(verdict_text(v) == "NL (periodic 1-CQ, left, mirrored)");
    }
    SECTION("an aperiodic single-T query") {
        Query q = parse_query("[F] -S-> [F] -R-> [T]");
        Verdict v = tetrachotomy(q, Ontology::CovABot);
        CHECK(v.cls == ComplexityClass::P);
        CHECK(v.reason == Reason::AperiodicOneCQ);
        CHECK(v.mirrored);
        REQUIRE(v.program.has_value());
        CHECK(serialize_program(*v.program) ==
              serialize_program(build_pi_q(q, Ontology::CovABot)));
    }
}

TEST_CASE("tetrachotomy rejects what the theory does not cover") {
    SECTION("total covering variants") {
        Query q3 = parse_query(kQ3);
        CHECK_THROWS_AS(tetrachotomy(q3, Ontology::CovTop), DomainError);
        CHECK_THROWS_AS(tetrachotomy(q3, Ontology::CovTopBot), DomainError);
    }
    SECTION("non-path queries") {
        Query q = parse_query("F(x). R(x,y). R(x,z). T(y). T(z).");
        CHECK_THROWS_AS(tetrachotomy(q, Ontology::CovA), DomainError);
    }
    SECTION("twin-containing non-0-CQs under plain covering stay open") {
        Query q = parse_query("[F] -R-> [F,T] -R-> [T]");
        CHECK_THROWS_AS(tetrachotomy(q, Ontology::CovA), DomainError);
        // ... but the disjoint variant classifies them.
        Verdict v = tetrachotomy(q, Ontology::CovABot);
        CHECK(v.cls == ComplexityClass::AC0);
        CHECK(v.reason == Reason::HasTwin);
    }
}

TEST_CASE("reversing the path and swapping F and T mirrors the verdict") {
    std::mt19937_64 rng(20240517);
    int flipped = 0, preserved = 0;
    for (int round = 0; round < 400; ++round) {
        Query q = random_path_query(rng, 5, 2, /*allow_twins=*/false);
        Query m = reverse_query(swap_ft(q));

        Periodicity a = periodicity(analyze_path(q));
        Periodicity b = periodicity(analyze_path(m));
        NodeKinds k = node_kinds(q);
        if (k.solitary_f.size() == 1 && k.solitary_t.size() == 1) {
            // With one node of each kind the swap moves the anchor to
            // the other node and the reversal moves it back: the side is
            // preserved, and with l + r = 1 both forms are periodic.
            REQUIRE(a == b);
            REQUIRE((a == Periodicity::LeftPeriodic ||
                     a == Periodicity::RightPeriodic));
            ++preserved;
        } else {
            Periodicity expect =
                a == Periodicity::LeftPeriodic    ? Periodicity::RightPeriodic
                : a == Periodicity::RightPeriodic ? Periodicity::LeftPeriodic
                                                  : a;
            REQUIRE(b == expect);
            if (b != a) ++flipped;
        }

        for (Ontology o : {Ontology::CovA, Ontology::CovABot}) {
            Verdict vq = tetrachotomy(q, o);
            Verdict vm = tetrachotomy(m, o);
            REQUIRE(vq.cls == vm.cls);
        }
    }
    CHECK(flipped > 10);
    CHECK(preserved > 30);
}

TEST_CASE("verdict reasons partition the path queries") {
    std::mt19937_64 rng(77123);
    int seen_twin = 0, seen_zero = 0, seen_one = 0, seen_two = 0, open = 0;
    for (int round = 0; round < 400; ++round) {
        Query q = random_path_query(rng, 5, 2, /*allow_twins=*/true);
        for (Ontology o : {Ontology::CovA, Ontology::CovABot}) {
            bool twin_open = o == Ontology::CovA && q.has_twin() &&
                             cq_arity(q) != CqArity::Zero;
            if (twin_open) {
                CHECK_THROWS_AS(tetrachotomy(q, o), DomainError);
                ++open;
                continue;
            }
            Verdict v = tetrachotomy(q, o);
            switch (v.reason) {
                case Reason::HasTwin:
                    REQUIRE(o == Ontology::CovABot);
                    REQUIRE(q.has_twin());
                    REQUIRE(v.cls == ComplexityClass::AC0);
                    REQUIRE(v.fo_rewriting.size() == 1);
                    ++seen_twin;
                    break;
                case Reason::ZeroCQ:
                    REQUIRE(cq_arity(q) == CqArity::Zero);
                    REQUIRE(v.cls == ComplexityClass::AC0);
                    REQUIRE_FALSE(v.fo_rewriting.empty());
                    ++seen_zero;
                    break;
                case Reason::PeriodicOneCQLeft:
                case Reason::PeriodicOneCQRight:
                    REQUIRE(cq_arity(q) == CqArity::One);
                    REQUIRE_FALSE(q.has_twin());
                    REQUIRE(v.cls == ComplexityClass::NL);
                    ++seen_one;
                    break;
                case Reason::AperiodicOneCQ:
                    REQUIRE(cq_arity(q) == CqArity::One);
                    REQUIRE(v.cls == ComplexityClass::P);
                    REQUIRE(v.program.has_value());
                    ++seen_one;
                    break;
                case Reason::TwoCQ:
                    REQUIRE(cq_arity(q) == CqArity::Two);
                    REQUIRE(v.cls == ComplexityClass::CONP);
                    ++seen_two;
                    break;
            }
            // The side reasons agree with a fresh periodicity run.
            if (v.cls == ComplexityClass::NL) {
                Periodicity per = periodicity(analyze_path(q));
                Reason expect = per == Periodicity::LeftPeriodic
                                    ? Reason::PeriodicOneCQLeft
                                    : Reason::PeriodicOneCQRight;
                REQUIRE(v.reason == expect);
            }
        }
    }
    CHECK(seen_twin > 10);
    CHECK(seen_zero > 10);
    CHECK(seen_one > 10);
    CHECK(seen_two > 10);
    CHECK(open > 0);
}

TEST_CASE("AC0 rewritings agree with the oracle") {
    std::mt19937_64 rng(90210);
    int yes = 0, no = 0, checked = 0;
    for (int round = 0; checked < 250 && round < 4000; ++round) {
        Query q = random_path_query(rng, 4, 2, /*allow_twins=*/true);
        Ontology o = round % 2 ? Ontology::CovABot : Ontology::CovA;
        if (o == Ontology::CovA && q.has_twin() &&
            cq_arity(q) != CqArity::Zero)
            continue;
        Verdict v = tetrachotomy(q, o);
        if (v.cls != ComplexityClass::AC0) continue;

        ABox a = random_abox(rng, 6, 2);
        bool rewritten = ucq_maps(v.fo_rewriting, a);
        bool oracle = certain_answer_enum(o, q, a).answer;
        REQUIRE(rewritten == oracle);
        ++checked;
        (oracle ? yes : no)++;
    }
    REQUIRE(checked == 250);
    CHECK(yes > 15);
    CHECK(no > 15);
}
