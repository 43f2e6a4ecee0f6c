#include <catch2/catch_amalgamated.hpp>

#include "tlkit/crystal.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

using namespace tlkit;

namespace {

using GM = Morphism<GenericDomain>;
const GenericDomain gd{};

GM cm(const Diagram& d) { return diagram_morphism(gd, Mode::Crystal, d); }
GM cid(int n) { return identity_morphism(gd, Mode::Crystal, n); }

Diagram hook3() {
    // Source arc (0,1), through strand 2 -> first target, target arc (1,2).
    return Diagram::make(3, 3, {1, 0, 3, 2, 5, 4});
}

std::vector<std::vector<mpq_class>> sorted_solutions(const CrystalSearchReport& r) {
    auto s = r.solutions;
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

TEST_CASE("diagram_word factors cups and caps in application order", "[crystal]") {
    std::vector<CrystalSlice> w = diagram_word(cup_diagram());
    REQUIRE(w.size() == 1);
    REQUIRE(w[0].is_cup);
    REQUIRE(w[0].pos == 0);

    w = diagram_word(cap_diagram());
    REQUIRE(w.size() == 1);
    REQUIRE_FALSE(w[0].is_cup);
    REQUIRE(w[0].pos == 0);

    REQUIRE(diagram_word(id_diagram(3)).empty());

    w = diagram_word(hook3());
    REQUIRE(w.size() == 2);
    REQUIRE_FALSE(w[0].is_cup);
    REQUIRE(w[0].pos == 0);
    REQUIRE(w[1].is_cup);
    REQUIRE(w[1].pos == 1);

    // Nested source arcs peel innermost first: caps at 1 then 0.
    Diagram nest = Diagram::make(4, 0, {3, 2, 1, 0});
    w = diagram_word(nest);
    REQUIRE(w.size() == 2);
    REQUIRE(w[0].pos == 1);
    REQUIRE(w[1].pos == 0);
    REQUIRE_FALSE(w[0].is_cup);
}

TEST_CASE("diagram_word round-trips through the normal-form state", "[crystal]") {
    for (int a = 0; a <= 4; ++a)
        for (int b = (a % 2); b <= 4; b += 2) {
            const auto& tab = diagram_table(a, b);
            for (const Diagram& d : tab.diags) {
                CrystalWordState st;
                for (const CrystalSlice& s : diagram_word(d)) st.push(s);
                REQUIRE_FALSE(st.zero);
                Diagram back = detail::crystal_word_diagram(st, a);
                REQUIRE(back == d);
            }
        }
}

TEST_CASE("crystal word composition implements circle and zigzag rules", "[crystal]") {
    // Circle closes at value one.
    CrystalWordResult r = crystal_word_compose(cap_diagram(), cup_diagram());
    REQUIRE_FALSE(r.zero);
    REQUIRE(r.d == id_diagram(0));

    // Both zigzags vanish.
    Diagram zig_f = tensor(cap_diagram(), id_diagram(1));
    Diagram zig_g = tensor(id_diagram(1), cup_diagram());
    REQUIRE(crystal_word_compose(zig_f, zig_g).zero);
    REQUIRE(crystal_word_compose(tensor(id_diagram(1), cap_diagram()),
                                 tensor(cup_diagram(), id_diagram(1)))
                .zero);

    // u o u = u: the closed circle contributes a factor of one.
    Diagram u = Diagram::make(2, 2, {1, 0, 3, 2});
    r = crystal_word_compose(u, u);
    REQUIRE_FALSE(r.zero);
    REQUIRE(r.d == u);

    // The S-bend (1 (x) u) o (u (x) 1) crosses the interface three times.
    Diagram uL = tensor(u, id_diagram(1));
    Diagram uR = tensor(id_diagram(1), u);
    REQUIRE(crystal_word_compose(uR, uL).zero);
    REQUIRE(crystal_word_compose(uL, uR).zero);

    REQUIRE_THROWS_AS(crystal_word_compose(cup_diagram(), cup_diagram()), DomainError);
}

TEST_CASE("geometric crystal composition matches the word oracle", "[crystal]") {
    REQUIRE(crystal_relations_check());
}

TEST_CASE("crystal composition contrasts with the generic one on the S-bend", "[crystal]") {
    Diagram u = Diagram::make(2, 2, {1, 0, 3, 2});
    GM left = cm(tensor(id_diagram(1), u));
    GM right = cm(tensor(u, id_diagram(1)));
    REQUIRE(compose(left, right).is_zero());

    GM gleft = diagram_morphism(gd, Mode::Generic, tensor(id_diagram(1), u));
    GM gright = diagram_morphism(gd, Mode::Generic, tensor(u, id_diagram(1)));
    GM hook = diagram_morphism(gd, Mode::Generic, hook3());
    REQUIRE(compose(gleft, gright) == hook);
}

TEST_CASE("crystal composition is associative on sampled triples", "[crystal]") {
    std::mt19937 rng(20260815u);
    for (int trial = 0; trial < 80; ++trial) {
        int a = static_cast<int>(rng() % 5);
        int b = static_cast<int>(rng() % 5);
        int c = static_cast<int>(rng() % 5);
        if ((a + b) % 2 || (b + c) % 2) continue;
        int d = (c % 2 == 0) ? 2 * static_cast<int>(rng() % 3)
                             : 2 * static_cast<int>(rng() % 2) + 1;
        const auto& t1 = diagram_table(a, b);
        const auto& t2 = diagram_table(b, c);
        const auto& t3 = diagram_table(c, d);
        GM f = cm(t3.diags[rng() % t3.size()]);
        GM g = cm(t2.diags[rng() % t2.size()]);
        GM h = cm(t1.diags[rng() % t1.size()]);
        REQUIRE(compose(compose(f, g), h) == compose(f, compose(g, h)));
    }
}

TEST_CASE("unit object carries exactly the sign half-braidings", "[crystal]") {
    CrystalSearchReport rep = halfbraid_solutions(crystal_strand_object(0));
    REQUIRE(rep.object == "obj(0)");
    REQUIRE(rep.unknowns == std::vector<std::string>{"x0_0_0", "y0_0_0"});
    REQUIRE(rep.conclusion == "solutions");
    REQUIRE(rep.kind == VarietyKind::Finite);
    REQUIRE(rep.solutions_complete);
    REQUIRE(rep.reverified);
    auto sols = sorted_solutions(rep);
    REQUIRE(sols == std::vector<std::vector<mpq_class>>{{mpq_class(-1)}, {mpq_class(1)}});
    REQUIRE_FALSE(rep.groebner_basis.empty());

    // Cross-check the two points against the morphism-level criterion.
    CutObject<GenericDomain> X{0, cid(0)};
    REQUIRE(half_braiding_check(X, cid(1)));
    REQUIRE(half_braiding_check(X, scalar_mul(gd.from_rational(mpq_class(-1)), cid(1))));
}

TEST_CASE("strand objects admit no half-braidings, with certificates", "[crystal]") {
    for (int m = 1; m <= 3; ++m) {
        CrystalSearchReport rep = halfbraid_solutions(crystal_strand_object(m));
        INFO("m = " << m);
        REQUIRE(rep.conclusion == "empty");
        REQUIRE(rep.kind == VarietyKind::Empty);
        REQUIRE(rep.groebner_basis == std::vector<std::string>{"1"});
        REQUIRE(rep.solutions.empty());
        REQUIRE(rep.reverified);
        REQUIRE_FALSE(rep.system.gens.empty());
    }
}

TEST_CASE("two unit copies give the positive-dimensional involution family", "[crystal]") {
    CrystalSearchReport rep = halfbraid_solutions(crystal_unit_sum(2));
    REQUIRE(rep.conclusion == "solutions");
    REQUIRE(rep.kind == VarietyKind::PositiveDimensional);
    REQUIRE(rep.solutions.empty());
    REQUIRE(rep.unknowns.size() == 8);

    // The ideal vanishes exactly on pairs (X, X^{-1}) with X an involution.
    auto vanishes = [&](std::vector<mpq_class> x, std::vector<mpq_class> y) {
        std::vector<mpq_class> pt = std::move(x);
        pt.insert(pt.end(), y.begin(), y.end());
        for (const MPoly& g : rep.system.gens)
            if (sgn(detail::eval_mpoly(g, pt)) != 0) return false;
        return true;
    };
    std::vector<std::vector<mpq_class>> involutions = {
        {1, 0, 0, 1},
        {-1, 0, 0, -1},
        {1, 0, 0, -1},
        {0, 1, 1, 0},
        {1, 1, 0, -1},
        {mpq_class(3, 5), mpq_class(4, 5), mpq_class(4, 5), mpq_class(-3, 5)},
    };
    for (const auto& X : involutions) {
        INFO("X = " << X[0] << "," << X[1] << "," << X[2] << "," << X[3]);
        REQUIRE(vanishes(X, X));  // an involution is its own inverse
    }
    // Invertible but not an involution: scaling breaks X^2 = I.
    REQUIRE_FALSE(vanishes({2, 0, 0, 2},
                           {mpq_class(1, 2), 0, 0, mpq_class(1, 2)}));
    // Nilpotent-shifted matrix: inverse pairing fails.
    REQUIRE_FALSE(vanishes({1, 1, 0, 1}, {1, 1, 0, 1}));
    REQUIRE_FALSE(vanishes({0, 0, 0, 0}, {0, 0, 0, 0}));
}

TEST_CASE("adjacent sums split by parity and stay empty", "[crystal]") {
    for (int m = 1; m <= 3; ++m) {
        CrystalSearchReport rep = halfbraid_solutions(crystal_adjacent_sum(m));
        INFO("m = " << m);
        REQUIRE(rep.object == "obj(" + std::to_string(m) + ") + obj(" + std::to_string(m + 1) +
                              ")");
        REQUIRE(rep.conclusion == "empty");
        REQUIRE(rep.groebner_basis == std::vector<std::string>{"1"});
        // Parity kills the cross blocks: only diagonal unknowns appear.
        for (const std::string& v : rep.unknowns) {
            REQUIRE(v.size() >= 5);
            REQUIRE(v[1] == v[3]);  // x{b}_{a}_... with b == a
        }
    }
}

TEST_CASE("cap-square scan matches the projector structure of End(obj(2))", "[crystal]") {
    const auto& tab = diagram_table(2, 2);
    REQUIRE(tab.size() == 2);
    GM u = cm(tab.diags[1]);  // cup over cap
    REQUIRE(compose(u, u) == u);

    CrystalSearchReport iden = crystal_capsquare_scan(2, cid(2), "cut(obj(2); id)");
    REQUIRE(iden.conclusion == "empty");
    REQUIRE(iden.groebner_basis == std::vector<std::string>{"1"});

    CrystalSearchReport cut_u = crystal_capsquare_scan(2, u, "cut(obj(2); u)");
    REQUIRE(cut_u.conclusion == "solutions");
    REQUIRE(cut_u.kind == VarietyKind::Finite);
    REQUIRE(cut_u.reverified);
    auto sols = sorted_solutions(cut_u);
    REQUIRE(sols == std::vector<std::vector<mpq_class>>{{mpq_class(-1)}, {mpq_class(1)}});

    GM jw2 = cid(2) - u;  // through-strand projector
    REQUIRE(compose(jw2, jw2) == jw2);
    CrystalSearchReport cut_p = crystal_capsquare_scan(2, jw2, "cut(obj(2); id - u)");
    REQUIRE(cut_p.conclusion == "empty");

    REQUIRE_THROWS_AS(crystal_capsquare_scan(2, cm(tab.diags[1]) + cm(tab.diags[1]),
                                             "not idempotent"),
                      DomainError);
}

TEST_CASE("conjecture evidence is internally consistent through m = 3", "[crystal]") {
    CrystalEvidence ev = conjecture_evidence(3);
    REQUIRE(ev.m_max == 3);
    REQUIRE(ev.all_consistent);
    REQUIRE(ev.strand_reports.size() == 3);
    for (const auto& r : ev.strand_reports) REQUIRE(r.conclusion == "empty");
    REQUIRE(ev.sum_reports.size() == 3);
    for (const auto& r : ev.sum_reports) REQUIRE(r.conclusion == "empty");

    // m = 1: only the identity, which has a through strand and is eliminated.
    int m1 = 0, m2_no_through_solved = 0, m2_through_empty = 0;
    for (const auto& f : ev.scan) {
        if (f.m == 1) {
            ++m1;
            REQUIRE(f.has_through);
            REQUIRE(f.conclusion == "empty");
        }
        if (f.m == 2 && !f.has_through && f.conclusion == "solutions") ++m2_no_through_solved;
        if (f.m == 2 && f.has_through && f.conclusion == "empty") ++m2_through_empty;
        REQUIRE(f.consistent);
    }
    REQUIRE(m1 == 1);
    REQUIRE(m2_no_through_solved == 1);  // the arc projector u
    REQUIRE(m2_through_empty == 2);      // id and id - u

    std::string text = crystal_evidence_text(ev);
    REQUIRE(text.find("consistent") != std::string::npos);
    REQUIRE(text.find("INCONSISTENT") == std::string::npos);
    REQUIRE(text.find("obj(3)") != std::string::npos);
}

TEST_CASE("search reports serialize to JSON and parse back", "[crystal]") {
    CrystalSearchReport rep = halfbraid_solutions(crystal_strand_object(0));
    nlohmann::json j = nlohmann::json::parse(crystal_report_json(rep));
    REQUIRE(j["object"] == "obj(0)");
    REQUIRE(j["unknowns"].size() == 2);
    REQUIRE(j["conclusion"] == "solutions");
    REQUIRE(j["generators"].size() == rep.system.gens.size());
    std::vector<std::vector<std::string>> sols = j["solutions"];
    std::sort(sols.begin(), sols.end());
    REQUIRE(sols == std::vector<std::vector<std::string>>{{"-1"}, {"1"}});

    nlohmann::json je = nlohmann::json::parse(
        crystal_report_json(halfbraid_solutions(crystal_strand_object(2))));
    REQUIRE(je["conclusion"] == "empty");
    REQUIRE(je["groebner_basis"] == nlohmann::json::array({"1"}));
    REQUIRE(je["solutions"].empty());
}

TEST_CASE("crystal guards and domain errors", "[crystal]") {
    REQUIRE_THROWS_AS(crystal_strand_object(-1), DomainError);
    REQUIRE_THROWS_AS(crystal_unit_sum(0), DomainError);
    REQUIRE_THROWS_AS(crystal_adjacent_sum(-2), DomainError);
    REQUIRE_THROWS_AS(halfbraid_solutions(crystal_strand_object(1), 6), GuardError);
    REQUIRE_THROWS_AS(halfbraid_solutions(crystal_strand_object(5), 4), GuardError);
    REQUIRE_THROWS_AS(conjecture_evidence(0), GuardError);
    REQUIRE_THROWS_AS(conjecture_evidence(5), GuardError);

    // Cut factory validates mode and idempotency.
    GM generic_id = identity_morphism(gd, Mode::Generic, 2);
    REQUIRE_THROWS_AS(crystal_cut(2, generic_id, "bad mode"), DomainError);
    GM not_idem = scalar_mul(gd.from_rational(mpq_class(2)), cid(2));
    REQUIRE_THROWS_AS(crystal_cut(2, not_idem, "bad idem"), DomainError);
    CrystalObject ok = crystal_cut(2, cid(2), "obj(2) via cut");
    REQUIRE(ok.summands.size() == 1);
}
