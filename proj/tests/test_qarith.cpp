#include <catch2/catch_amalgamated.hpp>

#include "tlkit/scalar.hpp"

using namespace tlkit;

TEST_CASE("q-integers, summation form") {
    GenericDomain G;
    CHECK(qint(0, G).is_zero());
    CHECK(qint(1, G) == G.one());
    CHECK(qint(2, G) == G.v_pow(2) + G.v_pow(-2));
    // [3]_q = q^2 + 1 + q^-2
    CHECK(qint(3, G) == G.v_pow(4) + G.one() + G.v_pow(-4));
    for (long n = -12; n <= 12; ++n) CHECK(qint(-n, G) == G.zero() - qint(n, G));
}

TEST_CASE("q-Pascal identity [n+m] = [n]q^m + [m]q^-n for |n|,|m| <= 12") {
    GenericDomain G;
    for (long n = -12; n <= 12; ++n)
        for (long m = -12; m <= 12; ++m) {
            auto lhs = qint(n + m, G);
            auto rhs = qint(n, G) * G.v_pow(2 * m) + qint(m, G) * G.v_pow(-2 * n);
            CHECK(lhs == rhs);
        }
}

TEST_CASE("cyclotomic vanishing: [kappa]_q = 0 and [n]_q != 0 below, 3 <= kappa <= 16") {
    for (unsigned kappa = 3; kappa <= 16; ++kappa) {
        CycloDomain D = CycloDomain::make(2 * kappa);
        CHECK(qint(static_cast<long>(kappa), D).is_zero());
        for (unsigned n = 1; n < kappa; ++n) CHECK(!qint(static_cast<long>(n), D).is_zero());
    }
}

TEST_CASE("qint(3) vanishes at a primitive 6th root") {
    CycloDomain D = CycloDomain::make(6);
    CHECK(qint(3, D).is_zero());
    CHECK(qint(2, D) == D.one());  // [2] = 2cos(pi/3) = 1 at kappa = 3
}

TEST_CASE("primitive roots and cyclotomic polynomials") {
    CHECK_THROWS_AS(primitive_root(0), DomainError);
    auto r1 = primitive_root(1);
    CHECK(r1.value == r1.dom.one());
    CHECK(CycloDomain::make(8).degree() == 4);
    CHECK(euler_phi(8) == 4);
    // Frozen: Phi_8 = x^4 + 1, Phi_12 = x^4 - x^2 + 1, Phi_1 = x - 1.
    Poly phi8 = Poly::monomial(4, 1) + Poly(mpq_class(1));
    CHECK(cyclotomic_poly(8) == phi8);
    Poly phi12 = Poly::monomial(4, 1) - Poly::monomial(2, 1) + Poly(mpq_class(1));
    CHECK(cyclotomic_poly(12) == phi12);
    CHECK(cyclotomic_poly(1) == Poly::x() - Poly(mpq_class(1)));
    // A primitive root is primitive: zeta_12^k != 1 for 0 < k < 12.
    auto r12 = primitive_root(12);
    for (long k = 1; k < 12; ++k) CHECK(!(epow(r12.value, k) == r12.dom.one()));
    CHECK(epow(r12.value, 12) == r12.dom.one());
}

TEST_CASE("braiding units: four generic solutions, degenerations at q = 1, -1") {
    GenericDomain G;
    auto bu = braiding_units(G);
    REQUIRE(bu.units.size() == 4);
    auto two = qint(2, bu.dom);
    for (auto& a : bu.units) {
        CHECK(a * a.inv() == bu.dom.one());          // ab = 1
        CHECK(a * a + (a * a).inv() == two);         // a^2 + a^-2 = [2]_q
        // Completeness oracle: each unit is a root of x^4 - [2]x^2 + 1 = (x^2-q)(x^2-q^-1).
        auto x2 = a * a;
        CHECK((x2 - bu.dom.q()) * (x2 - bu.dom.q().inv()) == x2 * x2 - two * x2 + bu.dom.one());
        CHECK(x2 * x2 - two * x2 + bu.dom.one() == bu.dom.zero());
    }
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) CHECK(!(bu.units[i] == bu.units[j]));

    auto bu1 = braiding_units(CycloDomain::make(1));  // q = 1
    CHECK(bu1.units.size() == 2);
    CHECK(bu1.units[0] == bu1.dom.one());
    CHECK(bu1.units[1] == bu1.dom.zero() - bu1.dom.one());

    auto bu2 = braiding_units(CycloDomain::make(2));  // q = -1, units are the square roots of -1
    CHECK(bu2.units.size() == 2);
    for (auto& a : bu2.units) CHECK(a * a == bu2.dom.zero() - bu2.dom.one());

    auto bu6 = braiding_units(CycloDomain::make(6));
    CHECK(bu6.units.size() == 4);
    for (auto& a : bu6.units) CHECK(a * a + (a * a).inv() == qint(2, bu6.dom));
}

TEST_CASE("sqrt extension keeps q and its order") {
    CycloDomain D = CycloDomain::make(6);  // kappa = 3
    CHECK(!D.has_v());
    CycloDomain E = D.with_sqrt_q();
    CHECK(E.M == 12);
    CHECK(E.has_v());
    CHECK(E.v() * E.v() == E.q());
    CHECK(*E.q_order() == 6);
    CHECK(*E.kappa() == 3);
    CHECK(cyclo_embed(qint(5, D), D, E) == qint(5, E));

    CycloDomain D9 = CycloDomain::make(9);  // odd: v in-field
    CHECK(D9.has_v());
    CHECK(D9.v() * D9.v() == D9.q());
}

TEST_CASE("finite domain carries q and v") {
    FiniteDomain D = FiniteDomain::make(7, 1, {2});  // q = 2 in F_7, order 3
    CHECK(D.v() * D.v() == D.q());
    CHECK(*D.q_order() == 3);
    CHECK(qint(3, D) == D.from_int(4 + 2 + 1) * D.q().inv());  // [3] = q^2+1+q^-2 = (q^4+q^2+1)/q^2
    FiniteDomain D2 = FiniteDomain::make(5, 2, {2});  // 2 is a non-square mod 5: v lives in F_25
    CHECK(D2.v() * D2.v() == D2.q());
    CHECK_THROWS_AS(FiniteDomain::make(6, 1, {2}), DomainError);
    // Least irreducible for F_5, d = 2: x^2 + 2 (codes 0, 1 give x^2, x^2+1 = (x+2)(x+3)).
    CHECK(D2.F->modulus.c == std::vector<mpz_class>{2, 0, 1});
}

TEST_CASE("serialization round-trips") {
    GenericDomain G;
    auto s = qint(2, G);
    CHECK(generic_to_string(s) == "q^-1 + q");
    CHECK(parse_generic("q^-1 + q") == s);
    auto r = (G.v() + G.one()) * (G.v_pow(-3) - G.from_int(7)).inv();
    CHECK(parse_generic(generic_to_string(r)) == r);
    auto t = G.from_int(-3) * G.v_pow(5) + G.from_int(2);
    CHECK(parse_generic(generic_to_string(t)) == t);
    CHECK(generic_to_string(G.zero()) == "0");
    CHECK(parse_generic("0") == G.zero());
    CHECK(parse_generic("-5/3*v^-2 + 1 - v") == G.from_int(-5) * (G.from_int(3) * G.v_pow(2)).inv() + G.one() - G.v());

    CycloDomain D = CycloDomain::make(12);
    CHECK(nf_to_string(D.q(), D.M) == "[0, 1, 0, 0] mod Phi_12");
}
