#include <catch2/catch_amalgamated.hpp>

#include "tlkit/primes.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

using namespace tlkit;

namespace {

mpz_class Z(const char* s) { return mpz_class(s); }

/// Independent resultant oracle: determinant of the Sylvester matrix by
/// fraction-free (Bareiss) elimination.
mpz_class sylvester_resultant(const std::vector<mpz_class>& A, const std::vector<mpz_class>& B) {
    const int da = static_cast<int>(A.size()) - 1, db = static_cast<int>(B.size()) - 1;
    const int n = da + db;
    std::vector<std::vector<mpz_class>> M(static_cast<std::size_t>(n),
                                          std::vector<mpz_class>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < db; ++i)
        for (int j = 0; j <= da; ++j)
            M[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + j)] =
                A[static_cast<std::size_t>(da - j)];
    for (int i = 0; i < da; ++i)
        for (int j = 0; j <= db; ++j)
            M[static_cast<std::size_t>(db + i)][static_cast<std::size_t>(i + j)] =
                B[static_cast<std::size_t>(db - j)];
    mpz_class sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        auto& Mk = M[static_cast<std::size_t>(k)];
        if (Mk[static_cast<std::size_t>(k)] == 0) {
            int s = -1;
            for (int r = k + 1; r < n; ++r)
                if (M[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] != 0) {
                    s = r;
                    break;
                }
            if (s < 0) return 0;
            std::swap(M[static_cast<std::size_t>(k)], M[static_cast<std::size_t>(s)]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                mpz_class num =
                    M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                        M[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)] -
                    M[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                        M[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                mpz_class q;
                mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
                M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = q;
            }
        for (int i = k + 1; i < n; ++i)
            M[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = 0;
        prev = M[static_cast<std::size_t>(k)][static_cast<std::size_t>(k)];
    }
    return mpz_class(sign * M[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(n - 1)]);
}

mpz_class powm(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
    mpz_class b = base % mod, r;
    if (b < 0) b += mod;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return r;
}

}  // namespace

TEST_CASE("64-bit primality is exact on frozen witnesses", "[primes]") {
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 37ull, 97ull, 65537ull, 274177ull,
                            4294967311ull, 2305843009213693951ull, 18446744073709551557ull})
        CHECK(is_prime_u64(p));
    // 561 and 25326001 are Carmichael / strong-pseudoprime classics;
    // 3825123056546413051 fools the first nine Miller-Rabin bases.
    for (std::uint64_t c : {0ull, 1ull, 4ull, 9ull, 561ull, 1105ull, 25326001ull,
                            3215031751ull, 3825123056546413051ull, 4294967297ull,
                            18446744073709551615ull})
        CHECK_FALSE(is_prime_u64(c));
}

TEST_CASE("64-bit factoring is complete and exact", "[primes]") {
    std::map<std::uint64_t, int> want{{71, 1}, {839, 1}, {1471, 1}, {6857, 1}};
    CHECK(factor_u64(600851475143ull) == want);

    want = {{2, 4}, {3, 2}, {5, 1}};
    CHECK(factor_u64(720) == want);

    want = {{2, 60}};
    CHECK(factor_u64(1ull << 60) == want);

    CHECK(factor_u64(1).empty());
    want = {{2305843009213693951ull, 1}};
    CHECK(factor_u64(2305843009213693951ull) == want);

    // Semiprime with two large balanced factors exercises the rho path.
    const std::uint64_t p = 2147483647ull, q = 2147483659ull;
    want = {{p, 1}, {q, 1}};
    CHECK(factor_u64(p * q) == want);

    CHECK_THROWS_AS(factor_u64(0), DomainError);

    // Multiplicativity on random composites.
    std::mt19937_64 rng(20260815);
    for (int t = 0; t < 50; ++t) {
        std::uint64_t n = (rng() % 1000000000ull) + 2;
        auto fac = factor_u64(n);
        std::uint64_t prod = 1;
        for (auto [pp, e] : fac) {
            CHECK(is_prime_u64(pp));
            for (int i = 0; i < e; ++i) prod *= pp;
        }
        CHECK(prod == n);
    }
}

TEST_CASE("fixed-limb residues mod 2^128+1 match GMP exactly", "[primes]") {
    const mpz_class m = (mpz_class(1) << 128) + 1;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(20260815UL);
    for (int t = 0; t < 5000; ++t) {
        mpz_class a = rng.get_z_range(m), b = rng.get_z_range(m);
        auto fa = detail::fermat_from_mpz<2>(a, m), fb = detail::fermat_from_mpz<2>(b, m);
        REQUIRE(detail::fermat_to_mpz<2>(fa) == a);
        REQUIRE(detail::fermat_to_mpz<2>(detail::fermat_mul<2>(fa, fb)) == (a * b) % m);
        mpz_class diff = (a - b) % m;
        if (diff < 0) diff += m;
        REQUIRE(detail::fermat_to_mpz<2>(detail::fermat_sub<2>(fa, fb)) == diff);
        auto fc = fa;
        std::uint64_t delta = static_cast<std::uint64_t>(t % 9 + 1);
        detail::fermat_add_small<2>(fc, delta);
        REQUIRE(detail::fermat_to_mpz<2>(fc) == (a + delta) % m);
    }
    // Wrap-sensitive edge values, all pairs.
    std::vector<mpz_class> edges{0, 1, 2, (mpz_class(1) << 64) - 1, mpz_class(1) << 64,
                                 m - 2, m - 1};
    for (const auto& a : edges)
        for (const auto& b : edges) {
            auto fa = detail::fermat_from_mpz<2>(a, m), fb = detail::fermat_from_mpz<2>(b, m);
            REQUIRE(detail::fermat_to_mpz<2>(detail::fermat_mul<2>(fa, fb)) == (a * b) % m);
            mpz_class diff = (a - b) % m;
            if (diff < 0) diff += m;
            REQUIRE(detail::fermat_to_mpz<2>(detail::fermat_sub<2>(fa, fb)) == diff);
        }
    // The value -1 == 2^128 uses the dedicated top encoding.
    auto top = detail::fermat_from_mpz<2>(m - 1, m);
    CHECK(top.top);
    CHECK(detail::limbs_zero<2>(top.w));

    const mpz_class m4 = (mpz_class(1) << 256) + 1;
    for (int t = 0; t < 2000; ++t) {
        mpz_class a = rng.get_z_range(m4), b = rng.get_z_range(m4);
        auto fa = detail::fermat_from_mpz<4>(a, m4), fb = detail::fermat_from_mpz<4>(b, m4);
        REQUIRE(detail::fermat_to_mpz<4>(detail::fermat_mul<4>(fa, fb)) == (a * b) % m4);
    }
}

TEST_CASE("big factoring certifies primes and reports honest residues", "[primes]") {
    // 2^64+1 = 274177 * 67280421310721: trial division + deterministic range.
    auto f = factor_mpz((mpz_class(1) << 64) + 1);
    REQUIRE(f.primes.size() == 2);
    CHECK(f.primes.at(Z("274177")) == 1);
    CHECK(f.primes.at(Z("67280421310721")) == 1);
    CHECK(f.residues.empty());

    // 2^32+1 = 641 * 6700417.
    f = factor_mpz((mpz_class(1) << 32) + 1);
    REQUIRE(f.primes.size() == 2);
    CHECK(f.primes.at(641) == 1);
    CHECK(f.primes.at(6700417) == 1);

    // 2 * (2^127 - 1): the Mersenne cofactor is a probable prime beyond the
    // deterministic 64-bit range, so it must stay an uncertified residue.
    f = factor_mpz(((mpz_class(1) << 127) - 1) * 2);
    REQUIRE(f.primes.size() == 1);
    CHECK(f.primes.at(2) == 1);
    REQUIRE(f.residues.size() == 1);
    CHECK(f.residues[0] == (mpz_class(1) << 127) - 1);

    // A big semiprime with an explicit iteration budget: rho gives up and the
    // whole composite is reported as an unfactored residue, never as a prime.
    const mpz_class big = Z("2305843009213693951") * Z("18446744073709551557");
    f = factor_mpz(big, 1024);
    CHECK(f.primes.empty());
    REQUIRE(f.residues.size() == 1);
    CHECK(f.residues[0] == big);

    f = factor_mpz(Z("1000000007"));
    REQUIRE(f.primes.size() == 1);
    CHECK(f.primes.at(Z("1000000007")) == 1);

    f = factor_mpz(-12);
    CHECK(f.primes.at(2) == 2);
    CHECK(f.primes.at(3) == 1);

    CHECK_THROWS_AS(factor_mpz(0), DomainError);
}

TEST_CASE("multiplicative orders over F_p and F_p^2", "[primes]") {
    CHECK(mult_order(2, 7) == 3);
    CHECK(mult_order(1, 7) == 1);
    CHECK(mult_order(3, 5) == 4);
    CHECK(mult_order(6, 7) == 2);
    CHECK(mult_order(2, Z("2305843009213693951")) == 61);

    // F_9 as F_3[t]/(t^2+1): t = i has order 4.
    CHECK(mult_order(3, 3, 2, {mpz_class(1), mpz_class(0), mpz_class(1)}) == 4);
    // F_9 as F_3[t]/(t^2+2t+2), i.e. t^2 = t+1: t generates the units.
    CHECK(mult_order(3, 3, 2, {mpz_class(2), mpz_class(2), mpz_class(1)}) == 8);

    CHECK_THROWS_AS(mult_order(0, 7), DomainError);
    CHECK_THROWS_AS(mult_order(7, 7), DomainError);
    CHECK_THROWS_AS(mult_order(14, 7), DomainError);
    CHECK_THROWS_AS(mult_order(2, 7, 3), DomainError);
    CHECK_THROWS_AS(mult_order(3, 3, 2, {}), DomainError);
    CHECK_THROWS_AS(mult_order(2, (mpz_class(1) << 64) + 13), GuardError);
    CHECK_THROWS_AS(mult_order(3, (mpz_class(1) << 33) + 9, 2,
                               {mpz_class(1), mpz_class(0), mpz_class(1)}),
                    GuardError);
}

TEST_CASE("integer resultants: frozen values and Sylvester cross-check", "[primes]") {
    using P = std::vector<mpz_class>;
    const P x2p1{1, 0, 1};  // x^2 + 1

    CHECK(poly_resultant(P{-2, 1}, x2p1) == 5);
    CHECK(poly_resultant(P{-1, 2}, x2p1) == 5);
    CHECK(poly_resultant(x2p1, P{-2, 1}) == 5);
    CHECK(poly_resultant(P{-2, 1}, P{-3, 1}) == -1);
    CHECK(poly_resultant(P{-3, 1}, P{-2, 1}) == 1);
    CHECK(poly_resultant(x2p1, x2p1) == 0);
    CHECK(poly_resultant(P{-1, -1, 1}, x2p1) == 5);
    CHECK(poly_resultant(P{-2, 0, 1}, x2p1) == 9);

    // Constant and empty inputs.
    CHECK(poly_resultant(P{5}, x2p1) == 25);
    CHECK(poly_resultant(x2p1, P{5}) == 25);
    CHECK(poly_resultant(P{5}, P{7}) == 1);
    CHECK(poly_resultant(P{}, x2p1) == 0);

    // Res(x^2-x-1, x^{2^k}+1) follows the Lucas numbers: L_{2^k} + 2.
    const std::vector<mpz_class> lucas_values{Z("5"), Z("9"), Z("49"), Z("2209"),
                                              Z("4870849"), Z("23725150497409")};
    for (int k = 1; k <= 6; ++k) {
        P cyc(static_cast<std::size_t>(1 << k) + 1, mpz_class(0));
        cyc[0] = 1;
        cyc.back() = 1;
        CHECK(poly_resultant(P{-1, -1, 1}, cyc) == lucas_values[static_cast<std::size_t>(k - 1)]);
    }

    // Independent oracle: Sylvester determinants on random small polynomials.
    std::mt19937 rng(97);
    auto coeff = [&]() { return mpz_class(static_cast<int>(rng() % 11) - 5); };
    for (int t = 0; t < 60; ++t) {
        int da = 1 + static_cast<int>(rng() % 3), db = 1 + static_cast<int>(rng() % 3);
        P A(static_cast<std::size_t>(da) + 1), B(static_cast<std::size_t>(db) + 1);
        for (auto& c : A) c = coeff();
        for (auto& c : B) c = coeff();
        if (A.back() == 0) A.back() = 1;
        if (B.back() == 0) B.back() = 1;
        CHECK(poly_resultant(A, B) == sylvester_resultant(A, B));
    }
}

TEST_CASE("tower over q = 2 walks the Fermat primes and beyond", "[primes][towers]") {
    Tower tw = integer_tower(2, 8);
    REQUIRE(tw.entries.size() == 8);
    CHECK(tw.notes.empty());

    const std::vector<mpz_class> expected_p{
        Z("5"),   Z("17"),     Z("257"),               Z("65537"),
        Z("641"), Z("274177"), Z("59649589127497217"), Z("1238926361552897")};
    std::set<mpz_class> seen;
    for (int k = 1; k <= 8; ++k) {
        const TowerEntry& e = tw.entries[static_cast<std::size_t>(k - 1)];
        CHECK(e.k == k);
        CHECK(e.p == expected_p[static_cast<std::size_t>(k - 1)]);
        CHECK(e.d == 1);
        CHECK(e.root == 2);
        CHECK(e.order == mpz_class(1) << (k + 1));
        // Defining congruence q^{2^k} == -1 and divisibility p | A_k, rechecked.
        CHECK(powm(2, mpz_class(1) << k, e.p) == e.p - 1);
        const mpz_class& A = tw.sources[static_cast<std::size_t>(k - 1)].second;
        CHECK(A == (mpz_class(1) << (1 << k)) + 1);
        CHECK(A % e.p == 0);
        CHECK_FALSE(seen.count(e.p));
        seen.insert(e.p);
    }
}

TEST_CASE("towers over other integers, including negative q", "[primes][towers]") {
    Tower tw = integer_tower(3, 2);
    REQUIRE(tw.entries.size() == 2);
    CHECK(tw.entries[0].p == 5);
    CHECK(tw.entries[0].root == 3);
    CHECK(tw.entries[0].order == 4);
    CHECK(tw.entries[1].p == 41);
    CHECK(tw.entries[1].root == 3);
    CHECK(tw.entries[1].order == 8);

    tw = integer_tower(-2, 3);
    REQUIRE(tw.entries.size() == 3);
    const std::vector<mpz_class> ps{5, 17, 257};
    for (int k = 1; k <= 3; ++k) {
        const TowerEntry& e = tw.entries[static_cast<std::size_t>(k - 1)];
        CHECK(e.p == ps[static_cast<std::size_t>(k - 1)]);
        CHECK(e.root == e.p - 2);  // -2 reduced mod p
        CHECK(e.order == mpz_class(1) << (k + 1));
        CHECK(powm(-2, mpz_class(1) << k, e.p) == e.p - 1);
    }

    CHECK_THROWS_AS(integer_tower(0, 3), DomainError);
    CHECK_THROWS_AS(integer_tower(1, 3), DomainError);
    CHECK_THROWS_AS(integer_tower(-1, 3), DomainError);
    CHECK_THROWS_AS(integer_tower(2, 0), GuardError);
    CHECK_THROWS_AS(integer_tower(2, 13), GuardError);
}

TEST_CASE("A_k - 2 factors through every lower level", "[primes][towers]") {
    // The identity A_k - 2 = A_{k-1} ... A_1 A_0 (q - 1) forces a new odd
    // prime at every level; verify it numerically for several q.
    for (long q : {2L, 3L, 5L, 10L}) {
        std::vector<mpz_class> A;  // A_0 = q + 1, A_k = q^{2^k} + 1
        for (int k = 0; k <= 5; ++k) {
            mpz_class v;
            mpz_class base(q);
            mpz_pow_ui(v.get_mpz_t(), base.get_mpz_t(), 1ul << k);
            A.push_back(v + 1);
        }
        for (int k = 1; k <= 5; ++k) {
            mpz_class prod = mpz_class(q) - 1;
            for (int j = 0; j < k; ++j) prod *= A[static_cast<std::size_t>(j)];
            CHECK(A[static_cast<std::size_t>(k)] - 2 == prod);
        }
    }
}

TEST_CASE("algebraic tower for the golden polynomial x^2 - x - 1", "[primes][towers]") {
    const std::vector<mpz_class> f{-1, -1, 1};
    Tower tw = algebraic_tower(f, 6);
    CHECK(tw.label == "f = x^2 - x - 1");
    CHECK(tw.notes.empty());
    REQUIRE(tw.entries.size() == 6);

    // k=1 lands in F_5 (5 | disc, double root 3); all later levels need F_p^2
    // because the discriminant 5 is a quadratic non-residue there.
    struct Want {
        int k;
        const char* p;
        int d;
    };
    const std::vector<Want> want{{1, "5", 1},    {2, "3", 2},    {3, "7", 2},
                                 {4, "47", 2},   {5, "2207", 2}, {6, "1087", 2}};
    const std::vector<mpz_class> sources{Z("5"), Z("9"), Z("49"), Z("2209"), Z("4870849"),
                                         Z("23725150497409")};
    for (std::size_t i = 0; i < want.size(); ++i) {
        const TowerEntry& e = tw.entries[i];
        CHECK(e.k == want[i].k);
        CHECK(e.p == Z(want[i].p));
        CHECK(e.d == want[i].d);
        CHECK(e.order == mpz_class(1) << (want[i].k + 1));
        CHECK(tw.sources[i].second == sources[i]);
        CHECK(sources[i] % e.p == 0);  // resultant divisibility, rechecked
        if (e.d == 1) {
            CHECK(e.k == 1);
            CHECK(e.root == 3);  // 3^2 - 3 - 1 == 5 == 0 mod 5
            CHECK((e.root * e.root - e.root - 1) % e.p == 0);
            CHECK(powm(e.root, mpz_class(1) << e.k, e.p) == e.p - 1);
        } else {
            CHECK(e.root == e.p);  // the class of t, encoded base p as 0 + 1*p
            // Recheck t^{2^k} == -1 in F_p[t]/(t^2 - t - 1).
            mpz_class c0 = (-1 % e.p + e.p) % e.p, c1 = c0;
            detail::Fp2Modulus M{e.p, c0, c1};
            detail::Fp2 t{mpz_class(0), mpz_class(1)};
            detail::Fp2 pw = detail::fp2_pow(t, mpz_class(1) << e.k, M);
            CHECK(pw.a == e.p - 1);
            CHECK(pw.b == 0);
        }
    }
}

TEST_CASE("algebraic towers for linear and quadratic inputs", "[primes][towers]") {
    // f = x - 2 reproduces the integer tower for q = 2.
    Tower tw = algebraic_tower({-2, 1}, 2);
    REQUIRE(tw.entries.size() == 2);
    CHECK(tw.entries[0].p == 5);
    CHECK(tw.entries[0].root == 2);
    CHECK(tw.entries[0].order == 4);
    CHECK(tw.entries[1].p == 17);
    CHECK(tw.entries[1].root == 2);
    CHECK(tw.entries[1].order == 8);

    // f = 2x - 1: q = 1/2, roots are modular inverses of 2.
    tw = algebraic_tower({-1, 2}, 2);
    REQUIRE(tw.entries.size() == 2);
    CHECK(tw.entries[0].p == 5);
    CHECK(tw.entries[0].root == 3);  // 2 * 3 == 1 mod 5
    CHECK(tw.entries[0].order == 4);
    CHECK(tw.entries[1].p == 17);
    CHECK(tw.entries[1].root == 9);  // 2 * 9 == 1 mod 17
    CHECK(tw.entries[1].order == 8);

    // f = x^2 - 2: irreducible mod 3 and mod 5, so both levels live in F_p^2.
    tw = algebraic_tower({-2, 0, 1}, 2);
    REQUIRE(tw.entries.size() == 2);
    CHECK(tw.entries[0].p == 3);
    CHECK(tw.entries[0].d == 2);
    CHECK(tw.entries[0].order == 4);
    CHECK(tw.entries[1].p == 5);
    CHECK(tw.entries[1].d == 2);
    CHECK(tw.entries[1].order == 8);
    CHECK(tw.sources[0].second == 9);
    CHECK(tw.sources[1].second == 25);
}

TEST_CASE("algebraic tower rejections", "[primes][towers]") {
    using V = std::vector<mpz_class>;
    // x^2 + 1: q = i is a 4th root of unity; the k=1 resultant vanishes.
    CHECK_THROWS_AS(algebraic_tower(V{1, 0, 1}, 3), DomainError);
    // x^4 + 1: 8th root of unity; caught at k=2.
    CHECK_THROWS_AS(algebraic_tower(V{1, 0, 0, 0, 1}, 3), DomainError);
    // f(0) = 0.
    CHECK_THROWS_AS(algebraic_tower(V{0, 1}, 2), DomainError);
    // Rational root (x^2 - 4).
    CHECK_THROWS_AS(algebraic_tower(V{-4, 0, 1}, 2), DomainError);
    // Perfect-square discriminant (x^2 - 5x + 6 = (x-2)(x-3)).
    CHECK_THROWS_AS(algebraic_tower(V{6, -5, 1}, 2), DomainError);
    // Not squarefree: (x^2+x+1)^2 has no rational roots but repeated factors.
    CHECK_THROWS_AS(algebraic_tower(V{1, 2, 3, 2, 1}, 2), DomainError);
    // Constant / empty.
    CHECK_THROWS_AS(algebraic_tower(V{5}, 2), DomainError);
    CHECK_THROWS_AS(algebraic_tower(V{}, 2), DomainError);
    // Guard rails on k_max.
    CHECK_THROWS_AS(algebraic_tower(V{-1, -1, 1}, 0), GuardError);
    CHECK_THROWS_AS(algebraic_tower(V{-1, -1, 1}, 13), GuardError);
}

TEST_CASE("tower serialization: CSV rows and JSON certificates", "[primes][towers]") {
    Tower tw = integer_tower(3, 2);
    CHECK(tower_csv(tw) == "k,p,d,root,order\n1,5,1,3,4\n2,41,1,3,8\n");

    auto j = nlohmann::json::parse(tower_json(tw));
    CHECK(j["label"] == "q = 3");
    CHECK(j["polynomial"].empty());
    REQUIRE(j["entries"].size() == 2);
    CHECK(j["entries"][0]["k"] == 1);
    CHECK(j["entries"][0]["p"] == "5");
    CHECK(j["entries"][0]["d"] == 1);
    CHECK(j["entries"][0]["root"] == "3");
    CHECK(j["entries"][0]["order"] == "4");
    CHECK(j["entries"][0]["source"] == "10");
    CHECK(j["entries"][1]["p"] == "41");
    CHECK(j["entries"][1]["source"] == "82");
    REQUIRE(j["sources"].size() == 2);
    CHECK(j["sources"][0]["k"] == 1);
    CHECK(j["sources"][0]["value"] == "10");
    CHECK(j["notes"].empty());

    Tower at = algebraic_tower({-1, -1, 1}, 1);
    auto ja = nlohmann::json::parse(tower_json(at));
    CHECK(ja["label"] == "f = x^2 - x - 1");
    REQUIRE(ja["polynomial"].size() == 3);
    CHECK(ja["polynomial"][0] == "-1");
    CHECK(ja["polynomial"][2] == "1");
    CHECK(ja["entries"][0]["p"] == "5");
}
