#include <catch2/catch_amalgamated.hpp>

#include "tlkit/fusiondata.hpp"

#include <json.hpp>

#include <string>
#include <vector>

using namespace tlkit;

namespace {

int nval(const FusionRing& R, int m, int n, int k) {
    return R.N[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

}  // namespace

TEST_CASE("fusion frozen examples", "[fusiondata]") {
    REQUIRE(fusion(2, 3, 0) == std::vector<int>{1, 3, 5});
    for (unsigned kappa = 4; kappa <= 9; ++kappa)
        REQUIRE(fusion(1, static_cast<int>(kappa) - 2, kappa) ==
                std::vector<int>{static_cast<int>(kappa) - 3});
    for (unsigned kappa : {0u, 3u, 5u, 8u}) {
        int top = kappa == 0 ? 6 : static_cast<int>(kappa) - 2;
        for (int n = 0; n <= top; ++n) REQUIRE(fusion(0, n, kappa) == std::vector<int>{n});
    }
    REQUIRE_THROWS_AS(fusion(3, 0, 4), DomainError);   // label > kappa - 2
    REQUIRE_THROWS_AS(fusion_ring(2), DomainError);
}

TEST_CASE("fusion ring invariants: symmetry, unit, 0/1, associativity", "[fusiondata]") {
    for (unsigned kappa = 3; kappa <= 10; ++kappa) {
        FusionRing R = fusion_ring(kappa);
        const int L = static_cast<int>(kappa) - 1;
        REQUIRE(static_cast<int>(R.labels.size()) == L);
        for (int m = 0; m < L; ++m)
            for (int n = 0; n < L; ++n)
                for (int k = 0; k < L; ++k) {
                    REQUIRE((nval(R, m, n, k) == 0 || nval(R, m, n, k) == 1));
                    REQUIRE(nval(R, m, n, k) == nval(R, n, m, k));
                    REQUIRE(nval(R, 0, n, k) == (n == k ? 1 : 0));
                }
        for (int m = 0; m < L; ++m)
            for (int n = 0; n < L; ++n)
                for (int l = 0; l < L; ++l)
                    for (int r = 0; r < L; ++r) {
                        int lhs = 0, rhs = 0;
                        for (int k = 0; k < L; ++k) {
                            lhs += nval(R, m, n, k) * nval(R, k, l, r);
                            rhs += nval(R, n, l, k) * nval(R, m, k, r);
                        }
                        REQUIRE(lhs == rhs);
                    }
    }
}

TEST_CASE("modular data frozen values at kappa = 3", "[fusiondata]") {
    CycloDomain dom = modular_domain(3);
    REQUIRE(dom.M == 12u);
    auto bu = braiding_units(dom);
    REQUIRE(bu.units.size() == 4);
    ModularData md = modular_data(3, bu.units[0]);

    REQUIRE(md.S.at(0, 0) == dom.one());
    REQUIRE(md.S.at(0, 1) == dom.from_int(-1));
    REQUIRE(md.S.at(1, 0) == dom.from_int(-1));
    REQUIRE(md.S.at(1, 1) == dom.from_int(-1));
    REQUIRE(determinant(md.S, dom.zero(), dom.one()) == dom.from_int(-2));
    REQUIRE(md.T[0] == dom.one());

    // theta_1 = (-a)^3 depends on the unit; recompute directly.
    NFElem minus_a = dom.zero() - bu.units[0];
    REQUIRE(md.T[1] == minus_a * minus_a * minus_a);

    REQUIRE_THROWS_AS(modular_data(3, dom.q()), DomainError);  // q is not a unit
    REQUIRE_THROWS_AS(modular_data(2, dom.one()), DomainError);
}

TEST_CASE("S-matrix symmetry and s_{0,n} row", "[fusiondata]") {
    for (unsigned kappa = 3; kappa <= 8; ++kappa) {
        CycloDomain dom = modular_domain(kappa);
        auto bu = braiding_units(dom);
        const int L = static_cast<int>(kappa) - 1;
        for (const auto& a : bu.units) {
            ModularData md = modular_data(kappa, a);
            for (int m = 0; m < L; ++m)
                for (int n = 0; n < L; ++n) REQUIRE(md.S.at(m, n) == md.S.at(n, m));
            for (int n = 0; n < L; ++n) {
                NFElem expect = qint(n + 1, dom);
                if (n % 2 == 1) expect = dom.zero() - expect;
                REQUIRE(md.S.at(0, n) == expect);
            }
        }
    }
}

TEST_CASE("check_modular across kappa and a synthetic degenerate S", "[fusiondata]") {
    for (unsigned kappa = 3; kappa <= 12; ++kappa) {
        CycloDomain dom = modular_domain(kappa);
        ModularData md = modular_data(kappa, braiding_units(dom).units[0]);
        REQUIRE(check_modular(md));
    }
    CycloDomain dom = modular_domain(4);
    ModularData md = modular_data(4, braiding_units(dom).units[0]);
    for (int n = 0; n < 3; ++n) md.S.at(1, n) = md.S.at(0, n);  // duplicate a row
    REQUIRE_FALSE(check_modular(md));
}

TEST_CASE("Verlinde: S columns diagonalize every fusion matrix", "[fusiondata]") {
    for (unsigned kappa = 3; kappa <= 8; ++kappa) {
        CycloDomain dom = modular_domain(kappa);
        ModularData md = modular_data(kappa, braiding_units(dom).units[0]);
        FusionRing R = fusion_ring(kappa);
        const int L = static_cast<int>(kappa) - 1;
        for (int j = 0; j < L; ++j) {
            NFElem s0j_inv = md.S.at(0, j).inv();
            for (int m = 0; m < L; ++m) {
                NFElem eig = md.S.at(m, j) * s0j_inv;
                for (int k = 0; k < L; ++k) {
                    NFElem lhs = dom.zero();
                    for (int n = 0; n < L; ++n)
                        if (nval(R, m, n, k)) lhs = lhs + md.S.at(n, j);
                    REQUIRE(lhs == eig * md.S.at(k, j));
                }
            }
        }
    }
}

TEST_CASE("quantum dimensions from the diagram category match s_{0,n}", "[fusiondata]") {
    for (unsigned kappa = 3; kappa <= 8; ++kappa) {
        CycloDomain dom = modular_domain(kappa);
        ModularData md = modular_data(kappa, braiding_units(dom).units[0]);
        for (int n = 0; n <= static_cast<int>(kappa) - 2; ++n) {
            Morphism<CycloDomain> e = n == 0 ? identity_morphism(dom, Mode::Generic, 0)
                                             : jones_wenzl(n, dom);
            // Minus convention: qtrace = s_{0,n}/s_{0,0}; equivalently the
            // Plus convention gives (-1)^n s_{0,n}/s_{0,0} = [n+1]_q.
            REQUIRE(qtrace(e) == md.S.at(0, n));
            NFElem plus = md.S.at(0, n);
            if (n % 2 == 1) plus = dom.zero() - plus;
            REQUIRE(qtrace(e, SphericalConvention::Plus) == plus);
        }
    }
}

TEST_CASE("transparent simples: only the unit, by twist ratios and S-matrix", "[fusiondata]") {
    for (unsigned kappa = 3; kappa <= 8; ++kappa) {
        CycloDomain dom = modular_domain(kappa);
        for (const auto& a : braiding_units(dom).units) {
            REQUIRE(transparent_simples(kappa, a) == std::vector<int>{0});
            ModularData md = modular_data(kappa, a);
            REQUIRE(transparent_simples_smatrix(md) == std::vector<int>{0});
        }
    }

    // The (-1)^n twist-ratio obstruction at m = kappa - 2 with n = 1:
    // theta_{k}/(theta_m theta_1) = -1 for k = kappa - 3.
    unsigned kappa = 5;
    CycloDomain dom = modular_domain(kappa);
    ModularData md = modular_data(kappa, braiding_units(dom).units[0]);
    int m = static_cast<int>(kappa) - 2, k = m - 1;
    NFElem ratio = md.T[static_cast<std::size_t>(k)] *
                   (md.T[static_cast<std::size_t>(m)] * md.T[1]).inv();
    REQUIRE(ratio == dom.from_int(-1));
}

TEST_CASE("fusiondata serialization", "[fusiondata]") {
    FusionRing R3 = fusion_ring(3);
    REQUIRE(fusion_csv(R3) == "m,n,k,mult\n0,0,0,1\n0,1,1,1\n1,0,1,1\n1,1,0,1\n");

    CycloDomain dom = modular_domain(3);
    NFElem a = braiding_units(dom).units[0];
    std::string doc = fusion_json_doc(3, a);
    auto j = nlohmann::json::parse(doc);
    REQUIRE(j["kappa"] == 3);
    REQUIRE(j["labels"] == nlohmann::json({0, 1}));
    REQUIRE(j["modular"] == true);
    REQUIRE(j["transparent"] == nlohmann::json({0}));
    REQUIRE(j["S"].size() == 2);
    REQUIRE(j["T"].size() == 2);
    REQUIRE(j["fusion"][1][1] == nlohmann::json({1, 0}));
    REQUIRE(fusion_json_doc(3, a) == doc);  // deterministic

    ModularData md = modular_data(3, a);
    std::string csv = smatrix_csv(md);
    REQUIRE(csv.find("\n") != std::string::npos);
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 2);
}
