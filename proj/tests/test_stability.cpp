#include <catch2/catch_amalgamated.hpp>

#include "tlkit/stability.hpp"

#include <string>
#include <vector>

#include <json.hpp>

using namespace tlkit;

namespace {

long value_at(const StabilizationReport& rep, unsigned kappa) {
    for (const auto& [k, v] : rep.values)
        if (k == kappa) return v;
    FAIL("kappa " << kappa << " not in report");
    return -1;
}

/// The type invariant: "stable" means every tested kappa >= threshold sits
/// exactly at the generic value.
void check_stable_suffix(const StabilizationReport& rep) {
    REQUIRE(rep.verdict == "stable");
    REQUIRE(rep.threshold >= 0);
    bool seen = false;
    for (const auto& [k, v] : rep.values)
        if (static_cast<int>(k) >= rep.threshold) {
            CHECK(v == rep.generic_value);
            seen = true;
        }
    CHECK(seen);
}

}  // namespace

TEST_CASE("hom dimension profile stabilizes to the Catalan numbers", "[stability]") {
    StabilizationReport rep = hom_dim_profile(3);
    CHECK(rep.quantity == "hom_dim_profile");
    CHECK(rep.window == "n = 3");
    CHECK(rep.generic_value == 5);
    CHECK(rep.threshold == 5);
    CHECK(value_at(rep, 2) == 0);
    CHECK(value_at(rep, 3) == 1);
    CHECK(value_at(rep, 4) == 4);
    CHECK(value_at(rep, 5) == 5);
    CHECK(value_at(rep, 40) == 5);
    check_stable_suffix(rep);

    rep = hom_dim_profile(0);
    CHECK(rep.generic_value == 1);
    CHECK(rep.threshold == 2);
    for (const auto& [k, v] : rep.values) CHECK(v == 1);

    rep = hom_dim_profile(2);
    CHECK(rep.generic_value == 2);
    CHECK(rep.threshold == 4);
    CHECK(value_at(rep, 3) == 1);

    const std::vector<long> catalan{1, 1, 2, 5, 14, 42, 132, 429};
    for (int n = 0; n <= 7; ++n) {
        rep = hom_dim_profile(n);
        CHECK(rep.generic_value == catalan[static_cast<std::size_t>(n)]);
        const int want_threshold = n == 0 ? 2 : (n == 1 ? 3 : n + 2);
        CHECK(rep.threshold == want_threshold);
        CHECK(rep.threshold <= n + 2);
        CHECK(rep.note == kStabilitySurrogateNote);
        check_stable_suffix(rep);
    }
}

TEST_CASE("hom dimension profile reports honest non-stabilization", "[stability]") {
    // Below the onset kappa = 8 the n = 6 profile never reaches C_6 = 132.
    StabilizationReport rep = hom_dim_profile(6, 6);
    CHECK(rep.verdict == "not stabilized");
    CHECK(rep.threshold == -1);

    CHECK_THROWS_AS(hom_dim_profile(-1), DomainError);
    CHECK_THROWS_AS(hom_dim_profile(8), GuardError);
    CHECK_THROWS_AS(hom_dim_profile(3, 2), GuardError);
    CHECK_THROWS_AS(hom_dim_profile(3, 41), GuardError);
}

TEST_CASE("fusion windows stabilize exactly at r + 2", "[stability]") {
    StabilizationReport rep = fusion_stability(4);
    CHECK(rep.generic_value == 15);
    CHECK(rep.threshold == 6);
    CHECK(value_at(rep, 2) == 1);
    CHECK(value_at(rep, 3) == 3);
    CHECK(value_at(rep, 4) == 6);
    CHECK(value_at(rep, 5) == 10);
    CHECK(value_at(rep, 6) == 15);
    check_stable_suffix(rep);

    for (int r = 0; r <= 6; ++r) {
        rep = fusion_stability(r);
        CHECK(rep.generic_value == (r + 1) * (r + 2) / 2);
        CHECK(rep.threshold == r + 2);  // the exact boundary of the branch condition
        check_stable_suffix(rep);
    }

    CHECK_THROWS_AS(fusion_stability(-1), DomainError);
    CHECK_THROWS_AS(fusion_stability(7), GuardError);
    CHECK_THROWS_AS(fusion_stability(4, 41), GuardError);
}

TEST_CASE("center label windows agree with both center tables", "[stability]") {
    StabilizationReport rep = center_label_agree(3);
    CHECK(rep.window == "i + i' <= 3, j + j' <= 3");
    CHECK(rep.generic_value == 100);
    CHECK(rep.threshold == 5);
    CHECK(value_at(rep, 2) == 1);
    CHECK(value_at(rep, 3) == 9);
    CHECK(value_at(rep, 4) == 36);
    CHECK(value_at(rep, 5) == 100);
    CHECK(value_at(rep, 40) == 100);
    check_stable_suffix(rep);

    const std::vector<long> tuple_counts{1, 9, 36, 100, 225};
    for (int r = 0; r <= 4; ++r) {
        rep = center_label_agree(r);
        CHECK(rep.generic_value == tuple_counts[static_cast<std::size_t>(r)]);
        CHECK(rep.threshold == r + 2);
        check_stable_suffix(rep);
    }

    CHECK_THROWS_AS(center_label_agree(-1), DomainError);
    CHECK_THROWS_AS(center_label_agree(5), GuardError);
    CHECK_THROWS_AS(center_label_agree(2, 2), GuardError);
}

TEST_CASE("stability reports serialize to text tables and JSON", "[stability]") {
    StabilizationReport rep = fusion_stability(2, 8);
    std::string text = stability_text(rep);
    CHECK(text.find("fusion_stability (i + j <= 2)") != std::string::npos);
    CHECK(text.find("generic value: 6") != std::string::npos);
    CHECK(text.find("stable from kappa = 4") != std::string::npos);
    CHECK(text.find("kappa  value") != std::string::npos);
    // One row per kappa: 2..8.
    std::size_t rows = 0;
    for (unsigned k = 2; k <= 8; ++k)
        if (text.find("\n" + std::to_string(k) + "  ") != std::string::npos) ++rows;
    CHECK(rows == 7);

    auto j = nlohmann::json::parse(stability_json(rep));
    CHECK(j["quantity"] == "fusion_stability");
    CHECK(j["generic_value"] == 6);
    CHECK(j["threshold"] == 4);
    CHECK(j["verdict"] == "stable");
    REQUIRE(j["values"].size() == 7);
    CHECK(j["values"][0]["kappa"] == 2);
    CHECK(j["values"][0]["value"] == 1);
    CHECK(j["values"][6]["kappa"] == 8);
    CHECK(j["values"][6]["value"] == 6);
    CHECK(j["note"] == kStabilitySurrogateNote);
}
