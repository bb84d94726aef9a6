#include "pgonal/species.hpp"

#include "pgonal/recipe.hpp"

#include <doctest.h>

using namespace pgonal;

namespace {

int designated_sigma(const SurfaceKernelEpi& epi) {
    return epi.target->table.named_element("s");
}

} // namespace

TEST_CASE("species of the explicit constructions") {
    CHECK(species(theta1(3, 5), designated_sigma(theta1(3, 5))).str() == "-1");
    CHECK(species(theta2(3, 4), designated_sigma(theta2(3, 4))).str() == "+1");
    {
        SurfaceKernelEpi epi = theta3(3, 4, ThetaTarget::Dp);
        CHECK(species(epi, designated_sigma(epi)).str() == "-3");
    }
    {
        SurfaceKernelEpi epi = theta3(3, 4, ThetaTarget::C2p);
        CHECK(species(epi, designated_sigma(epi)).str() == "+3");
    }
    {
        SurfaceKernelEpi epi = theta3(3, 4, ThetaTarget::C2p, "r");
        CHECK(species(epi, designated_sigma(epi)).str() == "+1");
    }
}

TEST_CASE("species value encoding") {
    SpeciesResult none;
    CHECK(none.value() == 0);
    CHECK(none.str() == "0");
    SpeciesResult plus{3, SpeciesSign::Plus};
    CHECK(plus.value() == 3);
    SpeciesResult minus{1, SpeciesSign::Minus};
    CHECK(minus.value() == -1);
}

TEST_CASE("coset-graph sign test") {
    SurfaceKernelEpi t2 = theta2(3, 4);
    CHECK(schreier_sign_test(t2, designated_sigma(t2)) == SpeciesSign::Plus);

    SurfaceKernelEpi t1 = theta1(3, 5);
    CHECK(schreier_sign_test(t1, designated_sigma(t1)) == SpeciesSign::Minus);

    // a single reflection image with nontrivial elliptic images: the quotient
    // is non-orientable (species -p), and the graph parity agrees
    SurfaceKernelEpi t3 = theta3(3, 4, ThetaTarget::Dp);
    CHECK(schreier_sign_test(t3, designated_sigma(t3)) == SpeciesSign::Minus);

    SurfaceKernelEpi c = theta3(3, 4, ThetaTarget::C2p);
    CHECK_THROWS_AS(schreier_sign_test(c, designated_sigma(c)), std::domain_error);
}

TEST_CASE("coset graph structure") {
    SurfaceKernelEpi t2 = theta2(3, 4);
    SchreierGraph graph = schreier_graph(t2, designated_sigma(t2));
    CHECK(graph.vertices == 3); // |D_3| / |<s>|
    CHECK(graph.edges.size() == t2.pres->generators.size() * 3);
    int reversing = 0;
    for (const auto& e : graph.edges)
        if (e.reversing) ++reversing;
    CHECK(reversing == 7 * 3); // the seven reflections contribute reversing edges
}

TEST_CASE("allowed species table") {
    CHECK(allowed_species(3, 5) == std::set<long long>{-1, -3});
    CHECK(allowed_species(3, 6) == std::set<long long>{1, -1, 3, -3});
    CHECK(allowed_species(5, 17) == std::set<long long>{-1, -5});
    CHECK_THROWS_AS(allowed_species(3, 4), std::domain_error);
}

TEST_CASE("species input validation") {
    SurfaceKernelEpi epi = theta1(3, 5);
    SUBCASE("sigma must be an anticonformal involution") {
        CHECK_THROWS_AS(species(epi, epi.target->table.named_element("r")), std::domain_error);
        CHECK_THROWS_AS(species(epi, epi.target->id()), std::domain_error);
    }
    SUBCASE("targets beyond order 2p are rejected") {
        GroupRecipe r;
        r.group = dihedral_recipe(15, "fh", "s");
        r.anticonformal = {"s"};
        r.phi_word = "fh^5";
        auto big = std::make_shared<SignedGroup>(realize(r));
        SurfaceKernelEpi fake = epi;
        fake.target = big;
        CHECK_THROWS_AS(species(fake, big->table.named_element("s")), std::domain_error);
    }
}

TEST_CASE("exhaustive sweep at genus five") {
    SweepReport report = verify_theorem2(3, 5);
    CHECK(report.findings.empty());
    CHECK(!report.records.empty());
    CHECK(report.species_seen == std::set<long long>{-1});
    for (const auto& rec : report.records) CHECK(rec.consistent);
    CHECK_THROWS_AS(verify_theorem2(3, 4), std::domain_error);
}

TEST_CASE("exhaustive sweep at genus six") {
    SweepReport report = verify_theorem2(3, 6);
    CHECK(report.findings.empty());
    CHECK(report.species_seen == std::set<long long>{-3, -1, 1, 3});
    for (const auto& rec : report.records) {
        CHECK(rec.consistent);
        CHECK((rec.result.ovals == 1 || rec.result.ovals == 3));
        if (rec.target == "C_2p") CHECK(rec.result.sign == SpeciesSign::Plus);
        if (rec.target == "D_p") {
            int sigma = rec.epi.target->table.named_element("s");
            CHECK(schreier_sign_test(rec.epi, sigma) == rec.result.sign);
        }
    }
}

TEST_CASE("species is conjugation invariant in the designated symmetry") {
    SweepReport report = verify_theorem2(3, 6);
    for (const auto& rec : report.records) {
        SpeciesResult base = rec.result;
        for (int sigma : anticonformal_involutions(*rec.epi.target))
            CHECK(species(rec.epi, sigma) == base);
    }
}

TEST_CASE("species stay inside the allowed sets across a genus range") {
    for (long long g = 5; g <= 10; ++g) {
        SweepReport report = verify_theorem2(3, g);
        CHECK(report.findings.empty());
        std::set<long long> allowed = allowed_species(3, g);
        for (long long v : report.species_seen) CHECK(allowed.count(v) == 1);
        if (g % 2 == 1) {
            // only the one-oval non-separating value shows up at odd genus
            CHECK(report.species_seen == std::set<long long>{-1});
        } else {
            CHECK(report.species_seen == std::set<long long>{-3, -1, 1, 3});
        }
    }
}

TEST_CASE("sweep report serialization is stable") {
    SweepReport a = verify_theorem2(3, 5);
    SweepReport b = verify_theorem2(3, 5);
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.render_text() == b.render_text());
    CHECK(a.render_text().find("findings: 0") != std::string::npos);
}
