#include "pgonal/classifier.hpp"

#include "pgonal/family.hpp"

#include <doctest.h>

#include <fstream>
#include <set>

using namespace pgonal;

namespace {

SignedGroup realize_case(const std::string& id, int p, int q = 0) {
    CaseParams cp;
    cp.p = p;
    if (q > 0) cp.q = q;
    return realize(make_case(id, cp).recipe);
}

} // namespace

TEST_CASE("pair types") {
    SignedGroup d15 = realize_case("1b", 3, 5);
    CHECK(pair_type(d15, d15.table.named_element("s")) == PairType::Dp);

    SignedGroup c30 = realize_case("1a", 3, 5);
    CHECK(pair_type(c30, c30.table.named_element("s")) == PairType::C2p);

    CaseParams cp;
    cp.p = 3;
    cp.q = 3;
    cp.i = 1;
    SignedGroup g3bc = realize(make_case("3b-c", cp).recipe);
    CHECK(pair_type(g3bc, g3bc.table.named_element("s")) == PairType::C2p);

    CHECK_THROWS_AS(pair_type(c30, c30.phi), std::domain_error);
}

TEST_CASE("classify symmetries") {
    SUBCASE("abelian order 30: a single class fixing everything") {
        SignedGroup g = realize_case("1a", 3, 5);
        auto classes = classify_symmetries(g);
        REQUIRE(classes.size() == 1);
        CHECK(classes[0].pair == PairType::C2p);
        CHECK(classes[0].n_sigma.order() == 30);
        CHECK(classes[0].n_phi_sigma.order() == 30);
    }
    SUBCASE("order 12: two singleton classes") {
        SignedGroup g = realize_case("1a", 3, 2);
        auto classes = classify_symmetries(g);
        REQUIRE(classes.size() == 2);
        for (const auto& cls : classes) CHECK(cls.members.size() == 1);
    }
    SUBCASE("dihedral order 30: one class of fifteen reflections") {
        SignedGroup g = realize_case("1b", 3, 5);
        auto classes = classify_symmetries(g);
        REQUIRE(classes.size() == 1);
        CHECK(classes[0].members.size() == 15);
        CHECK(classes[0].pair == PairType::Dp);
        CHECK(classes[0].n_sigma.order() == 2);
        CHECK(classes[0].n_phi_sigma.order() == 6);
        CHECK(classes[0].n_phi_sigma_family == "D[3]");
    }
    SUBCASE("pair type is constant on classes and classes partition the involutions") {
        for (int q : {2, 3, 4}) {
            SignedGroup g = realize_case("1b", 3, q);
            auto classes = classify_symmetries(g);
            size_t total = 0;
            for (const auto& cls : classes) {
                total += cls.members.size();
                for (int m : cls.members)
                    CHECK(pair_type(g, m) == cls.pair);
            }
            CHECK(total == anticonformal_involutions(g).size());
        }
    }
    SUBCASE("a group with no anticonformal involutions reports zero classes") {
        GroupRecipe r; // C5 x C4 with the order-4 generator anticonformal: no involution has w = -1
        r.group = direct_recipe(cyclic_recipe(5, "f"), cyclic_recipe(4, "s"));
        r.anticonformal = {"s"};
        r.phi_word = "f";
        SignedGroup g = realize(r);
        CHECK(classify_symmetries(g).empty());
    }
}

TEST_CASE("ledger loading") {
    auto entries = ledger_entries();
    CHECK(entries.size() == 22);
    std::set<std::string> ids;
    for (const auto& e : entries) {
        ids.insert(e.id);
        CHECK(!e.claim_sets.empty());
        CHECK(!e.note.empty());
    }
    CHECK(ids.size() == 22);
    for (const char* id :
         {"1a", "1b", "2a", "2b", "2c", "3a", "3b-a", "3b-b", "3b-c", "4a", "4b-a", "4b-b",
          "4b-c", "4c-a", "4c-c", "5a", "5b", "5c", "5d", "E1", "E2", "E3"})
        CHECK(ids.count(id) == 1);
    CHECK(find_entry(entries, "2c").id == "2c");
    CHECK_THROWS_AS(find_entry(entries, "9z"), std::domain_error);
}

TEST_CASE("ledger file errors") {
    CHECK_THROWS_AS(ledger_entries("/nonexistent/ledger.json"), std::runtime_error);
    std::string tmp = "/tmp/pgonal_bad_ledger.json";
    {
        std::ofstream out(tmp);
        out << "{\"entries\": [{\"id\": \"x\", \"claims\": [{\"count\": 2, \"classes\": "
               "[{\"rep\": \"s\", \"family\": \"G\"}]}]}]}";
    }
    CHECK_THROWS_AS(ledger_entries(tmp), std::runtime_error); // count != classes
    {
        std::ofstream out(tmp);
        out << "this is not json";
    }
    CHECK_THROWS_AS(ledger_entries(tmp), std::runtime_error);
}

TEST_CASE("verify hand-checked cases") {
    auto entries = ledger_entries();

    SUBCASE("order-30 abelian case, one class") {
        CaseParams cp;
        cp.p = 3;
        cp.q = 5;
        CaseReport report = verify_case(find_entry(entries, "1a"), cp);
        CHECK(report.error.empty());
        CHECK(report.mismatches() == 0);
        REQUIRE(!report.claims.empty());
        CHECK(report.claims[0].kind == "class_count");
        CHECK(report.claims[0].expected == "1");
    }
    SUBCASE("order-12 abelian case, two classes") {
        CaseParams cp;
        cp.p = 3;
        cp.q = 2;
        CaseReport report = verify_case(find_entry(entries, "1a"), cp);
        CHECK(report.error.empty());
        CHECK(report.mismatches() == 0);
        CHECK(report.claims[0].expected == "2");
    }
    SUBCASE("dihedral case matches through the pair normalizer") {
        CaseParams cp;
        cp.p = 3;
        cp.q = 5;
        CaseReport report = verify_case(find_entry(entries, "1b"), cp);
        CHECK(report.error.empty());
        CHECK(report.mismatches() == 0);
        bool found = false;
        for (const auto& claim : report.claims)
            if (claim.kind == "normalizer") {
                CHECK(claim.via == "N(<phi,sigma>)");
                found = true;
            }
        CHECK(found);
    }
    SUBCASE("product case exposes the documented normalizer discrepancy") {
        CaseParams cp;
        cp.p = 3;
        cp.q = 3;
        CaseReport report = verify_case(find_entry(entries, "2a"), cp);
        CHECK(report.error.empty());
        CHECK(report.claims[0].kind == "class_count");
        CHECK(report.claims[0].match);
        CHECK(report.claims[0].expected == "2");
        int mismatched_normalizers = 0;
        for (const auto& claim : report.claims)
            if (claim.kind == "normalizer" && !claim.match) {
                ++mismatched_normalizers;
                CHECK(claim.subject == "s*rho");
                CHECK(claim.witness.find("order 12") != std::string::npos);
            }
        CHECK(mismatched_normalizers == 1);
        bool witness_order_12 = false;
        for (const auto& cls : report.classes)
            if (cls.n_phi_sigma_order == 12) witness_order_12 = true;
        CHECK(witness_order_12);
    }
    SUBCASE("unknown parameters are rejected as inadmissible") {
        CaseParams cp;
        cp.p = 3;
        cp.q = 4; // case 2a needs odd q
        CaseReport report = verify_case(find_entry(entries, "2a"), cp);
        CHECK(!report.error.empty());
    }
}

TEST_CASE("parameter enumeration honours the case constraints") {
    auto tuples_2a = enumerate_case_params("2a", {3}, 6);
    for (const auto& t : tuples_2a) CHECK(*t.q % 2 == 1);
    CHECK(tuples_2a.size() == 2); // q in {3, 5}

    auto tuples_4bc = enumerate_case_params("4b-c", {3}, 6);
    for (const auto& t : tuples_4bc) {
        CHECK(*t.q % 2 == 0);
        CaseRealization r = make_case("4b-c", t); // must stay admissible
        CHECK(r.env.count("q2"));
    }

    auto tuples_e2 = enumerate_case_params("E2", {3, 5}, 6);
    REQUIRE(tuples_e2.size() == 2); // p = 7, both nontrivial cube roots
    for (const auto& t : tuples_e2) {
        CHECK(t.p == 7);
        CHECK((t.i == 2 || t.i == 4));
    }

    // inverting the rotation needs i^2 = 1, so order-4 exponents are dropped
    auto tuples_3bb = enumerate_case_params("3b-b", {5}, 4);
    for (const auto& t : tuples_3bb) CHECK((*t.i == 1 || *t.i == 4));
}

TEST_CASE("verify-all is deterministic across worker counts") {
    auto entries = ledger_entries();
    VerifyBudget one;
    one.ps = {3};
    one.q_max = 3;
    one.jobs = 1;
    VerifyBudget four = one;
    four.jobs = 4;
    VerificationReport a = verify_all(entries, one);
    VerificationReport b = verify_all(entries, four);
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.render_text() == b.render_text());
    CHECK(a.errors == 0);
    CHECK(a.total_claims == a.matches + a.mismatch_count);
}

TEST_CASE("an empty budget yields an empty report") {
    auto entries = ledger_entries();
    VerifyBudget budget;
    budget.ps = {};
    budget.q_max = 0;
    VerificationReport report = verify_all(entries, budget);
    CHECK(report.cases.empty());
    CHECK(report.total_claims == 0);
}

TEST_CASE("every mismatch carries a witness") {
    auto entries = ledger_entries();
    VerifyBudget budget;
    budget.ps = {3};
    budget.q_max = 4;
    budget.jobs = 4;
    VerificationReport report = verify_all(entries, budget);
    for (const auto& c : report.cases)
        for (const auto& claim : c.claims)
            if (!claim.match) CHECK(!claim.witness.empty());
}
