#include "pgonal/family.hpp"
#include "pgonal/group.hpp"
#include "pgonal/recipe.hpp"

#include <doctest.h>

#include <random>

using namespace pgonal;

namespace {

SignedGroup d15() {
    GroupRecipe r;
    r.group = dihedral_recipe(15, "fh", "s");
    r.anticonformal = {"s"};
    r.phi_word = "fh^5";
    return realize(r);
}

SignedGroup c15xc2() {
    GroupRecipe r;
    r.group = direct_recipe(cyclic_recipe(15, "fh"), cyclic_recipe(2, "s"));
    r.anticonformal = {"s"};
    r.phi_word = "fh^5";
    return realize(r);
}

} // namespace

TEST_CASE("realize the abelian order-30 group") {
    SignedGroup g = c15xc2();
    CHECK(g.n() == 30);
    CHECK(g.p == 3);
    int conformal = 0;
    for (int x = 0; x < g.n(); ++x)
        if (g.w[x] == 1) ++conformal;
    CHECK(conformal == 15);
    auto inv = anticonformal_involutions(g);
    REQUIRE(inv.size() == 1);
    CHECK(inv[0] == g.table.named_element("s"));
}

TEST_CASE("realize the dihedral order-30 group") {
    SignedGroup g = d15();
    CHECK(g.n() == 30);
    CHECK(element_order(g, g.phi) == 3);
    CHECK(anticonformal_involutions(g).size() == 15);
    CHECK(g.word(g.mul(g.table.named_element("fh"), g.table.named_element("s"))) == "fh*s");

    Subgroup h = subgroup_generated(g, {g.phi, g.table.named_element("s")});
    CHECK(h.order() == 6);
    CHECK(normalizer(g, h) == h);
    CHECK(is_normal(g, subgroup_generated(g, {g.phi})));
    CHECK(!is_normal(g, subgroup_generated(g, {g.table.named_element("s")})));

    Subgroup rot = centralizer(g, {g.table.named_element("fh")});
    CHECK(rot.order() == 15);
    CHECK(centralizer(g, {g.id()}).order() == 30);
}

TEST_CASE("element orders") {
    SignedGroup g = d15();
    CHECK(element_order(g, g.id()) == 1);
    CHECK(element_order(g, g.table.named_element("fh")) == 15);
    CHECK(element_order(g, g.table.named_element("s")) == 2);
    CHECK(g.table.power(g.table.named_element("fh"), -1) ==
          g.inv(g.table.named_element("fh")));
}

TEST_CASE("conjugacy classes") {
    SUBCASE("abelian groups split into singletons") {
        SignedGroup g = c15xc2();
        auto classes = conjugacy_classes(g);
        CHECK(classes.size() == 30);
    }
    SUBCASE("reflections of an odd dihedral group form one class") {
        SignedGroup g = d15();
        auto classes = conjugacy_classes(g);
        bool found = false;
        for (const auto& cls : classes)
            if (cls.size() == 15) found = true;
        CHECK(found);
        CHECK(classes.size() == 9);
    }
    SUBCASE("the order-24 permutation group has five classes") {
        Table s4 = build_table(named_recipe(RecipeNode::Kind::S4, "a", "t"));
        CHECK(conjugacy_classes(s4).size() == 5);
    }
    SUBCASE("class sizes divide the group order") {
        for (const Table& t : {build_table(named_recipe(RecipeNode::Kind::A4, "a", "t")),
                               build_table(dihedral_recipe(6, "r", "s")),
                               build_table(named_recipe(RecipeNode::Kind::A5, "a", "t"))}) {
            int total = 0;
            for (const auto& cls : conjugacy_classes(t)) {
                CHECK(t.n % static_cast<int>(cls.size()) == 0);
                total += static_cast<int>(cls.size());
            }
            CHECK(total == t.n);
        }
    }
}

TEST_CASE("realized tables are associative") {
    SUBCASE("exhaustively at small orders") {
        SignedGroup g1 = d15(), g2 = c15xc2();
        for (const Table* tp : {&g1.table, &g2.table}) {
            const Table& t = *tp;
            for (int a = 0; a < t.n; ++a)
                for (int b = 0; b < t.n; ++b)
                    for (int c = 0; c < t.n; ++c)
                        REQUIRE(t.at(t.at(a, b), c) == t.at(a, t.at(b, c)));
        }
    }
    SUBCASE("sampled triples on a larger product") {
        CaseParams cp;
        cp.p = 5;
        cp.variant = "d";
        SignedGroup g = realize(make_case("5c", cp).recipe); // order 600
        std::mt19937 rng(7);
        std::uniform_int_distribution<int> pick(0, g.n() - 1);
        for (int iter = 0; iter < 5000; ++iter) {
            int a = pick(rng), b = pick(rng), c = pick(rng);
            REQUIRE(g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
        }
    }
}

TEST_CASE("subgroups, normalizers, centralizers") {
    SignedGroup g = d15();
    CHECK(subgroup_generated(g, {}).order() == 1);
    CHECK(subgroup_generated(g, {g.phi}).order() == 3);
    CHECK(normalizer(g, subgroup_generated(g, {g.phi})).order() == 30);

    // normalizer contains the subgroup and its centralizer; for order-2
    // subgroups the normalizer is the centralizer
    for (int x = 0; x < g.n(); ++x) {
        if (g.mul(x, x) != g.id() || x == g.id()) continue;
        Subgroup h = subgroup_generated(g, {x});
        Subgroup n = normalizer(g, h);
        Subgroup c = centralizer(g, {x});
        CHECK(n == c);
        for (int e : h.elements) CHECK(n.contains(e));
    }
    // containments on a bigger subgroup: <phi, s> in D_15
    Subgroup h = subgroup_generated(g, {g.phi, g.table.named_element("s")});
    Subgroup n = normalizer(g, h);
    Subgroup c = centralizer(g, h.elements);
    for (int e : h.elements) CHECK(n.contains(e));
    for (int e : c.elements) CHECK(n.contains(e));
}

TEST_CASE("quotients") {
    SUBCASE("cyclic quotient") {
        Table c6 = build_table(cyclic_recipe(6, "g"));
        Subgroup c3 = subgroup_generated(c6, {c6.power(c6.named_element("g"), 2)});
        Table q = quotient_by_normal(c6, c3);
        CHECK(q.n == 2);
    }
    SUBCASE("whole group quotient is trivial") {
        SignedGroup g = d15();
        Subgroup all = subgroup_generated(g, {g.table.named_element("fh"),
                                              g.table.named_element("s")});
        CHECK(quotient_by_normal(g, all).n == 1);
    }
    SUBCASE("non-normal subgroup is rejected") {
        SignedGroup g = d15();
        CHECK_THROWS_AS(
            quotient_by_normal(g, subgroup_generated(g, {g.table.named_element("s")})),
            std::domain_error);
    }
    SUBCASE("exceptional order-72 group") {
        CaseParams cp;
        cp.p = 3;
        cp.variant = "d";
        SignedGroup g = realize(make_case("E1", cp).recipe);
        CHECK(g.n() == 72);
        Table q = quotient_by_normal(g, subgroup_generated(g, {g.phi}));
        CHECK(q.n == 24);
        auto sph = spherical_family_member(q);
        REQUIRE(sph.has_value());
        CHECK(*sph == "S4");
    }
}

TEST_CASE("anticonformal involutions of the split order-12 group") {
    CaseParams cp;
    cp.p = 3;
    cp.q = 2;
    SignedGroup g = realize(make_case("1a", cp).recipe); // C6 x C2
    auto inv = anticonformal_involutions(g);
    REQUIRE(inv.size() == 2);
    int s = g.table.named_element("s");
    int tau = g.mul(s, g.table.power(g.table.named_element("fh"), 3));
    CHECK(((inv[0] == s && inv[1] == tau) || (inv[0] == tau && inv[1] == s)));
}

TEST_CASE("isomorphism testing") {
    Table d3 = build_table(dihedral_recipe(3, "r", "s"));
    Table s3 = build_table(semidirect_recipe(cyclic_recipe(3, "c"), cyclic_recipe(2, "w"),
                                             {{"w", {{"c", "c^2"}}}}));
    SUBCASE("dihedral and symmetric presentations agree") {
        IsoResult res = is_isomorphic(d3, s3);
        REQUIRE(res.isomorphic);
        // the witness really is a homomorphism on the generators
        for (auto [a, b] : res.generator_map)
            CHECK(d3.order_of(a) == s3.order_of(b));
    }
    SUBCASE("same order, different groups") {
        Table d6 = build_table(dihedral_recipe(6, "r", "s"));
        Table a4 = build_table(named_recipe(RecipeNode::Kind::A4, "a", "t"));
        CHECK(!is_isomorphic(d6, a4).isomorphic);
    }
    SUBCASE("reflexive with identity witness") {
        IsoResult res = is_isomorphic(d3, d3);
        REQUIRE(res.isomorphic);
        for (auto [a, b] : res.generator_map) CHECK(a == b);
    }
    SUBCASE("equivalence relation on a pool of small groups") {
        std::vector<Table> pool;
        pool.push_back(build_table(cyclic_recipe(12, "g")));
        pool.push_back(build_table(direct_recipe(cyclic_recipe(6, "g"), cyclic_recipe(2, "h"))));
        pool.push_back(build_table(dihedral_recipe(6, "r", "s")));
        pool.push_back(build_table(named_recipe(RecipeNode::Kind::A4, "a", "t")));
        pool.push_back(build_table(direct_recipe(dihedral_recipe(3, "r", "s"),
                                                 cyclic_recipe(2, "h"))));
        for (size_t i = 0; i < pool.size(); ++i)
            for (size_t j = 0; j < pool.size(); ++j) {
                bool ij = is_isomorphic(pool[i], pool[j]).isomorphic;
                CHECK(ij == is_isomorphic(pool[j], pool[i]).isomorphic); // symmetric
                if (i == j) CHECK(ij);                                    // reflexive
                for (size_t k = 0; k < pool.size(); ++k) {
                    bool jk = is_isomorphic(pool[j], pool[k]).isomorphic;
                    bool ik = is_isomorphic(pool[i], pool[k]).isomorphic;
                    if (ij && jk) CHECK(ik); // transitive
                }
            }
        // D6 is D3 x C2
        CHECK(is_isomorphic(pool[2], pool[4]).isomorphic);
    }
    SUBCASE("bound is enforced") {
        CHECK_THROWS_AS(is_isomorphic(d3, s3, 5), std::domain_error);
    }
}

TEST_CASE("automorphism enumeration") {
    Table v4 = build_table(direct_recipe(cyclic_recipe(2, "a"), cyclic_recipe(2, "b")));
    CHECK(automorphisms_of_order_dividing(v4, 0).size() == 6);
    CHECK(automorphisms_of_order_dividing(v4, 2).size() == 4);
    Table c5 = build_table(cyclic_recipe(5, "g"));
    CHECK(automorphisms_of_order_dividing(c5, 2).size() == 2); // identity and inversion
}

TEST_CASE("family identification") {
    CHECK(identify_family(build_table(dihedral_recipe(3, "r", "s"))) == "D[3]");
    Table c30 = build_table(direct_recipe(cyclic_recipe(15, "g"), cyclic_recipe(2, "h")));
    CHECK(identify_family(c30) == "C[30]");
    CHECK(matches_family(c30, "C[15] x C[2]"));
    CHECK(matches_family(c30, "C[30]"));
    CHECK(!matches_family(c30, "D[15]"));

    // any-semidirect wildcard covers the direct product and the twisted one
    Table d3xc2 = build_table(direct_recipe(dihedral_recipe(3, "r", "s"), cyclic_recipe(2, "h")));
    CHECK(matches_family(d3xc2, "SD(D[3],C[2])"));
    CHECK(matches_family(d3xc2, "D[6]"));

    // parameters in family expressions come from the environment
    IntEnv env{{"p", 3}};
    CHECK(matches_family(build_table(dihedral_recipe(3, "r", "s")), "D[p]", env));

    // a direct square of the order-12 rotation group is outside the catalog
    Table a4xa4 = build_table(direct_recipe(named_recipe(RecipeNode::Kind::A4, "a", "t"),
                                            named_recipe(RecipeNode::Kind::A4, "b", "u")));
    CHECK(identify_family(a4xa4) == "unrecognized");
}

TEST_CASE("realization rejects inconsistent data") {
    SUBCASE("action that is not an automorphism") {
        GroupRecipe r;
        r.group = semidirect_recipe(cyclic_recipe(5, "c"), cyclic_recipe(2, "w"),
                                    {{"w", {{"c", "c^2"}}}}); // squaring has order 4, not 2
        r.anticonformal = {"w"};
        r.phi_word = "c";
        CHECK_THROWS_AS(realize(r), std::domain_error);
    }
    SUBCASE("anticonformal set without an index-2 character") {
        GroupRecipe r;
        r.group = direct_recipe(cyclic_recipe(3, "c"), cyclic_recipe(3, "d"));
        r.anticonformal = {"c"}; // odd order generator cannot be anticonformal
        r.phi_word = "d";
        CHECK_THROWS_AS(realize(r), std::domain_error);
    }
    SUBCASE("p-gonality word of composite order") {
        GroupRecipe r;
        r.group = dihedral_recipe(15, "fh", "s");
        r.anticonformal = {"s"};
        r.phi_word = "fh"; // order 15
        CHECK_THROWS_AS(realize(r), std::domain_error);
    }
    SUBCASE("p-gonality word must be conformal") {
        GroupRecipe r;
        r.group = dihedral_recipe(15, "fh", "s");
        r.anticonformal = {"s"};
        r.phi_word = "s";
        CHECK_THROWS_AS(realize(r), std::domain_error);
    }
}

TEST_CASE("recipe JSON round trip") {
    CaseParams cp;
    cp.p = 3;
    cp.q = 3;
    cp.j = 1;
    GroupRecipe recipe = make_case("2c", cp).recipe;
    nlohmann::ordered_json j = recipe_to_json(recipe);
    GroupRecipe back = recipe_from_json(j);
    SignedGroup g1 = realize(recipe);
    SignedGroup g2 = realize(back);
    CHECK(g1.n() == g2.n());
    CHECK(g1.phi == g2.phi);
    CHECK(g1.w == g2.w);
    CHECK(recipe_to_json(back) == j);
}

TEST_CASE("word and expression evaluation") {
    Table d6 = build_table(dihedral_recipe(6, "r", "s"));
    CHECK(eval_word(d6, "1") == d6.id);
    CHECK(eval_word(d6, "r^3*s") == d6.at(d6.power(d6.named_element("r"), 3),
                                          d6.named_element("s")));
    CHECK(eval_word(d6, "(r*s)^2") == d6.id);
    CHECK(eval_word(d6, "r^-1") == d6.inv[d6.named_element("r")]);
    IntEnv env{{"p", 3}, {"q", 4}};
    CHECK(eval_word(d6, "r^(p*q/2)", env) == d6.id);
    CHECK(eval_int_expr("p*q/2", env) == 6);
    CHECK(eval_int_expr("(p+q)*2-1", env) == 13);
    CHECK_THROWS_AS(eval_int_expr("q/p", env), std::domain_error); // not exact
    CHECK_THROWS_AS(eval_word(d6, "nope"), std::domain_error);
}
