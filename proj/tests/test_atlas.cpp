#include <doctest.h>

#include "germkit/atlas.hpp"

using namespace germkit;

TEST_CASE("atlas loads and has the expected shape") {
    const auto& atlas = builtin_atlas();
    CHECK(atlas.size() >= 18);
    auto np8 = table_entries("StableNP8");
    CHECK(np8.size() == 6);  // A, B+, B-, B*, C_3, C_4
    auto bnd99 = table_entries("BND99");
    CHECK(bnd99.size() >= 9);
    CHECK_THROWS_AS(table_entries("NoSuchTable"), error);
}

TEST_CASE("int expressions and constraints") {
    IntAssignment env{{"p", 2}, {"q", 3}};
    CHECK(eval_int_expr("p + q", env) == 5);
    CHECK(eval_int_expr("2 * p + 1", env) == 5);
    CHECK(eval_constraints({"2 <= p <= q"}, env));
    CHECK_FALSE(eval_constraints({"p + q <= 4"}, env));
    CHECK(eval_constraints({"p != q"}, env));
}

TEST_CASE("selected rows verify against the computing modules") {
    // A_j -> j, sampled at the first and last valid j
    for (const auto& e : table_entries("StableNP8")) {
        if (e.name != "A_j") continue;
        for (const auto& asg : sample_assignments(e)) {
            VerificationReport rep = verify_entry(e, asg);
            INFO(rep.table, "/", rep.name);
            CHECK(rep.passed());
        }
    }
    // B_{2,3} -> 5
    for (const auto& e : table_entries("StableNP8")) {
        if (e.name != "B+_{p,q}") continue;
        VerificationReport rep = verify_entry(e, {{"p", 2}, {"q", 3}});
        REQUIRE(rep.checks.size() >= 1);
        CHECK(rep.checks[0].invariant == "K_cod");
        CHECK(rep.checks[0].expected == 5);
        CHECK(rep.passed());
    }
}

TEST_CASE("bimodal family row") {
    for (const auto& e : table_entries("Bimodal107")) {
        VerificationReport rep = verify_entry(e, sample_assignments(e).front());
        CHECK(rep.passed());
        // corank 5 is among the checks
        bool saw_corank = false;
        for (const auto& c : rep.checks)
            if (c.invariant == "corank") {
                saw_corank = true;
                CHECK(c.expected == 5);
            }
        CHECK(saw_corank);
    }
}

TEST_CASE("classification by invariants") {
    auto ring = make_ring({"x", "y"});
    // (xy, x^2 + y^3) matches B_{2,3} (both real forms tie)
    MapGerm b23 = parse_germ({"x*y", "x^2 + y^3"}, ring);
    ClassifyResult r = classify(b23);
    REQUIRE(r.fst);
    bool has_b = false;
    for (const auto& c : r.candidates)
        if (c.name.rfind("B", 0) == 0 && c.assignment.at("p") == 2 && c.assignment.at("q") == 3)
            has_b = true;
    CHECK(has_b);

    // (x^2 + y^2, x^3) matches B*_{3,3}
    MapGerm bstar = parse_germ({"x^2 + y^2", "x^3"}, ring);
    ClassifyResult r2 = classify(bstar);
    bool has_bstar = false;
    for (const auto& c : r2.candidates)
        if (c.name == "B*_{p,p}" && c.assignment.at("p") == 3) has_bstar = true;
    CHECK(has_bstar);

    // x^3 after a linear change of the single variable is A_2
    MapGerm a2 = parse_germ({"8*x^3"}, make_ring({"x"}));
    ClassifyResult r3 = classify(a2);
    bool has_a2 = false;
    for (const auto& c : r3.candidates)
        if (c.name == "A_j" && c.assignment.at("j") == 2) has_a2 = true;
    CHECK(has_a2);
}

TEST_CASE("unimodular normal forms") {
    UnimodularGerm F = unimodular_normal_form(9, 9, Rat(3));
    CHECK(F.full.n() == 9);
    CHECK(F.full.p() == 9);
    CHECK(F.sigmas.size() == 6);
    CHECK(F.core.p() == 3);

    UnimodularGerm G = unimodular_normal_form(8, 6, Rat(3));
    CHECK(G.full.n() == 8);
    CHECK(G.full.p() == 6);
    CHECK(G.sigmas.size() == 4);
    // the (8,6) shape: f~(x,y,z,w,u) = (x^2+y^2+z^2+u1 y+u2 w, y^2+3z^2+w^2+u3 x+u4 z)
    const auto& c0 = G.full.components[0];
    CHECK(c0.coeff(Monomial({0, 1, 0, 0, 1, 0, 0, 0})) == Scalar(1));  // u1*y
    CHECK(c0.coeff(Monomial({0, 0, 0, 1, 0, 1, 0, 0})) == Scalar(1));  // u2*w
    const auto& c1 = G.full.components[1];
    CHECK(c1.coeff(Monomial({1, 0, 0, 0, 0, 0, 1, 0})) == Scalar(1));  // u3*x
    CHECK(c1.coeff(Monomial({0, 0, 1, 0, 0, 0, 0, 1})) == Scalar(1));  // u4*z
    CHECK(c1.coeff(Monomial({0, 0, 2, 0, 0, 0, 0, 0})) == Scalar(3));  // lambda z^2

    // (10+k, 7) by suspension
    UnimodularGerm H = unimodular_normal_form(12, 7, Rat(3));
    CHECK(H.full.n() == 12);
    CHECK(H.full.p() == 7);
    CHECK(H.core.n() == 6);

    // beyond-table pair rejected
    CHECK_THROWS_AS(unimodular_normal_form(11, 11, Rat(3)), error);
}

TEST_CASE("flagship: every table row verifies at two samples") {
    // the full regression over all five tables (StableNP8 and BND99 are also
    // exercised by the acceptance suite)
    for (const std::string table :
         {"StableNP8", "BND99", "BND_6t2", "BND_ngtp", "Bimodal107"}) {
        for (const auto& e : table_entries(table)) {
            for (const auto& asg : sample_assignments(e)) {
                VerificationReport rep = verify_entry(e, asg);
                std::string label = table + "/" + e.name;
                for (const auto& [k, v] : asg) label += " " + k + "=" + std::to_string(v);
                INFO(label);
                CHECK(rep.passed());
            }
        }
    }
}

TEST_CASE("table row shapes match the printed unfolding data") {
    for (const auto& e : table_entries("BND_ngtp")) {
        if (e.name == "(9,8)") {
            CHECK(e.unfold_sigma.size() == 7);
            CHECK(eval_int_expr(*e.unfold_r, {}) == 7);
            CHECK(e.unfold_sigma_m == std::vector<std::string>{"x^2*y^2"});
        }
        if (e.name == "(10,7)") {
            CHECK(e.unfold_sigma.size() == 6);
            CHECK(e.unfold_sigma_m == std::vector<std::string>{"x*y*z"});
        }
    }
    for (const auto& e : table_entries("BND_6t2")) {
        CHECK(e.unfold_sigma.size() == 28);  // r = 6t - 2 at t = 5
    }
}

TEST_CASE("classify(normal form) returns the matching entry") {
    // every StableNP8 entry instantiated at its first sample classifies to a
    // candidate set containing itself
    for (const auto& e : table_entries("StableNP8")) {
        auto samples = sample_assignments(e);
        REQUIRE_FALSE(samples.empty());
        InstantiatedEntry inst = instantiate(e, samples.front());
        ClassifyResult r = classify(inst.germ);
        bool found = false;
        for (const auto& c : r.candidates)
            if (c.table == e.table && c.name == e.name && c.assignment == samples.front())
                found = true;
        INFO(e.name);
        CHECK(found);
    }
}
