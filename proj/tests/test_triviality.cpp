#include <doctest.h>

#include "germkit/triviality.hpp"

#include <random>

using namespace germkit;

namespace {

RingPtr r3() { return make_ring({"x", "y", "z"}); }

std::vector<Polynomial> thom_ideal_at(long lambda) {
    auto ring = r3();
    std::string l = std::to_string(lambda);
    return {parse_polynomial("x^2 - (" + l + ")*y*z", ring),
            parse_polynomial("y^2 - (" + l + ")*x*z", ring),
            parse_polynomial("z^2 - (" + l + ")*x*y", ring)};
}

}  // namespace

TEST_CASE("power containment: Lemma 8.8(a) for I^1") {
    auto ring = r3();
    for (long lam : {3L, 5L, 7L}) {
        auto gens = thom_ideal_at(lam);
        gens.push_back(parse_polynomial("x*y*z", ring));
        PowerContainment pc = power_subset_ideal(gens, 3);
        INFO("lambda = ", lam);
        CHECK(pc.holds);
        REQUIRE(pc.certificate.has_value());
        CHECK(pc.certificate->monomials.size() == 10);  // all degree-3 monomials in 3 vars
    }
    // the genuine failure locus of this containment is lambda^3 = 1
    {
        auto gens = thom_ideal_at(1);
        gens.push_back(parse_polynomial("x*y*z", ring));
        CHECK_FALSE(power_subset_ideal(gens, 3).holds);
    }
    // at 0 and -2 the containment itself still holds (the lemma's hypothesis
    // excludes them for family reasons, not for this conclusion)
    for (long lam : {0L, -2L}) {
        auto gens = thom_ideal_at(lam);
        gens.push_back(parse_polynomial("x*y*z", ring));
        INFO("lambda = ", lam);
        CHECK(power_subset_ideal(gens, 3).holds);
    }
}

TEST_CASE("power containment: I^2 for the (8,6) quadrics") {
    auto ring = make_ring({"x", "y", "z", "w"});
    auto make_gens = [&](long lam) {
        std::string l = std::to_string(lam);
        std::vector<Polynomial> g = {
            parse_polynomial("x^2 + y^2 + z^2", ring),
            parse_polynomial("y^2 + " + l + "*z^2 + w^2", ring),
        };
        for (const char* m : {"x*y", "x*z", "x*w", "y*z", "y*w", "z*w"})
            g.push_back(parse_polynomial(m, ring));
        return g;
    };
    // holds at every lambda: the mixed monomials plus either quadric express
    // each pure cube without needing the z^2 coefficient
    for (long lam : {3L, 1L, 0L}) {
        INFO("lambda = ", lam);
        CHECK(power_subset_ideal(make_gens(lam), 3).holds);
    }
}

TEST_CASE("ideal times maximal power: Eq. (22) shape") {
    // I * M^2 = M^4 for the Thom components at generic lambda
    for (long lam : {3L, 7L}) {
        IdealPowerEquality eq = ideal_times_power_equals(thom_ideal_at(lam), 2, 4);
        INFO("lambda = ", lam);
        CHECK(eq.contains_power);
        CHECK(eq.inside_power);
        CHECK(eq.equal());
    }
    // lambda^3 = 1 is the degeneration locus of the family
    IdealPowerEquality bad = ideal_times_power_equals(thom_ideal_at(1), 2, 4);
    CHECK_FALSE(bad.contains_power);
    CHECK(bad.inside_power);
}

TEST_CASE("J(f) contains M^5 for the (9,8) family") {
    auto ring = make_ring({"x", "y"});
    // gradient ideal of x^4 + y^4 + 3 x^2 y^2
    std::vector<Polynomial> jac = {parse_polynomial("4*x^3 + 6*x*y^2", ring),
                                   parse_polynomial("4*y^3 + 6*x^2*y", ring)};
    CHECK(power_subset_ideal(jac, 5).holds);
    // lambda = 2 is excluded: (x^2+y^2)^2 has non-isolated complex zeros
    std::vector<Polynomial> jac2 = {parse_polynomial("4*x^3 + 4*x*y^2", ring),
                                    parse_polynomial("4*y^3 + 4*x^2*y", ring)};
    CHECK_FALSE(power_subset_ideal(jac2, 5).holds);
}

TEST_CASE("power containment against the brute-force monomial oracle") {
    // For monomial ideals, M^d containment has an independent oracle:
    // every degree-d monomial must be divisible by some generator.
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 50; ++trial) {
        int nvars = 1 + static_cast<int>(rng() % 3);
        std::vector<std::string> vars;
        for (int i = 0; i < nvars; ++i) vars.push_back("x" + std::to_string(i));
        auto ring = make_ring(vars);
        auto all = enumerate_monomials(nvars, 1, 4);
        std::vector<Polynomial> gens;
        std::vector<Monomial> gen_monos;
        int count = 1 + static_cast<int>(rng() % 4);
        for (int g = 0; g < count; ++g) {
            const Monomial& m = all[rng() % all.size()];
            gen_monos.push_back(m);
            gens.push_back(Polynomial::term(ring, m, Scalar(1)));
        }
        int d = 1 + static_cast<int>(rng() % 6);
        bool oracle = true;
        for (const auto& m : enumerate_monomials(nvars, d, d)) {
            bool divisible = false;
            for (const auto& g : gen_monos)
                if (g.divides(m)) { divisible = true; break; }
            if (!divisible) { oracle = false; break; }
        }
        CHECK(power_subset_ideal(gens, d).holds == oracle);
    }
}

TEST_CASE("thom-levine certificates") {
    // constant family: v = w = 0
    auto rxt = make_ring({"x", "t"});
    Family constant{parse_germ({"x^2"}, rxt), 1};
    auto cert = thom_levine_certificate(constant, TrivialityGroup::A, 3);
    REQUIRE(cert.has_value());
    for (const auto& v : cert->v) CHECK(v.is_zero());
    for (const auto& w : cert->w) CHECK(w.is_zero());

    // F(x,t) = x^2 + t x^3 is A-trivial at order 3 (x^2 is 2-determined)
    Family family{parse_germ({"x^2 + t*x^3"}, rxt), 1};
    auto cert2 = thom_levine_certificate(family, TrivialityGroup::A, 3);
    CHECK(cert2.has_value());

    // K-certificates absorb target multiples
    auto cert3 = thom_levine_certificate(family, TrivialityGroup::K, 3);
    CHECK(cert3.has_value());

    // the Thom family across lambda = 0 is not K-trivial at low orders
    auto rt = make_ring({"x", "y", "z", "t"});
    Family thom{parse_germ({"x^2 - t*y*z", "y^2 - t*x*z", "z^2 - t*x*y"}, rt), 3};
    CHECK_FALSE(thom_levine_certificate(thom, TrivialityGroup::K, 3).has_value());
    CHECK_FALSE(thom_levine_certificate(thom, TrivialityGroup::A, 3).has_value());
}

TEST_CASE("lipschitz control package for the Thom family") {
    auto rt = make_ring({"x", "y", "z", "t"});
    Family thom{parse_germ({"x^2 - t*y*z", "y^2 - t*x*z", "z^2 - t*x*y"}, rt), 3};

    ControlPackage at3 = control_package(thom, Rat(3));
    REQUIRE(at3.identity.has_value());
    CHECK(at3.identity->entry_degree == 4);
    CHECK(at3.gram == GramOutcome::Positive);
    CHECK(at3.granted);

    // lambda = 1 lies on the excluded locus: rho vanishes along the diagonal
    // line, so no Gram bound exists and the package is withheld
    ControlPackage at1 = control_package(thom, Rat(1));
    CHECK(at1.gram == GramOutcome::Inconclusive);
    CHECK_FALSE(at1.granted);

    // constant family: A = 0
    auto rxt = make_ring({"x", "t"});
    Family constant{parse_germ({"x^2"}, rxt), 1};
    auto zc = lipschitz_control_certificate(constant, Rat(2));
    REQUIRE(zc.has_value());
    for (const auto& row : zc->matrix)
        for (const auto& e : row) CHECK(e.is_zero());

    // generic lambda: solve over the fraction field
    auto generic = lipschitz_control_certificate(thom, std::nullopt);
    CHECK(generic.has_value());
}

TEST_CASE("gram surrogate for the control bounds") {
    auto ring = r3();
    // Thom components at lambda = 3: positive definite Gram exists
    CHECK(gram_definiteness(thom_ideal_at(3), 2) == GramOutcome::Positive);
    // the (9,8) potential at lambda = 3
    auto r2 = make_ring({"x", "y"});
    std::vector<Polynomial> pot = {parse_polynomial("x^4 + y^4 + 3*x^2*y^2", r2)};
    CHECK(gram_definiteness(pot, 4) == GramOutcome::Positive);
    // an indefinite form cannot be certified
    std::vector<Polynomial> indef = {parse_polynomial("x^2 - y^2", r2)};
    CHECK(gram_definiteness(indef, 2) == GramOutcome::Inconclusive);
}
