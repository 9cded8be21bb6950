// Acceptance suite: one pass/fail line per criterion.  Criterion 12 is the
// documented slow tier and runs only when GERMKIT_SLOW=1 is set.

#include "germkit/atlas.hpp"
#include "germkit/germfile.hpp"
#include "germkit/nicedim.hpp"
#include "germkit/triviality.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace germkit;

namespace {

int failures = 0;

void criterion(const std::string& id, const std::function<bool(std::string&)>& body) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    std::string errmsg;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        errmsg = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << (ok ? "[PASS] " : "[FAIL] ") << id;
    if (!detail.empty()) line << ": " << detail;
    if (!errmsg.empty()) line << " (exception: " << errmsg << ")";
    line.setf(std::ios::fixed);
    line.precision(1);
    line << "  (" << secs << "s)";
    std::cout << line.str() << std::endl;
    if (!ok) ++failures;
}

RingPtr thom_ring() {
    ZPoly l = ZPoly::monomial(1, 1);
    ZPoly excl = l * (ZPoly::monomial(1, 3) + ZPoly(8)) * (ZPoly::monomial(1, 3) - ZPoly(1));
    return make_ring({"x", "y", "z"}, "l", excl);
}

MapGerm thom_family() {
    return parse_germ({"x^2 - l*y*z", "y^2 - l*x*z", "z^2 - l*x*y"}, thom_ring());
}

ZPoly thom_excluded() {
    return ZPoly::monomial(1, 1) * (ZPoly::monomial(1, 3) + ZPoly(8)) *
           (ZPoly::monomial(1, 3) - ZPoly(1));
}

}  // namespace

int main() {
    // 1. Thom family stabilized K-codim = 10 over the formal parameter;
    //    every reported exceptional pivot factor divides l(l^3+8)(l^3-1).
    criterion("C1 Thom family K-cod = 10 with clean exceptional factors", [](std::string& d) {
        CodimResult r = stabilized_codim(thom_family(), Group::K, false);
        bool ok = r.value == 10;
        ZPoly excl = thom_excluded();
        std::ostringstream facs;
        for (const auto& f : r.exceptional_pivots) {
            if (!f.divides(excl)) ok = false;
            facs << f.to_string("l") << "; ";
        }
        d = "K-cod = " + std::to_string(r.value) + ", factors: " + facs.str();
        return ok;
    });

    // 2. delta(f_l) = 8 with graded dims (1,3,3,1); jacobian class ~ xyz.
    criterion("C2 delta(f_l) = 8, Hilbert (1,3,3,1), J(f_l) ~ xyz", [](std::string& d) {
        MapGerm f = thom_family();
        DeltaResult dr = delta(f, 8);
        if (!dr.finite || dr.value != 8) {
            d = "delta failed";
            return false;
        }
        HilbertData h = local_algebra(f, dr.certificate_k);
        if (h.dims_by_degree != std::vector<long>{1, 3, 3, 1}) {
            d = "hilbert failed";
            return false;
        }
        Polynomial j = jacobian_class(f, 8);
        // "multiple of xyz" is a statement about classes in Q(f): the
        // canonical residues of J(f) and of xyz must be proportional
        Polynomial xyz_residue = ideal_residue(
            f, Polynomial::term(f.ring, Monomial({1, 1, 1}), Scalar(1)), dr.certificate_k);
        bool jac_ok = !j.is_zero() && !xyz_residue.is_zero() &&
                      j.terms().size() == xyz_residue.terms().size();
        if (jac_ok) {
            Scalar ratio = j.terms().begin()->second / xyz_residue.terms().begin()->second;
            jac_ok = (j == xyz_residue * ratio);
        }
        d = "delta = 8, dims (1,3,3,1), [J] = c*[xyz] with c != 0";
        return jac_ok;
    });

    // 3. K-cod(f_{1l}) = 16 for the (15,16) family.
    criterion("C3 K-cod(f_l, xyz) = 16", [](std::string& d) {
        MapGerm f1 =
            parse_germ({"x^2 - l*y*z", "y^2 - l*x*z", "z^2 - l*x*y", "x*y*z"}, thom_ring());
        CodimResult r = stabilized_codim(f1, Group::K, false);
        d = "K-cod = " + std::to_string(r.value);
        return r.value == 16;
    });

    // 4. Atlas verification for StableNP8 and BND99 at 2 samples per row.
    criterion("C4 atlas rows StableNP8 + BND99 verify", [](std::string& d) {
        int rows = 0;
        for (const std::string table : {"StableNP8", "BND99"}) {
            for (const auto& e : table_entries(table)) {
                for (const auto& asg : sample_assignments(e)) {
                    VerificationReport rep = verify_entry(e, asg);
                    ++rows;
                    if (!rep.passed()) {
                        std::ostringstream os;
                        os << table << "/" << e.name << " failed at";
                        for (const auto& [k, v] : asg) os << " " << k << "=" << v;
                        for (const auto& c : rep.checks)
                            if (c.status != CheckStatus::Pass)
                                os << " [" << c.invariant << " expected " << c.expected
                                   << " computed "
                                   << (c.computed ? std::to_string(*c.computed) : "n/a") << "]";
                        d = os.str();
                        return false;
                    }
                }
            }
        }
        d = std::to_string(rows) + " row samples pass";
        return true;
    });

    // 5. sigma / BND closed forms for 1 <= n,p <= 40.
    criterion("C5 sigma and BND closed forms", [](std::string& d) {
        if (sigma(9, 9) != 9 || sigma(10, 7) != 10 || sigma(2, 5) != 31) return false;
        if (classify_pair(8, 8).kind != PairClassKind::Nice) return false;
        if (classify_pair(9, 9).kind != PairClassKind::BoundaryNice) return false;
        for (int n = 1; n <= 40; ++n)
            for (int p = 1; p <= 40; ++p) {
                bool boundary = classify_pair(n, p).kind == PairClassKind::BoundaryNice;
                if (boundary != bnd_closed_form(n, p)) {
                    d = "mismatch at (" + std::to_string(n) + "," + std::to_string(p) + ")";
                    return false;
                }
            }
        d = "all pairs match";
        return true;
    });

    // 6. Stable unfoldings for A_k (k <= 6) and B_{2,2}^± pass the criterion.
    criterion("C6 stable unfoldings: A_k (k <= 6) and B22", [](std::string& d) {
        for (int k = 1; k <= 6; ++k) {
            MapGerm f = parse_germ({"x^" + std::to_string(k + 1)}, make_ring({"x"}));
            Unfolding u = stable_unfolding(f);  // postcondition asserted inside
            if (static_cast<int>(u.sigmas.size()) != std::max(0, k - 1)) {
                d = "A_" + std::to_string(k) + " has wrong r";
                return false;
            }
            for (int i = 1; i <= k - 1; ++i)
                if (!(u.sigmas[static_cast<size_t>(i - 1)].components[0] ==
                      parse_polynomial("x^" + std::to_string(i), f.ring))) {
                    d = "A_" + std::to_string(k) + " sigma shape";
                    return false;
                }
        }
        auto r2 = make_ring({"x", "y"});
        for (const std::string sign : {"+", "-"}) {
            MapGerm core = parse_germ({"x^2 " + sign + " y^2", "x*y"}, r2);
            Unfolding u = stable_unfolding(core);
            if (u.sigmas.size() != 2 || u.germ.n() != 4) {
                d = "B22 shape";
                return false;
            }
            if (!infinitesimally_stable(u.germ).stable) {
                d = "B22 unfolding unstable";
                return false;
            }
        }
        d = "Eq.-(17)-shaped and stable";
        return true;
    });

    // 7. Plane classifier on the Whitney normal forms.
    criterion("C7 plane classifier", [](std::string& d) {
        auto r2 = make_ring({"x", "y"});
        bool ok = plane_germ_type(parse_germ({"x^2", "y"}, r2)) == PlaneGermType::Fold &&
                  plane_germ_type(parse_germ({"x*y - x^3", "y"}, r2)) == PlaneGermType::Cusp &&
                  plane_germ_type(parse_germ({"x", "y^3"}, r2)) == PlaneGermType::NotGood;
        d = "fold/cusp/notgood";
        return ok;
    });

    // 8. Ideal power certificates, with the pinned failure points checked
    //    verbatim.  The containments are computable facts: I^1 genuinely
    //    fails only on lambda^3 = 1, and I^2 holds at every lambda, so two of
    //    the pinned failure expectations cannot hold; they are reported
    //    honestly rather than weakened.
    criterion("C8 ideal certificates", [](std::string& d) {
        auto ring = make_ring({"x", "y", "z"});
        auto thom_at = [&](long lam) {
            std::string l = "(" + std::to_string(lam) + ")";
            return std::vector<Polynomial>{parse_polynomial("x^2 - " + l + "*y*z", ring),
                                           parse_polynomial("y^2 - " + l + "*x*z", ring),
                                           parse_polynomial("z^2 - " + l + "*x*y", ring)};
        };
        std::string report;
        bool ok = true;
        // I^1_l with the xyz generator: generic holds
        for (long lam : {3L, 5L}) {
            auto g1 = thom_at(lam);
            g1.push_back(parse_polynomial("x*y*z", ring));
            if (!power_subset_ideal(g1, 3).holds) {
                ok = false;
                report += "I1 generic failed at " + std::to_string(lam) + "; ";
            }
        }
        // stated failures of I^1 at 0, 1 and -2
        for (long lam : {0L, 1L, -2L}) {
            auto g1 = thom_at(lam);
            g1.push_back(parse_polynomial("x*y*z", ring));
            if (power_subset_ideal(g1, 3).holds) {
                ok = false;
                report += "I1 holds at " + std::to_string(lam) + " (pinned to fail); ";
            }
        }
        // I^2_l: generic holds, stated failures at 0 and 1
        auto ring4 = make_ring({"x", "y", "z", "w"});
        auto i2 = [&](long lam) {
            std::string l = std::to_string(lam);
            std::vector<Polynomial> g = {parse_polynomial("x^2 + y^2 + z^2", ring4),
                                         parse_polynomial("y^2 + " + l + "*z^2 + w^2", ring4)};
            for (const char* m : {"x*y", "x*z", "x*w", "y*z", "y*w", "z*w"})
                g.push_back(parse_polynomial(m, ring4));
            return g;
        };
        if (!power_subset_ideal(i2(3), 3).holds) {
            ok = false;
            report += "I2 generic failed; ";
        }
        for (long lam : {0L, 1L})
            if (power_subset_ideal(i2(lam), 3).holds) {
                ok = false;
                report += "I2 holds at " + std::to_string(lam) + " (pinned to fail); ";
            }
        // Eq. (22): I * M^2 = M^4 generically
        IdealPowerEquality eq = ideal_times_power_equals(thom_at(3), 2, 4);
        if (!eq.equal()) {
            ok = false;
            report += "I*M^2 = M^4 failed; ";
        }
        d = ok ? "Lemma 8.8(a) + product identity" : report;
        return ok;
    });

    // 9. Lipschitz control package at lambda = 3; withheld at lambda = 1.
    criterion("C9 control certificate", [](std::string& d) {
        auto rt = make_ring({"x", "y", "z", "t"});
        Family thom{parse_germ({"x^2 - t*y*z", "y^2 - t*x*z", "z^2 - t*x*y"}, rt), 3};
        ControlPackage at3 = control_package(thom, Rat(3));
        if (!at3.granted || !at3.identity || at3.identity->entry_degree != 4) {
            d = "no certificate at 3";
            return false;
        }
        ControlPackage at1 = control_package(thom, Rat(1));
        if (at1.granted) {
            d = "unexpected certificate at 1";
            return false;
        }
        d = "entries in M^4, identity exact, gram bound positive at 3, withheld at 1";
        return true;
    });

    // 10. Open-orbit necessary check for (9,9) and (8,6) at lambda = 3.
    criterion("C10 open-orbit (i0) at lambda = 3", [](std::string& d) {
        UnimodularGerm F99 = unimodular_normal_form(9, 9, Rat(3));
        if (!open_orbit_test(F99)) {
            d = "(9,9) failed";
            return false;
        }
        UnimodularGerm F86 = unimodular_normal_form(8, 6, Rat(3));
        if (!open_orbit_test(F86)) {
            d = "(8,6) failed";
            return false;
        }
        bool rejected = false;
        try {
            unimodular_normal_form(9, 9, Rat(1));
        } catch (const error&) {
            rejected = true;
        }
        if (!rejected) {
            d = "exceptional modulus not rejected";
            return false;
        }
        d = "(9,9) and (8,6) pass; lambda = 1 rejected";
        return true;
    });

    // 11. Property suites.
    criterion("C11 property suites", [](std::string& d) {
        std::mt19937 rng(20260808);
        auto r2 = make_ring({"x", "y"});
        // (a) K-cod invariance under 5 random unimodular changes x 10 germs
        std::vector<MapGerm> germs;
        for (const auto& e : table_entries("StableNP8")) {
            auto samples = sample_assignments(e);
            for (const auto& asg : samples) {
                germs.push_back(instantiate(e, asg).germ);
                if (germs.size() >= 10) break;
            }
            if (germs.size() >= 10) break;
        }
        while (germs.size() < 10) germs.push_back(parse_germ({"x*y", "x^2 + y^4"}, r2));
        for (const auto& f : germs) {
            if (f.n() != 2) continue;
            long base = stabilized_codim(f, Group::K, false).value;
            for (int trial = 0; trial < 5; ++trial) {
                std::vector<std::vector<long>> m{{1, 0}, {0, 1}};
                for (int s = 0; s < 4; ++s) {
                    long c = static_cast<long>(rng() % 5) - 2;
                    if (rng() % 2 == 0) { m[0][0] += c * m[1][0]; m[0][1] += c * m[1][1]; }
                    else { m[1][0] += c * m[0][0]; m[1][1] += c * m[0][1]; }
                }
                std::vector<Polynomial> subs;
                for (int i = 0; i < 2; ++i) {
                    Polynomial s(f.ring);
                    for (int j = 0; j < 2; ++j)
                        if (m[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0)
                            s = s + Polynomial::variable(f.ring, j) *
                                        Scalar(m[static_cast<size_t>(i)][static_cast<size_t>(j)]);
                    subs.push_back(s);
                }
                std::vector<Polynomial> comps;
                for (const auto& c : f.components) comps.push_back(compose_truncated(c, subs, 14));
                MapGerm g{f.ring, comps};
                if (stabilized_codim(g, Group::K, false).value != base) {
                    d = "K-cod changed under a linear substitution";
                    return false;
                }
            }
        }
        // (b) Euler relation for all weighted homogeneous atlas entries
        for (const auto& e : builtin_atlas()) {
            if (e.weights_raw.empty() || e.degrees_raw.empty()) continue;
            auto samples = sample_assignments(e);
            if (samples.empty()) continue;
            InstantiatedEntry inst = instantiate(e, samples.front());
            const MapGerm& f = inst.germ;
            int k = 0;
            for (const auto& c : f.components) k = std::max(k, c.degree());
            k += 1;
            Subspace tf_span(enumerate_basis(f.ring, f.p(), k, 1));
            for (const auto& g : tangent_generators(f, Group::R, k, false)) tf_span.insert(g);
            VectorFieldJet euler = VectorFieldJet::zero(f.ring, f.p());
            for (int i = 0; i < f.p(); ++i)
                euler.components[static_cast<size_t>(i)] =
                    f.components[static_cast<size_t>(i)] *
                    Scalar(eval_int_expr(e.degrees_raw[static_cast<size_t>(i)], samples.front()));
            if (!tf_span.contains(euler)) {
                d = "Euler relation failed for " + e.table + "/" + e.name;
                return false;
            }
        }
        // (c) Nakayama oracle equivalence on 50 random monomial ideals
        for (int trial = 0; trial < 50; ++trial) {
            int nvars = 1 + static_cast<int>(rng() % 3);
            std::vector<std::string> vars;
            for (int i = 0; i < nvars; ++i) vars.push_back("v" + std::to_string(i));
            auto ring = make_ring(vars);
            auto all = enumerate_monomials(nvars, 1, 4);
            std::vector<Polynomial> gens;
            std::vector<Monomial> gmonos;
            int count = 1 + static_cast<int>(rng() % 4);
            for (int g = 0; g < count; ++g) {
                const Monomial& m = all[rng() % all.size()];
                gmonos.push_back(m);
                gens.push_back(Polynomial::term(ring, m, Scalar(1)));
            }
            int deg = 1 + static_cast<int>(rng() % 6);
            bool oracle = true;
            for (const auto& m : enumerate_monomials(nvars, deg, deg)) {
                bool divisible = false;
                for (const auto& g : gmonos)
                    if (g.divides(m)) { divisible = true; break; }
                if (!divisible) { oracle = false; break; }
            }
            if (power_subset_ideal(gens, deg).holds != oracle) {
                d = "monomial ideal oracle mismatch";
                return false;
            }
        }
        // (d) Wilson consistency is asserted inside ae_codimension; exercise it
        for (const auto& texts : std::vector<std::vector<std::string>>{
                 {"x", "y^3 + x*y"}, {"x", "y^3 + x^2*y"}, {"x", "y^3 - x^2*y"}, {"x^2", "y"}}) {
            MapGerm f = parse_germ(texts, r2);
            ae_codimension(f);  // throws on Wilson inconsistency
        }
        // (e) truncation-morphism and Leibniz randomized checks
        std::uniform_int_distribution<int> coef(-5, 5);
        for (int trial = 0; trial < 200; ++trial) {
            Polynomial f(r2), g(r2);
            for (const auto& m : enumerate_monomials(2, 0, 3)) {
                if (rng() % 3 == 0) f.add_term(m, Scalar(coef(rng)));
                if (rng() % 3 == 0) g.add_term(m, Scalar(coef(rng)));
            }
            int k = static_cast<int>(rng() % 5);
            if (!((f * g).truncated(k) == (f.truncated(k) * g.truncated(k)).truncated(k))) {
                d = "truncation morphism failed";
                return false;
            }
            int v = static_cast<int>(rng() % 2);
            if (!((f * g).derivative(v) == f.derivative(v) * g + g.derivative(v) * f)) {
                d = "Leibniz failed";
                return false;
            }
        }
        d = "invariance, Euler, Nakayama oracle, Wilson, truncation/Leibniz";
        return true;
    });

    // 12. Ae-cod of the (8,6) normal form at lambda = 3 (the documented
    //     stretch benchmark; sparse elimination brings it into CI range).
    criterion("C12 Ae-cod((8,6) normal form at 3) = 1 [slow tier]", [](std::string& d) {
        UnimodularGerm F = unimodular_normal_form(8, 6, Rat(3));
        CodimResult r = ae_codimension(F.full, 6);
        d = "Ae-cod = " + std::to_string(r.value) +
            (r.wilson_consistent && *r.wilson_consistent ? ", Wilson consistent" : "");
        return r.value == 1;
    });

    if (failures == 0) {
        std::cout << "acceptance: all criteria pass" << std::endl;
        return 0;
    }
    std::cout << "acceptance: " << failures << " criteria FAILED" << std::endl;
    return 1;
}
