#include "germkit/stability.hpp"

#include <algorithm>

namespace germkit {

namespace {

// Span of tf(Theta) + wf(Theta_p) + f^*(M_p) Theta_f + M^{k0+1} Theta_f in
// the window of degrees 0..k; the M-part enters as unit vectors of degree
// > k0.
Subspace stability_span(const MapGerm& f, int k, int k0, long cap) {
    const int p = f.p();
    JetBasisPtr ambient = enumerate_basis(f.ring, p, k, 0, cap);
    Subspace s(ambient);
    // high-degree unit vectors first: instant pivots
    for (int idx = 0; idx < ambient->monomial_count(); ++idx) {
        if (ambient->monomials[static_cast<size_t>(idx)].degree() <= k0) continue;
        for (int j = 0; j < p; ++j)
            s.insert(SparseRow{{ambient->column(idx, j), Scalar(1)}});
    }
    Subspace rest = tangent_span(f, Group::A, k, /*extended=*/true, cap);
    for (const auto& row : rest.rows()) s.insert(row);
    Subspace ideal = ideal_span(f.components, f.ring, k, 0, cap);
    for (int j = 0; j < p; ++j)
        for (auto& row : embed_scalar_rows(ideal, p, j)) s.insert(std::move(row));
    return s;
}

StabilityReport stability_at_order(const MapGerm& f, int k, long cap) {
    const int p = f.p();
    Subspace s = stability_span(f, k, p, cap);
    StabilityReport rep;
    rep.jet_order_used = p + 1;
    rep.stable = (s.dim() == s.ambient()->size());
    if (!rep.stable) {
        long col = s.free_columns().front();
        VectorFieldJet w = VectorFieldJet::zero(f.ring, p);
        w.components[static_cast<size_t>(s.ambient()->column_component(col))] =
            Polynomial::term(f.ring, s.ambient()->column_monomial(col), Scalar(1));
        if (s.contains(w)) throw error("internal invariant violation: witness inside span");
        rep.witness = std::move(w);
    }
    return rep;
}

}  // namespace

StabilityReport infinitesimally_stable(const MapGerm& f) {
    const int p = f.p();
    StabilityReport rep = stability_at_order(f, p + 1, kDefaultBasisCap);
    // The criterion truncates faithfully at J^{p+1}; evaluate one order higher
    // as a guard against window bookkeeping mistakes.
    StabilityReport guard = stability_at_order(f, p + 2, kDefaultBasisCap);
    if (rep.stable != guard.stable)
        throw error("internal invariant violation: stability verdict depends on window");
    return rep;
}

namespace {

Polynomial lift_polynomial(const Polynomial& poly, const RingPtr& big,
                           const std::vector<int>& var_map) {
    Polynomial out(big);
    for (const auto& [m, c] : poly.terms()) {
        std::vector<int> exps(static_cast<size_t>(big->nvars()), 0);
        for (int i = 0; i < m.nvars(); ++i) exps[static_cast<size_t>(var_map[static_cast<size_t>(i)])] = m.exp(i);
        out.add_term(Monomial(std::move(exps)), c);
    }
    return out;
}

std::vector<std::string> fresh_parameter_names(const RingSpec& ring, int r,
                                               const std::string& stem) {
    std::vector<std::string> names;
    for (int i = 1; i <= r; ++i) {
        std::string candidate = stem + std::to_string(i);
        while (ring.var_index(candidate) >= 0 ||
               (ring.parameter && *ring.parameter == candidate))
            candidate += "_";
        names.push_back(candidate);
    }
    return names;
}

}  // namespace

Unfolding stable_unfolding(const MapGerm& f, int cutoff, long verify_cap) {
    NormalSpace ns = normal_space_Nf(f, cutoff);
    const int r = static_cast<int>(ns.basis.size());
    const int n = f.n();
    const int p = f.p();
    std::vector<std::string> vars = f.ring->variables;
    std::vector<std::string> unames = fresh_parameter_names(*f.ring, r, "u");
    for (const auto& u : unames) vars.push_back(u);
    RingPtr big = make_ring(vars, f.ring->parameter, f.ring->excluded_locus);
    std::vector<int> var_map;
    for (int i = 0; i < n; ++i) var_map.push_back(i);

    Unfolding out;
    out.sigmas = ns.basis;
    out.germ.ring = big;
    for (int i = 0; i < p; ++i) {
        Polynomial comp = lift_polynomial(f.components[static_cast<size_t>(i)], big, var_map);
        for (int j = 0; j < r; ++j) {
            const Polynomial& sig = ns.basis[static_cast<size_t>(j)].components[static_cast<size_t>(i)];
            if (sig.is_zero()) continue;
            comp = comp + lift_polynomial(sig, big, var_map) * Polynomial::variable(big, n + j);
        }
        out.germ.components.push_back(std::move(comp));
    }
    for (int j = 0; j < r; ++j)
        out.germ.components.push_back(Polynomial::variable(big, n + j));
    out.germ.validate();

    // Postcondition: the construction is infinitesimally stable.
    long window_cols = 1;
    {
        // rough window size estimate: C(n+r+p+1, p+1) * (p+r)
        long nv = n + r, kk = p + r + 1, binom = 1;
        for (int i = 1; i <= kk; ++i) binom = binom * (nv + i) / i;
        window_cols = binom * (p + r);
    }
    if (window_cols <= verify_cap) {
        StabilityReport rep = infinitesimally_stable(out.germ);
        if (!rep.stable)
            throw error("internal invariant violation: stable unfolding failed the criterion");
    }
    return out;
}

FstReport is_fst(const MapGerm& f, int cutoff) {
    FstReport rep;
    rep.cutoff = cutoff;
    try {
        stabilized_codim(f, Group::K, /*extended=*/true, cutoff);
        rep.fst = true;
    } catch (const NotFinitelyDetermined&) {
        rep.fst = false;
        rep.undecided = true;
    }
    return rep;
}

CodimResult ae_codimension(const MapGerm& f, int cutoff) {
    DeterminacyOutcome det = determinacy_bound(f, Group::A, cutoff);
    if (!det.decided()) throw NotFinitelyDetermined(cutoff);
    const int m = det.certificate->order_bound;
    std::vector<ZPoly> factors;
    long ae1 = codim_in_window(f, Group::A, m, /*extended=*/true, &factors);
    long ae2 = codim_in_window(f, Group::A, m + 1, /*extended=*/true, &factors);
    if (ae1 != ae2)
        throw error("internal invariant violation: A_e-codim not stabilized at certified order");
    long a1 = codim_in_window(f, Group::A, m, /*extended=*/false, &factors);
    long a2 = codim_in_window(f, Group::A, m + 1, /*extended=*/false, &factors);
    if (a1 != a2)
        throw error("internal invariant violation: A-codim not stabilized at certified order");
    CodimResult res;
    res.value = ae1;
    res.extended = true;
    res.jet_order_used = m;
    res.certificate = *det.certificate;
    // Wilson's formula, monogerm case: A_e-cod = A-cod + (p - n) - p.
    res.wilson_consistent = (ae1 == a1 + (f.p() - f.n()) - f.p());
    res.exceptional_pivots = gcd_free_basis(std::move(factors));
    return res;
}

namespace {

int vf_degree(const VectorFieldJet& v) {
    int d = -1;
    for (const auto& c : v.components) d = std::max(d, c.degree());
    return d;
}

// Pullback monomials f^beta truncated; |beta| from lo to hi.
std::vector<Polynomial> pullbacks(const std::vector<Polynomial>& comps, const RingPtr& ring,
                                  int lo, int hi, int k) {
    std::vector<Polynomial> out;
    const int t = static_cast<int>(comps.size());
    std::vector<Monomial> betas = enumerate_monomials(t, lo, hi);
    std::vector<std::vector<Polynomial>> powers(static_cast<size_t>(t));
    auto power = [&](int i, int e) -> const Polynomial& {
        auto& cache = powers[static_cast<size_t>(i)];
        if (cache.empty()) cache.push_back(Polynomial::constant(ring, Scalar(1)));
        while (static_cast<int>(cache.size()) <= e)
            cache.push_back((cache.back() * comps[static_cast<size_t>(i)]).truncated(k));
        return cache[static_cast<size_t>(e)];
    };
    for (const auto& beta : betas) {
        Polynomial tpoly = Polynomial::constant(ring, Scalar(1));
        for (int i = 0; i < t && !tpoly.is_zero(); ++i)
            if (beta.exp(i) > 0) tpoly = (tpoly * power(i, beta.exp(i))).truncated(k);
        if (!tpoly.is_zero()) out.push_back(std::move(tpoly));
    }
    return out;
}

}  // namespace

bool open_orbit_test(const UnimodularGerm& F) {
    const MapGerm& f = F.core;
    const int t = f.p();
    int fdeg = 0;
    for (const auto& c : f.components) fdeg = std::max(fdeg, c.degree());
    const int k = fdeg + vf_degree(F.sigma_m);
    JetBasisPtr ambient = enumerate_basis(f.ring, t, k, 1);
    Subspace s(ambient);
    // f^*(M_t){sigma_j}
    for (const auto& pb : pullbacks(f.components, f.ring, 1, k, k))
        for (const auto& sig : F.sigmas) s.insert(sig.mul(pb, k));
    // tf(M_s Theta_s) and wf(M_t Theta_t)
    Subspace tk = tangent_span(f, Group::A, k, /*extended=*/false);
    for (const auto& row : tk.rows()) s.insert(row);
    for (int i = 0; i < t; ++i) {
        VectorFieldJet v = F.sigma_m.mul(f.components[static_cast<size_t>(i)], k);
        if (!s.contains(v)) return false;
    }
    return true;
}

bool open_orbit_test_full(const UnimodularGerm& F) {
    const MapGerm& full = F.full;
    const int t = F.core.p();
    const int r = static_cast<int>(F.sigmas.size());
    const int n = full.n();
    const RingPtr& ring = full.ring;
    // psi block: the first t target components only
    std::vector<Polynomial> ftilde(full.components.begin(), full.components.begin() + t);
    int fdeg = 0;
    for (const auto& c : ftilde) fdeg = std::max(fdeg, c.degree());
    std::vector<int> var_map;
    for (int i = 0; i < F.core.n(); ++i) var_map.push_back(i);
    auto lift_vf = [&](const VectorFieldJet& v) {
        VectorFieldJet out;
        for (const auto& c : v.components) out.components.push_back(lift_polynomial(c, ring, var_map));
        return out;
    };
    VectorFieldJet sigma_m = lift_vf(F.sigma_m);
    const int k = fdeg + vf_degree(sigma_m);
    JetBasisPtr ambient = enumerate_basis(ring, t, k, 1);
    Subspace s(ambient);
    // pullbacks of target monomials through the full germ (Y and U blocks)
    std::vector<Polynomial> pb1 = pullbacks(full.components, ring, 1, k, k);
    std::vector<Polynomial> pb2 = pullbacks(full.components, ring, 2, k, k);
    std::vector<VectorFieldJet> lifted_sigmas;
    for (const auto& sig : F.sigmas) lifted_sigmas.push_back(lift_vf(sig));
    // F^*(M_p){sigma_j}
    for (const auto& pb : pb1)
        for (const auto& sig : lifted_sigmas) s.insert(sig.mul(pb, k));
    // wF(M_p Psi): first t components only
    for (const auto& pb : pb1)
        for (int j = 0; j < t; ++j) {
            VectorFieldJet v = VectorFieldJet::zero(ring, t);
            v.components[static_cast<size_t>(j)] = pb;
            s.insert(v);
        }
    // F^*(M_p^2) Psi
    for (const auto& pb : pb2)
        for (int j = 0; j < t; ++j) {
            VectorFieldJet v = VectorFieldJet::zero(ring, t);
            v.components[static_cast<size_t>(j)] = pb;
            s.insert(v);
        }
    // tF(M_n Psi_n): x-directions only, coefficients in the full maximal ideal
    std::vector<Monomial> alphas = enumerate_monomials(n, 1, k);
    for (int i = 0; i < n; ++i) {
        VectorFieldJet dcol;
        for (const auto& c : ftilde) dcol.components.push_back(c.derivative(i).truncated(k));
        if (dcol.is_zero()) continue;
        for (const auto& a : alphas) {
            Polynomial xa = Polynomial::term(ring, a, Scalar(1));
            VectorFieldJet v = dcol.mul(xa, k);
            if (!v.is_zero()) s.insert(v);
        }
    }
    // condition (i): ftilde_i * sigma_m; condition (ii): u_j * sigma_m
    for (int i = 0; i < t; ++i)
        if (!s.contains(sigma_m.mul(ftilde[static_cast<size_t>(i)], k))) return false;
    for (int j = 0; j < r; ++j) {
        Polynomial uj = Polynomial::variable(ring, n - r + j);
        if (!s.contains(sigma_m.mul(uj, k))) return false;
    }
    return true;
}

std::string plane_germ_type_name(PlaneGermType t) {
    switch (t) {
        case PlaneGermType::Regular: return "Regular";
        case PlaneGermType::Fold: return "Fold";
        case PlaneGermType::Cusp: return "Cusp";
        case PlaneGermType::NotGood: return "NotGood";
        case PlaneGermType::GoodHigher: return "GoodHigher";
    }
    throw error("bad plane germ type");
}

namespace {

// Solves J(x, s(x)) = 0 (or the transposed problem) to order N by exact
// implicit-function iteration; requires dJ/d(second var)(0) != 0.
Polynomial implicit_series(const Polynomial& J, bool solve_second, int order) {
    auto line = make_ring({"t"});
    Polynomial tvar = Polynomial::variable(line, 0);
    Polynomial s(line);
    int main_var = solve_second ? 0 : 1;
    int solved_var = solve_second ? 1 : 0;
    Scalar slope = J.derivative(solved_var).constant_term();
    if (slope.is_zero()) throw error("implicit function solve needs a nonzero partial");
    for (int m = 1; m <= order; ++m) {
        std::vector<Polynomial> subs(2, Polynomial(line));
        subs[static_cast<size_t>(main_var)] = tvar;
        subs[static_cast<size_t>(solved_var)] = s;
        Polynomial err = compose_truncated(J, subs, m);
        Scalar cm = err.coeff(Monomial({m}));
        if (!cm.is_zero())
            s = s - Polynomial::term(line, Monomial({m}), cm / slope);
    }
    // explicit failure if the residual does not vanish to the working order
    std::vector<Polynomial> subs(2, Polynomial(line));
    subs[static_cast<size_t>(main_var)] = tvar;
    subs[static_cast<size_t>(solved_var)] = s;
    if (!compose_truncated(J, subs, order).is_zero())
        throw error("singular-set parametrization failed at series order " + std::to_string(order));
    return s;
}

}  // namespace

PlaneGermType plane_germ_type(const MapGerm& f) {
    if (f.n() != 2 || f.p() != 2) throw error("plane classifier requires n = p = 2");
    if (f.ring->parameter)
        throw error("plane classifier requires rational coefficients; specialize first");
    Polynomial J = jacobian_det(f);
    if (!J.constant_term().is_zero()) return PlaneGermType::Regular;
    Scalar jx = J.derivative(0).constant_term();
    Scalar jy = J.derivative(1).constant_term();
    if (jx.is_zero() && jy.is_zero()) return PlaneGermType::NotGood;
    const bool solve_second = !jy.is_zero();  // parametrize by x when J_y(0) != 0
    for (int order : {4, 8}) {
        Polynomial s = implicit_series(J, solve_second, order);
        auto line = s.ring();
        Polynomial tvar = Polynomial::variable(line, 0);
        std::vector<Polynomial> phi(2, Polynomial(line));
        phi[solve_second ? 0 : 1] = tvar;
        phi[solve_second ? 1 : 0] = s;
        bool fold = false, cusp = false;
        bool second_nonzero = false;
        for (const auto& comp : f.components) {
            Polynomial curve = compose_truncated(comp, phi, 3);
            if (!curve.coeff(Monomial({1})).is_zero()) fold = true;
            if (!curve.coeff(Monomial({2})).is_zero()) second_nonzero = true;
        }
        cusp = !fold && second_nonzero;
        if (fold) return PlaneGermType::Fold;
        if (cusp) return PlaneGermType::Cusp;
        // both derivative tests vanish: escalate once, then report GoodHigher
    }
    return PlaneGermType::GoodHigher;
}

}  // namespace germkit
