#include "germkit/triviality.hpp"

#include <algorithm>

namespace germkit {

namespace {

int x_degree(const Monomial& m, int skip_index) {
    int d = 0;
    for (int i = 0; i < m.nvars(); ++i)
        if (i != skip_index) d += m.exp(i);
    return d;
}

bool x_homogeneous(const Polynomial& p, int skip_index, int m) {
    for (const auto& [mono, c] : p.terms())
        if (x_degree(mono, skip_index) != m) return false;
    return true;
}

}  // namespace

PowerContainment power_subset_ideal(const std::vector<Polynomial>& generators, int d) {
    if (generators.empty()) throw error("empty generator list");
    if (d < 1) throw error("power_subset_ideal requires d >= 1");
    const RingPtr& ring = generators[0].ring();
    for (const auto& g : generators) {
        if (!g.ring()->same_as(*ring)) throw error("ring mismatch among generators");
        if (!g.constant_term().is_zero()) throw error("generators must be constant-free");
    }
    JetBasisPtr ambient = enumerate_basis(ring, 1, d, 0);
    SpanWithWitness sw(ambient);
    // generator rows x^a * g_j, recorded for witness decoding
    std::vector<std::pair<Monomial, int>> tags;
    std::vector<Monomial> alphas = enumerate_monomials(ring->nvars(), 0, d);
    for (int j = 0; j < static_cast<int>(generators.size()); ++j)
        for (const auto& a : alphas) {
            Polynomial prod =
                (generators[static_cast<size_t>(j)] * Polynomial::term(ring, a, Scalar(1)))
                    .truncated(d);
            if (prod.is_zero()) continue;
            VectorFieldJet v;
            v.components.push_back(std::move(prod));
            sw.add_generator(to_row(v, *ambient));
            tags.emplace_back(a, j);
        }
    IdealCertificate cert;
    cert.degree = d;
    for (const auto& mono : enumerate_monomials(ring->nvars(), d, d)) {
        VectorFieldJet target;
        target.components.push_back(Polynomial::term(ring, mono, Scalar(1)));
        auto combo = sw.express(to_row(target, *ambient));
        if (!combo) return {};
        std::vector<IdealWitnessTerm> terms;
        for (size_t g = 0; g < combo->size(); ++g)
            if (!(*combo)[g].is_zero())
                terms.push_back({tags[g].first, tags[g].second, (*combo)[g]});
        // independent re-verification by exact expansion
        Polynomial recon(ring);
        for (const auto& t : terms)
            recon = recon + generators[static_cast<size_t>(t.generator)] *
                                Polynomial::term(ring, t.multiplier, t.coeff);
        if (recon.truncated(d) != Polynomial::term(ring, mono, Scalar(1)))
            throw error("internal invariant violation: ideal certificate failed re-verification");
        cert.monomials.push_back(mono);
        cert.combos.push_back(std::move(terms));
    }
    PowerContainment out;
    out.holds = true;
    out.certificate = std::move(cert);
    return out;
}

IdealPowerEquality ideal_times_power_equals(const std::vector<Polynomial>& generators, int a,
                                            int d) {
    if (generators.empty()) throw error("empty generator list");
    const RingPtr& ring = generators[0].ring();
    std::vector<Polynomial> prods;
    for (const auto& g : generators)
        for (const auto& m : enumerate_monomials(ring->nvars(), a, a))
            prods.push_back(g * Polynomial::term(ring, m, Scalar(1)));
    IdealPowerEquality out;
    out.inside_power = std::all_of(prods.begin(), prods.end(), [&](const Polynomial& p) {
        return p.is_zero() || p.low_degree() >= d;
    });
    out.contains_power = power_subset_ideal(prods, d).holds;
    return out;
}

std::vector<Polynomial> Family::time_derivative() const {
    std::vector<Polynomial> out;
    for (const auto& c : germ.components) out.push_back(c.derivative(time_index));
    return out;
}

void Family::validate() const {
    if (time_index < 0 || time_index >= germ.n())
        throw error("family time variable out of range");
    if (germ.n() < 2) throw error("family needs at least one space variable");
    for (const auto& c : germ.components)
        for (const auto& [m, coef] : c.terms())
            if (x_degree(m, time_index) == 0)
                throw error("family components must vanish on the parameter axis");
}

std::string triviality_group_name(TrivialityGroup g) {
    switch (g) {
        case TrivialityGroup::C: return "C";
        case TrivialityGroup::K: return "K";
        case TrivialityGroup::A: return "A";
    }
    throw error("bad triviality group");
}

std::optional<TrivialityCertificate> thom_levine_certificate(const Family& family,
                                                             TrivialityGroup group, int k) {
    family.validate();
    if (k < 1) throw error("thom_levine_certificate requires k >= 1");
    const MapGerm& F = family.germ;
    const RingPtr& ring = F.ring;
    const int n = F.n();
    const int p = F.p();
    const int t = family.time_index;
    JetBasisPtr ambient = enumerate_basis(ring, p, k, 0);
    SpanWithWitness sw(ambient);

    struct Tag {
        enum Kind { V, W, M } kind;
        int i = 0, j = 0, l = 0;
        Monomial mono;      // source monomial (V, M)
        Monomial beta;      // target monomial (W)
        int tpow = 0;       // power of t (W)
    };
    std::vector<Tag> tags;

    std::vector<Polynomial> dFdt = family.time_derivative();
    std::vector<Monomial> source_monos = enumerate_monomials(n, 1, k);

    if (group != TrivialityGroup::C) {
        // v-part: m * dF/dx_i, m with positive space degree (v_i(0,t) = 0)
        for (int i = 0; i < n; ++i) {
            if (i == t) continue;
            VectorFieldJet col;
            for (const auto& c : F.components) col.components.push_back(c.derivative(i).truncated(k));
            if (col.is_zero()) continue;
            for (const auto& m : source_monos) {
                if (x_degree(m, t) < 1) continue;
                VectorFieldJet v = col.mul(Polynomial::term(ring, m, Scalar(1)), k);
                if (v.is_zero()) continue;
                Tag tag;
                tag.kind = Tag::V;
                tag.i = i;
                tag.mono = m;
                tags.push_back(tag);
                sw.add_generator(to_row(v, *ambient));
            }
        }
    }
    if (group == TrivialityGroup::A) {
        // w-part: (Y^beta t^c o F) e_j with |beta| >= 1
        std::vector<std::vector<Polynomial>> powers(static_cast<size_t>(p));
        auto power = [&](int i, int e) -> const Polynomial& {
            auto& cache = powers[static_cast<size_t>(i)];
            if (cache.empty()) cache.push_back(Polynomial::constant(ring, Scalar(1)));
            while (static_cast<int>(cache.size()) <= e)
                cache.push_back((cache.back() * F.components[static_cast<size_t>(i)]).truncated(k));
            return cache[static_cast<size_t>(e)];
        };
        Polynomial tvar = Polynomial::variable(ring, t);
        for (const auto& beta : enumerate_monomials(p, 1, k)) {
            Polynomial pull = Polynomial::constant(ring, Scalar(1));
            for (int i = 0; i < p && !pull.is_zero(); ++i)
                if (beta.exp(i) > 0) pull = (pull * power(i, beta.exp(i))).truncated(k);
            for (int c = 0; beta.degree() + c <= k; ++c) {
                if (pull.is_zero()) break;
                for (int j = 0; j < p; ++j) {
                    VectorFieldJet v = VectorFieldJet::zero(ring, p);
                    v.components[static_cast<size_t>(j)] = pull;
                    if (v.is_zero()) continue;
                    Tag tag;
                    tag.kind = Tag::W;
                    tag.j = j;
                    tag.beta = beta;
                    tag.tpow = c;
                    tags.push_back(tag);
                    sw.add_generator(to_row(v, *ambient));
                }
                pull = (pull * tvar).truncated(k);
            }
        }
    } else {
        // matrix part: m * F_l e_j, m unrestricted
        std::vector<Monomial> all_monos = enumerate_monomials(n, 0, k);
        for (int l = 0; l < p; ++l) {
            for (const auto& m : all_monos) {
                Polynomial prod =
                    (F.components[static_cast<size_t>(l)] * Polynomial::term(ring, m, Scalar(1)))
                        .truncated(k);
                if (prod.is_zero()) continue;
                for (int j = 0; j < p; ++j) {
                    VectorFieldJet v = VectorFieldJet::zero(ring, p);
                    v.components[static_cast<size_t>(j)] = prod;
                    Tag tag;
                    tag.kind = Tag::M;
                    tag.j = j;
                    tag.l = l;
                    tag.mono = m;
                    tags.push_back(tag);
                    sw.add_generator(to_row(v, *ambient));
                }
            }
        }
    }

    VectorFieldJet target;
    for (const auto& c : dFdt) target.components.push_back(c.truncated(k));
    auto combo = sw.express(to_row(target, *ambient));
    if (!combo) return std::nullopt;

    TrivialityCertificate cert;
    cert.group = group;
    cert.jet_order = k;
    cert.v.assign(static_cast<size_t>(n), Polynomial(ring));
    cert.matrix.assign(static_cast<size_t>(p),
                       std::vector<Polynomial>(static_cast<size_t>(p), Polynomial(ring)));
    std::vector<std::string> wvars;
    for (int j = 0; j < p; ++j) wvars.push_back("Y" + std::to_string(j + 1));
    wvars.push_back("t");
    RingPtr target_ring = make_ring(wvars, ring->parameter, ring->excluded_locus);
    cert.w.assign(static_cast<size_t>(p), Polynomial(target_ring));
    for (size_t g = 0; g < combo->size(); ++g) {
        const Scalar& c = (*combo)[g];
        if (c.is_zero()) continue;
        const Tag& tag = tags[g];
        if (tag.kind == Tag::V) {
            cert.v[static_cast<size_t>(tag.i)] =
                cert.v[static_cast<size_t>(tag.i)] + Polynomial::term(ring, tag.mono, c);
        } else if (tag.kind == Tag::M) {
            cert.matrix[static_cast<size_t>(tag.j)][static_cast<size_t>(tag.l)] =
                cert.matrix[static_cast<size_t>(tag.j)][static_cast<size_t>(tag.l)] +
                Polynomial::term(ring, tag.mono, c);
        } else {
            std::vector<int> exps(static_cast<size_t>(p + 1), 0);
            for (int i = 0; i < p; ++i) exps[static_cast<size_t>(i)] = tag.beta.exp(i);
            exps[static_cast<size_t>(p)] = tag.tpow;
            cert.w[static_cast<size_t>(tag.j)] =
                cert.w[static_cast<size_t>(tag.j)] + Polynomial::term(target_ring, Monomial(exps), c);
        }
    }

    // Independent re-verification by substitution.
    std::vector<Polynomial> rhs(static_cast<size_t>(p), Polynomial(ring));
    for (int j = 0; j < p; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i == t || cert.v[static_cast<size_t>(i)].is_zero()) continue;
            rhs[static_cast<size_t>(j)] =
                rhs[static_cast<size_t>(j)] +
                (cert.v[static_cast<size_t>(i)] * F.components[static_cast<size_t>(j)].derivative(i))
                    .truncated(k);
        }
        if (group == TrivialityGroup::A) {
            if (!cert.w[static_cast<size_t>(j)].is_zero()) {
                std::vector<Polynomial> subs = F.components;
                subs.push_back(Polynomial::variable(ring, t));
                rhs[static_cast<size_t>(j)] =
                    rhs[static_cast<size_t>(j)] +
                    compose_truncated(cert.w[static_cast<size_t>(j)], subs, k);
            }
        } else {
            for (int l = 0; l < p; ++l)
                rhs[static_cast<size_t>(j)] =
                    rhs[static_cast<size_t>(j)] + (cert.matrix[static_cast<size_t>(j)][static_cast<size_t>(l)] *
                                                   F.components[static_cast<size_t>(l)])
                                                      .truncated(k);
        }
        if (rhs[static_cast<size_t>(j)] != dFdt[static_cast<size_t>(j)].truncated(k))
            throw error("internal invariant violation: triviality certificate failed re-verification");
    }
    return cert;
}

namespace {

// Moves the time variable out of the variable block: either substitutes a
// rational value, or re-reads its powers as formal-parameter scalars.
Polynomial descend_time(const Polynomial& poly, const RingPtr& core_ring, int t,
                        const std::optional<Rat>& at) {
    Polynomial out(core_ring);
    for (const auto& [m, coef] : poly.terms()) {
        std::vector<int> exps;
        exps.reserve(static_cast<size_t>(m.nvars() - 1));
        int e = 0;
        for (int i = 0; i < m.nvars(); ++i) {
            if (i == t) e = m.exp(i);
            else exps.push_back(m.exp(i));
        }
        Scalar c = coef;
        if (e > 0) {
            if (at) {
                Rat scale(1);
                for (int q = 0; q < e; ++q) scale *= *at;
                c = c * Scalar(scale);
            } else {
                c = c * Scalar(ZPoly::monomial(1, e), ZPoly(1));
            }
        }
        out.add_term(Monomial(std::move(exps)), c);
    }
    return out;
}

}  // namespace

std::optional<ControlCertificate> lipschitz_control_certificate(const Family& family,
                                                                std::optional<Rat> at) {
    family.validate();
    const MapGerm& F = family.germ;
    const int t = family.time_index;
    if (F.ring->parameter)
        throw error("control certificates treat the deformation parameter as the only modulus");
    std::vector<std::string> core_vars;
    for (int i = 0; i < F.n(); ++i)
        if (i != t) core_vars.push_back(F.ring->variables[static_cast<size_t>(i)]);
    RingPtr core_ring =
        at ? make_ring(core_vars)
           : make_ring(core_vars, F.ring->variables[static_cast<size_t>(t)]);
    std::vector<Polynomial> comps, dcomps;
    for (const auto& c : F.components) comps.push_back(descend_time(c, core_ring, t, at));
    for (const auto& c : family.time_derivative())
        dcomps.push_back(descend_time(c, core_ring, t, at));

    int m = -1;
    for (const auto& c : comps) {
        int d = c.degree();
        if (m < 0) m = d;
        if (d != m || !x_homogeneous(c, -1, m))
            throw error("control certificate requires equal-degree homogeneous components");
    }
    for (const auto& c : dcomps)
        if (!c.is_zero() && !x_homogeneous(c, -1, m))
            throw error("grading mismatch in the time derivative");

    const int p = static_cast<int>(comps.size());
    Polynomial rho(core_ring);
    for (const auto& c : comps) rho = rho + c * c;
    JetBasisPtr ambient = enumerate_basis(core_ring, 1, 3 * m, 0);
    SpanWithWitness sw(ambient);
    std::vector<std::pair<Monomial, int>> tags;
    for (int j = 0; j < p; ++j)
        for (const auto& mono : enumerate_monomials(core_ring->nvars(), 2 * m, 2 * m)) {
            VectorFieldJet v;
            v.components.push_back(comps[static_cast<size_t>(j)] *
                                   Polynomial::term(core_ring, mono, Scalar(1)));
            sw.add_generator(to_row(v, *ambient));
            tags.emplace_back(mono, j);
        }
    ControlCertificate cert;
    cert.rho_sq = rho;
    cert.entry_degree = 2 * m;
    cert.matrix.assign(static_cast<size_t>(p),
                       std::vector<Polynomial>(static_cast<size_t>(p), Polynomial(core_ring)));
    for (int i = 0; i < p; ++i) {
        VectorFieldJet v;
        v.components.push_back(rho * dcomps[static_cast<size_t>(i)]);
        auto combo = sw.express(to_row(v, *ambient));
        if (!combo) return std::nullopt;
        for (size_t g = 0; g < combo->size(); ++g)
            if (!(*combo)[g].is_zero())
                cert.matrix[static_cast<size_t>(i)][static_cast<size_t>(tags[g].second)] =
                    cert.matrix[static_cast<size_t>(i)][static_cast<size_t>(tags[g].second)] +
                    Polynomial::term(core_ring, tags[g].first, (*combo)[g]);
    }
    // verification: exact identity, entries in M^{2m}
    for (int i = 0; i < p; ++i) {
        Polynomial rhs(core_ring);
        for (int j = 0; j < p; ++j) {
            const Polynomial& a = cert.matrix[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (a.is_zero()) continue;
            if (a.low_degree() < 2 * m)
                throw error("internal invariant violation: control entry below M^{2m}");
            rhs = rhs + a * comps[static_cast<size_t>(j)];
        }
        if (rhs != rho * dcomps[static_cast<size_t>(i)])
            throw error("internal invariant violation: control identity failed re-verification");
    }
    return cert;
}

namespace {

bool leading_minors_positive(std::vector<std::vector<Rat>> g) {
    // Symmetric Gaussian elimination: all pivots positive iff all leading
    // principal minors are positive (Sylvester).
    const size_t n = g.size();
    for (size_t k = 0; k < n; ++k) {
        if (g[k][k] <= 0) return false;
        for (size_t i = k + 1; i < n; ++i) {
            Rat f = g[i][k] / g[k][k];
            for (size_t j = k; j < n; ++j) g[i][j] -= f * g[k][j];
        }
    }
    return true;
}

}  // namespace

ControlPackage control_package(const Family& family, std::optional<Rat> at) {
    ControlPackage pkg;
    pkg.identity = lipschitz_control_certificate(family, at);
    if (at) {
        // specialize the components and test the Gram surrogate over Q
        const MapGerm& F = family.germ;
        const int t = family.time_index;
        std::vector<std::string> core_vars;
        for (int i = 0; i < F.n(); ++i)
            if (i != t) core_vars.push_back(F.ring->variables[static_cast<size_t>(i)]);
        RingPtr core_ring = make_ring(core_vars);
        std::vector<Polynomial> comps;
        for (const auto& c : F.components) comps.push_back(descend_time(c, core_ring, t, at));
        int m = 0;
        for (const auto& c : comps) m = std::max(m, c.degree());
        pkg.gram = gram_definiteness(comps, m);
    }
    pkg.granted = pkg.identity.has_value() && pkg.gram == GramOutcome::Positive;
    return pkg;
}

GramOutcome gram_definiteness(const std::vector<Polynomial>& components, int m) {
    if (components.empty()) throw error("empty component list");
    const RingPtr& ring = components[0].ring();
    if (ring->parameter) throw error("gram test requires rational coefficients; specialize first");
    Polynomial rho(ring);
    for (const auto& c : components) {
        if (!x_homogeneous(c, -1, m))
            throw error("gram test requires homogeneous degree-m components");
        rho = rho + c * c;
    }
    std::vector<Monomial> basis = enumerate_monomials(ring->nvars(), m, m);
    const size_t N = basis.size();
    auto index_of = [&](const Monomial& mono) {
        auto it = std::lower_bound(basis.begin(), basis.end(), mono);
        return static_cast<size_t>(it - basis.begin());
    };
    // pair lists per degree-2m monomial
    std::vector<Monomial> quartics = enumerate_monomials(ring->nvars(), 2 * m, 2 * m);
    auto pairs_for = [&](const Monomial& w) {
        std::vector<std::pair<size_t, size_t>> out;
        for (size_t i = 0; i < N; ++i)
            for (size_t j = i; j < N; ++j)
                if (basis[i] * basis[j] == w) out.emplace_back(i, j);
        return out;
    };
    auto build = [&](int mode) {
        // mode 0: diagonal-favoring; mode 1: equal split; mode 2: Gram of the
        // squares sum_i c_i c_i^T.
        std::vector<std::vector<Rat>> g(N, std::vector<Rat>(N, Rat(0)));
        if (mode == 2) {
            for (const auto& c : components) {
                std::vector<Rat> vec(N, Rat(0));
                for (const auto& [mono, coef] : c.terms()) vec[index_of(mono)] = coef.rat();
                for (size_t i = 0; i < N; ++i)
                    for (size_t j = 0; j < N; ++j) g[i][j] += vec[i] * vec[j];
            }
            return g;
        }
        for (const auto& w : quartics) {
            Scalar c = rho.coeff(w);
            if (c.is_zero()) continue;
            Rat val = c.rat();
            auto prs = pairs_for(w);
            if (prs.empty()) continue;
            if (mode == 0) {
                // all weight to the square pair when one exists, otherwise
                // equally among the pairs avoiding pure powers
                auto square = std::find_if(prs.begin(), prs.end(),
                                           [](const auto& pr) { return pr.first == pr.second; });
                if (square != prs.end()) {
                    g[square->first][square->first] += val;
                } else {
                    std::vector<std::pair<size_t, size_t>> preferred;
                    for (const auto& pr : prs) {
                        bool pure = false;
                        for (size_t idx : {pr.first, pr.second}) {
                            int nz = 0;
                            for (int vi = 0; vi < basis[idx].nvars(); ++vi)
                                if (basis[idx].exp(vi) > 0) ++nz;
                            if (nz <= 1) pure = true;
                        }
                        if (!pure) preferred.push_back(pr);
                    }
                    const auto& use = preferred.empty() ? prs : preferred;
                    Rat share = val / Rat(2 * static_cast<long>(use.size()));
                    for (const auto& [i, j] : use) {
                        g[i][j] += share;
                        g[j][i] += share;
                    }
                }
            } else {
                long ordered = 0;
                for (const auto& [i, j] : prs) ordered += (i == j) ? 1 : 2;
                Rat share = val / Rat(ordered);
                for (const auto& [i, j] : prs) {
                    if (i == j) g[i][i] += share;
                    else { g[i][j] += share; g[j][i] += share; }
                }
            }
        }
        return g;
    };
    for (int mode : {0, 1, 2}) {
        auto g = build(mode);
        // the Gram must reproduce rho^2 exactly
        Polynomial recon(ring);
        for (size_t i = 0; i < N; ++i)
            for (size_t j = 0; j < N; ++j)
                if (g[i][j] != 0)
                    recon.add_term(basis[i] * basis[j], Scalar(g[i][j]));
        if (recon != rho)
            throw error("internal invariant violation: gram candidate does not reproduce rho^2");
        if (leading_minors_positive(g)) return GramOutcome::Positive;
    }
    return GramOutcome::Inconclusive;
}

}  // namespace germkit
