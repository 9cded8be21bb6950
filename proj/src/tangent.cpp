#include "germkit/tangent.hpp"

#include "germkit/determinacy.hpp"

#include <algorithm>
#include <functional>

namespace germkit {

int epsilon(Group g) {
    switch (g) {
        case Group::R:
        case Group::C:
        case Group::K: return 1;
        case Group::L:
        case Group::A: return 2;
    }
    throw error("bad group");
}

std::string group_name(Group g) {
    switch (g) {
        case Group::R: return "R";
        case Group::C: return "C";
        case Group::K: return "K";
        case Group::L: return "L";
        case Group::A: return "A";
    }
    throw error("bad group");
}

std::optional<Group> parse_group(const std::string& name) {
    if (name == "R") return Group::R;
    if (name == "C") return Group::C;
    if (name == "K") return Group::K;
    if (name == "L") return Group::L;
    if (name == "A") return Group::A;
    return std::nullopt;
}

namespace {

bool has_tf_part(Group g) { return g == Group::R || g == Group::K || g == Group::A; }
bool has_contact_part(Group g) { return g == Group::C || g == Group::K; }
bool has_omega_part(Group g) { return g == Group::L || g == Group::A; }

std::vector<Polynomial> partials(const MapGerm& f, int i, int k) {
    std::vector<Polynomial> cols;
    cols.reserve(f.p());
    for (const auto& comp : f.components) cols.push_back(comp.derivative(i).truncated(k));
    return cols;
}

// Truncated pullbacks f^beta for 1 <= |beta| <= k (ascending graded-lex over
// target exponents), paired with |beta|.
std::vector<Polynomial> omega_pullbacks(const MapGerm& f, int k) {
    std::vector<Polynomial> out;
    std::vector<Monomial> betas = enumerate_monomials(f.p(), 1, k);
    std::vector<std::vector<Polynomial>> powers(static_cast<size_t>(f.p()));
    auto power = [&](int i, int e) -> const Polynomial& {
        auto& cache = powers[static_cast<size_t>(i)];
        if (cache.empty()) cache.push_back(Polynomial::constant(f.ring, Scalar(1)));
        while (static_cast<int>(cache.size()) <= e)
            cache.push_back((cache.back() * f.components[static_cast<size_t>(i)]).truncated(k));
        return cache[static_cast<size_t>(e)];
    };
    for (const auto& beta : betas) {
        Polynomial t = Polynomial::constant(f.ring, Scalar(1));
        for (int i = 0; i < f.p() && !t.is_zero(); ++i)
            if (beta.exp(i) > 0) t = (t * power(i, beta.exp(i))).truncated(k);
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

std::vector<VectorFieldJet> tangent_generators(const MapGerm& f, Group g, int k, bool extended) {
    if (k < 0) throw error("jet order must be >= 0");
    std::vector<VectorFieldJet> out;
    const int n = f.n();
    const int p = f.p();
    if (has_tf_part(g)) {
        std::vector<Monomial> alphas = enumerate_monomials(n, extended ? 0 : 1, k);
        for (int i = 0; i < n; ++i) {
            std::vector<Polynomial> cols = partials(f, i, k);
            for (const auto& a : alphas) {
                Polynomial xa = Polynomial::term(f.ring, a, Scalar(1));
                VectorFieldJet v;
                for (const auto& c : cols) v.components.push_back((c * xa).truncated(k));
                if (!v.is_zero()) out.push_back(std::move(v));
            }
        }
    }
    if (has_contact_part(g)) {
        std::vector<Monomial> alphas = enumerate_monomials(n, 0, k);
        for (int i = 0; i < p; ++i) {
            for (const auto& a : alphas) {
                Polynomial xa = Polynomial::term(f.ring, a, Scalar(1));
                Polynomial prod = (f.components[static_cast<size_t>(i)] * xa).truncated(k);
                if (prod.is_zero()) continue;
                for (int j = 0; j < p; ++j) {
                    VectorFieldJet v = VectorFieldJet::zero(f.ring, p);
                    v.components[static_cast<size_t>(j)] = prod;
                    out.push_back(std::move(v));
                }
            }
        }
    }
    if (has_omega_part(g)) {
        std::vector<Polynomial> pulls = omega_pullbacks(f, k);
        for (const auto& pb : pulls) {
            if (pb.is_zero()) continue;
            for (int j = 0; j < p; ++j) {
                VectorFieldJet v = VectorFieldJet::zero(f.ring, p);
                v.components[static_cast<size_t>(j)] = pb;
                out.push_back(std::move(v));
            }
        }
        if (extended) {
            for (int j = 0; j < p; ++j) {
                VectorFieldJet v = VectorFieldJet::zero(f.ring, p);
                v.components[static_cast<size_t>(j)] = Polynomial::constant(f.ring, Scalar(1));
                out.push_back(std::move(v));
            }
        }
    }
    return out;
}

Subspace ideal_span(const std::vector<Polynomial>& generators, const RingPtr& ring, int k,
                    int min_degree, long cap) {
    JetBasisPtr ambient = enumerate_basis(ring, 1, k, min_degree, cap);
    std::vector<Monomial> alphas = enumerate_monomials(ring->nvars(), 0, k);
    std::vector<VectorFieldJet> rows;
    for (const auto& gpoly : generators) {
        for (const auto& a : alphas) {
            Polynomial xa = Polynomial::term(ring, a, Scalar(1));
            Polynomial prod = (gpoly * xa).truncated(k);
            if (prod.is_zero()) continue;
            VectorFieldJet v;
            v.components.push_back(std::move(prod));
            rows.push_back(std::move(v));
        }
    }
    return span(rows, ambient);
}

std::vector<SparseRow> embed_scalar_rows(const Subspace& scalar_span, int p, int comp) {
    std::vector<SparseRow> out;
    out.reserve(scalar_span.rows().size());
    for (const auto& r : scalar_span.rows()) {
        SparseRow e;
        e.reserve(r.size());
        for (const auto& entry : r) e.push_back({entry.col * p + comp, entry.value});
        out.push_back(std::move(e));
    }
    return out;
}

namespace {

// Reduced generating family: the contact and omega parts are component-wise
// copies of scalar spans, so their pre-eliminated echelons replace the raw
// x^a f_i e_j / (Y^b o f) e_j families.  Factors divided out inside the
// scalar sub-eliminations are collected so exceptional-value reporting stays
// sound.
std::vector<VectorFieldJet> reduced_generators(const MapGerm& f, Group g, int k, bool extended,
                                               long cap, std::vector<ZPoly>* sub_factors) {
    const int p = f.p();
    std::vector<VectorFieldJet> out;
    auto embed_into = [&](const Subspace& scalar_span) {
        for (const auto& r : scalar_span.rows()) {
            Polynomial poly = from_row(r, *scalar_span.ambient()).components[0];
            for (int j = 0; j < p; ++j) {
                VectorFieldJet v = VectorFieldJet::zero(f.ring, p);
                v.components[static_cast<size_t>(j)] = poly;
                out.push_back(std::move(v));
            }
        }
        if (sub_factors)
            for (const auto& fac : scalar_span.pivot_factors()) sub_factors->push_back(fac);
    };
    if (has_contact_part(g))
        embed_into(ideal_span(f.components, f.ring, k, extended ? 0 : 1, cap));
    if (has_omega_part(g)) {
        JetBasisPtr scalar_ambient = enumerate_basis(f.ring, 1, k, extended ? 0 : 1, cap);
        std::vector<VectorFieldJet> rows;
        for (auto& pb : omega_pullbacks(f, k)) {
            if (pb.is_zero()) continue;
            VectorFieldJet v;
            v.components.push_back(std::move(pb));
            rows.push_back(std::move(v));
        }
        if (extended) {
            VectorFieldJet one;
            one.components.push_back(Polynomial::constant(f.ring, Scalar(1)));
            rows.push_back(std::move(one));
        }
        embed_into(span(rows, scalar_ambient));
    }
    if (has_tf_part(g)) {
        std::vector<Monomial> alphas = enumerate_monomials(f.n(), extended ? 0 : 1, k);
        for (int i = 0; i < f.n(); ++i) {
            std::vector<Polynomial> cols = partials(f, i, k);
            for (const auto& a : alphas) {
                Polynomial xa = Polynomial::term(f.ring, a, Scalar(1));
                VectorFieldJet v;
                for (const auto& c : cols) v.components.push_back((c * xa).truncated(k));
                if (!v.is_zero()) out.push_back(std::move(v));
            }
        }
    }
    return out;
}

}  // namespace

Subspace tangent_span(const MapGerm& f, Group g, int k, bool extended, long cap) {
    const int p = f.p();
    JetBasisPtr ambient = enumerate_basis(f.ring, p, k, extended ? 0 : 1, cap);
    if (f.ring->parameter) {
        // Batch elimination keeps the pivot choice deterministic and records
        // every division for exceptional-value reporting.
        std::vector<ZPoly> sub;
        Subspace s = span(reduced_generators(f, g, k, extended, cap, &sub), ambient);
        for (const auto& fac : sub) s.note_cancelled_factor(fac);
        return s;
    }
    Subspace s(ambient);
    for (auto& v : reduced_generators(f, g, k, extended, cap, nullptr)) s.insert(v);
    return s;
}

namespace {

// Row-space-preserving premix (unit triangular transform): decorrelates the
// elimination artifacts between runs without moving the degeneration locus.
std::vector<VectorFieldJet> premixed(std::vector<VectorFieldJet> gens, int k) {
    std::reverse(gens.begin(), gens.end());
    for (size_t i = 1; i < gens.size(); ++i) {
        VectorFieldJet mixed = gens[i] + gens[i - 1];
        for (auto& c : mixed.components) c = c.truncated(k);
        gens[i] = std::move(mixed);
    }
    return gens;
}

// Certified artifact filter.  A candidate factor g is discarded when, for a
// prime p where g splits into distinct linear factors, the generator matrix
// specialized at every root of g mod p keeps the generic rank: the rank over
// each residue field bounds the rank at the corresponding algebraic value
// from below, so no rank drop happens anywhere on {g = 0}.
long rank_mod_p(const std::vector<VectorFieldJet>& gens, const JetBasis& basis, long p,
                long root) {
    const long cols = basis.size();
    std::vector<std::vector<long>> rows;
    for (const auto& v : gens) {
        SparseRow r = to_row(v, basis);
        std::vector<long> dense(static_cast<size_t>(cols), 0);
        bool nonzero = false;
        for (const auto& e : r) {
            const ZPoly num = e.value.num_poly();
            const ZPoly den = e.value.den_poly();
            Int nv = 0, pw = 1;
            for (int i = 0; i <= num.degree(); ++i) {
                nv = (nv + num.coeff(i) * pw) % p;
                pw = (pw * root) % p;
            }
            Int dv = 0;
            pw = 1;
            for (int i = 0; i <= den.degree(); ++i) {
                dv = (dv + den.coeff(i) * pw) % p;
                pw = (pw * root) % p;
            }
            nv = ((nv % p) + p) % p;
            dv = ((dv % p) + p) % p;
            if (dv == 0) return -1;  // unlucky reduction; caller retries
            Int dinv;
            if (mpz_invert(dinv.get_mpz_t(), dv.get_mpz_t(), Int(p).get_mpz_t()) == 0) return -1;
            long val = static_cast<long>(Int((nv * dinv) % p).get_si());
            if (val < 0) val += p;
            dense[static_cast<size_t>(e.col)] = val;
            if (val) nonzero = true;
        }
        if (nonzero) rows.push_back(std::move(dense));
    }
    long rank = 0;
    size_t r = 0;
    for (long c = 0; c < cols && r < rows.size(); ++c) {
        size_t sel = r;
        while (sel < rows.size() && rows[sel][static_cast<size_t>(c)] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[sel], rows[r]);
        Int pivinv;
        mpz_invert(pivinv.get_mpz_t(), Int(rows[r][static_cast<size_t>(c)]).get_mpz_t(),
                   Int(p).get_mpz_t());
        long inv = static_cast<long>(pivinv.get_si());
        for (size_t i = r + 1; i < rows.size(); ++i) {
            Int fi = (Int(rows[i][static_cast<size_t>(c)]) * inv) % p;
            long f = fi.get_si();
            if (!f) continue;
            for (long j = c; j < cols; ++j) {
                Int ti = (Int(rows[i][static_cast<size_t>(j)]) - Int(f) * rows[r][static_cast<size_t>(j)]) % p;
                long t = ti.get_si();
                if (t < 0) t += p;
                rows[i][static_cast<size_t>(j)] = t;
            }
        }
        ++r;
        ++rank;
    }
    return rank;
}

bool factor_is_artifact(const ZPoly& g, const std::vector<VectorFieldJet>& gens,
                        const JetBasis& basis, long generic_rank) {
    static const long primes[] = {10007, 10009, 10037, 10039, 10061, 10067, 10069, 10079,
                                  10091, 10093, 10099, 10103, 10111, 10133, 10139, 10141,
                                  10151, 10159, 10163, 10169, 10177, 10181, 10193, 10211};
    for (long p : primes) {
        if (g.leading() % p == 0) continue;
        std::vector<long> roots;
        for (long r = 0; r < p; ++r) {
            Int v = 0, pw = 1;
            for (int i = 0; i <= g.degree(); ++i) {
                v = (v + g.coeff(i) * pw) % p;
                pw = (pw * r) % p;
            }
            if (v % p == 0) roots.push_back(r);
        }
        if (static_cast<int>(roots.size()) != g.degree()) continue;  // not split; next prime
        bool all_full = true;
        for (long r : roots) {
            long rank = rank_mod_p(gens, basis, p, r);
            if (rank != generic_rank) { all_full = false; break; }
        }
        if (all_full) return true;  // certified: no rank drop anywhere on {g = 0}
        return false;               // witnessed drop at a root: keep the candidate
    }
    return false;  // no split prime found; keep conservatively
}

}  // namespace

long codim_in_window(const MapGerm& f, Group g, int k, bool extended,
                     std::vector<ZPoly>* pivot_factors, long cap) {
    Subspace s = tangent_span(f, g, k, extended, cap);
    if (pivot_factors && f.ring->parameter) {
        // The factor set of one elimination is a superset of the true
        // degeneration locus (outside the recorded zeros the echelon
        // specializes with full rank).  A second elimination over a premixed
        // generating set gives an independent superset; genuine rank-drop
        // factors divide both products.  Whatever survives the intersection
        // is then certified or discarded by modular rank checks.
        JetBasisPtr ambient = enumerate_basis(f.ring, f.p(), k, extended ? 0 : 1, cap);
        std::vector<ZPoly> sub;
        std::vector<VectorFieldJet> gens = reduced_generators(f, g, k, extended, cap, &sub);
        Subspace s2 = span(premixed(gens, k), ambient);
        if (s2.dim() != s.dim())
            throw error("internal invariant violation: premixed span changed rank");
        // The sub-elimination factors are common to both runs.
        ZPoly prod2(Int(1));
        for (const auto& fac : s2.pivot_factors()) prod2 = prod2 * fac;
        for (const auto& fac : sub) prod2 = prod2 * fac;
        std::vector<ZPoly> run1 = s.pivot_factors();
        for (const auto& fac : sub) run1.push_back(fac);
        for (const auto& fac : run1) {
            ZPoly common = ZPoly::gcd(fac, prod2).squarefree_part();
            if (common.degree() == 0) continue;
            if (factor_is_artifact(common, gens, *ambient, s.dim())) continue;
            pivot_factors->push_back(common);
        }
    } else if (pivot_factors) {
        for (const auto& fac : s.pivot_factors()) pivot_factors->push_back(fac);
    }
    return s.ambient()->size() - s.dim();
}

HilbertData local_algebra(const MapGerm& f, int k) {
    if (k < 1) throw error("jet order must be >= 1");
    Subspace s = ideal_span(f.components, f.ring, k, 0);
    HilbertData h;
    h.dims_by_degree.assign(static_cast<size_t>(k) + 1, 0);
    const auto& monos = s.ambient()->monomials;
    size_t pi = 0;
    const auto& pivots = s.pivots();
    for (long c = 0; c < s.ambient()->size(); ++c) {
        if (pi < pivots.size() && pivots[pi] == c) { ++pi; continue; }
        ++h.dims_by_degree[static_cast<size_t>(monos[static_cast<size_t>(c)].degree())];
        ++h.total;
    }
    while (h.dims_by_degree.size() > 1 && h.dims_by_degree.back() == 0) h.dims_by_degree.pop_back();
    return h;
}

int corank(const MapGerm& f) {
    RingPtr ring = f.ring;
    JetBasisPtr ambient = enumerate_basis(ring, 1, 1, 1);
    Subspace s(ambient);
    for (const auto& comp : f.components) {
        VectorFieldJet v;
        v.components.push_back(comp.truncated(1));
        s.insert(v);
    }
    return f.n() - s.dim();
}

namespace {

// Substitutes x_i <- subs[i] (same ring), truncated.
Polynomial substitute(const Polynomial& poly, const std::vector<Polynomial>& subs, int max_degree) {
    return compose_truncated(poly, subs, max_degree);
}

}  // namespace

MapGerm rank_reduce(const MapGerm& f, int jet_order) {
    const int n = f.n();
    const int p = f.p();
    // Linear part, row-reduced over the coefficient field with row ops only.
    std::vector<std::vector<Scalar>> L(static_cast<size_t>(p), std::vector<Scalar>(static_cast<size_t>(n), Scalar(0)));
    for (int j = 0; j < p; ++j)
        for (const auto& [m, c] : f.components[static_cast<size_t>(j)].terms())
            if (m.degree() == 1)
                for (int i = 0; i < n; ++i)
                    if (m.exp(i) == 1) L[static_cast<size_t>(j)][static_cast<size_t>(i)] = c;
    // Gaussian elimination tracking the transform T with T*L in reduced form.
    std::vector<std::vector<Scalar>> T(static_cast<size_t>(p), std::vector<Scalar>(static_cast<size_t>(p), Scalar(0)));
    for (int j = 0; j < p; ++j) T[static_cast<size_t>(j)][static_cast<size_t>(j)] = Scalar(1);
    std::vector<int> pivot_cols;
    int row = 0;
    for (int col = 0; col < n && row < p; ++col) {
        int sel = -1;
        for (int r = row; r < p; ++r)
            if (!L[static_cast<size_t>(r)][static_cast<size_t>(col)].is_zero()) { sel = r; break; }
        if (sel < 0) continue;
        std::swap(L[static_cast<size_t>(sel)], L[static_cast<size_t>(row)]);
        std::swap(T[static_cast<size_t>(sel)], T[static_cast<size_t>(row)]);
        Scalar inv = L[static_cast<size_t>(row)][static_cast<size_t>(col)].inverse();
        for (int c2 = 0; c2 < n; ++c2) L[static_cast<size_t>(row)][static_cast<size_t>(c2)] *= inv;
        for (int c2 = 0; c2 < p; ++c2) T[static_cast<size_t>(row)][static_cast<size_t>(c2)] *= inv;
        for (int r = 0; r < p; ++r) {
            if (r == row) continue;
            Scalar c = L[static_cast<size_t>(r)][static_cast<size_t>(col)];
            if (c.is_zero()) continue;
            for (int c2 = 0; c2 < n; ++c2)
                L[static_cast<size_t>(r)][static_cast<size_t>(c2)] -= c * L[static_cast<size_t>(row)][static_cast<size_t>(c2)];
            for (int c2 = 0; c2 < p; ++c2)
                T[static_cast<size_t>(r)][static_cast<size_t>(c2)] -= c * T[static_cast<size_t>(row)][static_cast<size_t>(c2)];
        }
        pivot_cols.push_back(col);
        ++row;
    }
    const int r = row;
    if (r == 0) return f;
    // g = T*f: first r components have linear part x_{c_i} + (non-pivot vars).
    std::vector<Polynomial> g(static_cast<size_t>(p), Polynomial(f.ring));
    for (int j = 0; j < p; ++j)
        for (int l = 0; l < p; ++l)
            g[static_cast<size_t>(j)] = g[static_cast<size_t>(j)] +
                f.components[static_cast<size_t>(l)] * T[static_cast<size_t>(j)][static_cast<size_t>(l)];
    // Source linear change making the linear part of g_i exactly x_{c_i}:
    // x_{c_i} <- x_{c_i} - sum of the non-pivot linear coefficients.
    std::vector<Polynomial> lin_subs;
    std::vector<bool> is_pivot(static_cast<size_t>(n), false);
    for (int c : pivot_cols) is_pivot[static_cast<size_t>(c)] = true;
    for (int i = 0; i < n; ++i) lin_subs.push_back(Polynomial::variable(f.ring, i));
    for (int idx = 0; idx < r; ++idx) {
        int ci = pivot_cols[static_cast<size_t>(idx)];
        Polynomial repl = Polynomial::variable(f.ring, ci);
        for (int i = 0; i < n; ++i) {
            if (is_pivot[static_cast<size_t>(i)]) continue;
            const Scalar a = L[static_cast<size_t>(idx)][static_cast<size_t>(i)];
            if (!a.is_zero()) repl = repl - Polynomial::variable(f.ring, i) * a;
        }
        lin_subs[static_cast<size_t>(ci)] = std::move(repl);
    }
    for (auto& comp : g) comp = substitute(comp, lin_subs, jet_order + 1);
    // Newton iteration: coordinates where g_i = x_{c_i} exactly mod high order.
    std::vector<Polynomial> psi;
    for (int i = 0; i < n; ++i) psi.push_back(Polynomial::variable(f.ring, i));
    for (int iter = 0; iter < jet_order; ++iter) {
        bool clean = true;
        std::vector<Polynomial> next = psi;
        for (int idx = 0; idx < r; ++idx) {
            int ci = pivot_cols[static_cast<size_t>(idx)];
            Polynomial err = substitute(g[static_cast<size_t>(idx)], psi, jet_order) -
                             Polynomial::variable(f.ring, ci);
            if (!err.is_zero()) clean = false;
            next[static_cast<size_t>(ci)] = (psi[static_cast<size_t>(ci)] - err).truncated(jet_order);
        }
        psi = std::move(next);
        if (clean) break;
    }
    // Core: remaining components with pivot variables set to zero.
    std::vector<std::string> core_vars;
    for (int i = 0; i < n; ++i)
        if (!is_pivot[static_cast<size_t>(i)]) core_vars.push_back(f.ring->variables[static_cast<size_t>(i)]);
    RingPtr core_ring = make_ring(core_vars, f.ring->parameter, f.ring->excluded_locus);
    // Substitution x_i -> 0 for pivots, core variable otherwise, evaluated by
    // composing psi with the inclusion of the core coordinates.
    std::vector<Polynomial> incl;
    {
        int ci = 0;
        for (int i = 0; i < n; ++i) {
            if (is_pivot[static_cast<size_t>(i)]) incl.push_back(Polynomial(core_ring));
            else incl.push_back(Polynomial::variable(core_ring, ci++));
        }
    }
    MapGerm core;
    core.ring = core_ring;
    for (int j = r; j < p; ++j) {
        Polynomial comp = substitute(g[static_cast<size_t>(j)], psi, jet_order);
        core.components.push_back(compose_truncated(comp, incl, jet_order));
    }
    return core;
}

DeltaResult delta(const MapGerm& f, int cutoff_k) {
    if (cutoff_k < 2) throw error("delta cutoff must be >= 2");
    MapGerm core = rank_reduce(f, cutoff_k + 1);
    DeltaResult res;
    res.cutoff = cutoff_k;
    for (int k = 1; k <= cutoff_k; ++k) {
        Subspace s = ideal_span(core.components, core.ring, k, 0);
        std::vector<Monomial> top = enumerate_monomials(core.ring->nvars(), k, k);
        bool certified = true;
        for (const auto& m : top) {
            VectorFieldJet v;
            v.components.push_back(Polynomial::term(core.ring, m, Scalar(1)));
            if (!s.contains(v)) { certified = false; break; }
        }
        if (certified) {
            res.finite = true;
            res.certificate_k = k;
            res.value = s.ambient()->size() - s.dim();
            return res;
        }
    }
    return res;
}

NormalSpace normal_space_Nf(const MapGerm& f, int cutoff) {
    DeterminacyOutcome det = determinacy_bound(f, Group::K, cutoff);
    if (!det.decided())
        throw NotFstError("germ not certified of finite singularity type at cutoff " +
                          std::to_string(cutoff));
    const int m = det.certificate->k_base + 1;
    NormalSpace ns;
    ns.jet_order = m;
    Subspace space = tangent_span(f, Group::K, m, /*extended=*/true);
    const JetBasis& ambient = *space.ambient();
    // Greedy completion, component-major with ascending graded-lex monomials
    // inside each component; this reproduces the published unfolding tables.
    for (int j = 0; j < f.p(); ++j) {
        for (int idx = 0; idx < ambient.monomial_count(); ++idx) {
            const Monomial& mono = ambient.monomials[static_cast<size_t>(idx)];
            if (mono.degree() < 1) continue;
            VectorFieldJet v = VectorFieldJet::zero(f.ring, f.p());
            v.components[static_cast<size_t>(j)] = Polynomial::term(f.ring, mono, Scalar(1));
            if (space.insert(v)) ns.basis.push_back(std::move(v));
        }
    }
    return ns;
}

Polynomial jacobian_det(const MapGerm& f) {
    const int n = f.n();
    if (n != f.p()) throw error("jacobian requires n == p");
    if (n == 0) return Polynomial::constant(f.ring, Scalar(1));
    std::vector<std::vector<Polynomial>> J(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            J[static_cast<size_t>(j)].push_back(f.components[static_cast<size_t>(j)].derivative(i));
    // Expansion by minors over column subsets.
    if (n > 20) throw error("jacobian dimension too large");
    std::vector<std::optional<Polynomial>> memo(static_cast<size_t>(1) << n);
    std::function<Polynomial(int, unsigned)> minor = [&](int rowi, unsigned mask) -> Polynomial {
        if (rowi == n) return Polynomial::constant(f.ring, Scalar(1));
        if (memo[mask]) return *memo[mask];
        Polynomial acc(f.ring);
        int sign = 1;
        for (int c = 0; c < n; ++c) {
            unsigned bit = 1u << c;
            if (!(mask & bit)) continue;
            const Polynomial& e = J[static_cast<size_t>(rowi)][static_cast<size_t>(c)];
            if (!e.is_zero()) {
                Polynomial sub = minor(rowi + 1, mask & ~bit);
                Polynomial termp = e * sub;
                acc = sign > 0 ? acc + termp : acc - termp;
            }
            sign = -sign;
        }
        memo[mask] = acc;
        return acc;
    };
    return minor(0, (1u << n) - 1);
}

Polynomial ideal_residue(const MapGerm& f, const Polynomial& poly, int k) {
    Subspace s = ideal_span(f.components, f.ring, k, 0);
    VectorFieldJet v;
    v.components.push_back(poly.truncated(k));
    SparseRow residue = s.reduce(to_row(v, *s.ambient()));
    return from_row(residue, *s.ambient()).components[0];
}

Polynomial jacobian_class(const MapGerm& f, int cutoff) {
    if (f.n() != f.p()) throw error("jacobian_class requires n == p");
    DeltaResult d = delta(f, cutoff);
    const int k = d.finite ? d.certificate_k : cutoff;
    return ideal_residue(f, jacobian_det(f), k);
}

}  // namespace germkit
