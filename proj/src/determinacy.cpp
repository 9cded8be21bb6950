#include "germkit/determinacy.hpp"

namespace germkit {

namespace {

// True iff every window monomial vector with degree in [lo, hi] lies in s.
// Inserting unit vectors into the echelon and watching the dimension is
// cheaper than reducing each one separately.
bool contains_degree_range(Subspace& s, int lo, int hi) {
    const JetBasis& b = *s.ambient();
    for (int idx = 0; idx < b.monomial_count(); ++idx) {
        int d = b.monomials[static_cast<size_t>(idx)].degree();
        if (d < lo || d > hi) continue;
        for (int j = 0; j < b.p; ++j) {
            SparseRow unit{{b.column(idx, j), Scalar(1)}};
            if (s.insert(std::move(unit))) return false;
        }
    }
    return true;
}

}  // namespace

DeterminacyOutcome determinacy_bound(const MapGerm& f, Group g, int cutoff) {
    if (cutoff < 1) throw error("determinacy cutoff must be >= 1");
    DeterminacyOutcome out;
    out.cutoff = cutoff;
    const int eps = epsilon(g);
    for (int k = 1; k <= cutoff; ++k) {
        const int m = eps * k + 1;
        Subspace s = tangent_span(f, g, m, /*extended=*/false);
        if (contains_degree_range(s, k + 1, m)) {
            DeterminacyCertificate cert;
            cert.group = g;
            cert.k_base = k;
            cert.order_bound = m;
            cert.jet_order_used = m;
            out.certificate = cert;
            return out;
        }
        out.refuted_below_modulo_high_order = k;
    }
    return out;
}

CodimResult stabilized_codim(const MapGerm& f, Group g, bool extended, int cutoff) {
    DeterminacyOutcome det = determinacy_bound(f, g, cutoff);
    if (!det.decided()) throw NotFinitelyDetermined(cutoff);
    const int m = det.certificate->order_bound;
    std::vector<ZPoly> factors;
    long v1 = codim_in_window(f, g, m, extended, &factors);
    long v2 = codim_in_window(f, g, m + 1, extended, &factors);
    if (v1 != v2)
        throw error("internal invariant violation: codimension not stabilized at certified order");
    CodimResult res;
    res.value = v1;
    res.extended = extended;
    res.jet_order_used = m;
    res.certificate = *det.certificate;
    res.exceptional_pivots = gcd_free_basis(std::move(factors));
    return res;
}

long chi(const MapGerm& f, int l) {
    if (l < 1) throw error("chi requires l >= 1");
    Subspace s = tangent_span(f, Group::K, l - 1, /*extended=*/true);
    return s.ambient()->size() - s.dim();
}

bool bad_set_member(const MapGerm& f, int l) { return chi(f, l) >= l; }

}  // namespace germkit
