#pragma once

// Finite determinacy certificates, stabilized codimensions, and the chi_z
// bad-set measure.

#include "germkit/tangent.hpp"

namespace germkit {

struct DeterminacyCertificate {
    Group group = Group::K;
    int k_base = 0;       // M^{k_base+1} Theta_f contained in TGf certified
    int order_bound = 0;  // epsilon * k_base + 1
    int jet_order_used = 0;
};

struct DeterminacyOutcome {
    std::optional<DeterminacyCertificate> certificate;  // empty: undecided at cutoff
    int cutoff = 0;
    // Orders 1..refuted_below failed the jet containment; by the necessary
    // direction of the criterion this refutes k-determinacy for those k, but
    // only modulo the high-order terms cut by the J^{eps*k+1} window.
    int refuted_below_modulo_high_order = 0;
    bool decided() const { return certificate.has_value(); }
};

// Smallest k <= cutoff with M^{k+1} Theta_f inside TGf + M^{eps*k+2} Theta_f,
// checked in J^{eps*k+1}: every window monomial vector of degree k+1..eps*k+1
// must lie in the span of the truncated TGf generators.  For A and L (eps=2)
// the containment window is J^{2k+1}; the degree range k+1..2k+1 is the one
// subtle index computation here.  Undecided is not a proof of
// non-determinacy.
DeterminacyOutcome determinacy_bound(const MapGerm& f, Group g, int cutoff = 12);

struct CodimResult {
    long value = 0;
    bool extended = false;
    int jet_order_used = 0;
    DeterminacyCertificate certificate;
    std::vector<ZPoly> exceptional_pivots;  // candidate exceptional parameter factors
    // Wilson's formula A_e-cod = A-cod + (p - n) - p, evaluated when both
    // sides are computed.  It fails for germs with a split regular factor
    // (already for the suspended fold (x^2, y)), so it is recorded rather
    // than asserted.
    std::optional<bool> wilson_consistent;
};

struct NotFinitelyDetermined : error {
    explicit NotFinitelyDetermined(int cutoff)
        : error("not certified finitely determined at cutoff " + std::to_string(cutoff)),
          cutoff(cutoff) {}
    int cutoff;
};

// Runs determinacy_bound, evaluates codim_in_window at the certified order
// and order+1, asserts equality, and reports pivot polynomials when working
// over a parameter field.
CodimResult stabilized_codim(const MapGerm& f, Group g, bool extended, int cutoff = 12);

// chi_z = dim Theta_f / (tf(Theta_n) + (f^*(M_p) + M_n^l) Theta_f), computed
// in the window of degrees < l.
long chi(const MapGerm& f, int l);
bool bad_set_member(const MapGerm& f, int l);

}  // namespace germkit
