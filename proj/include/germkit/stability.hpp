#pragma once

// Infinitesimal stability, stable unfoldings, finite singularity type,
// A_e-codimension, the open-orbit necessary test and the plane classifier.

#include "germkit/determinacy.hpp"

namespace germkit {

struct StabilityReport {
    bool stable = false;
    std::optional<VectorFieldJet> witness;  // outside the span when unstable
    int jet_order_used = 0;                 // p + 1 window
};

// Mather's criterion: tf(Theta) + wf(Theta_p) + (f^*(M_p) + M^{p+1}) Theta_f
// = Theta_f, evaluated in J^{p+1} with a J^{p+2} agreement guard.
StabilityReport infinitesimally_stable(const MapGerm& f);

struct Unfolding {
    MapGerm germ;                        // F(x,u) = (f(x) + sum u_i s_i(x), u)
    std::vector<VectorFieldJet> sigmas;  // the Nf basis used
};

// Builds the stable unfolding from a basis of Nf; the stability postcondition
// is asserted unless the window exceeds `verify_cap` columns.
Unfolding stable_unfolding(const MapGerm& f, int cutoff = 12,
                           long verify_cap = kDefaultBasisCap);

struct FstReport {
    bool fst = false;
    bool undecided = false;  // cutoff reached without a certificate
    int cutoff = 0;
};

FstReport is_fst(const MapGerm& f, int cutoff = 12);

// Stabilized A_e-codimension with the Wilson cross-check
// A_e-cod = A-cod + (p - n) - p (monogerm case s = 1).
CodimResult ae_codimension(const MapGerm& f, int cutoff = 12);

// A topologically-stable unimodular normal form with its construction data.
struct UnimodularGerm {
    MapGerm full;   // F(x,u) = (f(x) + sum u_j s_j(x), u), n = s + r, p = t + r
    MapGerm core;   // f in the core variables
    std::vector<VectorFieldJet> sigmas;   // degree < deg f unfolding directions
    VectorFieldJet sigma_m;               // the modulus direction
    std::string label;
};

// Necessary open-orbit condition (i0): membership of (f_i * sigma_m) in
// f^*(M_t){sigma_j} + tf(M_s Theta_s) + wf(M_t Theta_t) for i = 1..t,
// decided as exact jet linear algebra in the core variables.
bool open_orbit_test(const UnimodularGerm& F);

// The full corollary conditions (i) + (ii) in the unfolding variables;
// combinatorially expensive, gated behind the CLI --full flag.
bool open_orbit_test_full(const UnimodularGerm& F);

enum class PlaneGermType { Regular, Fold, Cusp, NotGood, GoodHigher };
std::string plane_germ_type_name(PlaneGermType t);

// Whitney's plane classifier for f: (K^2,0) -> (K^2,0) with rational
// coefficients.  A good singular point gets a truncated-series
// parametrization of {J = 0} by exact implicit-function iteration.
PlaneGermType plane_germ_type(const MapGerm& f);

}  // namespace germkit
