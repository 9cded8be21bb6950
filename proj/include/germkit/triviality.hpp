#pragma once

// Ideal-power containment certificates, Thom-Levine infinitesimal triviality
// of one-parameter families, and the bi-Lipschitz control-function systems.

#include "germkit/tangent.hpp"

namespace germkit {

// A term c * x^alpha * g_j of an expressing combination.
struct IdealWitnessTerm {
    Monomial multiplier;
    int generator = 0;
    Scalar coeff;
};

struct IdealCertificate {
    int degree = 0;  // the graded piece that was checked
    // combos[i]: expression of the i-th degree-d monomial modulo M^{d+1}
    std::vector<Monomial> monomials;
    std::vector<std::vector<IdealWitnessTerm>> combos;
};

struct PowerContainment {
    bool holds = false;
    std::optional<IdealCertificate> certificate;  // present when holds
};

// Decides M^d inside <generators> + M^{d+1} on the degree-d graded piece and
// upgrades to full containment by Nakayama; the certificate is re-verified by
// exact expansion before being returned.
PowerContainment power_subset_ideal(const std::vector<Polynomial>& generators, int d);

// Convenience for I * M^a containments: both directions of I*M^a = M^d.
struct IdealPowerEquality {
    bool contains_power = false;  // M^d inside I * M^a
    bool inside_power = false;    // I * M^a inside M^d
    bool equal() const { return contains_power && inside_power; }
};
IdealPowerEquality ideal_times_power_equals(const std::vector<Polynomial>& generators, int a,
                                            int d);

// One-parameter family: a germ over a ring in which one variable is the
// distinguished deformation parameter; every component vanishes on the
// parameter axis (f(0, t) = 0).
struct Family {
    MapGerm germ;
    int time_index = 0;

    int space_vars() const { return germ.n() - 1; }
    std::vector<Polynomial> time_derivative() const;
    void validate() const;
};

enum class TrivialityGroup { C, K, A };
std::string triviality_group_name(TrivialityGroup g);

struct TrivialityCertificate {
    TrivialityGroup group = TrivialityGroup::A;
    int jet_order = 0;
    std::vector<Polynomial> v;  // source coefficients, v_i(0, t) = 0
    // For A: w as polynomials over the target-and-time ring (w_j(0,t) = 0);
    // for C and K: the p x p matrix A with polynomial entries.
    std::vector<Polynomial> w;  // over target ring (Y_1..Y_p, t)
    std::vector<std::vector<Polynomial>> matrix;
};

// Solves the Thom-Levine equation at order k (joint degree in (x, t)):
//   dF/dt = sum_i v_i dF/dx_i + w o F         (A)
//   dF/dt = sum_i v_i dF/dx_i + A * F         (K; v = 0 for C)
// Empty result means no polynomial solution at this order, which is not a
// disproof of triviality.  Returned certificates are re-verified by exact
// substitution.
std::optional<TrivialityCertificate> thom_levine_certificate(const Family& family,
                                                             TrivialityGroup group, int k);

struct ControlCertificate {
    Polynomial rho_sq;                            // sum F_i^2
    std::vector<std::vector<Polynomial>> matrix;  // p x p, entries in M^{2m}
    int entry_degree = 0;                         // 2m
};

enum class GramOutcome { Positive, Inconclusive };

// Solves rho^2 * dF/dt = A * F exactly (graded, untruncated) for a family
// with components homogeneous of equal x-degree m; `at` specializes the
// modulus first.  Entry membership in M^{2m} and the exact identity are both
// verified before returning.
std::optional<ControlCertificate> lipschitz_control_certificate(const Family& family,
                                                                std::optional<Rat> at);

// Discrete surrogate for the control-function norm bounds: seeks a positive
// definite Gram representation of rho^2 over the degree-m monomial vector by
// an exact leading-minor test on a few canonical candidates.  Positive is
// sufficient; Inconclusive is not a failure.
GramOutcome gram_definiteness(const std::vector<Polynomial>& components, int m);

// The full control-function package: the matrix identity plus the Gram bound
// surrogate.  `granted` requires both; the identity alone does not make rho a
// control function.
struct ControlPackage {
    std::optional<ControlCertificate> identity;
    GramOutcome gram = GramOutcome::Inconclusive;
    bool granted = false;
};

ControlPackage control_package(const Family& family, std::optional<Rat> at);

}  // namespace germkit
