#pragma once

// The classification tables as structured data (shipped as a plain-text file
// parsed at startup), entry verification against the computing modules,
// invariant-based classification, and the topologically-stable unimodular
// normal forms.

#include "germkit/stability.hpp"

#include <map>

namespace germkit {

struct AtlasEntry {
    std::string table;  // StableNP8 | BND99 | BND_6t2 | BND_ngtp | Bimodal107
    std::string name;
    std::string boardman;
    std::vector<std::string> vars;
    std::vector<std::string> map_texts;  // templates over vars/modulus/int params
    std::vector<std::string> int_params;
    std::vector<std::string> constraints;      // integer comparison chains
    std::optional<std::string> modulus;        // formal parameter name
    std::vector<std::string> exclude_factors;  // polynomials in the modulus
    std::string expect_kcod;                   // integer expressions
    std::string expect_corank;
    std::optional<std::string> expect_delta;
    std::vector<std::pair<std::string, int>> unfold_sigma;  // (monomial, component 1-based)
    std::optional<std::string> unfold_r;
    std::vector<std::string> unfold_sigma_m;  // component texts
    std::vector<std::string> weights_raw;  // weighted-homogeneity data (integer expressions)
    std::vector<std::string> degrees_raw;  // component degrees (integer expressions)
    int pair_n = 0, pair_p = 0;            // ambient pair for unimodular rows
    std::string note;
};

using IntAssignment = std::map<std::string, long>;

// Integer expression / comparison-chain evaluation over named parameters.
long eval_int_expr(const std::string& expr, const IntAssignment& env);
bool eval_constraints(const std::vector<std::string>& chains, const IntAssignment& env);

std::vector<AtlasEntry> load_atlas(const std::string& path);
const std::vector<AtlasEntry>& builtin_atlas();  // loads the shipped data file once
std::string default_atlas_path();

std::vector<AtlasEntry> table_entries(const std::string& table_id);

// All in-range assignments satisfying the constraints (deterministic scan).
std::vector<IntAssignment> valid_assignments(const AtlasEntry& entry, int limit = 64);
// First and last valid assignment (the "2 integer-parameter samples").
std::vector<IntAssignment> sample_assignments(const AtlasEntry& entry);

struct InstantiatedEntry {
    MapGerm germ;  // the core normal form over the (possibly formal) modulus
    IntAssignment assignment;
    std::optional<Rat> modulus_value;  // empty = formal
};

InstantiatedEntry instantiate(const AtlasEntry& entry, const IntAssignment& assignment,
                              std::optional<Rat> modulus_value = std::nullopt);

enum class CheckStatus { Pass, Fail, Inconclusive };

struct EntryCheck {
    std::string invariant;
    long expected = 0;
    std::optional<long> computed;  // empty when inconclusive
    CheckStatus status = CheckStatus::Inconclusive;
};

struct VerificationReport {
    std::string table, name;
    IntAssignment assignment;
    std::optional<Rat> modulus_value;
    std::vector<EntryCheck> checks;
    bool passed() const;
    bool inconclusive() const;
};

// Recomputes K-cod, corank, and delta (where expected) and compares.
// Undecided computations propagate as Inconclusive, never Pass.
VerificationReport verify_entry(const AtlasEntry& entry, const IntAssignment& assignment,
                                std::optional<Rat> modulus_value = std::nullopt,
                                int cutoff = 12);

struct ClassifyCandidate {
    std::string table, name;
    IntAssignment assignment;
};

struct ClassifyResult {
    bool fst = true;              // false: no candidates, flag set
    std::vector<ClassifyCandidate> candidates;
};

// Invariant-based matching: corank, K-cod, delta and Hilbert function of the
// rank-zero core where finite.  Ties (real forms) yield several candidates.
ClassifyResult classify(const MapGerm& f, int cutoff = 12);

// Builds the full topologically-stable normal form for a BND pair at the
// given modulus (rational off the excluded locus, or formal when empty).
// The parameterized pairs (10+k, 7) are built by quadratic suspension of the
// (10,7) row.  Throws with the vanishing excluded factor as witness when the
// modulus is exceptional.
UnimodularGerm unimodular_normal_form(int n, int p, std::optional<Rat> modulus_value,
                                      bool check_postconditions = true);

}  // namespace germkit
