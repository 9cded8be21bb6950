#pragma once

// Truncated modules of vector fields along a germ, coordinatized by an
// ordered monomial x target-component basis, with exact linear algebra.
//
// Elimination is fraction-free on integer-polynomial rows (Bareiss-style
// two-term updates with content stripping) when coefficients involve the
// formal parameter, and classical exact elimination over the rationals
// otherwise.  Pivot polynomials are recorded so callers can report candidate
// exceptional parameter values.

#include "germkit/polynomial.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace germkit {

struct JetBasis {
    RingPtr ring;  // carries variable names and the optional parameter
    int p = 1;
    int k = 0;
    int min_degree = 0;
    std::vector<Monomial> monomials;  // ascending graded-lex

    int monomial_count() const { return static_cast<int>(monomials.size()); }
    long size() const { return static_cast<long>(monomials.size()) * p; }
    // Column of (monomial index, target component).
    long column(int mono_index, int comp) const { return static_cast<long>(mono_index) * p + comp; }
    int mono_index(const Monomial& m) const;  // -1 if outside the window
    const Monomial& column_monomial(long col) const { return monomials[col / p]; }
    int column_component(long col) const { return static_cast<int>(col % p); }
    bool same_as(const JetBasis& o) const;
};

using JetBasisPtr = std::shared_ptr<const JetBasis>;

// Guard against runaway windows; configurable.
inline constexpr long kDefaultBasisCap = 5'000'000;

JetBasisPtr enumerate_basis(const RingPtr& ring, int p, int k, int min_degree,
                            long cap = kDefaultBasisCap);

// A truncated element of Theta_f: p polynomial components.
struct VectorFieldJet {
    std::vector<Polynomial> components;

    static VectorFieldJet zero(const RingPtr& ring, int p);
    bool is_zero() const;
    VectorFieldJet operator+(const VectorFieldJet& o) const;
    VectorFieldJet operator-(const VectorFieldJet& o) const;
    VectorFieldJet scaled(const Scalar& c) const;
    VectorFieldJet mul(const Polynomial& g, int max_degree) const;
    std::string to_string() const;
};

struct SparseEntry {
    long col;
    Scalar value;
};

using SparseRow = std::vector<SparseEntry>;  // ascending column order

SparseRow to_row(const VectorFieldJet& v, const JetBasis& basis);
VectorFieldJet from_row(const SparseRow& row, const JetBasis& basis);

class Subspace {
public:
    Subspace() = default;
    explicit Subspace(JetBasisPtr ambient) : ambient_(std::move(ambient)) {}

    const JetBasisPtr& ambient() const { return ambient_; }
    int dim() const { return static_cast<int>(rows_.size()); }
    const std::vector<SparseRow>& rows() const { return rows_; }
    const std::vector<long>& pivots() const { return pivots_; }

    // Non-constant squarefree primitive parts of every pivot encountered,
    // deduplicated: the candidate exceptional parameter values.
    const std::vector<ZPoly>& pivot_factors() const { return pivot_factors_; }
    // Records a factor divided out by an upstream sub-elimination.
    void note_cancelled_factor(const ZPoly& f);

    // Reduces v against the echelon rows and inserts the remainder if nonzero.
    // Returns true if the row increased the dimension.
    bool insert(SparseRow row);
    bool insert(const VectorFieldJet& v);

    bool contains(const SparseRow& row) const;
    bool contains(const VectorFieldJet& v) const;

    // Residue of v after reduction (zero iff contained).
    SparseRow reduce(SparseRow row) const;

    // Column indices without a pivot, in ascending order.
    std::vector<long> free_columns() const;

    void merge(const Subspace& other);  // subspace sum, same ambient

private:
    friend Subspace span(const std::vector<VectorFieldJet>& vectors, const JetBasisPtr& ambient);
    void record_pivot(const Scalar& piv);
    void adopt(std::vector<SparseRow> rows, std::vector<long> pivots, std::vector<ZPoly> factors);

    JetBasisPtr ambient_;
    std::vector<SparseRow> rows_;          // sorted by pivot column
    std::vector<long> pivots_;             // pivots_[i] = leading column of rows_[i]
    std::vector<ZPoly> pivot_factors_;
};

Subspace span(const std::vector<VectorFieldJet>& vectors, const JetBasisPtr& ambient);
Subspace subspace_sum(const Subspace& a, const Subspace& b);

// Linear-combination solver: tracks how each echelon row was formed from the
// inserted generators so memberships come with expressing coefficients.
class SpanWithWitness {
public:
    explicit SpanWithWitness(JetBasisPtr ambient, int expected_generators = 0);

    // Adds a generator; keeps it whether or not it is independent.
    void add_generator(const SparseRow& row);
    int generator_count() const { return ngen_; }
    int dim() const { return dim_; }

    // If v is in the span, returns coefficients c with v = sum c_i gen_i.
    std::optional<std::vector<Scalar>> express(const SparseRow& v) const;

private:
    JetBasisPtr ambient_;
    int ngen_ = 0;
    int dim_ = 0;
    // Field-normalized echelon (pivot entries 1) with generator tracking.
    std::vector<SparseRow> rows_;
    std::vector<long> pivots_;
    std::vector<std::vector<Scalar>> combos_;  // combos_[i]: rows_[i] in terms of generators
};

// Specializes every entry at a rational parameter value (for generic-rank
// consistency checks).
SparseRow specialize_row(const SparseRow& row, const Rat& value);

}  // namespace germkit
