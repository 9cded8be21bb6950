#pragma once

// Exact multivariate polynomials over Q or Q(lambda), with jet truncation
// and truncated composition.  Terms are kept in canonical graded-lex order
// with no zero coefficients.

#include "germkit/scalar.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace germkit {

struct RingSpec {
    std::vector<std::string> variables;
    std::optional<std::string> parameter;
    std::optional<ZPoly> excluded_locus;  // nonvanishing assumption on the parameter

    int nvars() const { return static_cast<int>(variables.size()); }
    int var_index(const std::string& name) const;  // -1 if absent
    bool same_as(const RingSpec& o) const;
    void validate() const;
};

using RingPtr = std::shared_ptr<const RingSpec>;

RingPtr make_ring(std::vector<std::string> vars,
                  std::optional<std::string> parameter = std::nullopt,
                  std::optional<ZPoly> excluded_locus = std::nullopt);

class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<int> exps);
    static Monomial one(int nvars) { return Monomial(std::vector<int>(nvars, 0)); }

    int degree() const { return degree_; }
    int nvars() const { return static_cast<int>(exps_.size()); }
    int exp(int i) const { return exps_[i]; }
    const std::vector<int>& exps() const { return exps_; }

    Monomial operator*(const Monomial& o) const;
    bool divides(const Monomial& o) const;

    // Graded lexicographic order: lower degree first, then lexicographic on
    // exponent vectors (earlier variable more significant).
    bool operator<(const Monomial& o) const;
    bool operator==(const Monomial& o) const { return exps_ == o.exps_; }
    bool operator!=(const Monomial& o) const { return !(*this == o); }

    std::string to_string(const RingSpec& ring) const;

private:
    std::vector<int> exps_;
    int degree_ = 0;
};

// Monomials of given variable count with degree in [min_degree, max_degree],
// ascending graded-lex.
std::vector<Monomial> enumerate_monomials(int nvars, int min_degree, int max_degree);

class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {}
    Polynomial(RingPtr ring, const Scalar& constant);

    static Polynomial zero(RingPtr ring) { return Polynomial(std::move(ring)); }
    static Polynomial constant(RingPtr ring, const Scalar& c) { return Polynomial(std::move(ring), c); }
    static Polynomial variable(const RingPtr& ring, int var_index);
    static Polynomial term(RingPtr ring, Monomial m, Scalar c);

    const RingPtr& ring() const { return ring_; }
    const std::map<Monomial, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;        // -1 for zero
    int low_degree() const;    // smallest term degree, -1 for zero
    Scalar coeff(const Monomial& m) const;
    Scalar constant_term() const;

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(const Scalar& c) const;
    bool operator==(const Polynomial& o) const;
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial derivative(int var_index) const;
    Polynomial truncated(int max_degree) const;  // drops terms of degree > max_degree

    // Substitutes a rational value for the formal parameter.
    Polynomial specialize_parameter(const Rat& value) const;

    // Evaluates at a rational point (requires rational coefficients).
    Rat eval(const std::vector<Rat>& point) const;

    void add_term(const Monomial& m, const Scalar& c);  // accumulates, drops zeros

    std::string to_string() const;

private:
    void check_ring(const Polynomial& o) const;

    RingPtr ring_;
    std::map<Monomial, Scalar> terms_;
};

// g lives in a ring whose variables are placeholders for the components of f
// (arity must match); computes g(f_1,...,f_p) truncated at max_degree without
// expanding beyond it.  Every f_i must have zero constant term.
Polynomial compose_truncated(const Polynomial& g, const std::vector<Polynomial>& f,
                             int max_degree);

// Parses the expression grammar: integers, identifiers (ring variables or the
// parameter), + - * ^ with nonnegative integer exponents, parentheses.
// Implicit multiplication is rejected.  Errors carry a byte offset.
Polynomial parse_polynomial(const std::string& text, const RingPtr& ring);

struct MapGerm {
    RingPtr ring;
    std::vector<Polynomial> components;

    int n() const { return ring->nvars(); }
    int p() const { return static_cast<int>(components.size()); }

    MapGerm specialize_parameter(const Rat& value) const;
    void validate() const;  // zero constant terms, matching rings
};

MapGerm parse_germ(const std::vector<std::string>& component_texts, const RingPtr& ring);

}  // namespace germkit
