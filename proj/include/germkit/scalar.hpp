#pragma once

// Exact coefficient arithmetic: rationals, and rationals extended by one
// formal parameter (fractions of integer univariate polynomials).
//
// Canonical form for parameter fractions: numerator and denominator are
// integer polynomials with gcd 1 (including integer content) and the
// denominator has a positive leading coefficient.  Equality is structural.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace germkit {

class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

using Int = mpz_class;
using Rat = mpq_class;

// Univariate polynomial with integer coefficients, coeffs[i] is the
// coefficient of lambda^i.  No trailing zeros stored.
class ZPoly {
public:
    ZPoly() = default;
    explicit ZPoly(const Int& c) { if (c != 0) coeffs_.push_back(c); }
    explicit ZPoly(long c) : ZPoly(Int(c)) {}
    static ZPoly monomial(const Int& c, int deg);

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero
    const Int& coeff(int i) const;
    const Int& leading() const;
    const std::vector<Int>& coeffs() const { return coeffs_; }

    // Sum of absolute values of the coefficients; size heuristic for pivoting.
    Int abs_height() const;

    ZPoly operator-() const;
    ZPoly operator+(const ZPoly& o) const;
    ZPoly operator-(const ZPoly& o) const;
    ZPoly operator*(const ZPoly& o) const;
    bool operator==(const ZPoly& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const ZPoly& o) const { return !(*this == o); }

    // gcd of all coefficients, nonnegative; 0 for the zero polynomial.
    Int content() const;
    ZPoly divide_by_content(const Int& c) const;

    // Exact division; throws if the division is not exact.
    ZPoly divided_by(const ZPoly& d) const;
    // Divisibility test (exact polynomial division over Q with integer check).
    bool divides(const ZPoly& multiple) const;

    ZPoly derivative() const;
    Rat eval(const Rat& x) const;

    // gcd in Z[lambda], primitive and with positive leading coefficient.
    static ZPoly gcd(const ZPoly& a, const ZPoly& b);
    // Product of distinct irreducible factors, primitive, positive leading coeff.
    ZPoly squarefree_part() const;

    std::string to_string(const std::string& var) const;

    void normalize();  // strips trailing zeros

    std::vector<Int>& mutable_coeffs() { return coeffs_; }

private:
    std::vector<Int> coeffs_;
};

// Element of Q or Q(lambda); which one is determined by usage (a Scalar
// carrying a nontrivial polynomial part only arises in parameterized rings).
class Scalar {
public:
    Scalar() : rat_(0) {}
    Scalar(const Rat& r) : rat_(r) { rat_.canonicalize(); }
    Scalar(const Int& n) : rat_(n) {}
    Scalar(long n) : rat_(n) {}
    Scalar(const ZPoly& num, const ZPoly& den);

    static Scalar of_int(long n) { return Scalar(n); }
    static Scalar parameter() { return Scalar(ZPoly::monomial(1, 1), ZPoly(1)); }

    bool is_rational() const { return !frac_; }
    bool is_zero() const;
    bool is_one() const;

    // Valid only when is_rational().
    const Rat& rat() const;
    // Numerator/denominator as integer polynomials (degree 0 when rational).
    ZPoly num_poly() const;
    ZPoly den_poly() const;

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;  // throws on zero divisor
    Scalar inverse() const;

    Scalar& operator+=(const Scalar& o) { *this = *this + o; return *this; }
    Scalar& operator-=(const Scalar& o) { *this = *this - o; return *this; }
    Scalar& operator*=(const Scalar& o) { *this = *this * o; return *this; }

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // Substitutes a rational value for the parameter.  Throws if the
    // denominator vanishes there.
    Scalar specialize(const Rat& value) const;

    std::string to_string(const std::string& param_name) const;

private:
    struct Frac {
        ZPoly num, den;
        bool operator==(const Frac& o) const { return num == o.num && den == o.den; }
    };
    void reduce_();

    Rat rat_;                    // used when !frac_
    std::optional<Frac> frac_;   // engaged only for genuine parameter fractions
};

Scalar operator*(long a, const Scalar& s);

// Refines a list of squarefree polynomials into pairwise-coprime factors;
// every input divides a product of outputs.
std::vector<ZPoly> gcd_free_basis(std::vector<ZPoly> polys);

}  // namespace germkit
