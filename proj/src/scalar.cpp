#include "germkit/scalar.hpp"

#include <algorithm>
#include <sstream>

namespace germkit {

ZPoly ZPoly::monomial(const Int& c, int deg) {
    ZPoly p;
    if (c != 0) {
        p.coeffs_.assign(deg + 1, Int(0));
        p.coeffs_[deg] = c;
    }
    return p;
}

const Int& ZPoly::coeff(int i) const {
    static const Int zero(0);
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) return zero;
    return coeffs_[i];
}

const Int& ZPoly::leading() const {
    if (coeffs_.empty()) throw error("leading coefficient of zero polynomial");
    return coeffs_.back();
}

Int ZPoly::abs_height() const {
    Int s = 0;
    for (const Int& c : coeffs_) s += abs(c);
    return s;
}

void ZPoly::normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

ZPoly ZPoly::operator-() const {
    ZPoly r = *this;
    for (Int& c : r.coeffs_) c = -c;
    return r;
}

ZPoly ZPoly::operator+(const ZPoly& o) const {
    ZPoly r;
    r.coeffs_.resize(std::max(coeffs_.size(), o.coeffs_.size()), Int(0));
    for (size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] = coeff(static_cast<int>(i)) + o.coeff(static_cast<int>(i));
    r.normalize();
    return r;
}

ZPoly ZPoly::operator-(const ZPoly& o) const { return *this + (-o); }

ZPoly ZPoly::operator*(const ZPoly& o) const {
    if (is_zero() || o.is_zero()) return ZPoly();
    ZPoly r;
    r.coeffs_.assign(coeffs_.size() + o.coeffs_.size() - 1, Int(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < o.coeffs_.size(); ++j)
            r.coeffs_[i + j] += coeffs_[i] * o.coeffs_[j];
    r.normalize();
    return r;
}

Int ZPoly::content() const {
    Int g = 0;
    for (const Int& c : coeffs_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

ZPoly ZPoly::divide_by_content(const Int& c) const {
    if (c == 0 || c == 1) return *this;
    ZPoly r = *this;
    for (Int& x : r.coeffs_) {
        Int q, rem;
        mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
        if (rem != 0) throw error("content division not exact");
        x = q;
    }
    return r;
}

ZPoly ZPoly::divided_by(const ZPoly& d) const {
    if (d.is_zero()) throw error("polynomial division by zero");
    if (is_zero()) return ZPoly();
    if (degree() < d.degree()) throw error("polynomial division not exact");
    std::vector<Int> rem = coeffs_;
    std::vector<Int> quot(degree() - d.degree() + 1, Int(0));
    for (int i = degree(); i >= d.degree(); --i) {
        Int q, r;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rem[i].get_mpz_t(), d.leading().get_mpz_t());
        if (r != 0) throw error("polynomial division not exact");
        quot[i - d.degree()] = q;
        if (q != 0)
            for (int j = 0; j <= d.degree(); ++j) rem[i - d.degree() + j] -= q * d.coeffs_[j];
    }
    for (const Int& c : rem)
        if (c != 0) throw error("polynomial division not exact");
    ZPoly result;
    result.coeffs_ = std::move(quot);
    result.normalize();
    return result;
}

bool ZPoly::divides(const ZPoly& multiple) const {
    if (is_zero()) return multiple.is_zero();
    if (multiple.is_zero()) return true;
    if (multiple.degree() < degree()) return false;
    // Pseudo-division: lead(d)^k * multiple = q*d + r; divisible iff r == 0
    // and the content works out.  Simpler: attempt exact division of
    // c*multiple by this for c = lead(this)^(deg diff + 1).
    Int lead_pow;
    mpz_pow_ui(lead_pow.get_mpz_t(), leading().get_mpz_t(),
               static_cast<unsigned long>(multiple.degree() - degree() + 1));
    ZPoly scaled = multiple;
    for (Int& c : scaled.coeffs_) c *= lead_pow;
    // Long division with remainder check only.
    std::vector<Int> rem = scaled.coeffs_;
    for (int i = scaled.degree(); i >= degree(); --i) {
        if (rem[i] == 0) continue;
        Int q, r;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rem[i].get_mpz_t(), leading().get_mpz_t());
        if (r != 0) return false;
        for (int j = 0; j <= degree(); ++j) rem[i - degree() + j] -= q * coeffs_[j];
    }
    return std::all_of(rem.begin(), rem.end(), [](const Int& c) { return c == 0; });
}

ZPoly ZPoly::derivative() const {
    ZPoly r;
    if (degree() < 1) return r;
    r.coeffs_.resize(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) r.coeffs_[i - 1] = Int(static_cast<long>(i)) * coeffs_[i];
    r.normalize();
    return r;
}

Rat ZPoly::eval(const Rat& x) const {
    Rat acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + Rat(*it);
    return acc;
}

ZPoly ZPoly::gcd(const ZPoly& a, const ZPoly& b) {
    // Primitive Euclidean algorithm via pseudo-remainders.
    ZPoly u = a, v = b;
    Int cu = u.content(), cv = v.content();
    Int cg;
    mpz_gcd(cg.get_mpz_t(), cu.get_mpz_t(), cv.get_mpz_t());
    if (u.is_zero() && v.is_zero()) return ZPoly();
    if (u.is_zero()) { ZPoly g = v.divide_by_content(cv); if (g.leading() < 0) g = -g; return g * ZPoly(cg); }
    if (v.is_zero()) { ZPoly g = u.divide_by_content(cu); if (g.leading() < 0) g = -g; return g * ZPoly(cg); }
    u = u.divide_by_content(cu);
    v = v.divide_by_content(cv);
    while (!v.is_zero()) {
        if (u.degree() < v.degree()) std::swap(u, v);
        if (v.is_zero()) break;
        // pseudo-remainder of u by v
        Int lead_pow;
        mpz_pow_ui(lead_pow.get_mpz_t(), v.leading().get_mpz_t(),
                   static_cast<unsigned long>(u.degree() - v.degree() + 1));
        ZPoly r = u * ZPoly(lead_pow);
        std::vector<Int>& rc = r.coeffs_;
        for (int i = r.degree(); i >= v.degree(); --i) {
            if (rc[i] == 0) continue;
            Int q = rc[i] / v.leading();
            for (int j = 0; j <= v.degree(); ++j) rc[i - v.degree() + j] -= q * v.coeffs_[j];
        }
        r.normalize();
        Int c = r.content();
        if (c > 1) r = r.divide_by_content(c);
        u = v;
        v = r;
    }
    if (u.leading() < 0) u = -u;
    return u * ZPoly(cg);
}

ZPoly ZPoly::squarefree_part() const {
    if (is_zero()) return ZPoly();
    Int c = content();
    ZPoly p = divide_by_content(c);
    if (p.leading() < 0) p = -p;
    if (p.degree() <= 0) return ZPoly(Int(1));
    ZPoly g = gcd(p, p.derivative());
    Int gc = g.content();
    if (gc > 1) g = g.divide_by_content(gc);
    ZPoly sf = p.divided_by(g);
    Int sc = sf.content();
    if (sc > 1) sf = sf.divide_by_content(sc);
    if (sf.leading() < 0) sf = -sf;
    return sf;
}

std::string ZPoly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Int& c = coeff(i);
        if (c == 0) continue;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        Int a = abs(c);
        if (i == 0 || a != 1) os << a.get_str();
        if (i > 0) {
            if (a != 1) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------------------

Scalar::Scalar(const ZPoly& num, const ZPoly& den) : rat_(0) {
    if (den.is_zero()) throw error("scalar with zero denominator");
    frac_ = Frac{num, den};
    reduce_();
}

void Scalar::reduce_() {
    if (!frac_) return;
    ZPoly& n = frac_->num;
    ZPoly& d = frac_->den;
    if (n.is_zero()) { rat_ = 0; frac_.reset(); return; }
    ZPoly g = ZPoly::gcd(n, d);
    if (g.degree() > 0 || (g.degree() == 0 && g.leading() != 1)) {
        n = n.divided_by(g);
        d = d.divided_by(g);
    }
    if (d.leading() < 0) { n = -n; d = -d; }
    if (n.degree() <= 0 && d.degree() <= 0) {
        rat_ = Rat(n.is_zero() ? Int(0) : n.leading(), d.leading());
        rat_.canonicalize();
        frac_.reset();
    }
}

bool Scalar::is_zero() const { return !frac_ && rat_ == 0; }
bool Scalar::is_one() const { return !frac_ && rat_ == 1; }

const Rat& Scalar::rat() const {
    if (frac_) throw error("scalar is not rational");
    return rat_;
}

ZPoly Scalar::num_poly() const {
    if (frac_) return frac_->num;
    return ZPoly(rat_.get_num());
}

ZPoly Scalar::den_poly() const {
    if (frac_) return frac_->den;
    return ZPoly(rat_.get_den());
}

Scalar Scalar::operator-() const {
    if (!frac_) return Scalar(Rat(-rat_));
    return Scalar(-frac_->num, frac_->den);
}

Scalar Scalar::operator+(const Scalar& o) const {
    if (!frac_ && !o.frac_) return Scalar(Rat(rat_ + o.rat_));
    return Scalar(num_poly() * o.den_poly() + o.num_poly() * den_poly(), den_poly() * o.den_poly());
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    if (!frac_ && !o.frac_) return Scalar(Rat(rat_ * o.rat_));
    return Scalar(num_poly() * o.num_poly(), den_poly() * o.den_poly());
}

Scalar Scalar::operator/(const Scalar& o) const {
    if (o.is_zero()) throw error("scalar division by zero");
    if (!frac_ && !o.frac_) return Scalar(Rat(rat_ / o.rat_));
    return Scalar(num_poly() * o.den_poly(), den_poly() * o.num_poly());
}

Scalar Scalar::inverse() const { return Scalar(Rat(1)) / *this; }

bool Scalar::operator==(const Scalar& o) const {
    if (frac_.has_value() != o.frac_.has_value()) return false;
    if (!frac_) return rat_ == o.rat_;
    return *frac_ == *o.frac_;
}

Scalar Scalar::specialize(const Rat& value) const {
    if (!frac_) return *this;
    Rat d = frac_->den.eval(value);
    if (d == 0) throw error("specialization hits a denominator zero");
    return Scalar(Rat(frac_->num.eval(value) / d));
}

std::string Scalar::to_string(const std::string& param_name) const {
    if (!frac_) {
        return rat_.get_str();
    }
    std::string n = frac_->num.to_string(param_name);
    std::string d = frac_->den.to_string(param_name);
    if (d == "1") return n.find(' ') == std::string::npos ? n : "(" + n + ")";
    std::string np = n.find(' ') == std::string::npos ? n : "(" + n + ")";
    std::string dp = d.find(' ') == std::string::npos ? d : "(" + d + ")";
    return np + "/" + dp;
}

Scalar operator*(long a, const Scalar& s) { return Scalar(a) * s; }

std::vector<ZPoly> gcd_free_basis(std::vector<ZPoly> polys) {
    std::vector<ZPoly> basis;
    for (auto& p : polys) {
        ZPoly rest = p.squarefree_part();
        if (rest.degree() <= 0) continue;
        for (size_t i = 0; i < basis.size() && rest.degree() > 0; ++i) {
            ZPoly g = ZPoly::gcd(basis[i], rest);
            Int gc = g.content();
            if (gc > 1) g = g.divide_by_content(gc);
            if (g.degree() == 0) continue;
            if (g.degree() < basis[i].degree()) {
                // split the existing element
                ZPoly quo = basis[i].divided_by(g);
                Int qc = quo.content();
                if (qc > 1) quo = quo.divide_by_content(qc);
                basis[i] = g;
                if (quo.degree() > 0) basis.push_back(quo);
            }
            rest = rest.divided_by(g);
            Int rc = rest.content();
            if (rc > 1) rest = rest.divide_by_content(rc);
        }
        if (rest.degree() > 0) basis.push_back(rest);
    }
    std::sort(basis.begin(), basis.end(), [](const ZPoly& a, const ZPoly& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.abs_height() < b.abs_height();
    });
    return basis;
}

}  // namespace germkit
