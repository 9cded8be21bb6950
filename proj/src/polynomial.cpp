#include "germkit/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace germkit {

int RingSpec::var_index(const std::string& name) const {
    for (size_t i = 0; i < variables.size(); ++i)
        if (variables[i] == name) return static_cast<int>(i);
    return -1;
}

bool RingSpec::same_as(const RingSpec& o) const {
    return variables == o.variables && parameter == o.parameter;
}

void RingSpec::validate() const {
    std::set<std::string> seen;
    for (const auto& v : variables) {
        if (!seen.insert(v).second) throw error("duplicate variable name: " + v);
        if (parameter && *parameter == v) throw error("parameter clashes with variable: " + v);
    }
    if (excluded_locus && excluded_locus->is_zero())
        throw error("excluded locus must be a nonzero polynomial");
    if (excluded_locus && !parameter)
        throw error("excluded locus given without a parameter");
}

RingPtr make_ring(std::vector<std::string> vars, std::optional<std::string> parameter,
                  std::optional<ZPoly> excluded_locus) {
    auto r = std::make_shared<RingSpec>();
    r->variables = std::move(vars);
    r->parameter = std::move(parameter);
    r->excluded_locus = std::move(excluded_locus);
    r->validate();
    return r;
}

Monomial::Monomial(std::vector<int> exps) : exps_(std::move(exps)) {
    for (int e : exps_) {
        if (e < 0) throw error("negative exponent in monomial");
        degree_ += e;
    }
}

Monomial Monomial::operator*(const Monomial& o) const {
    if (nvars() != o.nvars()) throw error("monomial arity mismatch");
    std::vector<int> e(exps_);
    for (int i = 0; i < nvars(); ++i) e[i] += o.exps_[i];
    return Monomial(std::move(e));
}

bool Monomial::divides(const Monomial& o) const {
    if (nvars() != o.nvars()) return false;
    for (int i = 0; i < nvars(); ++i)
        if (exps_[i] > o.exps_[i]) return false;
    return true;
}

bool Monomial::operator<(const Monomial& o) const {
    if (degree_ != o.degree_) return degree_ < o.degree_;
    return exps_ < o.exps_;
}

std::string Monomial::to_string(const RingSpec& ring) const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < nvars(); ++i) {
        if (exps_[i] == 0) continue;
        if (!first) os << "*";
        os << ring.variables[i];
        if (exps_[i] > 1) os << "^" << exps_[i];
        first = false;
    }
    if (first) os << "1";
    return os.str();
}

std::vector<Monomial> enumerate_monomials(int nvars, int min_degree, int max_degree) {
    std::vector<Monomial> out;
    if (nvars == 0) {
        if (min_degree <= 0 && 0 <= max_degree) out.push_back(Monomial(std::vector<int>{}));
        return out;
    }
    std::vector<int> exps(nvars, 0);
    for (int d = std::max(0, min_degree); d <= max_degree; ++d) {
        // ascending lex within fixed degree
        std::vector<std::vector<int>> level;
        std::vector<int> cur(nvars, 0);
        // generate all compositions of d, then sort by exponent vector
        std::function<void(int, int)> rec = [&](int pos, int rem) {
            if (pos == nvars - 1) {
                cur[pos] = rem;
                level.push_back(cur);
                return;
            }
            for (int e = 0; e <= rem; ++e) {
                cur[pos] = e;
                rec(pos + 1, rem - e);
            }
            cur[pos] = 0;
        };
        rec(0, d);
        std::sort(level.begin(), level.end());
        for (auto& e : level) out.push_back(Monomial(std::move(e)));
    }
    return out;
}

Polynomial::Polynomial(RingPtr ring, const Scalar& c) : ring_(std::move(ring)) {
    if (!c.is_zero()) terms_.emplace(Monomial::one(ring_->nvars()), c);
}

Polynomial Polynomial::variable(const RingPtr& ring, int var_index) {
    std::vector<int> e(ring->nvars(), 0);
    e.at(var_index) = 1;
    return term(ring, Monomial(std::move(e)), Scalar(1));
}

Polynomial Polynomial::term(RingPtr ring, Monomial m, Scalar c) {
    Polynomial p(std::move(ring));
    if (!c.is_zero()) p.terms_.emplace(std::move(m), std::move(c));
    return p;
}

int Polynomial::degree() const {
    if (terms_.empty()) return -1;
    return terms_.rbegin()->first.degree();
}

int Polynomial::low_degree() const {
    if (terms_.empty()) return -1;
    return terms_.begin()->first.degree();
}

Scalar Polynomial::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
}

Scalar Polynomial::constant_term() const { return coeff(Monomial::one(ring_->nvars())); }

void Polynomial::check_ring(const Polynomial& o) const {
    if (!ring_ || !o.ring_ || !ring_->same_as(*o.ring_)) throw error("ring mismatch");
}

Polynomial Polynomial::operator-() const {
    Polynomial r(ring_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    check_ring(o);
    Polynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
    check_ring(o);
    Polynomial r(ring_);
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
    return r;
}

Polynomial Polynomial::operator*(const Scalar& c) const {
    Polynomial r(ring_);
    if (c.is_zero()) return r;
    for (const auto& [m, tc] : terms_) r.terms_.emplace(m, tc * c);
    return r;
}

bool Polynomial::operator==(const Polynomial& o) const {
    return ring_->same_as(*o.ring_) && terms_ == o.terms_;
}

Polynomial Polynomial::derivative(int var_index) const {
    Polynomial r(ring_);
    for (const auto& [m, c] : terms_) {
        int e = m.exp(var_index);
        if (e == 0) continue;
        std::vector<int> exps = m.exps();
        exps[var_index] -= 1;
        r.add_term(Monomial(std::move(exps)), c * Scalar(e));
    }
    return r;
}

Polynomial Polynomial::truncated(int max_degree) const {
    Polynomial r(ring_);
    for (const auto& [m, c] : terms_) {
        if (m.degree() > max_degree) break;  // terms sorted by degree first
        r.terms_.emplace(m, c);
    }
    return r;
}

Polynomial Polynomial::specialize_parameter(const Rat& value) const {
    auto new_ring = make_ring(ring_->variables);
    Polynomial r(new_ring);
    for (const auto& [m, c] : terms_) r.add_term(m, c.specialize(value));
    return r;
}

Rat Polynomial::eval(const std::vector<Rat>& point) const {
    if (static_cast<int>(point.size()) != ring_->nvars()) throw error("evaluation arity mismatch");
    Rat acc(0);
    for (const auto& [m, c] : terms_) {
        Rat t = c.rat();
        for (int i = 0; i < m.nvars(); ++i)
            for (int e = 0; e < m.exp(i); ++e) t *= point[i];
        acc += t;
    }
    return acc;
}

void Polynomial::add_term(const Monomial& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::string param = ring_->parameter.value_or("@");
    std::ostringstream os;
    bool first = true;
    // highest degree first reads more naturally
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        std::string cs = c.to_string(param);
        bool neg = !cs.empty() && cs[0] == '-';
        if (!first) os << (neg ? " - " : " + ");
        else if (neg) os << "-";
        if (neg) cs = cs.substr(1);
        std::string ms = m.to_string(*ring_);
        if (ms == "1") os << cs;
        else if (cs == "1") os << ms;
        else os << cs << "*" << ms;
        first = false;
    }
    return os.str();
}

Polynomial compose_truncated(const Polynomial& g, const std::vector<Polynomial>& f,
                             int max_degree) {
    if (g.ring()->nvars() != static_cast<int>(f.size()))
        throw error("composition arity mismatch");
    if (f.empty()) {
        // g is a constant-only polynomial in a 0-variable ring
        return g;
    }
    const RingPtr& source = f[0].ring();
    for (const auto& fi : f) {
        if (!fi.ring()->same_as(*source)) throw error("ring mismatch among components");
        if (!fi.constant_term().is_zero()) throw error("composition requires zero constant terms");
    }
    // Cache truncated powers of each component.
    std::vector<std::vector<Polynomial>> powers(f.size());
    auto power = [&](size_t i, int e) -> const Polynomial& {
        auto& cache = powers[i];
        if (cache.empty()) cache.push_back(Polynomial::constant(source, Scalar(1)));
        while (static_cast<int>(cache.size()) <= e)
            cache.push_back((cache.back() * f[i]).truncated(max_degree));
        return cache[e];
    };
    Polynomial out(source);
    for (const auto& [m, c] : g.terms()) {
        // Term c * Y^m pulls back to c * prod f_i^{m_i}; each f_i is in the
        // maximal ideal, so the pullback has order >= deg(m).
        if (m.degree() > max_degree) break;
        Polynomial t = Polynomial::constant(source, c);
        for (int i = 0; i < m.nvars(); ++i) {
            if (m.exp(i) == 0) continue;
            t = (t * power(i, m.exp(i))).truncated(max_degree);
            if (t.is_zero()) break;
        }
        out = out + t;
    }
    return out.truncated(max_degree);
}

// --------------------------- expression parser -----------------------------

namespace {

struct Parser {
    const std::string& text;
    const RingPtr& ring;
    size_t pos = 0;

    explicit Parser(const std::string& t, const RingPtr& r) : text(t), ring(r) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw error("parse error at byte " + std::to_string(pos) + ": " + msg);
    }

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' || text[pos] == '\r'))
            ++pos;
    }

    bool peek(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }

    bool accept(char c) {
        if (peek(c)) { ++pos; return true; }
        return false;
    }

    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) { return ident_start(c) || std::isdigit(static_cast<unsigned char>(c)); }

    Int parse_integer() {
        skip_ws();
        size_t start = pos;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) { pos = start; fail("expected integer"); }
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        return Int(text.substr(start, pos - start));
    }

    // Exponents allow parenthesized integer arithmetic so atlas templates can
    // write x^(j+1) after substitution of j.
    long parse_exponent() {
        skip_ws();
        long v;
        if (accept('(')) {
            v = parse_int_expr();
            if (!accept(')')) fail("expected ')' in exponent");
        } else {
            size_t at = pos;
            if (pos < text.size() && text[pos] == '-') fail("negative exponent");
            Int n = parse_integer();
            if (n < 0) { pos = at; fail("negative exponent"); }
            v = n.get_si();
        }
        if (v < 0) fail("negative exponent");
        return v;
    }

    long parse_int_expr() {
        long acc = parse_int_term();
        while (true) {
            if (accept('+')) acc += parse_int_term();
            else if (accept('-')) acc -= parse_int_term();
            else return acc;
        }
    }
    long parse_int_term() {
        long acc = parse_int_atom();
        while (accept('*')) acc *= parse_int_atom();
        return acc;
    }
    long parse_int_atom() {
        skip_ws();
        if (accept('(')) {
            long v = parse_int_expr();
            if (!accept(')')) fail("expected ')'");
            return v;
        }
        return parse_integer().get_si();
    }

    Polynomial parse_expr() {
        skip_ws();
        bool neg = false;
        while (true) {
            if (accept('-')) neg = !neg;
            else if (accept('+')) {}
            else break;
        }
        Polynomial acc = parse_term();
        if (neg) acc = -acc;
        while (true) {
            if (accept('+')) acc = acc + parse_term();
            else if (accept('-')) acc = acc - parse_term();
            else break;
        }
        return acc;
    }

    Polynomial parse_term() {
        Polynomial acc = parse_factor();
        while (true) {
            skip_ws();
            if (accept('*')) acc = acc * parse_factor();
            else if (pos < text.size() && (ident_start(text[pos]) || text[pos] == '(' ||
                                           std::isdigit(static_cast<unsigned char>(text[pos]))))
                fail("implicit multiplication is not allowed");
            else break;
        }
        return acc;
    }

    Polynomial parse_factor() {
        Polynomial base = parse_base();
        skip_ws();
        if (accept('^')) {
            skip_ws();
            if (pos < text.size() && text[pos] == '-') fail("negative exponent");
            long e = parse_exponent();
            Polynomial acc = Polynomial::constant(ring, Scalar(1));
            for (long i = 0; i < e; ++i) acc = acc * base;
            return acc;
        }
        return base;
    }

    Polynomial parse_base() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            Polynomial inner = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (c == '-') {
            ++pos;
            return -parse_factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Int n = parse_integer();
            return Polynomial::constant(ring, Scalar(n));
        }
        if (ident_start(c)) {
            size_t start = pos;
            while (pos < text.size() && ident_char(text[pos])) ++pos;
            std::string name = text.substr(start, pos - start);
            int vi = ring->var_index(name);
            if (vi >= 0) return Polynomial::variable(ring, vi);
            if (ring->parameter && *ring->parameter == name)
                return Polynomial::constant(ring, Scalar::parameter());
            pos = start;
            fail("unknown identifier '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, const RingPtr& ring) {
    Parser p(text, ring);
    Polynomial result = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return result;
}

MapGerm MapGerm::specialize_parameter(const Rat& value) const {
    if (ring->excluded_locus && ring->excluded_locus->eval(value) == 0)
        throw error("parameter value lies on the excluded locus");
    MapGerm g;
    g.ring = make_ring(ring->variables);
    for (const auto& c : components) g.components.push_back(c.specialize_parameter(value));
    return g;
}

void MapGerm::validate() const {
    if (components.empty()) throw error("map germ with no components");
    for (const auto& c : components) {
        if (!c.ring()->same_as(*ring)) throw error("component ring mismatch");
        if (!c.constant_term().is_zero()) throw error("map germ must fix the origin");
    }
}

MapGerm parse_germ(const std::vector<std::string>& component_texts, const RingPtr& ring) {
    MapGerm g;
    g.ring = ring;
    for (const auto& t : component_texts) g.components.push_back(parse_polynomial(t, ring));
    g.validate();
    return g;
}

}  // namespace germkit
