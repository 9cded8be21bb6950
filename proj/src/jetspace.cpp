#include "germkit/jetspace.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace germkit {

int JetBasis::mono_index(const Monomial& m) const {
    auto it = std::lower_bound(monomials.begin(), monomials.end(), m);
    if (it == monomials.end() || !(*it == m)) return -1;
    return static_cast<int>(it - monomials.begin());
}

bool JetBasis::same_as(const JetBasis& o) const {
    return ring->same_as(*o.ring) && p == o.p && k == o.k && min_degree == o.min_degree;
}

JetBasisPtr enumerate_basis(const RingPtr& ring, int p, int k, int min_degree, long cap) {
    if (p < 1 || k < min_degree || min_degree < 0)
        throw error("invalid jet basis parameters");
    // Count before materializing: p * sum_d C(n+d-1, d).
    const int n = ring->nvars();
    long count = 0;
    long level = 1;  // C(n-1+d, d) built incrementally
    for (int d = 0; d <= k; ++d) {
        if (d > 0) level = level * (n - 1 + d) / d;
        if (d >= min_degree) {
            count += level;
            if (count * p > cap) throw error("jet basis size exceeds cap");
        }
    }
    auto b = std::make_shared<JetBasis>();
    b->ring = ring;
    b->p = p;
    b->k = k;
    b->min_degree = min_degree;
    b->monomials = enumerate_monomials(n, min_degree, k);
    return b;
}

VectorFieldJet VectorFieldJet::zero(const RingPtr& ring, int p) {
    VectorFieldJet v;
    v.components.assign(p, Polynomial(ring));
    return v;
}

bool VectorFieldJet::is_zero() const {
    return std::all_of(components.begin(), components.end(),
                       [](const Polynomial& c) { return c.is_zero(); });
}

VectorFieldJet VectorFieldJet::operator+(const VectorFieldJet& o) const {
    VectorFieldJet r;
    for (size_t i = 0; i < components.size(); ++i) r.components.push_back(components[i] + o.components[i]);
    return r;
}

VectorFieldJet VectorFieldJet::operator-(const VectorFieldJet& o) const {
    VectorFieldJet r;
    for (size_t i = 0; i < components.size(); ++i) r.components.push_back(components[i] - o.components[i]);
    return r;
}

VectorFieldJet VectorFieldJet::scaled(const Scalar& c) const {
    VectorFieldJet r;
    for (const auto& comp : components) r.components.push_back(comp * c);
    return r;
}

VectorFieldJet VectorFieldJet::mul(const Polynomial& g, int max_degree) const {
    VectorFieldJet r;
    for (const auto& comp : components) r.components.push_back((comp * g).truncated(max_degree));
    return r;
}

std::string VectorFieldJet::to_string() const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < components.size(); ++i) {
        if (i) os << "; ";
        os << components[i].to_string();
    }
    os << ")";
    return os.str();
}

SparseRow to_row(const VectorFieldJet& v, const JetBasis& basis) {
    SparseRow row;
    for (int j = 0; j < static_cast<int>(v.components.size()); ++j) {
        for (const auto& [m, c] : v.components[j].terms()) {
            if (m.degree() < basis.min_degree || m.degree() > basis.k) continue;
            int idx = basis.mono_index(m);
            if (idx < 0) continue;
            row.push_back({basis.column(idx, j), c});
        }
    }
    std::sort(row.begin(), row.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });
    return row;
}

VectorFieldJet from_row(const SparseRow& row, const JetBasis& basis) {
    VectorFieldJet v = VectorFieldJet::zero(basis.ring, basis.p);
    for (const auto& e : row)
        v.components[basis.column_component(e.col)].add_term(basis.column_monomial(e.col), e.value);
    return v;
}

namespace {

// r = a*r + b*s, merged by column; zero results dropped.
SparseRow row_axpy(const Scalar& a, const SparseRow& r, const Scalar& b, const SparseRow& s) {
    SparseRow out;
    out.reserve(r.size() + s.size());
    size_t i = 0, j = 0;
    while (i < r.size() || j < s.size()) {
        if (j >= s.size() || (i < r.size() && r[i].col < s[j].col)) {
            Scalar v = a * r[i].value;
            if (!v.is_zero()) out.push_back({r[i].col, std::move(v)});
            ++i;
        } else if (i >= r.size() || s[j].col < r[i].col) {
            Scalar v = b * s[j].value;
            if (!v.is_zero()) out.push_back({s[j].col, std::move(v)});
            ++j;
        } else {
            Scalar v = a * r[i].value + b * s[j].value;
            if (!v.is_zero()) out.push_back({r[i].col, std::move(v)});
            ++i; ++j;
        }
    }
    return out;
}

bool row_is_rational(const SparseRow& r) {
    return std::all_of(r.begin(), r.end(), [](const SparseEntry& e) { return e.value.is_rational(); });
}

// Canonicalizes a row.  Rational rows: leading entry 1.  Parameter rows:
// denominators cleared, common polynomial content removed, leading entry with
// positive leading coefficient.  Stripped non-constant factors are reported
// through `cancelled`, since a generator degenerates where they vanish.
void normalize_row(SparseRow& r, std::vector<ZPoly>* cancelled) {
    if (r.empty()) return;
    if (row_is_rational(r)) {
        Scalar inv = r.front().value.inverse();
        if (!inv.is_one())
            for (auto& e : r) e.value = e.value * inv;
        return;
    }
    // clear denominators
    ZPoly l = r.front().value.den_poly();
    for (size_t i = 1; i < r.size(); ++i) {
        const ZPoly d = r[i].value.den_poly();
        ZPoly g = ZPoly::gcd(l, d);
        l = l.divided_by(g) * d;
    }
    if (!(l.degree() == 0 && l.leading() == 1)) {
        Scalar lc(l, ZPoly(1));
        for (auto& e : r) e.value = e.value * lc;
    }
    // strip common polynomial content
    ZPoly g = r.front().value.num_poly();
    for (size_t i = 1; i < r.size() && !(g.degree() == 0 && abs(g.leading()) == 1); ++i)
        g = ZPoly::gcd(g, r[i].value.num_poly());
    if (g.degree() > 0 && cancelled) {
        ZPoly sf = g.squarefree_part();
        if (sf.degree() > 0) cancelled->push_back(sf);
    }
    if (g.leading() < 0) g = -g;
    if (r.front().value.num_poly().leading() < 0) g = -g;
    if (!(g.degree() == 0 && g.leading() == 1)) {
        Scalar ginv = Scalar(ZPoly(1), g);
        for (auto& e : r) e.value = e.value * ginv;
    }
}

// v <- v reduced by pivot row (pivot at row.front().col).
void reduce_by(SparseRow& v, const SparseRow& row, size_t entry_index) {
    const Scalar& piv = row.front().value;
    const Scalar coef = v[entry_index].value;
    if (piv.is_one()) {
        v = row_axpy(Scalar(1), v, -coef, row);
    } else {
        v = row_axpy(piv, v, -coef, row);
    }
}

void record_factor(std::vector<ZPoly>& out, const ZPoly& candidate) {
    ZPoly sf = candidate.squarefree_part();
    if (sf.degree() <= 0) return;
    for (const auto& f : out)
        if (f == sf) return;
    out.push_back(sf);
}

}  // namespace

void Subspace::record_pivot(const Scalar& piv) {
    if (piv.is_rational()) return;
    record_factor(pivot_factors_, piv.num_poly());
}

void Subspace::note_cancelled_factor(const ZPoly& f) { record_factor(pivot_factors_, f); }

bool Subspace::insert(SparseRow row) {
    std::vector<ZPoly> cancelled;
    normalize_row(row, &cancelled);
    // forward reduction
    for (size_t i = 0; i < rows_.size() && !row.empty(); ++i) {
        if (row.front().col > pivots_[i]) continue;
        auto it = std::lower_bound(row.begin(), row.end(), pivots_[i],
                                   [](const SparseEntry& e, long col) { return e.col < col; });
        if (it != row.end() && it->col == pivots_[i]) {
            reduce_by(row, rows_[i], static_cast<size_t>(it - row.begin()));
            normalize_row(row, &cancelled);
        }
    }
    for (const auto& f : cancelled) record_factor(pivot_factors_, f);
    if (row.empty()) return false;
    record_pivot(row.front().value);
    long piv_col = row.front().col;
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv_col);
    size_t at = static_cast<size_t>(pos - pivots_.begin());
    pivots_.insert(pos, piv_col);
    rows_.insert(rows_.begin() + at, std::move(row));
    // back-reduce earlier rows so the echelon stays reduced
    for (size_t i = 0; i < at; ++i) {
        auto it = std::lower_bound(rows_[i].begin(), rows_[i].end(), piv_col,
                                   [](const SparseEntry& e, long col) { return e.col < col; });
        if (it != rows_[i].end() && it->col == piv_col) {
            reduce_by(rows_[i], rows_[at], static_cast<size_t>(it - rows_[i].begin()));
            normalize_row(rows_[i], nullptr);
        }
    }
    return true;
}

bool Subspace::insert(const VectorFieldJet& v) { return insert(to_row(v, *ambient_)); }

SparseRow Subspace::reduce(SparseRow v) const {
    normalize_row(v, nullptr);
    for (size_t i = 0; i < rows_.size() && !v.empty(); ++i) {
        if (v.front().col > pivots_[i]) continue;
        auto it = std::lower_bound(v.begin(), v.end(), pivots_[i],
                                   [](const SparseEntry& e, long col) { return e.col < col; });
        if (it != v.end() && it->col == pivots_[i]) {
            reduce_by(v, rows_[i], static_cast<size_t>(it - v.begin()));
            normalize_row(v, nullptr);
        }
    }
    return v;
}

bool Subspace::contains(const SparseRow& row) const { return reduce(row).empty(); }

bool Subspace::contains(const VectorFieldJet& v) const {
    if (!ambient_) throw error("subspace without ambient basis");
    return contains(to_row(v, *ambient_));
}

std::vector<long> Subspace::free_columns() const {
    std::vector<long> out;
    size_t i = 0;
    for (long c = 0; c < ambient_->size(); ++c) {
        if (i < pivots_.size() && pivots_[i] == c) { ++i; continue; }
        out.push_back(c);
    }
    return out;
}

void Subspace::merge(const Subspace& other) {
    if (!ambient_->same_as(*other.ambient_)) throw error("ambient mismatch in subspace sum");
    for (const auto& r : other.rows_) insert(r);
    for (const auto& f : other.pivot_factors_) record_factor(pivot_factors_, f);
}

void Subspace::adopt(std::vector<SparseRow> rows, std::vector<long> pivots,
                     std::vector<ZPoly> factors) {
    rows_ = std::move(rows);
    pivots_ = std::move(pivots);
    for (const auto& f : factors) record_factor(pivot_factors_, f);
    for (const auto& r : rows_) record_pivot(r.front().value);
}

Subspace span(const std::vector<VectorFieldJet>& vectors, const JetBasisPtr& ambient) {
    // Batch elimination with deterministic pivot choice: lowest column, then
    // smallest parameter degree of the leading entry, then largest height.
    // Keeping pivots parameter-free whenever a candidate row allows it keeps
    // the reported exceptional factors tight.
    std::vector<ZPoly> cancelled;
    std::map<long, std::vector<SparseRow>> buckets;
    for (const auto& v : vectors) {
        SparseRow r = to_row(v, *ambient);
        normalize_row(r, &cancelled);
        if (!r.empty()) buckets[r.front().col].push_back(std::move(r));
    }
    std::vector<SparseRow> placed;       // ascending pivot columns
    std::vector<long> placed_pivots;
    while (!buckets.empty()) {
        auto first = buckets.begin();
        std::vector<SparseRow> rows = std::move(first->second);
        buckets.erase(first);
        size_t best = 0;
        for (size_t i = 1; i < rows.size(); ++i) {
            const ZPoly a = rows[i].front().value.num_poly();
            const ZPoly b = rows[best].front().value.num_poly();
            if (a.degree() != b.degree()) {
                if (a.degree() < b.degree()) best = i;
            } else if (a.abs_height() > b.abs_height()) {
                best = i;
            }
        }
        std::swap(rows[0], rows[best]);
        SparseRow pivot_row = std::move(rows[0]);
        for (size_t i = 1; i < rows.size(); ++i) {
            SparseRow r = std::move(rows[i]);
            reduce_by(r, pivot_row, 0);
            normalize_row(r, &cancelled);
            if (!r.empty()) buckets[r.front().col].push_back(std::move(r));
        }
        placed_pivots.push_back(pivot_row.front().col);
        placed.push_back(std::move(pivot_row));
    }
    // back-substitution for a reduced echelon
    for (size_t i = placed.size(); i-- > 0;) {
        for (size_t j = i + 1; j < placed.size(); ++j) {
            auto it = std::lower_bound(placed[i].begin(), placed[i].end(), placed_pivots[j],
                                       [](const SparseEntry& e, long col) { return e.col < col; });
            if (it != placed[i].end() && it->col == placed_pivots[j]) {
                reduce_by(placed[i], placed[j], static_cast<size_t>(it - placed[i].begin()));
                normalize_row(placed[i], &cancelled);
            }
        }
    }
    Subspace out(ambient);
    out.adopt(std::move(placed), std::move(placed_pivots), std::move(cancelled));
    return out;
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
    Subspace r = a;
    r.merge(b);
    return r;
}

SpanWithWitness::SpanWithWitness(JetBasisPtr ambient, int expected)
    : ambient_(std::move(ambient)) {
    combos_.reserve(expected);
}

void SpanWithWitness::add_generator(const SparseRow& row) {
    int gi = ngen_++;
    SparseRow v = row;
    std::vector<Scalar> combo(static_cast<size_t>(ngen_), Scalar(0));
    combo[static_cast<size_t>(gi)] = Scalar(1);
    for (size_t i = 0; i < rows_.size() && !v.empty();) {
        if (v.front().col > pivots_[i]) { ++i; continue; }
        auto it = std::lower_bound(v.begin(), v.end(), pivots_[i],
                                   [](const SparseEntry& e, long col) { return e.col < col; });
        if (it != v.end() && it->col == pivots_[i]) {
            Scalar c = it->value;
            v = row_axpy(Scalar(1), v, -c, rows_[i]);
            const auto& rc = combos_[i];
            for (size_t g = 0; g < rc.size(); ++g)
                if (!rc[g].is_zero()) combo[g] -= c * rc[g];
        }
        ++i;
    }
    if (v.empty()) return;
    Scalar inv = v.front().value.inverse();
    for (auto& e : v) e.value = e.value * inv;
    for (auto& c : combo) c *= inv;
    long piv = v.front().col;
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv);
    size_t at = static_cast<size_t>(pos - pivots_.begin());
    pivots_.insert(pos, piv);
    rows_.insert(rows_.begin() + at, std::move(v));
    combos_.insert(combos_.begin() + at, std::move(combo));
    ++dim_;
}

std::optional<std::vector<Scalar>> SpanWithWitness::express(const SparseRow& row) const {
    SparseRow v = row;
    std::vector<Scalar> combo(static_cast<size_t>(ngen_), Scalar(0));
    for (size_t i = 0; i < rows_.size() && !v.empty();) {
        if (v.front().col > pivots_[i]) { ++i; continue; }
        auto it = std::lower_bound(v.begin(), v.end(), pivots_[i],
                                   [](const SparseEntry& e, long col) { return e.col < col; });
        if (it != v.end() && it->col == pivots_[i]) {
            Scalar c = it->value;
            v = row_axpy(Scalar(1), v, -c, rows_[i]);
            const auto& rc = combos_[i];
            for (size_t g = 0; g < rc.size(); ++g)
                if (!rc[g].is_zero()) combo[g] += c * rc[g];
        }
        ++i;
    }
    if (!v.empty()) return std::nullopt;
    combo.resize(static_cast<size_t>(ngen_), Scalar(0));
    return combo;
}

SparseRow specialize_row(const SparseRow& row, const Rat& value) {
    SparseRow out;
    for (const auto& e : row) {
        Scalar s = e.value.specialize(value);
        if (!s.is_zero()) out.push_back({e.col, std::move(s)});
    }
    return out;
}

}  // namespace germkit
