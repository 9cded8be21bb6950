#include "germkit/nicedim.hpp"

#include "germkit/scalar.hpp"

namespace germkit {

std::optional<long> sigma(int n, int p) {
    if (n < 1 || p < 1) throw error("sigma requires n, p >= 1");
    if (n <= p) {
        if (n == 1) return std::nullopt;
        if (n == 2) return 7L * (p - n) + 10;
        // n = 3 takes the +9 branch for every p - n
        if (n == 3) return 6L * (p - n) + 9;
        if (p - n >= 4) return 6L * (p - n) + 8;
        return 6L * (p - n) + 9;
    }
    if (n == p + 1) return 9;
    if (n == p + 2) return 8;
    return static_cast<long>(n) - p + 7;
}

PairClass classify_pair(int n, int p) {
    PairClass c;
    c.n = n;
    c.p = p;
    c.sigma_value = sigma(n, p);
    if (!c.sigma_value) {
        c.kind = PairClassKind::Nice;  // sigma infinite
    } else if (n < *c.sigma_value) {
        c.kind = PairClassKind::Nice;
    } else if (n == *c.sigma_value) {
        c.kind = PairClassKind::BoundaryNice;
    } else {
        c.kind = PairClassKind::BeyondNice;
    }
    c.exceptional = (n == 10 && p == 7);
    if (c.kind == PairClassKind::BoundaryNice && !bnd_closed_form(n, p))
        throw error("internal invariant violation: sigma scan disagrees with BND closed form");
    return c;
}

std::string pair_class_name(PairClassKind kind) {
    switch (kind) {
        case PairClassKind::Nice: return "Nice";
        case PairClassKind::BoundaryNice: return "BoundaryNice";
        case PairClassKind::BeyondNice: return "BeyondNice";
    }
    throw error("bad pair class");
}

std::vector<std::pair<int, int>> enumerate_bnd(int n_max) {
    if (n_max < 1) throw error("enumerate_bnd requires n_max >= 1");
    std::vector<std::pair<int, int>> out;
    for (int n = 1; n <= n_max; ++n)
        for (int p = 1; p <= n_max + 10; ++p) {
            auto s = sigma(n, p);
            if (s && *s == n) out.emplace_back(n, p);
        }
    return out;
}

bool bnd_closed_form(int n, int p) {
    if (n <= p) {
        if ((n == 9 && p == 9) || (n == 15 && p == 16) || (n == 21 && p == 23) ||
            (n == 27 && p == 30))
            return true;
        // (6t+2, 7t+1), t >= 5
        if ((n - 2) % 6 == 0) {
            int t = (n - 2) / 6;
            if (t >= 5 && p == 7 * t + 1) return true;
        }
        return false;
    }
    if (n == 9 && p == 8) return true;
    if (n == 8 && p == 6) return true;
    if (p == 7 && n >= 10) return true;  // (10+k, 7), k >= 0
    return false;
}

bool extra_nice_boundary(int n, int p) {
    if (n < 1 || p < 1) throw error("extra_nice_boundary requires n, p >= 1");
    if (n <= p) return 4 * p == 5 * n - 5 && p >= 5;
    if (n == 5 && p == 4) return true;
    if (n == 7 && p == 5) return true;
    if (p == 6 && n >= 9) return true;  // (9+k, 6), k >= 0
    return false;
}

long cusp_count(long d1, long d2) {
    if (d1 < 1 || d2 < 1) throw error("cusp_count requires degrees >= 1");
    return d1 * d1 + d2 * d2 + 3 * d1 * d2 - 6 * d1 - 6 * d2 + 7;
}

}  // namespace germkit
