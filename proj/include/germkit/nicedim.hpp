#pragma once

// Closed forms for sigma(n,p), the nice/boundary classification, BND and
// extra-nice-boundary enumeration, and the cusp-count formula.

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace germkit {

// sigma(n,p); nullopt encodes infinity (n = 1).
std::optional<long> sigma(int n, int p);

enum class PairClassKind { Nice, BoundaryNice, BeyondNice };

struct PairClass {
    int n = 0, p = 0;
    std::optional<long> sigma_value;  // nullopt = infinite
    PairClassKind kind = PairClassKind::Nice;
    bool exceptional = false;  // true only for (10,7)
};

PairClass classify_pair(int n, int p);
std::string pair_class_name(PairClassKind kind);

// All (n,p) with n <= n_max, p <= n_max + 10 and sigma(n,p) == n.
std::vector<std::pair<int, int>> enumerate_bnd(int n_max);

// Closed-form membership in the boundary-of-nice-dimensions union, used to
// cross-check the sigma scan.
bool bnd_closed_form(int n, int p);

bool extra_nice_boundary(int n, int p);

long cusp_count(long d1, long d2);

}  // namespace germkit
