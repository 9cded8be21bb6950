#pragma once

// Tangent spaces of Mather's groups in jets, local algebras, delta, corank,
// and the normal space Nf used to build stable unfoldings.

#include "germkit/jetspace.hpp"

#include <optional>

namespace germkit {

enum class Group { R, C, K, L, A };

// epsilon(R) = epsilon(C) = epsilon(K) = 1, epsilon(L) = epsilon(A) = 2.
int epsilon(Group g);
std::string group_name(Group g);
std::optional<Group> parse_group(const std::string& name);

// Generating vector fields whose span in J^k equals the k-jet image of TGf
// (extended: TG_e f).  tf part: x^a df/dx_i with |a| >= 1 (>= 0 extended);
// C part: x^a f_i e_j; L part: (Y^b o f) e_j with |b| >= 1 (plus e_j when
// extended).
std::vector<VectorFieldJet> tangent_generators(const MapGerm& f, Group g, int k,
                                               bool extended = false);

// Span of the tangent generators inside the window (min_degree 1 ordinary,
// 0 extended).
Subspace tangent_span(const MapGerm& f, Group g, int k, bool extended,
                      long cap = kDefaultBasisCap);

// dim(window) - dim(tangent span); the codimension modulo M^{k+1} Theta_f.
long codim_in_window(const MapGerm& f, Group g, int k, bool extended = false,
                     std::vector<ZPoly>* pivot_factors = nullptr,
                     long cap = kDefaultBasisCap);

struct HilbertData {
    std::vector<long> dims_by_degree;  // graded dims of Q_k(f)
    long total = 0;
};

// Dimensions of E_n / (<f_1..f_p> + M^{k+1}) by degree.
HilbertData local_algebra(const MapGerm& f, int k);

struct DeltaResult {
    bool finite = false;
    long value = 0;          // dim Q(f) when finite
    int certificate_k = 0;   // every degree-k monomial lies in <f> + M^{k+1}
    int cutoff = 0;          // echoed cutoff when not finite (undecided)
};

// delta(f) = dim Q(f) with a Nakayama stabilization certificate; NotFinite is
// reported as "undecided at cutoff", never as infinity.
DeltaResult delta(const MapGerm& f, int cutoff_k);

int corank(const MapGerm& f);

// Exact rank of df(0) and the core germ with the regular part eliminated
// (correct as a jet of order jet_order).  The core has n - rank source
// variables and p - rank components and zero linear part.
MapGerm rank_reduce(const MapGerm& f, int jet_order);

struct NormalSpace {
    // Monomial vector fields whose classes form a basis of
    // M_n Theta_f / (tf(Theta_n) + f^*(M_p) Theta_f); lowest graded-lex
    // monomials completing the span.
    std::vector<VectorFieldJet> basis;
    int jet_order = 0;
};

struct NotFstError : error {
    explicit NotFstError(const std::string& what) : error(what) {}
};

// Requires f of finite singularity type (checked via the K-determinacy
// certificate); throws NotFstError otherwise.
NormalSpace normal_space_Nf(const MapGerm& f, int cutoff = 12);

// Canonical residue of a polynomial modulo <f_1..f_p> + M^{k+1}; residues are
// equal iff the classes agree in Q_k(f).
Polynomial ideal_residue(const MapGerm& f, const Polynomial& poly, int k);

// det(df) reduced to its canonical residue in Q_k(f); requires n == p.
Polynomial jacobian_class(const MapGerm& f, int cutoff = 12);

// det of the Jacobian matrix of f (n == p).
Polynomial jacobian_det(const MapGerm& f);

// Helper shared with several modules: the scalar-window echelon of the ideal
// {x^a f_i} inside degrees [min_degree, k], optionally tracking pivots.
Subspace ideal_span(const std::vector<Polynomial>& generators, const RingPtr& ring,
                    int k, int min_degree = 0, long cap = kDefaultBasisCap);

// Embeds a scalar-window subspace S into component `comp` of a p-component
// window with identical monomial range; rows land echelon-ready.
std::vector<SparseRow> embed_scalar_rows(const Subspace& scalar_span, int p, int comp);

}  // namespace germkit
