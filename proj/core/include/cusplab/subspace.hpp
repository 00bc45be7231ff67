#pragma once

#include <optional>
#include <vector>

#include "cusplab/lattice.hpp"
#include "cusplab/tolerance.hpp"

namespace cusplab {

/// An x-rational subspace V, stored as the integer coefficient matrix (in the
/// lattice basis) of a Z-basis of x ∩ V.  Construction saturates the span and
/// reduces the generators to a unique canonical form, so equal subspaces have
/// equal fields and compare with ==.
struct RationalSubspace {
    int d = 0;    // ambient dimension
    int l = 0;    // subspace dimension
    ZMat coeffs;  // d x l, canonical generator columns

    RationalSubspace() = default;
    /// generators: integer columns spanning V over Q (any spanning set works;
    /// it is saturated and canonicalized, and l is the computed rank).
    RationalSubspace(int ambient, ZMat generators);

    /// Convenience: the coordinate subspace spanned by {e_i : i in idx} (0-based).
    static RationalSubspace coordinate(int ambient, const std::vector<int>& idx);

    bool operator==(const RationalSubspace& o) const {
        return d == o.d && l == o.l && coeffs == o.coeffs;
    }
    bool operator<(const RationalSubspace& o) const;  // deterministic total order
};

/// Exact squared covolume of x ∩ V inside the exact lattice (t = 0 data).
Rat covol_sq_exact(const Lattice& x, const RationalSubspace& V);

/// Covolume of (a_t x) ∩ (a_t V) at the snapshot time (certified positive sum).
Real covol(const LatticeSnapshot& x, const RationalSubspace& V);

/// Sum and intersection of subspaces (exact; the intersection may be trivial,
/// returned with l = 0).
RationalSubspace subspace_sum(const RationalSubspace& V, const RationalSubspace& W);
RationalSubspace subspace_intersection(const RationalSubspace& V, const RationalSubspace& W);

/// Re-express a subspace given in the coordinates of the lattice basis of x in
/// standard ambient coordinates (generators x.basis * V.coeffs, canonicalized).
/// Exponent-group data (orientation, dominance) lives in ambient coordinates,
/// so subspaces produced from lattice data are converted before such queries.
RationalSubspace ambient_subspace(const Lattice& x, const RationalSubspace& V);

/// Primitive integer Plücker coordinates of V, indexed by combinations(d, l)
/// in lexicographic order, sign-normalized (first nonzero positive).
ZVec plucker(const RationalSubspace& V);

/// Exact decomposability test for an integer exterior vector p of degree l:
/// true iff p is nonzero and a pure wedge (the contraction kernel has
/// dimension exactly l).
bool plucker_relations_check(int d, int l, const ZVec& p);

/// The weighted exterior-power lattice of x at degree l: basis columns are
/// the wedges of the lattice basis columns, weights are the row subset sums
/// of the flow exponents.  Reused by the minimal-covolume search.
WeightedLattice exterior_lattice(const QMat& basis, const QVec& alpha, const Real& t, int l);

struct AlphaResult {
    Real value;                        // alpha_l(x)
    std::optional<Rat> value_sq_exact; // exact squared value when x is exact
    RationalSubspace witness;          // a minimizing subspace
};

/// Minimal covolume over l-dimensional x-rational subspaces, with witness.
/// Searches all decomposable exterior vectors of norm <= lambda_1...lambda_l.
AlphaResult alpha_min_covol(const LatticeSnapshot& x, int l, long node_cap = 4'000'000);
AlphaResult alpha_min_covol(const Lattice& x, int l, long node_cap = 4'000'000);

struct UniqueSubspace {
    RationalSubspace V;
    bool gap_verified;  // second-best covolume strictly exceeds the minimum
};

/// The unique minimal-covolume subspace V_l(x).  Requires eta_l(x) < cfg.eta0
/// (std::invalid_argument otherwise); when the uniqueness gap cannot be
/// certified the result is returned with gap_verified = false.
UniqueSubspace unique_small_subspace(const LatticeSnapshot& x, int l, const ToleranceConfig& cfg,
                                     long node_cap = 4'000'000);

}  // namespace cusplab
