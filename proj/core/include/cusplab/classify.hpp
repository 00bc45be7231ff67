#pragma once

#include <optional>
#include <vector>

#include "cusplab/flow.hpp"
#include "cusplab/lattice.hpp"
#include "cusplab/subspace.hpp"
#include "cusplab/tolerance.hpp"
#include "cusplab/weyl.hpp"

namespace cusplab {

/// Cusp-region classification of a lattice point.
///
/// P carries the delta-jumps of the minima profile, Q the delta_prime-jumps;
/// delta <= delta_prime makes Q a subgroup of P.  The orientation is the Weyl
/// coset [w]_Q read off the dominant exponent groups of the distinguished
/// subspaces V_l for l in jumps(Q); it is absent when any V_l lacks a
/// certified dominant group (including an unverified uniqueness gap or an
/// undecidable dominance comparison at the working precision).
struct ClassifyResult {
    ParabolicSubgroup P;
    ParabolicSubgroup Q;
    std::optional<Orientation> orientation;  // coset for Q
    bool compact = false;                    // P = Q = G
};

/// Classify x with thresholds cfg.delta / cfg.delta_prime.  Every point
/// classifies; only an unresolvable certified tie inside eta_set propagates
/// as PrecisionError.  cfg is trusted as given (callers may deliberately
/// collapse delta == delta_prime).
ClassifyResult classify(const LatticeSnapshot& x, const DiagonalFlow& flow,
                        const ToleranceConfig& cfg);

/// Maximum over sampled times t in [t_min, t_max] and jumps l of P of
///   | log alpha_l(a_t x) - log alpha_l(x) - t * sum_{i <= l} alpha_{w(i)} |,
/// the deviation of the minimal covolumes from the linear drift predicted by
/// the orientation w.  Times are relative to the snapshot x.  Each sample is
/// checked to still lie in the oriented cusp region (delta-jumps contain
/// jumps(P) and every dominant group matches w); a violation raises
/// RegionExitError with the offending sample time.
Real covol_evolution_check(const LatticeSnapshot& x, const DiagonalFlow& flow,
                           const ToleranceConfig& cfg, const Real& t_min, const Real& t_max,
                           const ParabolicSubgroup& P, const Orientation& w, int samples = 33);

/// Adapted basis O * w * u of the distinguished flag of x:
///   O   orthogonal, block-diagonal on the equal-exponent groups of the flow
///       (an element of K intersected with the centralizer of the flow),
///   w   the orientation permutation (w[j] = axis of flag position j),
///   u   lower-block-unipotent for the blocks of P, close to the identity
///       when the flag is well oriented.
/// For every jump l of P the first l columns of O*w*u span V_l(x).
struct FlagBasis {
    RMat O;
    std::vector<int> w;
    RMat u;
};

/// Compute the adapted basis.  Throws std::invalid_argument when x carries no
/// orientation for P (missing jump or no dominant group) and PrecisionError
/// when a block projection degenerates at the working precision.
FlagBasis flag_basis(const LatticeSnapshot& x, const ParabolicSubgroup& P,
                     const DiagonalFlow& flow, const ToleranceConfig& cfg);

/// A unimodular diagonal lattice deep in the cusp region of P: block m of k
/// carries the entry n^{-q(k+1-m)} and the last block n^{q e} with
/// e = sum_m s_m (k+1-m) / s_{k+1} and q the denominator of e, so all entries
/// are rational and the determinant is exactly one.  Requires P != G, n >= 2.
Lattice cusp_witness(const ParabolicSubgroup& P, long n);

}  // namespace cusplab
