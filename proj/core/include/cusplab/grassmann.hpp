#pragma once

#include <optional>
#include <vector>

#include "cusplab/flow.hpp"
#include "cusplab/subspace.hpp"
#include "cusplab/tolerance.hpp"

namespace cusplab {

/// Distance between equal-dimensional subspaces of R^n given by real basis
/// columns: the sine of the largest principal angle, in [0, 1].  Throws on a
/// dimension mismatch.
Real grassmann_distance(const RMat& V, const RMat& W);

/// The same metric applied to x-rational subspaces embedded through the
/// snapshot's evolved basis.
Real grassmann_distance(const LatticeSnapshot& x, const RationalSubspace& V,
                        const RationalSubspace& W);

/// Orientation of a subspace with respect to the flow: its Plücker
/// coordinates are grouped by the exponent multiset of the coordinate axes;
/// returns the dominant group's multiset (ascending) when one group carries
/// all but an eps0^2 fraction of the mass, nullopt otherwise.  Exact test.
std::optional<QVec> orientation_of_subspace(const RationalSubspace& V, const DiagonalFlow& flow,
                                            const ToleranceConfig& cfg);

/// Orientation at flow time t: the grouped masses evolve as m_g e^{2 t beta_g}
/// with beta_g the exponent sum of the group.  The dominance comparison is a
/// certified norm-form comparison — exact at t = 0 (then identical to the
/// overload above) and envelope-certified otherwise; an undecidable comparison
/// at the working precision raises PrecisionError.
std::optional<QVec> orientation_of_subspace(const RationalSubspace& V, const DiagonalFlow& flow,
                                            const ToleranceConfig& cfg, const Real& t);

struct DominanceInterval {
    QVec exponents;  // dominant multiset E_k, ascending
    Real lo, hi;     // maximal dominance interval clipped to the window
};

struct GrassmannIntervals {
    std::vector<DominanceInterval> intervals;  // ordered by increasing weight sum
    Real gap_total;                            // window length not covered
};

/// Maximal subintervals of [t_min, t_max] on which a single weight group of
/// a_t V dominates with margin cfg.eps0.  Each group's log-dominance function
/// is convex, so it contributes at most one interval; endpoints are located
/// to cfg.root_tol by bracketing.
GrassmannIntervals grassmann_intervals(const RationalSubspace& V, const DiagonalFlow& flow,
                                       const ToleranceConfig& cfg, const Real& t_min,
                                       const Real& t_max);

/// Per-flow default dominance margin: one third of the minimal pairwise
/// distance between distinct equal-dimensional coordinate subspaces with
/// distinct exponent multisets (1/3 when no such pair exists).
Real default_eps0(const DiagonalFlow& flow);

/// Defaults: eta0 = 1/4, eps0 = default_eps0(flow), r at the midpoint of its
/// admissible interval, root_tol = 2^-40, precision = configured bits.
ToleranceConfig default_tolerances(const DiagonalFlow& flow, const Real& delta,
                                   const Real& delta_prime);

}  // namespace cusplab
