#pragma once

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cusplab/classify.hpp"
#include "cusplab/grassmann.hpp"

namespace cusplab {

/// One maximal excursion of eta_l below delta_prime, clipped to the window
/// [-N, N].  Unclipped endpoints are delta_prime-crossing times located to
/// cfg.root_tol by certified bracketing; clipped endpoints sit exactly on the
/// window edge.
struct ThresholdInterval {
    Real lo, hi;
    bool lo_clipped = false;
    bool hi_clipped = false;
};

/// The intervals T_{level, l} at one level: for each dimension l (1-based,
/// stored at index l-1), the excursions of eta_l that dip below `level`.
/// Endpoints are delta_prime crossings shared by every level; the level only
/// selects which excursions qualify, so lists at finer levels are subsets of
/// the lists at coarser ones.
struct ThresholdIntervals {
    Real level;
    std::vector<std::vector<ThresholdInterval>> per_dim;  // [l-1], sorted by lo
};

/// Threshold intervals for every level delta^{r^m}, m = 0..d, in that order.
///
/// pre: cfg.validate(flow.d) passes and |log delta| < N.
/// The trajectory is sampled adaptively: the step never exceeds 3/4 of the
/// distance from log eta_l to the nearest threshold divided by the Lipschitz
/// constant 2 max|alpha_i|, with a floor of root_tol / (2 max|alpha_i|), so no
/// crossing is skipped and every dip deeper than root_tol (in log scale) below
/// a threshold is sampled.  Certification failures (PrecisionError,
/// CapacityError) propagate.
std::vector<ThresholdIntervals> threshold_intervals(const Lattice& x, const DiagonalFlow& flow,
                                                    const ToleranceConfig& cfg, long N);

/// A final interval of the multi-scale induction.
struct CodedInterval {
    Real lo, hi;
    int deg = 0;            // induction step that finalized it, in 1..d
    ParabolicSubgroup par;  // jumps = the E-set of the parent piece at level deg-1
    bool touches_window = false;
};

/// A maximal subinterval of a final interval on which the orientation data of
/// the distinguished flag is constant: either every flag subspace has a
/// dominant weight group, combining into the coset `weyl`, or some subspace
/// is undecided and `weyl` is absent.
struct RefinedInterval {
    Real lo, hi;
    std::size_t parent = 0;  // index into CodedPartition::J
    std::optional<Orientation> weyl;
};

struct CodedPartition {
    Real delta, delta_prime, r;
    long N = 0;
    int d = 0;
    std::vector<CodedInterval> J;          // sorted, covering [-N, N] exactly
    std::vector<RefinedInterval> J_prime;  // empty until refine_orientations
};

/// Run the d-step finalization induction over the threshold structure and
/// return the partition J with degrees and parabolic labels (J_prime left
/// empty).  pre: cfg.validate(flow.d) passes and |log delta| < N.
CodedPartition build_partition(const Lattice& x, const DiagonalFlow& flow,
                               const ToleranceConfig& cfg, long N);

/// Split every interval of J by the dominance windows of its flag subspaces
/// {V_l : l in jumps(par)} and assign the Weyl coset on each piece where all
/// subspaces are decided (absent on gaps).  Intervals with par = G carry the
/// trivial coset everywhere.  Returns the partition with J_prime filled.
CodedPartition refine_orientations(const CodedPartition& partition, const Lattice& x,
                                   const DiagonalFlow& flow, const ToleranceConfig& cfg);

/// The discrete coding C(n) = (par(U_n), weyl(U_n)) for the unique refined
/// interval U_n containing integer n.  Membership is half-open [lo, hi); the
/// final interval is closed so that n = N is covered.
struct Coding {
    long N = 0;
    std::vector<std::pair<ParabolicSubgroup, std::optional<Orientation>>> values;  // index n + N

    const std::pair<ParabolicSubgroup, std::optional<Orientation>>& at(long n) const {
        return values.at(static_cast<std::size_t>(n + N));
    }
};

/// Full pipeline: build_partition, refine_orientations, then the integer
/// assignment.  Deterministic for fixed inputs and cfg.
Coding coding(const Lattice& x, const DiagonalFlow& flow, const ToleranceConfig& cfg, long N);

/// Height vector (-log lambda_1, ..., -log lambda_d) of a lattice point.
RVec height(const LatticeSnapshot& x);

/// Euclidean distance between the height vector and its block average over
/// the blocks of P.  Zero for the Borel subgroup (the projection is the
/// identity there).
Real err(const LatticeSnapshot& x, const ParabolicSubgroup& P);

/// Numerical verification report for one coded run.
///
/// ratio_interval_count   (i)   |J'| r^{d-1} |log delta| / N
/// ratio_err_endpoints    (ii)  sum_{U in J} [err(a_{inf U} x, par U) +
///                              err(a_{sup U} x, par U)] / (r N)
/// ratio_height_drift     (iii) ||sum over oriented coding values of
///                              count * pi_P(alpha^w)|| / (r N + ||height
///                              drift||), drift = height(a_N x) - height(a_-N x)
/// ratio_unoriented       (iv)  (sum_P |C^{-1}(P, none)|) r^{d-1} |log delta| / N
struct BudgetReport {
    Real ratio_interval_count;
    Real ratio_err_endpoints;
    Real ratio_height_drift;
    Real ratio_unoriented;
    Real telescope_norm;     // ||sum count * pi_P(alpha^w)||, exact sum under the norm
    Real height_drift_norm;  // ||height(a_N x) - height(a_-N x)||
    long j_count = 0;
    long j_prime_count = 0;
    long unoriented_count = 0;
    long clipped_intervals = 0;   // intervals of J touching the window edge
    bool small_n_warning = false; // N < 2 |log delta|: budgets are asymptotic in N
};

/// Compute the report (pure computation, no assertions).  Throws
/// std::invalid_argument when the partition lacks J_prime or the windows of
/// partition and coding disagree.
BudgetReport verify_budgets(const CodedPartition& partition, const Coding& coding,
                            const Lattice& x, const DiagonalFlow& flow,
                            const ToleranceConfig& cfg);

/// Key of the classification partition: P from the delta-jumps, Q from the
/// delta_prime-jumps, w the orientation coset for Q (absent when undecided).
struct RegionKey {
    ParabolicSubgroup P, Q;
    std::optional<Orientation> w;

    bool operator==(const RegionKey& o) const { return P == o.P && Q == o.Q && w == o.w; }
    bool operator<(const RegionKey& o) const {
        if (!(P == o.P)) return P < o.P;
        if (!(Q == o.Q)) return Q < o.Q;
        if (w.has_value() != o.w.has_value()) return !w.has_value();
        if (!w) return false;
        return *w < *o.w;
    }
};

/// Classification counts of a_n x over the integer times n in [-N, N].
struct Occupancy {
    DiagonalFlow flow;
    long N = 0;
    std::map<RegionKey, long> counts;

    long total() const;       // = 2N + 1
    long unoriented() const;  // mass of keys with w absent
};

Occupancy occupancy(const Lattice& x, const DiagonalFlow& flow, const ToleranceConfig& cfg,
                    long N);

/// Exact aggregation inequality between a coding and the classification
/// occupancy of the same trajectory: for chi on the Weyl cosets with a
/// non-negative maximum over all parabolics,
///
///   sum_{H, [tau]} |C^{-1}(H, [tau])| chi([tau]_H)
///     <= sum_{P, Q, [w]} occ(P, Q, [w]) max_{Q <= H <= P} chi([w]_H)
///        + occ(unoriented) max chi.
///
/// Returns whether the inequality holds (exact rational arithmetic).  Throws
/// std::invalid_argument when the maximum of chi is negative or the windows
/// disagree.
bool chi_aggregate_check(const Coding& coding, const Occupancy& occ,
                         const std::function<Rat(const Orientation&)>& chi);

/// Occupancy-weighted corrected-entropy bound.  value is the exact rational
///   sum_{P,Q,[w]} freq * max_{Q <= H <= P} (h - phi)([w]_H)
///     + freq(unoriented) * max (h - phi),
/// with frequencies over the 2N+1 integer samples.  The remaining fields are
/// metadata: the occupancy table and the scale factors of the additive error
/// terms (proportional to r and to 1/|log delta_prime|).
struct EmpiricalBound {
    Rat value;
    Rat unoriented_fraction;
    Occupancy occ;
    Real r_term;
    Real inv_log_delta_prime;

    Real value_real() const { return to_real(value); }
};

EmpiricalBound empirical_bound(const Lattice& x, const DiagonalFlow& flow,
                               const ToleranceConfig& cfg, const LinearFunctional& phi, long N);

/// Sweep parameter schedule: delta' = exp(-|log delta|^{1/2}) and
/// r = (|log delta'| / |log delta|)^{1/(d+2)}; the remaining fields follow
/// default_tolerances.
ToleranceConfig sweep_schedule(const DiagonalFlow& flow, const Real& delta);

}  // namespace cusplab
