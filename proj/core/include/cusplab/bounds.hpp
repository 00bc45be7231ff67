#pragma once

#include <optional>
#include <vector>

#include "cusplab/flow.hpp"
#include "cusplab/simplex.hpp"
#include "cusplab/weyl.hpp"

namespace cusplab {

/// Which parabolics a bound/optimization ranges over.
struct ParabolicScope {
    enum class Kind { cusp, all, list } kind = Kind::cusp;
    std::vector<ParabolicSubgroup> list;  // used when kind == list

    static ParabolicScope cusp() { return {}; }
    static ParabolicScope all() { return {Kind::all, {}}; }
    static ParabolicScope of(std::vector<ParabolicSubgroup> ps) {
        return {Kind::list, std::move(ps)};
    }
};

std::vector<ParabolicSubgroup> scope_parabolics(const ParabolicScope& s, int d);

/// Worst corrected entropy over every proper parabolic and coset.
Rat bound_cusp(const DiagonalFlow& flow, const LinearFunctional& phi);

/// Worst corrected entropy over the cosets of one parabolic.
Rat bound_at_P(const DiagonalFlow& flow, const ParabolicSubgroup& P,
               const LinearFunctional& phi);

/// Empirical measure on coset classes; masses are exact rationals.
struct MeasureVector {
    std::vector<std::pair<Orientation, Rat>> entries;

    Rat total() const;
    /// Throws std::invalid_argument on negative mass or total > 1 (+1e-12).
    void validate() const;
};

/// Sum of mass-weighted corrected entropies; unassigned mass (1 - total)
/// is charged at the global maximum of (h - phi) over all parabolics.
Rat bound_weighted(const DiagonalFlow& flow, const LinearFunctional& phi,
                   const MeasureVector& mu);

struct PhiOptimum {
    LPStatus status = LPStatus::infeasible;
    Rat value;
    LinearFunctional phi;
};

/// Exact epigraph LP: minimize max over in-scope (P,[w]) of (h - phi)([w]_P)
/// over sum-zero linear functionals.
PhiOptimum optimize_phi(const DiagonalFlow& flow, const ParabolicScope& scope);

/// h(G,a) minus the positive exponent mass.
Rat closed_form_hinf(const DiagonalFlow& flow);

struct PkBound {
    Rat value;
    int m = 0;           // chosen minimal index
    int k_effective = 0; // k after the d-k symmetry reduction
};

/// Closed form for the k-th maximal standard parabolic; throws
/// std::invalid_argument for k out of [1, d-1], std::domain_error when no
/// valid minimal index exists.
PkBound closed_form_hinf_Pk(const DiagonalFlow& flow, int k);

struct BorelBound {
    Rat value;  // h(G,a)/2
    bool sharp; // all multiplicities 1, or exactly two distinct exponents
};

BorelBound closed_form_B_bound(const DiagonalFlow& flow);

/// Label of one region key (P, Q, [w]_Q): the parabolic H between Q and P
/// maximizing (h - phi)([w]_H). Ties resolve to the lexicographically
/// smallest jump sequence.
struct RegionLabel {
    ParabolicSubgroup P, Q;
    Orientation wQ;
    ParabolicSubgroup H;
    Orientation wH;
    Rat value;
};

RegionLabel argmax_label(const DiagonalFlow& flow, const LinearFunctional& phi,
                         const ParabolicSubgroup& P, const ParabolicSubgroup& Q,
                         const Orientation& wQ);

/// Labels for every key (P, Q <= P, [w]_Q), deterministic order.
std::vector<RegionLabel> assemble_partition_labels(const DiagonalFlow& flow,
                                                   const LinearFunctional& phi);

/// One evaluated coset row of a bound report.
struct BoundRow {
    Orientation o;
    Rat h;
    QVec pi;
    Rat hphi;
};

/// Rows for all cosets of the in-scope parabolics, deterministic order.
std::vector<BoundRow> bound_rows(const DiagonalFlow& flow, const LinearFunctional& phi,
                                 const ParabolicScope& scope);

}  // namespace cusplab
