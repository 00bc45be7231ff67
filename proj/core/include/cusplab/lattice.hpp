#pragma once

#include <map>
#include <optional>
#include <vector>

#include "cusplab/errors.hpp"
#include "cusplab/flow.hpp"
#include "cusplab/linalg.hpp"

namespace cusplab {

/// A unimodular lattice x = B Z^d given by exact rational basis columns.
struct Lattice {
    int d = 0;
    QMat basis;     // columns generate the lattice
    int det_sign = 1;

    Lattice() = default;
    explicit Lattice(QMat b);  // validates |det| = 1; throws std::invalid_argument

    static Lattice standard(int dim);
};

/// The point a_t x: exact base data plus the evolved high-precision basis.
/// All certified computations re-derive from (basis, alpha, t); real_basis is
/// the rendered matrix exp(t diag(alpha)) * basis at `precision` bits.
struct LatticeSnapshot {
    Lattice base;
    QVec alpha;      // flow exponents (zero vector for a plain lattice)
    Real t;
    int precision = 0;
    RMat real_basis;

    static LatticeSnapshot make(const Lattice& L, const DiagonalFlow& flow, const Real& time);
    static LatticeSnapshot still(const Lattice& L);  // t = 0, zero flow

    bool exact() const { return t == 0; }
    int d() const { return base.d; }
};

/// Successive minima with witnesses. Values carry a certified relative error
/// envelope; for exact (t = 0) inputs the squared minima are exact rationals.
struct MinimaResult {
    RVec lambda;           // ascending
    Real rel_error;        // certified relative error bound on each lambda
    QVec lambda_sq_exact;  // exact squared minima (empty unless input exact)
    ZMat witnesses;        // column i = integer coords of a lambda_i witness
                           // in the base lattice basis
};

/// Options for the reduction + enumeration engine.
struct MinimaOptions {
    long node_cap = 4'000'000;       // enumeration nodes before CapacityError
    const ZMat* basis_hint = nullptr;  // warm-start unimodular transform
};

MinimaResult successive_minima(const LatticeSnapshot& x, const MinimaOptions& opt = {});
MinimaResult successive_minima(const Lattice& x, const MinimaOptions& opt = {});

/// eta_i = lambda_i / lambda_{i+1} in (0, 1]; 1-based i in [1, d-1].
Real eta(const LatticeSnapshot& x, int i);
Real eta(const MinimaResult& m, int i);

/// { i : eta_i(x) < eps }, certified (PrecisionError on an unresolvable tie).
std::vector<int> eta_set(const LatticeSnapshot& x, const Real& eps);
std::vector<int> eta_set(const MinimaResult& m, const Real& eps);

/// Exact squared norm of the lattice vector with coefficient vector k at t=0.
Rat lattice_norm_sq_exact(const Lattice& L, const ZVec& k);

/// Certified comparison of two evolved lattice-vector norms at time t:
/// returns -1/0/+1; throws PrecisionError when the working precision cannot
/// separate formally distinct values.
int compare_evolved_norms(const Lattice& L, const QVec& alpha, const Real& t,
                          const ZVec& k1, const ZVec& k2);

// ---------------------------------------------------------------------------
// Generic weighted engine.  A WeightedLattice is a full-rank lattice with
// exact basis columns B and per-coordinate exponents w; the squared norm of
// the vector with coefficients k is  sum_i exp(2 t w_i) (B k)_i^2.  The plain
// case is w = alpha; exterior-power lattices reuse the same machinery with
// subset-sum exponents.
// ---------------------------------------------------------------------------

struct WeightedLattice {
    QMat basis;    // n x n, nonsingular
    QVec weights;  // size n
    Real t;
    int n() const { return basis.cols; }
};

/// Exact norm form of a coefficient vector: exponent value -> coefficient,
/// representing sum_g coeff_g * exp(2 t g).  Zero coefficients are dropped.
std::map<Rat, Rat> norm_form(const WeightedLattice& L, const ZVec& k);

/// Certified positive-sum evaluation of a norm form at the lattice time.
Real eval_norm_form(const std::map<Rat, Rat>& f, const Real& t);

/// Certified comparison of two norm forms at time t (-1/0/+1).  Exact when
/// the difference form is single-signed; otherwise numeric with an error
/// envelope, throwing PrecisionError on an unresolvable tie.
int compare_norm_forms(const std::map<Rat, Rat>& a, const std::map<Rat, Rat>& b, const Real& t);

/// All nonzero coefficient vectors with certified norm^2 <= radius_sq_up, one
/// per +-pair (sign-canonical: first nonzero coefficient positive), sorted.
/// Exact inputs (t = 0) include boundary ties; throws CapacityError when the
/// node budget is exhausted.
std::vector<ZVec> enumerate_short_vectors(const WeightedLattice& L, const Real& radius_sq_up,
                                          long node_cap = 4'000'000);

/// Exact-radius variant (t = 0 only): membership decided by exact rational
/// comparison norm^2 <= radius_sq, boundary included.
std::vector<ZVec> enumerate_short_vectors(const WeightedLattice& L, const Rat& radius_sq,
                                          long node_cap = 4'000'000);

/// Successive minima of a weighted lattice (the engine behind the Lattice
/// overloads; exposed for exterior-power reuse).
MinimaResult weighted_minima(const WeightedLattice& L, const MinimaOptions& opt = {});

}  // namespace cusplab
