#pragma once

#include <string>
#include <vector>

#include "cusplab/linalg.hpp"
#include "cusplab/rational.hpp"
#include "cusplab/real.hpp"

namespace cusplab {

/// One-parameter diagonal flow a_t = exp(t * diag(alpha)), with exact
/// rational exponents summing to zero.
struct DiagonalFlow {
    int d = 0;
    QVec alpha;

    DiagonalFlow() = default;
    DiagonalFlow(int dim, QVec a);  // validates; throws std::invalid_argument

    /// Exponents sorted in non-increasing order (used by closed forms).
    QVec sorted_desc() const;

    /// Sum of positive parts of the exponents.
    Rat positive_mass() const;

    /// max_i |alpha_i| — Lipschitz constant driver for log-minima evolution.
    Rat max_abs() const;

    bool is_zero() const;

    bool operator==(const DiagonalFlow& o) const { return d == o.d && alpha == o.alpha; }
};

/// Linear functional on diagonal matrices, phi(diag(h)) = sum c_i h_i,
/// stored with the canonical sum-zero representative.
struct LinearFunctional {
    QVec coeffs;  // sum is exactly zero

    LinearFunctional() = default;
    explicit LinearFunctional(QVec raw);  // subtracts the mean

    static LinearFunctional zero(int d) { return LinearFunctional(QVec(d, Rat(0))); }

    Rat apply(const QVec& h) const;
    Rat norm2() const;       // exact squared Euclidean norm
    Real norm() const;       // Euclidean norm at working precision
    int dim() const { return static_cast<int>(coeffs.size()); }

    bool operator==(const LinearFunctional& o) const { return coeffs == o.coeffs; }
};

}  // namespace cusplab
