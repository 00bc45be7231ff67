#pragma once

#include <stdexcept>

#include "cusplab/real.hpp"

namespace cusplab {

/// Threshold bundle shared by classification and coding.  All thresholds are
/// held as Reals; validation certifies the strict chains numerically at the
/// working precision.
struct ToleranceConfig {
    Real eta0;         // uniqueness threshold for small subspaces, in (0,1)
    Real eps0;         // orientation dominance margin, in (0,1)
    Real delta;        // region threshold
    Real delta_prime;  // refined region threshold, sqrt(delta) < delta' < eta0
    Real r;            // multi-scale ratio, strictly inside its admissible interval
    Real root_tol;     // bracketing tolerance for time roots
    int precision = 128;

    /// Throws std::invalid_argument when any invariant fails:
    /// 0 < delta < delta' < eta0 < 1, delta' > delta^{1/2}, eps0 in (0,1),
    /// r in ((log delta' / log delta)^{1/(d+1)}, 1), root_tol > 0.
    void validate(int d) const {
        if (precision < 24) throw std::invalid_argument("tolerance: precision must be >= 24 bits");
        if (!(delta > 0 && delta < delta_prime && delta_prime < eta0 && eta0 < 1))
            throw std::invalid_argument("tolerance: need 0 < delta < delta' < eta0 < 1");
        if (!(delta_prime * delta_prime > delta))
            throw std::invalid_argument("tolerance: need delta' > sqrt(delta)");
        if (!(eps0 > 0 && eps0 < 1)) throw std::invalid_argument("tolerance: eps0 must be in (0,1)");
        if (!(root_tol > 0)) throw std::invalid_argument("tolerance: root_tol must be positive");
        if (d < 1) throw std::invalid_argument("tolerance: dimension must be positive");
        const Real lo = pow(real_log(delta_prime) / real_log(delta), Real(1) / (d + 1));
        if (!(r > lo && r < 1))
            throw std::invalid_argument("tolerance: r outside its admissible interval");
    }
};

}  // namespace cusplab
