#pragma once

#include <vector>

#include "cusplab/linalg.hpp"
#include "cusplab/rational.hpp"

namespace cusplab {

enum class LPStatus { optimal, unbounded, infeasible };

/// minimize obj . x  subject to  row.a . x (rel) row.rhs  for each row,
/// with x_j >= 0 where nonneg[j], x_j free otherwise.
struct LPProblem {
    struct Row {
        QVec a;
        int rel = 0;  // -1: <=, 0: ==, +1: >=
        Rat rhs;
    };
    int nvars = 0;
    QVec obj;
    std::vector<Row> rows;
    std::vector<bool> nonneg;
};

struct LPSolution {
    LPStatus status = LPStatus::infeasible;
    Rat value;
    QVec x;
};

/// Exact two-phase simplex with Bland's rule (no cycling, fully rational).
LPSolution solve_lp(const LPProblem& p);

}  // namespace cusplab
