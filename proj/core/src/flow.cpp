#include "cusplab/flow.hpp"

#include <algorithm>
#include <stdexcept>

namespace cusplab {

DiagonalFlow::DiagonalFlow(int dim, QVec a) : d(dim), alpha(std::move(a)) {
    if (d < 2) throw std::invalid_argument("flow dimension must be >= 2");
    if (static_cast<int>(alpha.size()) != d)
        throw std::invalid_argument("flow exponent count does not match dimension");
    for (auto& q : alpha) q.canonicalize();
    if (rat_sum(alpha) != 0)
        throw std::invalid_argument("flow exponents must sum to zero exactly");
}

QVec DiagonalFlow::sorted_desc() const {
    QVec s = alpha;
    std::sort(s.begin(), s.end(), [](const Rat& a, const Rat& b) { return a > b; });
    return s;
}

Rat DiagonalFlow::positive_mass() const {
    Rat s(0);
    for (const auto& q : alpha) s += rat_pos(q);
    return s;
}

Rat DiagonalFlow::max_abs() const {
    Rat m(0);
    for (const auto& q : alpha) m = std::max(m, rat_abs(q));
    return m;
}

bool DiagonalFlow::is_zero() const {
    for (const auto& q : alpha)
        if (q != 0) return false;
    return true;
}

LinearFunctional::LinearFunctional(QVec raw) : coeffs(std::move(raw)) {
    if (coeffs.empty()) throw std::invalid_argument("empty linear functional");
    Rat mean = rat_sum(coeffs) / Rat(static_cast<int>(coeffs.size()));
    for (auto& c : coeffs) {
        c -= mean;
        c.canonicalize();
    }
}

Rat LinearFunctional::apply(const QVec& h) const {
    if (h.size() != coeffs.size())
        throw std::invalid_argument("functional/vector dimension mismatch");
    Rat s(0);
    for (size_t i = 0; i < h.size(); ++i) s += coeffs[i] * h[i];
    return s;
}

Rat LinearFunctional::norm2() const {
    Rat s(0);
    for (const auto& c : coeffs) s += c * c;
    return s;
}

Real LinearFunctional::norm() const { return real_sqrt(to_real(norm2())); }

}  // namespace cusplab
