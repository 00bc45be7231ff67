#include "cusplab/grassmann.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cusplab/lattice.hpp"
#include "cusplab/real.hpp"

namespace cusplab {

namespace {

Real pow2(int e) { return boost::multiprecision::ldexp(Real(1), e); }

/// Exact dyadic rational equal to a finite Real.
Rat rat_from_real_exact(const Real& x) {
    if (x == 0) return Rat(0);
    mpz_class z;
    const mp_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), x.backend().data());
    Rat r(z);
    if (e >= 0) {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e));
        r *= Rat(p);
    } else {
        mpz_class p;
        mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(-e));
        r /= Rat(p);
    }
    return r;
}

/// Plücker mass per exponent multiset: key = ascending multiset of the flow
/// exponents on the coordinate axes of J, value = sum of squared coordinates.
std::map<QVec, Rat> grouped_masses(const RationalSubspace& V, const DiagonalFlow& flow) {
    const ZVec p = plucker(V);
    const auto subs = combinations(V.d, V.l);
    std::map<QVec, Rat> mass;
    for (size_t i = 0; i < subs.size(); ++i) {
        if (p[i] == 0) continue;
        QVec key;
        for (int j : subs[i]) key.push_back(flow.alpha[j]);
        std::sort(key.begin(), key.end());
        mass[key] += Rat(p[i] * p[i]);
    }
    return mass;
}

Rat weight_sum(const QVec& multiset) {
    Rat s(0);
    for (const Rat& x : multiset) s += x;
    return s;
}

}  // namespace

Real grassmann_distance(const RMat& V, const RMat& W) {
    if (V.rows != W.rows || V.cols != W.cols)
        throw std::invalid_argument("grassmann_distance: dimension mismatch");
    RMat Vn = V, Wn = W;
    for (Real& x : Vn.a) x = at_working_precision(x);
    for (Real& x : Wn.a) x = at_working_precision(x);
    const RMat QV = orthonormal_cols(Vn);
    const RMat QW = orthonormal_cols(Wn);
    if (QV.cols != V.cols || QW.cols != W.cols)
        throw std::invalid_argument("grassmann_distance: rank-deficient input");
    RMat C(QV.cols, QW.cols);
    for (int i = 0; i < QV.cols; ++i)
        for (int j = 0; j < QW.cols; ++j) {
            Real s(0);
            for (int r = 0; r < QV.rows; ++r) s += QV(r, i) * QW(r, j);
            C(i, j) = s;
        }
    const RVec sv = singular_values(C);
    Real smin = sv.empty() ? Real(0) : sv[0];
    if (smin > 1) smin = Real(1);  // clamp rounding overshoot
    if (smin < 0) smin = Real(0);
    return real_sqrt(Real(1) - smin * smin);
}

Real grassmann_distance(const LatticeSnapshot& x, const RationalSubspace& V,
                        const RationalSubspace& W) {
    if (V.d != x.d() || W.d != x.d())
        throw std::invalid_argument("grassmann_distance: ambient mismatch");
    if (V.l != W.l) throw std::invalid_argument("grassmann_distance: dimension mismatch");
    const RMat B = x.real_basis;
    auto embed = [&](const RationalSubspace& S) {
        RMat M(x.d(), S.l);
        for (int j = 0; j < S.l; ++j)
            for (int i = 0; i < x.d(); ++i) {
                Real s(0);
                for (int r = 0; r < x.d(); ++r) s += B(i, r) * to_real(Rat(S.coeffs(r, j)));
                M(i, j) = s;
            }
        return M;
    };
    return grassmann_distance(embed(V), embed(W));
}

std::optional<QVec> orientation_of_subspace(const RationalSubspace& V, const DiagonalFlow& flow,
                                            const ToleranceConfig& cfg) {
    if (V.d != flow.d) throw std::invalid_argument("orientation: ambient mismatch");
    if (V.l == 0) throw std::invalid_argument("orientation: trivial subspace");
    const auto mass = grouped_masses(V, flow);
    const Rat eps = rat_from_real_exact(cfg.eps0);
    const Rat eps_sq = eps * eps;
    Rat total(0);
    for (const auto& [key, m] : mass) total += m;
    for (const auto& [key, m] : mass) {
        // dominance: everything outside the group is below eps0^2 of it
        if (total - m < eps_sq * m) return key;
    }
    return std::nullopt;
}

std::optional<QVec> orientation_of_subspace(const RationalSubspace& V, const DiagonalFlow& flow,
                                            const ToleranceConfig& cfg, const Real& t) {
    if (V.d != flow.d) throw std::invalid_argument("orientation: ambient mismatch");
    if (V.l == 0) throw std::invalid_argument("orientation: trivial subspace");
    const auto mass = grouped_masses(V, flow);
    const Rat eps = rat_from_real_exact(cfg.eps0);
    const Rat eps_sq = eps * eps;
    for (const auto& [key, m] : mass) {
        std::map<Rat, Rat> rest;
        for (const auto& [other, mo] : mass) {
            if (other == key) continue;
            rest[weight_sum(other)] += mo;
        }
        std::map<Rat, Rat> bound{{weight_sum(key), eps_sq * m}};
        if (compare_norm_forms(rest, bound, t) < 0) return key;  // at most one group dominates
    }
    return std::nullopt;
}

GrassmannIntervals grassmann_intervals(const RationalSubspace& V, const DiagonalFlow& flow,
                                       const ToleranceConfig& cfg, const Real& t_min,
                                       const Real& t_max) {
    if (V.d != flow.d) throw std::invalid_argument("grassmann_intervals: ambient mismatch");
    if (V.l == 0) throw std::invalid_argument("grassmann_intervals: trivial subspace");
    if (t_min > t_max) throw std::invalid_argument("grassmann_intervals: empty window");
    const Real lo_w = at_working_precision(t_min), hi_w = at_working_precision(t_max);
    const Real eps0 = at_working_precision(cfg.eps0);
    const Real root_tol = at_working_precision(cfg.root_tol);
    const auto mass = grouped_masses(V, flow);

    GrassmannIntervals out;
    out.gap_total = Real(0);
    if (mass.size() == 1) {
        out.intervals.push_back({mass.begin()->first, lo_w, hi_w});
        return out;
    }

    struct Group {
        QVec key;
        Real beta;    // 2 * weight sum (exponent of the mass term)
        Real log_m;   // log of the group's mass
    };
    std::vector<Group> groups;
    for (const auto& [key, m] : mass)
        groups.push_back({key, 2 * to_real(weight_sum(key)), real_log(to_real(m))});

    const Real log_eps_sq = 2 * real_log(eps0);

    // F_g(t) = log(sum_{h != g} m_h e^{beta_h t}) - (log m_g + beta_g t) - log eps0^2;
    // the group dominates exactly where F_g < 0.  log-sum-exp minus an affine
    // function is convex, so {F_g < 0} meets the window in one interval.
    auto F = [&](size_t g, const Real& t) {
        Real hi;  // running max exponent for a stable log-sum-exp
        bool first = true;
        for (size_t h = 0; h < groups.size(); ++h) {
            if (h == g) continue;
            const Real e = groups[h].log_m + groups[h].beta * t;
            if (first || e > hi) hi = e;
            first = false;
        }
        Real s(0);
        for (size_t h = 0; h < groups.size(); ++h) {
            if (h == g) continue;
            s += real_exp(groups[h].log_m + groups[h].beta * t - hi);
        }
        return hi + real_log(s) - groups[g].log_m - groups[g].beta * t - log_eps_sq;
    };

    for (size_t g = 0; g < groups.size(); ++g) {
        // minimize the convex F_g over the window by ternary search
        Real a = lo_w, b = hi_w;
        for (int it = 0; it < 120; ++it) {
            const Real m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
            if (F(g, m1) <= F(g, m2))
                b = m2;
            else
                a = m1;
        }
        const Real tstar = (a + b) / 2;
        if (F(g, tstar) >= 0) continue;  // never dominates inside the window

        auto bisect = [&](Real neg, Real pos) {
            // invariant: F(neg) < 0 <= F(pos); return the crossing to root_tol
            while (real_abs(pos - neg) > root_tol) {
                const Real mid = (neg + pos) / 2;
                if (F(g, mid) < 0)
                    neg = mid;
                else
                    pos = mid;
            }
            return neg;
        };
        Real lo = lo_w, hi = hi_w;
        if (F(g, lo_w) >= 0) lo = bisect(tstar, lo_w);
        if (F(g, hi_w) >= 0) hi = bisect(tstar, hi_w);
        out.intervals.push_back({groups[g].key, lo, hi});
    }

    std::sort(out.intervals.begin(), out.intervals.end(),
              [](const DominanceInterval& x, const DominanceInterval& y) {
                  return weight_sum(x.exponents) < weight_sum(y.exponents);
              });
    Real covered = at_working_precision(Real(0));
    for (const auto& iv : out.intervals) covered += iv.hi - iv.lo;
    out.gap_total = (hi_w - lo_w) - covered;
    if (out.gap_total < 0) out.gap_total = Real(0);
    return out;
}

Real default_eps0(const DiagonalFlow& flow) {
    // Distinct coordinate subspaces of equal dimension always sit at distance
    // exactly 1 in this metric (some axis of one is orthogonal to all of the
    // other), so the scan below only confirms whether a qualifying pair exists.
    const int d = flow.d;
    Real best(-1);
    for (int l = 1; l < d; ++l) {
        const auto subs = combinations(d, l);
        std::vector<QVec> keys(subs.size());
        for (size_t i = 0; i < subs.size(); ++i) {
            for (int j : subs[i]) keys[i].push_back(flow.alpha[j]);
            std::sort(keys[i].begin(), keys[i].end());
        }
        for (size_t i = 0; i < subs.size(); ++i)
            for (size_t j = i + 1; j < subs.size(); ++j) {
                if (keys[i] == keys[j]) continue;
                RMat Vi(d, l), Vj(d, l);
                for (int c = 0; c < l; ++c) {
                    Vi(subs[i][c], c) = Real(1);
                    Vj(subs[j][c], c) = Real(1);
                }
                const Real dist = grassmann_distance(Vi, Vj);
                if (best < 0 || dist < best) best = dist;
            }
    }
    if (best < 0) best = Real(1);
    return best / 3;
}

ToleranceConfig default_tolerances(const DiagonalFlow& flow, const Real& delta,
                                   const Real& delta_prime) {
    ToleranceConfig cfg;
    cfg.eta0 = at_working_precision(Real(1)) / 4;
    cfg.eps0 = default_eps0(flow);
    cfg.delta = at_working_precision(delta);
    cfg.delta_prime = at_working_precision(delta_prime);
    const Real lo = boost::multiprecision::pow(real_log(cfg.delta_prime) / real_log(cfg.delta),
                                               Real(1) / (flow.d + 1));
    cfg.r = (lo + 1) / 2;
    cfg.root_tol = pow2(-40);
    cfg.precision = precision_bits();
    cfg.validate(flow.d);
    return cfg;
}

}  // namespace cusplab
