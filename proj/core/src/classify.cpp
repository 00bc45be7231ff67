#include "cusplab/classify.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

#include "cusplab/errors.hpp"
#include "cusplab/grassmann.hpp"
#include "cusplab/real.hpp"

namespace cusplab {

namespace {

std::vector<int> identity_perm(int d) {
    std::vector<int> p(d);
    for (int i = 0; i < d; ++i) p[i] = i;
    return p;
}

/// Ascending multiset of the first l exponents along the permutation rep.
QVec prefix_multiset(const DiagonalFlow& flow, const std::vector<int>& rep, int l) {
    QVec m;
    m.reserve(static_cast<size_t>(l));
    for (int i = 0; i < l; ++i) m.push_back(flow.alpha[rep[i]]);
    std::sort(m.begin(), m.end());
    return m;
}

/// Certified dominant exponent multiset of the distinguished subspace V_l of
/// x, or nullopt when uniqueness or dominance cannot be certified.
std::optional<QVec> dominant_multiset(const LatticeSnapshot& x, int l, const DiagonalFlow& flow,
                                      const ToleranceConfig& cfg,
                                      RationalSubspace* subspace_out = nullptr) {
    UniqueSubspace us = unique_small_subspace(x, l, cfg);
    if (!us.gap_verified) return std::nullopt;
    RationalSubspace amb = ambient_subspace(x.base, us.V);
    std::optional<QVec> E;
    try {
        E = orientation_of_subspace(amb, flow, cfg, x.t);
    } catch (const PrecisionError&) {
        return std::nullopt;  // dominance undecidable at this precision
    }
    if (E && subspace_out) *subspace_out = std::move(amb);
    return E;
}

}  // namespace

ClassifyResult classify(const LatticeSnapshot& x, const DiagonalFlow& flow,
                        const ToleranceConfig& cfg) {
    if (x.base.d != flow.d) throw std::invalid_argument("classify: dimension mismatch");
    const MinimaResult m = successive_minima(x);
    ClassifyResult out;
    out.P = ParabolicSubgroup(flow.d, eta_set(m, cfg.delta));
    out.Q = ParabolicSubgroup(flow.d, eta_set(m, cfg.delta_prime));
    out.compact = out.P.is_full() && out.Q.is_full();
    if (out.Q.is_full()) {
        // No distinguished subspaces: the sole coset of the full group.
        out.orientation = coset_of(flow, out.Q, identity_perm(flow.d));
        return out;
    }
    std::vector<QVec> prefixes;
    prefixes.reserve(out.Q.jumps.size());
    for (int l : out.Q.jumps) {
        auto E = dominant_multiset(x, l, flow, cfg);
        if (!E) return out;  // orientation stays absent
        prefixes.push_back(std::move(*E));
    }
    out.orientation = coset_from_prefix_multisets(flow, out.Q, prefixes);
    return out;
}

Real covol_evolution_check(const LatticeSnapshot& x, const DiagonalFlow& flow,
                           const ToleranceConfig& cfg, const Real& t_min, const Real& t_max,
                           const ParabolicSubgroup& P, const Orientation& w, int samples) {
    if (x.base.d != flow.d || P.d != flow.d)
        throw std::invalid_argument("covol_evolution_check: dimension mismatch");
    if (x.alpha != flow.alpha)
        throw std::invalid_argument("covol_evolution_check: snapshot was taken under another flow");
    if (!(w.P == P))
        throw std::invalid_argument("covol_evolution_check: orientation belongs to another parabolic");
    if (samples < 1) throw std::invalid_argument("covol_evolution_check: samples >= 1 required");
    const Real lo = at_working_precision(t_min);
    const Real hi = at_working_precision(t_max);
    if (lo > hi) throw std::invalid_argument("covol_evolution_check: empty interval");

    std::vector<Real> base_log;  // log alpha_l(x) at the snapshot itself
    std::vector<Rat> drift;      // sum of the first l exponents along w
    for (int l : P.jumps) {
        base_log.push_back(real_log(alpha_min_covol(x, l).value));
        Rat s(0);
        for (int i = 0; i < l; ++i) s += flow.alpha[w.rep[i]];
        drift.push_back(s);
    }

    Real dev = at_working_precision(Real(0));
    for (int j = 0; j < samples; ++j) {
        Real t = lo;
        if (samples > 1) t = lo + (hi - lo) * Real(j) / Real(samples - 1);
        const LatticeSnapshot y = LatticeSnapshot::make(x.base, flow, x.t + t);
        const std::vector<int> jumps_now = eta_set(y, cfg.delta);
        for (size_t a = 0; a < P.jumps.size(); ++a) {
            const int l = P.jumps[a];
            bool oriented = false;
            if (std::binary_search(jumps_now.begin(), jumps_now.end(), l)) {
                try {
                    const auto E = dominant_multiset(y, l, flow, cfg);
                    oriented = E && *E == prefix_multiset(flow, w.rep, l);
                } catch (const std::invalid_argument&) {
                    oriented = false;  // jump dissolved past the eta0 threshold
                }
            }
            if (!oriented)
                throw RegionExitError("covol_evolution_check: trajectory left the oriented region",
                                      static_cast<double>(t));
            const Real dl = real_abs(real_log(alpha_min_covol(y, l).value) - base_log[a] -
                                     t * to_real(drift[a]));
            if (dl > dev) dev = dl;
        }
    }
    return dev;
}

FlagBasis flag_basis(const LatticeSnapshot& x, const ParabolicSubgroup& P,
                     const DiagonalFlow& flow, const ToleranceConfig& cfg) {
    const int d = flow.d;
    if (x.base.d != d || P.d != d) throw std::invalid_argument("flag_basis: dimension mismatch");

    // Orientation and the ambient flag subspaces.
    std::optional<Orientation> w;
    std::vector<RationalSubspace> flag;
    if (P.is_full()) {
        w = coset_of(flow, P, identity_perm(d));
    } else {
        std::vector<QVec> prefixes;
        for (int l : P.jumps) {
            RationalSubspace amb;
            auto E = dominant_multiset(x, l, flow, cfg, &amb);
            if (!E) throw std::invalid_argument("flag_basis: x carries no orientation for P");
            prefixes.push_back(std::move(*E));
            flag.push_back(std::move(amb));
        }
        w = coset_from_prefix_multisets(flow, P, prefixes);
        if (!w) throw std::invalid_argument("flag_basis: inconsistent orientation data");
    }
    const std::vector<int>& rep = w->rep;

    // Exact nested basis of the flag in ambient coordinates: greedily extend by
    // generator columns at each jump, then complete along the target axes.
    std::vector<ZVec> chosen;
    auto extends_rank = [&](const ZVec& v) {
        QMat M(d, static_cast<int>(chosen.size()) + 1);
        for (int c = 0; c < static_cast<int>(chosen.size()); ++c)
            for (int i = 0; i < d; ++i) M(i, c) = Rat(chosen[static_cast<size_t>(c)][i]);
        for (int i = 0; i < d; ++i) M(i, static_cast<int>(chosen.size())) = Rat(v[i]);
        return qmat_rank(M) == static_cast<int>(chosen.size()) + 1;
    };
    for (const RationalSubspace& V : flag) {
        for (int c = 0; c < V.l; ++c) {
            if (static_cast<int>(chosen.size()) == V.l) break;
            ZVec v = V.coeffs.col(c);
            if (extends_rank(v)) chosen.push_back(std::move(v));
        }
        if (static_cast<int>(chosen.size()) != V.l)
            throw std::logic_error("flag_basis: nested extension failed");
    }
    while (static_cast<int>(chosen.size()) < d) {
        ZVec e(static_cast<size_t>(d), Int(0));
        e[static_cast<size_t>(rep[chosen.size()])] = 1;
        if (extends_rank(e)) {
            chosen.push_back(std::move(e));
            continue;
        }
        bool done = false;
        for (int i = 0; i < d && !done; ++i) {
            ZVec ei(static_cast<size_t>(d), Int(0));
            ei[static_cast<size_t>(i)] = 1;
            if (extends_rank(ei)) {
                chosen.push_back(std::move(ei));
                done = true;
            }
        }
        if (!done) throw std::logic_error("flag_basis: completion failed");
    }

    // Evolved embedding of the flag columns.
    const Real t = at_working_precision(x.t);
    RVec scale(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) scale[static_cast<size_t>(i)] = real_exp(t * to_real(flow.alpha[i]));
    RMat F(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i)
            F(i, j) = scale[static_cast<size_t>(i)] * to_real(chosen[static_cast<size_t>(j)][i]);

    // O: per exponent group, orthonormalized group-local components of the
    // flag columns, placed at the axis each flag position targets.
    std::map<Rat, std::vector<int>> groups;
    for (int i = 0; i < d; ++i) groups[flow.alpha[i]].push_back(i);
    const Real pivot_eps = boost::multiprecision::ldexp(
        at_working_precision(Real(1)), -(3 * static_cast<int>(precision_bits())) / 4);
    RMat O(d, d);
    std::map<Rat, std::vector<RVec>> built;
    for (int j = 0; j < d; ++j) {
        const int axis = rep[j];
        const Rat& key = flow.alpha[axis];
        const std::vector<int>& idx = groups[key];
        RVec v(idx.size());
        for (size_t r = 0; r < idx.size(); ++r) v[r] = F(idx[r], j);
        std::vector<RVec>& acc = built[key];
        for (int pass = 0; pass < 2; ++pass)
            for (const RVec& q : acc) {
                const Real c = rvec_dot(v, q);
                for (size_t r = 0; r < v.size(); ++r) v[r] -= c * q[r];
            }
        const Real nrm = rvec_norm(v);
        if (nrm < pivot_eps) throw PrecisionError("flag_basis: degenerate block projection");
        for (Real& e : v) e /= nrm;
        for (size_t r = 0; r < idx.size(); ++r) O(idx[r], axis) = v[r];
        acc.push_back(std::move(v));
    }

    // A = (O w)^T F, then the block LU step A = u * (block upper) for the
    // blocks of P; u collects the multipliers and is exactly block-unipotent.
    RMat Z(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) Z(i, j) = O(i, rep[j]);
    RMat A = mat_mul(Z.transposed(), F);

    const std::vector<int> bd = P.boundaries();
    RMat u = RMat::identity(d);
    for (size_t m = 0; m + 1 < bd.size(); ++m) {
        const int c0 = bd[m], c1 = bd[m + 1];
        const int nb = c1 - c0;
        // invert the pivot block by Gauss-Jordan with partial pivoting
        RMat D(nb, nb), Dinv = RMat::identity(nb);
        Real dmax = at_working_precision(Real(1));
        for (int i = 0; i < nb; ++i)
            for (int jj = 0; jj < nb; ++jj) {
                D(i, jj) = A(c0 + i, c0 + jj);
                if (real_abs(D(i, jj)) > dmax) dmax = real_abs(D(i, jj));
            }
        for (int col = 0; col < nb; ++col) {
            int piv = col;
            for (int r = col + 1; r < nb; ++r)
                if (real_abs(D(r, col)) > real_abs(D(piv, col))) piv = r;
            if (real_abs(D(piv, col)) < pivot_eps * dmax)
                throw PrecisionError("flag_basis: singular pivot block");
            if (piv != col)
                for (int jj = 0; jj < nb; ++jj) {
                    std::swap(D(piv, jj), D(col, jj));
                    std::swap(Dinv(piv, jj), Dinv(col, jj));
                }
            const Real p = D(col, col);
            for (int jj = 0; jj < nb; ++jj) {
                D(col, jj) /= p;
                Dinv(col, jj) /= p;
            }
            for (int r = 0; r < nb; ++r) {
                if (r == col) continue;
                const Real f = D(r, col);
                if (f == 0) continue;
                for (int jj = 0; jj < nb; ++jj) {
                    D(r, jj) -= f * D(col, jj);
                    Dinv(r, jj) -= f * Dinv(col, jj);
                }
            }
        }
        for (int r = c1; r < d; ++r) {
            RVec mult(static_cast<size_t>(nb));
            for (int q = 0; q < nb; ++q) {
                Real s = at_working_precision(Real(0));
                for (int i = 0; i < nb; ++i) s += A(r, c0 + i) * Dinv(i, q);
                mult[static_cast<size_t>(q)] = s;
            }
            for (int q = 0; q < nb; ++q) u(r, c0 + q) = mult[static_cast<size_t>(q)];
            for (int col = 0; col < d; ++col) {
                Real s = A(r, col);
                for (int q = 0; q < nb; ++q) s -= mult[static_cast<size_t>(q)] * A(c0 + q, col);
                A(r, col) = s;
            }
        }
    }

    return FlagBasis{std::move(O), rep, std::move(u)};
}

Lattice cusp_witness(const ParabolicSubgroup& P, long n) {
    if (P.is_full()) throw std::invalid_argument("cusp_witness: P must be proper");
    if (n < 2) throw std::invalid_argument("cusp_witness: n >= 2 required");
    const std::vector<int> sizes = P.block_sizes();
    const int k = static_cast<int>(P.jumps.size());
    Rat e(0);
    for (int m = 1; m <= k; ++m) e += Rat(sizes[static_cast<size_t>(m - 1)] * (k + 1 - m));
    e /= Rat(sizes[static_cast<size_t>(k)]);
    e.canonicalize();
    const unsigned long q = e.get_den().get_ui();
    const unsigned long p = e.get_num().get_ui();
    const Int base(n);
    const std::vector<int> bd = P.boundaries();
    QMat B(P.d, P.d);
    for (int m = 1; m <= k; ++m) {
        Int pw;
        mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(),
                   q * static_cast<unsigned long>(k + 1 - m));
        const Rat z = Rat(1) / Rat(pw);
        for (int i = bd[static_cast<size_t>(m - 1)]; i < bd[static_cast<size_t>(m)]; ++i)
            B(i, i) = z;
    }
    Int last;
    mpz_pow_ui(last.get_mpz_t(), base.get_mpz_t(), p);
    for (int i = bd[static_cast<size_t>(k)]; i < bd[static_cast<size_t>(k + 1)]; ++i)
        B(i, i) = Rat(last);
    return Lattice(std::move(B));
}

}  // namespace cusplab
