#include "cusplab/subspace.hpp"

#include <algorithm>
#include <map>

#include "cusplab/real.hpp"

namespace cusplab {

namespace {


/// Unique Hermite-normal generator matrix for the column span over Z.
/// Works on the transpose: row echelon with positive pivots, strictly
/// increasing pivot columns, and entries above each pivot reduced into
/// [0, pivot).
ZMat hnf_cols(const ZMat& G) {
    const int d = G.rows, m = G.cols;
    ZMat T = G.transposed();  // m x d, rows are generators
    int r = 0;
    for (int c = 0; c < d && r < m; ++c) {
        // gcd-eliminate all nonzero entries in column c at rows >= r
        while (true) {
            int nz = -1, cnt = 0;
            for (int i = r; i < m; ++i)
                if (T(i, c) != 0) {
                    ++cnt;
                    if (nz < 0 || abs(T(i, c)) < abs(T(nz, c))) nz = i;
                }
            if (cnt <= 1) break;
            for (int i = r; i < m; ++i) {
                if (i == nz || T(i, c) == 0) continue;
                Int q = T(i, c) / T(nz, c);  // truncated division shrinks |T(i,c)|
                if (q != 0)
                    for (int j = 0; j < d; ++j) T(i, j) -= q * T(nz, j);
            }
        }
        int piv = -1;
        for (int i = r; i < m; ++i)
            if (T(i, c) != 0) piv = i;
        if (piv < 0) continue;
        for (int j = 0; j < d; ++j) std::swap(T(r, j), T(piv, j));
        if (T(r, c) < 0)
            for (int j = 0; j < d; ++j) T(r, j) = -T(r, j);
        for (int i = 0; i < r; ++i) {
            // floor division so the reduced entry lands in [0, pivot)
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), T(i, c).get_mpz_t(), T(r, c).get_mpz_t());
            if (q != 0)
                for (int j = 0; j < d; ++j) T(i, j) -= q * T(r, j);
        }
        ++r;
    }
    ZMat H(d, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < d; ++j) H(j, i) = T(i, j);
    return H;
}

ZMat concat_cols(const ZMat& A, const ZMat& B) {
    ZMat C(A.rows, A.cols + B.cols);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) C(i, j) = A(i, j);
        for (int j = 0; j < B.cols; ++j) C(i, A.cols + j) = B(i, j);
    }
    return C;
}

/// det of the l x l submatrix of M picking rows J (all columns), exact.
Rat minor_det(const QMat& M, const std::vector<int>& J) {
    const int l = static_cast<int>(J.size());
    QMat S(l, l);
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) S(i, j) = M(J[i], j);
    return qmat_det(std::move(S));
}

/// Contraction matrix of u -> u wedge p for an integer exterior l-vector p:
/// rows indexed by combinations(d, l+1), columns by ambient coordinates.
ZMat contraction_matrix(int d, int l, const ZVec& p) {
    const auto subs = combinations(d, l);
    std::map<std::vector<int>, int> index;
    for (size_t i = 0; i < subs.size(); ++i) index[subs[i]] = static_cast<int>(i);
    const auto rows = combinations(d, l + 1);
    ZMat M(static_cast<int>(rows.size()), d);
    for (size_t rI = 0; rI < rows.size(); ++rI) {
        const auto& K = rows[rI];
        for (size_t pos = 0; pos < K.size(); ++pos) {
            std::vector<int> rest;
            for (size_t q = 0; q < K.size(); ++q)
                if (q != pos) rest.push_back(K[q]);
            const Int coef = p[index.at(rest)];
            M(static_cast<int>(rI), K[pos]) = (pos % 2 == 0) ? coef : -coef;
        }
    }
    return M;
}

/// Subspace cut out by a decomposable primitive exterior vector.
RationalSubspace subspace_from_wedge(int d, int l, const ZVec& p) {
    if (l == d) return RationalSubspace(d, ZMat::identity(d));
    const auto basis = qmat_nullspace(qmat_from_z(contraction_matrix(d, l, p)));
    QMat K(d, static_cast<int>(basis.size()));
    for (size_t j = 0; j < basis.size(); ++j) K.set_col(static_cast<int>(j), basis[j]);
    return RationalSubspace(d, zmat_from_q_cols(K));
}

struct Candidate {
    ZVec wedge;
    std::map<Rat, Rat> form;
};

/// Shared search: all decomposable exterior vectors within the Hadamard
/// radius, their norm forms attached.  Exact inputs use the exact radius.
std::vector<Candidate> decomposable_candidates(const QMat& B, const QVec& alpha, const Real& t,
                                               int l, const MinimaResult& minima, long node_cap) {
    const int d = B.cols;
    const WeightedLattice ext = exterior_lattice(B, alpha, t, l);
    std::vector<ZVec> cands;
    if (t == 0) {
        Rat radius(1);
        for (int i = 0; i < l; ++i) radius *= minima.lambda_sq_exact[i];
        cands = enumerate_short_vectors(ext, radius, node_cap);
    } else {
        Real up(1);
        for (int i = 0; i < l; ++i) up *= minima.lambda[i] * (Real(1) + minima.rel_error);
        cands = enumerate_short_vectors(ext, up * up, node_cap);
    }
    std::vector<Candidate> out;
    for (auto& k : cands) {
        if (!plucker_relations_check(d, l, k)) continue;
        auto form = norm_form(ext, k);
        out.push_back({std::move(k), std::move(form)});
    }
    return out;
}

/// Certified "strictly smaller" scan order: compare norms, ties (including
/// undecidable near-ties inside the envelope) broken lexicographically.
bool candidate_before(const Candidate& a, const Candidate& b, const Real& t) {
    int cmp;
    try {
        cmp = compare_norm_forms(a.form, b.form, t);
    } catch (const PrecisionError&) {
        cmp = 0;
    }
    if (cmp != 0) return cmp < 0;
    return std::lexicographical_compare(a.wedge.begin(), a.wedge.end(), b.wedge.begin(),
                                        b.wedge.end());
}

AlphaResult alpha_impl(const QMat& B, const QVec& alpha, const Real& t, int l, long node_cap) {
    const int d = B.cols;
    if (l < 1 || l > d) throw std::invalid_argument("alpha_min_covol: l out of range");
    AlphaResult res;
    if (l == d) {
        // unimodular lattice, trace-free flow: the full wedge has norm 1
        res.value = Real(1);
        res.value_sq_exact = Rat(1);
        res.witness = RationalSubspace(d, ZMat::identity(d));
        return res;
    }
    const MinimaResult minima = weighted_minima(WeightedLattice{B, alpha, t});
    const auto cands = decomposable_candidates(B, alpha, t, l, minima, node_cap);
    if (cands.empty())
        throw PrecisionError("alpha_min_covol: no decomposable vector inside the certified radius");
    const Candidate* best = &cands[0];
    for (const auto& c : cands)
        if (candidate_before(c, *best, t)) best = &c;
    if (t == 0) {
        Rat s(0);
        for (const auto& [g, coef] : best->form) s += coef;
        res.value_sq_exact = s;
        res.value = real_sqrt(to_real(s));
    } else {
        res.value = real_sqrt(eval_norm_form(best->form, t));
    }
    res.witness = subspace_from_wedge(d, l, best->wedge);
    return res;
}

}  // namespace

RationalSubspace::RationalSubspace(int ambient, ZMat generators) : d(ambient) {
    if (generators.rows != ambient || ambient < 1)
        throw std::invalid_argument("subspace: generator shape mismatch");
    coeffs = hnf_cols(saturate_span(generators));
    l = coeffs.cols;
}

RationalSubspace RationalSubspace::coordinate(int ambient, const std::vector<int>& idx) {
    ZMat G(ambient, static_cast<int>(idx.size()));
    for (size_t j = 0; j < idx.size(); ++j) {
        if (idx[j] < 0 || idx[j] >= ambient) throw std::invalid_argument("coordinate out of range");
        G(idx[j], static_cast<int>(j)) = 1;
    }
    return RationalSubspace(ambient, std::move(G));
}

bool RationalSubspace::operator<(const RationalSubspace& o) const {
    if (d != o.d) return d < o.d;
    if (l != o.l) return l < o.l;
    return std::lexicographical_compare(coeffs.a.begin(), coeffs.a.end(), o.coeffs.a.begin(),
                                        o.coeffs.a.end());
}

Rat covol_sq_exact(const Lattice& x, const RationalSubspace& V) {
    if (V.d != x.d) throw std::invalid_argument("covol: ambient dimension mismatch");
    if (V.l == 0) return Rat(1);
    const QMat M = mat_mul(x.basis, qmat_from_z(V.coeffs));
    QMat gram(V.l, V.l);
    for (int i = 0; i < V.l; ++i)
        for (int j = 0; j < V.l; ++j) {
            Rat s(0);
            for (int r = 0; r < V.d; ++r) s += M(r, i) * M(r, j);
            gram(i, j) = s;
        }
    return qmat_det(std::move(gram));
}

Real covol(const LatticeSnapshot& x, const RationalSubspace& V) {
    if (V.d != x.d()) throw std::invalid_argument("covol: ambient dimension mismatch");
    if (V.l == 0) return Real(1);
    const QMat M = mat_mul(x.base.basis, qmat_from_z(V.coeffs));
    std::map<Rat, Rat> form;
    for (const auto& J : combinations(V.d, V.l)) {
        const Rat mj = minor_det(M, J);
        if (mj == 0) continue;
        Rat beta(0);
        for (int i : J) beta += x.alpha[i];
        form[beta] += mj * mj;
    }
    return real_sqrt(eval_norm_form(form, x.t));
}

RationalSubspace subspace_sum(const RationalSubspace& V, const RationalSubspace& W) {
    if (V.d != W.d) throw std::invalid_argument("subspace sum: ambient mismatch");
    return RationalSubspace(V.d, concat_cols(V.coeffs, W.coeffs));
}

RationalSubspace subspace_intersection(const RationalSubspace& V, const RationalSubspace& W) {
    if (V.d != W.d) throw std::invalid_argument("subspace intersection: ambient mismatch");
    ZMat neg = W.coeffs;
    for (Int& x : neg.a) x = -x;
    const ZMat K = kernel_z(concat_cols(V.coeffs, neg));
    ZMat G(V.d, K.cols);
    for (int c = 0; c < K.cols; ++c)
        for (int i = 0; i < V.d; ++i) {
            Int s(0);
            for (int j = 0; j < V.l; ++j) s += V.coeffs(i, j) * K(j, c);
            G(i, c) = s;
        }
    return RationalSubspace(V.d, std::move(G));
}

RationalSubspace ambient_subspace(const Lattice& x, const RationalSubspace& V) {
    if (x.d != V.d) throw std::invalid_argument("ambient_subspace: ambient mismatch");
    if (V.l == 0) return V;
    const ZMat G = zmat_from_q_cols(mat_mul(x.basis, qmat_from_z(V.coeffs)));
    return RationalSubspace(x.d, G);
}

ZVec plucker(const RationalSubspace& V) {
    const QMat M = qmat_from_z(V.coeffs);
    ZVec p;
    for (const auto& J : combinations(V.d, V.l)) {
        const Rat mj = minor_det(M, J);
        p.push_back(mj.get_num());  // generators are integral, so dets are too
    }
    return zvec_primitive(std::move(p));
}

bool plucker_relations_check(int d, int l, const ZVec& p) {
    if (l < 0 || l > d) return false;
    if (static_cast<int>(p.size()) != static_cast<int>(combinations(d, l).size())) return false;
    bool nonzero = false;
    for (const Int& x : p) nonzero = nonzero || x != 0;
    if (!nonzero) return false;
    if (l == 0 || l == d) return true;
    return qmat_rank(qmat_from_z(contraction_matrix(d, l, p))) == d - l;
}

WeightedLattice exterior_lattice(const QMat& basis, const QVec& alpha, const Real& t, int l) {
    const int d = basis.cols;
    if (l < 1 || l > d) throw std::invalid_argument("exterior_lattice: degree out of range");
    const auto subs = combinations(d, l);
    const int n = static_cast<int>(subs.size());
    WeightedLattice ext;
    ext.basis = QMat(n, n);
    ext.weights.assign(n, Rat(0));
    ext.t = t;
    QMat cols(d, l);
    for (int cI = 0; cI < n; ++cI) {
        for (int j = 0; j < l; ++j)
            for (int i = 0; i < d; ++i) cols(i, j) = basis(i, subs[cI][j]);
        for (int rJ = 0; rJ < n; ++rJ) ext.basis(rJ, cI) = minor_det(cols, subs[rJ]);
    }
    for (int rJ = 0; rJ < n; ++rJ)
        for (int i : subs[rJ]) ext.weights[rJ] += alpha[i];
    return ext;
}

AlphaResult alpha_min_covol(const LatticeSnapshot& x, int l, long node_cap) {
    return alpha_impl(x.base.basis, x.alpha, x.t, l, node_cap);
}

AlphaResult alpha_min_covol(const Lattice& x, int l, long node_cap) {
    return alpha_impl(x.basis, QVec(x.d, Rat(0)), Real(0), l, node_cap);
}

UniqueSubspace unique_small_subspace(const LatticeSnapshot& x, int l, const ToleranceConfig& cfg,
                                     long node_cap) {
    const int d = x.d();
    if (l < 1 || l >= d) throw std::invalid_argument("unique_small_subspace: l out of range");
    const MinimaResult minima = successive_minima(x);
    const auto jumps = eta_set(minima, cfg.eta0);
    if (std::find(jumps.begin(), jumps.end(), l) == jumps.end())
        throw std::invalid_argument("unique_small_subspace: eta_l(x) >= eta0");

    const auto cands = decomposable_candidates(x.base.basis, x.alpha, x.t, l, minima, node_cap);
    if (cands.empty())
        throw PrecisionError("unique_small_subspace: no decomposable vector inside the radius");
    const Candidate* best = &cands[0];
    for (const auto& c : cands)
        if (candidate_before(c, *best, x.t)) best = &c;

    UniqueSubspace out;
    out.V = subspace_from_wedge(d, l, best->wedge);
    out.gap_verified = true;
    const Candidate* second = nullptr;
    for (const auto& c : cands) {
        if (&c == best) continue;
        if (subspace_from_wedge(d, l, c.wedge) == out.V) continue;
        if (second == nullptr || candidate_before(c, *second, x.t)) second = &c;
    }
    if (second != nullptr) {
        try {
            out.gap_verified = compare_norm_forms(second->form, best->form, x.t) > 0;
        } catch (const PrecisionError&) {
            out.gap_verified = false;
        }
    }
    return out;
}

}  // namespace cusplab
