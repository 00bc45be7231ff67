#include "cusplab/lattice.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "cusplab/real.hpp"

namespace cusplab {

namespace {

Real pow2(int e) { return boost::multiprecision::ldexp(Real(1), e); }

/// Exact dyadic rational equal to a Real (every finite Real is dyadic).
Rat rat_from_real_exact(const Real& x) {
    if (x == 0) return Rat(0);
    Int z;
    const mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), x.backend().data());
    if (e >= 0) {
        mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
        return Rat(z);
    }
    Int den(1);
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    Rat r(z, den);
    r.canonicalize();
    return r;
}

void sign_canon(ZVec& v) {
    for (const Int& x : v) {
        if (x != 0) {
            if (x < 0)
                for (Int& y : v) y = -y;
            return;
        }
    }
}

bool lex_less(const ZVec& a, const ZVec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool is_zero_vec(const ZVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

/// Gram–Schmidt data (MGS form) for the columns of F: mu(i,j) with i > j and
/// squared orthogonal norms bs[j].  Throws when a column collapses numerically.
void gs_from_scratch(const RMat& F, RMat& mu, RVec& bs) {
    const int rows = F.rows, n = F.cols;
    mu = RMat(n, n);
    bs.assign(n, Real(0));
    RMat bstar(rows, n);
    for (int j = 0; j < n; ++j) {
        RVec v = F.col(j);
        for (int l = 0; l < j; ++l) {
            Real dot(0);
            for (int i = 0; i < rows; ++i) dot += v[i] * bstar(i, l);
            const Real m = dot / bs[l];
            mu(j, l) = m;
            for (int i = 0; i < rows; ++i) v[i] -= m * bstar(i, l);
        }
        bs[j] = rvec_norm2(v);
        if (bs[j] == 0) throw PrecisionError("Gram-Schmidt: numerically singular basis");
        for (int i = 0; i < rows; ++i) bstar(i, j) = v[i];
    }
}

/// Floating LLL on the columns of F, tracking the exact unimodular transform
/// in U (columns of F stay equal to scaled-basis * U throughout).  Reduction
/// quality only affects enumeration cost, never correctness, so the iteration
/// cap simply stops early.
void lll_reduce(RMat& F, ZMat& U) {
    const int n = F.cols;
    if (n <= 1) return;
    const Real delta = Real(3) / 4;
    RMat mu;
    RVec bs;
    gs_from_scratch(F, mu, bs);
    long iters = 0;
    const long cap = 400000L * n;
    int k = 1;
    while (k < n) {
        if (++iters > cap) break;
        if ((iters & 4095) == 0) gs_from_scratch(F, mu, bs);  // drift refresh
        for (int j = k - 1; j >= 0; --j) {
            const Int q = round_to_int(mu(k, j));
            if (q == 0) continue;
            const Real qr = to_real(q);
            for (int i = 0; i < F.rows; ++i) F(i, k) -= qr * F(i, j);
            for (int i = 0; i < U.rows; ++i) U(i, k) -= q * U(i, j);
            for (int l = 0; l < j; ++l) mu(k, l) -= qr * mu(j, l);
            mu(k, j) -= qr;
        }
        if (bs[k] < (delta - mu(k, k - 1) * mu(k, k - 1)) * bs[k - 1]) {
            for (int i = 0; i < F.rows; ++i) std::swap(F(i, k - 1), F(i, k));
            for (int i = 0; i < U.rows; ++i) std::swap(U(i, k - 1), U(i, k));
            const Real m = mu(k, k - 1);
            const Real big = bs[k] + m * m * bs[k - 1];
            if (big == 0) throw PrecisionError("LLL: degenerate Gram data");
            const Real mkk = m * bs[k - 1] / big;
            bs[k] = bs[k - 1] * bs[k] / big;
            bs[k - 1] = big;
            mu(k, k - 1) = mkk;
            for (int l = 0; l < k - 1; ++l) std::swap(mu(k - 1, l), mu(k, l));
            for (int i = k + 1; i < n; ++i) {
                const Real tmp = mu(i, k);
                mu(i, k) = mu(i, k - 1) - m * tmp;
                mu(i, k - 1) = tmp + mkk * mu(i, k);
            }
            if (k > 1) --k;
        } else {
            ++k;
        }
    }
}

/// Upper-triangular R (positive diagonal) from a doubly-reorthogonalized MGS
/// QR of F.  Enumeration runs entirely in this R-metric.
RMat mgs_r(const RMat& F) {
    const int rows = F.rows, n = F.cols;
    RMat Q(rows, n), R(n, n);
    for (int j = 0; j < n; ++j) {
        RVec v = F.col(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < j; ++i) {
                Real dot(0);
                for (int r = 0; r < rows; ++r) dot += Q(r, i) * v[r];
                R(i, j) += dot;
                for (int r = 0; r < rows; ++r) v[r] -= dot * Q(r, i);
            }
        }
        const Real nrm = rvec_norm(v);
        if (nrm == 0) throw PrecisionError("QR: numerically singular basis");
        R(j, j) = nrm;
        for (int r = 0; r < rows; ++r) Q(r, j) = v[r] / nrm;
    }
    return R;
}

struct ReducedBasis {
    RMat F;  // scaled, reduced columns
    ZMat U;  // exact transform: F = scale * (B * U)
    RMat R;  // QR factor of F
};

ReducedBasis reduce_weighted(const WeightedLattice& WL, const ZMat* hint) {
    const int n = WL.n();
    if (WL.basis.rows != n || n < 1) throw std::invalid_argument("weighted lattice: basis must be square");
    if (static_cast<int>(WL.weights.size()) != n)
        throw std::invalid_argument("weighted lattice: weights size mismatch");
    ReducedBasis rb;
    rb.U = ZMat::identity(n);
    if (hint != nullptr) {
        if (hint->rows != n || hint->cols != n)
            throw std::invalid_argument("basis hint has wrong shape");
        const Rat det = qmat_det(qmat_from_z(*hint));
        if (det != 1 && det != -1) throw std::invalid_argument("basis hint is not unimodular");
        rb.U = *hint;
    }
    const Real tt = at_working_precision(WL.t);
    RVec scale(n);
    for (int i = 0; i < n; ++i) scale[i] = real_exp(tt * to_real(WL.weights[i]));
    const QMat BU = mat_mul(WL.basis, qmat_from_z(rb.U));
    rb.F = RMat(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rb.F(i, j) = scale[i] * to_real(BU(i, j));
    lll_reduce(rb.F, rb.U);
    rb.R = mgs_r(rb.F);
    return rb;
}

/// Schnorr–Euchner depth-first search over coefficient vectors of the reduced
/// basis.  Pruning is strict in the R-metric against a budget the visitor may
/// shrink; optional subtree skipping removes regions that lie in a known span.
struct Enumerator {
    explicit Enumerator(const RMat& r) : R(r) {}

    const RMat& R;
    Real radius_sq;       // R-metric budget, shrinkable from visit()
    long node_cap = 1000;
    long nodes = 0;
    const std::vector<char>* skip_prefix = nullptr;  // [j]: span(F_0..F_j) inside S
    std::function<bool(const ZVec&, int)> suffix_in_span;  // fixed part at depth j in S?
    std::function<void(const ZVec&, const Real&)> visit;   // reduced coeffs + R-cost

    int n = 0;
    ZVec k;

    void run() {
        n = R.cols;
        k.assign(n, Int(0));
        descend(n - 1, Real(0));
    }

    void descend(int j, const Real& partial) {
        if (j < 0) {
            visit(k, partial);
            return;
        }
        if (skip_prefix != nullptr && (*skip_prefix)[j] && suffix_in_span(k, j)) return;
        Real shift(0);
        for (int m = j + 1; m < n; ++m)
            if (k[m] != 0) shift += R(j, m) * to_real(k[m]);
        const Real center = -shift / R(j, j);
        const Int k0 = round_to_int(center);
        Int up = k0, down = k0 - 1;
        bool up_alive = true, down_alive = true, turn_up = true;
        while (up_alive || down_alive) {
            if (turn_up && !up_alive) turn_up = false;
            if (!turn_up && !down_alive) turn_up = true;
            const Int kj = turn_up ? up : down;
            if (++nodes > node_cap) {
                std::ostringstream os;
                os << "enumeration exceeded the node cap (" << node_cap << ")";
                throw CapacityError(os.str());
            }
            const Real y = R(j, j) * (to_real(kj) - center);
            // Prune on y^2 against the remaining budget rather than on the
            // accumulated cost: the small-magnitude comparison is immune to
            // the rounding absorption that partial + y^2 suffers when the
            // scales differ by more than the working precision.
            if (y * y > radius_sq - partial) {
                (turn_up ? up_alive : down_alive) = false;
            } else {
                k[j] = kj;
                descend(j - 1, partial + y * y);
                k[j] = 0;
                if (turn_up)
                    ++up;
                else
                    --down;
            }
            turn_up = !turn_up;
        }
    }
};

ZVec apply_transform(const ZMat& U, const ZVec& kred) {
    ZVec c(U.rows, Int(0));
    for (int m = 0; m < U.cols; ++m)
        if (kred[m] != 0)
            for (int i = 0; i < U.rows; ++i) c[i] += U(i, m) * kred[m];
    return c;
}

QVec to_qvec(const ZVec& v) {
    QVec q(v.size());
    for (size_t i = 0; i < v.size(); ++i) q[i] = Rat(v[i]);
    return q;
}

}  // namespace

Lattice::Lattice(QMat b) : d(b.cols), basis(std::move(b)) {
    if (basis.rows != basis.cols || basis.cols < 1)
        throw std::invalid_argument("lattice basis must be a square matrix");
    const Rat det = qmat_det(basis);
    if (det == 1)
        det_sign = 1;
    else if (det == -1)
        det_sign = -1;
    else
        throw std::invalid_argument("lattice basis must have determinant +-1");
}

Lattice Lattice::standard(int dim) { return Lattice(QMat::identity(dim)); }

LatticeSnapshot LatticeSnapshot::make(const Lattice& L, const DiagonalFlow& flow, const Real& time) {
    if (flow.d != L.d) throw std::invalid_argument("snapshot: flow dimension mismatch");
    LatticeSnapshot s;
    s.base = L;
    s.alpha = flow.alpha;
    s.t = at_working_precision(time);
    s.precision = static_cast<int>(precision_bits());
    s.real_basis = RMat(L.d, L.d);
    for (int i = 0; i < L.d; ++i) {
        const Real sc = real_exp(s.t * to_real(flow.alpha[i]));
        for (int j = 0; j < L.d; ++j) s.real_basis(i, j) = sc * to_real(L.basis(i, j));
    }
    return s;
}

LatticeSnapshot LatticeSnapshot::still(const Lattice& L) {
    LatticeSnapshot s;
    s.base = L;
    s.alpha.assign(L.d, Rat(0));
    s.t = at_working_precision(Real(0));
    s.precision = static_cast<int>(precision_bits());
    s.real_basis = rmat_from_q(L.basis);
    return s;
}

std::map<Rat, Rat> norm_form(const WeightedLattice& L, const ZVec& k) {
    const int n = L.n();
    if (static_cast<int>(k.size()) != n) throw std::invalid_argument("norm_form: size mismatch");
    std::map<Rat, Rat> f;
    for (int i = 0; i < n; ++i) {
        Rat x(0);
        for (int j = 0; j < n; ++j)
            if (k[j] != 0) x += L.basis(i, j) * Rat(k[j]);
        if (x != 0) f[L.weights[i]] += x * x;
    }
    return f;
}

Real eval_norm_form(const std::map<Rat, Rat>& f, const Real& t) {
    const Real tt = at_working_precision(t);
    Real s = at_working_precision(Real(0));
    for (const auto& [g, c] : f) s += to_real(c) * real_exp((2 * tt) * to_real(g));
    return s;
}

int compare_norm_forms(const std::map<Rat, Rat>& a, const std::map<Rat, Rat>& b, const Real& t) {
    std::map<Rat, Rat> diff = a;
    for (const auto& [g, c] : b) diff[g] -= c;
    for (auto it = diff.begin(); it != diff.end();)
        it = (it->second == 0) ? diff.erase(it) : std::next(it);
    if (diff.empty()) return 0;
    if (t == 0) {
        Rat s(0);
        for (const auto& [g, c] : diff) s += c;
        return s > 0 ? 1 : (s < 0 ? -1 : 0);
    }
    bool all_pos = true, all_neg = true;
    for (const auto& [g, c] : diff) {
        if (c > 0) all_neg = false;
        if (c < 0) all_pos = false;
    }
    if (all_pos) return 1;
    if (all_neg) return -1;
    const Real va = eval_norm_form(a, t), vb = eval_norm_form(b, t);
    const Real env = (va + vb) * pow2(-static_cast<int>(precision_bits()) + 8);
    if (va > vb + env) return 1;
    if (vb > va + env) return -1;
    throw PrecisionError("norm comparison could not be certified at the working precision");
}

MinimaResult weighted_minima(const WeightedLattice& WL, const MinimaOptions& opt) {
    const int n = WL.n();
    ReducedBasis rb = reduce_weighted(WL, opt.basis_hint);
    const bool exact = (WL.t == 0);
    const int prec = static_cast<int>(precision_bits());

    MinimaResult res;
    res.lambda.assign(n, Real(0));
    res.witnesses = ZMat(n, n);
    res.rel_error = exact ? pow2(-prec + 4) : pow2(-prec + 24);
    if (exact) res.lambda_sq_exact.assign(n, Rat(0));

    QSpan span(n);
    for (int idx = 0; idx < n; ++idx) {
        // Seed the incumbent with the cheapest reduced basis vector outside
        // the span of the minima found so far.
        int seed = -1;
        Real seed_cost(0);
        for (int j = 0; j < n; ++j) {
            if (span.contains(to_qvec(rb.U.col(j)))) continue;
            Real cost(0);
            for (int m = 0; m <= j; ++m) cost += rb.R(m, j) * rb.R(m, j);
            if (seed < 0 || cost < seed_cost) {
                seed = j;
                seed_cost = cost;
            }
        }
        if (seed < 0) throw PrecisionError("minima: reduced basis does not span");  // unreachable
        ZVec inc = rb.U.col(seed);
        sign_canon(inc);
        std::map<Rat, Rat> inc_form = norm_form(WL, inc);

        std::vector<char> skip(n, 0);
        {
            bool all = true;
            for (int j = 0; j < n; ++j) {
                all = all && span.contains(to_qvec(rb.U.col(j)));
                skip[j] = all ? 1 : 0;
            }
        }

        Enumerator e(rb.R);
        e.radius_sq = seed_cost;
        e.node_cap = opt.node_cap;
        if (exact) e.radius_sq *= Real(1) + pow2(-prec / 2);
        e.skip_prefix = &skip;
        e.suffix_in_span = [&](const ZVec& kred, int j) {
            QVec v(n, Rat(0));
            bool nonzero = false;
            for (int m = j + 1; m < n; ++m) {
                if (kred[m] == 0) continue;
                nonzero = true;
                for (int i = 0; i < n; ++i) v[i] += Rat(rb.U(i, m)) * Rat(kred[m]);
            }
            return !nonzero || span.contains(std::move(v));
        };
        e.visit = [&](const ZVec& kred, const Real& cost) {
            ZVec c = apply_transform(rb.U, kred);
            if (is_zero_vec(c)) return;
            sign_canon(c);
            if (span.contains(to_qvec(c))) return;
            auto form = norm_form(WL, c);
            int cmp;
            try {
                cmp = compare_norm_forms(form, inc_form, WL.t);
            } catch (const PrecisionError&) {
                cmp = 0;  // tie inside the reported envelope: either witness is valid
            }
            if (cmp > 0) return;
            if (cmp < 0 || lex_less(c, inc)) {
                inc = std::move(c);
                inc_form = std::move(form);
            }
            if (cost < e.radius_sq) e.radius_sq = cost;
        };
        e.run();

        if (exact) {
            Rat s(0);
            for (const auto& [g, c] : inc_form) s += c;
            res.lambda_sq_exact[idx] = s;
            res.lambda[idx] = real_sqrt(to_real(s));
        } else {
            res.lambda[idx] = real_sqrt(eval_norm_form(inc_form, WL.t));
        }
        res.witnesses.set_col(idx, inc);
        span.add(to_qvec(inc));
    }
    return res;
}

MinimaResult successive_minima(const LatticeSnapshot& x, const MinimaOptions& opt) {
    return weighted_minima(WeightedLattice{x.base.basis, x.alpha, x.t}, opt);
}

MinimaResult successive_minima(const Lattice& x, const MinimaOptions& opt) {
    return weighted_minima(WeightedLattice{x.basis, QVec(x.d, Rat(0)), Real(0)}, opt);
}

Real eta(const MinimaResult& m, int i) {
    const int d = static_cast<int>(m.lambda.size());
    if (i < 1 || i >= d) throw std::invalid_argument("eta index out of range");
    return m.lambda[i - 1] / m.lambda[i];
}

Real eta(const LatticeSnapshot& x, int i) { return eta(successive_minima(x), i); }

std::vector<int> eta_set(const MinimaResult& m, const Real& eps) {
    const int d = static_cast<int>(m.lambda.size());
    std::vector<int> out;
    for (int i = 1; i < d; ++i) {
        const Real a = m.lambda[i - 1];
        const Real b = m.lambda[i] * eps;
        const Real env = (a + b) * (2 * m.rel_error + pow2(-static_cast<int>(precision_bits()) + 6));
        if (b > a + env) {
            out.push_back(i);
        } else if (a > b + env) {
            // certified not below the threshold
        } else if (!m.lambda_sq_exact.empty()) {
            const Rat eps_q = rat_from_real_exact(eps);
            if (m.lambda_sq_exact[i - 1] < eps_q * eps_q * m.lambda_sq_exact[i]) out.push_back(i);
        } else {
            throw PrecisionError("eta_set: threshold tie could not be certified");
        }
    }
    return out;
}

std::vector<int> eta_set(const LatticeSnapshot& x, const Real& eps) {
    return eta_set(successive_minima(x), eps);
}

Rat lattice_norm_sq_exact(const Lattice& L, const ZVec& k) {
    if (static_cast<int>(k.size()) != L.d) throw std::invalid_argument("norm: size mismatch");
    Rat s(0);
    for (int i = 0; i < L.d; ++i) {
        Rat x(0);
        for (int j = 0; j < L.d; ++j)
            if (k[j] != 0) x += L.basis(i, j) * Rat(k[j]);
        s += x * x;
    }
    return s;
}

int compare_evolved_norms(const Lattice& L, const QVec& alpha, const Real& t, const ZVec& k1,
                          const ZVec& k2) {
    const WeightedLattice WL{L.basis, alpha, t};
    return compare_norm_forms(norm_form(WL, k1), norm_form(WL, k2), t);
}

namespace {

std::vector<ZVec> enumerate_impl(const WeightedLattice& L, const Real& search_radius_sq,
                                 const std::optional<Rat>& exact_filter, const Real& value_cut,
                                 long node_cap) {
    if (search_radius_sq <= 0) return {};
    ReducedBasis rb = reduce_weighted(L, nullptr);
    std::set<ZVec> found;
    Enumerator e(rb.R);
    e.radius_sq = search_radius_sq;
    e.node_cap = node_cap;
    e.visit = [&](const ZVec& kred, const Real&) {
        ZVec c = apply_transform(rb.U, kred);
        if (is_zero_vec(c)) return;
        sign_canon(c);
        if (exact_filter) {
            Rat s(0);
            for (const auto& [g, coef] : norm_form(L, c)) s += coef;
            if (s > *exact_filter) return;
        } else {
            const Real v = eval_norm_form(norm_form(L, c), L.t);
            if (v > value_cut) return;
        }
        found.insert(std::move(c));
    };
    e.run();
    return {found.begin(), found.end()};
}

}  // namespace

std::vector<ZVec> enumerate_short_vectors(const WeightedLattice& L, const Real& radius_sq_up,
                                          long node_cap) {
    const Real radius = at_working_precision(radius_sq_up);
    const Real kappa = pow2(-static_cast<int>(precision_bits()) + 24);
    const Real search = radius * (Real(1) + kappa);
    if (L.t == 0)
        return enumerate_impl(L, search, rat_from_real_exact(radius), Real(0), node_cap);
    return enumerate_impl(L, search, std::nullopt, search, node_cap);
}

std::vector<ZVec> enumerate_short_vectors(const WeightedLattice& L, const Rat& radius_sq,
                                          long node_cap) {
    if (L.t != 0)
        throw std::invalid_argument("exact-radius enumeration requires an exact (t = 0) lattice");
    const Real kappa = pow2(-static_cast<int>(precision_bits()) + 24);
    const Real search = to_real(radius_sq) * (Real(1) + kappa);
    return enumerate_impl(L, search, radius_sq, Real(0), node_cap);
}

}  // namespace cusplab
