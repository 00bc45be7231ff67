#include "cusplab/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace cusplab {

QMat qmat_from_z(const ZMat& m) {
    QMat q(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) q.a[i] = Rat(m.a[i]);
    return q;
}

RMat rmat_from_q(const QMat& m) {
    RMat r(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = to_real(m.a[i]);
    return r;
}

Rat qmat_det(QMat m) {
    if (m.rows != m.cols) throw std::domain_error("det of non-square matrix");
    int n = m.rows;
    Rat det(1);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (m(r, c) != 0) { piv = r; break; }
        if (piv < 0) return Rat(0);
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        Rat inv = Rat(1) / m(c, c);
        for (int r = c + 1; r < n; ++r) {
            if (m(r, c) == 0) continue;
            Rat f = m(r, c) * inv;
            for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return det;
}

int qmat_rank(QMat m) {
    int rank = 0;
    for (int c = 0; c < m.cols && rank < m.rows; ++c) {
        int piv = -1;
        for (int r = rank; r < m.rows; ++r)
            if (m(r, c) != 0) { piv = r; break; }
        if (piv < 0) continue;
        for (int j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(rank, j));
        Rat inv = Rat(1) / m(rank, c);
        for (int r = rank + 1; r < m.rows; ++r) {
            if (m(r, c) == 0) continue;
            Rat f = m(r, c) * inv;
            for (int j = c; j < m.cols; ++j) m(r, j) -= f * m(rank, j);
        }
        ++rank;
    }
    return rank;
}

std::optional<QVec> qmat_solve(QMat A, QVec b) {
    int n = A.rows, m = A.cols;
    std::vector<int> piv_col;
    int rank = 0;
    for (int c = 0; c < m && rank < n; ++c) {
        int piv = -1;
        for (int r = rank; r < n; ++r)
            if (A(r, c) != 0) { piv = r; break; }
        if (piv < 0) continue;
        for (int j = 0; j < m; ++j) std::swap(A(piv, j), A(rank, j));
        std::swap(b[piv], b[rank]);
        Rat inv = Rat(1) / A(rank, c);
        for (int j = c; j < m; ++j) A(rank, j) *= inv;
        b[rank] *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == rank || A(r, c) == 0) continue;
            Rat f = A(r, c);
            for (int j = c; j < m; ++j) A(r, j) -= f * A(rank, j);
            b[r] -= f * b[rank];
        }
        piv_col.push_back(c);
        ++rank;
    }
    for (int r = rank; r < n; ++r)
        if (b[r] != 0) return std::nullopt;
    QVec x(m, Rat(0));
    for (int r = 0; r < rank; ++r) x[piv_col[r]] = b[r];
    return x;
}

QMat qmat_inverse(const QMat& A) {
    int n = A.rows;
    QMat work = A, inv = QMat::identity(n);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (work(r, c) != 0) { piv = r; break; }
        if (piv < 0) throw std::domain_error("singular matrix");
        for (int j = 0; j < n; ++j) {
            std::swap(work(piv, j), work(c, j));
            std::swap(inv(piv, j), inv(c, j));
        }
        Rat f = Rat(1) / work(c, c);
        for (int j = 0; j < n; ++j) {
            work(c, j) *= f;
            inv(c, j) *= f;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || work(r, c) == 0) continue;
            Rat g = work(r, c);
            for (int j = 0; j < n; ++j) {
                work(r, j) -= g * work(c, j);
                inv(r, j) -= g * inv(c, j);
            }
        }
    }
    return inv;
}

std::vector<QVec> qmat_nullspace(QMat A) {
    int n = A.rows, m = A.cols;
    std::vector<int> piv_col;
    int rank = 0;
    for (int c = 0; c < m && rank < n; ++c) {
        int piv = -1;
        for (int r = rank; r < n; ++r)
            if (A(r, c) != 0) { piv = r; break; }
        if (piv < 0) continue;
        for (int j = 0; j < m; ++j) std::swap(A(piv, j), A(rank, j));
        Rat inv = Rat(1) / A(rank, c);
        for (int j = c; j < m; ++j) A(rank, j) *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == rank || A(r, c) == 0) continue;
            Rat f = A(r, c);
            for (int j = c; j < m; ++j) A(r, j) -= f * A(rank, j);
        }
        piv_col.push_back(c);
        ++rank;
    }
    std::vector<bool> is_pivot(m, false);
    for (int c : piv_col) is_pivot[c] = true;
    std::vector<QVec> basis;
    for (int c = 0; c < m; ++c) {
        if (is_pivot[c]) continue;
        QVec v(m, Rat(0));
        v[c] = Rat(1);
        for (int r = 0; r < rank; ++r) v[piv_col[r]] = -A(r, c);
        basis.push_back(std::move(v));
    }
    return basis;
}

void qspan_reduce(const QSpan& s, QVec& v) {
    for (size_t r = 0; r < s.rows_.size(); ++r) {
        const Rat& c = v[s.pivots_[r]];
        if (c == 0) continue;
        Rat f = c;  // rows are normalized to pivot 1
        for (int j = 0; j < s.n_; ++j) v[j] -= f * s.rows_[r][j];
    }
}

bool QSpan::contains(QVec v) const {
    qspan_reduce(*this, v);
    for (const auto& q : v)
        if (q != 0) return false;
    return true;
}

bool QSpan::add(QVec v) {
    qspan_reduce(*this, v);
    int piv = -1;
    for (int j = 0; j < n_; ++j)
        if (v[j] != 0) { piv = j; break; }
    if (piv < 0) return false;
    Rat inv = Rat(1) / v[piv];
    for (int j = 0; j < n_; ++j) v[j] *= inv;
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
}

void echelon_cols_z(const ZMat& A, ZMat& H, ZMat& U) {
    H = A;
    int n = A.cols;
    U = ZMat::identity(n);
    int c = 0;
    for (int i = 0; i < A.rows && c < n; ++i) {
        // Reduce row i across columns c..n-1 to a single nonzero entry at c.
        while (true) {
            int best = -1;
            for (int j = c; j < n; ++j) {
                if (H(i, j) == 0) continue;
                if (best < 0 || cmp(abs(H(i, j)), abs(H(i, best))) < 0) best = j;
            }
            if (best < 0) break;  // row is zero on c..n-1
            if (best != c) {
                for (int r = 0; r < H.rows; ++r) std::swap(H(r, best), H(r, c));
                for (int r = 0; r < n; ++r) std::swap(U(r, best), U(r, c));
            }
            bool clean = true;
            for (int j = c + 1; j < n; ++j) {
                if (H(i, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), H(i, j).get_mpz_t(), H(i, c).get_mpz_t());
                if (q != 0) {
                    for (int r = 0; r < H.rows; ++r) H(r, j) -= q * H(r, c);
                    for (int r = 0; r < n; ++r) U(r, j) -= q * U(r, c);
                }
                if (H(i, j) != 0) clean = false;
            }
            if (clean) {
                if (H(i, c) < 0) {
                    for (int r = 0; r < H.rows; ++r) H(r, c) = -H(r, c);
                    for (int r = 0; r < n; ++r) U(r, c) = -U(r, c);
                }
                ++c;
                break;
            }
        }
    }
}

ZMat kernel_z(const ZMat& A) {
    int n = A.cols;
    if (A.rows == 0) return ZMat::identity(n);
    ZMat H, U;
    echelon_cols_z(A, H, U);
    std::vector<int> zero_cols;
    for (int j = 0; j < n; ++j) {
        bool z = true;
        for (int i = 0; i < H.rows; ++i)
            if (H(i, j) != 0) { z = false; break; }
        if (z) zero_cols.push_back(j);
    }
    ZMat K(n, static_cast<int>(zero_cols.size()));
    for (size_t k = 0; k < zero_cols.size(); ++k)
        for (int i = 0; i < n; ++i) K(i, static_cast<int>(k)) = U(i, zero_cols[k]);
    return K;
}

ZMat saturate_span(const ZMat& G) {
    ZMat K = kernel_z(G.transposed());
    return kernel_z(K.transposed());
}

ZMat zmat_from_q_cols(const QMat& m) {
    ZMat z(m.rows, m.cols);
    for (int j = 0; j < m.cols; ++j) {
        Int l(1);
        for (int i = 0; i < m.rows; ++i) {
            Rat q = m(i, j);
            q.canonicalize();
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
        }
        ZVec col(m.rows);
        for (int i = 0; i < m.rows; ++i) {
            Rat q = m(i, j) * Rat(l);
            q.canonicalize();
            col[i] = q.get_num();
        }
        z.set_col(j, zvec_primitive(col));
    }
    return z;
}

ZVec zvec_primitive(ZVec v) {
    Int g(0);
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0) return v;
    for (auto& x : v) x /= g;
    for (const auto& x : v) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : v) y = -y;
        break;
    }
    return v;
}

Real rvec_dot(const RVec& x, const RVec& y) {
    Real s(0);
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

Real rvec_norm2(const RVec& x) { return rvec_dot(x, x); }
Real rvec_norm(const RVec& x) { return real_sqrt(rvec_norm2(x)); }

RMat orthonormal_cols(const RMat& M) {
    Real eps = pow(Real(2), -static_cast<int>(precision_bits()) + 8);
    std::vector<RVec> q;
    for (int j = 0; j < M.cols; ++j) {
        RVec v = M.col(j);
        Real orig = rvec_norm(v);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : q) {
                Real c = rvec_dot(v, u);
                for (int i = 0; i < M.rows; ++i) v[i] -= c * u[i];
            }
        Real n = rvec_norm(v);
        if (n <= eps * (orig + Real(1))) continue;  // dependent column
        for (auto& x : v) x /= n;
        q.push_back(std::move(v));
    }
    RMat Q(M.rows, static_cast<int>(q.size()));
    for (size_t j = 0; j < q.size(); ++j) Q.set_col(static_cast<int>(j), q[j]);
    return Q;
}

void jacobi_symmetric(RMat S, RVec& eigenvalues, RMat& eigenvectors) {
    int n = S.rows;
    eigenvectors = RMat::identity(n);
    if (n == 0) {
        eigenvalues.clear();
        return;
    }
    Real eps = pow(Real(2), -static_cast<int>(precision_bits()) + 6);
    for (int sweep = 0; sweep < 200; ++sweep) {
        Real off(0), diag(0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                (i == j ? diag : off) += real_abs(S(i, j));
        if (off <= eps * (diag + Real(1))) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (real_abs(S(p, q)) <= eps * (real_abs(S(p, p)) + real_abs(S(q, q)) + Real(1)) / Real(n))
                    continue;
                Real theta = (S(q, q) - S(p, p)) / (Real(2) * S(p, q));
                Real t;
                if (theta >= 0)
                    t = Real(1) / (theta + real_sqrt(Real(1) + theta * theta));
                else
                    t = Real(-1) / (-theta + real_sqrt(Real(1) + theta * theta));
                Real c = Real(1) / real_sqrt(Real(1) + t * t);
                Real s = t * c;
                for (int k = 0; k < n; ++k) {
                    Real skp = S(k, p), skq = S(k, q);
                    S(k, p) = c * skp - s * skq;
                    S(k, q) = s * skp + c * skq;
                }
                for (int k = 0; k < n; ++k) {
                    Real spk = S(p, k), sqk = S(q, k);
                    S(p, k) = c * spk - s * sqk;
                    S(q, k) = s * spk + c * sqk;
                }
                for (int k = 0; k < n; ++k) {
                    Real vkp = eigenvectors(k, p), vkq = eigenvectors(k, q);
                    eigenvectors(k, p) = c * vkp - s * vkq;
                    eigenvectors(k, q) = s * vkp + c * vkq;
                }
            }
    }
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) { return S(i, i) < S(j, j); });
    eigenvalues.resize(n);
    RMat V(n, n);
    for (int j = 0; j < n; ++j) {
        eigenvalues[j] = S(order[j], order[j]);
        for (int i = 0; i < n; ++i) V(i, j) = eigenvectors(i, order[j]);
    }
    eigenvectors = V;
}

RVec singular_values(const RMat& M) {
    RMat Mt = M.transposed();
    RMat S = mat_mul(Mt, M);
    RVec ev;
    RMat V;
    jacobi_symmetric(S, ev, V);
    RVec sv(ev.size());
    for (size_t i = 0; i < ev.size(); ++i) sv[i] = ev[i] > 0 ? real_sqrt(ev[i]) : Real(0);
    return sv;
}

std::vector<std::vector<int>> combinations(int n, int l) {
    std::vector<std::vector<int>> out;
    if (l < 0 || l > n) return out;
    std::vector<int> idx(l);
    for (int i = 0; i < l; ++i) idx[i] = i;
    while (true) {
        out.push_back(idx);
        int i = l - 1;
        while (i >= 0 && idx[i] == n - l + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < l; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

}  // namespace cusplab
