#pragma once

#include <vector>

#include "cusplab/rational.hpp"
#include "cusplab/real.hpp"

namespace cusplab {

template <typename T>
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<T> a;  // row-major

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    T& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    std::vector<T> col(int j) const {
        std::vector<T> v(rows);
        for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
        return v;
    }
    void set_col(int j, const std::vector<T>& v) {
        for (int i = 0; i < rows; ++i) (*this)(i, j) = v[i];
    }

    Mat transposed() const {
        Mat t(cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool operator==(const Mat& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }
};

using QMat = Mat<Rat>;
using ZMat = Mat<Int>;
using RMat = Mat<Real>;
using QVec = std::vector<Rat>;
using ZVec = std::vector<Int>;
using RVec = std::vector<Real>;

template <typename T>
Mat<T> mat_mul(const Mat<T>& A, const Mat<T>& B) {
    Mat<T> C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const T& aik = A(i, k);
            if (aik == T(0)) continue;
            for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
        }
    return C;
}

template <typename T>
std::vector<T> mat_vec(const Mat<T>& A, const std::vector<T>& x) {
    std::vector<T> y(A.rows, T(0));
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) y[i] += A(i, j) * x[j];
    return y;
}

QMat qmat_from_z(const ZMat& m);
RMat rmat_from_q(const QMat& m);

Rat qmat_det(QMat m);
int qmat_rank(QMat m);
/// Solve A x = b; empty result if singular/inconsistent.
std::optional<QVec> qmat_solve(QMat A, QVec b);
QMat qmat_inverse(const QMat& A);  // throws std::domain_error if singular
/// Basis of the right kernel {x : A x = 0}, deterministic order.
std::vector<QVec> qmat_nullspace(QMat A);

/// Incremental rational span for exact independence checks.
class QSpan {
  public:
    explicit QSpan(int ambient) : n_(ambient) {}
    int dim() const { return static_cast<int>(rows_.size()); }
    bool contains(QVec v) const;
    /// Adds v to the span; returns true when the dimension grew.
    bool add(QVec v);

  private:
    int n_;
    std::vector<QVec> rows_;   // echelonized
    std::vector<int> pivots_;  // pivot column of each row
    friend void qspan_reduce(const QSpan&, QVec&);
};

/// Column-style echelon form over Z: A * U = H with U unimodular and the
/// zero columns of H trailing. Used for integer kernels.
void echelon_cols_z(const ZMat& A, ZMat& H, ZMat& U);

/// Basis (as columns) of {x in Z^n : A x = 0}; the result is saturated.
ZMat kernel_z(const ZMat& A);

/// Saturation of the column span: basis of span_Q(cols G) ∩ Z^d.
ZMat saturate_span(const ZMat& G);

/// Scale rational columns to primitive integer columns (same span).
ZMat zmat_from_q_cols(const QMat& m);

ZVec zvec_primitive(ZVec v);  // divide by content, first nonzero > 0

Real rvec_dot(const RVec& x, const RVec& y);
Real rvec_norm2(const RVec& x);
Real rvec_norm(const RVec& x);

/// Orthonormalize columns (modified Gram–Schmidt with reorthogonalization).
/// Columns that vanish numerically are dropped.
RMat orthonormal_cols(const RMat& M);

/// Eigenvalues (ascending) and eigenvectors of a symmetric matrix, via
/// cyclic Jacobi at working precision.
void jacobi_symmetric(RMat S, RVec& eigenvalues, RMat& eigenvectors);

/// Singular values of M (ascending).
RVec singular_values(const RMat& M);

/// All l-element subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int l);

}  // namespace cusplab
