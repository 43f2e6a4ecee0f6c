#pragma once

#include "tlkit/errors.hpp"
#include "tlkit/laurent.hpp"
#include "tlkit/numberfield.hpp"

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace tlkit {

template <class E>
struct DenseMatrix {
    int rows = 0, cols = 0;
    std::vector<E> a;

    DenseMatrix() = default;
    DenseMatrix(int r, int c, const E& fill)
        : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

    E& at(int i, int j) { return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }
    const E& at(int i, int j) const { return a[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(j)]; }

    friend bool operator==(const DenseMatrix& x, const DenseMatrix& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }
};

namespace fieldops {

template <class E>
bool is_zero(const E& x) { return x.is_zero(); }
inline bool is_zero(const mpq_class& x) { return sgn(x) == 0; }

template <class E>
E inverse(const E& x) { return x.inv(); }
inline mpq_class inverse(const mpq_class& x) {
    if (sgn(x) == 0) throw DomainError("inverse of zero");
    return 1 / x;
}

/// Pivot-selection weight: prefer structurally small entries.
template <class E>
long weight(const E&) { return 1; }
inline long weight(const GenericScalar& x) {
    return static_cast<long>(x.num.c.size() + x.den.c.size());
}
inline long weight(const NFElem& x) {
    long w = 1;
    for (const auto& ci : x.p.c)
        if (sgn(ci) != 0) ++w;
    return w;
}

}  // namespace fieldops

template <class E>
struct Echelon {
    int rank = 0;
    std::vector<int> pivot_cols;   // one per pivot row, increasing
    DenseMatrix<E> mat;            // reduced row echelon form
};

/// Gauss-Jordan over an exact field.
template <class E>
Echelon<E> row_reduce(DenseMatrix<E> M) {
    Echelon<E> ech;
    int row = 0;
    for (int col = 0; col < M.cols && row < M.rows; ++col) {
        int best = -1;
        long best_w = 0;
        for (int i = row; i < M.rows; ++i) {
            if (fieldops::is_zero(M.at(i, col))) continue;
            long w = fieldops::weight(M.at(i, col));
            if (best < 0 || w < best_w) {
                best = i;
                best_w = w;
            }
        }
        if (best < 0) continue;
        if (best != row)
            for (int j = col; j < M.cols; ++j) std::swap(M.at(row, j), M.at(best, j));
        E piv_inv = fieldops::inverse(M.at(row, col));
        for (int j = col; j < M.cols; ++j) M.at(row, j) = M.at(row, j) * piv_inv;
        for (int i = 0; i < M.rows; ++i) {
            if (i == row || fieldops::is_zero(M.at(i, col))) continue;
            E factor = M.at(i, col);
            for (int j = col; j < M.cols; ++j)
                M.at(i, j) = M.at(i, j) - factor * M.at(row, j);
        }
        ech.pivot_cols.push_back(col);
        ++row;
    }
    ech.rank = row;
    ech.mat = std::move(M);
    return ech;
}

/// Right-kernel basis from a reduced echelon form; one vector per free
/// column, with a 1 in the free slot and pivot entries filled in.
template <class E>
std::vector<std::vector<E>> kernel_basis(const Echelon<E>& ech, const E& zero, const E& one) {
    std::vector<std::vector<E>> out;
    std::vector<int> pivot_of_col(static_cast<std::size_t>(ech.mat.cols), -1);
    for (int r = 0; r < ech.rank; ++r)
        pivot_of_col[static_cast<std::size_t>(ech.pivot_cols[static_cast<std::size_t>(r)])] = r;
    for (int col = 0; col < ech.mat.cols; ++col) {
        if (pivot_of_col[static_cast<std::size_t>(col)] >= 0) continue;
        std::vector<E> v(static_cast<std::size_t>(ech.mat.cols), zero);
        v[static_cast<std::size_t>(col)] = one;
        for (int r = 0; r < ech.rank; ++r) {
            const E& x = ech.mat.at(r, col);
            if (!fieldops::is_zero(x))
                v[static_cast<std::size_t>(ech.pivot_cols[static_cast<std::size_t>(r)])] = zero - x;
        }
        out.push_back(std::move(v));
    }
    return out;
}

/// One solution of A x = b, or nullopt if inconsistent.
template <class E>
std::optional<std::vector<E>> solve_linear(const DenseMatrix<E>& A, const std::vector<E>& b,
                                           const E& zero) {
    if (static_cast<int>(b.size()) != A.rows) throw DomainError("solve_linear: shape mismatch");
    DenseMatrix<E> aug(A.rows, A.cols + 1, zero);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, A.cols) = b[static_cast<std::size_t>(i)];
    }
    auto ech = row_reduce(std::move(aug));
    for (int r = 0; r < ech.rank; ++r)
        if (ech.pivot_cols[static_cast<std::size_t>(r)] == A.cols) return std::nullopt;
    std::vector<E> x(static_cast<std::size_t>(A.cols), zero);
    for (int r = 0; r < ech.rank; ++r)
        x[static_cast<std::size_t>(ech.pivot_cols[static_cast<std::size_t>(r)])] = ech.mat.at(r, A.cols);
    return x;
}

template <class E>
DenseMatrix<E> mat_mul(const DenseMatrix<E>& A, const DenseMatrix<E>& B, const E& zero) {
    if (A.cols != B.rows) throw DomainError("mat_mul: shape mismatch");
    DenseMatrix<E> C(A.rows, B.cols, zero);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            if (fieldops::is_zero(A.at(i, k))) continue;
            for (int j = 0; j < B.cols; ++j)
                C.at(i, j) = C.at(i, j) + A.at(i, k) * B.at(k, j);
        }
    return C;
}

/// Fraction-free determinant (Bareiss) over an exact field or integral
/// domain supplied as mpq/NFElem; returns the exact determinant.
template <class E>
E determinant(DenseMatrix<E> M, const E& zero, const E& one) {
    if (M.rows != M.cols) throw DomainError("determinant: square matrix required");
    int n = M.rows;
    if (n == 0) return one;
    E det = one;
    bool neg = false;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (!fieldops::is_zero(M.at(i, col))) {
                piv = i;
                break;
            }
        if (piv < 0) return zero;
        if (piv != col) {
            neg = !neg;
            for (int j = col; j < n; ++j) std::swap(M.at(col, j), M.at(piv, j));
        }
        det = det * M.at(col, col);
        E piv_inv = fieldops::inverse(M.at(col, col));
        for (int i = col + 1; i < n; ++i) {
            if (fieldops::is_zero(M.at(i, col))) continue;
            E factor = M.at(i, col) * piv_inv;
            for (int j = col; j < n; ++j) M.at(i, j) = M.at(i, j) - factor * M.at(col, j);
        }
    }
    return neg ? zero - det : det;
}

/// Chinese remainder combination of r1 mod m1 and r2 mod m2 (coprime moduli).
inline mpz_class crt_combine(const mpz_class& r1, const mpz_class& m1, const mpz_class& r2,
                             const mpz_class& m2) {
    mpz_class g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
    if (g != 1) throw DomainError("crt_combine: moduli not coprime");
    mpz_class m = m1 * m2;
    mpz_class x = r1 + m1 * (((r2 - r1) * s) % m2);
    x %= m;
    if (x < 0) x += m;
    return x;
}

/// Rational reconstruction: the unique n/d with a ≡ n·d⁻¹ (mod m),
/// |n| ≤ B, 0 < d ≤ B with B = floor(sqrt(m/2)), if one exists.
inline std::optional<mpq_class> rational_reconstruct(mpz_class a, const mpz_class& m) {
    a %= m;
    if (a < 0) a += m;
    mpz_class bound = sqrt(m / 2);
    mpz_class r0 = m, r1 = a, t0 = 0, t1 = 1;
    while (r1 > bound) {
        mpz_class q = r0 / r1;
        mpz_class r2 = r0 - q * r1;
        mpz_class t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (sgn(t1) == 0) return std::nullopt;
    mpz_class num = r1, den = t1;
    if (den < 0) {
        den = -den;
        num = -num;
    }
    if (den > bound) return std::nullopt;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g != 1 && g != 0) return std::nullopt;
    mpz_class chk;
    mpz_gcd(chk.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
    if (chk != 1) return std::nullopt;
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace tlkit
