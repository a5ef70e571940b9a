#pragma once

// Dense matrices over an exact field K (Rational, AlgebraicNumber,
// ExtElement, or the finite fields used for congruence quotients), plus the
// exact linear algebra the rest of the library needs: determinant, inverse,
// characteristic polynomial, rank / kernel, and an incremental echelon span
// for algebra-closure computations.
//
// K must provide field operators and the k_is_zero / k_zero_like /
// k_one_like customization points. Matrices are never empty, so every
// instance can mint zeros and ones of its own coefficient field.

#include "bendlab/polynomial.hpp"
#include "bendlab/rational.hpp"

#include <optional>
#include <type_traits>
#include <vector>

namespace bendlab {

template <typename K>
class Matrix {
  public:
    Matrix(long rows, long cols, const K& fill) : n_(rows), m_(cols), a_(rows * cols, fill) {
        if (rows < 1 || cols < 1) fail("SizeMismatch", "matrices must be nonempty");
    }

    static Matrix from_rows(const std::vector<std::vector<K>>& rows) {
        if (rows.empty() || rows[0].empty()) fail("SizeMismatch", "matrices must be nonempty");
        Matrix m(static_cast<long>(rows.size()), static_cast<long>(rows[0].size()), rows[0][0]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows[0].size())
                fail("SizeMismatch", "ragged matrix rows");
            for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }

    static Matrix identity(long n, const K& sample) {
        Matrix m(n, n, k_zero_like(sample));
        for (long i = 0; i < n; ++i) m.at(i, i) = k_one_like(sample);
        return m;
    }

    long rows() const { return n_; }
    long cols() const { return m_; }
    bool is_square() const { return n_ == m_; }

    K& at(long i, long j) { return a_[i * m_ + j]; }
    const K& at(long i, long j) const { return a_[i * m_ + j]; }

    const K& sample() const { return a_[0]; }
    K zero() const { return k_zero_like(a_[0]); }
    K one() const { return k_one_like(a_[0]); }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        a.check_same_shape(b);
        Matrix r = a;
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = r.a_[i] + b.a_[i];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        a.check_same_shape(b);
        Matrix r = a;
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] = r.a_[i] - b.a_[i];
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.m_ != b.n_) fail("SizeMismatch", "matrix product shape mismatch");
        Matrix r(a.n_, b.m_, k_zero_like(a.a_[0]));
        for (long i = 0; i < a.n_; ++i)
            for (long k = 0; k < a.m_; ++k) {
                if (k_is_zero(a.at(i, k))) continue;
                for (long j = 0; j < b.m_; ++j)
                    r.at(i, j) = r.at(i, j) + a.at(i, k) * b.at(k, j);
            }
        return r;
    }
    friend Matrix operator*(const K& s, const Matrix& a) {
        Matrix r = a;
        for (auto& x : r.a_) x = s * x;
        return r;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        if (a.n_ != b.n_ || a.m_ != b.m_) return false;
        for (std::size_t i = 0; i < a.a_.size(); ++i)
            if (!k_is_zero(a.a_[i] - b.a_[i])) return false;
        return true;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    Matrix transpose() const {
        Matrix r(m_, n_, a_[0]);
        for (long i = 0; i < n_; ++i)
            for (long j = 0; j < m_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    // entrywise map; the result coefficient type follows the callable
    template <typename Fn>
    auto map(Fn fn) const {
        using R = std::decay_t<decltype(fn(std::declval<const K&>()))>;
        Matrix<R> r(n_, m_, fn(a_[0]));
        for (long i = 0; i < n_; ++i)
            for (long j = 0; j < m_; ++j) r.at(i, j) = fn(at(i, j));
        return r;
    }

    K trace() const {
        require_square();
        K t = zero();
        for (long i = 0; i < n_; ++i) t = t + at(i, i);
        return t;
    }

    K det() const {
        require_square();
        Matrix w = *this;
        K d = one();
        for (long col = 0; col < n_; ++col) {
            long pivot = -1;
            for (long r = col; r < n_; ++r)
                if (!k_is_zero(w.at(r, col))) {
                    pivot = r;
                    break;
                }
            if (pivot == -1) return zero();
            if (pivot != col) {
                for (long j = 0; j < n_; ++j) std::swap(w.at(col, j), w.at(pivot, j));
                d = zero() - d;
            }
            d = d * w.at(col, col);
            K inv = one() / w.at(col, col);
            for (long r = col + 1; r < n_; ++r) {
                if (k_is_zero(w.at(r, col))) continue;
                K f0 = w.at(r, col) * inv;
                for (long j = col; j < n_; ++j)
                    w.at(r, j) = w.at(r, j) - f0 * w.at(col, j);
            }
        }
        return d;
    }

    Matrix inverse() const {
        require_square();
        Matrix w = *this;
        Matrix inv = identity(n_, a_[0]);
        for (long col = 0; col < n_; ++col) {
            long pivot = -1;
            for (long r = col; r < n_; ++r)
                if (!k_is_zero(w.at(r, col))) {
                    pivot = r;
                    break;
                }
            if (pivot == -1) fail("Singular", "matrix is not invertible");
            if (pivot != col)
                for (long j = 0; j < n_; ++j) {
                    std::swap(w.at(col, j), w.at(pivot, j));
                    std::swap(inv.at(col, j), inv.at(pivot, j));
                }
            K piv_inv = one() / w.at(col, col);
            for (long j = 0; j < n_; ++j) {
                w.at(col, j) = w.at(col, j) * piv_inv;
                inv.at(col, j) = inv.at(col, j) * piv_inv;
            }
            for (long r = 0; r < n_; ++r) {
                if (r == col || k_is_zero(w.at(r, col))) continue;
                K f0 = w.at(r, col);
                for (long j = 0; j < n_; ++j) {
                    w.at(r, j) = w.at(r, j) - f0 * w.at(col, j);
                    inv.at(r, j) = inv.at(r, j) - f0 * inv.at(col, j);
                }
            }
        }
        return inv;
    }

    Matrix pow(long e) const {
        require_square();
        if (e < 0) return inverse().pow(-e);
        Matrix r = identity(n_, a_[0]);
        Matrix base = *this;
        unsigned long k = static_cast<unsigned long>(e);
        while (k) {
            if (k & 1) r = r * base;
            base = base * base;
            k >>= 1;
        }
        return r;
    }

    std::vector<K> apply(const std::vector<K>& v) const {
        if (static_cast<long>(v.size()) != m_) fail("SizeMismatch", "matrix-vector shape mismatch");
        std::vector<K> r(n_, zero());
        for (long i = 0; i < n_; ++i)
            for (long j = 0; j < m_; ++j) r[i] = r[i] + at(i, j) * v[j];
        return r;
    }

    std::vector<K> flatten() const { return a_; }

  private:
    void require_square() const {
        if (!is_square()) fail("SizeMismatch", "operation requires a square matrix");
    }
    void check_same_shape(const Matrix& o) const {
        if (n_ != o.n_ || m_ != o.m_) fail("SizeMismatch", "matrix shape mismatch");
    }

    long n_, m_;
    std::vector<K> a_;
};

// Characteristic polynomial det(xI - A) by Faddeev-LeVerrier; exact in any
// characteristic-zero field (divisions are by the integers 1..n only).
template <typename K>
Poly<K> char_poly(const Matrix<K>& a) {
    if (!a.is_square()) fail("SizeMismatch", "characteristic polynomial of non-square matrix");
    long n = a.rows();
    std::vector<K> coeff(n + 1, a.zero());
    coeff[n] = a.one();
    Matrix<K> m = a;
    K kk = a.zero();
    for (long k = 1; k <= n; ++k) {
        kk = kk + a.one();  // k as a field element
        if (k > 1) {
            // M_k = A (M_{k-1} + c_{n-k+1} I)
            Matrix<K> shifted = m;
            for (long i = 0; i < n; ++i)
                shifted.at(i, i) = shifted.at(i, i) + coeff[n - k + 1];
            m = a * shifted;
        }
        coeff[n - k] = (a.zero() - m.trace()) / kk;
    }
    return Poly<K>(std::move(coeff));
}

// Row rank by Gaussian elimination over the exact field K.
template <typename K>
long rank(Matrix<K> w) {
    long r = 0;
    for (long col = 0; col < w.cols() && r < w.rows(); ++col) {
        long pivot = -1;
        for (long i = r; i < w.rows(); ++i)
            if (!k_is_zero(w.at(i, col))) {
                pivot = i;
                break;
            }
        if (pivot == -1) continue;
        if (pivot != r)
            for (long j = 0; j < w.cols(); ++j) std::swap(w.at(r, j), w.at(pivot, j));
        K inv = w.one() / w.at(r, col);
        for (long i = r + 1; i < w.rows(); ++i) {
            if (k_is_zero(w.at(i, col))) continue;
            K f0 = w.at(i, col) * inv;
            for (long j = col; j < w.cols(); ++j)
                w.at(i, j) = w.at(i, j) - f0 * w.at(r, j);
        }
        ++r;
    }
    return r;
}

// Basis of the right kernel {v : A v = 0}.
template <typename K>
std::vector<std::vector<K>> kernel_basis(const Matrix<K>& a) {
    Matrix<K> w = a;
    long rows = w.rows(), cols = w.cols();
    std::vector<long> pivot_of_col(cols, -1);
    long r = 0;
    for (long col = 0; col < cols && r < rows; ++col) {
        long pivot = -1;
        for (long i = r; i < rows; ++i)
            if (!k_is_zero(w.at(i, col))) {
                pivot = i;
                break;
            }
        if (pivot == -1) continue;
        if (pivot != r)
            for (long j = 0; j < cols; ++j) std::swap(w.at(r, j), w.at(pivot, j));
        K inv = w.one() / w.at(r, col);
        for (long j = 0; j < cols; ++j) w.at(r, j) = w.at(r, j) * inv;
        for (long i = 0; i < rows; ++i) {
            if (i == r || k_is_zero(w.at(i, col))) continue;
            K f0 = w.at(i, col);
            for (long j = 0; j < cols; ++j) w.at(i, j) = w.at(i, j) - f0 * w.at(r, j);
        }
        pivot_of_col[col] = r;
        ++r;
    }
    std::vector<std::vector<K>> basis;
    for (long col = 0; col < cols; ++col) {
        if (pivot_of_col[col] != -1) continue;
        std::vector<K> v(cols, w.zero());
        v[col] = w.one();
        for (long c2 = 0; c2 < cols; ++c2)
            if (pivot_of_col[c2] != -1) v[c2] = w.zero() - w.at(pivot_of_col[c2], col);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Incremental reduced-echelon span of vectors over K. add() reduces against
// the current basis and grows it when a residual survives; insertion order
// does not change the resulting subspace.
template <typename K>
class EchelonSpan {
  public:
    long dim() const { return static_cast<long>(rows_.size()); }
    const std::vector<std::vector<K>>& rows() const { return rows_; }

    bool add(std::vector<K> v) {
        reduce(v);
        long lead = leading_index(v);
        if (lead == -1) return false;
        K inv = k_one_like(v[lead]) / v[lead];
        for (auto& x : v) x = inv * x;
        // back-eliminate the new pivot from existing rows
        for (auto& row : rows_)
            if (!k_is_zero(row[lead])) {
                K f0 = row[lead];
                for (std::size_t j = 0; j < row.size(); ++j) row[j] = row[j] - f0 * v[j];
            }
        // keep rows ordered by pivot position
        std::size_t pos = 0;
        while (pos < rows_.size() && leading_index(rows_[pos]) < lead) ++pos;
        rows_.insert(rows_.begin() + pos, std::move(v));
        return true;
    }

    bool contains(std::vector<K> v) const {
        reduce(v);
        return leading_index(v) == -1;
    }

  private:
    static long leading_index(const std::vector<K>& v) {
        for (std::size_t j = 0; j < v.size(); ++j)
            if (!k_is_zero(v[j])) return static_cast<long>(j);
        return -1;
    }

    void reduce(std::vector<K>& v) const {
        for (const auto& row : rows_) {
            long lead = leading_index(row);
            if (lead == -1 || k_is_zero(v[lead])) continue;
            K f0 = v[lead];  // rows are normalized to pivot 1
            for (std::size_t j = 0; j < v.size(); ++j) v[j] = v[j] - f0 * row[j];
        }
    }

    std::vector<std::vector<K>> rows_;
};

}  // namespace bendlab
