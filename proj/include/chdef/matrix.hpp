#pragma once

/**
 * @file matrix.hpp
 * @brief Dense square matrices over an exact commutative ring.
 *
 * The ring only needs +, -, *, equality and construction from an integer.
 * Determinants use cofactor expansion up to dimension 5 and Bareiss
 * fraction-free elimination above that; the latter needs `divide_exact`
 * for the ring, found by ADL.
 */

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace chdef {

template <class R>
class SquareMatrix {
   public:
    using value_type = R;

    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, R(0L)) {
        if (dim == 0) throw dimension_error("matrix dimension must be positive");
    }
    SquareMatrix(std::initializer_list<std::initializer_list<R>> rows) : dim_(rows.size()) {
        if (dim_ == 0) throw dimension_error("matrix dimension must be positive");
        data_.reserve(dim_ * dim_);
        for (const auto& row : rows) {
            if (row.size() != dim_) throw dimension_error("matrix rows must all have length " + std::to_string(dim_));
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static SquareMatrix identity(std::size_t dim) {
        SquareMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) m(i, i) = R(1L);
        return m;
    }
    static SquareMatrix diagonal(const std::vector<R>& diag) {
        SquareMatrix m(diag.size());
        for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
        return m;
    }

    std::size_t dim() const noexcept { return dim_; }

    R& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const R& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    R& at(std::size_t i, std::size_t j) {
        check_index(i, j);
        return data_[i * dim_ + j];
    }
    const R& at(std::size_t i, std::size_t j) const {
        check_index(i, j);
        return data_[i * dim_ + j];
    }

    friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) { return a.dim_ == b.dim_ && a.data_ == b.data_; }
    friend bool operator!=(const SquareMatrix& a, const SquareMatrix& b) { return !(a == b); }

    friend SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
        require_same_dim(a, b);
        SquareMatrix r = a;
        for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] += b.data_[k];
        return r;
    }
    friend SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
        require_same_dim(a, b);
        SquareMatrix r = a;
        for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] -= b.data_[k];
        return r;
    }
    friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
        require_same_dim(a, b);
        const std::size_t n = a.dim_;
        SquareMatrix r(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const R& aik = a(i, k);
                if (aik == R(0L)) continue;
                for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }
    friend SquareMatrix operator*(const R& s, const SquareMatrix& a) {
        SquareMatrix r = a;
        for (auto& x : r.data_) x = s * x;
        return r;
    }

    bool is_identity() const { return *this == identity(dim_); }
    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const R& x) { return x == R(0L); });
    }

   private:
    void check_index(std::size_t i, std::size_t j) const {
        if (i >= dim_ || j >= dim_) throw std::out_of_range("matrix index out of range");
    }
    static void require_same_dim(const SquareMatrix& a, const SquareMatrix& b) {
        if (a.dim_ != b.dim_)
            throw dimension_error("dimension mismatch: " + std::to_string(a.dim_) + " vs " + std::to_string(b.dim_));
    }

    std::size_t dim_ = 0;
    std::vector<R> data_;
};

template <class R>
SquareMatrix<R> mat_mul(const SquareMatrix<R>& a, const SquareMatrix<R>& b) {
    return a * b;
}

template <class R>
SquareMatrix<R> transpose(const SquareMatrix<R>& a) {
    SquareMatrix<R> t(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) t(j, i) = a(i, j);
    return t;
}

template <class R>
R trace(const SquareMatrix<R>& a) {
    R s(0L);
    for (std::size_t i = 0; i < a.dim(); ++i) s += a(i, i);
    return s;
}

template <class R>
SquareMatrix<R> power(const SquareMatrix<R>& a, unsigned k) {
    SquareMatrix<R> r = SquareMatrix<R>::identity(a.dim());
    for (unsigned i = 0; i < k; ++i) r = r * a;
    return r;
}

namespace detail {

template <class R>
R cofactor_det(const std::vector<std::vector<R>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    R det(0L);
    for (std::size_t col = 0; col < n; ++col) {
        if (m[0][col] == R(0L)) continue;
        std::vector<std::vector<R>> minor;
        minor.reserve(n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<R> row;
            row.reserve(n - 1);
            for (std::size_t j = 0; j < n; ++j)
                if (j != col) row.push_back(m[i][j]);
            minor.push_back(std::move(row));
        }
        R term = m[0][col] * cofactor_det(minor);
        if (col % 2 == 0)
            det += term;
        else
            det -= term;
    }
    return det;
}

template <class R>
R bareiss_det(std::vector<std::vector<R>> m) {
    const std::size_t n = m.size();
    R prev(1L);
    bool negate = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == R(0L)) {
            std::size_t swap = k + 1;
            while (swap < n && m[swap][k] == R(0L)) ++swap;
            if (swap == n) return R(0L);
            std::swap(m[k], m[swap]);
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                auto q = divide_exact(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
                if (!q) throw std::logic_error("Bareiss step was not an exact division");
                m[i][j] = std::move(*q);
            }
        prev = m[k][k];
    }
    return negate ? R(0L) - m[n - 1][n - 1] : m[n - 1][n - 1];
}

template <class R>
std::vector<std::vector<R>> rows_of(const SquareMatrix<R>& a) {
    std::vector<std::vector<R>> m(a.dim(), std::vector<R>(a.dim()));
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) m[i][j] = a(i, j);
    return m;
}

}  // namespace detail

/// Exact determinant: cofactor expansion for dim <= 5, Bareiss above.
template <class R>
R mat_det(const SquareMatrix<R>& a) {
    auto rows = detail::rows_of(a);
    if (a.dim() <= 5) return detail::cofactor_det(rows);
    return detail::bareiss_det(std::move(rows));
}

/// Classical adjugate, adj(A) A = det(A) I.
template <class R>
SquareMatrix<R> adjugate(const SquareMatrix<R>& a) {
    const std::size_t n = a.dim();
    SquareMatrix<R> adj(n);
    if (n == 1) {
        adj(0, 0) = R(1L);
        return adj;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            SquareMatrix<R> minor(n - 1);
            for (std::size_t r = 0, mr = 0; r < n; ++r) {
                if (r == i) continue;
                for (std::size_t c = 0, mc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(mr, mc++) = a(r, c);
                }
                ++mr;
            }
            R cof = mat_det(minor);
            adj(j, i) = ((i + j) % 2 == 0) ? cof : R(0L) - cof;
        }
    return adj;
}

/**
 * Characteristic polynomial det(x I - A), coefficients low to high degree,
 * by Faddeev-LeVerrier.  Needs division by small integers, which every
 * ring used here (rationals, Laurent polynomials over Q, complex) supports
 * through multiplication by the reciprocal `inverse_of_integer`.
 */
template <class R, class IntInverse>
std::vector<R> characteristic_polynomial(const SquareMatrix<R>& a, IntInverse inverse_of_integer) {
    const std::size_t n = a.dim();
    std::vector<R> c(n + 1, R(0L));
    c[n] = R(1L);
    SquareMatrix<R> mk(n);
    for (std::size_t k = 1; k <= n; ++k) {
        mk = a * mk;
        for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k + 1];
        R t = trace(a * mk);
        c[n - k] = R(0L) - inverse_of_integer(static_cast<long>(k)) * t;
    }
    return c;
}

}  // namespace chdef
