#pragma once

#include <cstddef>
#include <vector>

#include "laurent.hpp"
#include "matrix.hpp"
#include "numeric.hpp"

namespace chdef {

/// Square matrix over Q[u, u^-1].
using RingMatrix = SquareMatrix<StarLaurent>;

/// Entrywise star of the transpose; (AB)* = B* A*.
inline RingMatrix star_transpose(const RingMatrix& a) {
    RingMatrix t(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) t(j, i) = star(a(i, j));
    return t;
}

/// Entrywise star without transposing.
inline RingMatrix star_entries(const RingMatrix& a) {
    RingMatrix t(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) t(i, j) = star(a(i, j));
    return t;
}

/// Exact inverse; only defined when det(A) is a monomial.
inline RingMatrix mat_inverse(const RingMatrix& a) {
    StarLaurent det = mat_det(a);
    if (!det.is_unit()) throw not_invertible_error();
    RingMatrix adj = adjugate(a);
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) adj(i, j) = *divide_exact(adj(i, j), det);
    return adj;
}

/// Substitutes u = e^{i alpha} entrywise.
inline NumMatrix evaluate(const RingMatrix& a, double alpha) {
    const auto n = static_cast<Eigen::Index>(a.dim());
    NumMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).evaluate(alpha);
    return out;
}

/// Exact substitution u = 1; the result has constant entries only.
inline RingMatrix substitute_one(const RingMatrix& a) {
    RingMatrix out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) out(i, j) = StarLaurent(a(i, j).at_one());
    return out;
}

inline bool is_constant(const RingMatrix& a) {
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (!a(i, j).is_constant()) return false;
    return true;
}

/// A^T J star(A) == J, the invariance condition for H(X, Y) = X^T J conj(Y).
inline bool preserves_form(const RingMatrix& a, const RingMatrix& form) {
    return transpose(a) * form * star_entries(a) == form;
}

inline std::vector<StarLaurent> characteristic_polynomial(const RingMatrix& a) {
    return characteristic_polynomial(a, [](long k) { return StarLaurent(Rational(1, k)); });
}

}  // namespace chdef
