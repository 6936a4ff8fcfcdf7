#pragma once

// Hermitian forms, points and horoballs in the projective model.
//
// Pairing: <X, Y> = X^T J conj(Y), linear in X.  Isometries act on column
// vectors and g preserves the form iff g^T J conj(g) = J.  Complex
// hyperbolic space is the set of lines [Z] with <Z, Z> < 0.

#include <Eigen/Dense>

#include <random>

#include "../errors.hpp"
#include "../numeric.hpp"
#include "../tolerances.hpp"

namespace chdef::chgeom {

class HermitianForm {
   public:
    explicit HermitianForm(NumMatrix j, const Tolerances& tol = {}) : j_(std::move(j)) {
        if (j_.rows() != j_.cols() || j_.rows() < 2) throw dimension_error("form must be square of size >= 2");
        const double scale = spectral_norm(j_);
        if ((j_ - j_.adjoint()).norm() > tol.hermitian * std::max(scale, 1.0) * 10.0)
            throw geometry_error("form matrix is not Hermitian");
        j_ = 0.5 * (j_ + j_.adjoint());
        inertia_ = inertia(j_, tol.sig);
    }

    const NumMatrix& matrix() const noexcept { return j_; }
    Eigen::Index dim() const noexcept { return j_.rows(); }
    const Inertia& signature() const noexcept { return inertia_; }
    bool is_lorentzian() const noexcept { return inertia_.negative == 1 && inertia_.zero == 0; }

    void require_lorentzian() const {
        if (!is_lorentzian())
            throw degenerate_form_error("form has inertia (" + std::to_string(inertia_.positive) + "," +
                                        std::to_string(inertia_.negative) + "," + std::to_string(inertia_.zero) +
                                        "), need (n,1,0)");
    }

    Complex pair(const NumVector& x, const NumVector& y) const { return (x.transpose() * j_ * y.conjugate())(0, 0); }
    double self(const NumVector& x) const { return pair(x, x).real(); }

    /// ||g^T J conj(g) - J|| / (||g||^2 ||J||)
    double invariance_defect(const NumMatrix& g) const {
        const double ng = spectral_norm(g);
        return (g.transpose() * j_ * g.conjugate() - j_).norm() / (ng * ng * spectral_norm(j_));
    }

    /**
     * P with <P x, P y> = y^* D x, D = Diag(1, ..., 1, -1).  Columns are
     * eigenvectors of J^T scaled by |eigenvalue|^(-1/2), negative one last.
     */
    const NumMatrix& adapted_basis() const {
        if (adapted_.size() == 0) {
            require_lorentzian();
            const NumMatrix a = j_.transpose();
            Eigen::SelfAdjointEigenSolver<NumMatrix> es(a);
            const Eigen::Index n = dim();
            adapted_.resize(n, n);
            // Eigenvalues are ascending, so index 0 is the negative one.
            for (Eigen::Index k = 1; k < n; ++k)
                adapted_.col(k - 1) = es.eigenvectors().col(k) / std::sqrt(es.eigenvalues()(k));
            adapted_.col(n - 1) = es.eigenvectors().col(0) / std::sqrt(-es.eigenvalues()(0));
            // Fix phases so real forms get real bases.
            for (Eigen::Index k = 0; k < n; ++k) {
                Eigen::Index i = 0;
                adapted_.col(k).cwiseAbs().maxCoeff(&i);
                adapted_.col(k) *= std::polar(1.0, -std::arg(adapted_(i, k)));
            }
            adapted_inverse_ = adapted_.inverse();
        }
        return adapted_;
    }
    const NumMatrix& adapted_basis_inverse() const {
        adapted_basis();
        return adapted_inverse_;
    }

    /// Canonical interior point: the negative direction of the form.
    NumVector center() const { return adapted_basis().col(dim() - 1); }

   private:
    NumMatrix j_;
    Inertia inertia_;
    mutable NumMatrix adapted_;
    mutable NumMatrix adapted_inverse_;
};

/// Interior point; any nonzero rescaling of the lift is the same point.
struct ProjPoint {
    NumVector lift;
};

/// Point at infinity: a null line.
struct BoundaryPoint {
    NumVector lift;
};

/**
 * {Z : B(Z) <= level}, B the Busemann function of `base` normalized to
 * vanish at `origin`.
 */
struct Horoball {
    BoundaryPoint base;
    ProjPoint origin;
    double level = 0.0;
};

inline ProjPoint make_interior(const HermitianForm& form, NumVector v) {
    if (v.size() != form.dim()) throw dimension_error("point dimension does not match the form");
    if (!(form.self(v) < 0.0)) throw geometry_error("point is not inside complex hyperbolic space");
    return {std::move(v)};
}

inline BoundaryPoint make_boundary(const HermitianForm& form, NumVector v, const Tolerances& tol = {}) {
    if (v.size() != form.dim()) throw dimension_error("point dimension does not match the form");
    const double n2 = v.squaredNorm();
    if (n2 == 0.0) throw geometry_error("zero vector is not a boundary point");
    if (std::abs(form.self(v)) > tol.null * n2 * spectral_norm(form.matrix()))
        throw geometry_error("vector is not null for the form");
    return {std::move(v)};
}

/// Image of a horoball under an isometry g.
inline Horoball apply(const NumMatrix& g, const Horoball& h) {
    return {{g * h.base.lift}, {g * h.origin.lift}, h.level};
}

/// Random form-preserving matrix of determinant 1: P (U(n) x U(1)) boost P^-1.
template <class Rng>
NumMatrix random_isometry(const HermitianForm& form, Rng& rng, bool real_only = false) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Eigen::Index n = form.dim();
    NumMatrix z(n - 1, n - 1);
    for (Eigen::Index i = 0; i < n - 1; ++i)
        for (Eigen::Index k = 0; k < n - 1; ++k) z(i, k) = Complex(gauss(rng), real_only ? 0.0 : gauss(rng));
    Eigen::HouseholderQR<NumMatrix> qr(z);
    NumMatrix q = qr.householderQ();
    if (real_only && q.determinant().real() < 0.0) q.col(0) = -q.col(0);
    NumMatrix s = NumMatrix::Identity(n, n);
    s.topLeftCorner(n - 1, n - 1) = q;
    if (!real_only) s(n - 1, n - 1) = std::polar(1.0, 2.0 * kPi * unit(rng));
    const double r = unit(rng);
    NumMatrix boost = NumMatrix::Identity(n, n);
    boost(0, 0) = boost(n - 1, n - 1) = std::cosh(r);
    boost(0, n - 1) = boost(n - 1, 0) = std::sinh(r);
    NumMatrix g = form.adapted_basis() * s * boost * form.adapted_basis_inverse();
    if (real_only) return g;
    return g * std::polar(1.0, -std::arg(g.determinant()) / static_cast<double>(n));
}

/// Random interior point P (y, 1) with |y| < 0.9 in adapted coordinates.
template <class Rng>
ProjPoint random_interior_point(const HermitianForm& form, Rng& rng, bool real_only = false) {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Eigen::Index n = form.dim();
    NumVector y(n);
    for (Eigen::Index i = 0; i < n - 1; ++i) y(i) = Complex(gauss(rng), real_only ? 0.0 : gauss(rng));
    y.head(n - 1) *= 0.9 * std::pow(unit(rng), 1.0 / static_cast<double>(n - 1)) / y.head(n - 1).norm();
    y(n - 1) = 1.0;
    return {form.adapted_basis() * y};
}

/// Random boundary point P (y, 1) with |y| = 1.
template <class Rng>
BoundaryPoint random_boundary_point(const HermitianForm& form, Rng& rng, bool real_only = false) {
    std::normal_distribution<double> gauss;
    const Eigen::Index n = form.dim();
    NumVector y(n);
    for (Eigen::Index i = 0; i < n - 1; ++i) y(i) = Complex(gauss(rng), real_only ? 0.0 : gauss(rng));
    y.head(n - 1) /= y.head(n - 1).norm();
    y(n - 1) = 1.0;
    return {form.adapted_basis() * y};
}

}  // namespace chdef::chgeom
