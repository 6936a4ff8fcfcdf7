#pragma once

/**
 * @file numeric.hpp
 * @brief Floating-point linear algebra helpers on top of Eigen.
 *
 * Eigenvalues of group elements are often defective (parabolics carry
 * Jordan blocks of size up to 3), so raw eigensolver output scatters a
 * multiple eigenvalue into a small ring of radius ~eps^(1/k).  Everything
 * here works with clusters: the centroid of a scattered cluster is accurate
 * to O(eps) even when its members are not.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace chdef {

using Complex = std::complex<double>;
using NumMatrix = Eigen::MatrixXcd;
using NumVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

struct Inertia {
    int positive = 0;
    int negative = 0;
    int zero = 0;
    friend bool operator==(const Inertia&, const Inertia&) = default;
};

/// Inertia of a Hermitian matrix; |eigenvalue| <= rel_tol * ||A|| counts as zero.
inline Inertia inertia(const NumMatrix& hermitian, double rel_tol) {
    Eigen::SelfAdjointEigenSolver<NumMatrix> es(hermitian, Eigen::EigenvaluesOnly);
    const double scale = std::max(hermitian.norm(), 1e-300);
    Inertia out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double ev = es.eigenvalues()(i);
        if (std::abs(ev) <= rel_tol * scale)
            ++out.zero;
        else if (ev > 0)
            ++out.positive;
        else
            ++out.negative;
    }
    return out;
}

struct EigenCluster {
    Complex value;
    int multiplicity = 0;
};

/// Single-linkage grouping of values closer than radius * max(1, |z|).
inline std::vector<EigenCluster> cluster_values(std::span<const Complex> values, double radius) {
    const std::size_t n = values.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double scale = std::max({1.0, std::abs(values[i]), std::abs(values[j])});
            if (std::abs(values[i] - values[j]) <= radius * scale) parent[find(i)] = find(j);
        }
    std::vector<EigenCluster> clusters;
    std::vector<std::size_t> root_of_cluster;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = find(i);
        auto it = std::find(root_of_cluster.begin(), root_of_cluster.end(), r);
        if (it == root_of_cluster.end()) {
            root_of_cluster.push_back(r);
            clusters.push_back({values[i], 1});
        } else {
            auto& c = clusters[static_cast<std::size_t>(it - root_of_cluster.begin())];
            c.value += values[i];
            ++c.multiplicity;
        }
    }
    for (auto& c : clusters) c.value /= static_cast<double>(c.multiplicity);
    // Deterministic order: by argument, then modulus.
    std::sort(clusters.begin(), clusters.end(), [](const EigenCluster& a, const EigenCluster& b) {
        double aa = std::arg(a.value), ab = std::arg(b.value);
        if (aa != ab) return aa < ab;
        return std::abs(a.value) < std::abs(b.value);
    });
    return clusters;
}

/// p(z) and its k-th derivative for coefficients low to high degree.
inline Complex poly_derivative_at(std::span<const Complex> coeffs, std::size_t k, Complex z) {
    Complex sum{0.0, 0.0};
    for (std::size_t i = coeffs.size(); i-- > k;) {
        double falling = 1.0;
        for (std::size_t j = 0; j < k; ++j) falling *= static_cast<double>(i - j);
        sum = sum * z + coeffs[i] * falling;
    }
    return sum;
}

/// Roots of a polynomial (coefficients low to high, leading coefficient nonzero)
/// via the eigenvalues of its companion matrix.
inline std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs) {
    std::size_t deg = coeffs.size() - 1;
    while (deg > 0 && coeffs[deg] == Complex(0.0, 0.0)) --deg;
    if (deg == 0) return {};
    NumMatrix companion = NumMatrix::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
    for (std::size_t i = 1; i < deg; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < deg; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg - 1)) = -coeffs[i] / coeffs[deg];
    Eigen::ComplexEigenSolver<NumMatrix> es(companion, false);
    std::vector<Complex> roots(deg);
    for (std::size_t i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
    return roots;
}

/**
 * Roots with multiplicity.  Scattered multiple roots are grouped, replaced
 * by their centroid, and the centroid of a k-fold cluster is polished by
 * Newton steps on p^(k-1), for which it is a simple root.
 */
inline std::vector<EigenCluster> polynomial_root_clusters(std::span<const Complex> coeffs, double cluster_radius,
                                                         double target_residual = 1e-12) {
    auto roots = polynomial_roots(coeffs);
    auto clusters = cluster_values(roots, cluster_radius);
    for (auto& c : clusters) {
        const auto k = static_cast<std::size_t>(c.multiplicity);
        for (int it = 0; it < 50; ++it) {
            Complex f = poly_derivative_at(coeffs, k - 1, c.value);
            Complex df = poly_derivative_at(coeffs, k, c.value);
            if (std::abs(f) <= target_residual * std::max(1.0, std::abs(c.value)) || df == Complex(0.0, 0.0)) break;
            Complex step = f / df;
            c.value -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(c.value))) break;
        }
    }
    return clusters;
}

/// Cluster centroids of the eigenvalues of a general complex matrix.
inline std::vector<EigenCluster> eigenvalue_clusters(const NumMatrix& a, double cluster_radius) {
    Eigen::ComplexEigenSolver<NumMatrix> es(a, false);
    std::vector<Complex> ev(static_cast<std::size_t>(es.eigenvalues().size()));
    for (std::size_t i = 0; i < ev.size(); ++i) ev[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
    return cluster_values(ev, cluster_radius);
}

inline std::vector<Complex> expand_clusters(const std::vector<EigenCluster>& clusters) {
    std::vector<Complex> out;
    for (const auto& c : clusters) out.insert(out.end(), static_cast<std::size_t>(c.multiplicity), c.value);
    return out;
}

struct NullSpace {
    NumMatrix basis;               ///< orthonormal columns
    double largest_null_sv = 0.0;  ///< largest singular value treated as zero
    double smallest_kept_sv = 0.0; ///< smallest singular value treated as nonzero
};

/// Numerical null space: right singular vectors with singular value <= threshold.
inline NullSpace null_space(const NumMatrix& a, double threshold) {
    Eigen::JacobiSVD<NumMatrix> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Eigen::Index n = a.cols();
    Eigen::Index rank = 0;
    NullSpace out;
    out.smallest_kept_sv = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > threshold) {
            ++rank;
            out.smallest_kept_sv = std::min(out.smallest_kept_sv, sv(i));
        } else {
            out.largest_null_sv = std::max(out.largest_null_sv, sv(i));
        }
    }
    out.basis = svd.matrixV().rightCols(n - rank);
    return out;
}

/// ||a||_2 (largest singular value).
inline double spectral_norm(const NumMatrix& a) {
    Eigen::JacobiSVD<NumMatrix> svd(a);
    return svd.singularValues()(0);
}

/// Sine of the angle between the complex lines spanned by v and w (Euclidean), via the residual of projecting w on v.
inline double projective_deviation(const NumVector& v, const NumVector& w) {
    const double nv = v.norm(), nw = w.norm();
    if (nv == 0.0 || nw == 0.0) return 1.0;
    const NumVector vhat = v / nv;
    const NumVector resid = w - vhat * vhat.dot(w);
    return std::min(1.0, resid.norm() / nw);
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

}  // namespace chdef
