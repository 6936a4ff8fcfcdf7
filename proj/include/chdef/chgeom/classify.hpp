#pragma once

// Isometry classification from eigenvalue clusters and eigenspace ranks.
//
//   off-circle eigenvalue                  -> loxodromic
//   diagonalizable, scalar                 -> identity
//   diagonalizable, an indefinite
//     eigenspace (contains a null line)    -> elliptic-boundary
//   diagonalizable otherwise               -> elliptic-single-point
//   defective, one cluster                 -> parabolic-unipotent
//   defective, several clusters            -> ellipto-parabolic
//
// A singular value inside the band (tau, band * tau] makes the rank call
// unreliable and yields "indeterminate".

#include <optional>
#include <string>
#include <vector>

#include "form.hpp"

namespace chdef::chgeom {

enum class IsometryTag {
    loxodromic,
    parabolic_unipotent,
    ellipto_parabolic,
    elliptic_boundary,
    elliptic_single_point,
    identity,
    indeterminate,
};

inline std::string to_string(IsometryTag t) {
    switch (t) {
        case IsometryTag::loxodromic: return "loxodromic";
        case IsometryTag::parabolic_unipotent: return "parabolic-unipotent";
        case IsometryTag::ellipto_parabolic: return "ellipto-parabolic";
        case IsometryTag::elliptic_boundary: return "elliptic-boundary";
        case IsometryTag::elliptic_single_point: return "elliptic-single-point";
        case IsometryTag::identity: return "identity";
        case IsometryTag::indeterminate: return "indeterminate";
    }
    return "?";
}

inline bool is_parabolic(IsometryTag t) {
    return t == IsometryTag::parabolic_unipotent || t == IsometryTag::ellipto_parabolic;
}

struct ClusterInfo {
    Complex value;
    int algebraic = 0;
    int geometric = 0;
    Inertia eigenspace_form;  ///< inertia of the form restricted to the eigenspace
};

struct IsometryClass {
    IsometryTag tag = IsometryTag::indeterminate;
    std::vector<ClusterInfo> clusters;
    std::optional<Complex> fixed_eigenvalue;  ///< Jordan cluster (parabolic) or null eigenspace (boundary elliptic)
    std::vector<double> rotation_angles;      ///< arg(lambda / fixed eigenvalue), other clusters
    double translation_length = 0.0;          ///< loxodromic only
    std::string note;
};

namespace detail {

inline NumMatrix eigenspace(const NumMatrix& a, Complex lambda, double threshold) {
    const Eigen::Index n = a.rows();
    return null_space(a - lambda * NumMatrix::Identity(n, n), threshold).basis;
}

inline NumMatrix restricted_form(const HermitianForm& form, const NumMatrix& k) {
    // <K x, K y> = y^* K^* J^T K x
    NumMatrix w = k.adjoint() * form.matrix().transpose() * k;
    return 0.5 * (w + w.adjoint());
}

}  // namespace detail

/// Throws geometry_error unless A^T J conj(A) = J and det A = 1 within tolerance.
inline void require_isometry(const HermitianForm& form, const NumMatrix& a, const Tolerances& tol) {
    if (a.rows() != form.dim() || a.cols() != form.dim()) throw dimension_error("matrix and form dimensions differ");
    if (form.invariance_defect(a) > tol.form) throw geometry_error("matrix does not preserve the form");
    const double na = spectral_norm(a);
    if (std::abs(a.determinant() - 1.0) > tol.form * std::pow(std::max(na, 1.0), static_cast<double>(a.rows())))
        throw geometry_error("matrix does not have determinant 1");
}

inline IsometryClass classify_isometry(const HermitianForm& form, const NumMatrix& a, const Tolerances& tol = {}) {
    form.require_lorentzian();
    require_isometry(form, a, tol);
    IsometryClass out;
    const auto clusters = eigenvalue_clusters(a, tol.cluster);
    const double na = spectral_norm(a);
    const double threshold = tol.rank * na;

    double max_abs = 0.0;
    bool off_circle = false;
    for (const auto& c : clusters) {
        max_abs = std::max(max_abs, std::abs(c.value));
        off_circle = off_circle || std::abs(std::abs(c.value) - 1.0) > tol.eig;
    }
    if (off_circle) {
        out.tag = IsometryTag::loxodromic;
        out.translation_length = 2.0 * std::log(max_abs);
        for (const auto& c : clusters) out.clusters.push_back({c.value, c.multiplicity, 0, {}});
        return out;
    }

    bool borderline = false;
    int total_geometric = 0;
    std::optional<std::size_t> defective;
    int defective_count = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        const auto& c = clusters[i];
        NullSpace ns = null_space(a - c.value * NumMatrix::Identity(a.rows(), a.cols()), threshold);
        if (ns.smallest_kept_sv <= tol.indeterminate_band * threshold) borderline = true;
        const int geo = static_cast<int>(ns.basis.cols());
        ClusterInfo info{c.value, c.multiplicity, geo, {}};
        if (geo > 0) info.eigenspace_form = inertia(detail::restricted_form(form, ns.basis), tol.sig);
        out.clusters.push_back(info);
        total_geometric += geo;
        if (geo < c.multiplicity) {
            ++defective_count;
            defective = i;
        }
    }
    if (borderline) {
        out.tag = IsometryTag::indeterminate;
        out.note = "a singular value lies within the indeterminate band of the rank threshold";
        return out;
    }

    if (total_geometric == static_cast<int>(a.rows())) {
        if (clusters.size() == 1) {
            out.tag = IsometryTag::identity;
            return out;
        }
        for (const auto& c : out.clusters) {
            const bool indefinite = (c.eigenspace_form.positive > 0 && c.eigenspace_form.negative > 0) ||
                                    c.eigenspace_form.zero > 0;
            if (indefinite) {
                out.tag = IsometryTag::elliptic_boundary;
                out.fixed_eigenvalue = c.value;
            }
        }
        if (out.tag != IsometryTag::elliptic_boundary) out.tag = IsometryTag::elliptic_single_point;
        if (out.fixed_eigenvalue)
            for (const auto& c : out.clusters)
                if (c.value != *out.fixed_eigenvalue) out.rotation_angles.push_back(std::arg(c.value / *out.fixed_eigenvalue));
        return out;
    }

    if (defective_count != 1) {
        out.tag = IsometryTag::indeterminate;
        out.note = "more than one defective eigenvalue cluster";
        return out;
    }
    const Complex fixed = clusters[*defective].value;
    out.fixed_eigenvalue = fixed;
    if (clusters.size() == 1) {
        out.tag = IsometryTag::parabolic_unipotent;
        return out;
    }
    out.tag = IsometryTag::ellipto_parabolic;
    for (std::size_t i = 0; i < clusters.size(); ++i)
        if (i != *defective)
            for (int k = 0; k < clusters[i].multiplicity; ++k) out.rotation_angles.push_back(std::arg(clusters[i].value / fixed));
    return out;
}

/**
 * Boundary fixed point of a parabolic or boundary-elliptic isometry: a null
 * vector in the eigenspace of the fixed eigenvalue.
 */
inline BoundaryPoint fixed_boundary_point(const HermitianForm& form, const NumMatrix& a, const Tolerances& tol = {}) {
    const IsometryClass cls = classify_isometry(form, a, tol);
    if (!is_parabolic(cls.tag) && cls.tag != IsometryTag::elliptic_boundary)
        throw geometry_error("no distinguished boundary fixed point for class " + to_string(cls.tag));
    const NumMatrix k = detail::eigenspace(a, *cls.fixed_eigenvalue, tol.rank * spectral_norm(a));
    const NumMatrix w = detail::restricted_form(form, k);
    Eigen::SelfAdjointEigenSolver<NumMatrix> es(w);
    const auto& mu = es.eigenvalues();
    const double scale = std::max(1.0, mu.cwiseAbs().maxCoeff());
    NumVector coeffs;
    Eigen::Index smallest = 0;
    mu.cwiseAbs().minCoeff(&smallest);
    if (std::abs(mu(smallest)) <= tol.null * scale) {
        coeffs = es.eigenvectors().col(smallest);  // radical of the restricted form
    } else if (mu(0) < 0.0 && mu(mu.size() - 1) > 0.0) {
        const Eigen::Index top = mu.size() - 1;
        coeffs = std::sqrt(-mu(0)) * es.eigenvectors().col(top) + std::sqrt(mu(top)) * es.eigenvectors().col(0);
    } else {
        throw geometry_error("no null vector in the fixed eigenspace");
    }
    NumVector q = k * coeffs;
    q /= q.norm();
    Eigen::Index big = 0;
    q.cwiseAbs().maxCoeff(&big);
    q *= std::polar(1.0, -std::arg(q(big)));
    return make_boundary(form, q, tol);
}

}  // namespace chdef::chgeom
