#pragma once

/**
 * @file figure8.hpp
 * @brief The one-parameter family rho_u of the figure-eight knot group in SU(3,1).
 *
 * Group: <m, n | m w = w n> with w = [n, m^-1] = n m^-1 n^-1 m.
 * Peripheral subgroup: <m, l> with l = n m^-1 n^-1 m^2 n^-1 m^-1 n.
 * The parameter u lives on the unit circle, so every u-bar in the matrices
 * is stored as u^-1.  At u = 1 the representation is the hyperbolic one.
 */

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "representation.hpp"
#include "tolerances.hpp"

namespace chdef::figure8 {

inline constexpr std::string_view kPresentation =
    "gens: m n\n"
    "let w = n m^-1 n^-1 m\n"
    "let l = n m^-1 n^-1 m^2 n^-1 m^-1 n\n"
    "rel: m w = w n\n";

namespace detail {

inline StarLaurent u_pow(int k, Rational c = 1) { return StarLaurent::monomial(c, k); }
inline StarLaurent half() { return StarLaurent(Rational(1, 2)); }

}  // namespace detail

/// Image of the meridian m.
inline RingMatrix meridian_matrix() {
    using detail::u_pow;
    const StarLaurent u = u_pow(1);
    const StarLaurent half = detail::half();
    return RingMatrix{
        {1L, 0L, 1L, half * u - StarLaurent(1L)},
        {0L, 1L, 1L, half * u},
        {0L, 0L, 1L, half * (u + StarLaurent(1L))},
        {0L, 0L, 0L, 1L},
    };
}

/// Image of n.
inline RingMatrix n_matrix() {
    const StarLaurent ubar = detail::u_pow(-1);
    return RingMatrix{
        {1L, 0L, 0L, 0L},
        {StarLaurent(2L) * (StarLaurent(1L) + ubar), 1L, 0L, 0L},
        {2L, 1L, 1L, 0L},
        {1L, 1L, 0L, 1L},
    };
}

/// Hermitian form J_u with H(X, Y) = X^T J_u conj(Y).
inline RingMatrix form_matrix() {
    using detail::u_pow;
    const StarLaurent u = u_pow(1), ubar = u_pow(-1);
    const StarLaurent s = u + ubar;
    const StarLaurent one(1L), two(2L), three(3L), four(4L);
    const StarLaurent a = one + detail::half() * s;
    return RingMatrix{
        {a, -a, one + u, -three - two * s - u_pow(-2)},
        {-a, a, -one - u, one + u},
        {one + ubar, -one - ubar, four + two * s, -four - two * s},
        {-three - two * s - u_pow(2), one + ubar, -four - two * s, four + two * s},
    };
}

struct FigureEightFamily {
    Representation<RingMatrix> rep;
    RingMatrix form;
    Word meridian;
    Word longitude;

    const RingMatrix& M() const { return rep.image(0); }
    const RingMatrix& N() const { return rep.image(1); }
    RingMatrix L() const { return evaluate_word(longitude, rep); }
};

/// Assembles a family from explicit images; with `require_relation` the
/// defining relation must hold exactly or std::logic_error is thrown.
inline FigureEightFamily assemble_family(RingMatrix m, RingMatrix n, RingMatrix form, bool require_relation) {
    Presentation p = parse_presentation(kPresentation);
    Word meridian = parse_word("m", p);
    Word longitude = p.macros.at("l");
    FigureEightFamily fam{Representation<RingMatrix>(p, {std::move(m), std::move(n)}), std::move(form), meridian,
                          longitude};
    if (require_relation && !check_relations(fam.rep).all_hold())
        throw std::logic_error("figure-eight relation fails: matrix transcription is wrong");
    return fam;
}

inline FigureEightFamily build_family() { return assemble_family(meridian_matrix(), n_matrix(), form_matrix(), true); }

/// A^T J_u star(A) == J_u for A = M_u, N_u (in generator order).
inline std::vector<bool> verify_form_invariance(const FigureEightFamily& fam) {
    std::vector<bool> out;
    for (const auto& a : fam.rep.images()) out.push_back(preserves_form(a, fam.form));
    return out;
}

/// -96 - 83(u+u^-1) - 53(u^2+u^-2) - 24(u^3+u^-3) - 7(u^4+u^-4) - (u^5+u^-5).
inline StarLaurent det_expansion() {
    const std::array<long, 6> c{-96, -83, -53, -24, -7, -1};
    StarLaurent p(c[0]);
    for (int k = 1; k <= 5; ++k) p += StarLaurent::monomial(c[static_cast<std::size_t>(k)], k) +
                                      StarLaurent::monomial(c[static_cast<std::size_t>(k)], -k);
    return p;
}

/// -4 (c + 1)^2 (2c + 1)^3 with c = (u + u^-1)/2.
inline StarLaurent det_factored() {
    const StarLaurent c = cosine_poly();
    const StarLaurent a = c + StarLaurent(1L);
    const StarLaurent b = StarLaurent(2L) * c + StarLaurent(1L);
    return StarLaurent(-4L) * a * a * b * b * b;
}

inline bool verify_det_closed_form(const FigureEightFamily& fam) {
    const StarLaurent det = mat_det(fam.form);
    return det == det_expansion() && det == det_factored();
}

inline NumMatrix form_at(const FigureEightFamily& fam, double alpha) { return evaluate(fam.form, alpha); }

/// Inertia (p, q, z) of J_u at u = e^{i alpha}; zero threshold tol.sig * ||J||.
inline Inertia signature_at(const FigureEightFamily& fam, double alpha, const Tolerances& tol = {}) {
    NumMatrix j = form_at(fam, alpha);
    // J_u is Hermitian only up to rounding in the evaluation; symmetrize.
    NumMatrix h = 0.5 * (j + j.adjoint());
    return inertia(h, tol.sig);
}

/// Smallest k with (A - I)^k = 0 exactly, or nullopt if A is not unipotent.
inline std::optional<unsigned> unipotence_degree(const RingMatrix& a) {
    const RingMatrix nil = a - RingMatrix::identity(a.dim());
    RingMatrix p = RingMatrix::identity(a.dim());
    for (unsigned k = 1; k <= a.dim(); ++k) {
        p = p * nil;
        if (p.is_zero()) return k;
    }
    return std::nullopt;
}

inline StarLaurent trace_polynomial(const FigureEightFamily& fam) { return trace(fam.M() * fam.N()); }

inline std::vector<Complex> trace_separation(const FigureEightFamily& fam, const std::vector<double>& alphas) {
    const StarLaurent t = trace_polynomial(fam);
    std::vector<Complex> out;
    out.reserve(alphas.size());
    for (double a : alphas) out.push_back(t.evaluate(a));
    return out;
}

/// Eigenvalues of L_u from its exact characteristic polynomial (4 values, with multiplicity).
inline std::vector<Complex> longitude_eigenvalues(const FigureEightFamily& fam, double alpha, const Tolerances& tol = {}) {
    const auto cp = characteristic_polynomial(fam.L());
    std::vector<Complex> coeffs;
    for (const auto& c : cp) coeffs.push_back(c.evaluate(alpha));
    return expand_clusters(polynomial_root_clusters(coeffs, tol.cluster));
}

/// dim ker(L_u - u I) with singular-value threshold tol.rank * ||L_u||.
inline int longitude_geometric_multiplicity(const FigureEightFamily& fam, double alpha, const Tolerances& tol = {}) {
    NumMatrix l = evaluate(fam.L(), alpha);
    const Complex u = std::polar(1.0, alpha);
    NumMatrix shifted = l - u * NumMatrix::Identity(l.rows(), l.cols());
    return static_cast<int>(null_space(shifted, tol.rank * spectral_norm(l)).basis.cols());
}

struct PeripheralRecord {
    std::vector<Complex> longitude_eigenvalues;
    int geometric_multiplicity_u = 0;
    std::optional<unsigned> meridian_unipotence_degree;
    NumVector fixed_null_lift;  ///< normalized so the largest-modulus entry is 1
    double lift_null_residual = 0.0;  ///< |H(Q,Q)| / |Q|^2
};

/**
 * Peripheral structure at u = e^{i alpha}.  The common fixed vector of M_u
 * and L_u (eigenvalues 1 and u) is only a cusp point when J_u has signature
 * (3,1); other alpha are rejected.
 */
inline PeripheralRecord peripheral_analysis(const FigureEightFamily& fam, double alpha, const Tolerances& tol = {}) {
    if (signature_at(fam, alpha, tol) != Inertia{3, 1, 0})
        throw geometry_error("form is not of signature (3,1) at alpha = " + std::to_string(alpha));
    PeripheralRecord rec;
    rec.longitude_eigenvalues = longitude_eigenvalues(fam, alpha, tol);
    rec.geometric_multiplicity_u = longitude_geometric_multiplicity(fam, alpha, tol);
    rec.meridian_unipotence_degree = unipotence_degree(fam.M());

    const NumMatrix m = evaluate(fam.M(), alpha);
    const NumMatrix l = evaluate(fam.L(), alpha);
    const Complex u = std::polar(1.0, alpha);
    NumMatrix stacked(8, 4);
    stacked.topRows(4) = m - NumMatrix::Identity(4, 4);
    stacked.bottomRows(4) = l - u * NumMatrix::Identity(4, 4);
    const double scale = std::max(spectral_norm(m), spectral_norm(l));
    NullSpace ns = null_space(stacked, tol.rank * scale);
    if (ns.basis.cols() != 1) throw geometry_error("meridian and longitude do not share a unique fixed line");
    NumVector q = ns.basis.col(0);
    Eigen::Index k = 0;
    q.cwiseAbs().maxCoeff(&k);
    q /= q(k);
    const NumMatrix j = form_at(fam, alpha);
    rec.lift_null_residual = std::abs(Complex(q.transpose() * j * q.conjugate())) / q.squaredNorm();
    if (rec.lift_null_residual > tol.null) throw geometry_error("common fixed vector is not null for J_u");
    rec.fixed_null_lift = q;
    return rec;
}

struct SweepRow {
    double alpha = 0.0;
    Complex trace;
    Inertia signature;
    double det_form = 0.0;
    std::vector<Complex> longitude_eigenvalues;
    int geometric_multiplicity_u = 0;
};

inline SweepRow sweep_row(const FigureEightFamily& fam, double alpha, const Tolerances& tol = {}) {
    SweepRow row;
    row.alpha = alpha;
    row.trace = trace_polynomial(fam).evaluate(alpha);
    row.signature = signature_at(fam, alpha, tol);
    row.det_form = mat_det(fam.form).evaluate(alpha).real();
    row.longitude_eigenvalues = longitude_eigenvalues(fam, alpha, tol);
    row.geometric_multiplicity_u = longitude_geometric_multiplicity(fam, alpha, tol);
    return row;
}

}  // namespace chdef::figure8
