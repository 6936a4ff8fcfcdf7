#pragma once

// Metric quantities on complex hyperbolic space, normalized so that
// cosh^2(d/2) = |<P,Q>|^2 / (<P,P><Q,Q>) (holomorphic curvature -1).

#include <functional>
#include <limits>

#include "form.hpp"

namespace chdef::chgeom {

inline double distance(const HermitianForm& form, const ProjPoint& p, const ProjPoint& q) {
    const double pp = form.self(p.lift), qq = form.self(q.lift);
    if (!(pp < 0.0) || !(qq < 0.0)) throw geometry_error("distance needs interior points");
    // sinh^2(d/2) = <Q',Q'> / -<Q,Q>, Q' the part of Q orthogonal to P; avoids cancellation near d = 0.
    const NumVector perp = q.lift - (form.pair(q.lift, p.lift) / pp) * p.lift;
    const double s2 = form.self(perp) / -qq;
    if (s2 < -1e-10) throw geometry_error("negative sinh^2 in distance: bad form or points");
    return 2.0 * std::asinh(std::sqrt(std::max(s2, 0.0)));
}

inline double busemann(const HermitianForm& form, const BoundaryPoint& base, const ProjPoint& origin,
                       const ProjPoint& z) {
    const Complex zq = form.pair(z.lift, base.lift), oq = form.pair(origin.lift, base.lift);
    const double scale = spectral_norm(form.matrix()) * base.lift.norm();
    if (std::abs(zq) <= 1e-14 * scale * z.lift.norm() || std::abs(oq) <= 1e-14 * scale * origin.lift.norm())
        throw geometry_error("point pairs to zero with the base point");
    const double zz = form.self(z.lift), oo = form.self(origin.lift);
    if (!(zz < 0.0) || !(oo < 0.0)) throw geometry_error("Busemann function needs interior points");
    return std::log(std::norm(zq) / -zz) - std::log(std::norm(oq) / -oo);
}

inline double busemann(const HermitianForm& form, const Horoball& h, const ProjPoint& z) {
    return busemann(form, h.base, h.origin, z);
}

/// Lift Q' of the base with Z in the horoball iff |<Z,Q'>|^2 <= -<Z,Z>.
inline NumVector normalized_base(const HermitianForm& form, const Horoball& h) {
    const Complex oq = form.pair(h.origin.lift, h.base.lift);
    const double ho = std::norm(oq) / -form.self(h.origin.lift);
    if (!(ho > 0.0)) throw geometry_error("horoball origin is not a valid interior point");
    return h.base.lift / std::sqrt(std::exp(h.level) * ho);
}

inline bool horoball_contains(const HermitianForm& form, const Horoball& h, const ProjPoint& z) {
    return busemann(form, h, z) <= h.level;
}

/**
 * Point where the geodesic from x toward the base point meets the horosphere.
 * Along Z(t) = X + t c Q' with c = -<X,Q'>/|<X,Q'>|, the quantity
 * |<Z,Q'>|^2 / -<Z,Z> equals |a|^2 / (-<X,X> + 2 t |a|), a = <X,Q'>.
 */
inline ProjPoint project_to_horosphere(const HermitianForm& form, const Horoball& h, const ProjPoint& x) {
    const NumVector q = normalized_base(form, h);
    const Complex a = form.pair(x.lift, q);
    const double abs_a = std::abs(a);
    if (abs_a == 0.0) throw geometry_error("point pairs to zero with the base point");
    const Complex c = -a / abs_a;
    const double t = (abs_a * abs_a + form.self(x.lift)) / (2.0 * abs_a);
    return {x.lift + t * c * q};
}

/// Point at arclength s from x on the geodesic ray leaving the base point of h.
inline ProjPoint away_from_base(const HermitianForm& form, const Horoball& h, const ProjPoint& x, double s) {
    const NumVector q = normalized_base(form, h);
    const Complex a = form.pair(x.lift, q);
    const double abs_a = std::abs(a);
    if (abs_a == 0.0) throw geometry_error("point pairs to zero with the base point");
    const double t = -form.self(x.lift) * std::expm1(-s) / (2.0 * abs_a);
    return {x.lift + t * (-a / abs_a) * q};
}

struct Orthogeodesic {
    double length = 0.0;  ///< signed; negative when the horoballs overlap
    ProjPoint foot1;      ///< on the boundary of the first horoball
    ProjPoint foot2;
};

/**
 * Common perpendicular of two horoballs.  The perpendicular lies on the
 * geodesic joining the base points; with c = <Q1', Q2'> the signed length
 * is log(|c|^2 / 4) and the feet are Q1' + (2/|c|) Q2'' and (2/|c|) Q1' + Q2''
 * where Q2'' = -Q2' c/|c|.
 */
inline Orthogeodesic orthogeodesic(const HermitianForm& form, const Horoball& h1, const Horoball& h2) {
    const NumVector q1 = normalized_base(form, h1), q2 = normalized_base(form, h2);
    const Complex c = form.pair(q1, q2);
    const double abs_c = std::abs(c);
    if (abs_c <= 1e-12 * q1.norm() * q2.norm() * spectral_norm(form.matrix()))
        throw geometry_error("horoballs share their base point");
    const NumVector q2r = q2 * (-c / abs_c);
    return {std::log(abs_c * abs_c / 4.0), {q1 + (2.0 / abs_c) * q2r}, {(2.0 / abs_c) * q1 + q2r}};
}

inline double orthogeodesic_length(const HermitianForm& form, const Horoball& h1, const Horoball& h2) {
    return orthogeodesic(form, h1, h2).length;
}

namespace detail {

/// Minimum of a convex f on [0, inf); stops early once f <= stop_below.
inline double convex_min_on_ray(const std::function<double(double)>& f, double stop_below) {
    double a = 0.0, fa = f(a);
    if (fa <= stop_below) return fa;
    double step = 1.0, b = step, fb = f(b);
    if (fb <= stop_below) return fb;
    if (fb >= fa) {
        b = a + step;  // minimum in [0, 1]
    } else {
        while (true) {
            double c = b + 2.0 * step, fc = f(c);
            if (fc <= stop_below) return fc;
            if (fc >= fb) {
                b = c;
                break;
            }
            a = b;
            fa = fb;
            b = c;
            fb = fc;
            step *= 2.0;
            if (step > 1e6) return fb;
        }
    }
    // Golden-section search on [a, b].
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, b); ++it) {
        if (f1 <= stop_below) return f1;
        if (f2 <= stop_below) return f2;
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    return std::min({f1, f2, fa});
}

}  // namespace detail

/**
 * Whether the geodesic ray from x away from h1's base meets h2.  x must lie
 * on the horosphere of h1 and the horoballs must be disjoint.
 */
inline bool shadow_contains(const HermitianForm& form, const Horoball& h1, const Horoball& h2, const ProjPoint& x,
                            double on_sphere_tol = 1e-8) {
    if (std::abs(busemann(form, h1, x) - h1.level) > on_sphere_tol)
        throw geometry_error("point is not on the boundary horosphere");
    if (orthogeodesic_length(form, h1, h2) <= 0.0) throw geometry_error("shadow needs disjoint horoballs");
    // Along Z(s) = away_from_base(x, s), <Z,Z> = <X,X> e^{-s} exactly; using that keeps
    // h2's Busemann function accurate where the ray approaches the boundary.
    const NumVector q1 = normalized_base(form, h1), q2 = normalized_base(form, h2);
    const Complex a = form.pair(x.lift, q1);
    const double abs_a = std::abs(a), xx = form.self(x.lift);
    const Complex dir = -a / abs_a;
    auto f = [&](double s) {
        const double t = -xx * std::expm1(-s) / (2.0 * abs_a);
        const Complex zq = form.pair(x.lift + t * dir * q1, q2);
        return std::log(std::norm(zq)) - std::log(-xx) + s;
    };
    return detail::convex_min_on_ray(f, 0.0) <= 0.0;
}

/// Common level s at which two horoballs with the given bases become tangent (bisection).
inline double tangency_level(const HermitianForm& form, const BoundaryPoint& b1, const BoundaryPoint& b2,
                             const ProjPoint& origin, double tol = 1e-13) {
    auto len = [&](double s) { return orthogeodesic_length(form, {b1, origin, s}, {b2, origin, s}); };
    double lo = -1.0, hi = 1.0;
    while (len(lo) <= 0.0) lo *= 2.0;
    while (len(hi) > 0.0) hi *= 2.0;
    while (hi - lo > tol * std::max(1.0, std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        (len(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace chdef::chgeom
