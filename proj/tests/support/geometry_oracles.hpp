#pragma once

// Independent reference computations for the geometry layer.  Each one uses
// only the distance function or raw pairings, never the closed forms under test.

#include <cmath>
#include <random>

#include "chdef/chgeom/geometry.hpp"

namespace chdef::oracle {

using chgeom::BoundaryPoint;
using chgeom::HermitianForm;
using chgeom::Horoball;
using chgeom::ProjPoint;

/// Arc length of the projective segment between phase-aligned lifts (a geodesic),
/// by composite Simpson on ds^2 = 4 (|<dZ,Z>|^2 - <Z,Z><dZ,dZ>) / <Z,Z>^2.
inline double arc_length(const HermitianForm& f, const NumVector& p, const NumVector& q0, int intervals = 4000) {
    const Complex ph = f.pair(q0, p);
    const NumVector q = q0 * (-std::conj(ph) / std::abs(ph));
    const NumVector dz = q - p;
    auto speed = [&](double t) {
        const NumVector z = p + t * dz;
        const double zz = f.self(z);
        const double num = std::norm(f.pair(dz, z)) - zz * f.self(dz);
        return 2.0 * std::sqrt(std::max(num, 0.0)) / std::abs(zz);
    };
    const double h = 1.0 / intervals;
    double s = speed(0.0) + speed(1.0);
    for (int k = 1; k < intervals; ++k) s += (k % 2 ? 4.0 : 2.0) * speed(k * h);
    return s * h / 3.0;
}

/// d(z, r) - d(o, r) for r far out on the ray from o to q, with one Richardson step.
inline double busemann_limit(const HermitianForm& f, const NumVector& q, const NumVector& o, const NumVector& z) {
    const Complex ph = f.pair(q, o);
    const NumVector b = q * (-std::conj(ph) / std::abs(ph)) / q.norm() * o.norm();
    auto at = [&](double s) {
        const ProjPoint r{o + s * b};
        return chgeom::distance(f, {z}, r) - chgeom::distance(f, {o}, r);
    };
    const double s = 2e4;
    return 2.0 * at(2.0 * s) - at(s);
}

/**
 * Signed gap between two horoballs measured along the geodesic joining their
 * base points, Z(t) = e^{t/2} a + e^{-t/2} b (unit speed).  Each horosphere
 * crossing is found by bisection on membership.
 */
inline double geodesic_crossing_gap(const HermitianForm& f, const Horoball& h1, const Horoball& h2,
                                    ProjPoint* x1 = nullptr, ProjPoint* x2 = nullptr) {
    const NumVector a = h1.base.lift / h1.base.lift.norm();
    const Complex ph = f.pair(h2.base.lift, a);
    const NumVector b = h2.base.lift * (-std::conj(ph) / std::abs(ph)) / h2.base.lift.norm();
    auto z = [&](double t) { return ProjPoint{std::exp(t / 2) * a + std::exp(-t / 2) * b}; };
    auto cross = [&](const Horoball& h, bool inside_at_plus) {
        auto plus_side = [&](double t) { return (chgeom::busemann(f, h, z(t)) <= h.level) == inside_at_plus; };
        // Bracket the single crossing by unit steps from t = 0, then bisect.
        double lo = 0.0, hi = 0.0;
        if (plus_side(0.0))
            while (plus_side(lo)) lo -= 1.0;
        else
            while (!plus_side(hi)) hi += 1.0;
        if (lo == 0.0) lo = hi - 1.0;
        if (hi == 0.0) hi = lo + 1.0;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            (plus_side(mid) ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double t1 = cross(h1, true), t2 = cross(h2, false);
    if (x1) *x1 = z(t1);
    if (x2) *x2 = z(t2);
    return t1 - t2;
}

}  // namespace chdef::oracle
