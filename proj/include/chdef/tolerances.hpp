#pragma once

#include <cstdlib>
#include <string>

#include "errors.hpp"

namespace chdef {

/// Numeric thresholds.  Every value can be overridden with CHDEF_TOL_<NAME>.
struct Tolerances {
    double null = 1e-8;       ///< |<Q,Q>| <= null * |Q|^2 counts as a null vector
    double eig = 1e-8;        ///< | |lambda| - 1 | beyond this is off the unit circle
    double rank = 1e-8;       ///< singular values <= rank * ||A|| count as zero
    double sig = 1e-8;        ///< Hermitian eigenvalues <= sig * ||J|| count as zero
    double cluster = 1e-3;    ///< eigenvalues closer than this (relative) form one cluster
    double form = 1e-8;       ///< ||A^T J conj(A) - J|| <= form * ||A||^2 ||J||
    double hermitian = 1e-12; ///< ||J - J^*|| <= hermitian * ||J||
    double fixed = 1e-8;      ///< projective deviation below this counts as "same point"
    double level = 1e-8;      ///< Busemann level preservation
    double indeterminate_band = 1e2;  ///< singular values within this factor above the rank cut are "borderline"

    static Tolerances from_env() {
        Tolerances t;
        read("CHDEF_TOL_NULL", t.null);
        read("CHDEF_TOL_EIG", t.eig);
        read("CHDEF_TOL_RANK", t.rank);
        read("CHDEF_TOL_SIG", t.sig);
        read("CHDEF_TOL_CLUSTER", t.cluster);
        read("CHDEF_TOL_FORM", t.form);
        read("CHDEF_TOL_HERMITIAN", t.hermitian);
        read("CHDEF_TOL_FIXED", t.fixed);
        read("CHDEF_TOL_LEVEL", t.level);
        return t;
    }

   private:
    static void read(const char* name, double& slot) {
        const char* v = std::getenv(name);
        if (v == nullptr || *v == '\0') return;
        char* end = nullptr;
        double x = std::strtod(v, &end);
        if (end == v || *end != '\0' || !(x > 0.0)) throw parse_error(std::string("bad value for ") + name + ": '" + v + "'");
        slot = x;
    }
};

}  // namespace chdef
