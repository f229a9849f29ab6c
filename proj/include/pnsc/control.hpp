#pragma once

#include "pnsc/error.hpp"

#include <cmath>

namespace pnsc {

struct SeriesControl {
    int max_terms = 400;
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;

    void validate() const {
        if (max_terms < 1 || !(abs_tol > 0) || !(rel_tol > 0) || !std::isfinite(abs_tol) ||
            !std::isfinite(rel_tol))
            throw DomainError("SeriesControl: max_terms must be >= 1 and tolerances finite and positive");
    }
};

struct QuadControl {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    int max_subdivisions = 2000;
    bool oscillatory_split = true;

    void validate() const {
        if (max_subdivisions < 1 || !(abs_tol > 0) || !(rel_tol > 0))
            throw DomainError("QuadControl: max_subdivisions must be >= 1 and tolerances positive");
    }
};

}  // namespace pnsc
