#pragma once

#include "cbrlab/errors.hpp"

namespace cbr {

// Fundamental constants in CGS. Reference values; fixed at construction.
struct PhysicalConstants {
    double hbar = 1.0546e-27;  // erg s
    double k_B = 1.3807e-16;   // erg / K

    void validate() const {
        if (!(hbar > 0.0) || !(k_B > 0.0))
            throw ValidationError("PhysicalConstants: hbar and k_B must be positive");
    }
};

inline const PhysicalConstants& cgs_constants() {
    static const PhysicalConstants c{};
    return c;
}

}  // namespace cbr
