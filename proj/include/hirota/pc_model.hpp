#pragma once

#include <cmath>
#include <complex>

#include "hirota/errors.hpp"
#include "hirota/gamma.hpp"
#include "hirota/mat2.hpp"

namespace hirota {

// First-moment constants of the parabolic cylinder model,
//   beta12 = sqrt(2 pi) e^{i pi/4} e^{-pi nu/2} / (gamma_eff Gamma(-i nu)),
//   beta21 = nu / beta12,
// satisfying beta12 beta21 = nu and |beta12|^2 = -nu.
struct PCCoeffs {
    cx beta12{0.0};
    cx beta21{0.0};
};

inline PCCoeffs pc_coeffs(cx gamma_eff, double nu) {
    if (gamma_eff == cx(0.0)) {
        if (std::abs(nu) > 1e-14) throw DomainError("pc_coeffs: gamma = 0 needs nu = 0");
        return {};
    }
    const double nu_check = -std::log1p(std::norm(gamma_eff)) / (2.0 * PI);
    if (std::abs(nu_check - nu) > 1e-8 * (1.0 + std::abs(nu)))
        throw DomainError("pc_coeffs: nu inconsistent with |gamma_eff|");
    PCCoeffs c;
    c.beta12 = std::sqrt(2.0 * PI) * std::exp(I * PI / 4.0) * std::exp(-PI * nu / 2.0) /
               (gamma_eff * gamma_fn(-I * nu));
    c.beta21 = nu / c.beta12;
    return c;
}

}  // namespace hirota
