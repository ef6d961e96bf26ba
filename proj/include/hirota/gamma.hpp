#pragma once

#include <cmath>
#include <complex>

#include "hirota/errors.hpp"
#include "hirota/mat2.hpp"

namespace hirota {

namespace detail {
// Lanczos g = 607/128, 15 terms (Godfrey's coefficient set).
inline constexpr double lanczos_g = 4.7421875;
inline constexpr double lanczos_c[15] = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5};

inline cx lanczos_log_gamma_core(cx z) {
    // valid for Re z >= 0.5
    cx acc = lanczos_c[0];
    for (int k = 1; k < 15; ++k) acc += lanczos_c[k] / (z - 1.0 + static_cast<double>(k));
    const cx t = z - 0.5 + lanczos_g;
    return 0.5 * std::log(2.0 * PI) + (z - 0.5) * std::log(t) - t + std::log(acc);
}
}  // namespace detail

// Principal branch of log Gamma(z); reflection for Re z < 0.5.
inline cx log_gamma(cx z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw DomainError("log_gamma: pole at non-positive integer");
    if (z.real() < 0.5) {
        // log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1-z)
        return std::log(PI) - std::log(std::sin(PI * z)) - detail::lanczos_log_gamma_core(1.0 - z);
    }
    return detail::lanczos_log_gamma_core(z);
}

inline cx gamma_fn(cx z) { return std::exp(log_gamma(z)); }

}  // namespace hirota
