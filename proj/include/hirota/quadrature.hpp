#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include "hirota/errors.hpp"
#include "hirota/mat2.hpp"

namespace hirota {

namespace detail {
// 15-point Kronrod nodes on [-1,1] and weights; odd indices form the embedded 7-point Gauss rule.
inline constexpr double gk_x[15] = {
    -0.99145537112081263921, -0.94910791234275852453, -0.86486442335976907279,
    -0.74153118559939443986, -0.58608723546769113029, -0.40584515137739716691,
    -0.20778495500789846760, 0.0,
    0.20778495500789846760,  0.40584515137739716691,  0.58608723546769113029,
    0.74153118559939443986,  0.86486442335976907279,  0.94910791234275852453,
    0.99145537112081263921};
inline constexpr double gk_wk[15] = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801, 0.20443294007529889241,
    0.19035057806478540991, 0.16900472663926790283, 0.14065325971552591875,
    0.10479001032225018384, 0.06309209262997855329, 0.02293532201052922496};
inline constexpr double gk_wg[7] = {
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776, 0.38183005050511894495, 0.27970539148927666790,
    0.12948496616886969327};

template <typename F>
inline void gk15(const F& f, double a, double b, cx& k15, double& err) {
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    cx sk = 0.0, sg = 0.0;
    for (int i = 0; i < 15; ++i) {
        const cx fv = f(c + h * gk_x[i]);
        sk += gk_wk[i] * fv;
        if (i % 2 == 1) sg += gk_wg[i / 2] * fv;
    }
    k15 = h * sk;
    err = std::abs(h * (sk - sg));
}

template <typename F>
inline cx quad_rec(const F& f, double a, double b, double abstol, int depth) {
    cx k15;
    double err;
    gk15(f, a, b, k15, err);
    if (err <= abstol || depth <= 0) {
        if (err > abstol && depth <= 0)
            throw AccuracyError("integrate: subdivision limit reached, residual " + std::to_string(err));
        return k15;
    }
    const double c = 0.5 * (a + b);
    return quad_rec(f, a, c, 0.5 * abstol, depth - 1) + quad_rec(f, c, b, 0.5 * abstol, depth - 1);
}
}  // namespace detail

// Adaptive Gauss-Kronrod to absolute tolerance. f is complex-valued on the real interval [a,b].
template <typename F>
inline cx integrate(const F& f, double a, double b, double abstol = 1e-10, int max_depth = 48) {
    if (a == b) return 0.0;
    return detail::quad_rec(f, a, b, abstol, max_depth);
}

}  // namespace hirota
