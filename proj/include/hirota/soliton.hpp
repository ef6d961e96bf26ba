#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "hirota/errors.hpp"
#include "hirota/mat2.hpp"
#include "hirota/params.hpp"
#include "hirota/quadrature.hpp"
#include "hirota/scattering.hpp"

namespace hirota {

// Pole-column assignment: poles in `upper` carry the upper-triangular residue
// nilpotent (their pole moved to the second column), the rest stay lower.
struct TriangleSplit {
    std::vector<bool> upper;

    static TriangleSplit all_lower(std::size_t n) { return {std::vector<bool>(n, false)}; }
    static TriangleSplit all_upper(std::size_t n) { return {std::vector<bool>(n, true)}; }
};

struct ResidueData {
    std::vector<cx> gamma_k;
};

// gamma_k(x,t) = c_k exp(2 i t theta(z_k)); Re part is -2 Im(z_k) (x - v_k t),
// so it saturates double range for huge |x|.
inline ResidueData residue_gamma(const DiscreteSpectrum& spec, double x, double t,
                                 const Params& p) {
    ResidueData r;
    r.gamma_k.reserve(spec.size());
    for (const auto& pr : spec.pairs) {
        const cx ex = two_i_t_theta(pr.zk, x, t, p);
        if (ex.real() > 690.0)
            throw AccuracyError("residue_gamma: exponent overflow, Re(2it theta) = " +
                                std::to_string(ex.real()) + " at z_k = (" +
                                std::to_string(pr.zk.real()) + "," + std::to_string(pr.zk.imag()) +
                                ")");
        r.gamma_k.push_back(pr.ck * std::exp(ex));
    }
    return r;
}

// Partial product of the trace formula over a pole subset:
// s_{11,subset}(z) = prod (z - z_k)/(z - z_k*).
inline cx trace_s11(cx z, const DiscreteSpectrum& spec, const std::vector<bool>& subset) {
    cx prod = 1.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (!subset[k]) continue;
        const cx zk = spec.pairs[k].zk;
        if (std::abs(z - std::conj(zk)) < 1e-14) throw DomainError("trace_s11: pole hit");
        prod *= (z - zk) / (z - std::conj(zk));
    }
    return prod;
}

inline cx trace_s11_full(cx z, const DiscreteSpectrum& spec) {
    return trace_s11(z, spec, std::vector<bool>(spec.size(), true));
}

// d/dz of s_{11,subset} at a member zero z_j (where the product vanishes).
inline cx trace_s11_prime_at_zero(std::size_t j, const DiscreteSpectrum& spec,
                                  const std::vector<bool>& subset) {
    const cx zj = spec.pairs[j].zk;
    cx prod = 1.0 / (zj - std::conj(zj));
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (!subset[k] || k == j) continue;
        const cx zk = spec.pairs[k].zk;
        prod *= (zj - zk) / (zj - std::conj(zk));
    }
    return prod;
}

// Solved reflectionless model at one (x,t): residue matrices at each z_k and
// its mirror at z_k*, ready for evaluation anywhere off the poles.
struct SolitonModel {
    DiscreteSpectrum spectrum;
    TriangleSplit split;
    std::vector<Mat2> res_upper_half;  // residue matrix at z_k
    std::vector<Mat2> res_lower_half;  // residue matrix at z_k*
    double condition_estimate = 1.0;

    Mat2 evaluate_m(cx z) const {
        Mat2 m = Mat2::id();
        for (std::size_t k = 0; k < spectrum.size(); ++k) {
            const cx zk = spectrum.pairs[k].zk;
            if (std::abs(z - zk) < 1e-13 || std::abs(z - std::conj(zk)) < 1e-13)
                throw DomainError("evaluate_m: z coincides with a pole");
            m = m + (1.0 / (z - zk)) * res_upper_half[k];
            m = m + (1.0 / (z - std::conj(zk))) * res_lower_half[k];
        }
        return m;
    }

    // q = 2i * (coefficient of 1/z in m_12)
    cx q_sol() const {
        cx acc = 0.0;
        for (std::size_t k = 0; k < spectrum.size(); ++k)
            acc += res_upper_half[k].a12 + res_lower_half[k].a12;
        return 2.0 * I * acc;
    }
};

namespace detail {

inline void lu_solve_inplace(std::vector<double>& a, std::vector<double>& rhs, std::size_t n,
                             double* cond_estimate) {
    std::vector<std::size_t> piv(n);
    double max_piv = 0.0, min_piv = std::numeric_limits<double>::infinity();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        double best_abs = std::abs(a[col * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::abs(a[r * n + col]);
            if (v > best_abs) {
                best_abs = v;
                best = r;
            }
        }
        if (best_abs < 1e-300)
            throw SolitonSystemSingular("reflectionless system is singular (zero pivot)");
        max_piv = std::max(max_piv, best_abs);
        min_piv = std::min(min_piv, best_abs);
        if (best != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[best * n + c], a[col * n + c]);
            std::swap(rhs[best], rhs[col]);
        }
        const double d = a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / d;
            if (f == 0.0) continue;
            a[r * n + col] = 0.0;
            for (std::size_t c = col + 1; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            rhs[r] -= f * rhs[col];
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        double s = rhs[col];
        for (std::size_t c = col + 1; c < n; ++c) s -= a[col * n + c] * rhs[c];
        rhs[col] = s / a[col * n + col];
    }
    if (cond_estimate) *cond_estimate = max_piv / min_piv;
}

}  // namespace detail

// Assemble and solve the residue linear system of the partial-fraction ansatz.
// Unknowns per pole: (zeta_k, eta_k) for lower poles, (a_k, b_k) for upper
// ones; the conjugate coupling is handled by realifying to a 4N x 4N system.
inline SolitonModel solve_reflectionless(const DiscreteSpectrum& spec, const TriangleSplit& split,
                                         double x, double t, const Params& p) {
    const std::size_t n = spec.size();
    if (split.upper.size() != n) throw InputError("solve_reflectionless: split size mismatch");
    SolitonModel model;
    model.spectrum = spec;
    model.split = split;
    if (n == 0) return model;

    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (std::abs(spec.pairs[a].zk - spec.pairs[b].zk) < 1e-12)
                throw DomainError("solve_reflectionless: poles must be distinct");

    // residue coefficients gamma_k^triangle per the split
    const ResidueData base = residue_gamma(spec, x, t, p);
    std::vector<cx> g(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!split.upper[k]) {
            g[k] = trace_s11(spec.pairs[k].zk, spec, split.upper) *
                   trace_s11(spec.pairs[k].zk, spec, split.upper) * base.gamma_k[k];
        } else {
            const cx sp = trace_s11_prime_at_zero(k, spec, split.upper);
            const cx ex = -two_i_t_theta(spec.pairs[k].zk, x, t, p);
            if (ex.real() > 690.0)
                throw AccuracyError("solve_reflectionless: exponent overflow on upper pole");
            g[k] = std::exp(ex) / (spec.pairs[k].ck * sp * sp);
        }
    }

    // w - B w - C conj(w) = rhs over w = (u_k, v_k)_k
    const std::size_t dim = 2 * n;
    std::vector<cx> B(dim * dim, cx(0.0)), C(dim * dim, cx(0.0)), rhs(dim, cx(0.0));
    auto idxU = [&](std::size_t k) { return 2 * k; };
    auto idxV = [&](std::size_t k) { return 2 * k + 1; };
    for (std::size_t j = 0; j < n; ++j) {
        const cx zj = spec.pairs[j].zk;
        if (!split.upper[j]) {
            // zeta_j = g_j * m12(z_j);  eta_j = g_j * m22(z_j)
            for (std::size_t k = 0; k < n; ++k) {
                const cx zk = spec.pairs[k].zk;
                if (!split.upper[k]) {
                    C[idxU(j) * dim + idxV(k)] += -g[j] / (zj - std::conj(zk));  // -eta_k*
                    C[idxV(j) * dim + idxU(k)] += g[j] / (zj - std::conj(zk));   // +zeta_k*
                } else {
                    B[idxU(j) * dim + idxU(k)] += g[j] / (zj - zk);  // +a_k
                    B[idxV(j) * dim + idxV(k)] += g[j] / (zj - zk);  // +b_k
                }
            }
            rhs[idxV(j)] = g[j];
        } else {
            // a_j = g_j * m11(z_j);  b_j = g_j * m21(z_j)
            for (std::size_t k = 0; k < n; ++k) {
                const cx zk = spec.pairs[k].zk;
                if (!split.upper[k]) {
                    B[idxU(j) * dim + idxU(k)] += g[j] / (zj - zk);  // +zeta_k
                    B[idxV(j) * dim + idxV(k)] += g[j] / (zj - zk);  // +eta_k
                } else {
                    C[idxU(j) * dim + idxV(k)] += g[j] / (zj - std::conj(zk));   // +b_k*
                    C[idxV(j) * dim + idxU(k)] += -g[j] / (zj - std::conj(zk));  // -a_k*
                }
            }
            rhs[idxU(j)] = g[j];
        }
    }

    // realify: [[I - ReB - ReC, ImB - ImC], [-ImB - ImC, I - ReB + ReC]]
    const std::size_t rn = 2 * dim;
    std::vector<double> A(rn * rn, 0.0), b(rn, 0.0);
    for (std::size_t r = 0; r < dim; ++r) {
        A[r * rn + r] += 1.0;
        A[(r + dim) * rn + (r + dim)] += 1.0;
        for (std::size_t c = 0; c < dim; ++c) {
            const cx Brc = B[r * dim + c], Crc = C[r * dim + c];
            A[r * rn + c] += -Brc.real() - Crc.real();
            A[r * rn + (c + dim)] += Brc.imag() - Crc.imag();
            A[(r + dim) * rn + c] += -Brc.imag() - Crc.imag();
            A[(r + dim) * rn + (c + dim)] += -Brc.real() + Crc.real();
        }
        b[r] = rhs[r].real();
        b[r + dim] = rhs[r].imag();
    }
    detail::lu_solve_inplace(A, b, rn, &model.condition_estimate);

    model.res_upper_half.resize(n);
    model.res_lower_half.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cx u(b[idxU(k)], b[idxU(k) + dim]);
        const cx v(b[idxV(k)], b[idxV(k) + dim]);
        if (!split.upper[k]) {
            model.res_upper_half[k] = {u, 0.0, v, 0.0};                          // [[zeta,0],[eta,0]]
            model.res_lower_half[k] = {0.0, -std::conj(v), 0.0, std::conj(u)};   // [[0,-eta*],[0,zeta*]]
        } else {
            model.res_upper_half[k] = {0.0, u, 0.0, v};                          // [[0,a],[0,b]]
            model.res_lower_half[k] = {std::conj(v), 0.0, -std::conj(u), 0.0};   // [[b*,0],[-a*,0]]
        }
    }
    return model;
}

// Max-norm mismatch of the residue conditions, recomputed from the solved model.
inline double residue_residual(const SolitonModel& model, double x, double t, const Params& p) {
    const std::size_t n = model.spectrum.size();
    if (n == 0) return 0.0;
    const ResidueData base = residue_gamma(model.spectrum, x, t, p);
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const cx zj = model.spectrum.pairs[j].zk;
        // regular part of m at z_j: drop this pole's own singular term
        Mat2 m = Mat2::id();
        for (std::size_t k = 0; k < n; ++k) {
            const cx zk = model.spectrum.pairs[k].zk;
            if (k != j) m = m + (1.0 / (zj - zk)) * model.res_upper_half[k];
            m = m + (1.0 / (zj - std::conj(zk))) * model.res_lower_half[k];
        }
        cx g;
        Mat2 expect;
        if (!model.split.upper[j]) {
            const cx s = trace_s11(zj, model.spectrum, model.split.upper);
            g = s * s * base.gamma_k[j];
            expect = {g * m.a12, 0.0, g * m.a22, 0.0};
        } else {
            const cx sp = trace_s11_prime_at_zero(j, model.spectrum, model.split.upper);
            g = std::exp(-two_i_t_theta(zj, x, t, p)) / (model.spectrum.pairs[j].ck * sp * sp);
            expect = {0.0, g * m.a11, 0.0, g * m.a21};
        }
        worst = std::max(worst, (expect - model.res_upper_half[j]).norm_max());
    }
    return worst;
}

// Split that keeps every residue coefficient bounded at this (x,t): poles whose
// lower-triangular gamma_k would grow get moved to the upper column. q_sol is
// split-invariant, so evaluators may choose this freely.
inline TriangleSplit stable_split(const DiscreteSpectrum& spec, double x, double t,
                                  const Params& p) {
    TriangleSplit s = TriangleSplit::all_lower(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k)
        if (two_i_t_theta(spec.pairs[k].zk, x, t, p).real() > 0.0) s.upper[k] = true;
    return s;
}

inline cx q_sol_at(const DiscreteSpectrum& spec, double x, double t, const Params& p) {
    return solve_reflectionless(spec, stable_split(spec, x, t, p), x, t, p).q_sol();
}

// --- cone filtering ---

struct ConeData {
    Cone cone;
    std::vector<std::size_t> k_in;     // speeds inside [v1, v2]
    std::vector<std::size_t> k_plus;   // faster than the cone
    std::vector<std::size_t> k_minus;  // slower than the cone
    double mu = std::numeric_limits<double>::infinity();

    DiscreteSpectrum filtered(const DiscreteSpectrum& spec) const {
        DiscreteSpectrum out;
        for (std::size_t k : k_in) out.pairs.push_back(spec.pairs[k]);
        return out;
    }
};

namespace detail {
// distance from xi_k to { xi : v1 <= speed(xi + i eta_k) <= v2 }
inline double speed_window_distance(double xi_k, double eta_k, double v1, double v2,
                                    const Params& p) {
    // speed(xi) = -12 beta xi^2 - 4 alpha xi + 4 beta eta^2, a downward parabola
    const double A = -12.0 * p.beta, Bc = -4.0 * p.alpha, Cc = 4.0 * p.beta * eta_k * eta_k;
    auto roots = [&](double level, double& lo, double& hi) {
        const double disc = Bc * Bc - 4.0 * A * (Cc - level);
        if (disc < 0.0) return false;
        const double r = std::sqrt(disc);
        lo = (-Bc + r) / (2.0 * A);  // A < 0 flips the order
        hi = (-Bc - r) / (2.0 * A);
        return true;
    };
    double lo1, hi1;
    if (!roots(v1, lo1, hi1)) {
        // the pole's speed curve never reaches v1: invert the window edge to
        // first order through the local speed slope instead
        const double slope = std::abs(-4.0 * p.alpha - 24.0 * p.beta * xi_k);
        const double vk = soliton_speed(cx(xi_k, eta_k), p);
        const double dv = std::min(std::abs(vk - v1), std::abs(vk - v2));
        return dv / std::max(slope, 1e-9);
    }
    // {speed >= v1} = [lo1, hi1]; subtract the open middle {speed > v2} if present
    double lo2, hi2;
    std::vector<std::pair<double, double>> segs;
    if (roots(v2, lo2, hi2)) {
        if (lo2 > lo1) segs.push_back({lo1, lo2});
        if (hi2 < hi1) segs.push_back({hi2, hi1});
    } else {
        segs.push_back({lo1, hi1});
    }
    double d = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : segs) {
        if (xi_k < a)
            d = std::min(d, a - xi_k);
        else if (xi_k > b)
            d = std::min(d, xi_k - b);
        else
            d = 0.0;
    }
    return d;
}
}  // namespace detail

// Partition the spectrum by soliton speed against the cone's velocity window
// and compute mu = min over excluded poles of Im z_k * dist(Re z_k, I_k).
inline ConeData cone_filter(const DiscreteSpectrum& spec, const Cone& cone, const Params& p) {
    p.require_beta_positive("cone_filter");
    ConeData cd;
    cd.cone = cone;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const cx zk = spec.pairs[k].zk;
        const double v = soliton_speed(zk, p);
        if (v >= cone.v1 && v <= cone.v2) {
            cd.k_in.push_back(k);
        } else {
            if (v > cone.v2)
                cd.k_plus.push_back(k);
            else
                cd.k_minus.push_back(k);
            const double d =
                detail::speed_window_distance(zk.real(), zk.imag(), cone.v1, cone.v2, p);
            cd.mu = std::min(cd.mu, zk.imag() * d);
        }
    }
    return cd;
}

// c_j' = c_j * prod_n ((z_j - z_n)/(z_j - z_n*))^2
//            * exp[ sign/(pi i) * integral_I log(1+|gamma|^2)/(zeta - z_j) dzeta ],
// the collision phase shifts of dropped poles plus the radiation dressing.
inline DiscreteSpectrum modified_constants(const DiscreteSpectrum& kept,
                                           const std::vector<cx>& dressing_poles, double I_lo,
                                           double I_hi, const ReflectionCoefficient* gamma,
                                           int sign) {
    DiscreteSpectrum out = kept;
    const bool have_radiation = gamma && !gamma->zs.empty() && gamma->max_abs() > 0.0;
    for (auto& pr : out.pairs) {
        const cx zj = pr.zk;
        cx factor = 1.0;
        for (const cx& zn : dressing_poles) {
            const cx blaschke = (zj - zn) / (zj - std::conj(zn));
            factor *= blaschke * blaschke;
        }
        if (have_radiation && I_hi > I_lo) {
            if (zj.imag() < 1e-6)
                throw AccuracyError("modified_constants: pole too close to the real axis");
            const cx integral = integrate(
                [&](double s) {
                    const double g2 = std::norm(gamma->at(s));
                    return cx(std::log1p(g2)) / (cx(s) - zj);
                },
                I_lo, I_hi, 1e-10);
            factor *= std::exp(static_cast<double>(sign) / (PI * I) * integral);
        }
        pr.ck *= factor;
    }
    return out;
}

}  // namespace hirota
