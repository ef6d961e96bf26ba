#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "hirota/conjugation.hpp"
#include "hirota/csv.hpp"
#include "hirota/errors.hpp"
#include "hirota/mat2.hpp"
#include "hirota/params.hpp"
#include "hirota/pc_model.hpp"
#include "hirota/scattering.hpp"
#include "hirota/soliton.hpp"

namespace hirota {

struct AsympOptions {
    // sign of the e^{2 i t theta(z_e)} factor inside gamma0 (the matching phase
    // convention); the alternative stays selectable pending phase validation
    int pc_phase_sign = +1;
    // flips the sign of the beta21 M12^2 term in f
    bool f_beta21_flip = false;
};

struct AsymptoticFrame {
    SpaceTimePoint point;
    double z0 = 0.0, z1 = 0.0;
    double nu0 = 0.0, nu1 = 0.0;
    cx T0_z0{1.0}, T0_z1{1.0};
    cx gamma0_z0{0.0}, gamma0_z1{0.0};
    cx f{0.0};
    cx q_sol_part{0.0};
    cx q_asy{0.0};
};

// gamma0 = gamma(z_e) T0(z_e)^{-2} exp(2 i nu log sqrt(8 |alpha + 6 beta z_e| t))
//          exp(sign 2 i t theta(z_e)); every factor is unimodular, so
// |gamma0| = |gamma(z_e)|.
inline cx gamma0_at(cx gamma_ze, cx T0_ze, double nu_e, double theta_ze, double kappa_e, double t,
                    int phase_sign) {
    if (!(t > 0.0)) throw DomainError("gamma0_at: requires t > 0");
    if (!(kappa_e > 1e-12))
        throw DomainError("gamma0_at: |alpha + 6 beta z_e| vanishes (degenerate phase point)");
    const double scale = std::sqrt(8.0 * kappa_e * t);
    return gamma_ze / (T0_ze * T0_ze) * std::exp(2.0 * I * nu_e * std::log(scale)) *
           std::exp(static_cast<double>(phase_sign) * 2.0 * I * t * theta_ze);
}

// One phase point's contribution to f: [b12 M11^2 + b21 M12^2] / sqrt(2 kappa).
// At z0 the phase quadratic opens the other way, so the standard model enters
// through the conjugate-reflected map: coefficients of the conjugated data,
// conjugated back.
inline cx f_contribution(PhasePoint which, cx gamma0, double nu_e, double kappa_e,
                         const Mat2& m_out, const AsympOptions& opt) {
    if (gamma0 == cx(0.0)) return 0.0;
    cx b12, b21;
    if (which == PhasePoint::z1) {
        const PCCoeffs c = pc_coeffs(gamma0, nu_e);
        b12 = c.beta12;
        b21 = c.beta21;
    } else {
        const PCCoeffs c = pc_coeffs(std::conj(gamma0), nu_e);
        b12 = std::conj(c.beta12);
        b21 = std::conj(c.beta21);
    }
    if (opt.f_beta21_flip) b21 = -b21;
    return (b12 * m_out.a11 * m_out.a11 + b21 * m_out.a12 * m_out.a12) /
           std::sqrt(2.0 * kappa_e);
}

struct AsymptoticDecomposition {
    cx q_asy{0.0};
    cx q_sol_part{0.0};
    cx radiation_part{0.0};
    AsymptoticFrame frame;
};

// Theorem-level assembly at one (x,t) in the two-phase-point region:
//   q_asy = q_sol(filtered model, dressed constants) + t^{-1/2} f(x,t).
// The reflection samples may be empty (reflectionless data).
inline AsymptoticDecomposition asymptotic_q(double x, double t, const DiscreteSpectrum& spec,
                                            const ReflectionCoefficient& gamma, const Cone& cone,
                                            const Params& p, const AsympOptions& opt = {}) {
    p.require_beta_positive("asymptotic_q");
    if (!(t > 0.0)) throw DomainError("asymptotic_q: requires t > 0");
    const auto [z0, z1] = stationary_points(x / t, p);
    const bool radiating = !gamma.zs.empty() && gamma.max_abs() > 0.0;

    AsymptoticDecomposition out;
    out.frame.point = {x, t};
    out.frame.z0 = z0;
    out.frame.z1 = z1;

    // cone-filtered spectrum, with collision shifts of the faster solitons and
    // the delta^2 radiation dressing folded into the constants
    const ConeData cd = cone_filter(spec, cone, p);
    DiscreteSpectrum kept = cd.filtered(spec);
    std::vector<cx> overtaken;
    for (std::size_t k : cd.k_plus) overtaken.push_back(spec.pairs[k].zk);
    const DiscreteSpectrum dressed =
        modified_constants(kept, overtaken, z0, z1, radiating ? &gamma : nullptr, +1);

    out.q_sol_part = dressed.empty() ? cx(0.0) : q_sol_at(dressed, x, t, p);

    if (radiating) {
        const cx g0v = gamma.at(z0), g1v = gamma.at(z1);
        out.frame.nu0 = nu_of(g0v);
        out.frame.nu1 = nu_of(g1v);
        const auto split = delta_minus_split(dressed, z0, z1);
        out.frame.T0_z0 = T0_at(PhasePoint::z0, gamma, dressed, split, z0, z1);
        out.frame.T0_z1 = T0_at(PhasePoint::z1, gamma, dressed, split, z0, z1);
        const double kappa1 = std::abs(p.alpha + 6.0 * p.beta * z1);
        const double kappa0 = std::abs(p.alpha + 6.0 * p.beta * z0);
        const double th1 = phase_theta(cx(z1), {x, t}, p).real();
        const double th0 = phase_theta(cx(z0), {x, t}, p).real();
        out.frame.gamma0_z1 =
            gamma0_at(g1v, out.frame.T0_z1, out.frame.nu1, th1, kappa1, t, opt.pc_phase_sign);
        out.frame.gamma0_z0 =
            gamma0_at(g0v, out.frame.T0_z0, out.frame.nu0, th0, kappa0, t, opt.pc_phase_sign);

        Mat2 m1 = Mat2::id(), m0 = Mat2::id();
        if (!dressed.empty()) {
            TriangleSplit tri{split};
            SolitonModel model;
            try {
                model = solve_reflectionless(dressed, tri, x, t, p);
            } catch (const AccuracyError&) {
                model = solve_reflectionless(dressed, stable_split(dressed, x, t, p), x, t, p);
            }
            m1 = model.evaluate_m(cx(z1));
            m0 = model.evaluate_m(cx(z0));
        }
        out.frame.f =
            f_contribution(PhasePoint::z1, out.frame.gamma0_z1, out.frame.nu1, kappa1, m1, opt) +
            f_contribution(PhasePoint::z0, out.frame.gamma0_z0, out.frame.nu0, kappa0, m0, opt);
        out.radiation_part = out.frame.f / std::sqrt(t);
    }

    out.q_asy = out.q_sol_part + out.radiation_part;
    out.frame.q_sol_part = out.q_sol_part;
    out.frame.q_asy = out.q_asy;
    return out;
}

inline void frames_to_csv(const std::string& path, const std::vector<AsymptoticFrame>& frames) {
    CsvTable t;
    t.header = {"x", "t", "z0", "z1", "nu0", "nu1", "re_f", "im_f", "re_qasy", "im_qasy"};
    for (const auto& fr : frames)
        t.rows.push_back({fr.point.x, fr.point.t, fr.z0, fr.z1, fr.nu0, fr.nu1, fr.f.real(),
                          fr.f.imag(), fr.q_asy.real(), fr.q_asy.imag()});
    write_csv(path, t);
}

}  // namespace hirota
