#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "hirota/errors.hpp"
#include "hirota/mat2.hpp"
#include "hirota/quadrature.hpp"
#include "hirota/scattering.hpp"
#include "hirota/soliton.hpp"

namespace hirota {

// nu(z) = -(1/2pi) log(1 + |gamma(z)|^2); always <= 0, zero iff gamma = 0.
inline double nu_of(cx gamma_value) {
    return -std::log1p(std::norm(gamma_value)) / (2.0 * PI);
}

// delta(z) = exp[ (1/2pi i) int_{z0}^{z1} log(1+|gamma(s)|^2)/(s-z) ds ],
// the scalar solving the jump delta+ = delta- (1+|gamma|^2) on (z0,z1).
inline cx delta_at(cx z, const ReflectionCoefficient& gamma, double z0, double z1,
                   double abstol = 1e-10) {
    if (z.imag() == 0.0 && z.real() >= z0 && z.real() <= z1)
        throw DomainError("delta_at: z on the jump interval");
    const double dist = (z.real() < z0)   ? std::abs(z - cx(z0))
                        : (z.real() > z1) ? std::abs(z - cx(z1))
                                          : std::abs(z.imag());
    if (dist < 1e-7)
        throw AccuracyError("delta_at: z within quadrature resolution of [z0,z1]");
    const cx integral = integrate(
        [&](double s) { return cx(std::log1p(std::norm(gamma.at(s)))) / (cx(s) - z); }, z0, z1,
        abstol);
    return std::exp(integral / (2.0 * PI * I));
}

// T(z) = prod_{k in split} (z - z_k*)/(z - z_k) * delta(z). The split is the
// index set Delta^- of poles with Re z_k inside (z0, z1).
inline std::vector<bool> delta_minus_split(const DiscreteSpectrum& spec, double z0, double z1) {
    std::vector<bool> in(spec.size(), false);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double re = spec.pairs[k].zk.real();
        in[k] = (re > z0 && re < z1);
    }
    return in;
}

inline cx T_of(cx z, const ReflectionCoefficient& gamma, const DiscreteSpectrum& spec,
               const std::vector<bool>& split, double z0, double z1) {
    cx prod = 1.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (!split[k]) continue;
        const cx zk = spec.pairs[k].zk;
        if (std::abs(z - zk) < 1e-13) throw DomainError("T_of: pole hit at z_k");
        prod *= (z - std::conj(zk)) / (z - zk);
    }
    return prod * delta_at(z, gamma, z0, z1);
}

enum class PhasePoint { z0, z1 };

// Regularized endpoint value T0(z_e): the Blaschke part times exp(i beta+-),
// where beta+- keeps only the removable part of the Cauchy integral at the
// endpoint; the split-off (z - z_e)^{i nu} oscillation is matched into the
// local model instead. The chi cutoff covers one unit into the interval.
inline cx T0_at(PhasePoint which, const ReflectionCoefficient& gamma, const DiscreteSpectrum& spec,
                const std::vector<bool>& split, double z0, double z1, double abstol = 1e-10) {
    const double ze = (which == PhasePoint::z1) ? z1 : z0;
    auto nu_at = [&](double s) { return nu_of(gamma.at(s)); };
    const double nu_e = nu_at(ze);

    cx beta = 0.0;
    if (which == PhasePoint::z1) {
        const double cut = std::max(z0, z1 - 1.0);
        if (cut > z0)
            beta += integrate([&](double s) { return cx(nu_at(s) / (s - z1)); }, z0, cut, abstol);
        beta += integrate([&](double s) { return cx((nu_at(s) - nu_e) / (s - z1)); }, cut, z1,
                          abstol);
    } else {
        const double cut = std::min(z1, z0 + 1.0);
        beta += integrate([&](double s) { return cx((nu_at(s) - nu_e) / (s - z0)); }, z0, cut,
                          abstol);
        if (cut < z1)
            beta += integrate([&](double s) { return cx(nu_at(s) / (s - z0)); }, cut, z1, abstol);
    }

    cx prod = 1.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (!split[k]) continue;
        const cx zk = spec.pairs[k].zk;
        prod *= (ze - std::conj(zk)) / (ze - zk);
    }
    return prod * std::exp(I * beta);
}

// nu at both endpoints plus the delta evaluator, bundled for frame assembly.
struct NuDelta {
    double nu0 = 0.0;
    double nu1 = 0.0;
    std::function<cx(cx)> delta;
};

inline NuDelta make_nu_delta(const ReflectionCoefficient& gamma, double z0, double z1) {
    NuDelta nd;
    nd.nu0 = nu_of(gamma.at(z0));
    nd.nu1 = nu_of(gamma.at(z1));
    nd.delta = [gamma, z0, z1](cx z) { return delta_at(z, gamma, z0, z1); };
    return nd;
}

}  // namespace hirota
