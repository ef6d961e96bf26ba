#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "hirota/errors.hpp"
#include "hirota/mat2.hpp"

namespace hirota {

// Dispersion coefficients of iq_t + alpha(q_xx + 2|q|^2 q) + i beta(q_xxx + 6|q|^2 q_x) = 0.
// Simulation accepts any beta; the asymptotics operations require beta > 0.
struct Params {
    double alpha = 1.0;
    double beta = 1.0;

    void require_beta_positive(const char* who) const {
        if (!(beta > 0.0)) throw DomainError(std::string(who) + ": requires beta > 0");
    }
};

struct SpaceTimePoint {
    double x = 0.0;
    double t = 0.0;
};

// Space-time cone of rays x = x0 + v t, x0 in [x1,x2], v in [v1,v2].
struct Cone {
    double x1 = 0.0, x2 = 0.0;
    double v1 = 0.0, v2 = 0.0;

    Cone() = default;
    Cone(double x1_, double x2_, double v1_, double v2_) : x1(x1_), x2(x2_), v1(v1_), v2(v2_) {
        if (x1 > x2 || v1 > v2) throw DomainError("Cone: requires x1 <= x2 and v1 <= v2");
    }
};

// theta(z) = z*(x/t) + 2 alpha z^2 + 4 beta z^3; the flow phase enters as exp(2 i t theta).
inline cx phase_theta(cx z, const SpaceTimePoint& pt, const Params& p) {
    if (pt.t == 0.0) throw DomainError("phase_theta: t = 0");
    const double xi = pt.x / pt.t;
    return z * (xi + z * (2.0 * p.alpha + z * 4.0 * p.beta));
}

inline cx phase_theta_dz(cx z, double xi, const Params& p) {
    return xi + z * (4.0 * p.alpha + z * 12.0 * p.beta);
}

// 2 i t theta(z) spelled in (x, t) directly; valid for any t including 0.
inline cx two_i_t_theta(cx z, double x, double t, const Params& p) {
    return 2.0 * I * (x * z + t * z * z * (2.0 * p.alpha + 4.0 * p.beta * z));
}

// Real critical points of theta' for xi = x/t, ascending: z0 <= z1.
// z0,1 = (-alpha -+ sqrt(alpha^2 - 3 beta xi)) / (6 beta).
inline std::pair<double, double> stationary_points(double xi, const Params& p) {
    p.require_beta_positive("stationary_points");
    const double disc = p.alpha * p.alpha - 3.0 * p.beta * xi;
    if (!(disc > 0.0))
        throw NoRealPhasePoints("stationary_points: alpha^2 - 3 beta x/t <= 0, no two real phase points");
    const double r = std::sqrt(disc);
    const double z0 = (-p.alpha - r) / (6.0 * p.beta);
    const double z1 = (-p.alpha + r) / (6.0 * p.beta);
    return {z0, z1};
}

// Signed velocity of the 1-soliton envelope peak attached to zk = xi + i eta:
//   v = -4 alpha xi - 4 beta (3 xi^2 - eta^2),
// from the sech argument of the re-derived 1-soliton. Reduces to -4 alpha xi at beta = 0.
inline double soliton_speed(cx zk, const Params& p) {
    const double xi = zk.real(), eta = zk.imag();
    return -4.0 * p.alpha * xi - 4.0 * p.beta * (3.0 * xi * xi - eta * eta);
}

}  // namespace hirota
