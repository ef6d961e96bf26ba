#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "hirota/csv.hpp"
#include "hirota/errors.hpp"
#include "hirota/fft.hpp"
#include "hirota/grid.hpp"
#include "hirota/mat2.hpp"
#include "hirota/params.hpp"

namespace hirota {

struct SimConfig {
    double half_width = 64.0;   // periodic domain [-L, L)
    std::size_t modes = 1024;   // power of two, >= 256
    double dt = 1e-3;
    double t_end = 1.0;
    double dealias = 2.0 / 3.0;

    void validate() const {
        if (modes < 256 || (modes & (modes - 1)) != 0)
            throw InputError("SimConfig: modes must be a power of two >= 256");
        if (!(dt > 0.0) || !(t_end >= 0.0) || !(half_width > 0.0))
            throw InputError("SimConfig: dt, t_end, half_width must be positive");
        if (!(dealias > 0.0 && dealias <= 1.0)) throw InputError("SimConfig: dealias in (0,1]");
    }

    UniformGrid grid() const {
        return {-half_width, 2.0 * half_width / static_cast<double>(modes), modes};
    }
};

struct FieldState {
    double t = 0.0;
    std::vector<cx> q;
};

struct EvolveResult {
    FieldState final;
    std::vector<FieldState> snapshots;
    double boundary_contamination = 0.0;            // max over checks of edge/peak
    std::vector<std::array<cx, 3>> conserved_series;  // (I1,I2,I3) at snapshot times
    std::vector<double> conserved_times;
};

namespace detail {

inline std::vector<double> wavenumbers(const SimConfig& cfg) {
    const std::size_t m = cfg.modes;
    std::vector<double> k(m);
    const double dk = PI / cfg.half_width;
    for (std::size_t j = 0; j < m; ++j) {
        const double idx = (j <= m / 2) ? static_cast<double>(j)
                                        : static_cast<double>(j) - static_cast<double>(m);
        k[j] = dk * idx;
    }
    return k;
}

}  // namespace detail

// First three conserved quantities, spectral derivatives and trapezoid (= plain
// sum on the periodic grid):
//   I1 = -1/2 int i q q* dx
//   I2 = -1/4 int q q_x* dx
//   I3 =  1/8 int i q [ q (q*)^2 + q_xx* ] dx
inline std::array<cx, 3> conserved_quantities(const FieldState& st, const SimConfig& cfg) {
    cfg.validate();
    const std::size_t m = cfg.modes;
    if (st.q.size() != m) throw InputError("conserved_quantities: field size mismatch");
    const auto k = detail::wavenumbers(cfg);
    Fft fft(m);
    std::vector<cx> qh = st.q;
    fft.forward(qh);
    std::vector<cx> qx(m), qxx(m);
    for (std::size_t j = 0; j < m; ++j) {
        qx[j] = I * k[j] * qh[j];
        qxx[j] = -k[j] * k[j] * qh[j];
    }
    fft.inverse(qx);
    fft.inverse(qxx);
    const double h = cfg.grid().h;
    cx i1 = 0.0, i2 = 0.0, i3 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const cx q = st.q[j];
        i1 += I * q * std::conj(q);
        i2 += q * std::conj(qx[j]);
        i3 += I * q * (q * std::conj(q) * std::conj(q) + std::conj(qxx[j]));
    }
    return {-0.5 * h * i1, -0.25 * h * i2, 0.125 * h * i3};
}

// Integrating-factor RK4 for q_t = i alpha q_xx - beta q_xxx + 2 i alpha |q|^2 q - 6 beta |q|^2 q_x.
// The linear symbol L(k) = i(beta k^3 - alpha k^2) is applied exactly; the
// nonlinear terms are stepped in the interaction picture with 2/3-rule masks.
inline EvolveResult evolve(const FieldState& q0, const SimConfig& cfg, const Params& p,
                           const std::vector<double>& snapshot_times = {}) {
    cfg.validate();
    const std::size_t m = cfg.modes;
    if (q0.q.size() != m) throw InputError("evolve: field size mismatch");

    const auto k = detail::wavenumbers(cfg);
    const double kmax_kept = PI / cfg.half_width * (static_cast<double>(m) / 2.0) * cfg.dealias;
    double peak0 = 0.0;
    for (const auto& v : q0.q) peak0 = std::max(peak0, std::abs(v));
    // frozen-coefficient rotation rate of the nonlinear terms; RK4 wants it under ~2.8
    const double nl_rate = cfg.dt * (2.0 * std::abs(p.alpha) * peak0 * peak0 +
                                     6.0 * std::abs(p.beta) * peak0 * peak0 * kmax_kept);
    if (nl_rate > 2.8)
        throw InputError("evolve: dt too large for the nonlinear rotation rate (" +
                         std::to_string(nl_rate) + ")");

    Fft fft(m);
    std::vector<cx> Edt(m), Eh(m);
    std::vector<double> mask(m);
    for (std::size_t j = 0; j < m; ++j) {
        const cx L = I * (p.beta * k[j] * k[j] * k[j] - p.alpha * k[j] * k[j]);
        Edt[j] = std::exp(L * cfg.dt);
        Eh[j] = std::exp(L * (0.5 * cfg.dt));
        mask[j] = (std::abs(k[j]) <= kmax_kept) ? 1.0 : 0.0;
    }

    std::vector<cx> qh = q0.q;
    fft.forward(qh);
    for (std::size_t j = 0; j < m; ++j) qh[j] *= mask[j];

    std::vector<cx> work(m), qx(m), nl(m);
    auto nonlinear_hat = [&](const std::vector<cx>& what, std::vector<cx>& out) {
        // out = mask * fft(N(ifft(what))), N(q) = 2 i alpha |q|^2 q - 6 beta |q|^2 q_x
        work = what;
        fft.inverse(work);
        for (std::size_t j = 0; j < m; ++j) qx[j] = I * k[j] * what[j];
        fft.inverse(qx);
        for (std::size_t j = 0; j < m; ++j) {
            const double a2 = std::norm(work[j]);
            out[j] = 2.0 * I * p.alpha * a2 * work[j] - 6.0 * p.beta * a2 * qx[j];
        }
        fft.forward(out);
        for (std::size_t j = 0; j < m; ++j) out[j] *= mask[j];
    };

    std::vector<double> snaps = snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    EvolveResult result;

    auto record_edge = [&](const std::vector<cx>& q) {
        double peak = 0.0;
        for (const auto& v : q) peak = std::max(peak, std::abs(v));
        const double edge = std::max(std::abs(q.front()), std::abs(q.back()));
        if (peak > 0.0)
            result.boundary_contamination = std::max(result.boundary_contamination, edge / peak);
    };
    auto emit_state = [&](double t, const std::vector<cx>& what) {
        FieldState st;
        st.t = t;
        st.q = what;
        fft.inverse(st.q);
        record_edge(st.q);
        result.conserved_series.push_back(conserved_quantities(st, cfg));
        result.conserved_times.push_back(t);
        return st;
    };

    const double t_stop = q0.t + cfg.t_end;
    std::size_t next_snap = 0;
    while (next_snap < snaps.size() && snaps[next_snap] <= q0.t + 1e-12) {
        result.snapshots.push_back(emit_state(q0.t, qh));
        ++next_snap;
    }
    record_edge(q0.q);

    std::vector<cx> na(m), nb(m), nc(m), nd(m), stage(m);
    std::vector<cx> Ec(m), E2c(m);
    double t = q0.t;
    std::size_t step = 0;
    const auto step_guard =
        static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt)) + snaps.size() + 16;
    while (t < t_stop - 1e-12) {
        double dt = std::min(cfg.dt, t_stop - t);
        if (next_snap < snaps.size()) dt = std::min(dt, snaps[next_snap] - t);
        const std::vector<cx>*E = &Edt, *E2 = &Eh;
        if (std::abs(dt - cfg.dt) > 1e-15 * cfg.dt) {
            for (std::size_t j = 0; j < m; ++j) {
                const cx L = I * (p.beta * k[j] * k[j] * k[j] - p.alpha * k[j] * k[j]);
                Ec[j] = std::exp(L * dt);
                E2c[j] = std::exp(L * (0.5 * dt));
            }
            E = &Ec;
            E2 = &E2c;
        }

        nonlinear_hat(qh, na);
        for (std::size_t j = 0; j < m; ++j) stage[j] = (*E2)[j] * (qh[j] + 0.5 * dt * na[j]);
        nonlinear_hat(stage, nb);
        for (std::size_t j = 0; j < m; ++j) stage[j] = (*E2)[j] * qh[j] + 0.5 * dt * nb[j];
        nonlinear_hat(stage, nc);
        for (std::size_t j = 0; j < m; ++j) stage[j] = (*E)[j] * qh[j] + dt * (*E2)[j] * nc[j];
        nonlinear_hat(stage, nd);
        for (std::size_t j = 0; j < m; ++j)
            qh[j] = (*E)[j] * qh[j] +
                    dt / 6.0 * ((*E)[j] * na[j] + 2.0 * (*E2)[j] * (nb[j] + nc[j]) + nd[j]);
        t += dt;
        if (step % 64 == 0) {
            double acc = 0.0;
            for (const auto& v : qh) acc += std::norm(v);
            if (!std::isfinite(acc) || acc > 1e30)
                throw BlowupDetected("evolve: field blew up", t - dt);
        }
        while (next_snap < snaps.size() && t >= snaps[next_snap] - 1e-12) {
            result.snapshots.push_back(emit_state(t, qh));
            ++next_snap;
        }
        if (++step > step_guard) throw AccuracyError("evolve: stepping stalled");
    }

    result.final.t = t;
    result.final.q = qh;
    fft.inverse(result.final.q);
    record_edge(result.final.q);
    double acc = 0.0;
    for (const auto& v : result.final.q) acc += std::norm(v);
    if (!std::isfinite(acc)) throw BlowupDetected("evolve: field blew up", t);
    return result;
}

// L2 norm of i q_t + alpha(q_xx + 2|q|^2 q) + i beta(q_xxx + 6|q|^2 q_x) with a
// centered time difference over three equally spaced snapshots.
inline double pde_residual(const FieldState& prev, const FieldState& mid, const FieldState& next,
                           const SimConfig& cfg, const Params& p) {
    cfg.validate();
    const std::size_t m = cfg.modes;
    if (prev.q.size() != m || mid.q.size() != m || next.q.size() != m)
        throw InputError("pde_residual: field size mismatch");
    const double dt1 = mid.t - prev.t, dt2 = next.t - mid.t;
    if (std::abs(dt1 - dt2) > 1e-9 * std::max(std::abs(dt1), 1.0))
        throw InputError("pde_residual: snapshots must be equally spaced in time");
    const auto k = detail::wavenumbers(cfg);
    Fft fft(m);
    std::vector<cx> qh = mid.q;
    fft.forward(qh);
    std::vector<cx> qx(m), qxx(m), qxxx(m);
    for (std::size_t j = 0; j < m; ++j) {
        qx[j] = I * k[j] * qh[j];
        qxx[j] = -k[j] * k[j] * qh[j];
        qxxx[j] = -I * k[j] * k[j] * k[j] * qh[j];
    }
    fft.inverse(qx);
    fft.inverse(qxx);
    fft.inverse(qxxx);
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const cx qt = (next.q[j] - prev.q[j]) / (2.0 * dt1);
        const cx q = mid.q[j];
        const cx r = I * qt + p.alpha * (qxx[j] + 2.0 * std::norm(q) * q) +
                     I * p.beta * (qxxx[j] + 6.0 * std::norm(q) * qx[j]);
        acc += std::norm(r);
    }
    return std::sqrt(acc * cfg.grid().h);
}

// Snapshot CSV per External Interfaces: x,re_q,im_q.
inline void field_to_csv(const std::string& path, const FieldState& st, const SimConfig& cfg) {
    CsvTable t;
    t.header = {"x", "re_q", "im_q"};
    const UniformGrid g = cfg.grid();
    for (std::size_t j = 0; j < st.q.size(); ++j)
        t.rows.push_back({g[j], st.q[j].real(), st.q[j].imag()});
    write_csv(path, t);
}

}  // namespace hirota
