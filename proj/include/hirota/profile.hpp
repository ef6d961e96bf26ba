#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "hirota/csv.hpp"
#include "hirota/errors.hpp"
#include "hirota/grid.hpp"
#include "hirota/mat2.hpp"

namespace hirota {

// Sampled decaying field q(x, 0) on a uniform grid. Scattering treats q as 0
// beyond the grid, so the samples must have died out at both ends.
struct InitialProfile {
    UniformGrid xs;
    std::vector<cx> q0;
    double decay_pad = 0.0;
    double tail_tol = 1e-10;

    double tail_magnitude() const {
        if (q0.empty()) return 0.0;
        return std::max(std::abs(q0.front()), std::abs(q0.back()));
    }

    void require_decayed() const {
        if (q0.size() != xs.n) throw InputError("InitialProfile: sample count mismatch");
        if (tail_magnitude() > tail_tol)
            throw InputError("InitialProfile: |q0| at the grid ends is " +
                             std::to_string(tail_magnitude()) + ", above the tail tolerance " +
                             std::to_string(tail_tol));
    }

    bool is_zero() const {
        for (const auto& v : q0)
            if (v != cx(0.0)) return false;
        return true;
    }

    // Cubic Lagrange value inside cell i at fraction s in [0,1]; stencil clamps at the ends.
    cx value_in_cell(std::size_t i, double s) const {
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(q0.size());
        auto at = [&](std::ptrdiff_t j) -> cx {
            if (j < 0 || j >= n) return 0.0;
            return q0[static_cast<std::size_t>(j)];
        };
        const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(i);
        const double wm1 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        const double w0 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        const double w1 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        const double w2 = (s + 1.0) * s * (s - 1.0) / 6.0;
        return wm1 * at(k - 1) + w0 * at(k) + w1 * at(k + 1) + w2 * at(k + 2);
    }

    static InitialProfile from_function(const std::function<cx(double)>& f, double half_width,
                                        std::size_t n) {
        InitialProfile p;
        p.xs = UniformGrid::over(-half_width, half_width, n);
        p.q0.resize(n);
        for (std::size_t i = 0; i < n; ++i) p.q0[i] = f(p.xs[i]);
        p.decay_pad = half_width;
        return p;
    }

    static InitialProfile zero(double half_width, std::size_t n) {
        return from_function([](double) { return cx(0.0); }, half_width, n);
    }

    static InitialProfile sech(double amplitude, double x0, double half_width, std::size_t n) {
        return from_function(
            [=](double x) { return cx(amplitude / std::cosh(x - x0)); }, half_width, n);
    }

    static InitialProfile gauss(double amplitude, double width, double half_width, std::size_t n) {
        return from_function(
            [=](double x) { return cx(amplitude * std::exp(-(x / width) * (x / width))); },
            half_width, n);
    }

    // CSV schema: x,re_q,im_q on a uniform grid.
    static InitialProfile from_csv(const std::string& path) {
        const CsvTable t = read_csv(path);
        if (t.header != std::vector<std::string>{"x", "re_q", "im_q"})
            throw InputError("profile csv: expected header x,re_q,im_q in " + path);
        if (t.rows.size() < 8) throw InputError("profile csv: too few rows in " + path);
        InitialProfile p;
        const double a = t.rows.front()[0], b = t.rows.back()[0];
        p.xs = UniformGrid::over(a, b, t.rows.size());
        p.q0.reserve(t.rows.size());
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            if (std::abs(t.rows[i][0] - p.xs[i]) > 1e-9 * (1.0 + std::abs(p.xs[i])))
                throw InputError("profile csv: x grid is not uniform in " + path);
            p.q0.emplace_back(t.rows[i][1], t.rows[i][2]);
        }
        p.decay_pad = 0.5 * (b - a);
        return p;
    }

    void to_csv(const std::string& path) const {
        CsvTable t;
        t.header = {"x", "re_q", "im_q"};
        t.rows.reserve(xs.n);
        for (std::size_t i = 0; i < xs.n; ++i)
            t.rows.push_back({xs[i], q0[i].real(), q0[i].imag()});
        write_csv(path, t);
    }
};

}  // namespace hirota
