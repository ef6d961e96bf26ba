#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "hirota/csv.hpp"
#include "hirota/errors.hpp"
#include "hirota/mat2.hpp"
#include "hirota/params.hpp"
#include "hirota/profile.hpp"
#include "hirota/threading.hpp"

namespace hirota {

struct ScatteringSample {
    double z = 0.0;
    cx s11{1.0, 0.0};
    cx s21{0.0, 0.0};
};

struct ReflectionCoefficient {
    std::vector<double> zs;
    std::vector<cx> gamma;

    // Piecewise-cubic value of gamma at z inside the sampled range.
    cx at(double z) const {
        if (zs.size() < 4) throw InputError("ReflectionCoefficient: too few samples");
        const double h = zs[1] - zs[0];
        double u = (z - zs.front()) / h;
        auto n = static_cast<std::ptrdiff_t>(zs.size());
        auto k = static_cast<std::ptrdiff_t>(std::floor(u));
        k = std::clamp<std::ptrdiff_t>(k, 0, n - 2);
        const double s = u - static_cast<double>(k);
        auto at_idx = [&](std::ptrdiff_t j) -> cx {
            return (j < 0 || j >= n) ? cx(0.0) : gamma[static_cast<std::size_t>(j)];
        };
        const double wm1 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        const double w0 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        const double w1 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        const double w2 = (s + 1.0) * s * (s - 1.0) / 6.0;
        return wm1 * at_idx(k - 1) + w0 * at_idx(k) + w1 * at_idx(k + 1) + w2 * at_idx(k + 2);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& g : gamma) m = std::max(m, std::abs(g));
        return m;
    }

    static ReflectionCoefficient zero_on(const std::vector<double>& zs_) {
        return {zs_, std::vector<cx>(zs_.size(), cx(0.0))};
    }
};

struct SpectralPair {
    cx zk;
    cx ck;
};

struct DiscreteSpectrum {
    std::vector<SpectralPair> pairs;

    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }
};

namespace detail {

inline Mat2 zs_generator(cx z, cx q) {
    return {-I * z, q, -std::conj(q), I * z};
}

// One CF4 Magnus step for phi' = -iz[sigma3, phi] + Q phi over one grid cell:
// phi_next = exp(X2) exp(X1) phi exp(i z h sigma3), built from the
// Zakharov-Shabat generator A(x) = -i z sigma3 + Q(x) at the two Gauss nodes
// of the cell. Exact for constant Q at any z, so large real z costs nothing.
// Direction +1 walks the cell left to right, -1 right to left.
inline Mat2 cf4_cell(const InitialProfile& p, cx z, std::size_t cell, int dir, const Mat2& phi) {
    constexpr double gauss_off = 0.28867513459481288225;  // sqrt(3)/6
    const double h = p.xs.h * dir;
    // Gauss nodes measured along the direction of travel.
    const double s1 = (dir > 0) ? 0.5 - gauss_off : 0.5 + gauss_off;
    const double s2 = (dir > 0) ? 0.5 + gauss_off : 0.5 - gauss_off;
    const Mat2 A1 = zs_generator(z, p.value_in_cell(cell, s1));
    const Mat2 A2 = zs_generator(z, p.value_in_cell(cell, s2));
    const cx wa = h * (0.25 + gauss_off);
    const cx wb = h * (0.25 - gauss_off);
    const Mat2 X1 = wa * A1 + wb * A2;
    const Mat2 X2 = wb * A1 + wa * A2;
    Mat2 out = exp_traceless(X2) * (exp_traceless(X1) * phi);
    // right factor exp(i z h sigma3)
    const cx e = std::exp(I * z * h);
    out.a11 *= e;
    out.a21 *= e;
    out.a12 /= e;
    out.a22 /= e;
    return out;
}

}  // namespace detail

// Jost matrices at the anchor x* = 0 (or the mid-grid point nearest to it):
// phi_minus integrated from the left end, phi_plus from the right end, both
// normalized to the identity at their boundary.
struct JostMatrices {
    Mat2 phi_minus = Mat2::id();
    Mat2 phi_plus = Mat2::id();
    double anchor = 0.0;
};

inline std::size_t anchor_cell(const InitialProfile& p) {
    // first grid index at or beyond x = 0; anchors the Wronskians
    const double u = (0.0 - p.xs.x0) / p.xs.h;
    auto k = static_cast<std::ptrdiff_t>(std::llround(u));
    k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(p.xs.n) - 1);
    return static_cast<std::size_t>(k);
}

inline JostMatrices jost_pair(const InitialProfile& p, cx z) {
    p.require_decayed();
    JostMatrices jm;
    const std::size_t mid = anchor_cell(p);
    jm.anchor = p.xs[mid];
    Mat2 left = Mat2::id();
    for (std::size_t c = 0; c < mid; ++c) left = detail::cf4_cell(p, z, c, +1, left);
    jm.phi_minus = left;
    Mat2 right = Mat2::id();
    for (std::size_t c = p.xs.n - 1; c-- > mid;) right = detail::cf4_cell(p, z, c, -1, right);
    jm.phi_plus = right;
    return jm;
}

// s11 = Wr(phi-_1, phi+_2), s21 read off the connection phi- = phi+ S at the
// anchor; s21 is meaningful on the real axis, s11 also in C+.
inline ScatteringSample scattering_coeffs(const InitialProfile& p, cx z) {
    const JostMatrices jm = jost_pair(p, z);
    ScatteringSample s;
    s.z = z.real();
    s.s11 = jm.phi_minus.a11 * jm.phi_plus.a22 - jm.phi_plus.a12 * jm.phi_minus.a21;
    // Wr(phi+_1, phi-_1), with the e^{2 i z x*} connection factor at the anchor.
    const cx wr = jm.phi_plus.a11 * jm.phi_minus.a21 - jm.phi_minus.a11 * jm.phi_plus.a21;
    s.s21 = wr * std::exp(-2.0 * I * z * jm.anchor);
    return s;
}

// Independent route for the conjugation symmetry test: s22 = Wr(phi+_1, phi-_2).
inline cx scattering_s22(const InitialProfile& p, cx z) {
    const JostMatrices jm = jost_pair(p, z);
    return jm.phi_plus.a11 * jm.phi_minus.a22 - jm.phi_minus.a12 * jm.phi_plus.a21;
}

inline constexpr double kSpectralSingularityGuard = 1e-6;

inline ReflectionCoefficient reflection_coefficient(const InitialProfile& p,
                                                    const std::vector<double>& zs) {
    p.require_decayed();
    ReflectionCoefficient rc;
    rc.zs = zs;
    rc.gamma.resize(zs.size());
    std::vector<double> s11_abs(zs.size());
    parallel_for(zs.size(), [&](std::size_t i) {
        const ScatteringSample s = scattering_coeffs(p, zs[i]);
        s11_abs[i] = std::abs(s.s11);
        rc.gamma[i] = s.s21 / s.s11;
    });
    for (std::size_t i = 0; i < zs.size(); ++i)
        if (s11_abs[i] < kSpectralSingularityGuard)
            throw SpectralSingularitySuspected(
                "reflection_coefficient: |s11| = " + std::to_string(s11_abs[i]) + " at z = " +
                std::to_string(zs[i]));
    return rc;
}

namespace detail {

struct Box {
    double re_lo, re_hi, im_lo, im_hi;
    double perimeter() const { return 2.0 * (re_hi - re_lo + im_hi - im_lo); }
};

// Winding number of s11 around the box boundary: trapezoid accumulation of the
// argument with local refinement when a step turns by more than pi/2.
template <typename F>
inline double winding_number(const F& s11, const Box& b, int base_samples_per_unit = 64) {
    std::vector<cx> corners = {cx(b.re_lo, b.im_lo), cx(b.re_hi, b.im_lo), cx(b.re_hi, b.im_hi),
                               cx(b.re_lo, b.im_hi), cx(b.re_lo, b.im_lo)};
    double total = 0.0;
    for (std::size_t e = 0; e + 1 < corners.size(); ++e) {
        const cx za = corners[e], zb = corners[e + 1];
        const double len = std::abs(zb - za);
        int nseg = std::max(8, static_cast<int>(std::ceil(len * base_samples_per_unit)));
        std::vector<cx> pts(static_cast<std::size_t>(nseg) + 1);
        std::vector<cx> vals(pts.size());
        parallel_for(pts.size(), [&](std::size_t i) {
            pts[i] = za + (zb - za) * (static_cast<double>(i) / nseg);
            vals[i] = s11(pts[i]);
        });
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            cx v0 = vals[i], v1 = vals[i + 1];
            cx p0 = pts[i], p1 = pts[i + 1];
            // refine until each turn is small enough to be unambiguous
            std::vector<std::pair<std::pair<cx, cx>, std::pair<cx, cx>>> stack = {{{p0, p1}, {v0, v1}}};
            int guard = 0;
            while (!stack.empty()) {
                auto [ps, vs] = stack.back();
                stack.pop_back();
                const double dphi = std::arg(vs.second / vs.first);
                if (std::abs(dphi) < 1.2 || ++guard > 4000) {
                    total += dphi;
                } else {
                    const cx pm = 0.5 * (ps.first + ps.second);
                    const cx vm = s11(pm);
                    stack.push_back({{pm, ps.second}, {vm, vs.second}});
                    stack.push_back({{ps.first, pm}, {vs.first, vm}});
                }
            }
        }
    }
    return total / (2.0 * PI);
}

}  // namespace detail

// Zeros of s11 inside a rectangle strictly inside C+, each Newton-refined to
// |s11| < 1e-9, with the count certified by the argument principle; for each
// zero the norming constant c_k = b_k / s11'(z_k) with b_k the column ratio
// phi-_1 = b_k phi+_2 at the anchor.
inline DiscreteSpectrum find_discrete_spectrum(const InitialProfile& p, cx box_lo, cx box_hi) {
    p.require_decayed();
    if (!(box_lo.imag() > 0.0))
        throw DomainError("find_discrete_spectrum: search box must stay off the real axis");
    if (p.is_zero()) return {};

    auto s11_at = [&](cx z) { return scattering_coeffs(p, z).s11; };

    const detail::Box root{box_lo.real(), box_hi.real(), box_lo.imag(), box_hi.imag()};
    const double root_winding = detail::winding_number(s11_at, root);
    const long expected = std::lround(root_winding);
    if (std::abs(root_winding - static_cast<double>(expected)) > 0.25)
        throw SpectrumResolutionFailure("find_discrete_spectrum: non-integral winding " +
                                        std::to_string(root_winding));
    if (expected == 0) return {};

    // quadtree subdivision until each cell isolates a single zero
    std::vector<detail::Box> active = {root};
    std::vector<cx> seeds;
    int depth = 0;
    const int max_depth = 12;
    while (!active.empty()) {
        if (++depth > max_depth)
            throw SpectrumResolutionFailure("find_discrete_spectrum: subdivision limit reached");
        std::vector<detail::Box> next;
        for (const auto& b : active) {
            const double w = detail::winding_number(s11_at, b);
            const long n = std::lround(w);
            if (std::abs(w - static_cast<double>(n)) > 0.25)
                throw SpectrumResolutionFailure("find_discrete_spectrum: ambiguous winding");
            if (n == 0) continue;
            if (n == 1 || (b.re_hi - b.re_lo) < 1e-4) {
                for (long k = 0; k < n; ++k)
                    seeds.emplace_back(0.5 * (b.re_lo + b.re_hi), 0.5 * (b.im_lo + b.im_hi));
                continue;
            }
            const double rm = 0.5 * (b.re_lo + b.re_hi), im = 0.5 * (b.im_lo + b.im_hi);
            next.push_back({b.re_lo, rm, b.im_lo, im});
            next.push_back({rm, b.re_hi, b.im_lo, im});
            next.push_back({b.re_lo, rm, im, b.im_hi});
            next.push_back({rm, b.re_hi, im, b.im_hi});
        }
        active = std::move(next);
    }

    auto s11_prime = [&](cx z) {
        const double dh = 1e-4 * (1.0 + std::abs(z));
        return (s11_at(z + dh) - s11_at(z - dh)) / (2.0 * dh);
    };

    std::vector<cx> roots;
    for (cx z : seeds) {
        bool ok = false;
        for (int it = 0; it < 60; ++it) {
            const cx f = s11_at(z);
            if (std::abs(f) < 1e-9) {
                ok = true;
                break;
            }
            const cx fp = s11_prime(z);
            if (std::abs(fp) == 0.0) break;
            cx step = f / fp;
            if (std::abs(step) > 0.5) step *= 0.5 / std::abs(step);
            z -= step;
        }
        if (!ok || !(z.imag() > 0.0))
            throw SpectrumResolutionFailure("find_discrete_spectrum: Newton refinement failed");
        bool dup = false;
        for (const cx& r : roots)
            if (std::abs(r - z) < 1e-6) dup = true;
        if (!dup) roots.push_back(z);
    }
    if (static_cast<long>(roots.size()) != expected)
        throw SpectrumResolutionFailure("find_discrete_spectrum: found " +
                                        std::to_string(roots.size()) + " roots, winding says " +
                                        std::to_string(expected));

    DiscreteSpectrum spec;
    for (const cx& zk : roots) {
        const JostMatrices jm = jost_pair(p, zk);
        // least-squares ratio of the proportional columns; the e^{-2 i z x*}
        // factor moves the ratio back to the x-independent psi convention
        const cx u1 = jm.phi_minus.a11, u2 = jm.phi_minus.a21;
        const cx v1 = jm.phi_plus.a12, v2 = jm.phi_plus.a22;
        const cx bk = (std::conj(v1) * u1 + std::conj(v2) * u2) /
                      (std::conj(v1) * v1 + std::conj(v2) * v2) *
                      std::exp(-2.0 * I * zk * jm.anchor);
        const cx ck = bk / s11_prime(zk);
        spec.pairs.push_back({zk, ck});
    }
    std::sort(spec.pairs.begin(), spec.pairs.end(),
              [](const SpectralPair& a, const SpectralPair& b) {
                  return a.zk.real() != b.zk.real() ? a.zk.real() < b.zk.real()
                                                    : a.zk.imag() < b.zk.imag();
              });
    return spec;
}

// --- CSV interfaces ---

inline void spectrum_to_csv(const std::string& path, const DiscreteSpectrum& s) {
    CsvTable t;
    t.header = {"re_z", "im_z", "re_c", "im_c"};
    for (const auto& pr : s.pairs)
        t.rows.push_back({pr.zk.real(), pr.zk.imag(), pr.ck.real(), pr.ck.imag()});
    write_csv(path, t);
}

inline DiscreteSpectrum spectrum_from_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    if (t.header != std::vector<std::string>{"re_z", "im_z", "re_c", "im_c"})
        throw InputError("spectrum csv: expected header re_z,im_z,re_c,im_c in " + path);
    DiscreteSpectrum s;
    for (const auto& r : t.rows) {
        SpectralPair pr{cx(r[0], r[1]), cx(r[2], r[3])};
        if (!(pr.zk.imag() > 0.0)) throw InputError("spectrum csv: Im z must be positive");
        if (pr.ck == cx(0.0)) throw InputError("spectrum csv: c must be nonzero");
        s.pairs.push_back(pr);
    }
    return s;
}

inline void reflection_to_csv(const std::string& path, const ReflectionCoefficient& rc) {
    CsvTable t;
    t.header = {"z", "re_gamma", "im_gamma"};
    for (std::size_t i = 0; i < rc.zs.size(); ++i)
        t.rows.push_back({rc.zs[i], rc.gamma[i].real(), rc.gamma[i].imag()});
    write_csv(path, t);
}

inline ReflectionCoefficient reflection_from_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    if (t.header != std::vector<std::string>{"z", "re_gamma", "im_gamma"})
        throw InputError("reflection csv: expected header z,re_gamma,im_gamma in " + path);
    ReflectionCoefficient rc;
    for (const auto& r : t.rows) {
        rc.zs.push_back(r[0]);
        rc.gamma.emplace_back(r[1], r[2]);
    }
    return rc;
}

}  // namespace hirota
