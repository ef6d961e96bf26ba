#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "hirota/simulate.hpp"
#include "hirota/soliton.hpp"

using namespace hirota;

namespace {

// Closed-form 1-soliton, solved by hand from the N=1 residue system:
//   gamma = c exp(2 i t theta(z)),  q = -2 i gamma* / (1 + |gamma|^2 / (4 eta^2)).
cx one_soliton_exact(cx z1, cx c1, double x, double t, const Params& p) {
    const cx g = c1 * std::exp(two_i_t_theta(z1, x, t, p));
    const double eta = z1.imag();
    return -2.0 * I * std::conj(g) / (1.0 + std::norm(g) / (4.0 * eta * eta));
}

DiscreteSpectrum one_pole(cx z, cx c) { return {{{z, c}}}; }

DiscreteSpectrum two_poles(cx za, cx ca, cx zb, cx cb) { return {{{za, ca}, {zb, cb}}}; }

}  // namespace

TEST_CASE("N = 0 gives the identity and zero field", "[soliton]") {
    const Params p{1.0, 1.0};
    const SolitonModel m =
        solve_reflectionless({}, TriangleSplit::all_lower(0), 0.3, 1.7, p);
    CHECK((m.evaluate_m(cx(0.3, 0.8)) - Mat2::id()).norm_max() == 0.0);
    CHECK(m.q_sol() == cx(0.0));
}

TEST_CASE("N = 1 solver matches the closed form pointwise", "[soliton]") {
    const Params p{1.0, 0.5};
    const cx z1{0.3, 0.7}, c1{1.0, 2.0};
    const DiscreteSpectrum spec = one_pole(z1, c1);
    for (double t : {0.0, 0.4, 2.0}) {
        for (double x = -8.0; x <= 8.0; x += 0.37) {
            const SolitonModel m =
                solve_reflectionless(spec, TriangleSplit::all_lower(1), x, t, p);
            const cx expect = one_soliton_exact(z1, c1, x, t, p);
            CHECK(std::abs(m.q_sol() - expect) < 1e-10);
            CHECK(residue_residual(m, x, t, p) < 1e-10);
        }
    }
}

TEST_CASE("peak amplitude is 2 eta and rides at the soliton speed", "[soliton]") {
    const Params p{0.7, 1.3};
    const cx z1{-0.2, 0.55}, c1{0.4, -1.1};
    const DiscreteSpectrum spec = one_pole(z1, c1);
    const double v = soliton_speed(z1, p);
    for (double t : {0.5, 2.0, 5.0}) {
        double peak = 0.0, argmax = 0.0;
        for (double x = v * t - 6.0; x <= v * t + 6.0; x += 0.01) {
            const double a = std::abs(q_sol_at(spec, x, t, p));
            if (a > peak) {
                peak = a;
                argmax = x;
            }
        }
        for (double x = argmax - 0.01; x <= argmax + 0.01; x += 1e-4) {
            const double a = std::abs(q_sol_at(spec, x, t, p));
            if (a > peak) {
                peak = a;
                argmax = x;
            }
        }
        CHECK(peak == Catch::Approx(2.0 * z1.imag()).epsilon(1e-6));
        // center x = v t - x0' with the phase offset from |c|
        const double x0 = -std::log(std::abs(c1) / (2.0 * z1.imag())) / (2.0 * z1.imag());
        CHECK(argmax == Catch::Approx(v * t - x0).margin(0.02));
    }
}

TEST_CASE("evaluate_m symmetry, determinant and large-z limit", "[soliton]") {
    const Params p{1.0, 1.0};
    const DiscreteSpectrum spec =
        two_poles(cx(0.3, 0.7), cx(1.0, 2.0), cx(-0.4, 0.5), cx(-0.6, 0.2));
    std::mt19937 rng(7301);
    std::uniform_real_distribution<double> ur(-3.0, 3.0);
    for (const auto& split :
         {TriangleSplit::all_lower(2), TriangleSplit::all_upper(2), TriangleSplit{{true, false}}}) {
        const SolitonModel m = solve_reflectionless(spec, split, 0.7, 0.9, p);
        for (int trial = 0; trial < 20; ++trial) {
            const cx z{ur(rng), ur(rng)};
            if (std::abs(z.imag()) < 0.05) continue;
            const Mat2 mz = m.evaluate_m(z);
            const Mat2 sym = sigma2_sandwich(conj(m.evaluate_m(std::conj(z))));
            CHECK((mz - sym).norm_max() < 1e-10);
            CHECK(std::abs(mz.det() - 1.0) < 1e-8);
        }
        const Mat2 far = m.evaluate_m(cx(0.0, 1e8));
        CHECK((far - Mat2::id()).norm_max() < 1e-7);
    }
}

TEST_CASE("q_sol is independent of the triangularity split", "[soliton]") {
    const Params p{0.5, 1.0};
    const DiscreteSpectrum spec =
        two_poles(cx(0.25, 0.6), cx(0.3, -1.4), cx(-0.5, 0.9), cx(2.0, 0.7));
    for (double t : {0.0, 1.3}) {
        for (double x = -5.0; x <= 5.0; x += 0.61) {
            const cx q_lower =
                solve_reflectionless(spec, TriangleSplit::all_lower(2), x, t, p).q_sol();
            const cx q_upper =
                solve_reflectionless(spec, TriangleSplit::all_upper(2), x, t, p).q_sol();
            const cx q_mixed =
                solve_reflectionless(spec, TriangleSplit{{false, true}}, x, t, p).q_sol();
            CHECK(std::abs(q_lower - q_upper) < 1e-10);
            CHECK(std::abs(q_lower - q_mixed) < 1e-10);
        }
    }
}

TEST_CASE("residue gamma specials and the decay-rate identity", "[soliton]") {
    const Params p{1.0, 1.0};
    const cx z1{0.3, 0.7}, c1{1.0, 2.0};
    {
        const auto r = residue_gamma(one_pole(z1, c1), 0.0, 0.0, p);
        CHECK(r.gamma_k[0] == c1);
    }
    {
        const double x = 1.7;
        const auto r = residue_gamma(one_pole(z1, c1), x, 0.0, p);
        CHECK(std::abs(r.gamma_k[0] - c1 * std::exp(2.0 * I * z1 * x)) < 1e-12);
    }
    // Re(2 i t theta(z_k)) = -2 Im z_k (x - v_k t) with v_k the soliton speed
    const double v = soliton_speed(z1, p);
    for (double t : {0.5, 3.0}) {
        for (double x : {-4.0, 0.0, 2.5}) {
            const double lhs = two_i_t_theta(z1, x, t, p).real();
            CHECK(lhs == Catch::Approx(-2.0 * z1.imag() * (x - v * t)).margin(1e-10));
        }
    }
    // saturating overflow guard
    CHECK_THROWS_AS(residue_gamma(one_pole(cx(0.0, 3.0), c1), -200.0, 0.0, p), AccuracyError);
}

TEST_CASE("trace formula products", "[soliton]") {
    const DiscreteSpectrum spec = one_pole(cx(0.0, 1.0), cx(1.0));
    CHECK(trace_s11(cx(5.0, 2.0), spec, {false}) == cx(1.0));
    CHECK(std::abs(trace_s11(cx(0.0), spec, {true}) - cx(-1.0)) < 1e-15);
    for (double z = -3.0; z <= 3.0; z += 0.5)
        CHECK(std::abs(std::abs(trace_s11(cx(z), spec, {true})) - 1.0) < 1e-12);
    CHECK_THROWS_AS(trace_s11(cx(0.0, -1.0), spec, std::vector<bool>{true}), DomainError);
}

TEST_CASE("reflectionless field solves the PDE", "[soliton]") {
    const Params p{1.0, 0.5};
    const DiscreteSpectrum spec =
        two_poles(cx(0.3, 0.7), cx(1.0, 2.0), cx(-0.25, 0.45), cx(0.5, -0.5));
    SimConfig cfg;
    cfg.half_width = 40.0;
    cfg.modes = 4096;
    const double dt = 1.5e-4, t0 = 0.8;
    FieldState fm, f0, fp;
    fm.t = t0 - dt;
    f0.t = t0;
    fp.t = t0 + dt;
    const UniformGrid g = cfg.grid();
    for (std::size_t j = 0; j < cfg.modes; ++j) {
        fm.q.push_back(q_sol_at(spec, g[j], t0 - dt, p));
        f0.q.push_back(q_sol_at(spec, g[j], t0, p));
        fp.q.push_back(q_sol_at(spec, g[j], t0 + dt, p));
    }
    CHECK(pde_residual(fm, f0, fp, cfg, p) < 1e-6);
}

TEST_CASE("cone filter partitions and mu", "[soliton]") {
    const Params p{1.0, 1.0};
    const cx za{0.05, 0.45}, zb{0.4, 0.6};
    const DiscreteSpectrum spec = two_poles(za, cx(1.0), zb, cx(0.8, 0.3));
    // speeds: va ~ 0.58, vb ~ -2.08
    const double va = soliton_speed(za, p), vb = soliton_speed(zb, p);
    REQUIRE(va > 0.0);
    REQUIRE(vb < -1.0);
    {
        const ConeData cd = cone_filter(spec, Cone(-1.0, 1.0, -10.0, 10.0), p);
        CHECK(cd.k_in.size() == 2);
        CHECK(std::isinf(cd.mu));
    }
    {
        const ConeData cd = cone_filter(one_pole(zb, cx(1.0)), Cone(-1.0, 1.0, 0.3, 0.9), p);
        CHECK(cd.k_in.empty());
        CHECK(cd.mu > 0.0);
        CHECK(std::isfinite(cd.mu));
    }
    {
        const ConeData cd = cone_filter(spec, Cone(-1.0, 1.0, 0.3, 0.9), p);
        REQUIRE(cd.k_in.size() == 1);
        CHECK(cd.k_in[0] == 0);
        REQUIRE(cd.k_minus.size() == 1);
        CHECK(cd.mu > 0.05);
    }
}

TEST_CASE("cone-excluded pole decays exponentially at rate >= 0.8 * 8 mu", "[soliton]") {
    const Params p{1.0, 1.0};
    const cx za{0.05, 0.45}, zb{0.4, 0.6};
    const cx ca{1.0, 0.0}, cb{0.8, 0.3};
    const DiscreteSpectrum full = two_poles(za, ca, zb, cb);
    const Cone cone(-0.5, 0.5, 0.3, 0.9);
    const ConeData cd = cone_filter(full, cone, p);
    REQUIRE(cd.k_in.size() == 1);
    const DiscreteSpectrum filtered = cd.filtered(full);  // slower pole drops without dressing

    const double v_ray = 0.5 * (cone.v1 + cone.v2);
    std::vector<double> ts, errs;
    for (double t = 1.0; t <= 6.0; t += 0.5) {
        double worst = 0.0;
        for (double x0 = cone.x1; x0 <= cone.x2; x0 += 0.25) {
            const double x = x0 + v_ray * t;
            worst = std::max(worst,
                             std::abs(q_sol_at(full, x, t, p) - q_sol_at(filtered, x, t, p)));
        }
        ts.push_back(t);
        errs.push_back(worst);
    }
    // least-squares slope of log err vs t
    double st = 0, se = 0, stt = 0, ste = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        se += std::log(errs[i]);
        stt += ts[i] * ts[i];
        ste += ts[i] * std::log(errs[i]);
    }
    const double n = static_cast<double>(ts.size());
    const double slope = (n * ste - st * se) / (n * stt - st * st);
    CHECK(-slope >= 0.8 * 8.0 * cd.mu);
    CHECK(errs.back() < errs.front() * 1e-3);
}

TEST_CASE("overtaken pole leaves a Blaschke-squared collision shift", "[soliton]") {
    const Params p{1.0, 1.0};
    const cx za{0.05, 0.45}, zb{0.4, 0.6};  // va ~ 0.58 (faster), vb ~ -2.08
    const cx ca{1.0, 0.0}, cb{0.8, 0.3};
    const DiscreteSpectrum full = two_poles(za, ca, zb, cb);
    const Cone cone(-0.5, 0.5, -2.5, -1.7);  // isolates the slower pole; za overtakes
    const ConeData cd = cone_filter(full, cone, p);
    REQUIRE(cd.k_in.size() == 1);
    REQUIRE(cd.k_plus.size() == 1);
    const DiscreteSpectrum dressed =
        modified_constants(cd.filtered(full), {za}, 0.0, 0.0, nullptr, +1);
    const cx blaschke = (zb - za) / (zb - std::conj(za));
    CHECK(std::abs(dressed.pairs[0].ck - cb * blaschke * blaschke) < 1e-14);

    const double v_ray = -2.08;
    double err_early = 0.0, err_late = 0.0;
    for (double x0 = -0.5; x0 <= 0.5; x0 += 0.25) {
        err_early = std::max(err_early, std::abs(q_sol_at(full, x0 + v_ray * 1.5, 1.5, p) -
                                                 q_sol_at(dressed, x0 + v_ray * 1.5, 1.5, p)));
        err_late = std::max(err_late, std::abs(q_sol_at(full, x0 + v_ray * 6.0, 6.0, p) -
                                               q_sol_at(dressed, x0 + v_ray * 6.0, 6.0, p)));
    }
    CHECK(err_late < 1e-3 * err_early);
}

TEST_CASE("modified constants: trivial cases and quadrature convergence", "[soliton]") {
    const DiscreteSpectrum spec = one_pole(cx(0.3, 0.7), cx(1.0, 2.0));
    {
        const DiscreteSpectrum out = modified_constants(spec, {}, -1.0, 1.0, nullptr, +1);
        CHECK(out.pairs[0].ck == spec.pairs[0].ck);
    }
    {
        // synthetic smooth gamma on a grid, compared across sample densities
        auto make_rc = [](double step) {
            ReflectionCoefficient rc;
            for (double z = -2.0; z <= 2.0 + 1e-9; z += step) {
                rc.zs.push_back(z);
                rc.gamma.push_back(0.4 * std::exp(-z * z) * std::exp(cx(0.0, 0.3 * z)));
            }
            return rc;
        };
        const ReflectionCoefficient rc = make_rc(0.01), rc_fine = make_rc(0.001);
        const cx c1 = modified_constants(spec, {}, -1.5, 1.5, &rc, +1).pairs[0].ck;
        const cx c2 = modified_constants(spec, {}, -1.5, 1.5, &rc_fine, +1).pairs[0].ck;
        CHECK(std::abs(c1 - c2) < 1e-8);
        CHECK(std::abs(c1 - spec.pairs[0].ck) > 1e-3);  // the dressing is not a no-op
    }
    // pole hugging the real axis is rejected
    const DiscreteSpectrum low = one_pole(cx(0.0, 1e-8), cx(1.0));
    ReflectionCoefficient rc;
    for (double z = -1.0; z <= 1.0 + 1e-9; z += 0.1) {
        rc.zs.push_back(z);
        rc.gamma.push_back(cx(0.1));
    }
    CHECK_THROWS_AS(modified_constants(low, {}, -1.0, 1.0, &rc, +1), AccuracyError);
}

TEST_CASE("coincident poles are rejected", "[soliton]") {
    const Params p{1.0, 1.0};
    const DiscreteSpectrum spec =
        two_poles(cx(0.3, 0.7), cx(1.0), cx(0.3, 0.7), cx(1.0));
    CHECK_THROWS_AS(solve_reflectionless(spec, TriangleSplit::all_lower(2), 0.0, 0.0, p),
                    DomainError);
}
