#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "hirota/conjugation.hpp"

using namespace hirota;

namespace {

ReflectionCoefficient constant_gamma(cx value, double lo = -4.0, double hi = 4.0,
                                     double step = 0.02) {
    ReflectionCoefficient rc;
    for (double z = lo; z <= hi + 1e-9; z += step) {
        rc.zs.push_back(z);
        rc.gamma.push_back(value);
    }
    return rc;
}

ReflectionCoefficient smooth_gamma(double amp = 0.6, double lo = -4.0, double hi = 4.0,
                                   double step = 0.02) {
    ReflectionCoefficient rc;
    for (double z = lo; z <= hi + 1e-9; z += step) {
        rc.zs.push_back(z);
        rc.gamma.push_back(amp * std::exp(-z * z) * std::exp(cx(0.0, 0.2 * z)));
    }
    return rc;
}

}  // namespace

TEST_CASE("nu_of exact values", "[conjugation]") {
    CHECK(nu_of(cx(0.0)) == 0.0);
    const double g2 = std::exp(2.0 * PI) - 1.0;  // |gamma|^2 with nu = -1
    CHECK(nu_of(cx(std::sqrt(g2))) == Catch::Approx(-1.0).margin(1e-14));
    CHECK(nu_of(cx(1.0)) == Catch::Approx(-std::log(2.0) / (2.0 * PI)).margin(1e-15));
    // nu <= 0 with equality only at gamma = 0
    std::mt19937 rng(501);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const cx g{u(rng), u(rng)};
        if (g == cx(0.0)) continue;
        CHECK(nu_of(g) < 0.0);
    }
}

TEST_CASE("delta: trivial case, constant-density closed form, decay at infinity",
          "[conjugation]") {
    const double z0 = -1.0, z1 = 0.8;
    {
        const ReflectionCoefficient rc = constant_gamma(cx(0.0));
        CHECK(std::abs(delta_at(cx(0.3, 1.2), rc, z0, z1) - 1.0) < 1e-12);
    }
    {
        const double c = 0.49;  // |gamma|^2
        const ReflectionCoefficient rc = constant_gamma(cx(0.7));
        const double nu = -std::log1p(c) / (2.0 * PI);
        std::mt19937 rng(502);
        std::uniform_real_distribution<double> ur(-3.0, 3.0), ui(0.15, 2.5);
        for (int i = 0; i < 10; ++i) {
            const cx z{ur(rng), ui(rng)};
            const cx expect = std::pow((z1 - z) / (z0 - z), I * nu);
            CHECK(std::abs(delta_at(z, rc, z0, z1) - expect) < 1e-8);
        }
    }
    {
        const ReflectionCoefficient rc = smooth_gamma();
        CHECK(std::abs(delta_at(cx(0.0, 1e6), rc, z0, z1) - 1.0) < 1e-6);
        CHECK(std::abs(delta_at(cx(1e6, 0.0), rc, z0, z1) - 1.0) < 1e-6);
    }
    CHECK_THROWS_AS(delta_at(cx(0.0), smooth_gamma(), z0, z1), DomainError);
    CHECK_THROWS_AS(delta_at(cx(0.0, 1e-8), smooth_gamma(), z0, z1), AccuracyError);
}

TEST_CASE("delta boundary jump is 1 + |gamma|^2", "[conjugation]") {
    const double z0 = -1.1, z1 = 0.9;
    const ReflectionCoefficient rc = smooth_gamma();
    for (int i = 1; i <= 20; ++i) {
        const double s = z0 + (z1 - z0) * i / 21.0;
        const cx up = delta_at(cx(s, 1e-4), rc, z0, z1);
        const cx dn = delta_at(cx(s, -1e-4), rc, z0, z1);
        const double expect = 1.0 + std::norm(rc.at(s));
        CHECK(std::abs(up / dn - expect) < 1e-4 * expect);
    }
}

TEST_CASE("T: unimodular pairing, zeros, large-z moment", "[conjugation]") {
    const double z0 = -1.0, z1 = 0.8;
    const ReflectionCoefficient rc = smooth_gamma(0.3);
    const DiscreteSpectrum spec{{{cx(0.2, 0.4), cx(1.0)}, {cx(2.0, 0.3), cx(1.0)}}};
    const auto split = delta_minus_split(spec, z0, z1);
    REQUIRE(split[0]);
    REQUIRE_FALSE(split[1]);

    std::mt19937 rng(503);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 25; ++i) {
        cx z{u(rng), u(rng)};
        if (std::abs(z.imag()) < 0.1) z += cx(0.0, 0.4);
        const cx t1 = T_of(z, rc, spec, split, z0, z1);
        const cx t2 = T_of(std::conj(z), rc, spec, split, z0, z1);
        CHECK(std::abs(std::conj(t2) * t1 - 1.0) < 1e-10);
    }
    // simple zero at z_k* for poles in the split
    CHECK(std::abs(T_of(std::conj(spec.pairs[0].zk), rc, spec, split, z0, z1)) < 1e-8);
    CHECK_THROWS_AS(T_of(spec.pairs[0].zk, rc, spec, split, z0, z1), DomainError);

    // z (T(z) - 1) -> i [ 2 sum Im z_k - int nu ] as |z| -> infinity
    const cx big = T_of(cx(0.0, 1e4), rc, spec, split, z0, z1);
    const double int_nu =
        integrate([&](double s) { return cx(nu_of(rc.at(s))); }, z0, z1, 1e-12).real();
    const cx expect = I * (2.0 * spec.pairs[0].zk.imag() - int_nu);
    CHECK(std::abs(cx(0.0, 1e4) * (big - 1.0) - expect) < 1e-4);
}

TEST_CASE("T0: trivial and constant-gamma closed forms", "[conjugation]") {
    const DiscreteSpectrum empty;
    const std::vector<bool> no_split;
    {
        const ReflectionCoefficient rc = constant_gamma(cx(0.0));
        CHECK(std::abs(T0_at(PhasePoint::z1, rc, empty, no_split, -1.0, 0.8) - 1.0) < 1e-12);
        CHECK(std::abs(T0_at(PhasePoint::z0, rc, empty, no_split, -1.0, 0.8) - 1.0) < 1e-12);
    }
    {
        // constant nu: beta+ = -nu log(z1 - z0) for z1 - z0 > 1 (chi eats one unit)
        const ReflectionCoefficient rc = constant_gamma(cx(0.7));
        const double nu = nu_of(cx(0.7));
        const double z0 = -1.0, z1 = 0.8;
        const cx t1 = T0_at(PhasePoint::z1, rc, empty, no_split, z0, z1);
        CHECK(std::abs(t1 - std::exp(I * (-nu * std::log(z1 - z0)))) < 1e-8);
        const cx t0 = T0_at(PhasePoint::z0, rc, empty, no_split, z0, z1);
        CHECK(std::abs(t0 - std::exp(I * (nu * std::log(z1 - z0)))) < 1e-8);
        // short interval: the cutoff covers everything and beta vanishes
        const cx t1s = T0_at(PhasePoint::z1, rc, empty, no_split, 0.2, 0.8);
        CHECK(std::abs(t1s - 1.0) < 1e-10);
    }
}

TEST_CASE("T matches T0 (z - z1)^{i nu} along the pi/4 ray", "[conjugation]") {
    const double z0 = -1.0, z1 = 0.8;
    const ReflectionCoefficient rc = smooth_gamma(0.5);
    const DiscreteSpectrum spec{{{cx(0.1, 0.5), cx(1.0)}}};
    const auto split = delta_minus_split(spec, z0, z1);
    const double nu1 = nu_of(rc.at(z1));
    const cx t0 = T0_at(PhasePoint::z1, rc, spec, split, z0, z1);
    CHECK(std::abs(std::abs(t0) - 1.0) < 1e-10);  // every factor is unimodular at real z1

    const cx dir = std::exp(I * PI / 4.0);
    double prev = 1e9;
    for (double r : {1e-2, 1e-3, 1e-4}) {
        const cx z = cx(z1) + r * dir;
        const cx diff = T_of(z, rc, spec, split, z0, z1) -
                        t0 * std::pow(r * dir, I * nu1);
        CHECK(std::abs(diff) < 2.0 * std::sqrt(r));
        CHECK(std::abs(diff) < prev);
        prev = std::abs(diff);
    }
}
