#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "hirota/gamma.hpp"
#include "hirota/scattering.hpp"

using namespace hirota;

namespace {

InitialProfile random_profile(std::mt19937& rng, double half_width = 16.0, std::size_t n = 2048) {
    std::uniform_real_distribution<double> amp(-0.4, 0.4), pos(-4.0, 4.0), wid(0.8, 2.5);
    const double a1 = amp(rng), a2 = amp(rng), p1 = pos(rng), p2 = pos(rng);
    const double w1 = wid(rng), w2 = wid(rng), ph = pos(rng);
    return InitialProfile::from_function(
        [=](double x) {
            return cx(a1 * std::exp(-std::pow((x - p1) / w1, 2)), 0.0) +
                   a2 * std::exp(-std::pow((x - p2) / w2, 2)) * std::exp(cx(0.0, ph * x * 0.2));
        },
        half_width, n);
}

// Exact Satsuma-Yajima S-matrix magnitudes for q0 = A sech(x):
//   s11(z) = Gamma(1/2 - iz)^2 / (Gamma(1/2 - iz + A) Gamma(1/2 - iz - A)),
//   |s21(z)| = sin(pi A) sech(pi z).
cx sech_s11_exact(double A, cx z) {
    const cx w = 0.5 - I * z;
    return std::exp(2.0 * log_gamma(w) - log_gamma(w + A) - log_gamma(w - A));
}

}  // namespace

TEST_CASE("zero profile has trivial Jost solutions and scattering data", "[scatter]") {
    const InitialProfile p = InitialProfile::zero(10.0, 512);
    for (cx z : {cx(0.3), cx(-1.7), cx(0.4, 0.8)}) {
        const JostMatrices jm = jost_pair(p, z);
        CHECK((jm.phi_minus - Mat2::id()).norm_max() < 1e-12);
        CHECK((jm.phi_plus - Mat2::id()).norm_max() < 1e-12);
    }
    const ScatteringSample s = scattering_coeffs(p, 0.7);
    CHECK(std::abs(s.s11 - 1.0) < 1e-14);
    CHECK(std::abs(s.s21) < 1e-14);

    const auto rc = reflection_coefficient(p, {-1.0, 0.0, 1.0, 2.0});
    CHECK(rc.max_abs() < 1e-14);
    CHECK(find_discrete_spectrum(p, cx(-1.0, 0.05), cx(1.0, 1.5)).empty());
}

TEST_CASE("det phi = 1 and the real-axis sigma2 symmetry", "[scatter]") {
    std::mt19937 rng(9001);
    const InitialProfile p = random_profile(rng);
    std::uniform_real_distribution<double> ur(-3.0, 3.0), ui(0.0, 0.35);
    for (int trial = 0; trial < 12; ++trial) {
        const cx z{ur(rng), ui(rng)};
        const JostMatrices jm = jost_pair(p, z);
        CHECK(std::abs(jm.phi_minus.det() - 1.0) < 1e-10);
        CHECK(std::abs(jm.phi_plus.det() - 1.0) < 1e-10);
    }
    for (int trial = 0; trial < 8; ++trial) {
        const cx z{ur(rng), 0.0};
        const JostMatrices jm = jost_pair(p, z);
        // phi(z) = sigma2 phi*(z*) sigma2 on the real axis
        CHECK((jm.phi_minus - sigma2_sandwich(conj(jm.phi_minus))).norm_max() < 1e-10);
        CHECK((jm.phi_plus - sigma2_sandwich(conj(jm.phi_plus))).norm_max() < 1e-10);
    }
}

TEST_CASE("unitarity and the conjugation symmetry on the real axis", "[scatter]") {
    std::mt19937 rng(9002);
    for (int pi = 0; pi < 3; ++pi) {
        const InitialProfile p = random_profile(rng);
        for (double z = -3.0; z <= 3.0; z += 0.37) {
            const ScatteringSample s = scattering_coeffs(p, z);
            CHECK(std::abs(std::norm(s.s11) + std::norm(s.s21) - 1.0) < 1e-6);
            // independent route: s22 = Wr(phi+_1, phi-_2) must equal s11*
            CHECK(std::abs(scattering_s22(p, z) - std::conj(s.s11)) < 1e-8);
        }
    }
}

TEST_CASE("sech potential matches the exact S-matrix", "[scatter]") {
    const InitialProfile p = InitialProfile::sech(1.0, 0.0, 24.0, 4096);
    // reflectionless: |s21| tiny on the real axis
    for (double z = -2.0; z <= 2.0; z += 0.23) {
        const ScatteringSample s = scattering_coeffs(p, z);
        CHECK(std::abs(s.s21) < 1e-6);
        CHECK(std::abs(s.s11 - sech_s11_exact(1.0, z)) < 1e-6);
    }
    // s11 vanishes at z = i/2
    CHECK(std::abs(scattering_coeffs(p, cx(0.0, 0.5)).s11) < 1e-6);
}

TEST_CASE("small sech amplitude: radiation matches the exact magnitudes", "[scatter]") {
    const double A = 0.2;
    const InitialProfile p = InitialProfile::sech(A, 0.0, 24.0, 4096);
    std::vector<double> zs;
    for (double z = -1.5; z <= 1.5; z += 0.125) zs.push_back(z);
    const ReflectionCoefficient rc = reflection_coefficient(p, zs);
    CHECK(rc.max_abs() > 0.1);
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const double exact =
            std::sin(PI * A) / std::cosh(PI * zs[i]) / std::abs(sech_s11_exact(A, zs[i]));
        CHECK(std::abs(rc.gamma[i]) == Catch::Approx(exact).margin(2e-6));
        // Born approximation magnitude: |gamma| ~ A pi sech(pi z), good to ~20%
        const double born = A * PI / std::cosh(PI * zs[i]);
        CHECK(std::abs(rc.gamma[i]) == Catch::Approx(born).epsilon(0.2));
    }
}

TEST_CASE("sech eigenvalue ladder", "[scatter]") {
    {
        const InitialProfile p = InitialProfile::sech(1.0, 0.0, 24.0, 4096);
        const DiscreteSpectrum s = find_discrete_spectrum(p, cx(-0.8, 0.02), cx(0.8, 1.2));
        REQUIRE(s.size() == 1);
        CHECK(std::abs(s.pairs[0].zk - cx(0.0, 0.5)) < 1e-6);
    }
    {
        const InitialProfile p = InitialProfile::sech(2.4, 0.0, 26.0, 4096);
        const DiscreteSpectrum s = find_discrete_spectrum(p, cx(-0.8, 0.02), cx(0.8, 2.2));
        REQUIRE(s.size() == 2);
        // ladder i(A - 1/2 - k)
        CHECK(std::abs(s.pairs[0].zk.real()) < 1e-6);
        CHECK(std::abs(s.pairs[1].zk.real()) < 1e-6);
        const double lo = std::min(s.pairs[0].zk.imag(), s.pairs[1].zk.imag());
        const double hi = std::max(s.pairs[0].zk.imag(), s.pairs[1].zk.imag());
        CHECK(lo == Catch::Approx(0.9).margin(1e-6));
        CHECK(hi == Catch::Approx(1.9).margin(1e-6));
    }
}

TEST_CASE("grid refinement keeps gamma stable at integrator order", "[scatter]") {
    auto gamma_at = [&](std::size_t n) {
        const InitialProfile p = InitialProfile::sech(0.6, 0.3, 24.0, n);
        return reflection_coefficient(p, {0.45}).gamma[0];
    };
    const cx g1 = gamma_at(512), g2 = gamma_at(1024), g3 = gamma_at(2048);
    const double d12 = std::abs(g1 - g2), d23 = std::abs(g2 - g3);
    // halving h must contract the change by at least the O(h^2) bound
    CHECK(d23 < d12 / 3.5);
    CHECK(d12 < 1e-4);
}

TEST_CASE("spectral singularity guard trips near a real zero of s11", "[scatter]") {
    // A = 0.5 puts an eigenvalue at the origin: s11(0) = 0 on the real axis
    const InitialProfile p = InitialProfile::sech(0.5, 0.0, 24.0, 2048);
    std::vector<double> zs = {-0.5, -0.25, 0.0, 0.25, 0.5};
    CHECK_THROWS_AS(reflection_coefficient(p, zs), SpectralSingularitySuspected);
}

TEST_CASE("profile tail validation", "[scatter]") {
    InitialProfile p = InitialProfile::sech(1.0, 0.0, 6.0, 256);  // too narrow: tails ~ e^-6
    CHECK_THROWS_AS(p.require_decayed(), InputError);
}
