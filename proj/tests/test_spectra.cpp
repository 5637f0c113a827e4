#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dirac_ps/error.hpp"
#include "dirac_ps/spectra.hpp"

using namespace dirac_ps;
using namespace dirac_ps::spectra;

namespace {

// Positive root s = E - kappa of (1 + a) s^2 + 2 kappa s - m^2 = 0 by bisection.
double root_oracle(double m, double lt, double kappa, int N) {
    const double a = lt * lt / (double(N) * N);
    auto f = [&](double s) { return (1 + a) * s * s + 2 * kappa * s - m * m; };
    double lo = 0.0, hi = 1.0;
    while (f(hi) < 0) hi *= 2;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0 ? lo : hi) = mid;
    }
    return kappa + 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("coupling and conversions") {
    SpectrumParams p;
    p.omega = 0.0;
    CHECK(coupling_lambda_tilde(p) == 0.0);
    p.g = 1;
    p.mu0 = 1;
    p.omega = 2;
    CHECK(coupling_lambda_tilde(p) == 2.0);
    const auto q = SpectrumParams::from_current(1.0, 1.0, 1.0, 1.0, 2 * std::numbers::pi);
    CHECK(coupling_lambda_tilde(q) == 2.0);
    CHECK(charge_density_si(kSpeedOfLight * kSpeedOfLight) == doctest::Approx(1.0));
}

TEST_CASE("parameter validation") {
    SpectrumParams p;
    p.m = 0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = SpectrumParams{};
    p.mu0 = -1;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = SpectrumParams{};
    p.L = 0;
    CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("quantum numbers") {
    const auto q = QuantumNumbers::make(2, 3, -1);
    CHECK(q.N == 11);
    CHECK(q.Ntilde == -1);
    CHECK_THROWS_AS((void)QuantumNumbers::make(-1, 0), DomainError);
    CHECK(reduced_eigenvalue(0, 0) == -1.0);
    CHECK(reduced_eigenvalue(1, 0) == doctest::Approx(-1.0 / 9));
    CHECK(reduced_eigenvalue(0, 2) == reduced_eigenvalue(2, 0));
    CHECK(reduced_eigenvalue(1, 1) == doctest::Approx(-1.0 / 25));
    CHECK_THROWS_AS((void)reduced_eigenvalue(0, -1), DomainError);
}

TEST_CASE("non-relativistic level") {
    CHECK(nonrel_energy(0.0, 1.0, 3) == 0.0);
    CHECK(nonrel_energy(1.0, 0.5, 1) == -1.0);
    const double lt = 0.7, M = 0.3;
    CHECK(nonrel_energy(lt, M, 5) / (2 * M * lt * lt) == doctest::Approx(reduced_eigenvalue(1, 1)));
    CHECK_THROWS_AS((void)nonrel_energy(1.0, 0.0, 1), DomainError);
}

TEST_CASE("relativistic level") {
    CHECK(relativistic_energy(2.0, 0.0, 1.5, 3) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(relativistic_energy(1.0, 0.6, 0.0, 3) == doctest::Approx(1.0 / std::sqrt(1 + 0.04)).epsilon(1e-15));
    CHECK_THROWS_AS((void)relativistic_energy(0.0, 1.0, 0.0, 1), DomainError);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> m(0.1, 10), lt(-5, 5), kap(-10, 10);
    for (int i = 0; i < 1000; ++i) {
        const double mm = m(rng), l = lt(rng), k = kap(rng);
        const int N = 2 * (i % 7) + 1;
        const double E = relativistic_energy(mm, l, k, N);
        CHECK(E > k);
        CHECK(E == doctest::Approx(root_oracle(mm, l, k, N)).epsilon(1e-12));
        const double a = E + k, b = mm * mm / (E - k), c = l * l * (E - k) / (N * N);
        CHECK(std::abs(a - b + c) <= 1e-12 * std::max({std::abs(a), b, c}));
    }
}

TEST_CASE("energy increases with N toward the free value") {
    const double free = std::sqrt(1.0 + 0.25);
    double prev = 0.0;
    for (int N = 1; N < 40; N += 2) {
        const double E = relativistic_energy(1.0, 0.8, 0.5, N);
        CHECK(E > prev);
        CHECK(E < free);
        prev = E;
    }
}

TEST_CASE("quasi-relativistic and non-relativistic limits") {
    CHECK(quasirel_energy(1.3, 0.0, 0.0, 1) == 1.3);
    CHECK(quasirel_energy(2.0, 0.3, 0.0, 3) == doctest::Approx(2.0 - 2.0 * 0.09 / 18));
    std::vector<double> res;
    for (double t : {0.1, 0.05, 0.025}) {
        res.push_back(std::abs(relativistic_energy(1.0, t, 0.5 * t, 1) - quasirel_energy(1.0, t, 0.5 * t, 1)));
    }
    CHECK(std::log2(res[0] / res[1]) > 3.5);
    CHECK(std::log2(res[1] / res[2]) > 3.5);
    const double lt = 1e-3;
    const double ratio = (relativistic_energy(1.0, lt, 0.0, 1) - 1.0) / (-lt * lt / 2);
    CHECK(std::abs(ratio - 1.0) < 1e-4);
    CHECK(nonrel_energy_shifted(1.0, 0.0, 0.2, 1) == doctest::Approx(1.02));
}

TEST_CASE("longitudinal quantization") {
    const double L = 2 * std::numbers::pi;
    CHECK(quantized_kappa(L, 0) == 0.0);
    CHECK(quantized_kappa(L, 1) == doctest::Approx(1.0));
    CHECK(quantized_kappa(L, -3) == doctest::Approx(-3.0));
    CHECK_THROWS_AS((void)quantized_kappa(0.0, 1), DomainError);
}

TEST_CASE("light-cone kinematics") {
    const auto k = lightcone_kinematics(1.0, 0.0, 1.0, 0.5);
    CHECK(k.M == 0.5);
    CHECK(k.epsilon0 == 1.0);
    CHECK(k.epsilon_prime == 0.0);
    CHECK_THROWS_AS((void)lightcone_kinematics(1.0, 1.0, 1.0, 0.5), KinematicsError);
    CHECK_THROWS_AS((void)lightcone_kinematics(0.5, 1.0, 1.0, 0.5), DomainError);
    CHECK_FALSE(lightcone_kinematics(1.0, 0.0, 1.0, 0.0).epsilon_tilde.has_value());
    for (double lt : {0.3, 1.0, 2.5}) {
        for (int N : {1, 3, 7}) {
            for (double kappa : {-2.0, 0.0, 0.7}) {
                const double E = relativistic_energy(1.0, lt, kappa, N);
                const auto lc = lightcone_kinematics(E, kappa, 1.0, lt);
                REQUIRE(lc.epsilon_tilde.has_value());
                CHECK(std::abs(*lc.epsilon_tilde + 1.0 / (N * N)) < 1e-12);
            }
        }
    }
}
