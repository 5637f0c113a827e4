#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dirac_ps/error.hpp"
#include "dirac_ps/fields_solution.hpp"
#include "dirac_ps/quadrature.hpp"

using namespace dirac_ps;
using namespace dirac_ps::fields;

namespace {

const Complex I{0.0, 1.0};

// [[a, b], [c, d]] with 2x2 blocks.
Mat4 block(const std::array<std::array<Complex, 2>, 2>& a, const std::array<std::array<Complex, 2>, 2>& b,
           const std::array<std::array<Complex, 2>, 2>& c, const std::array<std::array<Complex, 2>, 2>& d) {
    Mat4 m{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            m[i][j] = a[i][j];
            m[i][j + 2] = b[i][j];
            m[i + 2][j] = c[i][j];
            m[i + 2][j + 2] = d[i][j];
        }
    }
    return m;
}

using M2 = std::array<std::array<Complex, 2>, 2>;
const M2 zero2{};
const M2 id2{{{1.0, 0.0}, {0.0, 1.0}}};
const M2 sigma1{{{0.0, 1.0}, {1.0, 0.0}}};
const M2 sigma2{{{0.0, -I}, {I, 0.0}}};

M2 scaled(const M2& m, Complex s) {
    M2 out = m;
    for (auto& row : out)
        for (auto& v : row) v *= s;
    return out;
}

double distance(const Mat4& a, const Mat4& b) {
    double d = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
    return d;
}

double max_abs(const Spinor4& v) {
    double d = 0.0;
    for (const auto& c : v) d = std::max(d, std::abs(c));
    return d;
}

spectra::SpectrumParams params_with(double lambda_tilde) {
    spectra::SpectrumParams p;
    p.omega = lambda_tilde;
    return p;
}

} // namespace

TEST_CASE("filament fields") {
    const auto f = field_strengths(1.0, 1.0, 0.0);
    CHECK(f.E_vec == std::array<double, 3>{1.0, 0.0, 0.0});
    CHECK(f.B_vec == std::array<double, 3>{0.0, 1.0, 0.0});
    const auto z = field_strengths(0.0, 0.3, -0.2);
    CHECK(z.E_vec == std::array<double, 3>{0.0, 0.0, 0.0});
    CHECK(z.B_vec == std::array<double, 3>{0.0, 0.0, 0.0});
    CHECK_THROWS_AS((void)field_strengths(1.0, 0.0, 0.0), DomainError);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int i = 0; i < 100; ++i) {
        const auto p = field_strengths(u(rng), u(rng), u(rng));
        const double scale = p.E_vec[0] * p.E_vec[0] + p.E_vec[1] * p.E_vec[1];
        CHECK(std::abs(p.invariant_difference()) <= 1e-15 * std::max(1.0, scale));
        CHECK(std::abs(p.invariant_product()) <= 1e-15 * std::max(1.0, scale));
    }
}

TEST_CASE("field tensor conventions") {
    const auto f = field_strengths(2.0, 0.6, 0.8);
    const auto t = field_tensor(f);
    for (int a = 1; a <= 3; ++a) CHECK(t[0][a] == -f.E_vec[a - 1]);
    CHECK(t[1][2] == f.B_vec[2]);
    CHECK(t[2][3] == f.B_vec[0]);
    CHECK(t[3][1] == f.B_vec[1]);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(t[i][j] == -t[j][i]);
}

TEST_CASE("Dirac matrices") {
    CHECK(clifford_defect() == 0.0);
    CHECK(distance(gamma_upper(0), block(zero2, id2, id2, zero2)) == 0.0);
    CHECK(distance(gamma_upper(3), block(zero2, id2, scaled(id2, -1.0), zero2)) == 0.0);
    CHECK(distance(gamma_upper(1), block(scaled(sigma1, -I), zero2, zero2, scaled(sigma1, I))) == 0.0);
    CHECK(distance(gamma_upper(2), block(scaled(sigma2, -I), zero2, zero2, scaled(sigma2, I))) == 0.0);
    // S^{0a} = (i/4)[gamma^0, gamma^a] = [[0, -sigma_a/2], [sigma_a/2, 0]]
    CHECK(distance(spin_tensor(0, 1), block(zero2, scaled(sigma1, -0.5), scaled(sigma1, 0.5), zero2)) < 1e-16);
    CHECK(distance(spin_tensor(0, 2), block(zero2, scaled(sigma2, -0.5), scaled(sigma2, 0.5), zero2)) < 1e-16);
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
            Mat4 s = spin_tensor(nu, mu);
            for (auto& row : s)
                for (auto& v : row) v = -v;
            CHECK(distance(spin_tensor(mu, nu), s) == 0.0);
        }
    CHECK(metric(0, 0) == 1.0);
    CHECK(metric(2, 2) == -1.0);
    CHECK(metric(1, 2) == 0.0);
}

TEST_CASE("eta components, n = 0") {
    const double m = 1.0, E = 1.3, kappa = 0.4, lt = 0.7;
    const double mu = m / (E - kappa);
    for (int k = 0; k <= 3; ++k) {
        const int N = 2 * k + 1;
        const auto state = susy::ground_state(k);
        const auto eta = eta_components(state, m, E, kappa, lt);
        const Rational a{N};
        const auto eta2 = KExpr::term(-(lt / N + mu), k + 1, BesselKind::k0, a);
        auto eta1 = KExpr::term(lt / N + mu, k + 1, BesselKind::k1, a) + KExpr::term(-lt * N, k, BesselKind::k0, a);
        CHECK(approx_equal(eta.eta2, eta2, 1e-13));
        CHECK(approx_equal(eta.eta1, eta1, 1e-13));
    }
    CHECK_THROWS_AS((void)eta_components(susy::ground_state(0), m, 0.4, 0.4, lt), KinematicsError);
    const auto flat = eta_components(susy::ground_state(1), m, E, kappa, 0.0);
    CHECK(approx_equal(flat.eta1, mu * susy::ground_state(1).phi.first, 1e-15));
    CHECK(approx_equal(flat.eta2, mu * susy::ground_state(1).phi.second, 1e-15));
}

TEST_CASE("assembled solutions satisfy the Dirac-Pauli equation") {
    const auto params = params_with(2.0);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (auto [n, k, nt] : {std::tuple{0, 0, 0}, std::tuple{1, 0, 1}, std::tuple{0, 1, 2}, std::tuple{1, 1, 2}}) {
        const auto sol = assemble_bispinor(params, n, k, nt);
        CHECK(sol.E > sol.kappa);
        for (int i = 0; i < 5; ++i) {
            const SpacetimePoint x{u(rng), u(rng), u(rng), u(rng)};
            if (std::hypot(x[1], x[2]) < 0.05) continue;
            const auto st = dirac_residual_study(sol, params, x);
            CHECK(std::abs(st.extrapolated) < 1e-6);
            CHECK(reduced_residual(sol, params, x) < 1e-6);
        }
    }
    const auto ground = assemble_bispinor(params, 0, 0, 0);
    // stencil straddling the angular branch cut on the negative x1 axis
    const auto across = assemble_bispinor(params, 1, 1, 0);
    CHECK(dirac_residual_study(across, params, {0.0, -0.4, 1e-5, 0.0}).extrapolated < 1e-6);
    CHECK(reduced_residual(across, params, {0.0, -0.4, -1e-5, 0.0}) < 1e-6);
    const auto st = dirac_residual_study(ground, params, {0.2, 0.5, -0.3, 0.1}, 1e-3);
    CHECK(st.ratio == doctest::Approx(4.0).epsilon(0.05));
    CHECK_THROWS_AS((void)dirac_residual(ground, params, {0.0, 1e-4, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS((void)assemble_bispinor(params_with(0.0), 0, 0, 0), DomainError);
}

TEST_CASE("free plane wave") {
    const double m = 1.3, kappa = 0.6, E = std::hypot(m, kappa);
    // the lower pair is m/(E - kappa) times the upper pair, with no transverse dependence
    const double ratio = m / (E - kappa);
    const Spinor4 u{Complex{0.8}, Complex{-0.3, 0.2}, Complex{0.8 * ratio}, Complex{-0.3, 0.2} * ratio};
    const SpinorField psi = [&](const SpacetimePoint& x) {
        const Complex phase = std::polar(1.0, -(E * x[0] - kappa * x[3]));
        Spinor4 out{};
        for (int j = 0; j < 4; ++j) out[j] = phase * u[j];
        return out;
    };
    const SpacetimePoint x{0.4, 0.7, -0.2, 1.1};
    const double r1 = max_abs(dirac_operator_residual(psi, m, 0.0, 0.0, x, 1e-3));
    const double r2 = max_abs(dirac_operator_residual(psi, m, 0.0, 0.0, x, 5e-4));
    CHECK(r1 < 1e-5);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("probability density") {
    const auto params = params_with(2.0);
    for (auto [n, k] : {std::pair{0, 0}, std::pair{1, 1}}) {
        const auto sol = assemble_bispinor(params, n, k, 1);
        for (double rho : {1e-3, 0.1, 1.0, 5.0}) CHECK(probability_density(sol, rho * 0.6, rho * 0.8) >= 0.0);
        // integral over the transverse plane times L
        const auto res = quad::integrate(
            [&](double rho) { return 2.0 * std::numbers::pi * rho * sol.L * probability_density(sol, rho, 0.0); }, 0.0,
            80.0 * sol.N / sol.scale_factor, {0.0, 1e-12, 20000});
        CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));
        CHECK_THROWS_AS((void)probability_density(sol, 0.0, 0.0), DomainError);
    }
}

TEST_CASE("density approximation deviation scales with the coupling") {
    auto deviation = [](double lt) {
        const auto sol = assemble_bispinor(params_with(lt), 0, 1, 0);
        double worst = 0.0;
        for (double r : {0.5, 1.0, 2.0, 4.0}) {
            const double rho = r / sol.scale_factor;
            const double exact = probability_density(sol, rho, 0.0);
            worst = std::max(worst, std::abs(approximate_density(sol, rho, 0.0) - exact) / exact);
        }
        return worst;
    };
    const double d1 = deviation(1e-2);
    const double d2 = deviation(5e-3);
    CHECK(d1 < 5e-2);
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("reflection") {
    const auto params = params_with(2.0);
    const auto sol = assemble_bispinor(params, 0, 1, 1);
    const auto ref = reflect_solution(sol);
    CHECK(ref.k == -1);
    CHECK(ref.reflected);
    CHECK(ref.angular == std::array<double, 4>{-1.5, -0.5, -1.5, -0.5});

    const auto twice = reflect_solution(ref);
    CHECK(twice.k == sol.k);
    CHECK(twice.angular == sol.angular);
    for (int j = 0; j < 4; ++j) CHECK(approx_equal(twice.components[j], sol.components[j], 0.0));

    const Mat4 q = reflection_matrix();
    CHECK(distance(q, block(sigma2, zero2, zero2, sigma2)) < 1e-15);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const SpacetimePoint x{u(rng), u(rng), u(rng), u(rng)};
        const Spinor4 direct = q * evaluate(sol, {x[0], -x[1], x[2], x[3]});
        const Spinor4 packed = evaluate(ref, x);
        // equal up to the sign of the angular branch
        const double sign = std::real(packed[0] / direct[0]) > 0.0 ? 1.0 : -1.0;
        if (x[2] > 0.0) CHECK(sign == 1.0);
        for (int j = 0; j < 4; ++j) CHECK(std::abs(sign * direct[j] - packed[j]) < 1e-13 * (1.0 + std::abs(direct[j])));
        if (std::hypot(x[1], x[2]) > 0.05) CHECK(dirac_residual_study(ref, params, x).extrapolated < 1e-6);
    }
}

TEST_CASE("solution decays at both ends") {
    const auto sol = assemble_bispinor(params_with(2.0), 1, 0, 0);
    const double near = max_abs(evaluate(sol, {0.0, 1e-9, 0.0, 0.0}));
    const double far = max_abs(evaluate(sol, {0.0, 150.0 / sol.scale_factor, 0.0, 0.0}));
    const double mid = max_abs(evaluate(sol, {0.0, 1.0 / sol.scale_factor, 0.0, 0.0}));
    CHECK(std::isfinite(near));
    CHECK(far < 1e-12 * mid);
    CHECK_THROWS_AS((void)evaluate(sol, {0.0, 0.0, 0.0, 0.0}), DomainError);
}
