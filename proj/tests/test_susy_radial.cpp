#include <doctest.h>

#include <cmath>
#include <random>

#include "dirac_ps/error.hpp"
#include "dirac_ps/quadrature.hpp"
#include "dirac_ps/susy_radial.hpp"
#include "dirac_ps/verify.hpp"

using namespace dirac_ps;
using namespace dirac_ps::susy;
using K = BesselKind;

namespace {

RadialPair pair(KExpr a, KExpr b) { return {std::move(a), std::move(b)}; }

// Numerical L2 product on (0, 60 * scale], without the library integrator.
double plain_product(const RadialPair& f, const RadialPair& g, double upper) {
    auto integrand = [&](double r) {
        return evaluate(f.first, r) * evaluate(g.first, r) + evaluate(f.second, r) * evaluate(g.second, r);
    };
    return quad::integrate(integrand, 0.0, upper, {1e-15, 1e-11, 20000}).value;
}

} // namespace

TEST_CASE("sector operator coefficients are exact rationals") {
    for (int k = 0; k <= 10; ++k) {
        const auto ops = SectorOperators::for_sector(k);
        CHECK(ops.w_diag == Rational(1, 2));
        CHECK(ops.w_offdiag == Rational(-1, 2 * k + 1));
        CHECK(ops.w_scalar == Rational(-(2 * k + 1), 2));
        CHECK(ops.c_k == -(ops.w_offdiag * ops.w_offdiag));
    }
    CHECK_THROWS_AS((void)SectorOperators::for_sector(-1), DomainError);
}

TEST_CASE("ground states") {
    const auto g0 = ground_state(0);
    CHECK(g0.phi.first.terms() == KExpr::term(1, 1, K::k1, Rational{1}).terms());
    CHECK(g0.phi.second.terms() == KExpr::term(-1, 1, K::k0, Rational{1}).terms());
    CHECK(g0.eps_tilde == -1.0);
    const auto g1 = ground_state(1);
    CHECK(g1.phi.first.terms() == KExpr::term(1, 2, K::k1, Rational{3}).terms());
    CHECK(g1.phi.second.terms() == KExpr::term(-1, 2, K::k0, Rational{3}).terms());
    CHECK(g1.eps_tilde == doctest::Approx(-1.0 / 9));
    CHECK(excited_state(0, 3).phi.first.terms() == ground_state(3).phi.first.terms());
    CHECK(excited_state(0, 3).phi.second.terms() == ground_state(3).phi.second.terms());
}

TEST_CASE("annihilation of ground states") {
    for (int k = 0; k <= 6; ++k) {
        CHECK(is_zero(lowering_apply(k, ground_state(k).phi), 1e-12));
    }
    CHECK(is_zero(lowering_apply(0, RadialPair{}), 0.0));
    CHECK(is_zero(raising_apply(3, RadialPair{}), 0.0));
}

TEST_CASE("a_0^+ on the k = 1 ground state") {
    const Rational three{3};
    const auto out = raising_apply(0, ground_state(1).phi);
    const auto e1 = KExpr::term(4.0 / 3, 2, K::k0, three) + KExpr::term(-1, 1, K::k1, three);
    const auto e2 = KExpr::term(3, 1, K::k0, three) + KExpr::term(-4.0 / 3, 2, K::k1, three);
    CHECK(approx_equal(out, pair(e1, e2), 1e-15));
}

TEST_CASE("first excited state matches the closed form") {
    for (int k = 0; k <= 3; ++k) {
        const Rational b{2 * k + 3};
        const double c = 4.0 * (k + 1) / ((2.0 * k + 1) * (2.0 * k + 3));
        const auto p1 = KExpr::term(c, k + 2, K::k0, b) + KExpr::term(-(2.0 * k + 1), k + 1, K::k1, b);
        const auto p2 = KExpr::term(2.0 * k + 3, k + 1, K::k0, b) + KExpr::term(-c, k + 2, K::k1, b);
        const auto st = excited_state(1, k);
        REQUIRE(st.phi.first.terms().size() == 2);
        REQUIRE(st.phi.second.terms().size() == 2);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(st.phi.first.terms()[i].power == p1.terms()[i].power);
            CHECK(st.phi.first.terms()[i].kind == p1.terms()[i].kind);
            CHECK(st.phi.first.terms()[i].scale == p1.terms()[i].scale);
            CHECK(st.phi.first.terms()[i].coeff == doctest::Approx(p1.terms()[i].coeff).epsilon(1e-15));
            CHECK(st.phi.second.terms()[i].coeff == doctest::Approx(p2.terms()[i].coeff).epsilon(1e-15));
        }
    }
}

TEST_CASE("eigen-residual for n + k <= 4 and beyond") {
    for (int n = 0; n <= 6; ++n) {
        for (int k = 0; n + k <= 6; ++k) {
            const auto st = excited_state(n, k);
            CHECK(st.eps_tilde == doctest::Approx(-1.0 / ((2.0 * (n + k) + 1) * (2.0 * (n + k) + 1))));
            const auto res = combine(hamiltonian_apply(k, st.phi), st.phi, 1.0, -st.eps_tilde);
            CHECK(is_zero(res, 1e-10));
        }
    }
}

TEST_CASE("hamiltonian against explicit formula") {
    // H_0 (r K1(r), -r K0(r)) = -(r K1, -r K0)
    const auto g = ground_state(0).phi;
    CHECK(is_zero(combine(hamiltonian_apply(0, g), g, 1.0, 1.0), 1e-12));
    CHECK_THROWS_AS((void)hamiltonian_apply(-1, g), DomainError);
}

TEST_CASE("factorization, shape invariance and intertwining on random pairs") {
    std::mt19937_64 rng(11);
    for (int k = 0; k <= 4; ++k) {
        const auto ops = SectorOperators::for_sector(k);
        for (int i = 0; i < 50; ++i) {
            const auto f = verify::random_radial_pair(rng);
            CHECK(approx_equal(factorized_apply(ops, f), hamiltonian_apply(k, f), 1e-12));
            CHECK(approx_equal(partner_apply(ops, f), hamiltonian_apply(k + 1, f), 1e-12));
            CHECK(approx_equal(hamiltonian_apply(k, raising_apply(k, f)), raising_apply(k, hamiltonian_apply(k + 1, f)),
                               1e-12));
        }
    }
}

TEST_CASE("linearity") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const auto f = verify::random_radial_pair(rng), g = verify::random_radial_pair(rng);
        const auto lhs = lowering_apply(2, combine(f, g, 1.5, -0.25));
        const auto rhs = combine(lowering_apply(2, f), lowering_apply(2, g), 1.5, -0.25);
        CHECK(approx_equal(lhs, rhs, 1e-12));
    }
}

TEST_CASE("adjointness of the ladder operators") {
    // Samples vanishing at the origin fast enough for the boundary term to drop.
    const Rational two{2}, three{3};
    const RadialPair f = pair(KExpr::term(1, 3, K::k1, two), KExpr::term(0.5, 4, K::k0, three));
    const RadialPair g = pair(KExpr::term(-0.7, 3, K::k0, three), KExpr::term(1.2, 3, K::k1, two));
    for (int k = 0; k <= 2; ++k) {
        const double lhs = plain_product(raising_apply(k, f), g, 200.0);
        const double rhs = plain_product(f, lowering_apply(k, g), 200.0);
        CHECK(std::abs(lhs - rhs) < 1e-8 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("norms and orthogonality") {
    const auto g = ground_state(0).phi;
    const double n2 = norm_squared(g);
    CHECK(n2 > 0.0);
    CHECK(std::isfinite(n2));
    // int_0^inf r^2 (K1^2 + K0^2) dr = 3 pi^2 / 32 + pi^2 / 32 = pi^2 / 8
    CHECK(n2 == doctest::Approx(M_PI * M_PI / 8).epsilon(1e-10));
    CHECK(norm_squared(combine(g, RadialPair{}, 2.0, 0.0)) == doctest::Approx(4 * n2).epsilon(1e-12));
    CHECK(norm_squared(RadialPair{}) == 0.0);
    for (int k = 0; k <= 3; ++k) {
        const auto a = normalized(excited_state(0, k).phi);
        const auto b = normalized(excited_state(1, k).phi);
        CHECK(norm_squared(a) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(inner_product(a, b)) < 1e-8);
    }
    const auto a = normalized(excited_state(0, 0).phi);
    const auto c = normalized(excited_state(2, 0).phi);
    CHECK(std::abs(inner_product(a, c)) < 1e-8);
    CHECK(inner_product(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(plain_product(a, a, 60.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS((void)normalized(RadialPair{}), DomainError);
}

TEST_CASE("non-integrable input is detected") {
    // r^-1 K1(r) ~ r^-2 near the origin: the squared integrand diverges.
    const RadialPair bad = pair(KExpr::term(1, -1, K::k1, Rational{1}), KExpr{});
    CHECK_THROWS_AS((void)norm_squared(bad), DivergenceError);
    // K0 alone is integrable despite the logarithm.
    const RadialPair ok = pair(KExpr::term(1, 0, K::k0, Rational{1}), KExpr{});
    CHECK(norm_squared(ok) == doctest::Approx(M_PI * M_PI / 4).epsilon(1e-9));
}

TEST_CASE("unitary equivalence of the two radial Hamiltonians") {
    CHECK(unitary_equivalence_check(1, 0) <= 1e-14);
    CHECK(unitary_equivalence_check(0.3, -2.1) <= 1e-14);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int i = 0; i < 100; ++i) CHECK(unitary_equivalence_check(u(rng), u(rng)) <= 1e-14);
    CHECK_THROWS_AS((void)unitary_equivalence_check(0, 0), DomainError);
}
