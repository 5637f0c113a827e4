#include "dirac_ps/susy_radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "dirac_ps/error.hpp"
#include "dirac_ps/quadrature.hpp"
#include "dirac_ps/spectra.hpp"

namespace dirac_ps::susy {

RadialPair combine(const RadialPair& a, const RadialPair& b, double ca, double cb) {
    return {dirac_ps::combine(a.first, b.first, ca, cb), dirac_ps::combine(a.second, b.second, ca, cb)};
}

RadialPair differentiate(const RadialPair& f) {
    return {dirac_ps::differentiate(f.first), dirac_ps::differentiate(f.second)};
}

double relative_residual(const RadialPair& f) {
    return std::max(dirac_ps::relative_residual(f.first), dirac_ps::relative_residual(f.second));
}

bool is_zero(const RadialPair& f, double tol) {
    return dirac_ps::is_zero(f.first, tol) && dirac_ps::is_zero(f.second, tol);
}

bool approx_equal(const RadialPair& a, const RadialPair& b, double tol) { return is_zero(combine(a, b, 1.0, -1.0), tol); }

SectorOperators SectorOperators::for_sector(int k) {
    if (k < 0) {
        throw DomainError("sector operators need k >= 0, got " + std::to_string(k));
    }
    SectorOperators ops;
    ops.k = k;
    ops.w_diag = Rational{1, 2};
    ops.w_offdiag = Rational{-1, 2 * k + 1};
    ops.w_scalar = -(Rational{k} + Rational{1, 2});
    ops.c_k = -(ops.w_offdiag * ops.w_offdiag);
    return ops;
}

namespace {

// W_k f without the derivative: (d1/r) f1 + w f2, (d2/r) f2 + w f1
RadialPair superpotential_apply(const SectorOperators& ops, const RadialPair& f) {
    const double d1 = (ops.w_scalar + ops.w_diag).to_double();
    const double d2 = (ops.w_scalar - ops.w_diag).to_double();
    const double w = ops.w_offdiag.to_double();
    return {dirac_ps::combine(shift_power(f.first, -1), f.second, d1, w),
            dirac_ps::combine(shift_power(f.second, -1), f.first, d2, w)};
}

} // namespace

RadialPair lowering_apply(const SectorOperators& ops, const RadialPair& f) {
    return combine(differentiate(f), superpotential_apply(ops, f), 1.0, 1.0);
}

RadialPair lowering_apply(int k, const RadialPair& f) { return lowering_apply(SectorOperators::for_sector(k), f); }

RadialPair raising_apply(const SectorOperators& ops, const RadialPair& f) {
    return combine(differentiate(f), superpotential_apply(ops, f), -1.0, 1.0);
}

RadialPair raising_apply(int k, const RadialPair& f) { return raising_apply(SectorOperators::for_sector(k), f); }

RadialPair hamiltonian_apply(int k, const RadialPair& f) {
    if (k < 0) {
        throw DomainError("hamiltonian_apply needs k >= 0");
    }
    const auto second = differentiate(differentiate(f));
    const double c1 = static_cast<double>(k) * (k - 1);
    const double c2 = static_cast<double>(k) * (k + 1);
    auto out1 = dirac_ps::combine(second.first, shift_power(f.first, -2), -1.0, c1);
    auto out2 = dirac_ps::combine(second.second, shift_power(f.second, -2), -1.0, c2);
    return {out1 + shift_power(f.second, -1), out2 + shift_power(f.first, -1)};
}

RadialPair factorized_apply(const SectorOperators& ops, const RadialPair& f) {
    return combine(raising_apply(ops, lowering_apply(ops, f)), f, 1.0, ops.c_k.to_double());
}

RadialPair partner_apply(const SectorOperators& ops, const RadialPair& f) {
    return combine(lowering_apply(ops, raising_apply(ops, f)), f, 1.0, ops.c_k.to_double());
}

RadialSpinorExpr ground_state(int k) {
    if (k < 0) {
        throw DomainError("ground_state needs k >= 0");
    }
    const Rational scale{2 * k + 1};
    RadialSpinorExpr out;
    out.phi.first = KExpr::term(1.0, k + 1, BesselKind::k1, scale);
    out.phi.second = KExpr::term(-1.0, k + 1, BesselKind::k0, scale);
    out.n = 0;
    out.k = k;
    out.eps_tilde = spectra::reduced_eigenvalue(0, k);
    return out;
}

RadialSpinorExpr excited_state(int n, int k) {
    if (n < 0 || k < 0) {
        throw DomainError("excited_state needs n >= 0 and k >= 0");
    }
    RadialPair phi = ground_state(k + n).phi;
    for (int j = k + n - 1; j >= k; --j) {
        phi = raising_apply(j, phi);
    }
    RadialSpinorExpr out;
    out.phi = std::move(phi);
    out.n = n;
    out.k = k;
    out.eps_tilde = spectra::reduced_eigenvalue(n, k);
    return out;
}

namespace {

double max_scale(const RadialPair& f) {
    return std::max(dirac_ps::max_scale(f.first).to_double(), dirac_ps::max_scale(f.second).to_double());
}

double pair_product_integral(const RadialPair& f, const RadialPair& g, double abs_tol) {
    if ((f.first.empty() && f.second.empty()) || (g.first.empty() && g.second.empty())) {
        return 0.0;
    }
    const double scale = std::max(max_scale(f), max_scale(g));
    const double r_max = 20.0 * scale;
    auto integrand = [&](double r) {
        return evaluate(f.first, r) * evaluate(g.first, r) + evaluate(f.second, r) * evaluate(g.second, r);
    };
    auto magnitude = [&](double r) { return std::abs(integrand(r)); };

    quad::Options opts{abs_tol, 1e-12, 20000};
    const auto main = quad::integrate(integrand, 0.0, r_max, opts);

    // Growth test at the origin: for an integrable r^a (a > -1) the mass in
    // successive decades shrinks geometrically; for r^-1 or worse it does not.
    const double d1 = 1e-3 * scale;
    const double d2 = 1e-6 * scale;
    const double d3 = 1e-9 * scale;
    const double s1 = quad::integrate(magnitude, d2, d1, {0.0, 1e-6, 2000}).value;
    const double s2 = quad::integrate(magnitude, d3, d2, {0.0, 1e-6, 2000}).value;
    // main.value is meaningless when the origin diverges; compare against the bulk
    const double bulk = quad::integrate(magnitude, d1, r_max, {0.0, 1e-6, 2000}).value;
    const double size = std::max(bulk, s1);
    if (!std::isfinite(main.value) || (s2 > 0.5 * s1 && s2 > 1e-14 * size)) {
        throw DivergenceError("radial integral diverges at r = 0 (mass per decade not shrinking)");
    }
    if (!main.converged) {
        throw DivergenceError("radial integral did not converge on (0, " + std::to_string(r_max) + ")");
    }
    // Extend past 20 * scale while the polynomial prefactors still leave a
    // visible tail; a tail that fails to shrink means no decay.
    double total = main.value;
    double lo = r_max;
    double previous_tail = std::numeric_limits<double>::infinity();
    for (int step = 0;; ++step) {
        const double tail_mass = quad::integrate(magnitude, lo, 2.0 * lo, {0.0, 1e-10, 4000}).value;
        if (tail_mass <= 1e-15 * std::max(std::abs(total), abs_tol)) {
            break;
        }
        if (step >= 6 || !(tail_mass < 0.5 * previous_tail)) {
            throw DivergenceError("radial integrand does not decay beyond r = " + std::to_string(lo));
        }
        total += quad::integrate(integrand, lo, 2.0 * lo, {abs_tol, 1e-12, 4000}).value;
        previous_tail = tail_mass;
        lo *= 2.0;
    }
    return total;
}

} // namespace

double norm_squared(const RadialPair& f) { return pair_product_integral(f, f, 0.0); }

double inner_product(const RadialPair& f, const RadialPair& g) {
    const double nf = norm_squared(f);
    const double ng = norm_squared(g);
    return pair_product_integral(f, g, 1e-14 * std::sqrt(nf * ng));
}

RadialPair normalized(const RadialPair& f) {
    const double n2 = norm_squared(f);
    if (!(n2 > 0.0)) {
        throw DomainError("cannot normalize the zero radial function");
    }
    return combine(f, RadialPair{}, 1.0 / std::sqrt(n2), 0.0);
}

namespace {

using Complex = std::complex<double>;
using Mat2 = std::array<Complex, 4>; // row-major

Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

Mat2 dagger(const Mat2& a) { return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}; }

} // namespace

double unitary_equivalence_check(double x1, double x2) {
    const double x_sq = x1 * x1 + x2 * x2;
    if (!(x_sq > 0.0)) {
        throw DomainError("unitary_equivalence_check: point must be off the origin");
    }
    const Complex i{0.0, 1.0};
    const Mat2 sigma1{0.0, 1.0, 1.0, 0.0};
    const Mat2 sigma2{0.0, -i, i, 0.0};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const Mat2 u{inv_sqrt2 * (1.0 - i), 0.0, 0.0, inv_sqrt2 * (1.0 + i)};

    Mat2 coupling{};
    for (std::size_t j = 0; j < 4; ++j) {
        coupling[j] = (sigma1[j] * x1 + sigma2[j] * x2) / x_sq;
    }
    const Mat2 rotated = mul(mul(u, coupling), dagger(u));
    double worst = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
        // 2 (S1 x2 - S2 x1) = sigma1 x2 - sigma2 x1
        const Complex spin_term = (sigma1[j] * x2 - sigma2[j] * x1) / x_sq;
        worst = std::max(worst, std::abs(rotated[j] + spin_term));
    }
    return worst;
}

} // namespace dirac_ps::susy
