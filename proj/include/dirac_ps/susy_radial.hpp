#pragma once

// Radial sector k of the reduced problem
//
//   H_k = -d^2/dr^2 + k(k - sigma3) / r^2 + sigma1 / r
//
// factorized as H_k = a_k^+ a_k + C_k with a_k = d/dr + W_k,
// a_k^+ = -d/dr + W_k and the matrix superpotential
//
//   W_k = sigma3 / (2r) - sigma1 / (2k+1) - (k + 1/2) / r,   C_k = -1/(2k+1)^2.
//
// Its superpartner a_k a_k^+ + C_k is H_{k+1}, so every bound state is a chain
// of raising operators applied to a ground state annihilated by a_{k+n}.
// All operators act exactly on pairs of KExpr.

#include "dirac_ps/bessel_algebra.hpp"
#include "dirac_ps/rational.hpp"

namespace dirac_ps::susy {

/// Two-component radial function (phi1, phi2).
struct RadialPair {
    KExpr first;
    KExpr second;
};

[[nodiscard]] RadialPair combine(const RadialPair& a, const RadialPair& b, double ca, double cb);
[[nodiscard]] RadialPair differentiate(const RadialPair& f);
[[nodiscard]] bool is_zero(const RadialPair& f, double tol = kCancellationTol);
[[nodiscard]] double relative_residual(const RadialPair& f);
[[nodiscard]] bool approx_equal(const RadialPair& a, const RadialPair& b, double tol = kCancellationTol);

/// Coefficients of W_k and C_k for one sector, as exact rationals in k.
struct SectorOperators {
    int k = 0;
    Rational w_diag{1, 2};  ///< coefficient of sigma3 / r
    Rational w_offdiag{-1}; ///< coefficient of sigma1: -1/(2k+1)
    Rational w_scalar{-1, 2}; ///< coefficient of 1/r: -(k + 1/2)
    Rational c_k{-1};       ///< factorization constant -1/(2k+1)^2

    /// Throws DomainError for k < 0.
    static SectorOperators for_sector(int k);
};

struct RadialSpinorExpr {
    RadialPair phi;
    int n = 0;
    int k = 0;
    double eps_tilde = -1.0;
};

/// a_k f: (f1' - (k/r) f1 - f2/(2k+1),  f2' - ((k+1)/r) f2 - f1/(2k+1)).
[[nodiscard]] RadialPair lowering_apply(const SectorOperators& ops, const RadialPair& f);
[[nodiscard]] RadialPair lowering_apply(int k, const RadialPair& f);

/// a_k^+ f: (-f1' - (k/r) f1 - f2/(2k+1),  -f2' - ((k+1)/r) f2 - f1/(2k+1)).
[[nodiscard]] RadialPair raising_apply(const SectorOperators& ops, const RadialPair& f);
[[nodiscard]] RadialPair raising_apply(int k, const RadialPair& f);

/// H_k f: (-f1'' + k(k-1) f1/r^2 + f2/r,  -f2'' + k(k+1) f2/r^2 + f1/r).
[[nodiscard]] RadialPair hamiltonian_apply(int k, const RadialPair& f);

/// (a_k^+ a_k + C_k) f, built from the supplied operator coefficients.
[[nodiscard]] RadialPair factorized_apply(const SectorOperators& ops, const RadialPair& f);

/// (a_k a_k^+ + C_k) f: the superpartner of H_k.
[[nodiscard]] RadialPair partner_apply(const SectorOperators& ops, const RadialPair& f);

/// phi(0,k) = (r^{k+1} K1(r/(2k+1)), -r^{k+1} K0(r/(2k+1))).
[[nodiscard]] RadialSpinorExpr ground_state(int k);

/// phi(n,k) = a_k^+ a_{k+1}^+ ... a_{k+n-1}^+ phi(0, k+n), eigenvalue -1/(2(n+k)+1)^2.
[[nodiscard]] RadialSpinorExpr excited_state(int n, int k);

/// Integral of phi1^2 + phi2^2 over (0, inf). Throws DivergenceError when the
/// integrand is not integrable at the origin or does not decay.
[[nodiscard]] double norm_squared(const RadialPair& f);

/// Integral of f1 g1 + f2 g2 over (0, inf), same error contract.
[[nodiscard]] double inner_product(const RadialPair& f, const RadialPair& g);

/// f scaled to unit L2 norm.
[[nodiscard]] RadialPair normalized(const RadialPair& f);

/// Largest entry magnitude of
///   U (sigma1 x1 + sigma2 x2) U^dag / x^2 + 2 (S1 x2 - S2 x1) / x^2,
/// U = (1 - i sigma3)/sqrt(2), S = sigma/2. Zero when the two radial
/// Hamiltonians are unitarily equivalent. DomainError at the origin.
[[nodiscard]] double unitary_equivalence_check(double x1, double x2);

} // namespace dirac_ps::susy
