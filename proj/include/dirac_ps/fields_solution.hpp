#pragma once

// Filament fields, the Dirac matrices in the chiral-like realization
//
//   gamma^0 = [[0, I], [I, 0]],  gamma^3 = [[0, I], [-I, 0]],
//   gamma^a = i [[-sigma_a, 0], [0, sigma_a]]  (a = 1, 2),
//
// and assembly of the exact bispinor bound states
//
//   psi_j = N exp(-i(E x0 - kappa x3)) exp(i m_j theta) c_j(r) / sqrt(2 pi L r),
//   c = (phi1, -s phi2, eta1, -s eta2),  m = (k - 1/2, k + 1/2, k - 1/2, k + 1/2),
//
// with r = (E - kappa) |lambda~| rho and s = sign(lambda~). The Pauli term is
// lambda sum_{mu<nu} S^{mu nu} F_{mu nu}, F_{0a} = -E_a, F_{ab} = eps_{abc} B_c.

#include <array>
#include <complex>
#include <functional>

#include "dirac_ps/bessel_algebra.hpp"
#include "dirac_ps/spectra.hpp"
#include "dirac_ps/susy_radial.hpp"

namespace dirac_ps::fields {

using Complex = std::complex<double>;
using Spinor4 = std::array<Complex, 4>;
using Mat4 = std::array<std::array<Complex, 4>, 4>;
using RealMat4 = std::array<std::array<double, 4>, 4>;
/// (x0, x1, x2, x3)
using SpacetimePoint = std::array<double, 4>;

/// Minkowski metric diag(1, -1, -1, -1).
[[nodiscard]] double metric(int mu, int nu);
[[nodiscard]] const Mat4& gamma_upper(int mu);
[[nodiscard]] Mat4 gamma_lower(int mu);
/// S^{mu nu} = (i/4)[gamma^mu, gamma^nu].
[[nodiscard]] Mat4 spin_tensor(int mu, int nu);
/// max |{gamma^mu, gamma^nu} - 2 g^{mu nu}| over all index pairs.
[[nodiscard]] double clifford_defect();

[[nodiscard]] Mat4 operator*(const Mat4& a, const Mat4& b);
[[nodiscard]] Spinor4 operator*(const Mat4& a, const Spinor4& v);

struct FieldPoint {
    std::array<double, 3> E_vec{};
    std::array<double, 3> B_vec{};

    /// |B|^2 - |E|^2
    [[nodiscard]] double invariant_difference() const;
    /// E . B
    [[nodiscard]] double invariant_product() const;
};

/// E = omega (x1, x2, 0)/x^2, B = omega (-x2, x1, 0)/x^2. DomainError on the filament.
[[nodiscard]] FieldPoint field_strengths(double omega, double x1, double x2);

/// Covariant F_{mu nu}.
[[nodiscard]] RealMat4 field_tensor(const FieldPoint& f);

/// lambda sum_{mu<nu} S^{mu nu} F_{mu nu}.
[[nodiscard]] Mat4 pauli_matrix(double lambda, const FieldPoint& f);

struct EtaPair {
    KExpr eta1;
    KExpr eta2;
};

/// eta1 = lt (d/dr + k/r) phi2 + m/(E-kappa) phi1,
/// eta2 = lt (d/dr - k/r) phi1 + m/(E-kappa) phi2. KinematicsError unless E > kappa.
[[nodiscard]] EtaPair eta_components(const susy::RadialSpinorExpr& state, double m, double E, double kappa,
                                     double lambda_tilde);

struct BispinorSolution {
    int n = 0;
    int k = 0; ///< negative after reflection
    int N = 1;
    int Ntilde = 0;
    double m = 1.0;
    double lambda = 1.0; ///< g mu0
    double omega = 1.0;
    double lambda_tilde = 1.0;
    double L = 0.0;
    double E = 0.0;
    double kappa = 0.0;
    double scale_factor = 0.0;  ///< (E - kappa) |lambda~|: physical radius to r
    double normalization = 0.0; ///< N > 0
    bool reflected = false;

    KExpr phi1, phi2, eta1, eta2; ///< radial factors of the unreflected state
    std::array<KExpr, 4> components;
    std::array<double, 4> angular{}; ///< m_j in exp(i m_j theta)
};

/// Exact normalized bound state (n, k, Ntilde). DomainError if lambda~ = 0.
[[nodiscard]] BispinorSolution assemble_bispinor(const spectra::SpectrumParams& params, int n, int k,
                                                 int Ntilde);

/// theta = atan2(x2, x1) in (-pi, pi]; with half-integer m_j the value changes
/// sign across the negative x1 axis. Residual stencils use a local branch.
[[nodiscard]] Spinor4 evaluate(const BispinorSolution& sol, const SpacetimePoint& x);

/// |psi|^2 at a spatial point; DomainError on the filament.
[[nodiscard]] double probability_density(const BispinorSolution& sol, double x1, double x2);

/// Leading-order density 2 N^2 (phi1^2 + phi2^2) / (2 pi L r).
[[nodiscard]] double approximate_density(const BispinorSolution& sol, double x1, double x2);

using SpinorField = std::function<Spinor4(const SpacetimePoint&)>;

/// (i gamma^mu d_mu - m - lambda S F) psi at x, derivatives by central
/// differences of step h in every coordinate.
[[nodiscard]] Spinor4 dirac_operator_residual(const SpinorField& psi, double m, double lambda, double omega,
                                              const SpacetimePoint& x, double h);

inline constexpr double kDefaultStep = 1e-4;

/// max_j |residual_j| for the assembled solution. DomainError when the point
/// lies within 10 h of the filament.
[[nodiscard]] double dirac_residual(const BispinorSolution& sol, const spectra::SpectrumParams& params,
                                    const SpacetimePoint& x, double h = kDefaultStep);

struct ResidualStudy {
    double at_h = 0.0;
    double at_half_h = 0.0;
    double extrapolated = 0.0; ///< max_j |(4 R(h/2) - R(h)) / 3|
    double ratio = 0.0;        ///< at_h / at_half_h, about 4 for a smooth O(h^2) error
};

[[nodiscard]] ResidualStudy dirac_residual_study(const BispinorSolution& sol, const spectra::SpectrumParams& params,
                                                 const SpacetimePoint& x, double h = kDefaultStep);

/// Residual of the (1+2)-dimensional system obtained by fixing the x0 and x3
/// dependence: d0 -> -iE and d3 -> i kappa exactly, central differences in x1, x2.
[[nodiscard]] double reduced_residual(const BispinorSolution& sol, const spectra::SpectrumParams& params,
                                      const SpacetimePoint& x, double h = kDefaultStep);

/// psi'(x) = i gamma_0 gamma_2 gamma_3 psi(x0, -x1, x2, x3): the k -> -k partner.
[[nodiscard]] BispinorSolution reflect_solution(const BispinorSolution& sol);

/// The constant matrix i gamma_0 gamma_2 gamma_3.
[[nodiscard]] Mat4 reflection_matrix();

} // namespace dirac_ps::fields
