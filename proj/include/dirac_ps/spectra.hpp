#pragma once

// Energy levels of the neutral fermion in the filament field, light-cone
// kinematics, and physical coupling conversions. Natural units (hbar = c = 1)
// unless a function name says otherwise.

#include <numbers>
#include <optional>

namespace dirac_ps::spectra {

struct SpectrumParams {
    double m = 1.0;     ///< fermion mass
    double g = 1.0;     ///< Lande factor
    double mu0 = 1.0;   ///< magneton
    double omega = 1.0; ///< potential coupling; omega = 2 j = 2 rho
    double L = 2.0 * std::numbers::pi; ///< periodic box length along x3

    /// Throws DomainError naming the violated invariant (m > 0, mu0 > 0, L > 0).
    void validate() const;

    /// Parameters specified through the filament current j (omega = 2 j).
    static SpectrumParams from_current(double m, double g, double mu0, double current, double L);
};

struct QuantumNumbers {
    int n = 0;      ///< radial
    int k = 0;      ///< angular momentum sector
    int N = 1;      ///< principal number 2(n + k) + 1
    int Ntilde = 0; ///< longitudinal mode number

    static QuantumNumbers make(int n, int k, int Ntilde = 0);
};

struct LightConeKinematics {
    double E = 0.0;
    double kappa = 0.0;
    double epsilon = 0.0;       ///< E + kappa
    double M = 0.0;             ///< (E - kappa) / 2
    double epsilon0 = 0.0;      ///< m^2 / (2M)
    double epsilon_prime = 0.0; ///< epsilon - epsilon0
    /// epsilon' / (2 M lambda~^2); absent when lambda~ = 0.
    std::optional<double> epsilon_tilde;
};

/// lambda~ = g mu0 omega (= 2 g mu0 j).
[[nodiscard]] double coupling_lambda_tilde(const SpectrumParams& p);

/// Filament line-charge density matching current j, in SI units: rho = j / c^2.
inline constexpr double kSpeedOfLight = 299792458.0;
[[nodiscard]] double charge_density_si(double current, double c = kSpeedOfLight);

/// N = 2(n + k) + 1; DomainError for negative inputs.
[[nodiscard]] int principal_number(int n, int k);

/// Reduced radial eigenvalue -1 / N^2.
[[nodiscard]] double reduced_eigenvalue(int n, int k);

/// eps' = -2 lambda~^2 M / N^2.
[[nodiscard]] double nonrel_energy(double lambda_tilde, double M, int N);

/// Exact relativistic level E(m, lambda~, kappa, N); always E > kappa.
[[nodiscard]] double relativistic_energy(double m, double lambda_tilde, double kappa, int N);

/// m + kappa^2/2m - kappa^4/8m^3 - m lambda_kappa^2 / 2N^2, lambda_kappa = (1 - kappa/m) lambda~.
[[nodiscard]] double quasirel_energy(double m, double lambda_tilde, double kappa, int N);

/// Rest energy + free longitudinal kinetic energy + the non-relativistic
/// level at M = m/2:  m + kappa^2/2m - m lambda~^2 / 2N^2.
[[nodiscard]] double nonrel_energy_shifted(double m, double lambda_tilde, double kappa, int N);

/// kappa = 2 pi Ntilde / L.
[[nodiscard]] double quantized_kappa(double L, int Ntilde);

/// Light-cone variables from (E, kappa); KinematicsError unless E > kappa.
[[nodiscard]] LightConeKinematics lightcone_kinematics(double E, double kappa, double m, double lambda_tilde);

} // namespace dirac_ps::spectra
