#include "dirac_ps/spectra.hpp"

#include <cmath>
#include <string>

#include "dirac_ps/error.hpp"

namespace dirac_ps::spectra {

namespace {

void require_mass(double m) {
    if (!(m > 0.0)) {
        throw DomainError("mass must satisfy m > 0, got " + std::to_string(m));
    }
}

void require_principal(int N) {
    if (N < 1) {
        throw DomainError("principal number must satisfy N >= 1, got " + std::to_string(N));
    }
}

} // namespace

void SpectrumParams::validate() const {
    require_mass(m);
    if (!(mu0 > 0.0)) {
        throw DomainError("magneton must satisfy mu0 > 0, got " + std::to_string(mu0));
    }
    if (!(L > 0.0)) {
        throw DomainError("box length must satisfy L > 0, got " + std::to_string(L));
    }
    if (!std::isfinite(g) || !std::isfinite(omega)) {
        throw DomainError("g and omega must be finite");
    }
}

SpectrumParams SpectrumParams::from_current(double m, double g, double mu0, double current, double L) {
    return {m, g, mu0, 2.0 * current, L};
}

QuantumNumbers QuantumNumbers::make(int n, int k, int Ntilde) { return {n, k, principal_number(n, k), Ntilde}; }

double coupling_lambda_tilde(const SpectrumParams& p) { return p.g * p.mu0 * p.omega; }

double charge_density_si(double current, double c) {
    if (!(c > 0.0)) {
        throw DomainError("speed of light must be positive");
    }
    return current / (c * c);
}

int principal_number(int n, int k) {
    if (n < 0 || k < 0) {
        throw DomainError("quantum numbers must satisfy n >= 0 and k >= 0");
    }
    return 2 * (n + k) + 1;
}

double reduced_eigenvalue(int n, int k) {
    const double N = principal_number(n, k);
    return -1.0 / (N * N);
}

double nonrel_energy(double lambda_tilde, double M, int N) {
    if (!(M > 0.0)) {
        throw DomainError("nonrel_energy: M must be positive, got " + std::to_string(M));
    }
    require_principal(N);
    return -2.0 * lambda_tilde * lambda_tilde * M / (static_cast<double>(N) * N);
}

double relativistic_energy(double m, double lambda_tilde, double kappa, int N) {
    require_mass(m);
    require_principal(N);
    // s = E - kappa is the positive root of (1 + a) s^2 + 2 kappa s - m^2 = 0,
    // a = lambda~^2 / N^2; pick the cancellation-free form of the root.
    const double a = lambda_tilde * lambda_tilde / (static_cast<double>(N) * N);
    const double root = std::sqrt(kappa * kappa + m * m * (1.0 + a));
    const double s = kappa > 0.0 ? m * m / (kappa + root) : (root - kappa) / (1.0 + a);
    return kappa + s;
}

double quasirel_energy(double m, double lambda_tilde, double kappa, int N) {
    require_mass(m);
    require_principal(N);
    const double lambda_kappa = (1.0 - kappa / m) * lambda_tilde;
    const double k2 = kappa * kappa;
    return m + k2 / (2.0 * m) - k2 * k2 / (8.0 * m * m * m) -
           m * lambda_kappa * lambda_kappa / (2.0 * static_cast<double>(N) * N);
}

double nonrel_energy_shifted(double m, double lambda_tilde, double kappa, int N) {
    require_mass(m);
    return m + kappa * kappa / (2.0 * m) + 0.5 * nonrel_energy(lambda_tilde, 0.5 * m, N);
}

double quantized_kappa(double L, int Ntilde) {
    if (!(L > 0.0)) {
        throw DomainError("quantized_kappa: L must be positive, got " + std::to_string(L));
    }
    return 2.0 * std::numbers::pi * Ntilde / L;
}

LightConeKinematics lightcone_kinematics(double E, double kappa, double m, double lambda_tilde) {
    if (!(E > kappa)) {
        throw KinematicsError("light-cone kinematics require E > kappa (M > 0); got E = " + std::to_string(E) +
                              ", kappa = " + std::to_string(kappa));
    }
    LightConeKinematics out;
    out.E = E;
    out.kappa = kappa;
    out.epsilon = E + kappa;
    out.M = 0.5 * (E - kappa);
    out.epsilon0 = m * m / (2.0 * out.M);
    out.epsilon_prime = out.epsilon - out.epsilon0;
    if (lambda_tilde != 0.0) {
        out.epsilon_tilde = out.epsilon_prime / (2.0 * out.M * lambda_tilde * lambda_tilde);
    }
    return out;
}

} // namespace dirac_ps::spectra
