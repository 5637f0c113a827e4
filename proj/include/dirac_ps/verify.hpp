#pragma once

// Self-verification suite behind the `verify` command. Every check reports a
// measured value against a tolerance; names double as --tol keys.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dirac_ps/spectra.hpp"
#include "dirac_ps/susy_radial.hpp"

namespace dirac_ps::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
    std::vector<std::pair<std::string, double>> metrics;
};

struct VerifyOptions {
    std::uint64_t seed = 20240601;
    spectra::SpectrumParams params;
    std::map<std::string, double> tolerances;
    /// Operator coefficients per sector; replaceable for mutation testing.
    std::function<susy::SectorOperators(int)> operators = susy::SectorOperators::for_sector;
};

/// Default tolerance for every check name.
[[nodiscard]] const std::map<std::string, double>& default_tolerances();

/// Random KExpr pair: 1-4 terms per component, powers -1..4, scales from a
/// small rational set, coefficients in [-2, 2].
[[nodiscard]] susy::RadialPair random_radial_pair(std::mt19937_64& rng);

/// K_nu(x), nu in {0, 1}, from exp(-x cosh t) cosh(nu t) integrated by
/// adaptive Gauss-Kronrod; independent of the series/continued fraction code.
[[nodiscard]] double bessel_k_quadrature(int nu, double x);

/// All checks, in a fixed order. Throws DomainError for unknown tolerance keys.
[[nodiscard]] std::vector<CheckResult> run_checks(const VerifyOptions& options);

} // namespace dirac_ps::verify
