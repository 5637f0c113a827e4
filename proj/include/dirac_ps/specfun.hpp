#pragma once

// Modified Bessel functions of the second kind, orders 0 and 1, for real x > 0.

namespace dirac_ps::specfun {

/// Accuracy regime of the K0/K1 evaluators.
struct BesselAccuracy {
    double target_rel_err = 1e-12;
    /// Power series for x <= this value, continued fraction above it.
    double series_switch = 2.0;
    /// Asymptotic expansion for x >= this value.
    double asymptotic_switch = 25.0;

    /// Throws DomainError unless all thresholds are positive and ordered.
    void validate() const;
};

/// The accuracy regime the evaluators are built for.
[[nodiscard]] const BesselAccuracy& bessel_accuracy();

/// K0(x). Throws DomainError for x <= 0 (or NaN) and RangeError when the
/// result underflows double precision (x above roughly 705).
[[nodiscard]] double bessel_k0(double x);

/// K1(x). Same error contract as bessel_k0; additionally throws RangeError
/// when 1/x overflows.
[[nodiscard]] double bessel_k1(double x);

/// Both functions at once; cheaper than two calls.
struct BesselPair {
    double k0;
    double k1;
};
[[nodiscard]] BesselPair bessel_k01(double x);

} // namespace dirac_ps::specfun
