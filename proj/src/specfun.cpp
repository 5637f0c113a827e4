#include "dirac_ps/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dirac_ps/error.hpp"

namespace dirac_ps::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIterations = 10000;

// Ascending series, valid and well conditioned for 0 < x <= 2.
//   K0 = -(ln(x/2) + gamma) I0(x) + sum_k H_k (x^2/4)^k / (k!)^2
//   K1 = 1/x + (x/2) sum_k t_k [ln(x/2) + gamma - (H_k + H_{k+1})/2],
//        t_k = (x^2/4)^k / (k! (k+1)!)
BesselPair series(double x) {
    const double y = 0.25 * x * x;
    const double log_term = std::log(0.5 * x) + std::numbers::egamma;

    double term0 = 1.0; // (x^2/4)^k / (k!)^2
    double i0 = 1.0;
    double harmonic_sum = 0.0;
    double h_k = 0.0; // H_k

    double t_k = 1.0; // (x^2/4)^k / (k!(k+1)!)
    double k1_sum = log_term - 0.5; // k = 0 term: H_0 + H_1 = 1

    for (int k = 1; k < kMaxIterations; ++k) {
        term0 *= y / (static_cast<double>(k) * k);
        h_k += 1.0 / k;
        i0 += term0;
        harmonic_sum += term0 * h_k;

        t_k *= y / (static_cast<double>(k) * (k + 1));
        const double h_next = h_k + 1.0 / (k + 1);
        k1_sum += t_k * (log_term - 0.5 * (h_k + h_next));

        const double k0_partial = std::abs(harmonic_sum - log_term * i0);
        const double k1_partial = std::abs(1.0 / x + 0.5 * x * k1_sum);
        if (term0 * (h_k + std::abs(log_term)) < 0.1 * kEps * k0_partial &&
            0.5 * x * t_k * (h_next + std::abs(log_term)) < 0.1 * kEps * k1_partial) {
            break;
        }
    }
    return {-log_term * i0 + harmonic_sum, 1.0 / x + 0.5 * x * k1_sum};
}

// Temme's continued-fraction method (Steed's algorithm for CF2) at nu = 0.
// Returns exp(x) * K0(x) and exp(x) * K1(x).
BesselPair continued_fraction_scaled(double x) {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 1;
    for (; i < kMaxIterations; ++i) {
        a -= 2.0 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) {
            break;
        }
    }
    if (i == kMaxIterations) {
        throw SolverError("bessel: continued fraction failed to converge at x = " + std::to_string(x));
    }
    h *= a1;
    const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
    return {k0, k0 * (x + 0.5 - h) / x};
}

// Hankel asymptotic expansion; returns exp(x) * K_nu(x) for nu in {0, 1}.
double asymptotic_scaled(double x, int nu) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (8.0 * k * x);
        if (std::abs(term) >= last) {
            break; // series started to diverge
        }
        sum += term;
        last = std::abs(term);
        if (last < 0.1 * kEps * std::abs(sum)) {
            break;
        }
    }
    return std::sqrt(std::numbers::pi / (2.0 * x)) * sum;
}

void check_argument(double x) {
    if (!(x > 0.0)) {
        throw DomainError("bessel: argument must be positive, got " + std::to_string(x));
    }
}

double unscale(double scaled, double x, const char* name) {
    const double value = scaled * std::exp(-x);
    if (!(value >= std::numeric_limits<double>::min())) {
        throw RangeError(std::string(name) + "(" + std::to_string(x) + ") underflows double precision");
    }
    return value;
}

} // namespace

void BesselAccuracy::validate() const {
    if (!(target_rel_err > 0.0)) {
        throw DomainError("BesselAccuracy: target_rel_err must be positive");
    }
    if (!(series_switch > 0.0) || !(asymptotic_switch >= series_switch)) {
        throw DomainError("BesselAccuracy: switch points must be positive and ordered");
    }
}

const BesselAccuracy& bessel_accuracy() {
    static const BesselAccuracy accuracy{};
    return accuracy;
}

BesselPair bessel_k01(double x) {
    check_argument(x);
    const auto& acc = bessel_accuracy();
    if (x <= acc.series_switch) {
        if (x < 1.0 / std::numeric_limits<double>::max()) {
            throw RangeError("bessel_k1(" + std::to_string(x) + ") overflows double precision");
        }
        return series(x);
    }
    if (x < acc.asymptotic_switch) {
        const auto scaled = continued_fraction_scaled(x);
        return {unscale(scaled.k0, x, "bessel_k0"), unscale(scaled.k1, x, "bessel_k1")};
    }
    return {unscale(asymptotic_scaled(x, 0), x, "bessel_k0"), unscale(asymptotic_scaled(x, 1), x, "bessel_k1")};
}

double bessel_k0(double x) {
    check_argument(x);
    if (x <= bessel_accuracy().series_switch) {
        return series(x).k0;
    }
    return bessel_k01(x).k0;
}

double bessel_k1(double x) { return bessel_k01(x).k1; }

} // namespace dirac_ps::specfun
