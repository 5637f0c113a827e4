#pragma once

// Globally adaptive 15-point Gauss-Kronrod quadrature on finite intervals.
// The rule never samples the interval endpoints, so integrable endpoint
// singularities (log, r^-1/2) are handled by subdivision.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace dirac_ps::quad {

struct Options {
    double abs_tol = 0.0;
    double rel_tol = 1e-10;
    int max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    friend bool operator<(const Segment& l, const Segment& r) { return l.error < r.error; }
};

template <class F>
Segment gauss_kronrod15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[static_cast<std::size_t>(j)];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += kWgk[static_cast<std::size_t>(j)] * (f1 + f2);
        if (j % 2 == 1) {
            gauss += kWg[static_cast<std::size_t>(j / 2)] * (f1 + f2);
        }
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

} // namespace detail

/// Integrate f over [a, b] to max(abs_tol, rel_tol * |I|).
template <class F>
Result integrate(F&& f, double a, double b, const Options& opts = {}) {
    std::priority_queue<detail::Segment> segments;
    auto first = detail::gauss_kronrod15(f, a, b);
    double value = first.value;
    double error = first.error;
    segments.push(first);
    int evaluations = 15;
    while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
        if (static_cast<int>(segments.size()) >= opts.max_intervals) {
            return {value, error, evaluations, false};
        }
        const auto worst = segments.top();
        segments.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // interval can no longer be split in double precision
            segments.push(worst);
            return {value, error, evaluations, false};
        }
        auto left = detail::gauss_kronrod15(f, worst.a, mid);
        auto right = detail::gauss_kronrod15(f, mid, worst.b);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        segments.push(left);
        segments.push(right);
    }
    // re-sum to shed accumulated update round-off
    double total = 0.0;
    double total_error = 0.0;
    while (!segments.empty()) {
        total += segments.top().value;
        total_error += segments.top().error;
        segments.pop();
    }
    return {total, total_error, evaluations, true};
}

} // namespace dirac_ps::quad
