#include "dirac_ps/fields_solution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dirac_ps/error.hpp"

namespace dirac_ps::fields {

namespace {

constexpr Complex kI{0.0, 1.0};

Mat4 zero_matrix() {
    Mat4 z{};
    for (auto& row : z) row.fill(Complex{});
    return z;
}

// 4x4 from 2x2 blocks [[a, b], [c, d]], each row-major {m00, m01, m10, m11}.
using Block2 = std::array<Complex, 4>;
Mat4 from_blocks(const Block2& a, const Block2& b, const Block2& c, const Block2& d) {
    Mat4 out = zero_matrix();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out[i][j] = a[2 * i + j];
            out[i][j + 2] = b[2 * i + j];
            out[i + 2][j] = c[2 * i + j];
            out[i + 2][j + 2] = d[2 * i + j];
        }
    }
    return out;
}

const std::array<Mat4, 4>& gammas() {
    static const std::array<Mat4, 4> g = [] {
        const Block2 zero{0.0, 0.0, 0.0, 0.0};
        const Block2 id{1.0, 0.0, 0.0, 1.0};
        const Block2 neg_id{-1.0, 0.0, 0.0, -1.0};
        // i * (-sigma_a) and i * sigma_a
        const Block2 m_is1{0.0, -kI, -kI, 0.0};
        const Block2 p_is1{0.0, kI, kI, 0.0};
        const Block2 m_is2{0.0, -1.0, 1.0, 0.0};
        const Block2 p_is2{0.0, 1.0, -1.0, 0.0};
        return std::array<Mat4, 4>{from_blocks(zero, id, id, zero), from_blocks(m_is1, zero, zero, p_is1),
                                   from_blocks(m_is2, zero, zero, p_is2), from_blocks(zero, id, neg_id, zero)};
    }();
    return g;
}

void check_index(int mu) {
    if (mu < 0 || mu > 3) {
        throw DomainError("Lorentz index out of range: " + std::to_string(mu));
    }
}

Mat4 scaled(const Mat4& a, Complex s) {
    Mat4 out = a;
    for (auto& row : out)
        for (auto& v : row) v *= s;
    return out;
}

Mat4 add(const Mat4& a, const Mat4& b) {
    Mat4 out = a;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i][j] += b[i][j];
    return out;
}

double max_abs(const Spinor4& v) {
    double m = 0.0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
}

} // namespace

Mat4 operator*(const Mat4& a, const Mat4& b) {
    Mat4 out = zero_matrix();
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

Spinor4 operator*(const Mat4& a, const Spinor4& v) {
    Spinor4 out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[i] += a[i][j] * v[j];
    return out;
}

double metric(int mu, int nu) {
    check_index(mu);
    check_index(nu);
    if (mu != nu) return 0.0;
    return mu == 0 ? 1.0 : -1.0;
}

const Mat4& gamma_upper(int mu) {
    check_index(mu);
    return gammas()[mu];
}

Mat4 gamma_lower(int mu) { return scaled(gamma_upper(mu), metric(mu, mu)); }

Mat4 spin_tensor(int mu, int nu) {
    const Mat4 ab = gamma_upper(mu) * gamma_upper(nu);
    const Mat4 ba = gamma_upper(nu) * gamma_upper(mu);
    return scaled(add(ab, scaled(ba, -1.0)), 0.25 * kI);
}

double clifford_defect() {
    double worst = 0.0;
    for (int mu = 0; mu < 4; ++mu) {
        for (int nu = 0; nu < 4; ++nu) {
            const Mat4 anti = add(gamma_upper(mu) * gamma_upper(nu), gamma_upper(nu) * gamma_upper(mu));
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    const double expected = (i == j) ? 2.0 * metric(mu, nu) : 0.0;
                    worst = std::max(worst, std::abs(anti[i][j] - expected));
                }
            }
        }
    }
    return worst;
}

double FieldPoint::invariant_difference() const {
    double b2 = 0.0, e2 = 0.0;
    for (int a = 0; a < 3; ++a) {
        b2 += B_vec[a] * B_vec[a];
        e2 += E_vec[a] * E_vec[a];
    }
    return b2 - e2;
}

double FieldPoint::invariant_product() const {
    return E_vec[0] * B_vec[0] + E_vec[1] * B_vec[1] + E_vec[2] * B_vec[2];
}

FieldPoint field_strengths(double omega, double x1, double x2) {
    const double x_sq = x1 * x1 + x2 * x2;
    if (!(x_sq > 0.0)) {
        throw DomainError("field_strengths: the filament x1 = x2 = 0 is singular");
    }
    const double s = omega / x_sq;
    return FieldPoint{{s * x1, s * x2, 0.0}, {-s * x2, s * x1, 0.0}};
}

RealMat4 field_tensor(const FieldPoint& f) {
    RealMat4 out{};
    for (int a = 0; a < 3; ++a) {
        out[0][a + 1] = -f.E_vec[a];
        out[a + 1][0] = f.E_vec[a];
    }
    // F_{ab} = eps_{abc} B_c
    out[1][2] = f.B_vec[2];
    out[2][1] = -f.B_vec[2];
    out[2][3] = f.B_vec[0];
    out[3][2] = -f.B_vec[0];
    out[3][1] = f.B_vec[1];
    out[1][3] = -f.B_vec[1];
    return out;
}

Mat4 pauli_matrix(double lambda, const FieldPoint& f) {
    static const std::array<std::array<Mat4, 4>, 4> spin = [] {
        std::array<std::array<Mat4, 4>, 4> s{};
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) s[mu][nu] = spin_tensor(mu, nu);
        return s;
    }();
    const RealMat4 F = field_tensor(f);
    Mat4 out = zero_matrix();
    for (int mu = 0; mu < 4; ++mu) {
        for (int nu = mu + 1; nu < 4; ++nu) {
            if (F[mu][nu] != 0.0) {
                out = add(out, scaled(spin[mu][nu], lambda * F[mu][nu]));
            }
        }
    }
    return out;
}

EtaPair eta_components(const susy::RadialSpinorExpr& state, double m, double E, double kappa, double lambda_tilde) {
    if (!(E > kappa)) {
        throw KinematicsError("eta_components needs E > kappa");
    }
    const double ratio = m / (E - kappa);
    const double k = state.k;
    const auto& p1 = state.phi.first;
    const auto& p2 = state.phi.second;
    KExpr eta1 = combine(combine(differentiate(p2), shift_power(p2, -1), 1.0, k), p1, lambda_tilde, ratio);
    KExpr eta2 = combine(combine(differentiate(p1), shift_power(p1, -1), 1.0, -k), p2, lambda_tilde, ratio);
    return {std::move(eta1), std::move(eta2)};
}

BispinorSolution assemble_bispinor(const spectra::SpectrumParams& params, int n, int k, int Ntilde) {
    params.validate();
    const auto qn = spectra::QuantumNumbers::make(n, k, Ntilde);
    const double lt = spectra::coupling_lambda_tilde(params);
    if (lt == 0.0) {
        throw DomainError("bound states need a nonzero coupling lambda~ = g mu0 omega");
    }
    BispinorSolution sol;
    sol.n = n;
    sol.k = k;
    sol.N = qn.N;
    sol.Ntilde = Ntilde;
    sol.m = params.m;
    sol.lambda = params.g * params.mu0;
    sol.omega = params.omega;
    sol.lambda_tilde = lt;
    sol.L = params.L;
    sol.kappa = spectra::quantized_kappa(params.L, Ntilde);
    sol.E = spectra::relativistic_energy(params.m, lt, sol.kappa, qn.N);
    sol.scale_factor = (sol.E - sol.kappa) * std::abs(lt);

    const auto state = susy::excited_state(n, k);
    const auto eta = eta_components(state, params.m, sol.E, sol.kappa, lt);
    sol.phi1 = state.phi.first;
    sol.phi2 = state.phi.second;
    sol.eta1 = eta.eta1;
    sol.eta2 = eta.eta2;

    const double s = lt > 0.0 ? 1.0 : -1.0;
    // Phase convention: first component positive near the origin.
    const double probe = 1e-3 * qn.N;
    const double sign = dirac_ps::evaluate(sol.phi1, probe) < 0.0 ? -1.0 : 1.0;
    sol.components = {sign * sol.phi1, -sign * s * sol.phi2, sign * sol.eta1, -sign * s * sol.eta2};
    sol.angular = {k - 0.5, k + 0.5, k - 0.5, k + 0.5};

    const double radial_mass = susy::norm_squared({sol.components[0], sol.components[1]}) +
                               susy::norm_squared({sol.components[2], sol.components[3]});
    sol.normalization = sol.scale_factor / std::sqrt(radial_mass);
    return sol;
}

namespace {

// Half-integer angular factors make the planar spinor double-valued; theta is
// taken on the sheet continuous around theta_ref.
Spinor4 evaluate_on_branch(const BispinorSolution& sol, const SpacetimePoint& x, double theta_ref) {
    const double rho = std::hypot(x[1], x[2]);
    if (!(rho > 0.0)) {
        throw DomainError("bispinor is singular on the filament");
    }
    const double theta = theta_ref + std::remainder(std::atan2(x[2], x[1]) - theta_ref, 2.0 * std::numbers::pi);
    const double r = sol.scale_factor * rho;
    const Complex phase = std::polar(1.0, -(sol.E * x[0] - sol.kappa * x[3]));
    const double pref = sol.normalization / std::sqrt(2.0 * std::numbers::pi * sol.L * r);
    Spinor4 out{};
    for (int j = 0; j < 4; ++j) {
        out[j] = pref * phase * std::polar(1.0, sol.angular[j] * theta) * dirac_ps::evaluate(sol.components[j], r);
    }
    return out;
}

} // namespace

Spinor4 evaluate(const BispinorSolution& sol, const SpacetimePoint& x) {
    return evaluate_on_branch(sol, x, std::atan2(x[2], x[1]));
}

double probability_density(const BispinorSolution& sol, double x1, double x2) {
    const double rho = std::hypot(x1, x2);
    if (!(rho > 0.0)) {
        throw DomainError("probability density is singular on the filament");
    }
    const double r = sol.scale_factor * rho;
    double sum = 0.0;
    for (const auto& c : sol.components) {
        const double v = dirac_ps::evaluate(c, r);
        sum += v * v;
    }
    return sol.normalization * sol.normalization / (2.0 * std::numbers::pi * sol.L * r) * sum;
}

double approximate_density(const BispinorSolution& sol, double x1, double x2) {
    const double rho = std::hypot(x1, x2);
    if (!(rho > 0.0)) {
        throw DomainError("probability density is singular on the filament");
    }
    const double r = sol.scale_factor * rho;
    const double p1 = dirac_ps::evaluate(sol.phi1, r);
    const double p2 = dirac_ps::evaluate(sol.phi2, r);
    return 2.0 * sol.normalization * sol.normalization / (2.0 * std::numbers::pi * sol.L * r) * (p1 * p1 + p2 * p2);
}

namespace {

Spinor4 operator_from_derivatives(const std::array<Spinor4, 4>& d, const Spinor4& value, double m, double lambda,
                                  double omega, const SpacetimePoint& x) {
    Spinor4 out{};
    for (int mu = 0; mu < 4; ++mu) {
        const Spinor4 g = gamma_upper(mu) * d[mu];
        for (int j = 0; j < 4; ++j) out[j] += kI * g[j];
    }
    const Spinor4 p = pauli_matrix(lambda, field_strengths(omega, x[1], x[2])) * value;
    for (int j = 0; j < 4; ++j) out[j] -= m * value[j] + p[j];
    return out;
}

void check_stencil(const SpacetimePoint& x, double h) {
    if (!(h > 0.0)) {
        throw DomainError("finite-difference step must be positive");
    }
    if (std::hypot(x[1], x[2]) < 10.0 * h) {
        throw DomainError("point lies within 10 h of the filament; stencil unsafe");
    }
}

Spinor4 central_difference(const SpinorField& psi, const SpacetimePoint& x, int mu, double h) {
    SpacetimePoint xp = x;
    SpacetimePoint xm = x;
    xp[mu] += h;
    xm[mu] -= h;
    const Spinor4 a = psi(xp);
    const Spinor4 b = psi(xm);
    Spinor4 out{};
    for (int j = 0; j < 4; ++j) out[j] = (a[j] - b[j]) / (2.0 * h);
    return out;
}

Spinor4 residual_vector(const BispinorSolution& sol, const spectra::SpectrumParams& params, const SpacetimePoint& x,
                        double h) {
    check_stencil(x, h);
    const double theta = std::atan2(x[2], x[1]);
    const SpinorField psi = [&sol, theta](const SpacetimePoint& p) { return evaluate_on_branch(sol, p, theta); };
    return dirac_operator_residual(psi, params.m, params.g * params.mu0, params.omega, x, h);
}

} // namespace

Spinor4 dirac_operator_residual(const SpinorField& psi, double m, double lambda, double omega, const SpacetimePoint& x,
                                double h) {
    if (!(h > 0.0)) {
        throw DomainError("finite-difference step must be positive");
    }
    std::array<Spinor4, 4> d{};
    for (int mu = 0; mu < 4; ++mu) d[mu] = central_difference(psi, x, mu, h);
    return operator_from_derivatives(d, psi(x), m, lambda, omega, x);
}

double dirac_residual(const BispinorSolution& sol, const spectra::SpectrumParams& params, const SpacetimePoint& x,
                      double h) {
    return max_abs(residual_vector(sol, params, x, h));
}

ResidualStudy dirac_residual_study(const BispinorSolution& sol, const spectra::SpectrumParams& params,
                                   const SpacetimePoint& x, double h) {
    const Spinor4 coarse = residual_vector(sol, params, x, h);
    const Spinor4 fine = residual_vector(sol, params, x, 0.5 * h);
    Spinor4 extrapolated{};
    for (int j = 0; j < 4; ++j) extrapolated[j] = (4.0 * fine[j] - coarse[j]) / 3.0;
    ResidualStudy out;
    out.at_h = max_abs(coarse);
    out.at_half_h = max_abs(fine);
    out.extrapolated = max_abs(extrapolated);
    out.ratio = out.at_half_h > 0.0 ? out.at_h / out.at_half_h : 0.0;
    return out;
}

double reduced_residual(const BispinorSolution& sol, const spectra::SpectrumParams& params, const SpacetimePoint& x,
                        double h) {
    check_stencil(x, h);
    const double theta = std::atan2(x[2], x[1]);
    const SpinorField psi = [&sol, theta](const SpacetimePoint& p) { return evaluate_on_branch(sol, p, theta); };
    const Spinor4 value = psi(x);
    std::array<Spinor4, 4> d{};
    for (int j = 0; j < 4; ++j) {
        d[0][j] = -kI * sol.E * value[j];
        d[3][j] = kI * sol.kappa * value[j];
    }
    d[1] = central_difference(psi, x, 1, h);
    d[2] = central_difference(psi, x, 2, h);
    return max_abs(operator_from_derivatives(d, value, params.m, params.g * params.mu0, params.omega, x));
}

Mat4 reflection_matrix() {
    return scaled(gamma_lower(0) * gamma_lower(2) * gamma_lower(3), kI);
}

BispinorSolution reflect_solution(const BispinorSolution& sol) {
    // Q = i gamma_0 gamma_2 gamma_3 = diag(sigma2, sigma2); with x1 -> -x1
    // (theta -> pi - theta) each exp(i m theta) picks up exp(i m pi), which
    // combines with the -i, +i of sigma2 into (-1)^k.
    BispinorSolution out = sol;
    const double sign = (sol.k % 2 == 0) ? 1.0 : -1.0;
    out.k = -sol.k;
    out.reflected = !sol.reflected;
    const std::array<int, 4> source{1, 0, 3, 2};
    for (int j = 0; j < 4; ++j) {
        out.components[j] = sign * sol.components[source[j]];
        out.angular[j] = -sol.angular[source[j]];
    }
    return out;
}

} // namespace dirac_ps::fields
