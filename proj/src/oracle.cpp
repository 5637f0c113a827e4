#include "dirac_ps/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "dirac_ps/error.hpp"
#include "dirac_ps/spectra.hpp"

namespace dirac_ps::oracle {

void RadialGrid::validate() const {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw DomainError("grid spacing h must be positive and finite");
    }
    if (points < 10) {
        throw DomainError("grid needs at least 10 points, got " + std::to_string(points));
    }
}

double RadialGrid::node(int i, int k) const { return k == 0 ? (i - 0.5) * h : i * h; }

double RadialGrid::r_max() const { return (points + 1) * h; }

RadialGrid RadialGrid::with_extent(double h, double r_max) {
    if (!(h > 0.0) || !(r_max > 0.0)) {
        throw DomainError("grid spacing and extent must be positive");
    }
    RadialGrid grid{h, static_cast<int>(std::lround(r_max / h)) - 1};
    grid.validate();
    return grid;
}

RadialGrid RadialGrid::for_level(double h, int N) {
    if (N < 1) {
        throw DomainError("principal number must be >= 1");
    }
    return with_extent(h, 40.0 * N);
}

ReducedPotential ReducedPotential::none() {
    ReducedPotential p;
    p.kind = Kind::none;
    p.coupling_ratio = 0.0;
    return p;
}

ReducedPotential ReducedPotential::ps_log(double charge_term) {
    ReducedPotential p;
    p.kind = Kind::ps_log;
    p.charge_term = charge_term;
    return p;
}

ReducedPotential ReducedPotential::inverse_radius(double alpha, double charge_term) {
    if (!std::isfinite(alpha)) {
        throw DomainError("inverse_radius strength must be finite");
    }
    ReducedPotential p;
    p.kind = Kind::inverse_radius;
    p.alpha = alpha;
    p.charge_term = charge_term;
    return p;
}

ReducedPotential ReducedPotential::custom(std::function<double(double)> profile,
                                          std::function<double(double)> derivative, double charge_term,
                                          double coupling_ratio) {
    if (!profile || !derivative) {
        throw DomainError("custom potential needs both profile and derivative");
    }
    ReducedPotential p;
    p.kind = Kind::custom;
    p.profile = std::move(profile);
    p.profile_derivative = std::move(derivative);
    p.charge_term = charge_term;
    p.coupling_ratio = coupling_ratio;
    return p;
}

double ReducedPotential::diagonal(double r) const {
    if (charge_term == 0.0) {
        return 0.0;
    }
    switch (kind) {
    case Kind::none:
        return 0.0;
    case Kind::ps_log:
        return charge_term * std::log(r);
    case Kind::inverse_radius:
        return charge_term * alpha / r;
    case Kind::custom:
        return charge_term * profile(r);
    }
    return 0.0;
}

double ReducedPotential::coupling(double r) const {
    switch (kind) {
    case Kind::none:
        return 0.0;
    case Kind::ps_log:
        return coupling_ratio / r;
    case Kind::inverse_radius:
        return -coupling_ratio * alpha / (r * r);
    case Kind::custom:
        return coupling_ratio * profile_derivative(r);
    }
    return 0.0;
}

std::string ReducedPotential::label() const {
    switch (kind) {
    case Kind::none:
        return "none";
    case Kind::ps_log:
        return "ps-log";
    case Kind::inverse_radius: {
        char buf[64];
        std::snprintf(buf, sizeof buf, "inverse-radius:%.17g", alpha);
        return buf;
    }
    case Kind::custom:
        return "custom";
    }
    return "unknown";
}

DiscretizedHamiltonian DiscretizedHamiltonian::from_band(std::vector<double> diag, std::vector<double> off1,
                                                         std::vector<double> off2) {
    if (diag.empty() || diag.size() % 2 != 0) {
        throw DomainError("band matrix dimension must be even and positive");
    }
    if (off1.size() > diag.size() || off2.size() > diag.size()) {
        throw DomainError("band longer than the diagonal");
    }
    DiscretizedHamiltonian hm;
    const std::size_t n = diag.size();
    off1.resize(n, 0.0);
    off2.resize(n, 0.0);
    off1[n - 1] = 0.0;
    off2[n - 1] = 0.0;
    off2[n - 2] = 0.0;
    hm.diag_ = std::move(diag);
    hm.off1_ = std::move(off1);
    hm.off2_ = std::move(off2);
    return hm;
}

double DiscretizedHamiltonian::at(int i, int j) const {
    if (i > j) {
        std::swap(i, j);
    }
    switch (j - i) {
    case 0:
        return diag_[i];
    case 1:
        return off1_[i];
    case 2:
        return off2_[i];
    default:
        return 0.0;
    }
}

std::vector<std::vector<double>> DiscretizedHamiltonian::to_dense() const {
    const int n = dimension();
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j) {
            dense[i][j] = at(i, j);
        }
    }
    return dense;
}

std::vector<double> DiscretizedHamiltonian::apply(const std::vector<double>& x) const {
    const int n = dimension();
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = diag_[i] * x[i];
        if (i + 1 < n) acc += off1_[i] * x[i + 1];
        if (i + 2 < n) acc += off2_[i] * x[i + 2];
        if (i >= 1) acc += off1_[i - 1] * x[i - 1];
        if (i >= 2) acc += off2_[i - 2] * x[i - 2];
        y[i] = acc;
    }
    return y;
}

std::pair<double, double> DiscretizedHamiltonian::spectrum_bounds() const {
    const int n = dimension();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < n; ++i) {
        double radius = 0.0;
        for (int j = std::max(0, i - 2); j <= std::min(n - 1, i + 2); ++j) {
            if (j != i) radius += std::abs(at(i, j));
        }
        lo = std::min(lo, diag_[i] - radius);
        hi = std::max(hi, diag_[i] + radius);
    }
    return {lo, hi};
}

namespace {

// Symmetric 2x2 block [[a, b], [b, c]].
struct Block {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

int negative_count(const Block& d) {
    const double det = d.a * d.c - d.b * d.b;
    if (det < 0.0) return 1;
    return (d.a + d.c) < 0.0 ? 2 : 0;
}

} // namespace

// Block LDL^T of A - sigma I with 2x2 pivots; by Sylvester's law of inertia
// the negative eigenvalues of the pivots count those of A - sigma I.
int DiscretizedHamiltonian::count_below(double sigma) const {
    const int blocks = dimension() / 2;
    double scale = 1.0;
    for (double v : diag_) scale = std::max(scale, std::abs(v));
    const double tiny = std::numeric_limits<double>::epsilon() * scale;

    int count = 0;
    Block d{diag_[0] - sigma, off1_[0], diag_[1] - sigma};
    for (int i = 0;; ++i) {
        double det = d.a * d.c - d.b * d.b;
        if (std::abs(det) < tiny * tiny) {
            d.a += tiny;
            d.c += tiny;
            det = d.a * d.c - d.b * d.b;
        }
        count += negative_count(d);
        if (i + 1 == blocks) break;
        // Coupling block B_i between blocks i and i+1 (rows i, columns i+1).
        const int r = 2 * i;
        const double b00 = off2_[r];
        const double b10 = off1_[r + 1];
        const double b11 = off2_[r + 1];
        // D^{-1} = [[c, -b], [-b, a]] / det; form B^T D^{-1} B.
        const double inv_a = d.c / det;
        const double inv_b = -d.b / det;
        const double inv_c = d.a / det;
        // M = D^{-1} B, with B = [[b00, 0], [b10, b11]].
        const double m00 = inv_a * b00 + inv_b * b10;
        const double m01 = inv_b * b11;
        const double m10 = inv_b * b00 + inv_c * b10;
        const double m11 = inv_c * b11;
        // B^T M.
        const double s00 = b00 * m00 + b10 * m10;
        const double s01 = b00 * m01 + b10 * m11;
        const double s11 = b11 * m11;
        const int q = 2 * (i + 1);
        d = Block{diag_[q] - sigma - s00, off1_[q] - s01, diag_[q + 1] - sigma - s11};
    }
    return count;
}

DiscretizedHamiltonian discretize(int k, const ReducedPotential& potential, const RadialGrid& grid) {
    if (k < 0) {
        throw DomainError("discretize needs k >= 0");
    }
    grid.validate();
    const double h = grid.h;

    // Reject potentials more singular than 1/r^2 near the origin.
    auto strength = [&](double r) {
        return r * r * std::max(std::abs(potential.diagonal(r)), std::abs(potential.coupling(r)));
    };
    const double r0 = grid.node(1, k);
    const double g0 = strength(r0);
    const double g2 = strength(r0 * 1e-2);
    if (!std::isfinite(g0) || !std::isfinite(g2) || g2 > 10.0 * g0 + 1e-300) {
        throw DomainError("potential is more singular than 1/r^2 at the origin (" + potential.label() + ")");
    }

    const int points = grid.points;
    const int n = 2 * points;
    const double inv_h2 = 1.0 / (h * h);
    DiscretizedHamiltonian hm;
    hm.diag_.assign(n, 0.0);
    hm.off1_.assign(n, 0.0);
    hm.off2_.assign(n, 0.0);
    hm.nodes_.resize(points);
    hm.h_ = h;
    const double c1 = static_cast<double>(k) * (k - 1);
    const double c2 = static_cast<double>(k) * (k + 1);
    for (int i = 0; i < points; ++i) {
        const double r = grid.node(i + 1, k);
        hm.nodes_[i] = r;
        const double v = potential.diagonal(r);
        const double w = potential.coupling(r);
        if (!std::isfinite(v) || !std::isfinite(w)) {
            throw DomainError("potential is not finite at r = " + std::to_string(r));
        }
        hm.diag_[2 * i] = 2.0 * inv_h2 + c1 / (r * r) + v;
        hm.diag_[2 * i + 1] = 2.0 * inv_h2 + c2 / (r * r) + v;
        hm.off1_[2 * i] = w;
        if (i + 1 < points) {
            hm.off2_[2 * i] = -inv_h2;
            hm.off2_[2 * i + 1] = -inv_h2;
        }
    }
    if (k == 0) {
        hm.diag_[0] -= inv_h2; // mirrored ghost: phi1_0 = phi1_1
        hm.diag_[1] += inv_h2; // odd ghost: phi2_0 = -phi2_1
    }
    return hm;
}

std::vector<double> lowest_eigenvalues(const DiscretizedHamiltonian& hm, int count, double tol) {
    const int n = hm.dimension();
    if (count < 1 || count > n) {
        throw DomainError("eigenvalue count must lie in [1, dimension]");
    }
    auto [lo, hi] = hm.spectrum_bounds();
    const double pad = 1e-8 * std::max({1.0, std::abs(lo), std::abs(hi)});
    lo -= pad;
    hi += pad;
    if (hm.count_below(lo) != 0 || hm.count_below(hi) != n) {
        throw SolverError("Sturm bracket failure: counts at Gershgorin bounds are " +
                          std::to_string(hm.count_below(lo)) + " and " + std::to_string(hm.count_below(hi)) +
                          " for dimension " + std::to_string(n));
    }
    std::vector<double> out;
    out.reserve(count);
    double left = lo;
    for (int j = 0; j < count; ++j) {
        // Eigenvalue j is the smallest sigma with count_below(sigma) > j.
        double a = left;
        double b = hi;
        for (int it = 0; it < 200 && b - a > tol; ++it) {
            const double mid = 0.5 * (a + b);
            if (hm.count_below(mid) > j) {
                b = mid;
            } else {
                a = mid;
            }
        }
        if (b - a > tol) {
            throw SolverError("bisection did not reach tolerance for eigenvalue " + std::to_string(j));
        }
        out.push_back(0.5 * (a + b));
        left = a;
    }
    return out;
}

namespace {

// LU with partial pivoting of a band matrix with two sub- and two
// super-diagonals. Row i of U keeps columns i..i+4.
class BandLU {
public:
    BandLU(const DiscretizedHamiltonian& hm, double shift) : n_(hm.dimension()), u_(n_), l_(n_), piv_(n_) {
        double scale = 0.0;
        for (double v : hm.diag()) scale = std::max(scale, std::abs(v));
        const double floor = std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
        // rows_[i] holds absolute columns i-2..i+4
        std::vector<std::array<double, 7>> rows(n_);
        for (int i = 0; i < n_; ++i) {
            rows[i].fill(0.0);
            for (int j = std::max(0, i - 2); j <= std::min(n_ - 1, i + 2); ++j) {
                rows[i][j - i + 2] = hm.at(i, j) - (i == j ? shift : 0.0);
            }
        }
        auto ref = [&](int row, int col) -> double& { return rows[row][col - row + 2]; };
        for (int j = 0; j < n_; ++j) {
            int p = j;
            for (int r = j + 1; r <= std::min(n_ - 1, j + 2); ++r) {
                if (std::abs(ref(r, j)) > std::abs(ref(p, j))) p = r;
            }
            piv_[j] = p;
            if (p != j) {
                for (int c = j; c <= std::min(n_ - 1, j + 4); ++c) {
                    std::swap(ref(j, c), ref(p, c));
                }
            }
            if (std::abs(ref(j, j)) < floor) {
                ref(j, j) = ref(j, j) < 0.0 ? -floor : floor;
            }
            l_[j] = {0.0, 0.0};
            for (int r = j + 1; r <= std::min(n_ - 1, j + 2); ++r) {
                const double m = ref(r, j) / ref(j, j);
                l_[j][r - j - 1] = m;
                ref(r, j) = 0.0;
                for (int c = j + 1; c <= std::min(n_ - 1, j + 4); ++c) {
                    ref(r, c) -= m * ref(j, c);
                }
            }
            for (int c = 0; c < 5; ++c) {
                u_[j][c] = (j + c < n_) ? ref(j, j + c) : 0.0;
            }
        }
    }

    void solve(std::vector<double>& b) const {
        for (int j = 0; j < n_; ++j) {
            if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
            for (int r = j + 1; r <= std::min(n_ - 1, j + 2); ++r) {
                b[r] -= l_[j][r - j - 1] * b[j];
            }
        }
        for (int j = n_ - 1; j >= 0; --j) {
            double acc = b[j];
            for (int c = 1; c < 5 && j + c < n_; ++c) {
                acc -= u_[j][c] * b[j + c];
            }
            b[j] = acc / u_[j][0];
        }
    }

private:
    int n_;
    std::vector<std::array<double, 5>> u_;
    std::vector<std::array<double, 2>> l_;
    std::vector<int> piv_;
};

double norm2(const std::vector<double>& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

} // namespace

EigenSamples eigenvector_for(const DiscretizedHamiltonian& hm, double eigenvalue) {
    const int n = hm.dimension();
    if (!std::isfinite(eigenvalue)) {
        throw DomainError("eigenvector_for needs a finite eigenvalue");
    }
    const BandLU lu(hm, eigenvalue);
    std::vector<double> v(n);
    // Deterministic start with components along every mode.
    for (int i = 0; i < n; ++i) {
        v[i] = 1.0 + 0.5 * std::sin(0.37 * i + 0.11);
    }
    double nv = norm2(v);
    for (double& x : v) x /= nv;

    constexpr int kMaxIterations = 60;
    constexpr double kResidualTol = 1e-8;
    double rayleigh = eigenvalue;
    double residual = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < kMaxIterations; ++it) {
        lu.solve(v);
        nv = norm2(v);
        if (!(nv > 0.0) || !std::isfinite(nv)) {
            throw SolverError("inverse iteration produced a degenerate vector");
        }
        for (double& x : v) x /= nv;
        const auto av = hm.apply(v);
        rayleigh = std::inner_product(v.begin(), v.end(), av.begin(), 0.0);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = av[i] - rayleigh * v[i];
            acc += d * d;
        }
        residual = std::sqrt(acc);
        if (residual < kResidualTol) {
            ++it;
            break;
        }
    }
    if (!(residual < kResidualTol)) {
        throw SolverError("inverse iteration did not converge near " + std::to_string(eigenvalue) +
                          " (residual " + std::to_string(residual) + ")");
    }

    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    for (double x : v) {
        if (std::abs(x) > 1e-3 * peak) {
            if (x < 0.0) {
                for (double& y : v) y = -y;
            }
            break;
        }
    }

    EigenSamples out;
    out.eigenvalue = rayleigh;
    out.residual = residual;
    out.iterations = it;
    const int points = n / 2;
    const double h = hm.spacing() > 0.0 ? hm.spacing() : 1.0;
    const double scale = 1.0 / std::sqrt(h);
    out.phi1.resize(points);
    out.phi2.resize(points);
    out.r = hm.nodes();
    if (out.r.empty()) {
        out.r.resize(points);
        std::iota(out.r.begin(), out.r.end(), 1.0);
    }
    for (int i = 0; i < points; ++i) {
        out.phi1[i] = scale * v[2 * i];
        out.phi2[i] = scale * v[2 * i + 1];
    }
    return out;
}

ConvergenceStudy convergence_study(int k, int n, const std::vector<RadialGrid>& grids) {
    if (grids.size() < 3) {
        throw DomainError("convergence_study needs at least 3 grids");
    }
    for (const auto& g : grids) g.validate();
    const double ratio = grids[0].h / grids[1].h;
    if (!(ratio > 1.0 + 1e-9)) {
        throw DomainError("convergence_study needs strictly refining grids");
    }
    for (std::size_t i = 1; i + 1 < grids.size(); ++i) {
        const double q = grids[i].h / grids[i + 1].h;
        if (std::abs(q - ratio) > 1e-9 * ratio) {
            throw DomainError("convergence_study needs a common refinement ratio");
        }
    }

    ConvergenceStudy study;
    study.target = spectra::reduced_eigenvalue(n, k);
    const auto potential = ReducedPotential::ps_log();
    for (const auto& g : grids) {
        const auto hm = discretize(k, potential, g);
        const double value = lowest_eigenvalues(hm, n + 1).back();
        study.h.push_back(g.h);
        study.eigenvalues.push_back(value);
        study.errors.push_back(value - study.target);
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(grids.size());
    for (std::size_t i = 0; i < grids.size(); ++i) {
        const double err = std::abs(study.errors[i]);
        if (i > 0 && !(err < std::abs(study.errors[i - 1]))) {
            study.reliable = false;
        }
        const double x = std::log(study.h[i]);
        const double y = std::log(std::max(err, std::numeric_limits<double>::min()));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    study.order = (m * sxy - sx * sy) / (m * sxx - sx * sx);

    const double fine = study.eigenvalues.back();
    const double coarse = study.eigenvalues[study.eigenvalues.size() - 2];
    study.extrapolated = fine + (fine - coarse) / (ratio * ratio - 1.0);
    study.extrapolated_error = study.extrapolated - study.target;
    return study;
}

} // namespace dirac_ps::oracle
