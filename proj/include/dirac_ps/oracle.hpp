#pragma once

// Finite-difference oracle for the coupled radial eigenproblem
//
//   -phi1'' + k(k-1)/r^2 phi1 + 2e p(r) phi1 + c p'(r) phi2 = eps phi1
//   -phi2'' + k(k+1)/r^2 phi2 + 2e p(r) phi2 + c p'(r) phi1 = eps phi2
//
// Unknowns are interleaved (phi1_1, phi2_1, phi1_2, ...), so the matrix is
// symmetric with bandwidth 2. Eigenvalues come from Sturm-count bisection and
// eigenvectors from inverse iteration; no external linear algebra.
//
// Sector k >= 1 uses nodes r_i = i h with Dirichlet on both components. Sector
// k = 0 uses cell-centred nodes r_i = (i - 1/2) h with a mirrored ghost for
// phi1 (Neumann) and an odd ghost for phi2 (Dirichlet), matching the
// regular behaviour phi1(0) != 0, phi2(0) = 0 of that sector.

#include <functional>
#include <string>
#include <vector>

namespace dirac_ps::oracle {

struct RadialGrid {
    double h = 0.01;
    int points = 4000;

    /// Throws DomainError unless h > 0 (finite) and points >= 10.
    void validate() const;
    /// Node r_i, i = 1..points, for sector k.
    [[nodiscard]] double node(int i, int k) const;
    /// Outer Dirichlet radius (points + 1) h.
    [[nodiscard]] double r_max() const;

    /// Grid with spacing h whose outer boundary is as close as possible to r_max.
    static RadialGrid with_extent(double h, double r_max);
    /// Default extent r_max = 40 N.
    static RadialGrid for_level(double h, int N);
};

struct ReducedPotential {
    enum class Kind { none, ps_log, inverse_radius, custom };

    Kind kind = Kind::ps_log;
    double alpha = 0.0;          ///< inverse_radius strength
    double charge_term = 0.0;    ///< coefficient of p(r) on the diagonal (2e)
    double coupling_ratio = 1.0; ///< coefficient of p'(r) on the sigma1 coupling
    std::function<double(double)> profile;            ///< custom p(r)
    std::function<double(double)> profile_derivative; ///< custom p'(r)

    static ReducedPotential none();
    /// p = log r, so the coupling is sigma1 / r.
    static ReducedPotential ps_log(double charge_term = 0.0);
    /// p = alpha / r.
    static ReducedPotential inverse_radius(double alpha, double charge_term = 0.0);
    static ReducedPotential custom(std::function<double(double)> p, std::function<double(double)> dp,
                                   double charge_term = 0.0, double coupling_ratio = 1.0);

    [[nodiscard]] double diagonal(double r) const;
    [[nodiscard]] double coupling(double r) const;
    [[nodiscard]] std::string label() const;
};

/// Symmetric band storage: diag[i] = A(i,i), off1[i] = A(i,i+1), off2[i] = A(i,i+2).
class DiscretizedHamiltonian {
public:
    DiscretizedHamiltonian() = default;

    /// Even dimension required; off1 and off2 are padded with zeros as needed.
    static DiscretizedHamiltonian from_band(std::vector<double> diag, std::vector<double> off1,
                                            std::vector<double> off2);

    [[nodiscard]] int dimension() const { return static_cast<int>(diag_.size()); }
    [[nodiscard]] double at(int i, int j) const;
    [[nodiscard]] std::vector<std::vector<double>> to_dense() const;
    [[nodiscard]] const std::vector<double>& diag() const { return diag_; }
    [[nodiscard]] const std::vector<double>& off1() const { return off1_; }
    [[nodiscard]] const std::vector<double>& off2() const { return off2_; }

    /// Nodes the unknowns live on (empty for from_band matrices).
    [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }
    [[nodiscard]] double spacing() const { return h_; }

    /// Number of eigenvalues strictly below sigma.
    [[nodiscard]] int count_below(double sigma) const;
    /// Gershgorin interval containing the spectrum.
    [[nodiscard]] std::pair<double, double> spectrum_bounds() const;
    /// y = A x.
    [[nodiscard]] std::vector<double> apply(const std::vector<double>& x) const;

private:
    friend DiscretizedHamiltonian discretize(int k, const ReducedPotential& potential, const RadialGrid& grid);

    std::vector<double> diag_;
    std::vector<double> off1_;
    std::vector<double> off2_;
    std::vector<double> nodes_;
    double h_ = 0.0;
};

/// Throws DomainError for k < 0, an invalid grid, or a potential more
/// singular than 1/r^2 (or non-finite) on the grid.
[[nodiscard]] DiscretizedHamiltonian discretize(int k, const ReducedPotential& potential, const RadialGrid& grid);

inline constexpr double kBisectionTol = 1e-10;

/// The count smallest eigenvalues in ascending order, each to kBisectionTol.
[[nodiscard]] std::vector<double> lowest_eigenvalues(const DiscretizedHamiltonian& hm, int count,
                                                     double tol = kBisectionTol);

struct EigenSamples {
    double eigenvalue = 0.0; ///< Rayleigh quotient of the returned vector
    double residual = 0.0;   ///< ||(A - eigenvalue) v|| for the unit discrete vector
    std::vector<double> r;
    std::vector<double> phi1;
    std::vector<double> phi2;
    int iterations = 0;
};

/// Inverse iteration near eigenvalue. The samples are scaled so that
/// h * sum(phi1^2 + phi2^2) = 1, approximating unit L2 norm, with the sign
/// chosen so the first significant entry is positive. SolverError on
/// non-convergence.
[[nodiscard]] EigenSamples eigenvector_for(const DiscretizedHamiltonian& hm, double eigenvalue);

struct ConvergenceStudy {
    std::vector<double> h;
    std::vector<double> eigenvalues;
    std::vector<double> errors; ///< eigenvalue - target
    double target = 0.0;
    double order = 0.0;         ///< least-squares slope of log|error| against log h
    bool reliable = true;       ///< false when |error| is not strictly decreasing
    double extrapolated = 0.0;  ///< Richardson value from the two finest grids
    double extrapolated_error = 0.0;
};

/// Level n of sector k for the PS_log potential on each grid, compared with
/// -1/(2(n+k)+1)^2. Needs >= 3 grids with a common refinement ratio.
[[nodiscard]] ConvergenceStudy convergence_study(int k, int n, const std::vector<RadialGrid>& grids);

} // namespace dirac_ps::oracle
