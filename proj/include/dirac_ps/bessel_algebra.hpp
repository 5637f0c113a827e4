#pragma once

// Exact algebra over finite sums  sum_i c_i r^{p_i} K_{j_i}(r / alpha_i)
// with integer powers p_i, j_i in {0, 1} and exact rational scales alpha_i.
// The family is closed under d/dr, linear combination and multiplication by
// integer powers of r, which is all the ladder operators need.

#include <string>
#include <vector>

#include "dirac_ps/rational.hpp"

namespace dirac_ps {

enum class BesselKind { k0 = 0, k1 = 1 };

struct KTerm {
    double coeff = 0.0;
    int power = 0;
    BesselKind kind = BesselKind::k0;
    Rational scale{1};

    friend bool operator==(const KTerm&, const KTerm&) = default;
};

/// Default relative tolerance for deciding exact cancellation.
inline constexpr double kCancellationTol = 1e-12;

class KExpr {
public:
    /// The zero expression.
    KExpr() = default;

    /// Single term c * r^p * K(r / scale). Throws DomainError unless scale > 0
    /// and coeff is finite.
    static KExpr term(double coeff, int power, BesselKind kind, Rational scale);

    /// Canonicalized sum of the given terms.
    static KExpr from_terms(std::vector<KTerm> terms);

    /// Sum kept exactly as given (unsorted, unmerged). Every operation
    /// canonicalizes its result, so this exists for tests and deserialization.
    static KExpr raw(std::vector<KTerm> terms);

    [[nodiscard]] const std::vector<KTerm>& terms() const { return terms_; }
    [[nodiscard]] bool is_canonical() const { return canonical_; }
    [[nodiscard]] bool empty() const { return terms_.empty(); }

    /// Largest coefficient magnitude that entered the sums producing this
    /// expression, before any cancellation. Zero for an expression built
    /// only from zeros.
    [[nodiscard]] double reference_magnitude() const { return reference_; }

    [[nodiscard]] KExpr canonicalized() const;

    /// Coefficient of r^power K(r/scale) in canonical form (0 if absent).
    [[nodiscard]] double coefficient(int power, BesselKind kind, Rational scale) const;

    friend KExpr operator+(const KExpr& a, const KExpr& b);
    friend KExpr operator-(const KExpr& a, const KExpr& b);
    friend KExpr operator*(double c, const KExpr& e);

private:
    friend class KExprBuilder;
    std::vector<KTerm> terms_;
    bool canonical_ = true;
    double reference_ = 0.0;
};

/// Exact d/dr:
///   d/dr[r^p K0(r/a)] = p r^{p-1} K0(r/a) - (1/a) r^p K1(r/a)
///   d/dr[r^p K1(r/a)] = (p-1) r^{p-1} K1(r/a) - (1/a) r^p K0(r/a)
[[nodiscard]] KExpr differentiate(const KExpr& e);

/// ca * a + cb * b, canonicalized.
[[nodiscard]] KExpr combine(const KExpr& a, const KExpr& b, double ca, double cb);

/// Multiply by r^s.
[[nodiscard]] KExpr shift_power(const KExpr& e, int s);

/// Numeric value at r > 0 (DomainError otherwise).
[[nodiscard]] double evaluate(const KExpr& e, double r);

/// True iff every canonical coefficient is at most tol times the reference
/// magnitude (or times 1 when the reference is zero).
[[nodiscard]] bool is_zero(const KExpr& e, double tol = kCancellationTol);

/// Largest canonical coefficient magnitude relative to the reference
/// magnitude; is_zero(e, tol) is equivalent to relative_residual(e) <= tol.
[[nodiscard]] double relative_residual(const KExpr& e);

/// is_zero(a - b, tol).
[[nodiscard]] bool approx_equal(const KExpr& a, const KExpr& b, double tol = kCancellationTol);

/// Largest scale present, or 1 for the zero expression.
[[nodiscard]] Rational max_scale(const KExpr& e);

/// Human-readable form, e.g. "1*r^1*K1(r/3) - 2*r^2*K0(r/3)".
[[nodiscard]] std::string to_string(const KExpr& e);

} // namespace dirac_ps
