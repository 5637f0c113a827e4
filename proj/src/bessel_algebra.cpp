#include "dirac_ps/bessel_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>
#include <utility>

#include "dirac_ps/error.hpp"
#include "dirac_ps/specfun.hpp"

namespace dirac_ps {

namespace {

auto sort_key(const KTerm& t) { return std::make_tuple(t.scale, static_cast<int>(t.kind), t.power); }

double max_abs_coeff(const std::vector<KTerm>& terms) {
    double m = 0.0;
    for (const auto& t : terms) {
        m = std::max(m, std::abs(t.coeff));
    }
    return m;
}

} // namespace

// Builds canonical expressions while tracking the pre-cancellation magnitude.
class KExprBuilder {
public:
    static KExpr canonical(std::vector<KTerm> contributions, double inherited_reference) {
        KExpr out;
        out.reference_ = std::max(inherited_reference, max_abs_coeff(contributions));
        std::sort(contributions.begin(), contributions.end(),
                  [](const KTerm& a, const KTerm& b) { return sort_key(a) < sort_key(b); });
        for (const auto& t : contributions) {
            if (!out.terms_.empty() && sort_key(out.terms_.back()) == sort_key(t)) {
                out.terms_.back().coeff += t.coeff;
            } else {
                out.terms_.push_back(t);
            }
        }
        std::erase_if(out.terms_, [](const KTerm& t) { return t.coeff == 0.0; });
        out.canonical_ = true;
        return out;
    }

    static KExpr raw(std::vector<KTerm> terms) {
        KExpr out;
        out.reference_ = max_abs_coeff(terms);
        out.terms_ = std::move(terms);
        out.canonical_ = false;
        return out;
    }
};

KExpr KExpr::term(double coeff, int power, BesselKind kind, Rational scale) {
    if (!(scale > Rational{0})) {
        throw DomainError("KExpr::term: scale must be positive, got " + scale.str());
    }
    if (!std::isfinite(coeff)) {
        throw DomainError("KExpr::term: coefficient must be finite");
    }
    return KExprBuilder::canonical({KTerm{coeff, power, kind, scale}}, 0.0);
}

KExpr KExpr::from_terms(std::vector<KTerm> terms) {
    for (const auto& t : terms) {
        if (!(t.scale > Rational{0}) || !std::isfinite(t.coeff)) {
            throw DomainError("KExpr::from_terms: invalid term");
        }
    }
    return KExprBuilder::canonical(std::move(terms), 0.0);
}

KExpr KExpr::raw(std::vector<KTerm> terms) { return KExprBuilder::raw(std::move(terms)); }

KExpr KExpr::canonicalized() const {
    if (canonical_) {
        return *this;
    }
    return KExprBuilder::canonical(terms_, reference_);
}

double KExpr::coefficient(int power, BesselKind kind, Rational scale) const {
    const auto c = canonicalized();
    for (const auto& t : c.terms_) {
        if (t.power == power && t.kind == kind && t.scale == scale) {
            return t.coeff;
        }
    }
    return 0.0;
}

KExpr operator+(const KExpr& a, const KExpr& b) { return combine(a, b, 1.0, 1.0); }
KExpr operator-(const KExpr& a, const KExpr& b) { return combine(a, b, 1.0, -1.0); }
KExpr operator*(double c, const KExpr& e) { return combine(e, KExpr{}, c, 0.0); }

KExpr differentiate(const KExpr& e) {
    std::vector<KTerm> out;
    out.reserve(2 * e.terms().size());
    double factor = e.terms().empty() ? 1.0 : 0.0;
    for (const auto& t : e.terms()) {
        const double inv_scale = 1.0 / t.scale.to_double();
        if (t.kind == BesselKind::k0) {
            out.push_back({t.power * t.coeff, t.power - 1, BesselKind::k0, t.scale});
            out.push_back({-inv_scale * t.coeff, t.power, BesselKind::k1, t.scale});
            factor = std::max({factor, std::abs(static_cast<double>(t.power)), inv_scale});
        } else {
            out.push_back({(t.power - 1) * t.coeff, t.power - 1, BesselKind::k1, t.scale});
            out.push_back({-inv_scale * t.coeff, t.power, BesselKind::k0, t.scale});
            factor = std::max({factor, std::abs(t.power - 1.0), inv_scale});
        }
    }
    return KExprBuilder::canonical(std::move(out), factor * e.reference_magnitude());
}

KExpr combine(const KExpr& a, const KExpr& b, double ca, double cb) {
    std::vector<KTerm> out;
    out.reserve(a.terms().size() + b.terms().size());
    if (ca != 0.0) {
        for (auto t : a.terms()) {
            t.coeff *= ca;
            out.push_back(t);
        }
    }
    if (cb != 0.0) {
        for (auto t : b.terms()) {
            t.coeff *= cb;
            out.push_back(t);
        }
    }
    const double inherited =
        std::max(std::abs(ca) * a.reference_magnitude(), std::abs(cb) * b.reference_magnitude());
    return KExprBuilder::canonical(std::move(out), inherited);
}

KExpr shift_power(const KExpr& e, int s) {
    std::vector<KTerm> out = e.terms();
    for (auto& t : out) {
        t.power += s;
    }
    return KExprBuilder::canonical(std::move(out), e.reference_magnitude());
}

double evaluate(const KExpr& e, double r) {
    if (!(r > 0.0)) {
        throw DomainError("evaluate: r must be positive, got " + std::to_string(r));
    }
    // terms are grouped by scale in canonical order, so one Bessel pair per run
    double sum = 0.0;
    const auto& terms = e.terms();
    std::size_t i = 0;
    while (i < terms.size()) {
        const Rational scale = terms[i].scale;
        const auto k = specfun::bessel_k01(r / scale.to_double());
        for (; i < terms.size() && terms[i].scale == scale; ++i) {
            const auto& t = terms[i];
            const double bessel = t.kind == BesselKind::k0 ? k.k0 : k.k1;
            sum += t.coeff * std::pow(r, t.power) * bessel;
        }
    }
    return sum;
}

double relative_residual(const KExpr& e) {
    const auto c = e.canonicalized();
    const double reference = c.reference_magnitude() > 0.0 ? c.reference_magnitude() : 1.0;
    return max_abs_coeff(c.terms()) / reference;
}

bool is_zero(const KExpr& e, double tol) {
    if (tol < 0.0) {
        throw DomainError("is_zero: tolerance must be non-negative");
    }
    return relative_residual(e) <= tol;
}

bool approx_equal(const KExpr& a, const KExpr& b, double tol) { return is_zero(a - b, tol); }

Rational max_scale(const KExpr& e) {
    Rational best{1};
    bool any = false;
    for (const auto& t : e.terms()) {
        if (!any || t.scale > best) {
            best = t.scale;
            any = true;
        }
    }
    return best;
}

std::string to_string(const KExpr& e) {
    if (e.terms().empty()) {
        return "0";
    }
    std::string out;
    for (const auto& t : e.terms()) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s%.17g*r^%d*K%d(r/%s)", out.empty() ? "" : " + ", t.coeff, t.power,
                      static_cast<int>(t.kind), t.scale.str().c_str());
        out += buf;
    }
    return out;
}

} // namespace dirac_ps
