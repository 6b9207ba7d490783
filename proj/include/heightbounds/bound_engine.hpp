#pragma once

/**
 * @file bound_engine.hpp
 * @brief Explicit lower bounds for the Weil height of algebraic numbers whose
 *        conjugates satisfy local splitting conditions.
 *
 * Degree-dependent bounds (theorem1_bound, general_bound), the threshold
 * functions f_S and g_S on (1, inf), the min-max floor searches built on
 * them, and the closed-form per-prime floors.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "arch_potential.hpp"
#include "core.hpp"
#include "nonarch_robin.hpp"

namespace heightbounds {

// -----------------------------------------------------------------------------
// Exact comparison of p^k against x^e for real x
// -----------------------------------------------------------------------------

namespace detail {

inline constexpr std::int64_t kExactPowerLimit = 4096;

/// Sign of p^k - x^e. Decided by logarithms when the gap is clear and by exact
/// big-integer arithmetic on the binary expansion of x otherwise.
inline int compare_power(std::int64_t p, std::int64_t k, double x, std::int64_t e) {
    const long double lhs = static_cast<long double>(k) * std::log(static_cast<long double>(p));
    const long double rhs = static_cast<long double>(e) * std::log(static_cast<long double>(x));
    const long double gap = lhs - rhs;
    if (std::abs(gap) > 1e-12L * (1.0L + std::abs(lhs))) return gap > 0 ? 1 : -1;
    // Exact powers of this size are out of reach; the logarithms decide.
    if (k > kExactPowerLimit || e > kExactPowerLimit) return gap > 0 ? 1 : (gap < 0 ? -1 : 0);

    using boost::multiprecision::cpp_int;
    int exponent = 0;
    const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent, mantissa in [0.5, 1)
    const auto m = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
    const long long shift = static_cast<long long>(exponent) - 53;  // x = m * 2^shift exactly
    cpp_int left = boost::multiprecision::pow(cpp_int(p), static_cast<unsigned>(k));
    cpp_int right = boost::multiprecision::pow(cpp_int(m), static_cast<unsigned>(e));
    const long long total_shift = shift * e;
    if (total_shift < 0)
        left <<= static_cast<unsigned>(-total_shift);
    else
        right <<= static_cast<unsigned>(total_shift);
    return left < right ? -1 : (left > right ? 1 : 0);
}

}  // namespace detail

/// Largest k >= 0 with p^k <= x^e, for real x > 1.
inline std::int64_t n_p_real(const LocalFieldData& field, double x) {
    if (!(x > 1.0)) throw domain_error("n_p_real: x must exceed 1");
    const double t = static_cast<double>(field.e()) * std::log(x) / std::log(static_cast<double>(field.p()));
    auto k = static_cast<std::int64_t>(std::floor(t));
    if (k < 0) k = 0;
    while (detail::compare_power(field.p(), k + 1, x, field.e()) <= 0) ++k;
    while (k > 0 && detail::compare_power(field.p(), k, x, field.e()) > 0) --k;
    return k;
}

/// p^{1/e} < x, i.e. p < x^e.
inline bool place_included_real(const LocalFieldData& field, double x) {
    return detail::compare_power(field.p(), 1, x, field.e()) < 0;
}

/// p^{1/e} <= y, the membership test for the reduced set S'.
inline bool place_reached(const LocalFieldData& field, double y) {
    return detail::compare_power(field.p(), 1, y, field.e()) <= 0;
}

// -----------------------------------------------------------------------------
// Archimedean term and degree-dependent bounds
// -----------------------------------------------------------------------------

/// Contribution of a real place to the degree-d bound, clamped at zero.
inline double v_infinity(std::int64_t d) {
    if (d < 2) throw domain_error("v_infinity: degree must be >= 2");
    const double dd = static_cast<double>(d);
    const double c1 = cached_c1();
    const double c2 = cached_c2();
    const double lead = robin_real_line() / 2.0;  // 7 zeta(3) / (4 pi^2)
    const double value = lead - (c1 + 2.0) / (2.0 * std::pow(dd, 8)) -
                         ((7.0 * dd - 8.0) * std::log(dd) + (dd - 1.0) * c2) / (2.0 * dd * (dd - 1.0));
    return std::max(value, 0.0);
}

namespace detail {

inline double mahler_floor(double d) { return -std::log(d) / (2.0 * (d - 1.0)); }

/// Local Robin-constant lower bound for the class, before subtracting log d / d.
/// `n_exponent` is the power of q in the neighborhood radius.
inline double local_robin_term(const LocalFieldData& field, std::int64_t n_exponent, AlgebraicClass cls) {
    switch (cls) {
        case AlgebraicClass::general: return robin_P1_eps(field, n_exponent);
        case AlgebraicClass::integer: return robin_O_eps(field, n_exponent);
        case AlgebraicClass::unit: return robin_O_units_eps(field, n_exponent);
    }
    return 0.0;
}

}  // namespace detail

/// Lower bound on h(alpha) for alpha of degree d whose conjugates all lie in
/// every local field of `spec`, refined by the algebraic class of alpha.
inline BoundReport theorem1_bound(const SplittingSpec& spec, std::int64_t d, AlgebraicClass cls) {
    if (d < 2) throw domain_error("theorem1_bound: degree must be >= 2");
    const double dd = static_cast<double>(d);
    BoundReport report;
    report.degree = d;
    report.algebraic_class = cls;
    report.mahler_term = detail::mahler_floor(dd);
    report.arch_term = spec.has_real_place() ? v_infinity(d) : 0.0;
    for (const auto& field : spec.finite_places()) {
        PlaceContribution pc{field, n_p(field, d), 1.0, 0.0, place_included(field, d)};
        if (pc.included) pc.contribution = detail::local_robin_term(field, pc.n_p, cls) - std::log(dd) / dd;
        report.per_place.push_back(pc);
    }
    report.total = report.sum_of_parts();
    return report;
}

/// A place of a base field K with its weight N_v = [K_v : Q_v] / [K : Q].
struct WeightedPlace {
    bool archimedean = false;
    std::optional<LocalFieldData> field;  // set iff finite
    double weight = 1.0;
    bool in_spec = true;           // archimedean places only: is v in S?
    std::int64_t base_inertia = 1;  // f_v in the exponent q_v^{n_v f_v}

    static WeightedPlace real(double weight, bool in_spec) { return WeightedPlace{true, std::nullopt, weight, in_spec, 1}; }
    static WeightedPlace finite(const LocalFieldData& field, double weight, std::int64_t base_inertia = 1) {
        return WeightedPlace{false, field, weight, true, base_inertia};
    }
};

/// Weighted version of theorem1_bound over a base field K.
inline BoundReport general_bound(const std::vector<WeightedPlace>& places, std::int64_t d, AlgebraicClass cls) {
    if (d < 2) throw domain_error("general_bound: degree must be >= 2");
    const double dd = static_cast<double>(d);
    BoundReport report;
    report.degree = d;
    report.algebraic_class = cls;
    for (const auto& place : places) {
        if (!(place.weight > 0.0 && place.weight <= 1.0))
            throw std::invalid_argument("general_bound: weight N_v must lie in (0, 1]");
        if (place.archimedean) {
            if (place.in_spec)
                report.arch_term += place.weight * v_infinity(d);
            else
                report.mahler_term += place.weight * detail::mahler_floor(dd);
            continue;
        }
        if (!place.field) throw std::invalid_argument("general_bound: finite place without local data");
        if (place.base_inertia < 1) throw std::invalid_argument("general_bound: f_v must be >= 1");
        const auto& field = *place.field;
        PlaceContribution pc{field, n_p(field, d), place.weight, 0.0, place_included(field, d)};
        if (pc.included)
            pc.contribution =
                place.weight * (detail::local_robin_term(field, pc.n_p * place.base_inertia, cls) - std::log(dd) / dd);
        report.per_place.push_back(pc);
    }
    report.total = report.sum_of_parts();
    return report;
}

// -----------------------------------------------------------------------------
// Threshold functions on (1, inf)
// -----------------------------------------------------------------------------

namespace detail {

inline double threshold_function(const SplittingSpec& spec, double x, AlgebraicClass cls, const char* who) {
    if (!(x > 1.0)) throw domain_error(std::string(who) + ": x must exceed 1");
    const double log_x = std::log(x);
    double sum = 0.0;
    for (const auto& field : spec.finite_places()) {
        if (!place_included_real(field, x)) continue;
        sum += local_robin_term(field, n_p_real(field, x), cls) - log_x / x;
    }
    return -log_x / (2.0 * (x - 1.0)) + 0.5 * sum;
}

}  // namespace detail

/// f_S(x): the general-class degree bound with d replaced by a real x.
inline double f_S(const SplittingSpec& spec, double x) {
    return detail::threshold_function(spec, x, AlgebraicClass::general, "f_S");
}

/// g_S(x): the unit-class degree bound with d replaced by a real x.
inline double g_S(const SplittingSpec& spec, double x) {
    return detail::threshold_function(spec, x, AlgebraicClass::unit, "g_S");
}

/// The smallest Pisot number, the real root of t^3 - t - 1, by bisection.
inline double pisot_theta() {
    static const double theta = [] {
        double lo = 1.0;
        double hi = 2.0;
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            (mid * mid * mid - mid - 1.0 < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return theta;
}

namespace detail {

/// Do(x) for x >= 1; Do(1) = log theta is used for floor(z) = 1.
inline double do_value(double x) {
    if (x <= 7.0) return std::log(pisot_theta()) / x;
    const double lx = std::log(x);
    const double r = std::log(lx) / lx;
    return r * r * r / (4.0 * x);
}

}  // namespace detail

/// Dobrowolski-type floor for units of degree x: log(theta)/x up to 7, then
/// (1/(4x)) (log log x / log x)^3.
inline double do_bound(double x) {
    if (!(x > 1.0)) throw domain_error("do_bound: x must exceed 1");
    return detail::do_value(x);
}

/// Schinzel's floor 1/2 log((1 + sqrt 5)/2) for totally real alpha != 0, +-1.
inline double schinzel_bound() { return 0.5 * std::log((1.0 + std::sqrt(5.0)) / 2.0); }

// -----------------------------------------------------------------------------
// Petsche's unit bound and the Lambert-type threshold
// -----------------------------------------------------------------------------

/// (1/l) (sum_p p^{v_p(l)}/e_p log p - log 2), l = lcm(2, {q_p - 1}). May be <= 0.
inline double petsche_bound(const SplittingSpec& spec) {
    if (spec.finite_places().empty()) throw domain_error("petsche_bound: needs at least one finite place");
    using boost::multiprecision::cpp_int;
    cpp_int l = 2;
    for (const auto& field : spec.finite_places()) l = boost::multiprecision::lcm(l, cpp_int(field.q() - 1));
    double sum = 0.0;
    for (const auto& field : spec.finite_places()) {
        cpp_int rest = l;
        cpp_int pv = 1;
        while (rest % field.p() == 0) {
            rest /= field.p();
            pv *= field.p();
        }
        sum += pv.convert_to<double>() / static_cast<double>(field.e()) * std::log(static_cast<double>(field.p()));
    }
    return (sum - std::numbers::ln2) / l.convert_to<double>();
}

/// x0 = (8/5) a^{-1} (log(1/a) + b), beyond which a x - b - log x > 0.
inline double lambert_threshold(double a, double b) {
    if (!(a > 0.0)) throw domain_error("lambert_threshold: a must be positive");
    if (b < 1.0 + std::log(a)) throw domain_error("lambert_threshold: requires b >= 1 + log a");
    return 1.6 / a * (std::log(1.0 / a) + b);
}

// -----------------------------------------------------------------------------
// Floor searches
// -----------------------------------------------------------------------------

enum class FloorBranch { nonunit_search, unit_search, petsche, closed_form_e1, closed_form_e2, schinzel };

inline const char* to_string(FloorBranch b) {
    switch (b) {
        case FloorBranch::nonunit_search: return "nonunit_search";
        case FloorBranch::unit_search: return "unit_search";
        case FloorBranch::petsche: return "petsche";
        case FloorBranch::closed_form_e1: return "closed_form_e1";
        case FloorBranch::closed_form_e2: return "closed_form_e2";
        case FloorBranch::schinzel: return "schinzel";
    }
    return "?";
}

/// A degree-free lower bound with the data that produced it.
struct FloorResult {
    double bound = 0.0;
    double witness = 0.0;          // y (non-units) or z (units); 0 when not a search
    double guaranteed_floor = 0.0;  // log 2 / y or Do(z): the weaker floor implied by the witness
    std::vector<LocalFieldData> s_prime;
    FloorBranch branch = FloorBranch::nonunit_search;
};

inline constexpr double kSearchStart = 1.01;
inline constexpr double kSearchRatio = 1.01;
inline constexpr double kSearchCap = 1e12;

namespace detail {

/// Smallest grid point where `passes` holds, refined by bisection to the
/// passing endpoint of a 1e-9 bracket (at most 60 steps).
template <class Pred>
double threshold_search(Pred&& passes, const char* who) {
    double prev = 1.0;
    double x = kSearchStart;
    while (x <= kSearchCap) {
        if (passes(x)) {
            double lo = prev;
            double hi = x;
            for (int step = 0; step < 60 && hi - lo > 1e-9; ++step) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= 1.0) break;
                (passes(mid) ? hi : lo) = mid;
            }
            return hi;
        }
        prev = x;
        x *= kSearchRatio;
    }
    throw search_exhausted(std::string(who) + ": no threshold below 1e12; the asymptotic local sum is too small");
}

inline SplittingSpec reduced_spec(const SplittingSpec& spec, double y, std::vector<LocalFieldData>& kept) {
    kept.clear();
    for (const auto& field : spec.finite_places())
        if (place_reached(field, y)) kept.push_back(field);
    return SplittingSpec(false, kept);
}

inline void require_finite_places(const SplittingSpec& spec, const char* who) {
    if (spec.finite_places().empty()) throw domain_error(std::string(who) + ": needs at least one finite place");
}

}  // namespace detail

/// Floor for non-units: smallest y with f_S(y) >= log 2 / y, then
/// min{f_{S'}(ceil y), log 2 / floor y} with S' = {p : p^{1/e} <= y}.
inline FloorResult nonunit_floor_search(const SplittingSpec& spec) {
    detail::require_finite_places(spec, "nonunit_floor_search");
    const SplittingSpec finite_only(false, spec.finite_places());
    const double y = detail::threshold_search(
        [&](double x) { return f_S(finite_only, x) >= std::numbers::ln2 / x; }, "nonunit_floor_search");
    FloorResult r;
    r.branch = FloorBranch::nonunit_search;
    r.witness = y;
    const SplittingSpec reduced = detail::reduced_spec(finite_only, y, r.s_prime);
    r.bound = std::min(f_S(reduced, std::ceil(y)), std::numbers::ln2 / std::floor(y));
    r.guaranteed_floor = std::numbers::ln2 / y;
    return r;
}

/// Floor for units that are not roots of unity: smallest z with g_S(z) >= Do(z),
/// then min{g_{S'}(ceil z), Do(floor z)}.
inline FloorResult unit_floor_search(const SplittingSpec& spec) {
    detail::require_finite_places(spec, "unit_floor_search");
    const SplittingSpec finite_only(false, spec.finite_places());
    const double z = detail::threshold_search([&](double x) { return g_S(finite_only, x) >= detail::do_value(x); },
                                              "unit_floor_search");
    FloorResult r;
    r.branch = FloorBranch::unit_search;
    r.witness = z;
    const SplittingSpec reduced = detail::reduced_spec(finite_only, z, r.s_prime);
    r.bound = std::min(g_S(reduced, std::ceil(z)), detail::do_value(std::floor(z)));
    r.guaranteed_floor = detail::do_value(z);
    return r;
}

// -----------------------------------------------------------------------------
// Closed forms for a single prime
// -----------------------------------------------------------------------------

/// log 2 log p / (5 e q* log(5 e q* / log p)), q* = q + 1 if e = 1 else q. Non-units.
inline double prop_nounit_bound(const LocalFieldData& field) {
    const double log_p = std::log(static_cast<double>(field.p()));
    const double q_star = static_cast<double>(field.e() == 1 ? field.q() + 1 : field.q());
    const double m = 5.0 * static_cast<double>(field.e()) * q_star;
    return std::numbers::ln2 * log_p / (m * std::log(m / log_p));
}

/// log p / (15 e' (q - 1) [log(5 e' (q - 1) / log p)]^4), e' = max(2, e). Units.
inline double prop_unit_bound(const LocalFieldData& field) {
    const double log_p = std::log(static_cast<double>(field.p()));
    const double em = static_cast<double>(std::max<std::int64_t>(2, field.e())) * static_cast<double>(field.q() - 1);
    const double l = std::log(5.0 * em / log_p);
    return log_p / (15.0 * em * l * l * l * l);
}

/// Floor for every alpha != root of unity with all conjugates in L_p.
inline double theorem2_bound(const LocalFieldData& field) {
    const double log_p = std::log(static_cast<double>(field.p()));
    const double q = static_cast<double>(field.q());
    if (field.e() >= 2) {
        const double m = (q - 1.0) * static_cast<double>(field.e());
        const double l = std::log(5.0 * m / log_p);
        return log_p / (15.0 * m * l * l * l * l);
    }
    const double m = 5.0 * (q + 1.0);
    return std::numbers::ln2 * log_p / (m * std::log(m / log_p));
}

/// theorem2_bound packaged as a FloorResult.
inline FloorResult closed_form_floor(const LocalFieldData& field) {
    FloorResult r;
    r.bound = theorem2_bound(field);
    r.guaranteed_floor = r.bound;
    r.s_prime = {field};
    r.branch = field.e() >= 2 ? FloorBranch::closed_form_e2 : FloorBranch::closed_form_e1;
    return r;
}

// -----------------------------------------------------------------------------
// Dispatcher
// -----------------------------------------------------------------------------

namespace detail {

inline FloorResult class_floor(const SplittingSpec& spec, AlgebraicClass cls) {
    if (cls != AlgebraicClass::unit) return nonunit_floor_search(spec);
    FloorResult best = unit_floor_search(spec);
    const double petsche = petsche_bound(spec);
    if (petsche > 0.0 && petsche > best.bound) {
        best.bound = petsche;
        best.guaranteed_floor = petsche;
        best.witness = 0.0;
        best.s_prime = spec.finite_places();
        best.branch = FloorBranch::petsche;
    }
    return best;
}

}  // namespace detail

/**
 * Best available degree-free floor for non-roots of unity in L_S.
 *
 * With a real place in S, Schinzel's bound applies; if finite places are
 * present too, the larger of it and their floor is returned. Without a class,
 * the minimum over non-units and units is returned.
 */
inline FloorResult height_floor(const SplittingSpec& spec, std::optional<AlgebraicClass> cls = std::nullopt) {
    if (spec.empty()) throw domain_error("height_floor: empty splitting set has no positive floor");
    std::optional<FloorResult> finite;
    if (!spec.finite_places().empty()) {
        if (cls) {
            finite = detail::class_floor(spec, *cls);
        } else {
            FloorResult nonunit = detail::class_floor(spec, AlgebraicClass::general);
            FloorResult unit = detail::class_floor(spec, AlgebraicClass::unit);
            finite = unit.bound < nonunit.bound ? unit : nonunit;
        }
    }
    if (!spec.has_real_place()) return *finite;
    FloorResult schinzel;
    schinzel.bound = schinzel_bound();
    schinzel.guaranteed_floor = schinzel.bound;
    schinzel.branch = FloorBranch::schinzel;
    if (finite && finite->bound > schinzel.bound) return *finite;
    return schinzel;
}

}  // namespace heightbounds
