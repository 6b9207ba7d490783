#pragma once

/**
 * @file energy_lab.hpp
 * @brief Archimedean energy pairings of discrete measures.
 *
 * Conventions: (rho, sigma) is the double integral of -log|x - y|, and the
 * self-pairing of a discrete measure omits the diagonal. lambda_inf is the
 * uniform measure on the unit circle, with (delta_z, lambda_inf) = -log+|z|
 * and (lambda_inf, lambda_inf) = 0. [F]_eps smears each point of F uniformly
 * over the circle of radius eps about it.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "core.hpp"
#include "integer_poly.hpp"
#include "irreducibility.hpp"
#include "quadrature.hpp"
#include "roots.hpp"

namespace heightbounds {

/// A real value with an absolute error bound inherited from root radii.
struct Estimate {
    double value = 0.0;
    double error_bound = 0.0;
};

namespace detail {

inline double log_plus(double r) { return r > 1.0 ? std::log(r) : 0.0; }

/// log+|w| at the center of D(z, r) and its maximal deviation over the disk.
inline Estimate log_plus_over_disk(Complex z, double r) {
    const double m = std::abs(z);
    const double center = log_plus(m);
    const double hi = log_plus(m + r);
    const double lo = log_plus(std::max(m - r, 0.0));
    return Estimate{center, std::max(hi - center, center - lo)};
}

/// Natural log of |n| for a nonzero big integer.
inline double log_abs(const BigInt& n) {
    BigInt a = boost::multiprecision::abs(n);
    const auto bits = static_cast<long long>(boost::multiprecision::msb(a)) + 1;
    if (bits <= 1000) return std::log(a.convert_to<double>());
    const long long shift = bits - 64;
    a >>= static_cast<unsigned>(shift);
    return std::log(a.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
}

inline void require_content_one(const IntPolynomial& f, const char* who) {
    if (f.content() != 1) throw contract_violation(std::string(who) + ": polynomial content must be 1");
}

inline void require_not_reducible(const IntPolynomial& f, const char* who) {
    if (certify_irreducible(f).verdict == Irreducibility::reducible)
        throw contract_violation(std::string(who) + ": " + f.to_string() + " is reducible over Q");
}

}  // namespace detail

// -----------------------------------------------------------------------------
// Heights and discriminant pairings of algebraic numbers
// -----------------------------------------------------------------------------

/// (1/d)(log|a_d| + sum log+|alpha_i|) from certified roots, no input checks.
inline Estimate weil_height_from_roots(const IntPolynomial& f, const RootSet& roots) {
    const double d = f.degree();
    Estimate h{std::log(std::abs(static_cast<double>(f.leading()))), 0.0};
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const auto lp = detail::log_plus_over_disk(roots.roots[i], roots.radii[i]);
        h.value += lp.value;
        h.error_bound += lp.error_bound;
    }
    h.value /= d;
    h.error_bound /= d;
    return h;
}

/// Weil height of a root of f, with its error bound. Roots of unity give 0 exactly.
inline Estimate weil_height_estimate(const IntPolynomial& f) {
    detail::require_content_one(f, "weil_height");
    detail::require_not_reducible(f, "weil_height");
    const RootSet roots = complex_roots(f);
    Estimate h = weil_height_from_roots(f, roots);
    // Kronecker: height zero means a root of unity; confirm exactly before trusting it.
    if (h.value - h.error_bound < 1e-9 && is_cyclotomic(f)) return Estimate{0.0, 0.0};
    return h;
}

/// Weil height h(alpha) in nats for alpha a root of the irreducible f.
inline double weil_height(const IntPolynomial& f) { return weil_height_estimate(f).value; }

/// Exact discriminant (-1)^{d(d-1)/2} Res(f, f') / a_d; 1 for linear f.
inline BigInt discriminant(const IntPolynomial& f) {
    if (f.degree() < 2) return BigInt(1);
    return f.discriminant();
}

/// Off-diagonal self-energy -(1/d^2) sum_{i != j} log|alpha_i - alpha_j| from roots.
inline Estimate offdiagonal_energy(const RootSet& roots) {
    const std::size_t n = roots.size();
    const double d = static_cast<double>(n);
    Estimate e;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dist = std::abs(roots.roots[i] - roots.roots[j]);
            const double slack = roots.radii[i] + roots.radii[j];
            e.value -= 2.0 * std::log(dist);
            e.error_bound += 2.0 * (std::log(dist) - std::log(std::max(dist - slack, 0.0)));
        }
    }
    e.value /= d * d;
    e.error_bound /= d * d;
    return e;
}

struct PairingReport {
    Estimate pairing;      // ([alpha] - lambda, [alpha] - lambda) at the real place
    Estimate height;
    BigInt disc;
    double mahler_margin;  // pairing + log d/(d-1); >= 0 by Mahler's inequality (d >= 2)
};

/// Archimedean pairing (2/d) sum log+|alpha_i| - (1/d^2) log(|disc| / |a_d|^{2d-2}),
/// from exact discriminant and certified roots; no irreducibility check.
inline PairingReport arch_pairing_from_roots(const IntPolynomial& f, const RootSet& roots) {
    const int d = f.degree();
    const double dd = d;
    PairingReport rep;
    rep.disc = discriminant(f);
    Estimate sum_log_plus;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const auto lp = detail::log_plus_over_disk(roots.roots[i], roots.radii[i]);
        sum_log_plus.value += lp.value;
        sum_log_plus.error_bound += lp.error_bound;
    }
    const double log_disc = d >= 2 ? detail::log_abs(rep.disc) : 0.0;
    const double log_lead = std::log(std::abs(static_cast<double>(f.leading())));
    rep.pairing.value = 2.0 / dd * sum_log_plus.value - (log_disc - (2.0 * dd - 2.0) * log_lead) / (dd * dd);
    rep.pairing.error_bound = 2.0 / dd * sum_log_plus.error_bound;
    rep.height = weil_height_from_roots(f, roots);
    rep.mahler_margin = d >= 2 ? rep.pairing.value + std::log(dd) / (dd - 1.0) : rep.pairing.value;
    return rep;
}

/// Full report for an irreducible content-1 f.
inline PairingReport arch_pairing_report(const IntPolynomial& f) {
    detail::require_content_one(f, "arch_pairing");
    if (!f.is_squarefree()) throw contract_violation("arch_pairing: polynomial must be squarefree");
    detail::require_not_reducible(f, "arch_pairing");
    return arch_pairing_from_roots(f, complex_roots(f));
}

inline double arch_pairing(const IntPolynomial& f) { return arch_pairing_report(f).pairing.value; }

// -----------------------------------------------------------------------------
// Circle-measure pairings
// -----------------------------------------------------------------------------

namespace detail {

inline constexpr double kCircleTol = 1e-13;

/// (1/2pi) integral of log|w - eps e^{i theta}| over theta in [t0, t1].
inline double circle_log_arc(Complex w, double eps, double t0, double t1) {
    const auto r = quad::integrate(
        [w, eps](double t) { return std::log(std::abs(w - std::polar(eps, t))); }, {{t0, t1}}, kCircleTol);
    return r.value / (2.0 * std::numbers::pi);
}

}  // namespace detail

/// Mutual energy (delta_{z,eps}, delta_{z',eps}) = -integral_0^1 max{log|w - eps e^{2 pi i s}|, log eps} ds
/// with w = z - z'.
inline double circle_pair(Complex z, Complex z_prime, double eps) {
    if (!(eps > 0.0)) throw domain_error("circle_pair: eps must be positive");
    const Complex w = z - z_prime;
    const double m = std::abs(w);
    if (m == 0.0) return -std::log(eps);
    if (m >= 2.0 * eps) return -std::log(m);
    // On the arc |theta - arg w| < acos(m / 2eps) the circle point is within eps of w,
    // so the max is the constant log eps; elsewhere the logarithm is smooth.
    const double half = std::acos(m / (2.0 * eps));
    const double center = std::arg(w);
    const double constant_part = half / std::numbers::pi * std::log(eps);
    const double smooth_part = detail::circle_log_arc(w, eps, center + half, center + 2.0 * std::numbers::pi - half);
    return -(constant_part + smooth_part);
}

/// (delta_{z,eps}, lambda_inf) = -integral_0^1 log+|z + eps e^{2 pi i t}| dt.
inline double circle_vs_standard(Complex z, double eps) {
    if (!(eps > 0.0)) throw domain_error("circle_vs_standard: eps must be positive");
    const double m = std::abs(z);
    if (m == 0.0) return -detail::log_plus(eps);
    // |z + eps e^{it}| > 1 iff cos(t - arg z) > c.
    const double c = (1.0 - m * m - eps * eps) / (2.0 * eps * m);
    if (c >= 1.0) return 0.0;  // circle inside the closed unit disk
    if (c <= -1.0) return -std::log(std::max(m, eps));  // outside: mean value of log|.|
    const double half = std::acos(c);
    const double center = std::arg(z);
    const auto r = quad::integrate(
        [z, eps](double t) { return std::log(std::abs(z + std::polar(eps, t))); }, {{center - half, center + half}},
        detail::kCircleTol);
    return -std::max(r.value, 0.0) / (2.0 * std::numbers::pi);
}

/// The six energies of a finite real set F and its eps-regularization, with the
/// three regularization inequalities evaluated as slacks (>= 0 when they hold).
struct RegularizationReport {
    double pair_standard = 0.0;       // A   = ([F], lambda)
    double pair_standard_eps = 0.0;   // Ae  = ([F]_eps, lambda)
    double self_energy = 0.0;         // B   = ([F], [F]), diagonal omitted
    double self_energy_eps = 0.0;     // Be  = ([F]_eps, [F]_eps)
    double energy = 0.0;              // B - 2A
    double energy_eps = 0.0;          // Be - 2Ae
    double standard_slack = 0.0;      // eps - |A - Ae|
    double self_slack = 0.0;          // B - log(eps)/|F| - Be
    double energy_slack = 0.0;        // E - (Ee - 2 eps + log(eps)/|F|)
    bool standard_ok = false;
    bool self_ok = false;
    bool energy_ok = false;

    bool all_ok() const { return standard_ok && self_ok && energy_ok; }
};

/// Slack below which a regularization inequality counts as violated.
inline constexpr double kRegularizationSlack = -1e-9;

inline RegularizationReport regularization_checks(const std::vector<double>& points, double eps) {
    if (points.empty()) throw domain_error("regularization_checks: F must be nonempty");
    if (!(eps > 0.0 && eps < 1.0)) throw domain_error("regularization_checks: eps must lie in (0, 1)");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i] == points[j]) throw domain_error("regularization_checks: F must not repeat points");

    const double n = static_cast<double>(points.size());
    RegularizationReport r;
    for (double x : points) {
        r.pair_standard -= detail::log_plus(std::abs(x));
        r.pair_standard_eps += circle_vs_standard(Complex(x, 0.0), eps);
    }
    r.pair_standard /= n;
    r.pair_standard_eps /= n;
    for (std::size_t i = 0; i < points.size(); ++i) {
        r.self_energy_eps += -std::log(eps);
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            r.self_energy -= 2.0 * std::log(std::abs(points[i] - points[j]));
            r.self_energy_eps += 2.0 * circle_pair(Complex(points[i], 0.0), Complex(points[j], 0.0), eps);
        }
    }
    r.self_energy /= n * n;
    r.self_energy_eps /= n * n;
    r.energy = r.self_energy - 2.0 * r.pair_standard;
    r.energy_eps = r.self_energy_eps - 2.0 * r.pair_standard_eps;

    const double log_eps_over_n = std::log(eps) / n;
    r.standard_slack = eps - std::abs(r.pair_standard - r.pair_standard_eps);
    r.self_slack = r.self_energy - log_eps_over_n - r.self_energy_eps;
    r.energy_slack = r.energy - (r.energy_eps - 2.0 * eps + log_eps_over_n);
    r.standard_ok = r.standard_slack >= kRegularizationSlack;
    r.self_ok = r.self_slack >= kRegularizationSlack;
    r.energy_ok = r.energy_slack >= kRegularizationSlack;
    return r;
}

}  // namespace heightbounds
