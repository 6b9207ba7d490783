#pragma once

/**
 * @file arch_potential.hpp
 * @brief The equilibrium measure mu_R of P^1(R) for the spherical kernel,
 *        integration against it, and the strip Robin-constant lower bound.
 *
 * mu_R has density w(z) = log|(z+1)/(z-1)| / (pi^2 z): even, with value 2/pi^2
 * at 0, logarithmic blow-ups at +-1 and z^-2 tails. Integrals are split at
 * {-1, 0, 1} and +-4 and each piece is parametrized by the distance to its
 * singular anchor, so the density never suffers cancellation:
 *
 *   z = +-(1 - u), u in (0, 1]      z = +-(1 + u), u in (0, 3]
 *   z = +-cot(phi), phi in (0, atan(1/4)]
 *
 * Every sub-piece is then mapped through a quintic smoothstep whose Jacobian
 * vanishes at the ends, and the pieces are refined jointly by adaptive
 * Gauss-Kronrod.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "core.hpp"
#include "quadrature.hpp"

namespace heightbounds {

namespace detail {

inline constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

/// Density at z = 1 - u for u in (0, 1].
inline double density_inside(double u) {
    const double z = 1.0 - u;  // exact for u >= 0.5
    if (z < 0.5) {
        if (z == 0.0) return 2.0 / kPi2;
        return 2.0 * std::atanh(z) / (kPi2 * z);
    }
    return (std::log(2.0 - u) - std::log(u)) / (kPi2 * z);
}

/// Density at z = 1 + u for u > 0.
inline double density_outside(double u) { return (std::log(2.0 + u) - std::log(u)) / (kPi2 * (1.0 + u)); }

/// One parametrized piece of R on the positive side (mirrored by `sign`).
enum class Anchor { inside, outside, tail };

/// Parameter of the point |z| within its piece, if |z| is not an anchor.
inline bool parameter_of(double az, Anchor& anchor, double& s) {
    if (!(az > 0.0) || az == 1.0 || !std::isfinite(az)) return false;
    if (az < 1.0) {
        anchor = Anchor::inside;
        s = 1.0 - az;
    } else if (az <= 4.0) {
        if (az == 4.0) return false;
        anchor = Anchor::outside;
        s = az - 1.0;
    } else {
        anchor = Anchor::tail;
        s = std::atan(1.0 / az);
    }
    return true;
}

}  // namespace detail

/// Density of mu_R. Throws domain_error at the singular points z = +-1.
inline double mu_density(double z) {
    if (z == 1.0 || z == -1.0) throw domain_error("mu_density: singular at z = +-1");
    const double a = std::abs(z);
    if (a < 1.0) return detail::density_inside(1.0 - a);
    if (a <= 4.0) return detail::density_outside(a - 1.0);
    return std::log1p(2.0 / (a - 1.0)) / (detail::kPi2 * a);
}

/**
 * Integral of g against mu_R to absolute tolerance `tol`.
 *
 * `breakpoints` are extra points where g is singular or kinked (for example a
 * logarithmic singularity of g at z = x); the pieces are split there too.
 * g must tolerate being evaluated arbitrarily close to, but never exactly at,
 * +-1 and every breakpoint.
 */
template <class G>
QuadratureResult mu_integral(G&& g, double tol, std::span<const double> breakpoints = {},
                             long long max_evaluations = 4'000'000) {
    using detail::Anchor;
    const double tail_hi = std::atan(0.25);
    std::vector<quad::Piece> pieces;
    for (int sign : {1, -1}) {
        for (Anchor anchor : {Anchor::inside, Anchor::outside, Anchor::tail}) {
            const double lo = 0.0;
            const double hi = anchor == Anchor::inside ? 1.0 : anchor == Anchor::outside ? 3.0 : tail_hi;
            std::vector<double> cuts{lo, hi};
            for (double b : breakpoints) {
                if (b * sign <= 0.0) continue;
                Anchor a{};
                double s = 0.0;
                if (detail::parameter_of(std::abs(b), a, s) && a == anchor && s > lo && s < hi) cuts.push_back(s);
            }
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
                const double s0 = cuts[k];
                const double s1 = cuts[k + 1];
                const double width = s1 - s0;
                auto f = [&g, anchor, sign, s0, s1, width](double t) -> double {
                    const double jac_map = width * quad::smoothstep_derivative(t);
                    if (jac_map == 0.0) return 0.0;
                    // Measure the distance to whichever end is nearer, for accuracy.
                    const double s = t < 0.5 ? s0 + width * quad::smoothstep(t) : s1 - width * quad::smoothstep(1.0 - t);
                    double z = 0.0;
                    double weight = 0.0;
                    switch (anchor) {
                        case Anchor::inside:
                            if (s <= 0.0) return 0.0;
                            z = 1.0 - s;
                            if (z == 1.0) z = std::nextafter(1.0, 0.0);
                            weight = detail::density_inside(s);
                            break;
                        case Anchor::outside:
                            if (s <= 0.0) return 0.0;
                            z = 1.0 + s;
                            if (z == 1.0) z = std::nextafter(1.0, 2.0);
                            weight = detail::density_outside(s);
                            break;
                        case Anchor::tail: {
                            if (s <= 0.0) return 0.0;
                            const double sn = std::sin(s);
                            z = std::cos(s) / sn;
                            if (!std::isfinite(z)) return 0.0;
                            weight = std::log1p(2.0 / (z - 1.0)) / (detail::kPi2 * z) / (sn * sn);
                            break;
                        }
                    }
                    const double gz = g(sign * z);
                    return gz * weight * jac_map;
                };
                pieces.push_back(quad::Piece{f, 0.0, 1.0});
            }
        }
    }
    return quad::integrate_pieces(std::move(pieces), tol, max_evaluations);
}

/// Apery's constant by the reversed series sum_{n <= N} 1/n^3, where N is the
/// first index with tail bound 1/(2N^2) < 1e-14.
inline double zeta3() {
    static const double value = [] {
        long long n_max = 1;
        while (1.0 / (2.0 * static_cast<double>(n_max) * static_cast<double>(n_max)) >= 1e-14) n_max *= 2;
        // tighten to the first N meeting the bound
        long long lo = n_max / 2;
        long long hi = n_max;
        while (hi - lo > 1) {
            const long long mid = (lo + hi) / 2;
            if (1.0 / (2.0 * static_cast<double>(mid) * static_cast<double>(mid)) < 1e-14)
                hi = mid;
            else
                lo = mid;
        }
        double sum = 0.0;
        for (long long n = hi; n >= 1; --n) {
            const double x = static_cast<double>(n);
            sum += 1.0 / (x * x * x);
        }
        return sum;
    }();
    return value;
}

/// 7 zeta(3) / (2 pi^2) = integral of log+|z| against mu_R, the Robin constant of P^1(R).
inline double robin_real_line() { return 7.0 * zeta3() / (2.0 * detail::kPi2); }

namespace detail {

/// log(1 + 1/(1 - z)^2), evaluated without overflow or cancellation.
inline double c_integrand(double z) {
    const double a = std::abs(1.0 - z);
    if (a >= 1.0) return std::log1p(1.0 / (a * a));
    return std::log1p(a * a) - 2.0 * std::log(a);
}

}  // namespace detail

/// c1 = (1/2) * L1(mu_R) norm of log(1 + 1/(1 - z)^2).
inline double const_c1(double tol) {
    if (!(tol > 0.0)) throw domain_error("const_c1: tol must be positive");
    return 0.5 * mu_integral(detail::c_integrand, 2.0 * tol).value;
}

/// c2 = L2(mu_R) norm of log(1 + 1/(1 - z)^2).
inline double const_c2(double tol) {
    if (!(tol > 0.0)) throw domain_error("const_c2: tol must be positive");
    // |d sqrt(I)| = |dI| / (2 sqrt(I)) and sqrt(I) > 2, so tol on I suffices.
    const auto r = mu_integral(
        [](double z) {
            const double v = detail::c_integrand(z);
            return v * v;
        },
        tol);
    return std::sqrt(r.value);
}

/// Tolerance at which the cached constants are computed.
inline constexpr double kConstantsTol = 1e-9;

/// c1 and c2 computed once at kConstantsTol and shared by every bound formula.
inline double cached_c1() {
    static const double v = const_c1(kConstantsTol);
    return v;
}
inline double cached_c2() {
    static const double v = const_c2(kConstantsTol);
    return v;
}

/// Lower bound 7zeta(3)/(2pi^2) - c1 eps - c2 eps^(1/8) on the Robin constant of
/// the eps-strip around R. Not clamped; negative values are vacuous.
inline double robin_lower_strip(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw domain_error("robin_lower_strip: eps must lie in (0, 1)");
    return robin_real_line() - cached_c1() * eps - cached_c2() * std::pow(eps, 0.125);
}

/// The delta-potential of mu_R at x + iy:
/// log+|x+iy| + 7zeta(3)/(2pi^2) - integral of log|x+iy-z| dmu_R(z).
inline double u_delta_potential(double x, double y, double tol) {
    if (y == 0.0 && (x == 1.0 || x == -1.0))
        throw domain_error("u_delta_potential: x = +-1 on the real axis is singular");
    const double y2 = y * y;
    const double bp[] = {x};
    const auto r = mu_integral(
        [x, y2](double z) {
            const double dx = x - z;
            // Nodes may round onto the singular point itself; its weight is negligible.
            return 0.5 * std::log(std::max(dx * dx + y2, std::numeric_limits<double>::min()));
        },
        tol, std::span<const double>(bp, 1));
    const double modulus = std::hypot(x, y);
    const double log_plus = modulus > 1.0 ? std::log(modulus) : 0.0;
    return log_plus + robin_real_line() - r.value;
}

}  // namespace heightbounds
