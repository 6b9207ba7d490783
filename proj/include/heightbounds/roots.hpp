#pragma once

// All complex roots of an integer polynomial by Aberth-Ehrlich iteration,
// followed by a-posteriori inclusion disks. For approximations z_1..z_d of the
// roots of f, each disk
//
//     D(z_i, d * |f(z_i)| / (|a_d| * prod_{j != i} |z_i - z_j|))
//
// and each connected union of m such disks holds exactly m roots, so pairwise
// disjoint disks certify one root each. |f(z_i)| is inflated by a running
// error bound for Horner's rule so the radii survive rounding.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "core.hpp"
#include "integer_poly.hpp"

namespace heightbounds {

using Complex = std::complex<double>;

/// Certified roots: root i of the source polynomial lies in the disk of radius
/// radii[i] about roots[i], and the disks are pairwise disjoint.
struct RootSet {
    std::vector<Complex> roots;
    std::vector<double> radii;
    double target_radius = 0.0;
    bool target_met = false;  // every radius <= target_radius

    std::size_t size() const noexcept { return roots.size(); }
    double max_radius() const { return radii.empty() ? 0.0 : *std::max_element(radii.begin(), radii.end()); }

    /// The root in disk i is real: its mirror disk meets no other disk.
    bool certified_real(std::size_t i) const {
        const Complex center(roots[i].real(), 0.0);
        const double r = radii[i] + std::abs(roots[i].imag());
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (j == i) continue;
            if (std::abs(center - roots[j]) <= r + radii[j]) return false;
        }
        return true;
    }

    /// The root in disk i is not real: the disk misses the real axis.
    bool certified_nonreal(std::size_t i) const { return std::abs(roots[i].imag()) > radii[i]; }

    /// Number of roots certified real; -1 when some root is undecided.
    int certified_real_count() const {
        int count = 0;
        for (std::size_t i = 0; i < roots.size(); ++i) {
            if (certified_real(i))
                ++count;
            else if (!certified_nonreal(i))
                return -1;
        }
        return count;
    }
};

namespace detail {

struct HornerValue {
    Complex value;
    Complex derivative;
    double error_bound;  // bound on |computed value - exact value|
};

inline HornerValue horner(const std::vector<double>& a, Complex z) {
    const int d = static_cast<int>(a.size()) - 1;
    Complex p(a[static_cast<std::size_t>(d)], 0.0);
    Complex dp(0.0, 0.0);
    double abs_sum = std::abs(a[static_cast<std::size_t>(d)]);
    const double az = std::abs(z);
    for (int k = d - 1; k >= 0; --k) {
        dp = dp * z + p;
        p = p * z + a[static_cast<std::size_t>(k)];
        abs_sum = abs_sum * az + std::abs(a[static_cast<std::size_t>(k)]);
    }
    // Complex Horner: each step costs a few roundings; 8(d+1)u with margin.
    constexpr double u = std::numeric_limits<double>::epsilon() / 2.0;
    return HornerValue{p, dp, 8.0 * (d + 1) * u * abs_sum * 1.01};
}

inline double inclusion_radius(const std::vector<double>& a, const std::vector<Complex>& z, std::size_t i) {
    const auto hv = horner(a, z[i]);
    double prod = std::abs(a.back());
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (j == i) continue;
        prod *= std::abs(z[i] - z[j]);
    }
    if (prod == 0.0) return std::numeric_limits<double>::infinity();
    const double d = static_cast<double>(z.size());
    return d * (std::abs(hv.value) + hv.error_bound) / prod * (1.0 + 1e-12);
}

inline bool disks_disjoint(const std::vector<Complex>& z, const std::vector<double>& r) {
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!std::isfinite(r[i])) return false;
        for (std::size_t j = i + 1; j < z.size(); ++j)
            if (std::abs(z[i] - z[j]) <= r[i] + r[j]) return false;
    }
    return true;
}

/// Aberth-Ehrlich sweeps (Gauss-Seidel order) until corrections stall.
inline int aberth_iterate(const std::vector<double>& a, std::vector<Complex>& z, int max_iterations) {
    const std::size_t n = z.size();
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int it = 0; it < max_iterations; ++it) {
        bool moving = false;
        for (std::size_t i = 0; i < n; ++i) {
            const auto hv = horner(a, z[i]);
            if (hv.value == Complex(0.0, 0.0)) continue;
            const Complex ratio = hv.value / hv.derivative;
            Complex repulsion(0.0, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) repulsion += 1.0 / (z[i] - z[j]);
            const Complex step = ratio / (1.0 - ratio * repulsion);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
            z[i] -= step;
            if (std::abs(step) > 4.0 * eps * std::abs(z[i]) + std::numeric_limits<double>::min()) moving = true;
        }
        if (!moving) return it + 1;
    }
    return max_iterations;
}

}  // namespace detail

/// All d roots of f with certified inclusion radii. Radii above
/// `target_radius` are accepted (target_met = false) as long as the disks stay
/// disjoint; tolerance_not_met is thrown when they cannot be separated.
inline RootSet complex_roots(const IntPolynomial& f, double target_radius = 1e-12) {
    if (!f.is_squarefree()) throw contract_violation("complex_roots: polynomial must be squarefree");
    const int d = f.degree();
    std::vector<double> a(f.coefficients().begin(), f.coefficients().end());

    // Initial guesses on a circle of radius |a_0/a_d|^{1/d}, rotated off the axes.
    std::vector<Complex> z(static_cast<std::size_t>(d));
    double rho = std::pow(std::abs(a.front() / a.back()), 1.0 / d);
    if (!(rho > 0.0) || !std::isfinite(rho)) rho = 1.0;
    for (int k = 0; k < d; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / d + 0.4;
        z[static_cast<std::size_t>(k)] = std::polar(rho, angle);
    }

    RootSet out;
    out.target_radius = target_radius;
    std::vector<double> r(z.size());
    for (int attempt = 0; attempt < 4; ++attempt) {
        detail::aberth_iterate(a, z, attempt == 0 ? 500 : 50);
        for (std::size_t i = 0; i < z.size(); ++i) r[i] = detail::inclusion_radius(a, z, i);
        if (detail::disks_disjoint(z, r)) {
            out.roots = z;
            out.radii = r;
            out.target_met = out.max_radius() <= target_radius;
            return out;
        }
    }
    std::ostringstream msg;
    msg << "complex_roots: inclusion disks for " << f.to_string() << " could not be separated; radii";
    for (double ri : r) msg << " " << ri;
    throw tolerance_not_met(msg.str());
}

}  // namespace heightbounds
