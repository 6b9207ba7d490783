#pragma once

// Closed-form spherical Robin constants at a finite place for O, its unit
// group and P^1(L_p), with lower bounds for their neighborhoods of radius
// |pi|^n. Every formula scales with -log|pi| = (log p)/e.

#include <cmath>
#include <cstdint>

#include "core.hpp"

namespace heightbounds {

namespace detail {

inline double as_double(std::int64_t v) { return static_cast<double>(v); }

/// q^{-n} without overflow for large n.
inline double inverse_power(std::int64_t q, std::int64_t n) { return std::pow(as_double(q), -as_double(n)); }

inline void require_positive_n(std::int64_t n, const char* who) {
    if (n < 1) throw domain_error(std::string(who) + ": n must be >= 1");
}

/// (q - 2) q^{-n}, exactly zero when q = 2.
inline double ring_correction(const LocalFieldData& field, std::int64_t n) {
    if (field.q() == 2) return 0.0;
    return as_double(field.q() - 2) * inverse_power(field.q(), n);
}

}  // namespace detail

/// V(O) = (log p) / (e (q - 1)).
inline double robin_O(const LocalFieldData& field) {
    return field.log_uniformizer_inv() / detail::as_double(field.q() - 1);
}

/// V(O^x) = q (log p) / (e (q - 1)^2).
inline double robin_O_units(const LocalFieldData& field) {
    const double qm1 = detail::as_double(field.q() - 1);
    return detail::as_double(field.q()) * field.log_uniformizer_inv() / (qm1 * qm1);
}

/// V(P^1(L_p)) = q (log p) / (e (q^2 - 1)).
inline double robin_P1(const LocalFieldData& field) {
    const double q = detail::as_double(field.q());
    return q * field.log_uniformizer_inv() / ((q - 1.0) * (q + 1.0));
}

/// Lower bound (1 - (q - 2)/q^n) V(O) for the |pi|^n-neighborhood of O.
inline double robin_O_eps(const LocalFieldData& field, std::int64_t n) {
    detail::require_positive_n(n, "robin_O_eps");
    return (1.0 - detail::ring_correction(field, n)) * robin_O(field);
}

/// Lower bound (1 - (q - 2)/q^n) V(O^x) for the |pi|^n-neighborhood of O^x.
inline double robin_O_units_eps(const LocalFieldData& field, std::int64_t n) {
    detail::require_positive_n(n, "robin_O_units_eps");
    return (1.0 - detail::ring_correction(field, n)) * robin_O_units(field);
}

/// Lower bound (1 - q^{-n}) V(P^1) for the |pi|^n-neighborhood of P^1(L_p).
inline double robin_P1_eps(const LocalFieldData& field, std::int64_t n) {
    detail::require_positive_n(n, "robin_P1_eps");
    return (1.0 - detail::inverse_power(field.q(), n)) * robin_P1(field);
}

}  // namespace heightbounds
