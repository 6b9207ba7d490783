#pragma once

/**
 * @file core.hpp
 * @brief Domain types shared by every height-bound module.
 *
 * A finite place is described only by its local invariants (p, e, f); no
 * field arithmetic is ever performed. All heights and bounds are reals in
 * nats.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace heightbounds {

// -----------------------------------------------------------------------------
// Errors
// -----------------------------------------------------------------------------

/// Argument outside the mathematical domain of an operation (d < 2, eps >= 1, ...).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// A caller broke an operation's contract (e.g. a reducible polynomial where an
/// irreducible one is required).
struct contract_violation : std::logic_error {
    using std::logic_error::logic_error;
};

/// Quadrature or iteration budget exhausted before the tolerance was met.
struct tolerance_not_met : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A threshold search ran past its grid cap.
struct search_exhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -----------------------------------------------------------------------------
// Integer helpers
// -----------------------------------------------------------------------------

namespace detail {

inline std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1U) result = mul_mod_u64(result, base, m);
        base = mul_mod_u64(base, base, m);
        exp >>= 1U;
    }
    return result;
}

/// Saturating power in 128 bits: returns `cap` when base^exp exceeds it.
inline unsigned __int128 sat_pow(std::uint64_t base, std::uint64_t exp,
                                 unsigned __int128 cap = (static_cast<unsigned __int128>(1) << 126)) {
    unsigned __int128 result = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && result > cap / base) return cap;
        result *= base;
    }
    return result;
}

}  // namespace detail

/// Deterministic Miller-Rabin for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % small == 0) return n == small;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++r;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = detail::pow_mod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = detail::mul_mod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// -----------------------------------------------------------------------------
// Local data at a finite place
// -----------------------------------------------------------------------------

/// Invariants (p, e, f) of a finite normal extension L_p/Q_p; q = p^f is the
/// residue field order.
class LocalFieldData {
public:
    static LocalFieldData make(std::int64_t p, std::int64_t e, std::int64_t f) {
        if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)))
            throw std::invalid_argument("LocalFieldData: p = " + std::to_string(p) + " is not prime");
        if (e < 1) throw std::invalid_argument("LocalFieldData: ramification degree e must be >= 1");
        if (f < 1) throw std::invalid_argument("LocalFieldData: inertial degree f must be >= 1");
        constexpr unsigned __int128 cap = static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max());
        const unsigned __int128 q = detail::sat_pow(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(f), cap);
        if (q >= cap) throw std::invalid_argument("LocalFieldData: q = p^f does not fit in 63 bits");
        return LocalFieldData(p, e, f, static_cast<std::int64_t>(q));
    }

    std::int64_t p() const noexcept { return p_; }
    std::int64_t e() const noexcept { return e_; }
    std::int64_t f() const noexcept { return f_; }
    std::int64_t q() const noexcept { return q_; }

    /// -log|pi| for a uniformizer pi, i.e. (log p)/e.
    double log_uniformizer_inv() const noexcept {
        return std::log(static_cast<double>(p_)) / static_cast<double>(e_);
    }

    friend bool operator==(const LocalFieldData&, const LocalFieldData&) = default;

private:
    LocalFieldData(std::int64_t p, std::int64_t e, std::int64_t f, std::int64_t q) : p_(p), e_(e), f_(f), q_(q) {}

    std::int64_t p_;
    std::int64_t e_;
    std::int64_t f_;
    std::int64_t q_;
};

/// The set S: an optional real place plus finite places with distinct primes.
class SplittingSpec {
public:
    SplittingSpec() = default;

    SplittingSpec(bool has_real_place, std::vector<LocalFieldData> finite_places)
        : has_real_place_(has_real_place), finite_places_(std::move(finite_places)) {
        for (std::size_t i = 0; i < finite_places_.size(); ++i) {
            for (std::size_t j = i + 1; j < finite_places_.size(); ++j) {
                if (finite_places_[i].p() == finite_places_[j].p())
                    throw std::invalid_argument("SplittingSpec: duplicate prime " +
                                                std::to_string(finite_places_[i].p()));
            }
        }
    }

    bool has_real_place() const noexcept { return has_real_place_; }
    const std::vector<LocalFieldData>& finite_places() const noexcept { return finite_places_; }
    bool empty() const noexcept { return !has_real_place_ && finite_places_.empty(); }

private:
    bool has_real_place_ = false;
    std::vector<LocalFieldData> finite_places_;
};

enum class AlgebraicClass { general, integer, unit };

inline const char* to_string(AlgebraicClass c) {
    switch (c) {
        case AlgebraicClass::general: return "general";
        case AlgebraicClass::integer: return "integer";
        case AlgebraicClass::unit: return "unit";
    }
    return "?";
}

struct PlaceContribution {
    LocalFieldData field;
    std::int64_t n_p = 0;
    double weight = 1.0;        // N_v; 1 over the rationals
    double contribution = 0.0;  // already multiplied by weight
    bool included = false;
};

/// Breakdown of a degree-dependent lower bound on h(alpha).
struct BoundReport {
    std::int64_t degree = 0;
    AlgebraicClass algebraic_class = AlgebraicClass::general;
    double mahler_term = 0.0;
    double arch_term = 0.0;
    std::vector<PlaceContribution> per_place;
    double total = 0.0;

    /// Recomputes the total from its parts.
    double sum_of_parts() const {
        double s = 0.0;
        for (const auto& pc : per_place)
            if (pc.included) s += pc.contribution;
        return mahler_term + arch_term + 0.5 * s;
    }
};

// -----------------------------------------------------------------------------
// n_p and the inclusion test, by exact integer comparison
// -----------------------------------------------------------------------------

/// Largest k >= 0 with p^k <= d^e.
inline std::int64_t n_p(const LocalFieldData& field, std::int64_t d) {
    if (d < 2) throw domain_error("n_p: degree must be >= 2");
    const auto p = static_cast<std::uint64_t>(field.p());
    const auto e = static_cast<std::uint64_t>(field.e());
    constexpr unsigned __int128 cap = static_cast<unsigned __int128>(1) << 126;
    const unsigned __int128 de = detail::sat_pow(static_cast<std::uint64_t>(d), e, cap);
    if (de >= cap) throw domain_error("n_p: d^e exceeds 126 bits");
    std::int64_t k = 0;
    unsigned __int128 pk = 1;
    while (pk <= de / p) {  // pk * p <= de
        pk *= p;
        ++k;
    }
    return k;
}

/// p^{1/e} < d, tested as p < d^e.
inline bool place_included(const LocalFieldData& field, std::int64_t d) {
    if (d < 2) throw domain_error("place_included: degree must be >= 2");
    constexpr unsigned __int128 cap = static_cast<unsigned __int128>(1) << 126;
    const unsigned __int128 de =
        detail::sat_pow(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(field.e()), cap);
    return static_cast<unsigned __int128>(field.p()) < de;
}

}  // namespace heightbounds
