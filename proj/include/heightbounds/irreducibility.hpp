#pragma once

// Irreducibility certification over Q for small integer polynomials: a
// rational-root test plus intersection of the possible factor degrees seen
// modulo the first few good primes. Inputs the test cannot settle come back
// as `ambiguous` and are never guessed.

#include <cstdint>
#include <numeric>
#include <vector>

#include "integer_poly.hpp"
#include "modular.hpp"

namespace heightbounds {

enum class Irreducibility { irreducible, reducible, ambiguous };

inline const char* to_string(Irreducibility v) {
    switch (v) {
        case Irreducibility::irreducible: return "irreducible";
        case Irreducibility::reducible: return "reducible";
        case Irreducibility::ambiguous: return "ambiguous";
    }
    return "?";
}

namespace detail {

/// Bitmask of achievable subset sums of a factor-degree pattern (bit k set iff
/// some product of the factors has degree k).
inline std::uint64_t subset_sum_mask(const std::vector<int>& degrees) {
    std::uint64_t mask = 1;
    for (int d : degrees) mask |= mask << d;
    return mask;
}

inline std::vector<std::int64_t> positive_divisors(std::int64_t n) {
    if (n < 0) n = -n;
    std::vector<std::int64_t> out;
    for (std::int64_t k = 1; k * k <= n; ++k) {
        if (n % k != 0) continue;
        out.push_back(k);
        if (k != n / k) out.push_back(n / k);
    }
    return out;
}

}  // namespace detail

/// Whether f has a root in Q (exhaustive r/s with r | a_0, s | a_d).
inline bool has_rational_root(const IntPolynomial& f) {
    if (f.constant() == 0) return true;
    const auto lead_divs = detail::positive_divisors(f.leading());
    const auto const_divs = detail::positive_divisors(f.constant());
    for (std::int64_t s : lead_divs) {
        for (std::int64_t r0 : const_divs) {
            if (std::gcd(r0, s) != 1) continue;
            for (std::int64_t r : {r0, -r0}) {
                const BigInt v = exact::with_fallback([&](auto zero) {
                    using Int = decltype(zero);
                    return exact::eval_scaled(exact::lift<Int>(f.coefficients()), Int(static_cast<long long>(r)),
                                              Int(static_cast<long long>(s)));
                });
                if (v == 0) return true;
            }
        }
    }
    return false;
}

struct IrreducibilityCertificate {
    Irreducibility verdict = Irreducibility::ambiguous;
    int good_primes_used = 0;
    std::uint64_t residual_degrees = 0;  // surviving proper factor degrees (bitmask)
};

/// Certifies irreducibility over Q of a squarefree polynomial with content 1.
/// `good_primes` bounds how many primes p (p not dividing a_d * disc) are tried.
inline IrreducibilityCertificate certify_irreducible(const IntPolynomial& f, int good_primes = 5) {
    IrreducibilityCertificate cert;
    const int d = f.degree();
    if (d == 1) {
        cert.verdict = Irreducibility::irreducible;
        return cert;
    }
    if (f.constant() == 0) {
        cert.verdict = Irreducibility::reducible;
        return cert;
    }
    if (!f.is_squarefree()) {
        cert.verdict = Irreducibility::reducible;
        return cert;
    }
    const std::uint64_t proper = ((std::uint64_t{1} << d) - 1) & ~std::uint64_t{1};  // bits 1..d-1
    std::uint64_t possible = proper;
    for (std::uint64_t p : detail::kSmallPrimes) {
        if (cert.good_primes_used >= good_primes) break;
        const auto pattern = modp::factor_pattern_mod(f.coefficients(), p);
        if (!pattern) continue;
        ++cert.good_primes_used;
        possible &= detail::subset_sum_mask(*pattern);
        if ((possible & proper) == 0) {
            cert.verdict = Irreducibility::irreducible;
            cert.residual_degrees = 0;
            return cert;
        }
    }
    cert.residual_degrees = possible & proper;
    const bool rational_root = has_rational_root(f);
    if (rational_root) {
        cert.verdict = Irreducibility::reducible;
        return cert;
    }
    // A degree-1 (or co-degree-1) factor would be a rational root.
    const std::uint64_t linear_only = (std::uint64_t{1} << 1) | (std::uint64_t{1} << (d - 1));
    if ((cert.residual_degrees & ~linear_only) == 0) {
        cert.verdict = Irreducibility::irreducible;
        return cert;
    }
    cert.verdict = Irreducibility::ambiguous;
    return cert;
}

}  // namespace heightbounds
