#pragma once

/**
 * @file integer_poly.hpp
 * @brief Exact integer polynomials: content, discriminant, Sturm counts.
 *
 * The exact algorithms are templates over the working integer type. They run
 * first on `checked_i128`, which throws on overflow, and are rerun on
 * `BigInt` when that happens, so small inputs never touch the heap.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"
#include "modular.hpp"

namespace heightbounds {

using BigInt = boost::multiprecision::cpp_int;

struct overflow_detected : std::overflow_error {
    overflow_detected() : std::overflow_error("checked_i128 overflow") {}
};

/// 128-bit signed integer whose arithmetic throws `overflow_detected` instead of wrapping.
class checked_i128 {
public:
    constexpr checked_i128() = default;
    constexpr checked_i128(long long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
    static constexpr checked_i128 from_raw(__int128 v) {
        checked_i128 r;
        r.v_ = v;
        return r;
    }

    __int128 raw() const noexcept { return v_; }

    friend checked_i128 operator+(checked_i128 a, checked_i128 b) {
        __int128 r;
        if (__builtin_add_overflow(a.v_, b.v_, &r)) throw overflow_detected{};
        return from_raw(r);
    }
    friend checked_i128 operator-(checked_i128 a, checked_i128 b) {
        __int128 r;
        if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw overflow_detected{};
        return from_raw(r);
    }
    friend checked_i128 operator*(checked_i128 a, checked_i128 b) {
        __int128 r;
        if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw overflow_detected{};
        return from_raw(r);
    }
    friend checked_i128 operator/(checked_i128 a, checked_i128 b) { return from_raw(a.v_ / b.v_); }
    friend checked_i128 operator%(checked_i128 a, checked_i128 b) { return from_raw(a.v_ % b.v_); }
    checked_i128 operator-() const {
        if (v_ == std::numeric_limits<__int128>::min()) throw overflow_detected{};
        return from_raw(-v_);
    }
    checked_i128& operator+=(checked_i128 o) { return *this = *this + o; }
    checked_i128& operator-=(checked_i128 o) { return *this = *this - o; }
    checked_i128& operator*=(checked_i128 o) { return *this = *this * o; }

    friend bool operator==(checked_i128 a, checked_i128 b) { return a.v_ == b.v_; }
    friend auto operator<=>(checked_i128 a, checked_i128 b) { return a.v_ <=> b.v_; }

private:
    __int128 v_ = 0;
};

inline BigInt to_bigint(checked_i128 x) {
    const __int128 v = x.raw();
    const bool neg = v < 0;
    unsigned __int128 m = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    BigInt r = static_cast<std::uint64_t>(m >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(m);
    return neg ? BigInt(-r) : r;
}
inline BigInt to_bigint(const BigInt& x) { return x; }

// -----------------------------------------------------------------------------
// Generic dense integer polynomials (low degree first, no trailing zeros)
// -----------------------------------------------------------------------------

namespace exact {

template <class Int>
using Poly = std::vector<Int>;

template <class Int>
Int abs_value(const Int& a) {
    return a < Int(0) ? Int(-a) : a;
}

template <class Int>
int sign_of(const Int& a) {
    return a < Int(0) ? -1 : (a == Int(0) ? 0 : 1);
}

template <class Int>
Int gcd_value(Int a, Int b) {
    a = abs_value(a);
    b = abs_value(b);
    while (!(b == Int(0))) {
        Int r = a % b;
        a = b;
        b = r;
    }
    return a;
}

template <class Int>
Int power(Int base, unsigned exp) {
    Int r(1);
    while (exp > 0) {
        if (exp & 1U) r = r * base;
        exp >>= 1U;
        if (exp > 0) base = base * base;
    }
    return r;
}

template <class Int>
void trim(Poly<Int>& a) {
    while (!a.empty() && a.back() == Int(0)) a.pop_back();
}

template <class Int>
int degree(const Poly<Int>& a) {
    return static_cast<int>(a.size()) - 1;
}

template <class Int>
Poly<Int> lift(std::span<const std::int64_t> coeffs) {
    Poly<Int> r;
    r.reserve(coeffs.size());
    for (auto c : coeffs) r.emplace_back(static_cast<long long>(c));
    trim(r);
    return r;
}

template <class Int>
Poly<Int> derivative(const Poly<Int>& a) {
    Poly<Int> r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * Int(static_cast<long long>(i)));
    trim(r);
    return r;
}

template <class Int>
Int content(const Poly<Int>& a) {
    Int g(0);
    for (const auto& c : a) g = gcd_value(g, c);
    return g;
}

/// Divides by the positive content.
template <class Int>
Poly<Int> primitive_part(Poly<Int> a) {
    const Int g = content(a);
    if (g == Int(0) || g == Int(1)) return a;
    for (auto& c : a) c = c / g;
    return a;
}

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q * b + r.
template <class Int>
Poly<Int> prem(Poly<Int> a, const Poly<Int>& b) {
    const int db = degree(b);
    int da = degree(a);
    if (da < db) return a;
    const Int lb = b.back();
    int e = da - db + 1;
    while (da >= db && !a.empty()) {
        const Int la = a.back();
        // a <- lb * a - la * x^(da-db) * b
        for (auto& c : a) c = c * lb;
        for (int j = 0; j <= db; ++j) {
            auto& slot = a[static_cast<std::size_t>(da - db + j)];
            slot = slot - la * b[static_cast<std::size_t>(j)];
        }
        trim(a);
        --e;
        da = degree(a);
    }
    if (e > 0) {
        const Int scale = power(lb, static_cast<unsigned>(e));
        for (auto& c : a) c = c * scale;
    }
    return a;
}

/// Resultant by the subresultant PRS (Cohen, Alg. 3.3.7 layout).
template <class Int>
Int resultant(Poly<Int> a, Poly<Int> b) {
    if (a.empty() || b.empty()) return Int(0);
    Int s(1);
    if (degree(a) < degree(b)) {
        std::swap(a, b);
        if (degree(a) % 2 == 1 && degree(b) % 2 == 1) s = -s;
    }
    if (degree(b) == 0) return power(b[0], static_cast<unsigned>(degree(a)));
    const Int ca = content(a);
    const Int cb = content(b);
    for (auto& c : a) c = c / ca;
    for (auto& c : b) c = c / cb;
    const Int t = power(ca, static_cast<unsigned>(degree(b))) * power(cb, static_cast<unsigned>(degree(a)));
    Int g(1);
    Int h(1);
    for (;;) {
        const int delta = degree(a) - degree(b);
        if (degree(a) % 2 == 1 && degree(b) % 2 == 1) s = -s;
        Poly<Int> r = prem(a, b);
        a = std::move(b);
        if (r.empty()) return Int(0);
        const Int div = g * power(h, static_cast<unsigned>(delta));
        for (auto& c : r) c = c / div;
        b = std::move(r);
        g = a.back();
        if (delta == 0) {
            // h unchanged
        } else {
            h = power(g, static_cast<unsigned>(delta)) / power(h, static_cast<unsigned>(delta - 1));
        }
        if (degree(b) == 0) {
            const int da = degree(a);
            h = power(b[0], static_cast<unsigned>(da)) / power(h, static_cast<unsigned>(da - 1));
            return s * t * h;
        }
    }
}

/// disc(f) = (-1)^(d(d-1)/2) Res(f, f') / a_d.
template <class Int>
Int discriminant(const Poly<Int>& f) {
    const int d = degree(f);
    if (d < 1) return Int(0);
    if (d == 1) return Int(1);
    Int r = resultant(f, derivative(f)) / f.back();
    if ((static_cast<long long>(d) * (d - 1) / 2) % 2 == 1) r = -r;
    return r;
}

/// Number of distinct real roots by a Sturm sequence of primitive pseudo-remainders.
template <class Int>
int sturm_real_root_count(const Poly<Int>& f) {
    if (degree(f) < 1) return 0;
    std::vector<Poly<Int>> seq;
    seq.push_back(primitive_part(f));
    seq.push_back(primitive_part(derivative(f)));
    while (degree(seq.back()) > 0) {
        const auto& a = seq[seq.size() - 2];
        const auto& b = seq.back();
        Poly<Int> r = prem(a, b);
        if (r.empty()) break;
        const int delta = degree(a) - degree(b);
        // prem scales by lc(b)^(delta+1); Sturm needs -rem up to a positive factor.
        const bool scale_negative = sign_of(b.back()) < 0 && (delta + 1) % 2 == 1;
        if (!scale_negative)
            for (auto& c : r) c = -c;
        seq.push_back(primitive_part(std::move(r)));
    }
    auto changes = [&](bool at_plus_infinity) {
        int count = 0;
        int prev = 0;
        for (const auto& s : seq) {
            int sg = sign_of(s.back());
            if (!at_plus_infinity && degree(s) % 2 == 1) sg = -sg;
            if (sg == 0) continue;
            if (prev != 0 && sg != prev) ++count;
            prev = sg;
        }
        return count;
    };
    return changes(false) - changes(true);
}

/// Value of f at r/s scaled by s^deg f (exact numerator).
template <class Int>
Int eval_scaled(const Poly<Int>& f, const Int& r, const Int& s) {
    const int d = degree(f);
    Int spow(1);
    // Horner on homogenised form: sum a_k r^k s^(d-k)
    Int result(0);
    for (int k = d; k >= 0; --k) {
        result = result * r + f[static_cast<std::size_t>(k)] * spow;
        spow = spow * s;
    }
    return result;
}

/// Runs `fn` on checked 128-bit integers, falling back to BigInt on overflow.
template <class Fn>
auto with_fallback(Fn&& fn) {
    try {
        return to_bigint(fn(checked_i128{}));
    } catch (const overflow_detected&) {
        return to_bigint(fn(BigInt{}));
    }
}

}  // namespace exact

// -----------------------------------------------------------------------------
// IntPolynomial
// -----------------------------------------------------------------------------

namespace detail {

inline constexpr std::uint64_t kSmallPrimes[] = {
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,  59,  61,  67,  71,
    73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
    179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281};

}  // namespace detail

/// Exact integer polynomial a_0 + a_1 x + ... + a_d x^d with a_d != 0 and d >= 1.
class IntPolynomial {
public:
    /// Coefficients low degree first.
    explicit IntPolynomial(std::vector<std::int64_t> coeffs) : coeffs_(std::move(coeffs)) {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
        if (coeffs_.size() < 2) throw std::invalid_argument("IntPolynomial: degree must be >= 1");
        squarefree_ = compute_squarefree();
    }

    /// Coefficients leading first: {a_d, ..., a_0}.
    static IntPolynomial from_leading_first(std::vector<std::int64_t> coeffs) {
        std::reverse(coeffs.begin(), coeffs.end());
        return IntPolynomial(std::move(coeffs));
    }

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::int64_t coeff(int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
    std::int64_t leading() const noexcept { return coeffs_.back(); }
    std::int64_t constant() const noexcept { return coeffs_.front(); }
    std::span<const std::int64_t> coefficients() const noexcept { return coeffs_; }
    bool is_monic() const noexcept { return coeffs_.back() == 1; }
    bool is_squarefree() const noexcept { return squarefree_; }

    std::int64_t content() const {
        std::int64_t g = 0;
        for (auto c : coeffs_) g = std::gcd(g, c);
        return g;
    }

    BigInt discriminant() const {
        return exact::with_fallback([&](auto zero) {
            using Int = decltype(zero);
            return exact::discriminant(exact::lift<Int>(coeffs_));
        });
    }

    /// Human form, e.g. "x^2 - x - 1".
    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (int k = degree(); k >= 0; --k) {
            const std::int64_t c = coeffs_[static_cast<std::size_t>(k)];
            if (c == 0) continue;
            const std::int64_t mag = c < 0 ? -c : c;
            if (first) {
                if (c < 0) os << "-";
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            if (mag != 1 || k == 0) os << mag;
            if (k >= 1) os << "x";
            if (k >= 2) os << "^" << k;
            first = false;
        }
        return os.str();
    }

    /// Leading-first comma list, the CLI's input format.
    std::string to_coeff_list() const {
        std::ostringstream os;
        for (int k = degree(); k >= 0; --k) {
            os << coeffs_[static_cast<std::size_t>(k)];
            if (k > 0) os << ",";
        }
        return os.str();
    }

    friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.coeffs_ == b.coeffs_; }

private:
    bool compute_squarefree() const {
        if (degree() == 1) return true;
        for (std::uint64_t p : detail::kSmallPrimes)
            if (modp::is_good_prime(coeffs_, p)) return true;
        return discriminant() != 0;
    }

    std::vector<std::int64_t> coeffs_;
    bool squarefree_ = false;
};

/// Sturm count of distinct real roots, exact.
inline int real_root_count(const IntPolynomial& f) {
    const BigInt n = exact::with_fallback([&](auto zero) {
        using Int = decltype(zero);
        return Int(static_cast<long long>(exact::sturm_real_root_count(exact::lift<Int>(f.coefficients()))));
    });
    return static_cast<int>(n);
}

/// Exact product of integer polynomials (coefficients low first).
inline std::vector<std::int64_t> multiply(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
    std::vector<std::int64_t> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

/// Cyclotomic polynomial Phi_n by exact division of x^n - 1.
inline std::vector<std::int64_t> cyclotomic(int n) {
    if (n < 1) throw std::invalid_argument("cyclotomic: n >= 1");
    std::vector<std::int64_t> num(static_cast<std::size_t>(n) + 1, 0);
    num[0] = -1;
    num[static_cast<std::size_t>(n)] = 1;
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        const auto den = cyclotomic(d);  // monic
        // exact long division by a monic divisor
        std::vector<std::int64_t> q(num.size() - den.size() + 1, 0);
        for (int k = static_cast<int>(num.size()) - 1; k >= static_cast<int>(den.size()) - 1; --k) {
            const std::int64_t c = num[static_cast<std::size_t>(k)];
            q[static_cast<std::size_t>(k) - (den.size() - 1)] = c;
            for (std::size_t j = 0; j < den.size(); ++j)
                num[static_cast<std::size_t>(k) - (den.size() - 1) + j] -= c * den[j];
        }
        num = std::move(q);
    }
    return num;
}

/// Euler's totient.
inline int euler_phi(int n) {
    int result = n;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

/// True when f equals +-Phi_n for some n (f irreducible with content 1 is then
/// the minimal polynomial of a root of unity).
inline bool is_cyclotomic(const IntPolynomial& f) {
    if (f.leading() != 1 && f.leading() != -1) return false;
    std::vector<std::int64_t> c(f.coefficients().begin(), f.coefficients().end());
    if (f.leading() == -1)
        for (auto& x : c) x = -x;
    const int d = f.degree();
    // phi(n) >= sqrt(n/2), so n <= 2 d^2 covers every candidate.
    for (int n = 1; n <= 2 * d * d + 2; ++n) {
        if (euler_phi(n) != d) continue;
        if (cyclotomic(n) == c) return true;
    }
    return false;
}

}  // namespace heightbounds
