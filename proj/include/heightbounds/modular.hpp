#pragma once

// Dense polynomials over the prime field F_p and distinct-degree factorization.
// Coefficients are stored low degree first; the zero polynomial is empty.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "core.hpp"

namespace heightbounds::modp {

using Poly = std::vector<std::uint64_t>;

class Field {
public:
    explicit Field(std::uint64_t p) : p_(p) {}

    std::uint64_t prime() const noexcept { return p_; }

    std::uint64_t reduce(std::int64_t a) const noexcept {
        const std::int64_t m = static_cast<std::int64_t>(p_);
        std::int64_t r = a % m;
        return static_cast<std::uint64_t>(r < 0 ? r + m : r);
    }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept {
        std::uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
        return p_ < (1ULL << 32) ? (a * b) % p_ : detail::mul_mod_u64(a, b, p_);
    }
    std::uint64_t inv(std::uint64_t a) const { return detail::pow_mod_u64(a, p_ - 2, p_); }

    // --- polynomial arithmetic -------------------------------------------------

    static void trim(Poly& a) {
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    static int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

    Poly from_integers(std::span<const std::int64_t> coeffs) const {
        Poly r(coeffs.size());
        for (std::size_t i = 0; i < coeffs.size(); ++i) r[i] = reduce(coeffs[i]);
        trim(r);
        return r;
    }

    Poly derivative(const Poly& a) const {
        if (a.size() <= 1) return {};
        Poly r(a.size() - 1);
        for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = mul(a[i], static_cast<std::uint64_t>(i) % p_);
        trim(r);
        return r;
    }

    Poly make_monic(Poly a) const {
        if (a.empty()) return a;
        const std::uint64_t li = inv(a.back());
        for (auto& c : a) c = mul(c, li);
        return a;
    }

    Poly sub(const Poly& a, const Poly& b) const {
        Poly r(std::max(a.size(), b.size()), 0);
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
        for (std::size_t i = 0; i < b.size(); ++i) r[i] = sub(r[i], b[i]);
        trim(r);
        return r;
    }

    Poly mul(const Poly& a, const Poly& b) const {
        if (a.empty() || b.empty()) return {};
        Poly r(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = add(r[i + j], mul(a[i], b[j]));
        }
        trim(r);
        return r;
    }

    /// Quotient and remainder of a by b (b != 0).
    std::pair<Poly, Poly> divmod(Poly a, const Poly& b) const {
        const int db = degree(b);
        if (degree(a) < db) return {Poly{}, a};
        const std::uint64_t li = inv(b.back());
        Poly q(a.size() - b.size() + 1, 0);
        for (int k = degree(a); k >= db; --k) {
            const std::uint64_t c = mul(a[static_cast<std::size_t>(k)], li);
            q[static_cast<std::size_t>(k - db)] = c;
            if (c == 0) continue;
            for (int j = 0; j <= db; ++j) {
                auto& slot = a[static_cast<std::size_t>(k - db + j)];
                slot = sub(slot, mul(c, b[static_cast<std::size_t>(j)]));
            }
        }
        a.resize(static_cast<std::size_t>(db));
        trim(a);
        trim(q);
        return {q, a};
    }

    Poly rem(const Poly& a, const Poly& b) const { return divmod(a, b).second; }

    Poly gcd(Poly a, Poly b) const {
        while (!b.empty()) {
            Poly r = rem(a, b);
            a = std::move(b);
            b = std::move(r);
        }
        return make_monic(std::move(a));
    }

    Poly mulmod(const Poly& a, const Poly& b, const Poly& m) const { return rem(mul(a, b), m); }

    Poly powmod(Poly base, std::uint64_t exp, const Poly& m) const {
        Poly result{1};
        base = rem(base, m);
        while (exp > 0) {
            if (exp & 1U) result = mulmod(result, base, m);
            exp >>= 1U;
            if (exp > 0) base = mulmod(base, base, m);
        }
        return result;
    }

private:
    std::uint64_t p_;
};

/// Degrees of the irreducible factors of a squarefree monic polynomial over F_p
/// (distinct-degree factorization, with equal-degree counts from the degree of
/// each distinct-degree block).
inline std::vector<int> distinct_degree_pattern(const Field& F, Poly f) {
    std::vector<int> degrees;
    Poly h{0, 1};  // x
    const Poly x{0, 1};
    for (int i = 1; 2 * i <= Field::degree(f); ++i) {
        h = F.powmod(h, F.prime(), f);
        Poly g = F.gcd(F.sub(h, x), f);
        const int dg = Field::degree(g);
        if (dg > 0) {
            for (int k = 0; k < dg / i; ++k) degrees.push_back(i);
            f = F.divmod(f, g).first;
            h = F.rem(h, f);
        }
    }
    if (Field::degree(f) > 0) degrees.push_back(Field::degree(f));
    return degrees;
}

namespace detail {

/// Allocation-free arithmetic in F_p[x] for p < 2^28 and degree < 32, with
/// products accumulated in 64 bits and reduced once per coefficient.
class SmallRing {
public:
    static constexpr int kCap = 64;
    struct Poly {
        int deg = -1;  // -1 for zero
        std::uint64_t c[kCap];
    };

    explicit SmallRing(std::uint64_t p) : p_(p) {}

    std::uint64_t inv(std::uint64_t a) const { return heightbounds::detail::pow_mod_u64(a, p_ - 2, p_); }

    void trim(Poly& a) const {
        while (a.deg >= 0 && a.c[a.deg] == 0) --a.deg;
    }

    void make_monic(Poly& a) const {
        if (a.deg < 0 || a.c[a.deg] == 1) return;
        const std::uint64_t li = inv(a.c[a.deg]);
        for (int i = 0; i <= a.deg; ++i) a.c[i] = a.c[i] * li % p_;
    }

    /// a mod m in place, m monic.
    void reduce_by_monic(Poly& a, const Poly& m) const {
        const int dm = m.deg;
        for (int k = a.deg; k >= dm; --k) {
            const std::uint64_t coef = a.c[k] % p_;
            a.c[k] = 0;
            if (coef == 0) continue;
            const std::uint64_t neg = p_ - coef;
            for (int j = 0; j < dm; ++j) a.c[k - dm + j] = (a.c[k - dm + j] + neg * m.c[j]) % p_;
        }
        a.deg = std::min(a.deg, dm - 1);
        for (int i = 0; i <= a.deg; ++i) a.c[i] %= p_;
        trim(a);
    }

    /// a * b mod m, m monic, a and b reduced.
    void mulmod(const Poly& a, const Poly& b, const Poly& m, Poly& out) const {
        if (a.deg < 0 || b.deg < 0) {
            out.deg = -1;
            return;
        }
        out.deg = a.deg + b.deg;
        for (int i = 0; i <= out.deg; ++i) out.c[i] = 0;
        for (int i = 0; i <= a.deg; ++i) {
            if (a.c[i] == 0) continue;
            for (int j = 0; j <= b.deg; ++j) out.c[i + j] += a.c[i] * b.c[j];
            if ((i & 7) == 7)
                for (int k = 0; k <= out.deg; ++k) out.c[k] %= p_;
        }
        for (int k = 0; k <= out.deg; ++k) out.c[k] %= p_;
        reduce_by_monic(out, m);
    }

    /// base^e mod m.
    void powmod(Poly base, std::uint64_t e, const Poly& m, Poly& out) const {
        Poly tmp;
        out.deg = 0;
        out.c[0] = 1;
        while (e > 0) {
            if (e & 1U) {
                mulmod(out, base, m, tmp);
                out = tmp;
            }
            e >>= 1U;
            if (e > 0) {
                mulmod(base, base, m, tmp);
                base = tmp;
            }
        }
    }

    /// Monic gcd.
    Poly gcd(Poly a, Poly b) const {
        while (b.deg >= 0) {
            make_monic(b);
            reduce_by_monic(a, b);
            std::swap(a, b);
        }
        make_monic(a);
        return a;
    }

    /// Exact quotient a / m for monic m dividing a.
    Poly divide_exact(Poly a, const Poly& m) const {
        Poly q;
        q.deg = a.deg - m.deg;
        for (int k = a.deg; k >= m.deg; --k) {
            const std::uint64_t coef = a.c[k] % p_;
            q.c[k - m.deg] = coef;
            if (coef == 0) continue;
            const std::uint64_t neg = p_ - coef;
            for (int j = 0; j <= m.deg; ++j) a.c[k - m.deg + j] = (a.c[k - m.deg + j] + neg * m.c[j]) % p_;
        }
        trim(q);
        return q;
    }

    /// Degree preserved and squarefree modulo p.
    bool is_good(std::span<const std::int64_t> coeffs) const {
        Poly f;
        Poly df;
        return load_with_derivative(coeffs, f, df);
    }

    std::optional<std::vector<int>> factor_pattern(std::span<const std::int64_t> coeffs) const {
        Poly f;
        Poly df;
        if (!load_with_derivative(coeffs, f, df)) return std::nullopt;
        if (f.deg == 0) return std::vector<int>{};
        make_monic(f);
        return distinct_degrees(f);
    }

private:
    /// Reduces coeffs into f and f' and reports whether p is a good prime.
    bool load_with_derivative(std::span<const std::int64_t> coeffs, Poly& f, Poly& df) const {
        f.deg = static_cast<int>(coeffs.size()) - 1;
        const auto m = static_cast<std::int64_t>(p_);
        for (int i = 0; i <= f.deg; ++i) {
            const std::int64_t r = coeffs[static_cast<std::size_t>(i)] % m;
            f.c[i] = static_cast<std::uint64_t>(r < 0 ? r + m : r);
        }
        if (f.c[f.deg] == 0) return false;
        if (f.deg == 0) return true;
        df.deg = f.deg - 1;
        for (int i = 1; i <= f.deg; ++i) df.c[i - 1] = f.c[i] * (static_cast<std::uint64_t>(i) % p_) % p_;
        trim(df);
        return df.deg >= 0 && gcd(f, df).deg == 0;
    }

    std::vector<int> distinct_degrees(Poly f) const {
        std::vector<int> degrees;
        Poly h;
        h.deg = 1;
        h.c[0] = 0;
        h.c[1] = 1;
        if (f.deg == 1) return {1};
        for (int i = 1; 2 * i <= f.deg; ++i) {
            Poly next;
            powmod(h, p_, f, next);
            h = next;
            Poly hx = h;  // h - x
            if (hx.deg < 1) {
                for (int k = hx.deg + 1; k <= 1; ++k) hx.c[k] = 0;
                hx.deg = 1;
            }
            hx.c[1] = (hx.c[1] + p_ - 1) % p_;
            trim(hx);
            const Poly g = gcd(f, hx);
            if (g.deg > 0) {
                for (int k = 0; k < g.deg / i; ++k) degrees.push_back(i);
                f = divide_exact(f, g);
                reduce_by_monic(h, f);
            }
        }
        if (f.deg > 0) degrees.push_back(f.deg);
        return degrees;
    }

    std::uint64_t p_;
};

}  // namespace detail

/// Factor-degree pattern of an integer polynomial modulo p, or nullopt when p
/// is a bad prime (p divides the leading coefficient or the discriminant).
inline std::optional<std::vector<int>> factor_pattern_mod(std::span<const std::int64_t> coeffs, std::uint64_t p) {
    if (p < (1ULL << 28) && coeffs.size() <= 32) return detail::SmallRing(p).factor_pattern(coeffs);
    const Field F(p);
    Poly f = F.from_integers(coeffs);
    if (Field::degree(f) != static_cast<int>(coeffs.size()) - 1) return std::nullopt;
    if (Field::degree(f) == 0) return std::vector<int>{};
    const Poly g = F.gcd(f, F.derivative(f));
    if (Field::degree(g) != 0) return std::nullopt;
    return distinct_degree_pattern(F, F.make_monic(std::move(f)));
}

/// Whether p is a good prime: degree preserved and squarefree modulo p.
inline bool is_good_prime(std::span<const std::int64_t> coeffs, std::uint64_t p) {
    if (p < (1ULL << 28) && coeffs.size() <= 32) return detail::SmallRing(p).is_good(coeffs);
    const Field F(p);
    Poly f = F.from_integers(coeffs);
    if (Field::degree(f) != static_cast<int>(coeffs.size()) - 1) return false;
    if (Field::degree(f) == 0) return true;
    return Field::degree(F.gcd(f, F.derivative(f))) == 0;
}

}  // namespace heightbounds::modp
