#include <doctest.h>

#include "heightbounds/nonarch_robin.hpp"

using namespace heightbounds;

namespace {
const double kLog2 = std::log(2.0);
const double kLog3 = std::log(3.0);
LocalFieldData F(std::int64_t p, std::int64_t e, std::int64_t f) { return LocalFieldData::make(p, e, f); }
}  // namespace

TEST_CASE("ring of integers") {
    CHECK(robin_O(F(2, 1, 1)) == doctest::Approx(kLog2).epsilon(1e-15));
    CHECK(robin_O(F(3, 1, 1)) == doctest::Approx(kLog3 / 2).epsilon(1e-15));
    CHECK(robin_O(F(2, 2, 1)) == doctest::Approx(kLog2 / 2).epsilon(1e-15));
}

TEST_CASE("unit group") {
    CHECK(robin_O_units(F(2, 1, 1)) == doctest::Approx(2 * kLog2).epsilon(1e-15));
    CHECK(robin_O_units(F(3, 1, 1)) == doctest::Approx(0.75 * kLog3).epsilon(1e-15));
    CHECK(robin_O_units(F(2, 1, 2)) == doctest::Approx(4.0 / 9.0 * kLog2).epsilon(1e-15));
}

TEST_CASE("projective line") {
    CHECK(robin_P1(F(2, 1, 1)) == doctest::Approx(2.0 / 3.0 * kLog2).epsilon(1e-15));
    CHECK(robin_P1(F(3, 1, 1)) == doctest::Approx(3.0 / 8.0 * kLog3).epsilon(1e-15));
    double prev = robin_P1(F(2, 1, 1));
    for (std::int64_t f = 2; f <= 40; ++f) {
        const double v = robin_P1(F(2, 1, f));
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-11);
}

TEST_CASE("neighborhood bounds") {
    for (std::int64_t n : {1, 2, 5, 60}) {
        CHECK(robin_O_eps(F(2, 1, 1), n) == robin_O(F(2, 1, 1)));
        CHECK(robin_O_units_eps(F(2, 1, 1), n) == robin_O_units(F(2, 1, 1)));
    }
    CHECK(robin_O_eps(F(3, 1, 1), 2) == doctest::Approx((1.0 - 1.0 / 9.0) * kLog3 / 2).epsilon(1e-15));
    CHECK(robin_O_units_eps(F(3, 1, 1), 1) == doctest::Approx(kLog3 / 2).epsilon(1e-15));
    CHECK(robin_P1_eps(F(2, 1, 1), 1) == doctest::Approx(kLog2 / 3).epsilon(1e-15));
    CHECK(robin_P1_eps(F(3, 1, 1), 2) == doctest::Approx(kLog3 / 3).epsilon(1e-15));
    CHECK(robin_O_eps(F(3, 1, 1), 200) == doctest::Approx(robin_O(F(3, 1, 1))).epsilon(1e-15));
    CHECK(robin_O_units_eps(F(3, 1, 1), 200) == doctest::Approx(robin_O_units(F(3, 1, 1))).epsilon(1e-15));
    CHECK(robin_P1_eps(F(3, 1, 1), 200) == doctest::Approx(robin_P1(F(3, 1, 1))).epsilon(1e-15));
    CHECK_THROWS_AS(robin_O_eps(F(3, 1, 1), 0), domain_error);
    CHECK_THROWS_AS(robin_O_units_eps(F(3, 1, 1), -1), domain_error);
    CHECK_THROWS_AS(robin_P1_eps(F(3, 1, 1), 0), domain_error);
}

TEST_CASE("ordering, monotonicity and scaling") {
    const std::int64_t primes[] = {2, 3, 5, 7, 11, 13, 101, 7919};
    for (std::int64_t p : primes) {
        for (std::int64_t e = 1; e <= 5; ++e) {
            for (std::int64_t f = 1; f <= 3; ++f) {
                const auto L = F(p, e, f);
                const auto L1 = F(p, 1, f);
                double prev_p1 = 0, prev_o = 0, prev_u = 0;
                for (std::int64_t n = 1; n <= 30; ++n) {
                    const double p1 = robin_P1_eps(L, n), o = robin_O_eps(L, n), u = robin_O_units_eps(L, n);
                    CHECK(p1 > 0.0);
                    CHECK(o > 0.0);
                    CHECK(p1 <= robin_P1(L));
                    CHECK(o <= robin_O(L));
                    CHECK(u <= robin_O_units(L));
                    CHECK(p1 >= prev_p1);
                    CHECK(o >= prev_o);
                    CHECK(u >= prev_u);
                    prev_p1 = p1;
                    prev_o = o;
                    prev_u = u;
                }
                CHECK(robin_P1(L) <= robin_O(L));
                CHECK(robin_O(L) <= robin_O_units(L));
                const double ratio = static_cast<double>(e);
                CHECK(robin_O(L) * ratio == doctest::Approx(robin_O(L1)).epsilon(1e-14));
                CHECK(robin_O_units(L) * ratio == doctest::Approx(robin_O_units(L1)).epsilon(1e-14));
                CHECK(robin_P1(L) * ratio == doctest::Approx(robin_P1(L1)).epsilon(1e-14));
                CHECK(robin_O_eps(L, 3) * ratio == doctest::Approx(robin_O_eps(L1, 3)).epsilon(1e-14));
                CHECK(robin_O_units_eps(L, 3) * ratio == doctest::Approx(robin_O_units_eps(L1, 3)).epsilon(1e-14));
                CHECK(robin_P1_eps(L, 3) * ratio == doctest::Approx(robin_P1_eps(L1, 3)).epsilon(1e-14));
            }
        }
    }
}
