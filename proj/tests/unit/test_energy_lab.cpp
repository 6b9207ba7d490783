#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <numbers>
#include <random>

#include "heightbounds/energy_lab.hpp"
#include "support/oracle_values.hpp"

using namespace heightbounds;
namespace oracle = heightbounds::testing::oracle;

namespace {

IntPolynomial P(std::vector<std::int64_t> leading_first) { return IntPolynomial::from_leading_first(std::move(leading_first)); }

// Brute midpoint rule for -(1/2pi) int max{log|w - eps e^{it}|, log eps} dt; converges slowly but independently.
double circle_pair_midpoint(Complex z, Complex zp, double eps, int n = 2'000'000) {
    const Complex w = z - zp;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double t = 2.0 * std::numbers::pi * (k + 0.5) / n;
        sum += std::max(std::log(std::abs(w - std::polar(eps, t))), std::log(eps));
    }
    return -sum / n;
}

double circle_standard_midpoint(Complex z, double eps, int n = 200'000) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double t = 2.0 * std::numbers::pi * (k + 0.5) / n;
        sum += std::max(0.0, std::log(std::abs(z + std::polar(eps, t))));
    }
    return -sum / n;
}

// Degree of gcd(f, f') over Q by Euclid on exact rationals.
int gcd_degree_with_derivative(const std::vector<std::int64_t>& low_first) {
    using Q = boost::multiprecision::cpp_rational;
    using Poly = std::vector<Q>;
    auto trim = [](Poly& a) {
        while (!a.empty() && a.back() == 0) a.pop_back();
    };
    Poly a(low_first.begin(), low_first.end()), b;
    for (std::size_t i = 1; i < low_first.size(); ++i) b.push_back(Q(low_first[i]) * static_cast<int>(i));
    trim(a);
    trim(b);
    while (!b.empty()) {
        while (a.size() >= b.size() && !a.empty()) {
            const Q factor = a.back() / b.back();
            const std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= factor * b[i];
            trim(a);
        }
        std::swap(a, b);
    }
    return static_cast<int>(a.size()) - 1;
}

}  // namespace

TEST_CASE("complex roots") {
    const auto r2 = complex_roots(P({1, 0, -2}));
    REQUIRE(r2.size() == 2);
    CHECK(r2.max_radius() <= 1e-12);
    std::vector<double> re{r2.roots[0].real(), r2.roots[1].real()};
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
    CHECK(re[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(r2.certified_real_count() == 2);

    const auto phi = complex_roots(P({1, -1, -1}));
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    double hi = std::max(phi.roots[0].real(), phi.roots[1].real());
    double lo = std::min(phi.roots[0].real(), phi.roots[1].real());
    CHECK(hi == doctest::Approx(golden).epsilon(1e-14));
    CHECK(lo == doctest::Approx(1.0 - golden).epsilon(1e-14));

    const auto plastic = complex_roots(P({1, 0, -1, -1}));
    REQUIRE(plastic.size() == 3);
    CHECK(plastic.certified_real_count() == 1);
    for (std::size_t i = 0; i < 3; ++i) {
        if (plastic.certified_real(i))
            CHECK(plastic.roots[i].real() == doctest::Approx(1.32471795724474602596).epsilon(1e-14));
        else
            CHECK(std::abs(plastic.roots[i]) == doctest::Approx(0.8688369618327097).epsilon(1e-12));
    }
    // The complex pair has modulus 1/sqrt(theta) since the product of the roots is 1.
    CHECK(0.8688369618327097 == doctest::Approx(1.0 / std::sqrt(1.32471795724474602596)).epsilon(1e-14));
}

TEST_CASE("Weil height") {
    CHECK(weil_height(P({1, -2})) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(weil_height(P({2, -1})) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(weil_height(P({1, -1, -1})) == doctest::Approx(oracle::kSchinzel).epsilon(1e-13));
    CHECK_THROWS_AS(weil_height(P({1, 0, -1})), contract_violation);
    CHECK_THROWS_AS(weil_height(P({2, 0, -2})), contract_violation);
    const auto est = weil_height_estimate(P({1, 0, -1, -1}));
    CHECK(est.value == doctest::Approx(std::log(1.32471795724474602596) / 3.0).epsilon(1e-12));
    CHECK(est.error_bound <= 1e-10);
}

TEST_CASE("heights vanish exactly on roots of unity and zero") {
    CHECK(weil_height(P({1, 0})) == 0.0);
    CHECK(weil_height(P({1, 1})) == 0.0);
    CHECK(weil_height(P({1, -1})) == 0.0);
    for (int n = 3; n <= 40; ++n) CHECK(weil_height(IntPolynomial(cyclotomic(n))) == 0.0);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> C(-4, 4), D(1, 6);
    int checked = 0;
    while (checked < 300) {
        const int d = D(rng);
        std::vector<std::int64_t> c(d + 1);
        for (auto& x : c) x = C(rng);
        if (c.back() == 0) continue;
        const IntPolynomial f(c);
        if (f.content() != 1 || certify_irreducible(f).verdict != Irreducibility::irreducible) continue;
        CHECK(weil_height(f) >= 0.0);
        ++checked;
    }
}

TEST_CASE("discriminant") {
    CHECK(discriminant(P({1, -1, -1})) == 5);
    CHECK(discriminant(P({1, 0, -1, -1})) == -23);
    CHECK(discriminant(P({1, -2})) == 1);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> C(-3, 3), D(2, 6), Mode(0, 2);
    int repeated = 0, checked = 0;
    while (checked < 2000) {
        std::vector<std::int64_t> c;
        if (Mode(rng) == 0) {
            // g^2 h: a repeated factor planted on purpose.
            std::vector<std::int64_t> g{C(rng), 1}, h{C(rng), C(rng), 1};
            c = multiply(multiply(g, g), h);
        } else {
            const int d = D(rng);
            c.resize(d + 1);
            for (auto& x : c) x = C(rng);
            if (c.back() == 0) continue;
        }
        const IntPolynomial f(c);
        const bool squarefree = gcd_degree_with_derivative(c) == 0;
        repeated += !squarefree;
        CHECK((discriminant(f) != 0) == squarefree);
        ++checked;
    }
    CHECK(repeated > 100);
}

TEST_CASE("archimedean pairing") {
    const double golden_pair = 2.0 * oracle::kSchinzel - 0.25 * std::log(5.0);
    CHECK(arch_pairing(P({1, -1, -1})) == doctest::Approx(golden_pair).epsilon(1e-12));
    CHECK(std::abs(arch_pairing(P({1, -1, -1})) - 0.078853) <= 1e-6);
    CHECK(arch_pairing(P({1, -2})) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(arch_pairing(P({1, 0, -1})), contract_violation);
}

TEST_CASE("Mahler inequality and root-based self-energy") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> C(-5, 5), D(2, 7);
    int checked = 0;
    while (checked < 400) {
        const int d = D(rng);
        std::vector<std::int64_t> c(d + 1);
        for (auto& x : c) x = C(rng);
        if (c.back() == 0 || c.front() == 0) continue;
        const IntPolynomial f(c);
        if (f.content() != 1 || certify_irreducible(f).verdict != Irreducibility::irreducible) continue;
        const auto roots = complex_roots(f);
        const auto rep = arch_pairing_from_roots(f, roots);
        CHECK(rep.pairing.value >= -std::log(static_cast<double>(d)) / (d - 1.0));
        CHECK(rep.mahler_margin >= 0.0);
        // Off-diagonal energy from root differences against the discriminant route.
        const double dd = d;
        const double via_disc = -(std::log(std::abs(discriminant(f).convert_to<double>())) -
                                  (2.0 * dd - 2.0) * std::log(std::abs(static_cast<double>(f.leading())))) /
                                (dd * dd);
        const auto via_roots = offdiagonal_energy(roots);
        CHECK(std::abs(via_roots.value - via_disc) <= via_roots.error_bound + 1e-12);
        ++checked;
    }
}

TEST_CASE("circle pair") {
    CHECK(circle_pair(0.0, 1.0, 0.1) == 0.0);
    for (double eps : {1e-3, 0.1, 0.5, 3.0}) CHECK(circle_pair(0.4, 0.4, eps) == doctest::Approx(-std::log(eps)));
    const double v = circle_pair(0.0, 0.15, 0.1);
    CHECK(v <= -std::log(0.1));
    CHECK(v >= -std::log(0.25));
    // Mean value over the circle: the max-integrand only raises the average, so the
    // smeared pairing sits below the point pairing.
    CHECK(v <= -std::log(0.15));
    CHECK(v == doctest::Approx(circle_pair_midpoint(0.0, 0.15, 0.1)).epsilon(1e-9));
    CHECK_THROWS_AS(circle_pair(0.0, 1.0, 0.0), domain_error);

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> X(-1.0, 1.0), E(0.01, 0.5);
    for (int i = 0; i < 30; ++i) {
        const Complex z(X(rng), X(rng)), zp(X(rng), X(rng));
        const double eps = E(rng);
        CHECK(std::abs(circle_pair(z, zp, eps) - circle_pair(zp, z, eps)) <= 1e-12);
        if (i < 5) CHECK(circle_pair(z, zp, eps) == doctest::Approx(circle_pair_midpoint(z, zp, eps)).epsilon(1e-8));
    }
}

TEST_CASE("circle pair collapses to the point pairing") {
    const Complex z(0.3, 0.1), zp(0.31, 0.1);
    double previous_gap = 1e300;
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        const double gap = std::abs(circle_pair(z, zp, eps) + std::log(std::abs(z - zp)));
        CHECK(gap <= previous_gap);
        previous_gap = gap;
    }
    CHECK(previous_gap <= 1e-12);
}

TEST_CASE("circle against the standard measure") {
    CHECK(circle_vs_standard(0.0, 0.5) == 0.0);
    CHECK(std::abs(circle_vs_standard(3.0, 0.1) + std::log(3.0)) <= 1e-9);
    CHECK(circle_vs_standard(0.0, 2.0) == doctest::Approx(-std::log(2.0)));
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> X(-2.5, 2.5), E(1e-3, 0.9);
    for (int i = 0; i < 200; ++i) {
        const Complex z(X(rng), X(rng));
        const double eps = E(rng);
        const double v = circle_vs_standard(z, eps);
        const double lp = std::abs(z) > 1.0 ? std::log(std::abs(z)) : 0.0;
        CHECK(std::abs(v + lp) <= eps);
        if (i < 20) CHECK(std::abs(v - circle_standard_midpoint(z, eps)) <= 1e-8);
    }
}

TEST_CASE("regularization inequalities") {
    const auto single = regularization_checks({0.0}, 0.5);
    CHECK(single.pair_standard == 0.0);
    CHECK(single.pair_standard_eps == 0.0);
    CHECK(single.standard_slack == doctest::Approx(0.5));
    CHECK(single.all_ok());

    const auto pair = regularization_checks({0.0, 1.0}, 0.1);
    CHECK(pair.self_energy_eps == doctest::Approx(0.5 * -std::log(0.1)).epsilon(1e-14));
    CHECK(std::abs(pair.self_energy_eps - 1.151293) <= 1e-6);
    CHECK(std::abs(pair.self_slack) <= 1e-10);  // disjoint circles: equality
    CHECK(pair.all_ok());

    const auto triple = regularization_checks({-1.0, 0.0, 1.0}, 0.3);
    CHECK(triple.all_ok());
    CHECK(triple.standard_slack > 0.0);
    CHECK(std::abs(triple.self_slack) <= 1e-12);  // spacing 1 > 2 eps: circles are disjoint
    CHECK(triple.energy_slack > 0.0);

    const auto close = regularization_checks({0.0, 0.1, 0.25}, 0.3);
    CHECK(close.all_ok());
    CHECK(close.self_slack > 1e-3);

    CHECK_THROWS_AS(regularization_checks({}, 0.1), domain_error);
    CHECK_THROWS_AS(regularization_checks({0.0, 0.0}, 0.1), domain_error);
    CHECK_THROWS_AS(regularization_checks({0.0}, 1.0), domain_error);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> X(-3.0, 3.0), E(0.01, 0.9);
    std::uniform_int_distribution<int> N(1, 6);
    for (int i = 0; i < 40; ++i) {
        std::vector<double> F(N(rng));
        for (auto& x : F) x = X(rng);
        CHECK(regularization_checks(F, E(rng)).all_ok());
    }
}
