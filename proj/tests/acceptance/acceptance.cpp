// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "heightbounds/heightbounds.hpp"
#include "support/mu_sampler.hpp"
#include "support/oracle_values.hpp"
#include "support/padic_oracle.hpp"

using namespace heightbounds;
namespace oracle = heightbounds::testing::oracle;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail << "first failure: " << what << "; ";
            pass = false;
        }
    }
};

int g_failures = 0;

void criterion(int id, const char* name, double budget_seconds, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail << "exception: " << e.what() << "; ";
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (seconds > budget_seconds) {
        out.pass = false;
        out.detail << "over time budget; ";
    }
    g_failures += !out.pass;
    std::printf("criterion %2d  %s  %-28s %.2fs/%.0fs  %s\n", id, out.pass ? "PASS" : "FAIL", name, seconds,
                budget_seconds, out.detail.str().c_str());
    std::fflush(stdout);
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

LocalFieldData F(std::int64_t p, std::int64_t e, std::int64_t f) { return LocalFieldData::make(p, e, f); }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Runs `work(begin, end)` over chunks of [0, n) on all cores.
template <class Work>
void parallel_chunks(std::uint64_t n, Work&& work) {
    constexpr std::uint64_t kChunk = 8192;
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(kChunk);
            if (b >= n) return;
            work(b, std::min(n, b + kChunk));
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < worker_count(); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

}  // namespace

int main() {
    std::printf("acceptance run on %u hardware thread(s)\n", worker_count());

    criterion(1, "constants c1, c2", 10.0, [](Outcome& o) {
        const double c1 = const_c1(1e-6), c2 = const_c2(1e-6);
        o.require(c1 >= 0.677 && c1 <= 0.679, "c1 = " + fmt(c1));
        o.require(c2 >= 2.504 && c2 <= 2.506, "c2 = " + fmt(c2));
        const auto [m1, m2] = testing::monte_carlo_moments(testing::c_integrand, 10'000'000, 2024);
        const double c1_mc = 0.5 * m1.mean, c1_se = 0.5 * m1.standard_error;
        const double c2_mc = std::sqrt(m2.mean), c2_se = m2.standard_error / (2.0 * c2_mc);
        o.require(std::abs(c1_mc - c1) <= 3.0 * c1_se, "c1 Monte-Carlo " + fmt(c1_mc) + " +- " + fmt(c1_se));
        o.require(std::abs(c2_mc - c2) <= 3.0 * c2_se, "c2 Monte-Carlo " + fmt(c2_mc) + " +- " + fmt(c2_se));
        o.detail << "c1=" << fmt(c1) << " c2=" << fmt(c2) << " MC z-scores " << fmt((c1_mc - c1) / c1_se) << ", "
                 << fmt((c2_mc - c2) / c2_se);
    });

    criterion(2, "measure mass and log+ moment", 5.0, [](Outcome& o) {
        const double mass = mu_integral([](double) { return 1.0; }, 1e-10).value;
        const double lp = mu_integral([](double z) { return std::abs(z) > 1.0 ? std::log(std::abs(z)) : 0.0; }, 1e-10).value;
        const double closed = 7.0 * zeta3() / (2.0 * std::numbers::pi * std::numbers::pi);
        o.require(std::abs(mass - 1.0) <= 1e-8, "mass " + fmt(mass));
        o.require(std::abs(lp - closed) <= 1e-8, "log+ moment " + fmt(lp));
        o.require(std::abs(closed - oracle::kRobinRealLine) <= 1e-14, "7 zeta(3)/(2 pi^2)");
        o.detail << "mass-1=" << fmt(mass - 1.0) << " moment-closed=" << fmt(lp - closed);
    });

    criterion(3, "archimedean term sign flip", 1.0, [](Outcome& o) {
        for (std::int64_t d = 2; d <= 77; ++d) o.require(v_infinity(d) == 0.0, "v_infinity(" + std::to_string(d) + ")");
        for (std::int64_t d = 78; d <= 1000; ++d) o.require(v_infinity(d) > 0.0, "v_infinity(" + std::to_string(d) + ")");
        o.detail << "v_infinity(78)=" << fmt(v_infinity(78));
    });

    criterion(4, "worked example {2, 3}", 1.0, [](Outcome& o) {
        const SplittingSpec spec(false, {F(2, 1, 1), F(3, 1, 1)});
        const double floor = height_floor(spec).bound;
        const double petsche = petsche_bound(spec);
        o.require(std::abs(floor - std::numbers::ln2 / 11.0) <= 1e-9, "floor " + fmt(floor));
        o.require(std::abs(petsche - 0.5 * std::log(6.0)) <= 1e-12, "petsche " + fmt(petsche));
        o.detail << "floor=" << fmt(floor) << " petsche=" << fmt(petsche);
    });

    criterion(5, "potential flatness and strip", 60.0, [](Outcome& o) {
        const double robin = robin_real_line();
        double worst = 0.0;
        for (double x : {0.5, -0.5, 2.0, -2.0, 3.0}) {
            const double u = u_delta_potential(x, 0.0, 1e-9);
            worst = std::max(worst, std::abs(u - robin));
            o.require(std::abs(u - robin) <= 1e-6, "flat at " + fmt(x));
        }
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> X(-4.0, 4.0), U(-1.0, 1.0);
        double min_slack = 1e300;
        for (double eps : {0.1, 0.01}) {
            const double floor = robin_lower_strip(eps);
            for (int i = 0; i < 50; ++i) {
                const double x = X(rng), y = eps * U(rng);
                const double slack = u_delta_potential(x, y, 1e-8) - floor;
                min_slack = std::min(min_slack, slack);
                o.require(slack >= -1e-6, "strip point (" + fmt(x) + ", " + fmt(y) + ")");
            }
        }
        o.detail << "max flatness error=" << fmt(worst) << " min strip slack=" << fmt(min_slack);
    });

    criterion(6, "regularization inequalities", 60.0, [](Outcome& o) {
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> X(-3.0, 3.0), LogEps(std::log(1e-3), std::log(0.9));
        std::uniform_int_distribution<int> N(1, 6);
        double min_slack = 1e300;
        for (int i = 0; i < 200; ++i) {
            std::vector<double> pts(static_cast<std::size_t>(N(rng)));
            for (auto& x : pts) x = X(rng);
            const double eps = std::exp(LogEps(rng));
            const auto r = regularization_checks(pts, eps);
            min_slack = std::min({min_slack, r.standard_slack, r.self_slack, r.energy_slack});
            o.require(r.standard_slack >= -1e-9 && r.self_slack >= -1e-9 && r.energy_slack >= -1e-9,
                      "case " + std::to_string(i));
        }
        const auto eq = regularization_checks({0.0, 1.0}, 0.1);
        o.require(std::abs(eq.self_energy_eps + std::log(0.1) / 2.0) <= 1e-10, "equality case");
        o.detail << "min slack=" << fmt(min_slack) << " equality error=" << fmt(eq.self_energy_eps + std::log(0.1) / 2.0);
    });

    criterion(7, "Mahler inequality corpus", 300.0, [](Outcome& o) {
        const CorpusParams params{.min_degree = 2, .max_degree = 8, .coeff_bound = 3, .monic_only = true};
        const CorpusPlan plan(params);
        std::mutex m;
        std::uint64_t tested = 0, ambiguous = 0, violations = 0;
        double min_margin = 1e300;
        parallel_chunks(plan.count(), [&](std::uint64_t b, std::uint64_t e) {
            std::uint64_t t = 0, a = 0, v = 0;
            double mm = 1e300;
            for (std::uint64_t k = b; k < e; ++k) {
                std::optional<IntPolynomial> f;
                const auto status = screen_candidate(plan.candidate(k), params, f);
                if (status == CandidateStatus::ambiguous) ++a;
                if (status != CandidateStatus::accepted) continue;
                const auto rep = arch_pairing_from_roots(*f, complex_roots(*f));
                const double d = f->degree();
                ++t;
                mm = std::min(mm, rep.mahler_margin);
                v += rep.pairing.value + rep.pairing.error_bound < -std::log(d) / (d - 1.0);
            }
            std::lock_guard lock(m);
            tested += t;
            ambiguous += a;
            violations += v;
            min_margin = std::min(min_margin, mm);
        });
        o.require(tested >= 10'000, "corpus too small");
        o.require(violations == 0, std::to_string(violations) + " violations");
        o.detail << "polynomials=" << tested << " skipped(ambiguous)=" << ambiguous << " violations=" << violations
                 << " min margin=" << fmt(min_margin);
    });

    criterion(8, "theorem assertions", 600.0, [](Outcome& o) {
        const unsigned threads = worker_count();
        const auto real = verify_bounds({.max_degree = 8, .coeff_bound = 3, .monic_only = true}, SplittingSpec(true, {}),
                                        std::nullopt, threads);
        const auto padic = verify_bounds({.max_degree = 4, .coeff_bound = 8}, SplittingSpec(false, {F(11, 1, 1)}),
                                         std::nullopt, threads);
        o.require(real.summary.failed == 0, "totally real corpus has failures");
        o.require(padic.summary.failed == 0, "11-adic corpus has failures");
        o.require(real.summary.tested > 0 && padic.summary.tested > 0, "empty corpus");
        o.require(real.summary.min_height >= schinzel_bound() - 1e-9, "height below Schinzel");
        for (const auto& rec : padic.records) {
            o.require(rec.bounds.count("theorem1") == (rec.degree >= 2 ? 1u : 0u), "theorem 1 applied");
            o.require(rec.root_of_unity || rec.bounds.count("theorem2") == 1, "theorem 2 applied");
        }
        o.detail << "real: tested=" << real.summary.tested << " min h=" << fmt(real.summary.min_height)
                 << "; 11-adic: tested=" << padic.summary.tested << " skipped=" << padic.summary.skipped
                 << " min margin=" << fmt(padic.summary.min_margin);
    });

    criterion(9, "p-adic splitting vs Hensel oracle", 300.0, [](Outcome& o) {
        const std::int64_t primes[] = {2, 3, 5, 7, 11, 13};
        std::vector<testing::PadicOracle> lifters;
        for (auto p : primes) lifters.emplace_back(p, 1);
        // Every squarefree content-1 polynomial of degree <= 4 with |a_i| <= 5, up to sign.
        const CandidateSpace space({.min_degree = 1, .max_degree = 4, .coeff_bound = 5});
        std::mutex m;
        std::uint64_t polys = 0, compared = 0, mismatches = 0;
        parallel_chunks(static_cast<std::uint64_t>(space.size()), [&](std::uint64_t b, std::uint64_t e) {
            std::uint64_t n = 0, c = 0, bad = 0;
            for (std::uint64_t k = b; k < e; ++k) {
                const auto coeffs = space.decode(k);
                std::int64_t g = 0;
                for (auto v : coeffs) g = std::gcd(g, v);
                if (g != 1) continue;
                const IntPolynomial f(coeffs);
                if (!f.is_squarefree()) continue;
                ++n;
                for (std::size_t i = 0; i < std::size(primes); ++i) {
                    const Verdict v = is_totally_padic(f, F(primes[i], 1, 1));
                    if (v == Verdict::indeterminate) continue;
                    const auto expected = lifters[i].splits(coeffs, 20);
                    if (!expected) continue;
                    ++c;
                    bad += *expected != (v == Verdict::yes);
                }
            }
            std::lock_guard lock(m);
            polys += n;
            compared += c;
            mismatches += bad;
        });
        o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
        o.require(compared > 100'000, "too few decisive comparisons");
        o.detail << "polynomials=" << polys << " decisive comparisons=" << compared << " mismatches=" << mismatches;
    });

    criterion(10, "Lambert-type threshold", 1.0, [](Outcome& o) {
        std::mt19937_64 rng(10);
        std::uniform_real_distribution<double> LA(-10.0, 5.0), B(0.0, 30.0);
        for (int i = 0; i < 1000; ++i) {
            const double a = std::exp(LA(rng));
            const double b = 1.0 + std::log(a) + B(rng);
            const double x = lambert_threshold(a, b);
            o.require(a * x - b - std::log(x) > 0.0, "at x0, case " + std::to_string(i));
            o.require(2.0 * a * x - b - std::log(2.0 * x) > 0.0, "at 2 x0, case " + std::to_string(i));
        }
        o.detail << "1000 cases";
    });

    criterion(11, "closed-form floors", 10.0, [](Outcome& o) {
        double worst = 0.0;
        for (const auto& row : oracle::kFields) {
            const auto field = F(row.p, row.e, row.f);
            const SplittingSpec spec(false, {field});
            const std::string tag = "(" + std::to_string(row.p) + "," + std::to_string(row.e) + "," + std::to_string(row.f) + ")";
            const double t2 = theorem2_bound(field), pn = prop_nounit_bound(field), pu = prop_unit_bound(field);
            worst = std::max({worst, std::abs(t2 - row.theorem2), std::abs(pn - row.prop_nounit), std::abs(pu - row.prop_unit)});
            o.require(std::abs(t2 - row.theorem2) <= 1e-12, "theorem2 " + tag);
            o.require(std::abs(pn - row.prop_nounit) <= 1e-12, "prop_nounit " + tag);
            o.require(std::abs(pu - row.prop_unit) <= 1e-12, "prop_unit " + tag);
            o.require(pn <= nonunit_floor_search(spec).bound, "prop_nounit above search " + tag);
            o.require(pu <= unit_floor_search(spec).bound, "prop_unit above search " + tag);
            o.require(t2 <= height_floor(spec).bound, "theorem2 above floor " + tag);
        }
        o.detail << "max deviation from oracle=" << fmt(worst);
    });

    std::printf("%s: %d of 11 criteria failed\n", g_failures == 0 ? "ACCEPTED" : "REJECTED", g_failures);
    return g_failures == 0 ? 0 : 1;
}
