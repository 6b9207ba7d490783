#pragma once

/**
 * @file verify_harness.hpp
 * @brief Corpora of integer polynomials and empirical checks of the height
 *        bounds against them.
 *
 * A corpus is the set of content-1, squarefree, certifiably irreducible
 * polynomials with degree and coefficient bounds, enumerated in a fixed order
 * (degree, then leading coefficient, then a_{d-1}, ..., a_0 from -B to B).
 * Splitting conditions are decided exactly; cases the tests cannot settle are
 * reported as indeterminate and skipped, never guessed.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "bound_engine.hpp"
#include "core.hpp"
#include "energy_lab.hpp"
#include "integer_poly.hpp"
#include "irreducibility.hpp"
#include "modular.hpp"
#include "roots.hpp"

namespace heightbounds {

// -----------------------------------------------------------------------------
// Splitting tests and classification
// -----------------------------------------------------------------------------

/// Newton's inequalities k(d-k) a_k^2 >= (k+1)(d-k+1) a_{k-1} a_{k+1}: necessary
/// for all roots to be real. Used only to reject early.
inline bool satisfies_newton_inequalities(std::span<const std::int64_t> c) {
    const int d = static_cast<int>(c.size()) - 1;
    for (int k = 1; k < d; ++k) {
        const auto ak = static_cast<__int128>(c[static_cast<std::size_t>(k)]);
        const __int128 lhs = static_cast<__int128>(k) * (d - k) * ak * ak;
        const __int128 rhs = static_cast<__int128>(k + 1) * (d - k + 1) * c[static_cast<std::size_t>(k - 1)] *
                             c[static_cast<std::size_t>(k + 1)];
        if (lhs < rhs) return false;
    }
    return true;
}

/// Whether every root of the squarefree f is real (exact Sturm count).
inline bool is_totally_real(const IntPolynomial& f) {
    if (!f.is_squarefree()) throw contract_violation("is_totally_real: polynomial must be squarefree");
    if (f.degree() == 1) return true;
    if (!satisfies_newton_inequalities(f.coefficients())) return false;
    return real_root_count(f) == f.degree();
}

enum class Verdict { yes, no, indeterminate };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

/**
 * Whether f splits over L_p. Decided only for unramified L_p (e = 1) at primes
 * not dividing a_d disc(f): then f splits iff every irreducible factor of f
 * mod p has degree dividing f, by Hensel lifting. Otherwise indeterminate.
 */
inline Verdict is_totally_padic(const IntPolynomial& f, const LocalFieldData& field) {
    if (field.e() != 1) return Verdict::indeterminate;
    const auto pattern = modp::factor_pattern_mod(f.coefficients(), static_cast<std::uint64_t>(field.p()));
    if (!pattern) return Verdict::indeterminate;
    for (int deg : *pattern)
        if (field.f() % deg != 0) return Verdict::no;
    return Verdict::yes;
}

/// unit: monic with constant +-1; integer: monic; general otherwise.
inline AlgebraicClass classify(const IntPolynomial& f) {
    const bool monic = f.leading() == 1 || f.leading() == -1;
    if (!monic) return AlgebraicClass::general;
    if (f.constant() == 1 || f.constant() == -1) return AlgebraicClass::unit;
    return AlgebraicClass::integer;
}

// -----------------------------------------------------------------------------
// Corpus
// -----------------------------------------------------------------------------

struct CorpusParams {
    int min_degree = 1;
    int max_degree = 4;
    std::int64_t coeff_bound = 3;
    bool monic_only = false;
    bool unit_only = false;
    std::uint64_t seed = 0;
    std::uint64_t sample_count = 0;  // 0: exhaustive; otherwise number of seeded candidate draws

    bool sampled() const { return sample_count > 0; }
};

/// Rejects parameters outside the desk-scale guard.
inline void validate(const CorpusParams& params) {
    if (params.max_degree < 1) throw std::invalid_argument("corpus: max_degree must be >= 1");
    if (params.min_degree < 1 || params.min_degree > params.max_degree)
        throw std::invalid_argument("corpus: min_degree must lie in [1, max_degree]");
    if (params.coeff_bound < 1) throw std::invalid_argument("corpus: coeff_bound must be >= 1");
    if (params.max_degree > 12) throw std::invalid_argument("corpus: max_degree must be <= 12");
    if (params.coeff_bound > 50) throw std::invalid_argument("corpus: coeff_bound must be <= 50");
}

using CorpusIndex = unsigned __int128;

/// Mixed-radix enumeration of candidate coefficient vectors.
class CandidateSpace {
public:
    explicit CandidateSpace(const CorpusParams& params) : params_(params) {
        validate(params);
        const auto base = static_cast<CorpusIndex>(2 * params.coeff_bound + 1);
        const auto leads = static_cast<CorpusIndex>(params.monic_only ? 1 : params.coeff_bound);
        CorpusIndex offset = 0;
        for (int d = params.min_degree; d <= params.max_degree; ++d) {
            CorpusIndex block = leads;
            for (int k = 0; k < d; ++k) block *= base;
            offsets_.push_back(offset);
            offset += block;
        }
        size_ = offset;
    }

    CorpusIndex size() const noexcept { return size_; }

    /// Coefficients (low first) of candidate `index`.
    std::vector<std::int64_t> decode(CorpusIndex index) const {
        std::size_t block = offsets_.size() - 1;
        while (offsets_[block] > index) --block;
        const int d = params_.min_degree + static_cast<int>(block);
        CorpusIndex rest = index - offsets_[block];
        const auto base = static_cast<CorpusIndex>(2 * params_.coeff_bound + 1);
        std::vector<std::int64_t> c(static_cast<std::size_t>(d) + 1);
        for (int k = 0; k < d; ++k) {
            c[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(rest % base) - params_.coeff_bound;
            rest /= base;
        }
        c[static_cast<std::size_t>(d)] = params_.monic_only ? 1 : static_cast<std::int64_t>(rest) + 1;
        return c;
    }

private:
    CorpusParams params_;
    std::vector<CorpusIndex> offsets_;
    CorpusIndex size_ = 0;
};

enum class CandidateStatus { accepted, rejected, ambiguous };

/// Applies the corpus filters to one candidate.
inline CandidateStatus screen_candidate(const std::vector<std::int64_t>& c, const CorpusParams& params,
                                        std::optional<IntPolynomial>& out) {
    const int d = static_cast<int>(c.size()) - 1;
    if (c[0] == 0 && d >= 2) return CandidateStatus::rejected;  // divisible by x
    std::int64_t g = 0;
    for (auto v : c) g = std::gcd(g, v);
    if (g != 1) return CandidateStatus::rejected;
    if (params.unit_only) {
        if (c.back() != 1 || (c[0] != 1 && c[0] != -1)) return CandidateStatus::rejected;
        if (d == 1) return CandidateStatus::rejected;  // x -+ 1
    }
    IntPolynomial f(c);
    if (!f.is_squarefree()) return CandidateStatus::rejected;
    switch (certify_irreducible(f).verdict) {
        case Irreducibility::reducible: return CandidateStatus::rejected;
        case Irreducibility::ambiguous: return CandidateStatus::ambiguous;
        case Irreducibility::irreducible: break;
    }
    if (params.unit_only && is_cyclotomic(f)) return CandidateStatus::rejected;
    out.emplace(std::move(f));
    return CandidateStatus::accepted;
}

/// Candidate indices to visit: all of them, or `sample_count` seeded draws.
class CorpusPlan {
public:
    explicit CorpusPlan(const CorpusParams& params) : space_(params), params_(params) {
        if (!params.sampled()) return;
        std::mt19937_64 rng(params.seed);
        samples_.reserve(static_cast<std::size_t>(params.sample_count));
        for (std::uint64_t i = 0; i < params.sample_count; ++i) {
            const CorpusIndex hi = rng();
            const CorpusIndex lo = rng();
            samples_.push_back(((hi << 64) | lo) % space_.size());
        }
    }

    std::uint64_t count() const {
        return params_.sampled() ? samples_.size() : static_cast<std::uint64_t>(space_.size());
    }
    std::vector<std::int64_t> candidate(std::uint64_t k) const {
        return space_.decode(params_.sampled() ? samples_[k] : static_cast<CorpusIndex>(k));
    }
    const CorpusParams& params() const { return params_; }

private:
    CandidateSpace space_;
    CorpusParams params_;
    std::vector<CorpusIndex> samples_;
};

/// Counts from corpus screening.
struct CorpusStats {
    std::uint64_t candidates = 0;
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    std::uint64_t ambiguous = 0;  // irreducibility undecided: skipped

    CorpusStats& operator+=(const CorpusStats& o) {
        candidates += o.candidates;
        accepted += o.accepted;
        rejected += o.rejected;
        ambiguous += o.ambiguous;
        return *this;
    }
};

namespace detail {

/// Runs `work(begin, end)` over [0, n) in chunks on `threads` workers and
/// returns the per-chunk results in chunk order.
template <class Result, class Work>
std::vector<Result> run_chunked(std::uint64_t n, unsigned threads, Work&& work) {
    constexpr std::uint64_t kChunk = 4096;
    const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<Result> results(static_cast<std::size_t>(chunks));
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= chunks) return;
            results[static_cast<std::size_t>(c)] = work(c * kChunk, std::min(n, (c + 1) * kChunk));
        }
    };
    threads = std::max(1U, threads);
    if (threads == 1 || chunks <= 1) {
        worker();
        return results;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace detail

/// Visits every corpus polynomial in enumeration order. `visit` runs on the
/// calling thread, after screening (which uses `threads` workers).
inline CorpusStats for_each_in_corpus(const CorpusParams& params, const std::function<void(const IntPolynomial&)>& visit,
                                      unsigned threads = 1) {
    const CorpusPlan plan(params);
    struct Chunk {
        std::vector<IntPolynomial> polys;
        CorpusStats stats;
    };
    auto chunks = detail::run_chunked<Chunk>(plan.count(), threads, [&](std::uint64_t b, std::uint64_t e) {
        Chunk out;
        for (std::uint64_t k = b; k < e; ++k) {
            std::optional<IntPolynomial> f;
            ++out.stats.candidates;
            switch (screen_candidate(plan.candidate(k), params, f)) {
                case CandidateStatus::accepted:
                    ++out.stats.accepted;
                    out.polys.push_back(std::move(*f));
                    break;
                case CandidateStatus::rejected: ++out.stats.rejected; break;
                case CandidateStatus::ambiguous: ++out.stats.ambiguous; break;
            }
        }
        return out;
    });
    CorpusStats total;
    for (auto& chunk : chunks) {
        total += chunk.stats;
        for (const auto& f : chunk.polys) visit(f);
    }
    return total;
}

/// The corpus as a list, in enumeration order.
inline std::vector<IntPolynomial> generate_corpus(const CorpusParams& params, unsigned threads = 1) {
    std::vector<IntPolynomial> out;
    for_each_in_corpus(params, [&](const IntPolynomial& f) { out.push_back(f); }, threads);
    return out;
}

// -----------------------------------------------------------------------------
// Verification
// -----------------------------------------------------------------------------

/// Failure slack absorbing certified root error in h.
inline constexpr double kVerifySlack = -1e-9;

struct VerificationRecord {
    explicit VerificationRecord(IntPolynomial f) : polynomial(std::move(f)), degree(polynomial.degree()) {}

    IntPolynomial polynomial;
    int degree = 0;
    AlgebraicClass algebraic_class = AlgebraicClass::general;
    std::vector<std::pair<std::string, Verdict>> splitting;  // "inf" or the prime
    Estimate height;
    bool root_of_unity = false;
    std::map<std::string, double> bounds;  // bound name -> value
    double bound_theorem1 = std::numeric_limits<double>::quiet_NaN();
    double bound_floor = std::numeric_limits<double>::quiet_NaN();  // best degree-free floor, if any applies
    double margin = 0.0;  // h - max bound
    bool pass = true;
};

struct VerificationSummary {
    CorpusStats corpus;
    std::uint64_t class_filtered = 0;  // wrong algebraic class
    std::uint64_t filtered = 0;        // some splitting verdict is "no" (may be decided before screening)
    std::uint64_t skipped = 0;         // some splitting verdict is indeterminate
    std::uint64_t exceptional = 0;     // zero, or a root of unity with no applicable bound
    std::uint64_t tested = 0;
    std::uint64_t passed = 0;
    std::uint64_t failed = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    double min_height = std::numeric_limits<double>::infinity();  // over non-roots of unity

    bool ok() const { return failed == 0; }
};

struct VerificationRun {
    std::vector<VerificationRecord> records;  // tested records, enumeration order
    VerificationSummary summary;
};

namespace detail {

enum class Membership { member, not_member, undecided };

inline Membership splitting_verdicts(const IntPolynomial& f, const SplittingSpec& spec,
                                     std::vector<std::pair<std::string, Verdict>>& out) {
    out.clear();
    Membership m = Membership::member;
    if (spec.has_real_place()) {
        const Verdict v = is_totally_real(f) ? Verdict::yes : Verdict::no;
        out.emplace_back("inf", v);
        if (v == Verdict::no) return Membership::not_member;
    }
    for (const auto& field : spec.finite_places()) {
        const Verdict v = is_totally_padic(f, field);
        out.emplace_back(std::to_string(field.p()), v);
        if (v == Verdict::no) return Membership::not_member;
        if (v == Verdict::indeterminate) m = Membership::undecided;
    }
    return m;
}

/// Cheap proof that a candidate is not in L_S: a failed Newton inequality rules
/// out real-rootedness, and a factor mod p of degree not dividing f rules out
/// splitting over an unramified L_p. Both agree with the full verdicts.
inline bool quick_nonmember(const std::vector<std::int64_t>& coeffs, const SplittingSpec& spec) {
    if (spec.has_real_place() && coeffs.size() > 2 && !satisfies_newton_inequalities(coeffs)) return true;
    for (const auto& field : spec.finite_places()) {
        if (field.e() != 1) continue;
        const auto pattern = modp::factor_pattern_mod(coeffs, static_cast<std::uint64_t>(field.p()));
        if (!pattern) continue;
        for (int deg : *pattern)
            if (field.f() % deg != 0) return true;
    }
    return false;
}

/// Degree-free floors valid for alpha in L_S (not zero, not a root of unity).
inline void add_floor_bounds(const SplittingSpec& spec, AlgebraicClass cls, std::map<std::string, double>& bounds) {
    if (spec.has_real_place()) bounds["schinzel"] = schinzel_bound();
    if (spec.finite_places().empty()) return;
    if (spec.finite_places().size() == 1) {
        const auto& field = spec.finite_places().front();
        bounds["theorem2"] = theorem2_bound(field);
        if (cls == AlgebraicClass::unit) {
            bounds["prop_unit"] = prop_unit_bound(field);
            const double petsche = petsche_bound(SplittingSpec(false, spec.finite_places()));
            if (petsche > 0.0) bounds["petsche"] = petsche;
        } else {
            bounds["prop_nounit"] = prop_nounit_bound(field);
        }
    }
    const SplittingSpec finite_only(false, spec.finite_places());
    bounds["floor_search"] = height_floor(finite_only, cls).bound;
}

/// Floors depend only on (spec, class); computed once per run.
struct FloorCache {
    std::map<AlgebraicClass, std::map<std::string, double>> by_class;
    const std::map<std::string, double>& get(const SplittingSpec& spec, AlgebraicClass cls) {
        auto it = by_class.find(cls);
        if (it != by_class.end()) return it->second;
        std::map<std::string, double> b;
        add_floor_bounds(spec, cls, b);
        return by_class.emplace(cls, std::move(b)).first->second;
    }
};

}  // namespace detail

/**
 * Checks h(alpha) against every applicable bound for each corpus polynomial
 * whose roots provably lie in every local field of `spec`. Polynomials with an
 * undecided splitting verdict are counted as skipped.
 */
inline VerificationRun verify_bounds(const CorpusParams& params, const SplittingSpec& spec,
                                     std::optional<AlgebraicClass> class_filter = std::nullopt, unsigned threads = 1) {
    // Floors are computed up front so worker threads only read them.
    std::map<AlgebraicClass, std::map<std::string, double>> floors;
    if (!spec.empty()) {
        detail::FloorCache cache;
        for (auto cls : {AlgebraicClass::general, AlgebraicClass::integer, AlgebraicClass::unit})
            floors[cls] = cache.get(spec, cls);
    }
    (void)cached_c1();
    (void)cached_c2();

    const CorpusPlan plan(params);
    struct Chunk {
        std::vector<VerificationRecord> records;
        VerificationSummary summary;
    };
    auto chunks = detail::run_chunked<Chunk>(plan.count(), threads, [&](std::uint64_t b, std::uint64_t e) {
        Chunk out;
        auto& s = out.summary;
        for (std::uint64_t k = b; k < e; ++k) {
            std::optional<IntPolynomial> candidate;
            ++s.corpus.candidates;
            const auto coeffs = plan.candidate(k);
            // Real-rootedness fails Newton's inequalities for most candidates; that is
            // decided before the costlier irreducibility screening.
            if (detail::quick_nonmember(coeffs, spec)) {
                ++s.filtered;
                continue;
            }
            const auto status = screen_candidate(coeffs, params, candidate);
            if (status == CandidateStatus::rejected) {
                ++s.corpus.rejected;
                continue;
            }
            if (status == CandidateStatus::ambiguous) {
                ++s.corpus.ambiguous;
                continue;
            }
            ++s.corpus.accepted;
            const IntPolynomial& f = *candidate;
            const AlgebraicClass cls = classify(f);
            if (class_filter && cls != *class_filter) {
                ++s.class_filtered;
                continue;
            }
            VerificationRecord rec(f);
            rec.algebraic_class = cls;
            const auto membership = detail::splitting_verdicts(f, spec, rec.splitting);
            if (membership == detail::Membership::not_member) {
                ++s.filtered;
                continue;
            }
            if (membership == detail::Membership::undecided) {
                ++s.skipped;
                continue;
            }
            const RootSet roots = complex_roots(f);
            rec.height = weil_height_from_roots(f, roots);
            const bool is_zero = f.degree() == 1 && f.constant() == 0;
            rec.root_of_unity = !is_zero && rec.height.value - rec.height.error_bound < 1e-9 && is_cyclotomic(f);
            if (rec.root_of_unity) rec.height = Estimate{0.0, 0.0};
            if (f.degree() >= 2) {
                rec.bound_theorem1 = theorem1_bound(spec, f.degree(), cls).total;
                rec.bounds["theorem1"] = rec.bound_theorem1;
            }
            if (!is_zero && !rec.root_of_unity && !spec.empty()) {
                double best = -std::numeric_limits<double>::infinity();
                for (const auto& [name, value] : floors.at(cls)) {
                    rec.bounds[name] = value;
                    best = std::max(best, value);
                }
                rec.bound_floor = best;
            }
            if (rec.bounds.empty()) {
                ++s.exceptional;
                continue;
            }
            double max_bound = -std::numeric_limits<double>::infinity();
            for (const auto& [name, value] : rec.bounds) max_bound = std::max(max_bound, value);
            rec.margin = rec.height.value - max_bound;
            rec.pass = rec.margin >= kVerifySlack;
            ++s.tested;
            ++(rec.pass ? s.passed : s.failed);
            s.min_margin = std::min(s.min_margin, rec.margin);
            if (!rec.root_of_unity && !is_zero) s.min_height = std::min(s.min_height, rec.height.value);
            out.records.push_back(std::move(rec));
        }
        return out;
    });

    VerificationRun run;
    auto& total = run.summary;
    for (auto& chunk : chunks) {
        const auto& s = chunk.summary;
        total.corpus += s.corpus;
        total.class_filtered += s.class_filtered;
        total.filtered += s.filtered;
        total.skipped += s.skipped;
        total.exceptional += s.exceptional;
        total.tested += s.tested;
        total.passed += s.passed;
        total.failed += s.failed;
        total.min_margin = std::min(total.min_margin, s.min_margin);
        total.min_height = std::min(total.min_height, s.min_height);
        for (auto& r : chunk.records) run.records.push_back(std::move(r));
    }
    return run;
}

struct WitnessResult {
    std::optional<IntPolynomial> polynomial;
    double min_height = std::numeric_limits<double>::infinity();
    double floor = 0.0;  // height_floor(spec)
    double gap = std::numeric_limits<double>::infinity();
};

/// Corpus element of least height among provable members of L_S that are not
/// zero or roots of unity; ties go to the earlier polynomial in enumeration order.
inline WitnessResult witness_search(const SplittingSpec& spec, const CorpusParams& params, unsigned threads = 1) {
    WitnessResult w;
    w.floor = height_floor(spec).bound;
    const auto run = verify_bounds(params, spec, std::nullopt, threads);
    for (const auto& rec : run.records) {
        if (rec.root_of_unity || (rec.degree == 1 && rec.polynomial.constant() == 0)) continue;
        if (rec.height.value < w.min_height - 1e-12) {
            w.min_height = rec.height.value;
            w.polynomial = rec.polynomial;
        }
    }
    if (w.polynomial) w.gap = w.min_height - w.floor;
    return w;
}

}  // namespace heightbounds
