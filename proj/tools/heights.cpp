// heights: command-line front end for the height bounds library.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage, 3 domain error,
// 4 floor search exhausted.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "heightbounds/heightbounds.hpp"

namespace {

using heightbounds::AlgebraicClass;
using heightbounds::LocalFieldData;
using heightbounds::SplittingSpec;
using json = nlohmann::json;

enum ExitCode { kOk = 0, kVerifyFailed = 1, kUsage = 2, kDomain = 3, kExhausted = 4 };

struct Options {
    std::string format = "json";
    bool bits = false;
    double tol = 1e-9;
    int threads = 0;  // 0: one per hardware thread
    std::uint64_t seed = 0;

    // Shared by bound, floor and verify.
    std::string spec;
    bool real = false;

    // constants
    bool arch = false;
    bool all = false;
    std::vector<std::int64_t> padic;
    std::int64_t depth = 1;

    // bound
    std::int64_t degree = 0;
    std::string cls = "g";
    std::string weights;

    // verify
    int min_degree = 1;
    int max_degree = 4;
    std::int64_t coeff_bound = 3;
    bool monic = false;
    bool units = false;
    std::uint64_t sample = 0;
    std::string out;
    std::string class_filter;

    // pair
    std::string poly;
    std::string set;
    double eps = 0.1;
};

// -----------------------------------------------------------------------------
// Input parsing
// -----------------------------------------------------------------------------

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(trim(item));
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

template <class T>
T parse_number(const std::string& text, const char* what) {
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end)
        throw std::invalid_argument(std::string("malformed ") + what + ": '" + text + "'");
    return value;
}

SplittingSpec parse_spec(const std::string& text, bool real) {
    std::vector<LocalFieldData> places;
    if (!trim(text).empty()) {
        for (const auto& triple : split(text, ',')) {
            const auto fields = split(triple, ':');
            if (fields.size() != 3) throw std::invalid_argument("malformed place '" + triple + "', expected p:e:f");
            places.push_back(LocalFieldData::make(parse_number<std::int64_t>(fields[0], "prime"),
                                                  parse_number<std::int64_t>(fields[1], "ramification degree"),
                                                  parse_number<std::int64_t>(fields[2], "inertial degree")));
        }
    }
    return SplittingSpec(real, std::move(places));
}

std::optional<AlgebraicClass> parse_class(const std::string& s, bool allow_any) {
    if (s == "g" || s == "general") return AlgebraicClass::general;
    if (s == "i" || s == "integer") return AlgebraicClass::integer;
    if (s == "u" || s == "unit") return AlgebraicClass::unit;
    if (allow_any && s == "any") return std::nullopt;
    throw std::invalid_argument("unknown class '" + s + "'");
}

heightbounds::IntPolynomial parse_poly(const std::string& text) {
    std::vector<std::int64_t> coeffs;
    for (const auto& c : split(text, ',')) coeffs.push_back(parse_number<std::int64_t>(c, "coefficient"));
    if (coeffs.size() < 2) throw std::invalid_argument("polynomial needs degree >= 1");
    if (coeffs.front() == 0) throw std::invalid_argument("leading coefficient must be nonzero");
    return heightbounds::IntPolynomial::from_leading_first(std::move(coeffs));
}

json place_json(const LocalFieldData& f) { return json{{"p", f.p()}, {"e", f.e()}, {"f", f.f()}}; }

json spec_json(const SplittingSpec& spec) {
    json places = json::array();
    for (const auto& f : spec.finite_places()) places.push_back(place_json(f));
    return json{{"real", spec.has_real_place()}, {"places", places}};
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json big_integer(const heightbounds::BigInt& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return json(v.convert_to<std::int64_t>());
    return json(v.str());
}

unsigned resolve_threads(int requested) {
    if (const char* env = std::getenv("HEIGHTS_THREADS")) {
        const std::string text = trim(env);
        if (!text.empty()) requested = parse_number<int>(text, "HEIGHTS_THREADS");
    }
    if (requested < 0) throw std::invalid_argument("thread count must be >= 0");
    if (requested == 0) return std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(requested);
}

// -----------------------------------------------------------------------------
// Output
// -----------------------------------------------------------------------------

// Keys whose values are not logarithms; --bits leaves them alone.
const std::set<std::string> kNonLogKeys = {"pisot_theta", "eps", "tol", "witness", "weight", "points", "degree",
                                           "n_p",        "p",   "e",   "f",       "depth"};

std::string format_double(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

void flatten(const json& j, const std::string& prefix, bool bits, bool log_valued,
             std::vector<std::pair<std::string, std::string>>& out, int digits) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            flatten(v, prefix.empty() ? k : prefix + "." + k, bits, log_valued && !kNonLogKeys.count(k), out, digits);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "[" + std::to_string(i) + "]", bits, log_valued, out, digits);
    } else if (j.is_number_float()) {
        double v = j.get<double>();
        if (bits && log_valued) v /= std::log(2.0);
        out.emplace_back(prefix, format_double(v, digits));
    } else if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else {
        out.emplace_back(prefix, j.dump());
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

json envelope(const std::string& command, json inputs, json results, double tol) {
    return json{{"command", command},
                {"inputs", std::move(inputs)},
                {"results", std::move(results)},
                {"provenance", {{"c1", heightbounds::cached_c1()}, {"c2", heightbounds::cached_c2()}, {"tol", tol}}}};
}

void emit(std::ostream& os, const json& doc, const Options& opt) {
    if (opt.format == "json") {
        os << doc.dump(2) << '\n';
        return;
    }
    std::vector<std::pair<std::string, std::string>> rows;
    if (opt.format == "csv") {
        flatten(doc["results"], "", false, true, rows, 17);
        os << "key,value\n";
        for (const auto& [k, v] : rows) os << csv_field(k) << ',' << csv_field(v) << '\n';
        return;
    }
    flatten(doc["results"], "", opt.bits, true, rows, 12);
    os << doc["command"].get<std::string>() << (opt.bits ? " (logarithms in bits)" : "") << '\n';
    for (const auto& [k, v] : rows) os << "  " << k << " = " << v << '\n';
}

// -----------------------------------------------------------------------------
// Commands
// -----------------------------------------------------------------------------

int cmd_constants(const Options& opt) {
    using namespace heightbounds;
    if (!(opt.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
    const bool want_padic = !opt.padic.empty();
    const bool want_arch = opt.arch || opt.all || !want_padic;
    json inputs{{"arch", want_arch}, {"tol", opt.tol}};
    json results = json::object();
    if (want_arch) {
        results["c1"] = const_c1(opt.tol);
        results["c2"] = const_c2(opt.tol);
        results["zeta3"] = zeta3();
        results["robin_real_line"] = robin_real_line();
        results["pisot_theta"] = pisot_theta();
        results["schinzel"] = schinzel_bound();
    }
    if (want_padic) {
        if (opt.padic.size() != 3) throw std::invalid_argument("--padic takes p e f");
        const auto field = LocalFieldData::make(opt.padic[0], opt.padic[1], opt.padic[2]);
        inputs["padic"] = place_json(field);
        inputs["depth"] = opt.depth;
        results["padic"] = {{"robin_O", robin_O(field)},
                            {"robin_O_units", robin_O_units(field)},
                            {"robin_P1", robin_P1(field)},
                            {"robin_O_eps", robin_O_eps(field, opt.depth)},
                            {"robin_O_units_eps", robin_O_units_eps(field, opt.depth)},
                            {"robin_P1_eps", robin_P1_eps(field, opt.depth)}};
    }
    emit(std::cout, envelope("constants", inputs, results, opt.tol), opt);
    return kOk;
}

std::vector<double> parse_weights(const std::string& text) {
    std::vector<double> w;
    for (const auto& item : split(text, ',')) w.push_back(parse_number<double>(item, "weight"));
    return w;
}

int cmd_bound(const Options& opt) {
    using namespace heightbounds;
    const SplittingSpec spec = parse_spec(opt.spec, opt.real);
    const AlgebraicClass cls = *parse_class(opt.cls, false);
    json inputs{{"spec", spec_json(spec)}, {"degree", opt.degree}, {"class", to_string(cls)}};
    BoundReport report;
    if (!opt.weights.empty()) {
        const auto w = parse_weights(opt.weights);
        const std::size_t expected = spec.finite_places().size() + (spec.has_real_place() ? 1 : 0);
        if (w.size() != expected)
            throw std::invalid_argument("--weights needs " + std::to_string(expected) + " values (real place first)");
        std::vector<WeightedPlace> places;
        std::size_t k = 0;
        places.push_back(WeightedPlace::real(spec.has_real_place() ? w[k++] : 1.0, spec.has_real_place()));
        for (const auto& field : spec.finite_places()) places.push_back(WeightedPlace::finite(field, w[k++]));
        inputs["weights"] = w;
        report = general_bound(places, opt.degree, cls);
    } else {
        report = theorem1_bound(spec, opt.degree, cls);
    }
    json per_place = json::array();
    for (const auto& pc : report.per_place) {
        json entry = place_json(pc.field);
        entry["n_p"] = pc.n_p;
        entry["weight"] = pc.weight;
        entry["contribution"] = pc.contribution;
        entry["included"] = pc.included;
        per_place.push_back(entry);
    }
    json results{{"degree", report.degree},   {"class", to_string(report.algebraic_class)},
                 {"mahler_term", report.mahler_term}, {"arch_term", report.arch_term},
                 {"per_place", per_place},     {"total", report.total}};
    if (spec.has_real_place()) results["v_infinity"] = v_infinity(opt.degree);
    emit(std::cout, envelope("bound", inputs, results, opt.tol), opt);
    return kOk;
}

int cmd_floor(const Options& opt) {
    using namespace heightbounds;
    const SplittingSpec spec = parse_spec(opt.spec, opt.real);
    const auto cls = parse_class(opt.cls, true);
    json inputs{{"spec", spec_json(spec)}, {"class", cls ? to_string(*cls) : "any"}};
    const FloorResult r = height_floor(spec, cls);
    json s_prime = json::array();
    for (const auto& f : r.s_prime) s_prime.push_back(place_json(f));
    json results{{"floor", r.bound},
                 {"branch", to_string(r.branch)},
                 {"witness", r.witness},
                 {"guaranteed_floor", r.guaranteed_floor},
                 {"s_prime", s_prime}};
    if (!spec.finite_places().empty()) results["petsche"] = petsche_bound(SplittingSpec(false, spec.finite_places()));
    if (spec.has_real_place()) results["schinzel"] = schinzel_bound();
    emit(std::cout, envelope("floor", inputs, results, opt.tol), opt);
    return kOk;
}

std::string splitting_text(const heightbounds::VerificationRecord& rec) {
    std::string s;
    for (const auto& [place, verdict] : rec.splitting) {
        if (!s.empty()) s += ';';
        s += place + ":" + heightbounds::to_string(verdict);
    }
    return s;
}

json record_json(const heightbounds::VerificationRecord& rec) {
    json splitting = json::object();
    for (const auto& [place, verdict] : rec.splitting) splitting[place] = heightbounds::to_string(verdict);
    json bounds = json::object();
    for (const auto& [name, value] : rec.bounds) bounds[name] = value;
    return json{{"poly", rec.polynomial.to_coeff_list()},
                {"degree", rec.degree},
                {"class", heightbounds::to_string(rec.algebraic_class)},
                {"splitting", splitting},
                {"height", rec.height.value},
                {"height_error", rec.height.error_bound},
                {"bounds", bounds},
                {"bound_thm1", number_or_null(rec.bound_theorem1)},
                {"bound_floor", number_or_null(rec.bound_floor)},
                {"margin", rec.margin},
                {"pass", rec.pass}};
}

void write_records_csv(std::ostream& os, const std::vector<heightbounds::VerificationRecord>& records) {
    os << "poly,degree,class,splitting,height,bound_thm1,bound_floor,margin,pass\n";
    auto num = [](double v) { return std::isfinite(v) ? format_double(v, 17) : std::string(); };
    for (const auto& rec : records) {
        os << csv_field(rec.polynomial.to_coeff_list()) << ',' << rec.degree << ','
           << heightbounds::to_string(rec.algebraic_class) << ',' << csv_field(splitting_text(rec)) << ','
           << num(rec.height.value) << ',' << num(rec.bound_theorem1) << ',' << num(rec.bound_floor) << ','
           << num(rec.margin) << ',' << (rec.pass ? "true" : "false") << '\n';
    }
}

int cmd_verify(const Options& opt) {
    using namespace heightbounds;
    const SplittingSpec spec = parse_spec(opt.spec, opt.real);
    const CorpusParams params{.min_degree = opt.min_degree,
                              .max_degree = opt.max_degree,
                              .coeff_bound = opt.coeff_bound,
                              .monic_only = opt.monic,
                              .unit_only = opt.units,
                              .seed = opt.seed,
                              .sample_count = opt.sample};
    validate(params);
    std::optional<AlgebraicClass> filter;
    if (!opt.class_filter.empty()) filter = parse_class(opt.class_filter, true);
    const unsigned threads = resolve_threads(opt.threads);

    json inputs{{"spec", spec_json(spec)},
                {"min_degree", params.min_degree},
                {"max_degree", params.max_degree},
                {"coeff_bound", params.coeff_bound},
                {"monic", params.monic_only},
                {"units", params.unit_only},
                {"sample", params.sample_count},
                {"seed", params.seed},
                {"class", filter ? to_string(*filter) : "any"}};

    const VerificationRun run = verify_bounds(params, spec, filter, threads);
    const auto& s = run.summary;
    json results{{"candidates", s.corpus.candidates},
                 {"accepted", s.corpus.accepted},
                 {"rejected", s.corpus.rejected},
                 {"ambiguous", s.corpus.ambiguous},
                 {"class_filtered", s.class_filtered},
                 {"filtered", s.filtered},
                 {"skipped", s.skipped},
                 {"exceptional", s.exceptional},
                 {"tested", s.tested},
                 {"passed", s.passed},
                 {"failed", s.failed},
                 {"min_margin", number_or_null(s.min_margin)},
                 {"min_height", number_or_null(s.min_height)},
                 {"ok", s.ok()}};

    if (!opt.out.empty()) {
        std::ofstream file(opt.out);
        if (!file) throw std::invalid_argument("cannot open --out file '" + opt.out + "'");
        if (opt.format == "csv") {
            write_records_csv(file, run.records);
        } else {
            json records = json::array();
            for (const auto& rec : run.records) records.push_back(record_json(rec));
            json full = results;
            full["records"] = records;
            file << envelope("verify", inputs, full, opt.tol).dump(2) << '\n';
        }
    }
    emit(std::cout, envelope("verify", inputs, results, opt.tol), opt);

    if (!s.ok()) {
        for (const auto& rec : run.records)
            if (!rec.pass)
                std::cerr << "bound violated: " << rec.polynomial.to_string() << "  h = " << format_double(rec.height.value, 17)
                          << "  margin = " << format_double(rec.margin, 17) << '\n';
        return kVerifyFailed;
    }
    return kOk;
}

int cmd_pair(const Options& opt) {
    using namespace heightbounds;
    if (opt.poly.empty() == opt.set.empty()) throw std::invalid_argument("pair needs exactly one of --poly or --set");
    if (!opt.poly.empty()) {
        const IntPolynomial f = parse_poly(opt.poly);
        json inputs{{"poly", f.to_coeff_list()}};
        const Estimate h = weil_height_estimate(f);
        const PairingReport rep = arch_pairing_report(f);
        const bool cyclotomic = h.value == 0.0 && is_cyclotomic(f);
        json results{{"degree", f.degree()},
                     {"height", h.value},
                     {"height_error", h.error_bound},
                     {"disc", big_integer(rep.disc)},
                     {"pairing", rep.pairing.value},
                     {"pairing_error", rep.pairing.error_bound},
                     {"mahler_margin", rep.mahler_margin},
                     {"cyclotomic", cyclotomic}};
        if (cyclotomic) {
            results["warning"] = "roots are roots of unity; height is 0";
            std::cerr << "warning: " << f.to_string() << " is cyclotomic, h = 0\n";
        }
        emit(std::cout, envelope("pair", inputs, results, opt.tol), opt);
        return kOk;
    }
    std::vector<double> points;
    for (const auto& x : split(opt.set, ',')) points.push_back(parse_number<double>(x, "point"));
    json inputs{{"points", points}, {"eps", opt.eps}};
    const RegularizationReport r = regularization_checks(points, opt.eps);
    json results{{"pair_standard", r.pair_standard},
                 {"pair_standard_eps", r.pair_standard_eps},
                 {"self_energy", r.self_energy},
                 {"self_energy_eps", r.self_energy_eps},
                 {"energy", r.energy},
                 {"energy_eps", r.energy_eps},
                 {"standard_slack", r.standard_slack},
                 {"self_slack", r.self_slack},
                 {"energy_slack", r.energy_slack},
                 {"standard_ok", r.standard_ok},
                 {"self_ok", r.self_ok},
                 {"energy_ok", r.energy_ok},
                 {"self_equality", std::abs(r.self_slack) <= 1e-10}};
    emit(std::cout, envelope("pair", inputs, results, opt.tol), opt);
    return kOk;
}

void add_spec_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--spec", opt.spec, "Finite places as p:e:f,p:e:f,...");
    cmd->add_flag("--real", opt.real, "Include the real place");
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"Lower bounds for Weil heights of algebraic numbers with restricted local conjugates"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_flag("--bits", opt.bits, "Show logarithms in bits (text output only)");
    app.add_option("--tol", opt.tol, "Quadrature tolerance");
    app.add_option("--threads", opt.threads, "Worker threads, 0 for all cores (HEIGHTS_THREADS overrides)");
    app.add_option("--seed", opt.seed, "Seed for sampled corpora");

    auto* constants = app.add_subcommand("constants", "Archimedean and p-adic constants");
    constants->add_flag("--arch", opt.arch, "c1, c2, zeta(3) and the real-line Robin constant");
    constants->add_option("--padic", opt.padic, "Robin constants of the field with invariants p e f")->expected(3);
    constants->add_flag("--all", opt.all, "Everything available");
    constants->add_option("--depth", opt.depth, "n for the neighbourhood Robin constants");

    auto* bound = app.add_subcommand("bound", "Degree-dependent lower bound with per-place breakdown");
    add_spec_options(bound, opt);
    bound->add_option("--degree", opt.degree, "Degree d")->required();
    bound->add_option("--class", opt.cls, "g, i or u");
    bound->add_option("--weights", opt.weights, "Comma-separated place weights (real place first)");

    auto* floor = app.add_subcommand("floor", "Degree-free height floor");
    add_spec_options(floor, opt);
    floor->add_option("--class", opt.cls, "g, i, u or any")->default_val("any");

    auto* verify = app.add_subcommand("verify", "Check heights of a corpus against every applicable bound");
    add_spec_options(verify, opt);
    verify->add_option("--min-degree", opt.min_degree, "Smallest degree");
    verify->add_option("--max-degree", opt.max_degree, "Largest degree")->required();
    verify->add_option("--coeff-bound", opt.coeff_bound, "Largest |coefficient|")->required();
    verify->add_flag("--monic", opt.monic, "Monic polynomials only");
    verify->add_flag("--units", opt.units, "Units only");
    verify->add_option("--sample", opt.sample, "Draw this many seeded candidates instead of enumerating");
    verify->add_option("--out", opt.out, "Write records here (CSV with --format csv, JSON otherwise)");
    verify->add_option("--class", opt.class_filter, "Restrict to g, i or u");

    auto* pair = app.add_subcommand("pair", "Archimedean energy pairings");
    pair->add_option("--poly", opt.poly, "Coefficients a_d,...,a_0");
    pair->add_option("--set", opt.set, "Real points x1,x2,...");
    pair->add_option("--eps", opt.eps, "Circle radius for --set");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (!(opt.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
        if (constants->parsed()) return cmd_constants(opt);
        if (bound->parsed()) return cmd_bound(opt);
        if (floor->parsed()) return cmd_floor(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (pair->parsed()) return cmd_pair(opt);
    } catch (const heightbounds::search_exhausted& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExhausted;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDomain;
    }
    return kUsage;
}
