#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/lattice_recursion.hpp"
#include "qwdirac/cli.hpp"
#include "qwdirac/errors.hpp"
#include "qwdirac/spectrum.hpp"
#include "qwdirac/trig.hpp"
#include "qwdirac/verify.hpp"
#include "support/schema_check.hpp"

using namespace qwd;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool passed = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double time_limit;
    std::function<Verdict()> body;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

Verdict from_verify(Suite suite, const std::set<std::string>& names, int min_cases) {
    const VerifyReport report = run_verify(suite);
    Verdict v{true, ""};
    std::size_t seen = 0;
    for (const PropertyResult& p : report.properties) {
        if (!names.contains(p.property)) continue;
        ++seen;
        const bool ok = p.passed && p.cases >= min_cases;
        v.passed = v.passed && ok;
        v.detail += fmt("%s%s %d cases worst %.3g (<= %.3g)%s", v.detail.empty() ? "" : "; ", p.property.c_str(),
                        p.cases, p.worst_defect, p.threshold, ok ? "" : " FAIL");
    }
    if (seen != names.size()) {
        v.passed = false;
        v.detail += "; missing properties";
    }
    return v;
}

double gap(const VectorSolution& y, const oracle::Marched& m) {
    double worst = 0.0;
    for (int k = 0; k <= y.grid().depth(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        worst = std::max({worst, std::abs(y.y1(k) - m.y1[i]), std::abs(y.y2(k) - m.y2[i])});
    }
    return worst;
}

PicardOptions tight() {
    PicardOptions o;
    o.tol = 1e-12;
    return o;
}

Verdict solver_oracles() {
    std::mt19937_64 rng(314159);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double qs[] = {0.3, 0.5, 0.7};
    const double omegas[] = {0.1, 0.5, 1.0};
    double worst_free = 0.0;
    for (int i = 0; i < 50; ++i) {
        const HahnParams p(qs[i % 3], omegas[(i / 3) % 3]);
        const double c1 = unit(rng);
        const double c2 = unit(rng);
        const double lambda = 3.0 * unit(rng);
        const double x = p.omega0() + 1.5 + unit(rng);
        const VectorSolution y = picard_solve(Potentials::zero(), c1, c2, lambda, x, p, tight());
        for (int k = 0; k <= y.grid().depth(); ++k) {
            const oracle::Pair ref = oracle::free_solution(c1, c2, y.grid()[k], lambda, p.q(), p.omega());
            worst_free = std::max({worst_free, std::abs(y.y1(k) - ref.y1), std::abs(y.y2(k) - ref.y2)});
        }
    }
    double worst_march = 0.0;
    PicardOptions deep = tight();
    deep.depth = 40;
    for (int i = 0; i < 20; ++i) {
        const HahnParams p(qs[i % 3], omegas[(i / 3) % 3]);
        const double c1 = unit(rng);
        const double c2 = unit(rng);
        const double lambda = 2.0 * unit(rng);
        const double x = p.omega0() + 1.5 + unit(rng);
        const Polynomial pp = i % 2 == 0 ? Polynomial({unit(rng)}) : Polynomial({unit(rng), 0.5 * unit(rng), 0.2 * unit(rng)});
        const Polynomial rr = i % 2 == 0 ? Polynomial({unit(rng)}) : Polynomial({unit(rng), 0.5 * unit(rng)});
        const VectorSolution y = picard_solve(Potentials::polynomial(pp, rr, p), c1, c2, lambda, x, p, deep);
        const oracle::Marched m = oracle::march([&pp](double t) { return pp(t); }, [&rr](double t) { return rr(t); },
                                                c1, c2, lambda, x, p.q(), p.omega(), 40);
        worst_march = std::max(worst_march, gap(y, m));
    }
    return {worst_free <= 1e-10 && worst_march <= 1e-9,
            fmt("free closed form 50 cases max |diff| %.3g (<= 1e-10); lattice march 20 potentials depth 40 max |diff| "
                "%.3g (<= 1e-9)",
                worst_free, worst_march)};
}

Verdict wronskian_constancy() {
    std::mt19937_64 rng(271828);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double qs[] = {0.3, 0.5, 0.7};
    double worst_pair = 0.0;
    double worst_free = 0.0;
    for (int i = 0; i < 30; ++i) {
        const HahnParams p(qs[i % 3], 0.5);
        const Potentials pot = i % 2 == 0 ? Potentials::constant(unit(rng), unit(rng))
                                          : Potentials::polynomial(Polynomial({unit(rng), 0.3 * unit(rng)}),
                                                                   Polynomial({unit(rng)}), p);
        const double lambda = 3.0 * unit(rng);
        const double x = p.omega0() + 1.5 + unit(rng);
        const VectorSolution y = picard_solve(pot, unit(rng), unit(rng), lambda, x, p, tight());
        const VectorSolution z = picard_solve(pot, unit(rng), unit(rng), lambda, x, p, tight());
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int k = 1; k <= y.grid().depth(); ++k) {
            lo = std::min(lo, wronskian_at(y, z, k));
            hi = std::max(hi, wronskian_at(y, z, k));
        }
        worst_pair = std::max(worst_pair, (hi - lo) / (1.0 + std::abs(hi)));

        const VectorSolution a = picard_solve(Potentials::zero(), 1.0, 0.0, lambda, x, p, tight());
        const VectorSolution b = picard_solve(Potentials::zero(), 0.0, 1.0, lambda, x, p, tight());
        for (int k = 1; k <= a.grid().depth(); ++k) worst_free = std::max(worst_free, std::abs(wronskian_at(a, b, k) - 1.0));
    }
    return {worst_pair <= 1e-8 && worst_free <= 1e-9,
            fmt("30 pairs max spread %.3g (<= 1e-8 (1+|W|)); free pair max |W - 1| %.3g (<= 1e-9)", worst_pair,
                worst_free)};
}

const HahnParams& example_params() {
    static const HahnParams p(0.5, 0.5);
    return p;
}

SpectrumResult example(ExampleProblem which, int n_max) {
    return find_eigenvalues(n_max, example_boundary(which, kPi), Potentials::zero(), example_params());
}

// Deviation from the asymptotic formula and consecutive-ratio test, n = 1..6.
Verdict asymptotics(ExampleProblem which, std::string& detail_out) {
    const double q = example_params().q();
    const SpectrumResult r = example(which, 6);
    bool ok = r.eigenvalues.size() == 6;
    std::string failed;
    double worst_dev = 0.0;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        const double asym = asymptotic_eigenvalue(n, which, example_params(), kPi);
        const double dev = std::abs(r.eigenvalues[i].lambda / asym - 1.0) / (5.0 * std::pow(q, n));
        worst_dev = std::max(worst_dev, dev);
        if (dev > 1.0) {
            ok = false;
            failed += fmt(" asym@n=%d", n);
        }
        if (i + 1 < r.eigenvalues.size()) {
            const double ratio = r.eigenvalues[i + 1].lambda / r.eigenvalues[i].lambda;
            const double scaled = std::abs(ratio - 1.0 / q) / (0.2 * std::pow(q, n) / q);
            worst_ratio = std::max(worst_ratio, scaled);
            if (scaled > 1.0) {
                ok = false;
                failed += fmt(" ratio@n=%d(%.4g)", n, ratio);
            }
        }
    }
    bool budget = false;
    try {
        (void)example(which, 9);
    } catch (const PrecisionBudgetExceeded&) {
        budget = true;
    }
    ok = ok && budget;
    detail_out = fmt("worst |l/l_asym-1|/(5q^n) %.3g, worst ratio defect/bound %.3g, n=9 budget %s", worst_dev,
                     worst_ratio, budget ? "enforced" : "NOT enforced");
    if (!failed.empty()) detail_out += "; over bound:" + failed;
    return {ok, detail_out};
}

Verdict example_32() {
    std::string detail;
    return asymptotics(ExampleProblem::cosine_family, detail);
}

Verdict example_33() {
    std::string detail;
    Verdict v = asymptotics(ExampleProblem::sine_family, detail);
    const double q = example_params().q();
    const SpectrumResult a = example(ExampleProblem::cosine_family, 6);
    const SpectrumResult b = example(ExampleProblem::sine_family, 6);
    std::string failed;
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min(a.eigenvalues.size(), b.eigenvalues.size()); ++i) {
        const int n = static_cast<int>(i) + 1;
        const double ratio = b.eigenvalues[i].lambda / a.eigenvalues[i].lambda;
        const double scaled = std::abs(ratio - 1.0 / std::sqrt(q)) / (0.2 * std::pow(q, n));
        worst = std::max(worst, scaled);
        if (scaled > 1.0) {
            v.passed = false;
            failed += fmt(" n=%d(%.4g)", n, ratio);
        }
    }
    v.detail += fmt("; cross ratio worst defect/bound %.3g", worst);
    if (!failed.empty()) v.detail += ", over bound:" + failed;
    return v;
}

Verdict orthogonality() {
    const SpectrumResult r = example(ExampleProblem::cosine_family, 4);
    double worst = 0.0;
    for (const PairDefect& d : r.pair_orthogonality) worst = std::max(worst, d.defect);
    // Independent recomputation from the boundary-matched solutions.
    double recomputed = 0.0;
    std::vector<VectorSolution> phi;
    for (const EigenvalueReport& e : r.eigenvalues) {
        phi.push_back(phi_solution(e.lambda, r.bc, Potentials::zero(), example_params()));
    }
    int pairs = 0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        for (std::size_t j = i + 1; j < phi.size(); ++j, ++pairs) {
            recomputed = std::max(recomputed, orthogonality_defect(phi[i], phi[j], example_params(), kPi));
        }
    }
    const bool ok = r.pair_orthogonality.size() == 6 && pairs == 6 && worst <= 1e-6 && recomputed <= 1e-6;
    return {ok, fmt("%zu reported pairs worst %.3g, %d recomputed pairs worst %.3g (<= 1e-6)",
                    r.pair_orthogonality.size(), worst, pairs, recomputed)};
}

Verdict simplicity() {
    bool ok = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    int checked = 0;
    for (const ExampleProblem which : {ExampleProblem::cosine_family, ExampleProblem::sine_family}) {
        for (const EigenvalueReport& e : example(which, 6).eigenvalues) {
            ++checked;
            const double margin = std::abs(e.delta_prime) / (100.0 * e.derivative_noise);
            worst_margin = std::min(worst_margin, margin);
            ok = ok && e.sign_change && margin > 1.0 && e.simple;
        }
    }
    double worst_norm = 0.0;
    const SpectrumResult r = example(ExampleProblem::cosine_family, 3);
    for (const EigenvalueReport& e : r.eigenvalues) {
        worst_norm = std::max(worst_norm, norm_identity_defect(e.lambda, r.bc, Potentials::zero(), example_params()));
    }
    ok = ok && r.eigenvalues.size() == 3 && worst_norm <= 1e-5;
    return {ok, fmt("%d eigenvalues with sign change, min |D'|/(100 noise) %.3g (> 1); norm identity n=1..3 worst %.3g "
                    "(<= 1e-5)",
                    checked, worst_margin, worst_norm)};
}

Verdict zero_asymptotics() {
    const HahnParams p(0.5, 1.0);
    const double q = p.q();
    bool ok = true;
    double worst = 0.0;
    int mismatched = 0;
    for (int n = 1; n <= 6; ++n) {
        for (const TrigKind kind : {TrigKind::sine, TrigKind::cosine}) {
            const ZeroReport z = trig_zero(n, kind, p);
            const double exponent = kind == TrigKind::sine ? -n : -n + 0.5;
            const double asym_offset = std::pow(q, exponent) / (1.0 - q);
            const double dev = std::abs((z.location - p.omega0()) / asym_offset - 1.0) / (5.0 * std::pow(q, n));
            worst = std::max(worst, dev);
            ok = ok && dev <= 1.0 && z.bracket_lo < z.location && z.location < z.bracket_hi;
            const ZeroSeed expected = kind == TrigKind::sine ? ZeroSeed::q_pow_minus_n : ZeroSeed::q_pow_minus_n_plus_half;
            mismatched += z.matched_seed != expected;
        }
    }
    ok = ok && mismatched == 0;
    return {ok, fmt("12 zeros worst |offset/asym-1|/(5q^n) %.3g; seed pairing mismatches %d", worst, mismatched)};
}

int cli(const std::vector<std::string>& args, std::string& out) {
    std::vector<const char*> argv{"qwdirac"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o;
    std::ostringstream e;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
    out = o.str();
    return code;
}

Verdict cli_determinism() {
    std::string first;
    std::string second;
    std::string verify_out;
    const int c1 = cli({"spectrum", "--example", "3.2", "--format", "json"}, first);
    const int c2 = cli({"spectrum", "--example", "3.2", "--format", "json"}, second);
    const int cv = cli({"verify", "all"}, verify_out);
    std::ifstream in(QWD_SCHEMA_PATH);
    const qwd::testing::SchemaCheck schema(nlohmann::json::parse(in));
    const auto errors = schema.errors(nlohmann::json::parse(first));
    const bool ok = c1 == 0 && c2 == 0 && first == second && errors.empty() && cv == 0;
    return {ok, fmt("spectrum exits %d/%d, byte-identical %s, schema errors %zu, verify all exits %d", c1, c2,
                    first == second ? "yes" : "no", errors.size(), cv)};
}

std::set<int> parse_ids(const std::string& text) {
    std::set<int> ids;
    std::istringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        if (!item.empty()) ids.insert(std::stoi(item));
    }
    return ids;
}

}  // namespace

int main(int argc, char** argv) {
    // --expect-fail 5,6 turns the exit status into "exactly these criteria failed".
    std::set<int> expected;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--expect-fail") expected = parse_ids(argv[i + 1]);
    }

    const std::vector<Criterion> criteria = {
        {1, "calculus identities", 10.0,
         [] {
             return from_verify(Suite::calculus, {"product_rule", "ftc_forward", "ftc_backward", "integration_by_parts"},
                                200);
         }},
        {2, "trig structure", 10.0,
         [] {
             return from_verify(Suite::trig,
                                {"values_at_fixed_point", "derivative_identity_sine", "derivative_identity_cosine",
                                 "ivp_cosine", "ivp_sine"},
                                100);
         }},
        {3, "solver oracle equivalence", 30.0, solver_oracles},
        {4, "wronskian constancy", std::numeric_limits<double>::infinity(), wronskian_constancy},
        {5, "cosine-family eigenvalue asymptotics", 60.0, example_32},
        {6, "sine-family eigenvalue asymptotics", 60.0, example_33},
        {7, "orthogonality", std::numeric_limits<double>::infinity(), orthogonality},
        {8, "simplicity and norm identity", std::numeric_limits<double>::infinity(), simplicity},
        {9, "zero asymptotics and seed pairing", std::numeric_limits<double>::infinity(), zero_asymptotics},
        {10, "CLI determinism and schema", std::numeric_limits<double>::infinity(), cli_determinism},
    };

    std::set<int> failed;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.body();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds >= c.time_limit) {
            v.passed = false;
            v.detail += fmt("; runtime over %.0f s", c.time_limit);
        }
        if (!v.passed) failed.insert(c.id);
        std::printf("criterion %2d %s: %s [%.2f s] %s\n", c.id, v.passed ? "PASS" : "FAIL", c.title.c_str(), seconds,
                    v.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed.size(), criteria.size());
    if (!expected.empty()) {
        if (failed != expected) {
            std::printf("failing set differs from the expected set\n");
            return 1;
        }
        return 0;
    }
    return failed.empty() ? 0 : 1;
}
