#include "qwdirac/trig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qwdirac/errors.hpp"
#include "qwdirac/summation.hpp"

namespace qwd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr long kMaxTerms = 200000;

}  // namespace

std::string_view to_string(TrigKind kind) noexcept { return kind == TrigKind::cosine ? "cos" : "sin"; }

std::string_view to_string(ZeroSeed seed) noexcept {
    return seed == ZeroSeed::q_pow_minus_n ? "q^-n" : "q^(-n+1/2)";
}

double combined_argument(double t, double mu, const HahnParams& params) noexcept {
    return mu * ((1.0 - params.q()) * (t - params.omega0()));
}

TrigEval evaluate_trig_series(TrigKind kind, double z, double q, double tol) {
    if (!(tol > 0.0)) {
        throw InvalidParameter("series tolerance must be > 0");
    }
    const double z2 = z * z;
    // term_{n+1} / term_n = -q^{2n+1+s} z^2 / ((1 - q^{2n+1+s})(1 - q^{2n+2+s})), s = 0 (cos) or 1 (sin)
    const int shift = kind == TrigKind::cosine ? 0 : 1;
    double term = kind == TrigKind::cosine ? 1.0 : z / (1.0 - q);
    double q_odd = std::pow(q, 1 + shift);  // q^{2n+1+s} at n = 0

    CompensatedSum sum;
    TrigEval out;
    for (long n = 0; n < kMaxTerms; ++n) {
        sum.add(term);
        const double q_even = q_odd * q;
        const double ratio = -q_odd * z2 / ((1.0 - q_odd) * (1.0 - q_even));
        const double next = term * ratio;
        if (!std::isfinite(next) || !std::isfinite(sum.value())) {
            out.value = std::numeric_limits<double>::quiet_NaN();
            out.terms_used = n + 1;
            out.cancellation = std::numeric_limits<double>::infinity();
            out.est_abs_error = std::numeric_limits<double>::infinity();
            out.abs_sum = std::numeric_limits<double>::infinity();
            out.precision_lost = true;
            return out;
        }
        // |ratio| decreases in n, so |ratio| < 1 marks the terminal monotone decrease.
        if (std::abs(ratio) < 1.0) {
            const double partial = std::abs(sum.value());
            const double mag = std::abs(next);
            if (mag == 0.0 || mag < tol * partial || mag < 0.25 * kEps * sum.abs_sum()) {
                out.value = sum.value();
                out.terms_used = n + 1;
                out.abs_sum = sum.abs_sum();
                out.cancellation = sum.condition();
                out.est_abs_error = mag + static_cast<double>(n + 3) * kEps * sum.abs_sum();
                out.precision_lost = 16.0 * kEps * out.cancellation >= 1.0;
                return out;
            }
        }
        term = next;
        q_odd = q_even * q;
    }
    throw SeriesDivergence("q,omega-trig series did not terminate within " + std::to_string(kMaxTerms) + " terms");
}

namespace {

TrigEval checked(TrigKind kind, double t, double mu, const HahnParams& params, double tol) {
    const double z = combined_argument(t, mu, params);
    TrigEval eval = evaluate_trig_series(kind, z, params.q(), tol);
    if (eval.precision_lost) {
        throw PrecisionLoss(std::string(to_string(kind)) + "_qw at combined argument " + std::to_string(z) +
                            (std::isfinite(eval.abs_sum) ? ": cancellation " + std::to_string(eval.cancellation) +
                                                               " leaves no trustworthy digits"
                                                         : ": a series term overflowed"));
    }
    return eval;
}

}  // namespace

TrigEval cos_qw(double t, double mu, const HahnParams& params, double tol) {
    return checked(TrigKind::cosine, t, mu, params, tol);
}

TrigEval sin_qw(double t, double mu, const HahnParams& params, double tol) {
    return checked(TrigKind::sine, t, mu, params, tol);
}

double trig_value(TrigKind kind, double t, double mu, const HahnParams& params, double tol) {
    return checked(kind, t, mu, params, tol).value;
}

ZeroReport trig_zero_argument(int n, TrigKind kind, double q, double tol) {
    if (n < 1) {
        throw InvalidParameter("zero index n must be >= 1");
    }
    if (!(q > 0.0 && q < 1.0)) {
        throw InvalidParameter("q must lie in the open interval (0,1)");
    }
    const double seed_n = std::pow(q, -n);
    const double seed_half = std::pow(q, -n + 0.5);

    auto eval = [&](double z) { return evaluate_trig_series(kind, z, q, kDefaultSeriesTol); };

    // Count sign changes upward from z ~ 0. The first zeros can sit far below
    // either asymptotic seed (34% below for the first cosine zero at q = 0.5),
    // so windows centred on the seeds alone are not reliable.
    const double ratio = std::max(std::pow(q, -1.0 / 64.0), 1.002);
    const double z_limit = 4.0 * std::max(seed_n / q, (n + 1) * std::numbers::pi * (1.0 - q));
    double z_lo = 0.05 * (1.0 - q);
    TrigEval f_lo = eval(z_lo);
    int found = 0;
    double z_hi = z_lo;
    TrigEval f_hi = f_lo;
    while (true) {
        z_hi = z_lo * ratio;
        if (z_hi > z_limit) {
            throw ZeroNotBracketed("only " + std::to_string(found) + " sign changes of " + std::string(to_string(kind)) +
                                   " found below z = " + std::to_string(z_limit));
        }
        f_hi = eval(z_hi);
        if (f_hi.precision_lost && !std::isfinite(f_hi.abs_sum)) {
            throw PrecisionLoss("series overflowed while scanning for zero " + std::to_string(n));
        }
        if (f_hi.value == 0.0 || std::signbit(f_hi.value) != std::signbit(f_lo.value)) {
            if (++found == n) {
                break;
            }
        }
        z_lo = z_hi;
        f_lo = f_hi;
    }

    ZeroReport report;
    report.n = n;
    report.kind = kind;
    double lo = z_lo;
    double hi = z_hi;
    double v_lo = f_lo.value;
    if (f_hi.value == 0.0) {
        lo = hi;
    }
    while (hi - lo > tol * lo) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        const TrigEval f_mid = eval(mid);
        if (f_mid.precision_lost || f_mid.value == 0.0) {
            // Sign is noise-dominated: mid is a zero to working precision.
            lo = hi = mid;
            break;
        }
        if (std::signbit(f_mid.value) == std::signbit(v_lo)) {
            lo = mid;
            v_lo = f_mid.value;
        } else {
            hi = mid;
        }
    }
    const double root = 0.5 * (lo + hi);
    const TrigEval at_root = eval(root);
    report.argument = root;
    report.bracket_lo = z_lo;
    report.bracket_hi = z_hi;
    report.value_lo = f_lo.value;
    report.value_hi = f_hi.value;
    report.residual = std::abs(at_root.value);
    report.normalized_residual = at_root.abs_sum > 0.0 ? report.residual / at_root.abs_sum : 0.0;
    report.deviation_from_q_pow_minus_n = root / seed_n - 1.0;
    report.deviation_from_q_pow_minus_n_plus_half = root / seed_half - 1.0;
    report.matched_seed = std::abs(std::log(root / seed_n)) <= std::abs(std::log(root / seed_half))
                              ? ZeroSeed::q_pow_minus_n
                              : ZeroSeed::q_pow_minus_n_plus_half;
    report.location = root;
    return report;
}

ZeroReport trig_zero(int n, TrigKind kind, const HahnParams& params, double tol) {
    ZeroReport report = trig_zero_argument(n, kind, params.q(), tol);
    const double scale = 1.0 - params.q();
    report.location = params.omega0() + report.argument / scale;
    report.bracket_lo = params.omega0() + report.bracket_lo / scale;
    report.bracket_hi = params.omega0() + report.bracket_hi / scale;
    return report;
}

}  // namespace qwd
