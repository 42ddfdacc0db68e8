#include "qwdirac/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "qwdirac/dirac.hpp"
#include "qwdirac/errors.hpp"
#include "qwdirac/hahn.hpp"
#include "qwdirac/spectrum.hpp"
#include "qwdirac/trig.hpp"

namespace qwd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::array<double, 3> kQs = {0.3, 0.5, 0.7};
constexpr std::array<double, 3> kOmegas = {0.1, 0.5, 1.0};
// Identity checks sum series until the terms drop below rounding.
constexpr double kFullPrecision = 1e-16;

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    HahnParams params() {
        const double q = kQs[static_cast<std::size_t>(integer(0, 2))];
        const double omega = kOmegas[static_cast<std::size_t>(integer(0, 2))];
        return {q, omega};
    }

    Polynomial polynomial(int max_degree, double scale) {
        std::vector<double> c(static_cast<std::size_t>(integer(0, max_degree)) + 1);
        for (double& v : c) v = uniform(-scale, scale);
        return Polynomial(std::move(c));
    }

    Potentials potentials(const HahnParams& params, double scale) {
        if (integer(0, 1) == 0) {
            return Potentials::constant(uniform(-scale, scale), uniform(-scale, scale));
        }
        return Potentials::polynomial(polynomial(2, 0.5 * scale), polynomial(2, 0.5 * scale), params);
    }

private:
    std::mt19937_64 rng_;
};

std::uint64_t mix(std::uint64_t seed, std::string_view name) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (const char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return seed ^ h;
}

class PropertyRunner {
public:
    PropertyRunner(VerifyReport& report, std::string suite) : report_(report), suite_(std::move(suite)) {}

    // `check` returns the defect of one randomized case.
    void run(const std::string& name, double threshold, int cases, const std::function<double(Sampler&)>& check) {
        PropertyResult r;
        r.suite = suite_;
        r.property = name;
        r.threshold = threshold;
        r.passed = true;
        Sampler sampler(mix(report_.seed, suite_ + "/" + name));
        for (int i = 0; i < cases; ++i) {
            double defect = 0.0;
            try {
                defect = check(sampler);
            } catch (const Error& e) {
                r.passed = false;
                r.worst_defect = std::numeric_limits<double>::infinity();
                r.note = e.what();
                ++r.cases;
                continue;
            }
            ++r.cases;
            if (!(defect <= threshold)) {
                r.passed = false;
            }
            if (std::isnan(defect) || defect > r.worst_defect) {
                r.worst_defect = defect;
            }
        }
        report_.properties.push_back(std::move(r));
    }

private:
    VerifyReport& report_;
    std::string suite_;
};

double offset_point(Sampler& s, const HahnParams& params, double lo = 0.1, double hi = 3.0) {
    return params.omega0() + s.uniform(lo, hi);
}

// ---------------------------------------------------------------- calculus

void calculus_suite(VerifyReport& report) {
    PropertyRunner run(report, "calculus");
    constexpr int kCases = 200;

    run.run("product_rule", 1e-12, kCases, [](Sampler& s) {
        const HahnParams params = s.params();
        const Polynomial fp = s.polynomial(4, 2.0);
        const Polynomial gp = s.polynomial(4, 2.0);
        const RealFunction f = fp.as_function(params);
        const RealFunction g = gp.as_function(params);
        const double t = offset_point(s, params);
        const double ht = params.h(t);
        const double lhs = hahn_derivative(multiply(f, g), t, params);
        const double a = hahn_derivative(f, t, params) * g(t);
        const double b = f(ht) * hahn_derivative(g, t, params);
        const double step = std::abs((params.q() - 1.0) * (t - params.omega0()));
        const double noise = 4.0 * kEps * (std::abs(f(t) * g(t)) + std::abs(f(ht) * g(ht))) / step;
        return std::abs(lhs - (a + b)) / (std::abs(lhs) + std::abs(a) + std::abs(b) + noise);
    });

    run.run("ftc_forward", 1e-10, kCases, [](Sampler& s) {
        const HahnParams params = s.params();
        const RealFunction f = s.polynomial(4, 2.0).as_function(params);
        const double x = offset_point(s, params);
        const SeriesSum fx = jn_integral_from_fixed_point(f, x, params, 1e-16);
        const SeriesSum fhx = jn_integral_from_fixed_point(f, params.h(x), params, 1e-16);
        const double step = (params.q() - 1.0) * (x - params.omega0());
        const double derivative = (fhx.value - fx.value) / step;
        const double noise =
            8.0 * kEps * (fx.condition * std::abs(fx.value) + fhx.condition * std::abs(fhx.value)) / std::abs(step);
        return std::abs(derivative - f(x)) / (std::abs(f(x)) + noise);
    });

    run.run("ftc_backward", 1e-10, kCases, [](Sampler& s) {
        const HahnParams params = s.params();
        const Polynomial fp = s.polynomial(4, 2.0);
        const RealFunction f = fp.as_function(params);
        const RealFunction df{[f, params](double t) { return hahn_derivative(f, t, params); }, std::nullopt};
        const double a = offset_point(s, params, 0.0, 3.0);
        const double b = offset_point(s, params, 0.0, 3.0);
        const double lhs = jn_integral(df, a, b, params, 1e-16);
        const double rhs = f(b) - f(a);
        return std::abs(lhs - rhs) / (std::abs(f(a)) + std::abs(f(b)) + std::abs(f(params.omega0())));
    });

    run.run("integration_by_parts", 1e-9, kCases, [](Sampler& s) {
        const HahnParams params = s.params();
        const RealFunction f = s.polynomial(3, 2.0).as_function(params);
        const RealFunction g = s.polynomial(3, 2.0).as_function(params);
        const RealFunction f_dg{[f, g, params](double t) { return f(t) * hahn_derivative(g, t, params); },
                                std::nullopt};
        const RealFunction df_hg{
            [f, g, params](double t) { return hahn_derivative(f, t, params) * g(params.h(t)); }, std::nullopt};
        const double a = offset_point(s, params, 0.0, 3.0);
        const double b = offset_point(s, params, 0.0, 3.0);
        const double lhs = jn_integral(f_dg, a, b, params, 1e-16);
        const double second = jn_integral(df_hg, a, b, params, 1e-16);
        const double boundary = f(b) * g(b) - f(a) * g(a);
        const double scale = std::abs(f(b) * g(b)) + std::abs(f(a) * g(a)) + std::abs(lhs) + std::abs(second);
        return std::abs(lhs - (boundary - second)) / scale;
    });

    run.run("dual_identity", 0.0, kCases, [](Sampler& s) {
        const HahnParams params = s.params();
        const RealFunction f = s.polynomial(4, 2.0).as_function(params);
        const double t = offset_point(s, params);
        return std::abs(dual_derivative(f, t, params) - hahn_derivative(f, params.h_inv(t), params));
    });

    run.run("jackson_limit", 1e-5, 50, [](Sampler& s) {
        const double q = kQs[static_cast<std::size_t>(s.integer(0, 2))];
        const HahnParams params(q, 1e-8);
        const Polynomial fp = s.polynomial(4, 2.0);
        const RealFunction f = fp.as_function(params);
        const double t = s.uniform(0.5, 3.0);
        const double jackson = (fp(q * t) - fp(t)) / (t * (q - 1.0));
        const double hahn = hahn_derivative(f, t, params);
        return std::abs(hahn - jackson) / (std::abs(jackson) + std::abs(fp(t)) / t);
    });

    run.run("fixed_point_derivative", 1e-7, kCases, [](Sampler& s) {
        const HahnParams params = s.params();
        const Polynomial fp = s.polynomial(4, 2.0);
        const RealFunction undeclared{[fp](double t) { return fp(t); }, std::nullopt};
        const double estimate = hahn_derivative(undeclared, params.omega0(), params);
        const double exact = fp.derivative(params.omega0());
        return std::abs(estimate - exact) / (1.0 + std::abs(exact));
    });
}

// -------------------------------------------------------------------- trig

struct TrigPoint {
    HahnParams params;
    double t;
    double mu;
};

TrigPoint trig_point(Sampler& s) {
    const HahnParams params = s.params();
    return {params, offset_point(s, params, 0.05, 4.0), s.uniform(-3.0, 3.0)};
}

RealFunction trig_function(TrigKind kind, double mu, const HahnParams& params) {
    return RealFunction{[=](double t) {
                            return evaluate_trig_series(kind, combined_argument(t, mu, params), params.q(), kFullPrecision).value;
                        },
                        std::nullopt};
}

TrigEval trig_eval(TrigKind kind, double t, double mu, const HahnParams& params) {
    return evaluate_trig_series(kind, combined_argument(t, mu, params), params.q(), kFullPrecision);
}

// Relative defect of -(1/q) D_{1/q,-omega/q} D_{q,omega} y = mu^2 y at the lattice point with offset
// `off` = t - omega0, against the series' own error estimates. The three lattice points are built in
// offset form so that they lie on one h-orbit to rounding.
double ivp_defect(TrigKind kind, double off, double mu, double q, double threshold) {
    const double back_off = off / q;
    const double fwd_off = q * off;
    const auto y = [&](double o) { return evaluate_trig_series(kind, mu * (1.0 - q) * o, q, kFullPrecision); };
    const TrigEval y_back = y(back_off);
    const TrigEval y_here = y(off);
    const TrigEval y_fwd = y(fwd_off);
    const double d_here = (y_fwd.value - y_here.value) / ((q - 1.0) * off);
    const double d_back = (y_here.value - y_back.value) / ((q - 1.0) * back_off);
    const double second = -(d_here - d_back) / ((q - 1.0) * back_off) / q;
    const double denom = q * (1.0 - q) * off * (1.0 - q) * back_off;
    const double noise = 2.0 * (y_back.est_abs_error + y_here.est_abs_error + y_fwd.est_abs_error) / std::abs(denom) +
                         4.0 * kEps * (std::abs(d_here) + std::abs(d_back)) / std::abs(q * (1.0 - q) * back_off);
    return std::abs(second - mu * mu * y_here.value) / (mu * mu * std::abs(y_here.value) + noise / threshold);
}

void trig_suite(VerifyReport& report) {
    PropertyRunner run(report, "trig");
    constexpr int kCases = 100;

    run.run("values_at_fixed_point", 0.0, kCases, [](Sampler& s) {
        const HahnParams params = s.params();
        const double mu = s.uniform(-50.0, 50.0);
        const double c = cos_qw(params.omega0(), mu, params).value;
        const double sn = sin_qw(params.omega0(), mu, params).value;
        return std::abs(c - 1.0) + std::abs(sn);
    });

    const auto derivative_check = [](TrigKind kind) {
        return [kind](Sampler& s) {
            const TrigPoint p = trig_point(s);
            const double sq = std::sqrt(p.params.q());
            const double lhs = hahn_derivative(trig_function(kind, p.mu, p.params), p.t, p.params);
            const TrigKind other = kind == TrigKind::sine ? TrigKind::cosine : TrigKind::sine;
            const TrigEval partner = trig_eval(other, p.t, sq * p.mu, p.params);
            const double factor = kind == TrigKind::sine ? p.mu : -sq * p.mu;
            const double rhs = factor * partner.value;
            const double step = std::abs((p.params.q() - 1.0) * (p.t - p.params.omega0()));
            const double noise = 2.0 *
                                 (trig_eval(kind, p.t, p.mu, p.params).est_abs_error +
                                  trig_eval(kind, p.params.h(p.t), p.mu, p.params).est_abs_error) / step +
                                 std::abs(factor) * partner.est_abs_error;
            return std::abs(lhs - rhs) / (std::max(std::abs(lhs), std::abs(rhs)) + noise);
        };
    };
    run.run("derivative_identity_sine", 1e-9, kCases, derivative_check(TrigKind::sine));
    run.run("derivative_identity_cosine", 1e-9, kCases, derivative_check(TrigKind::cosine));

    const auto ivp_check = [](TrigKind kind, double threshold) {
        return [kind, threshold](Sampler& s) {
            const HahnParams params = s.params();
            const double mu = s.uniform(-3.0, 3.0);
            double off = s.uniform(0.5, 3.0);
            double worst = 0.0;
            for (int k = 0; k <= 6; ++k, off *= params.q()) {
                worst = std::max(worst, ivp_defect(kind, off, mu, params.q(), threshold));
            }
            return worst;
        };
    };
    run.run("ivp_cosine", 1e-8, kCases, ivp_check(TrigKind::cosine, 1e-8));
    run.run("ivp_sine", 1e-8, kCases, ivp_check(TrigKind::sine, 1e-8));

    run.run("initial_slopes", 1e-8, kCases, [](Sampler& s) {
        const HahnParams params = s.params();
        const double mu = s.uniform(-3.0, 3.0);
        const double dc = hahn_derivative(trig_function(TrigKind::cosine, mu, params), params.omega0(), params);
        const double ds = hahn_derivative(trig_function(TrigKind::sine, mu, params), params.omega0(), params);
        return std::max(std::abs(dc), std::abs(ds - mu)) / (1.0 + std::abs(mu));
    });

    run.run("zero_spacing", 5.0, 2, [](Sampler& s) {
        const TrigKind kind = s.integer(0, 1) == 0 ? TrigKind::sine : TrigKind::cosine;
        const HahnParams params(0.5, 1.0);
        double worst = 0.0;
        double prev = trig_zero(1, kind, params).location - params.omega0();
        for (int n = 1; n <= 6; ++n) {
            const double next = trig_zero(n + 1, kind, params).location - params.omega0();
            worst = std::max(worst, std::abs(next / prev * params.q() - 1.0) / std::pow(params.q(), n));
            prev = next;
        }
        return worst;
    });

    run.run("zero_seed_pairing", 0.0, 1, [](Sampler&) {
        const HahnParams params(0.5, 1.0);
        double mismatches = 0.0;
        for (int n = 1; n <= 6; ++n) {
            mismatches += trig_zero(n, TrigKind::sine, params).matched_seed != ZeroSeed::q_pow_minus_n;
            mismatches += trig_zero(n, TrigKind::cosine, params).matched_seed != ZeroSeed::q_pow_minus_n_plus_half;
        }
        return mismatches;
    });

    run.run("tail_estimate_bounds_error", 1.0, kCases, [](Sampler& s) {
        const double q = kQs[static_cast<std::size_t>(s.integer(0, 2))];
        const double z = s.uniform(-20.0, 20.0);
        const double tol = std::array{1e-6, 1e-9, 1e-12}[static_cast<std::size_t>(s.integer(0, 2))];
        const TrigKind kind = s.integer(0, 1) == 0 ? TrigKind::sine : TrigKind::cosine;
        const TrigEval coarse = evaluate_trig_series(kind, z, q, tol);
        const TrigEval fine = evaluate_trig_series(kind, z, q, 0.5 * tol);
        return std::abs(coarse.value - fine.value) / coarse.est_abs_error;
    });
}

// ------------------------------------------------------------------ solver

// Pointwise marching of the two lattice difference equations from t_K up to t_0.
std::pair<std::vector<double>, std::vector<double>> march(const Potentials& pot, double c1, double c2, double lambda,
                                                          const LatticeGrid& grid, double q) {
    const int depth = grid.depth();
    std::vector<double> y1(static_cast<std::size_t>(depth) + 1);
    std::vector<double> y2(y1.size());
    const double d = grid.offsets()[static_cast<std::size_t>(depth)];
    const double w0 = grid.omega0();
    y1.back() = c1 + d * (lambda - pot.r(w0)) * c2;
    y2.back() = c2 + d * q * (pot.p(w0) - lambda) * c1;
    for (int k = depth - 1; k >= 0; --k) {
        const auto i = static_cast<std::size_t>(k);
        y2[i] = y2[i + 1] + grid.weight(k) * q * (pot.p(grid[k + 1]) - lambda) * y1[i + 1];
        y1[i] = y1[i + 1] + grid.weight(k) * (lambda - pot.r(grid[k])) * y2[i];
    }
    return {y1, y2};
}

double max_gap(const VectorSolution& a, const VectorSolution& b) {
    double worst = 0.0;
    for (int k = 0; k <= a.grid().depth(); ++k) {
        const double scale = 1.0 + std::max(std::abs(a.y1(k)), std::abs(a.y2(k)));
        worst = std::max({worst, std::abs(a.y1(k) - b.y1(k)) / scale, std::abs(a.y2(k) - b.y2(k)) / scale});
    }
    return worst;
}

void solver_suite(VerifyReport& report) {
    PropertyRunner run(report, "solver");
    constexpr int kCases = 30;
    PicardOptions tight;
    tight.tol = 1e-12;

    run.run("free_closed_form", 1e-10, kCases, [](Sampler& s) {
        const HahnParams params = s.params();
        const double c1 = s.uniform(-1.0, 1.0);
        const double c2 = s.uniform(-1.0, 1.0);
        const double lambda = s.uniform(-3.0, 3.0);
        const VectorSolution y =
            picard_solve(Potentials::zero(), c1, c2, lambda, offset_point(s, params, 0.5, 3.0), params);
        double worst = 0.0;
        for (int k = 0; k <= y.grid().depth(); ++k) {
            const auto [f1, f2] = solve_free(c1, c2, y.grid()[k], lambda, params);
            worst = std::max({worst, std::abs(y.y1(k) - f1) / (1.0 + std::abs(f1)),
                              std::abs(y.y2(k) - f2) / (1.0 + std::abs(f2))});
        }
        return worst;
    });

    run.run("lattice_recursion_agreement", 1e-9, kCases, [&tight](Sampler& s) {
        const HahnParams params = s.params();
        const Potentials pot = s.potentials(params, 1.0);
        const double c1 = s.uniform(-1.0, 1.0);
        const double c2 = s.uniform(-1.0, 1.0);
        const double lambda = s.uniform(-3.0, 3.0);
        PicardOptions opt = tight;
        opt.depth = 40;
        const VectorSolution y = picard_solve(pot, c1, c2, lambda, offset_point(s, params, 0.5, 2.0), params, opt);
        const auto [m1, m2] = march(pot, c1, c2, lambda, y.grid(), params.q());
        double worst = 0.0;
        for (int k = 0; k <= y.grid().depth(); ++k) {
            const auto i = static_cast<std::size_t>(k);
            worst = std::max({worst, std::abs(y.y1(k) - m1[i]) / (1.0 + std::abs(m1[i])),
                              std::abs(y.y2(k) - m2[i]) / (1.0 + std::abs(m2[i]))});
        }
        return worst;
    });

    run.run("wronskian_constancy", 1e-8, kCases, [&tight](Sampler& s) {
        const HahnParams params = s.params();
        const Potentials pot = s.potentials(params, 1.0);
        const double lambda = s.uniform(-3.0, 3.0);
        const double x = offset_point(s, params, 0.5, 2.0);
        const VectorSolution y = picard_solve(pot, s.uniform(-1, 1), s.uniform(-1, 1), lambda, x, params, tight);
        const VectorSolution z = picard_solve(pot, s.uniform(-1, 1), s.uniform(-1, 1), lambda, x, params, tight);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int k = 1; k <= y.grid().depth(); ++k) {
            const double w = wronskian_at(y, z, k);
            lo = std::min(lo, w);
            hi = std::max(hi, w);
        }
        return (hi - lo) / (1.0 + std::abs(hi));
    });

    run.run("free_pair_wronskian", 1e-9, kCases, [](Sampler& s) {
        const HahnParams params = s.params();
        const double lambda = s.uniform(-2.0, 2.0);
        const double t = offset_point(s, params, 0.05, 2.0);
        const FundamentalMatrix here = fundamental_pair(t, lambda, params);
        const FundamentalMatrix back = fundamental_pair(params.h_inv(t), lambda, params);
        return std::abs(here.phi11 * back.phi22 - here.phi21 * back.phi12 - 1.0);
    });

    run.run("schedule_independence", 1e-9, kCases, [](Sampler& s) {
        const HahnParams params = s.params();
        const Potentials pot = s.potentials(params, 1.0);
        const double c1 = s.uniform(-1.0, 1.0);
        const double c2 = s.uniform(-1.0, 1.0);
        const double lambda = s.uniform(-3.0, 3.0);
        const double x = offset_point(s, params, 0.5, 2.0);
        PicardOptions coarse;
        coarse.tol = 1e-10;
        PicardOptions fine;
        fine.tol = 1e-11;
        return max_gap(picard_solve(pot, c1, c2, lambda, x, params, coarse),
                       picard_solve(pot, c1, c2, lambda, x, params, fine));
    });

    run.run("linearity", 1e-10, kCases, [&tight](Sampler& s) {
        const HahnParams params = s.params();
        const Potentials pot = s.potentials(params, 1.0);
        const double lambda = s.uniform(-3.0, 3.0);
        const double x = offset_point(s, params, 0.5, 2.0);
        const double a = s.uniform(-2.0, 2.0);
        const double b = s.uniform(-2.0, 2.0);
        const double u1 = s.uniform(-1, 1), u2 = s.uniform(-1, 1), v1 = s.uniform(-1, 1), v2 = s.uniform(-1, 1);
        const VectorSolution u = picard_solve(pot, u1, u2, lambda, x, params, tight);
        const VectorSolution v = picard_solve(pot, v1, v2, lambda, x, params, tight);
        const VectorSolution w = picard_solve(pot, a * u1 + b * v1, a * u2 + b * v2, lambda, x, params, tight);
        double worst = 0.0;
        for (int k = 0; k <= w.grid().depth(); ++k) {
            const double e1 = a * u.y1(k) + b * v.y1(k);
            const double e2 = a * u.y2(k) + b * v.y2(k);
            worst = std::max({worst, std::abs(w.y1(k) - e1) / (1.0 + std::abs(e1)),
                              std::abs(w.y2(k) - e2) / (1.0 + std::abs(e2))});
        }
        return worst;
    });

    run.run("four_kernel_agreement", 1e-9, kCases, [&tight](Sampler& s) {
        const HahnParams params = s.params();
        const Potentials pot = s.potentials(params, 1.0);
        const double c1 = s.uniform(-1.0, 1.0);
        const double c2 = s.uniform(-1.0, 1.0);
        const double lambda = s.uniform(-2.0, 2.0);
        const double x = offset_point(s, params, 0.5, 1.5);
        PicardOptions kernel = tight;
        kernel.form = PicardForm::four_kernel;
        return max_gap(picard_solve(pot, c1, c2, lambda, x, params, tight),
                       picard_solve(pot, c1, c2, lambda, x, params, kernel));
    });

    run.run("residual_perturbation", 1e-6, kCases, [](Sampler& s) {
        const HahnParams params = s.params();
        const Potentials pot = s.potentials(params, 1.0);
        const VectorSolution y = picard_solve(pot, s.uniform(-1, 1), s.uniform(-1, 1), s.uniform(-3, 3),
                                              offset_point(s, params, 0.5, 2.0), params);
        const int k = s.integer(1, 10);
        const double eps = 1e-6;
        const double t = y.grid()[k];
        const double before = residual_at(y, pot, k).second;
        const double after = residual_at(y.with_perturbed_y1(k, eps), pot, k).second;
        const double expected = -eps / ((params.q() - 1.0) * t + params.omega());
        return std::abs((after - before) - expected) / std::abs(expected);
    });

    run.run("continuity_at_fixed_point", 1e-10, kCases, [](Sampler& s) {
        const HahnParams params = s.params();
        const Potentials pot = s.potentials(params, 1.0);
        const double c1 = s.uniform(-1.0, 1.0);
        const double c2 = s.uniform(-1.0, 1.0);
        const VectorSolution y =
            picard_solve(pot, c1, c2, s.uniform(-3, 3), offset_point(s, params, 0.5, 2.0), params);
        const int last = y.grid().depth();
        return std::max(std::abs(y.y1(last) - c1), std::abs(y.y2(last) - c2)) /
               (1.0 + std::max(std::abs(c1), std::abs(c2)));
    });

    run.run("zero_potential_bound", 0.0, 5, [](Sampler& s) {
        const HahnParams params = s.params();
        const ConvergenceReport rep =
            convergence_bound(Potentials::zero(), s.uniform(-3, 3), offset_point(s, params, 0.5, 2.0), params);
        double worst = rep.radius_ok ? 0.0 : 1.0;
        for (const double term : rep.bound_terms) worst = std::max(worst, std::abs(term));
        return worst;
    });
}

// ---------------------------------------------------------------- spectral

constexpr double kExampleOmega = 0.5;
constexpr double kExampleQ = 0.5;

SpectrumResult example_spectrum(ExampleProblem example, int n_max) {
    const HahnParams params(kExampleQ, kExampleOmega);
    return find_eigenvalues(n_max, example_boundary(example, std::numbers::pi), Potentials::zero(), params);
}

void spectral_suite(VerifyReport& report) {
    PropertyRunner run(report, "spectral");

    const auto asymptotics = [](ExampleProblem example) {
        return [example](Sampler&) {
            const HahnParams params(kExampleQ, kExampleOmega);
            const SpectrumResult r = example_spectrum(example, 6);
            double worst = r.eigenvalues.size() == 6 ? 0.0 : std::numeric_limits<double>::infinity();
            for (const EigenvalueReport& e : r.eigenvalues) {
                const double seed = asymptotic_eigenvalue(e.n, example, params, std::numbers::pi);
                worst = std::max(worst, std::abs(e.lambda / seed - 1.0) / std::pow(kExampleQ, e.n));
            }
            return worst;
        };
    };
    run.run("asymptotics_cosine_family", 5.0, 1, asymptotics(ExampleProblem::cosine_family));
    run.run("asymptotics_sine_family", 5.0, 1, asymptotics(ExampleProblem::sine_family));

    run.run("precision_budget_enforced", 0.0, 1, [](Sampler&) {
        double missing = 0.0;
        for (const ExampleProblem ex : {ExampleProblem::cosine_family, ExampleProblem::sine_family}) {
            try {
                (void)example_spectrum(ex, 7);
                missing += 1.0;
            } catch (const PrecisionBudgetExceeded&) {
            }
        }
        return missing;
    });

    run.run("orthogonality_free", 1e-6, 1, [](Sampler&) {
        double worst = 0.0;
        for (const ExampleProblem ex : {ExampleProblem::cosine_family, ExampleProblem::sine_family}) {
            const SpectrumResult r = example_spectrum(ex, 4);
            for (const PairDefect& d : r.pair_orthogonality) worst = std::max(worst, d.defect);
        }
        return worst;
    });

    run.run("simplicity", 0.0, 1, [](Sampler&) {
        double failures = 0.0;
        for (const ExampleProblem ex : {ExampleProblem::cosine_family, ExampleProblem::sine_family}) {
            for (const EigenvalueReport& e : example_spectrum(ex, 6).eigenvalues) {
                failures += !(e.simple && e.sign_change);
            }
        }
        return failures;
    });

    run.run("norm_identity", 1e-5, 1, [](Sampler&) {
        const HahnParams params(kExampleQ, kExampleOmega);
        double worst = 0.0;
        for (const ExampleProblem ex : {ExampleProblem::cosine_family, ExampleProblem::sine_family}) {
            const BoundarySpec bc = example_boundary(ex, std::numbers::pi);
            for (const EigenvalueReport& e : example_spectrum(ex, 3).eigenvalues) {
                worst = std::max(worst, norm_identity_defect(e.lambda, bc, Potentials::zero(), params));
            }
        }
        return worst;
    });

    run.run("green_bracket", 1e-7, 20, [](Sampler& s) {
        const HahnParams params = s.params();
        const Potentials pot = s.potentials(params, 1.0);
        const double a = offset_point(s, params, 0.5, 2.0);
        const double x = params.h_inv(a);
        PicardOptions opt;
        opt.tol = 1e-12;
        const double lambda = s.uniform(-3.0, 3.0);
        const double mu = lambda + s.uniform(0.1, 2.0);
        const VectorSolution y = picard_solve(pot, s.uniform(-1, 1), s.uniform(-1, 1), lambda, x, params, opt);
        const VectorSolution z = picard_solve(pot, s.uniform(-1, 1), s.uniform(-1, 1), mu, x, params, opt);
        return green_bracket_defect(y, z, a);
    });

    run.run("orthogonality_polynomial_potential", 1e-5, 5, [](Sampler& s) {
        const HahnParams params(kExampleQ, kExampleOmega);
        const Potentials pot =
            Potentials::polynomial(s.polynomial(2, 0.5), s.polynomial(2, 0.5), params);
        const SpectrumResult r = find_eigenvalues(3, example_boundary(ExampleProblem::cosine_family, std::numbers::pi),
                                                  pot, params);
        double worst = r.eigenvalues.size() == 3 ? 0.0 : std::numeric_limits<double>::infinity();
        for (const PairDefect& d : r.pair_orthogonality) worst = std::max(worst, d.defect);
        return worst;
    });

    run.run("root_residual_within_refinement", 1.0, 5, [](Sampler& s) {
        const HahnParams params(kExampleQ, kExampleOmega);
        const Potentials pot =
            Potentials::polynomial(s.polynomial(2, 0.5), s.polynomial(2, 0.5), params);
        SpectrumOptions opt;
        const SpectrumResult r = find_eigenvalues(4, example_boundary(ExampleProblem::sine_family, std::numbers::pi),
                                                  pot, params, opt);
        double worst = 0.0;
        for (const EigenvalueReport& e : r.eigenvalues) {
            const double scale = opt.tol_root * std::abs(e.lambda) * std::abs(e.delta_prime) + e.noise_floor;
            worst = std::max(worst, e.delta_residual / scale);
        }
        return worst;
    });
}

}  // namespace

std::optional<Suite> parse_suite(std::string_view name) noexcept {
    if (name == "calculus") return Suite::calculus;
    if (name == "trig") return Suite::trig;
    if (name == "solver") return Suite::solver;
    if (name == "spectral") return Suite::spectral;
    if (name == "all") return Suite::all;
    return std::nullopt;
}

std::string_view to_string(Suite suite) noexcept {
    switch (suite) {
        case Suite::calculus: return "calculus";
        case Suite::trig: return "trig";
        case Suite::solver: return "solver";
        case Suite::spectral: return "spectral";
        case Suite::all: return "all";
    }
    return "all";
}

bool VerifyReport::all_passed() const noexcept {
    return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed; });
}

VerifyReport run_verify(Suite suite, std::uint64_t seed) {
    VerifyReport report;
    report.seed = seed;
    if (suite == Suite::calculus || suite == Suite::all) calculus_suite(report);
    if (suite == Suite::trig || suite == Suite::all) trig_suite(report);
    if (suite == Suite::solver || suite == Suite::all) solver_suite(report);
    if (suite == Suite::spectral || suite == Suite::all) spectral_suite(report);
    return report;
}

}  // namespace qwd
