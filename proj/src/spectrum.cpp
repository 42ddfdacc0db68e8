#include "qwdirac/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "qwdirac/errors.hpp"
#include "qwdirac/trig.hpp"

namespace qwd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Exponent e in seed_n = q^{-n+e} / ((1-q)(a-omega0)) for Delta built from one trig series.
std::optional<double> seed_exponent(const BoundarySpec& bc) {
    if (bc.k21 == 0.0) {
        if (bc.k12 == 0.0) return 1.0;
        if (bc.k11 == 0.0) return 0.5;
    }
    if (bc.k22 == 0.0) {
        if (bc.k11 == 0.0) return 0.5;
        if (bc.k12 == 0.0) return 0.0;
    }
    return std::nullopt;
}

double seed_value(int n, double exponent, const HahnParams& params, double a) {
    const double q = params.q();
    return std::pow(q, -n + exponent) / ((1.0 - q) * (a - params.omega0()));
}

struct DeltaSample {
    double lambda = 0.0;
    double value = 0.0;
    double noise = 0.0;
    double growth = 0.0;
};

class DeltaEvaluator {
public:
    DeltaEvaluator(const BoundarySpec& bc, const Potentials& pot, const HahnParams& params,
                   const PicardOptions& options)
        : bc_(bc), pot_(pot), params_(params), options_(options) {}

    DeltaSample operator()(double lambda) const {
        const VectorSolution phi = phi_solution(lambda, bc_, pot_, params_, options_);
        DeltaSample s;
        s.lambda = lambda;
        s.value = bc_.k21 * phi.y1(1) + bc_.k22 * phi.y2(0);
        s.growth = series_growth(lambda, bc_, params_);
        s.noise = 16.0 * kEps * std::max(phi.sup_abs(), s.growth) * (std::abs(bc_.k21) + std::abs(bc_.k22));
        return s;
    }

private:
    const BoundarySpec& bc_;
    const Potentials& pot_;
    const HahnParams& params_;
    const PicardOptions& options_;
};

struct Bracket {
    DeltaSample lo;
    DeltaSample hi;
};

struct ScanOutcome {
    std::vector<Bracket> brackets;
    std::vector<double> dips;
    int points = 0;
};

// `direction` = -1 mirrors the grid onto lambda < 0.
ScanOutcome scan(const std::vector<double>& grid, double direction, const DeltaEvaluator& delta) {
    ScanOutcome out;
    std::vector<DeltaSample> samples;
    samples.reserve(grid.size());
    for (const double x : grid) {
        samples.push_back(delta(direction * x));
    }
    out.points = static_cast<int>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].value == 0.0) {
            out.brackets.push_back({samples[i], samples[i]});
            continue;
        }
        if (i + 1 < samples.size() && sign_of(samples[i].value) * sign_of(samples[i + 1].value) < 0) {
            out.brackets.push_back({samples[i], samples[i + 1]});
        }
        if (i > 0 && i + 1 < samples.size()) {
            const DeltaSample& prev = samples[i - 1];
            const DeltaSample& next = samples[i + 1];
            const bool no_change = sign_of(prev.value) == sign_of(samples[i].value) &&
                                   sign_of(next.value) == sign_of(samples[i].value);
            const double mag = std::abs(samples[i].value);
            if (no_change && mag <= samples[i].noise && mag < std::abs(prev.value) && mag < std::abs(next.value)) {
                out.dips.push_back(samples[i].lambda);
            }
        }
    }
    return out;
}

std::vector<double> geometric_grid(double lo, double hi, double ratio) {
    std::vector<double> grid{lo * 1e-3};
    for (double x = lo; ; x *= ratio) {
        grid.push_back(x);
        if (x >= hi) break;
    }
    return grid;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count) + 1);
    for (int i = 0; i <= count; ++i) {
        grid.push_back(lo + (hi - lo) * static_cast<double>(i) / count);
    }
    return grid;
}

Bracket refine(Bracket b, double tol, const DeltaEvaluator& delta) {
    while (b.lo.value != 0.0 && b.hi.value != 0.0) {
        const double width = std::abs(b.hi.lambda - b.lo.lambda);
        if (width <= tol * std::max(std::abs(b.lo.lambda), std::abs(b.hi.lambda))) {
            break;
        }
        const double mid = 0.5 * (b.lo.lambda + b.hi.lambda);
        if (mid == b.lo.lambda || mid == b.hi.lambda) {
            break;
        }
        const DeltaSample s = delta(mid);
        if (s.value == 0.0) {
            b.lo = s;
            b.hi = s;
        } else if (sign_of(s.value) == sign_of(b.lo.value)) {
            b.lo = s;
        } else {
            b.hi = s;
        }
    }
    return b;
}

struct Located {
    double lambda;
    Bracket bracket;
};

}  // namespace

void BoundarySpec::validate(const HahnParams& params) const {
    for (const double k : {k11, k12, k21, k22, a}) {
        if (!std::isfinite(k)) {
            throw InvalidParameter("boundary coefficients and endpoint must be finite");
        }
    }
    if (k11 == 0.0 && k12 == 0.0) {
        throw InvalidParameter("k11 and k12 must not vanish simultaneously");
    }
    if (k21 == 0.0 && k22 == 0.0) {
        throw InvalidParameter("k21 and k22 must not vanish simultaneously");
    }
    if (!(a - params.omega0() > params.fixed_point_tol())) {
        throw InvalidParameter("endpoint a must exceed omega0 = " + fmt(params.omega0()));
    }
}

BoundarySpec example_boundary(ExampleProblem example, double a) {
    if (example == ExampleProblem::cosine_family) {
        return {1.0, 0.0, 0.0, 1.0, a};
    }
    return {0.0, 1.0, 0.0, 1.0, a};
}

double asymptotic_eigenvalue(int n, ExampleProblem example, const HahnParams& params, double a) {
    if (n < 1) {
        throw InvalidParameter("eigenvalue index must be >= 1");
    }
    if (!(a > params.omega0())) {
        throw InvalidParameter("endpoint a must exceed omega0");
    }
    return seed_value(n, example == ExampleProblem::cosine_family ? 1.0 : 0.5, params, a);
}

std::optional<double> free_seed(int n, const BoundarySpec& bc, const HahnParams& params) {
    const auto exponent = seed_exponent(bc);
    if (!exponent) {
        return std::nullopt;
    }
    return seed_value(n, *exponent, params, bc.a);
}

VectorSolution phi_solution(double lambda, const BoundarySpec& bc, const Potentials& pot, const HahnParams& params,
                            const PicardOptions& options) {
    bc.validate(params);
    return picard_solve(pot, bc.k12, -bc.k11, lambda, params.h_inv(bc.a), params, options);
}

double characteristic(double lambda, const BoundarySpec& bc, const Potentials& pot, const HahnParams& params,
                      const PicardOptions& options) {
    const VectorSolution phi = phi_solution(lambda, bc, pot, params, options);
    return bc.k21 * phi.y1(1) + bc.k22 * phi.y2(0);
}

double series_growth(double lambda, const BoundarySpec& bc, const HahnParams& params) {
    const double q = params.q();
    const double z = lambda * (1.0 - q) * (bc.a - params.omega0());
    const double shifted = z / std::sqrt(q);
    double growth = 0.0;
    const auto take = [&](TrigKind kind, double arg) {
        growth = std::max(growth, evaluate_trig_series(kind, arg, q).abs_sum);
    };
    if (bc.k21 != 0.0) {
        if (bc.k12 != 0.0) take(TrigKind::cosine, z);
        if (bc.k11 != 0.0) take(TrigKind::sine, z);
    }
    if (bc.k22 != 0.0) {
        if (bc.k12 != 0.0) take(TrigKind::sine, shifted);
        if (bc.k11 != 0.0) take(TrigKind::cosine, shifted);
    }
    return growth;
}

double orthogonality_defect(const VectorSolution& y, const VectorSolution& z, const HahnParams& params, double a) {
    if (!(a > params.omega0())) {
        throw InvalidParameter("endpoint a must exceed omega0");
    }
    const double yz = lattice_inner_product(y, z, a);
    const double yy = lattice_inner_product(y, y, a);
    const double zz = lattice_inner_product(z, z, a);
    if (!(yy > 0.0) || !(zz > 0.0)) {
        throw InvalidParameter("orthogonality_defect needs nonzero solutions");
    }
    return std::abs(yz) / std::sqrt(yy * zz);
}

double norm_identity_defect(double lambda_n, const BoundarySpec& bc, const Potentials& pot, const HahnParams& params,
                            const PicardOptions& options) {
    const VectorSolution center = phi_solution(lambda_n, bc, pot, params, options);
    const auto bracket = [&](double step) {
        const VectorSolution plus = phi_solution(lambda_n + step, bc, pot, params, options);
        const VectorSolution minus = phi_solution(lambda_n - step, bc, pot, params, options);
        const double d1 = (plus.y1(1) - minus.y1(1)) / (2.0 * step);
        const double d2 = (plus.y2(0) - minus.y2(0)) / (2.0 * step);
        return center.y2(0) * d1 - center.y1(1) * d2;
    };
    const double step = std::max(1e-6, 1e-6 * std::abs(lambda_n));
    const double full = bracket(step);
    const double half = bracket(0.5 * step);
    const double norm = lattice_inner_product(center, center, bc.a);
    const double scale = std::max(std::abs(norm), std::numeric_limits<double>::min());
    if (std::abs(full - half) > 1e-6 * scale) {
        throw DerivativeStepUnstable("lambda-derivative at step " + fmt(step) + " disagrees with the half step by " +
                                     fmt(std::abs(full - half) / scale) + " relative");
    }
    return std::abs(full - norm) / scale;
}

double green_bracket_defect(const VectorSolution& y, const VectorSolution& z, double a) {
    const auto k = y.grid().index_of(a);
    if (!k || *k < 1) {
        throw InvalidParameter("a must be a lattice point below the anchor of both solutions");
    }
    const double dl = y.lambda() - z.lambda();
    if (dl == 0.0) {
        throw InvalidParameter("green_bracket_defect needs distinct lambda");
    }
    const double lhs = dl * lattice_inner_product(y, z, a);
    const double rhs = wronskian_at(y, z, *k) - (y.c1() * z.c2() - z.c1() * y.c2());
    const double norms = std::sqrt(lattice_inner_product(y, y, a) * lattice_inner_product(z, z, a));
    const double scale = std::max({std::abs(dl) * norms, std::abs(rhs), std::numeric_limits<double>::min()});
    return std::abs(lhs - rhs) / scale;
}

namespace {

std::vector<Located> locate(int n_max, const std::vector<Bracket>& brackets, double tol, const DeltaEvaluator& delta) {
    std::vector<Located> roots;
    for (const Bracket& b : brackets) {
        if (static_cast<int>(roots.size()) == n_max) break;
        const Bracket r = refine(b, tol, delta);
        roots.push_back({0.5 * (r.lo.lambda + r.hi.lambda), r});
    }
    return roots;
}

EigenvalueReport describe(int n, const Located& root, const BoundarySpec& bc, const Potentials& pot,
                          const HahnParams& params, const SpectrumOptions& options, const DeltaEvaluator& delta,
                          std::vector<std::string>& warnings) {
    EigenvalueReport rep;
    rep.n = n;
    rep.lambda = root.lambda;
    rep.bracket_lo = std::min(root.bracket.lo.lambda, root.bracket.hi.lambda);
    rep.bracket_hi = std::max(root.bracket.lo.lambda, root.bracket.hi.lambda);
    const DeltaSample at = delta(root.lambda);
    rep.delta_residual = std::abs(at.value);
    rep.noise_floor = at.noise;
    rep.growth = at.growth;

    const double step = std::max(1e-6, 1e-6 * std::abs(root.lambda));
    const DeltaSample plus = delta(root.lambda + step);
    const DeltaSample minus = delta(root.lambda - step);
    rep.delta_prime = (plus.value - minus.value) / (2.0 * step);
    rep.derivative_noise = std::max({at.noise, plus.noise, minus.noise}) / step;
    const DeltaSample plus_half = delta(root.lambda + 0.5 * step);
    const DeltaSample minus_half = delta(root.lambda - 0.5 * step);
    const double prime_half = (plus_half.value - minus_half.value) / step;
    if (std::abs(prime_half - rep.delta_prime) > 1e-3 * std::abs(rep.delta_prime) + 2.0 * rep.derivative_noise) {
        warnings.push_back("Delta' at lambda = " + fmt(root.lambda) + " is sensitive to the difference step");
    }
    if (root.bracket.lo.value == 0.0) {
        rep.sign_change = sign_of(plus.value) * sign_of(minus.value) < 0;
    } else {
        rep.sign_change = sign_of(root.bracket.lo.value) * sign_of(root.bracket.hi.value) < 0;
    }
    rep.simple = rep.sign_change && std::abs(rep.delta_prime) > 100.0 * rep.derivative_noise;
    if (!rep.simple) {
        warnings.push_back("eigenvalue " + std::to_string(n) + " at " + fmt(root.lambda) +
                           " is not confirmed simple at the noise floor");
    }

    if (n > 0) {
        if (const auto seed = free_seed(n, bc, params)) {
            rep.asym_seed = *seed;
            rep.rel_dev_from_asym = root.lambda / *seed - 1.0;
        }
    }
    if (options.diagnostics) {
        try {
            rep.norm_identity_defect = norm_identity_defect(root.lambda, bc, pot, params, options.picard);
        } catch (const DerivativeStepUnstable& e) {
            warnings.push_back(std::string("norm identity skipped: ") + e.what());
        }
    }
    return rep;
}

}  // namespace

SpectrumResult find_eigenvalues(int n_max, const BoundarySpec& bc, const Potentials& pot, const HahnParams& params,
                                const SpectrumOptions& options) {
    if (n_max < 1) {
        throw InvalidParameter("n_max must be >= 1");
    }
    if (!(options.tol_root > 0.0)) {
        throw InvalidParameter("root tolerance must be > 0");
    }
    bc.validate(params);
    const double q = params.q();

    SpectrumResult result;
    result.q = q;
    result.omega = params.omega();
    result.omega0 = params.omega0();
    result.bc = bc;
    result.n_max = n_max;

    const bool even = bc.k21 * bc.k12 != 0.0 || bc.k22 * bc.k11 != 0.0;
    const bool odd = bc.k21 * bc.k11 != 0.0 || bc.k22 * bc.k12 != 0.0;
    result.symmetric = pot.identically_zero && !(even && odd);

    const auto exponent = seed_exponent(bc);
    const double seed_lo = seed_value(1, exponent.value_or(1.0), params, bc.a);
    const double seed_hi = seed_value(n_max, exponent.value_or(0.0), params, bc.a);

    const auto over_budget = [&](double growth, const std::string& what) {
        if (growth <= options.growth_budget) return;
        int trusted = 0;
        while (trusted < n_max &&
               series_growth(seed_value(trusted + 1, exponent.value_or(0.0), params, bc.a), bc, params) <=
                   options.growth_budget) {
            ++trusted;
        }
        const std::string msg = what + " needs series growth " + fmt(growth) + " above the budget " +
                                fmt(options.growth_budget) + "; 64-bit results are trustworthy up to n = " +
                                std::to_string(trusted);
        if (options.strict_budget) {
            throw PrecisionBudgetExceeded(msg);
        }
        result.warnings.push_back(msg);
    };
    over_budget(series_growth(seed_hi, bc, params), "eigenvalue n = " + std::to_string(n_max));

    const DeltaEvaluator delta(bc, pot, params, options.picard);
    const DeltaSample origin = delta(0.0);
    result.trivial_root = std::abs(origin.value) <= origin.noise;

    const double step = std::pow(q, -0.25);
    const double lam_lo = seed_lo * q / step;
    const double lam_hi = seed_hi / q * step;
    ScanOutcome outcome = scan(geometric_grid(lam_lo, lam_hi, step), 1.0, delta);
    result.scan_points = outcome.points;
    if (static_cast<int>(outcome.brackets.size()) < n_max) {
        result.escalated = true;
        ScanOutcome dense = scan(linear_grid(lam_lo * 1e-3, lam_hi, 64 * (n_max + 2)), 1.0, delta);
        result.scan_points += dense.points;
        if (dense.brackets.size() > outcome.brackets.size()) {
            outcome = std::move(dense);
        }
    }
    for (const double dip : outcome.dips) {
        result.missed_root_suspected = true;
        result.warnings.push_back("|Delta| dips below its noise floor without a sign change near lambda = " +
                                  fmt(dip));
    }
    if (static_cast<int>(outcome.brackets.size()) < n_max) {
        result.missed_root_suspected = true;
        result.warnings.push_back("found " + std::to_string(outcome.brackets.size()) + " of " +
                                  std::to_string(n_max) + " sign changes in [" + fmt(lam_lo * 1e-3) + ", " +
                                  fmt(lam_hi) + "]");
    }

    std::vector<Located> roots = locate(n_max, outcome.brackets, options.tol_root, delta);
    std::vector<Located> unique;
    for (const Located& r : roots) {
        if (!unique.empty() && std::abs(r.lambda - unique.back().lambda) <= 1e-8 * (1.0 + std::abs(r.lambda))) {
            result.duplicates_merged = true;
            result.warnings.push_back("merged coincident roots near lambda = " + fmt(r.lambda));
            continue;
        }
        unique.push_back(r);
    }

    for (std::size_t i = 0; i < unique.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        over_budget(series_growth(unique[i].lambda, bc, params), "eigenvalue n = " + std::to_string(n));
        result.eigenvalues.push_back(describe(n, unique[i], bc, pot, params, options, delta, result.warnings));
    }

    if (options.scan_negative) {
        const ScanOutcome neg = scan(geometric_grid(lam_lo, lam_hi, step), -1.0, delta);
        result.scan_points += neg.points;
        const std::vector<Located> neg_roots = locate(n_max, neg.brackets, options.tol_root, delta);
        for (std::size_t i = 0; i < neg_roots.size(); ++i) {
            const int n = -(static_cast<int>(i) + 1);
            result.negative_eigenvalues.push_back(
                describe(n, neg_roots[i], bc, pot, params, options, delta, result.warnings));
        }
    } else if (!result.symmetric) {
        result.warnings.push_back("Delta is not symmetric in lambda; the negative half-line was not scanned");
    }

    if (options.diagnostics && result.eigenvalues.size() > 1) {
        std::vector<VectorSolution> eigenfunctions;
        eigenfunctions.reserve(result.eigenvalues.size());
        for (const EigenvalueReport& e : result.eigenvalues) {
            eigenfunctions.push_back(phi_solution(e.lambda, bc, pot, params, options.picard));
        }
        for (std::size_t i = 0; i < eigenfunctions.size(); ++i) {
            for (std::size_t j = i + 1; j < eigenfunctions.size(); ++j) {
                result.pair_orthogonality.push_back(
                    {static_cast<int>(i) + 1, static_cast<int>(j) + 1,
                     orthogonality_defect(eigenfunctions[i], eigenfunctions[j], params, bc.a)});
            }
        }
    }

    if (result.missed_root_suspected && options.strict_missed_roots) {
        throw MissedRootSuspected(result.warnings.back());
    }
    return result;
}

}  // namespace qwd
