#include "qwdirac/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qwdirac/errors.hpp"
#include "qwdirac/summation.hpp"
#include "qwdirac/trig.hpp"

namespace qwd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFreeSeriesTol = 1e-16;

// Free fundamental matrix without the precision-loss guard; used for initial
// iterates and kernels, where a value at a zero crossing is still the best estimate.
FundamentalMatrix free_matrix(double t, double lambda, const HahnParams& params) {
    const double q = params.q();
    const double sq = std::sqrt(q);
    const double z = combined_argument(t, lambda, params);
    const TrigEval c = evaluate_trig_series(TrigKind::cosine, z, q, kFreeSeriesTol);
    const TrigEval s = evaluate_trig_series(TrigKind::sine, z, q, kFreeSeriesTol);
    const TrigEval cs = evaluate_trig_series(TrigKind::cosine, sq * z, q, kFreeSeriesTol);
    const TrigEval ss = evaluate_trig_series(TrigKind::sine, sq * z, q, kFreeSeriesTol);
    for (const TrigEval* e : {&c, &s, &cs, &ss}) {
        if (!std::isfinite(e->value)) {
            throw PrecisionLoss("fundamental pair overflowed at combined argument " + std::to_string(z));
        }
    }
    return {c.value, -sq * ss.value, s.value, cs.value};
}

}  // namespace

Potentials Potentials::zero() {
    return {RealFunction::constant(0.0), RealFunction::constant(0.0), true};
}

Potentials Potentials::constant(double p0, double r0) {
    return {RealFunction::constant(p0), RealFunction::constant(r0), p0 == 0.0 && r0 == 0.0};
}

Potentials Potentials::polynomial(const Polynomial& p, const Polynomial& r, const HahnParams& params) {
    return {p.as_function(params), r.as_function(params), p.is_zero() && r.is_zero()};
}

FundamentalMatrix fundamental_pair(double t, double lambda, const HahnParams& params, double tol) {
    const double sq = std::sqrt(params.q());
    const double c = cos_qw(t, lambda, params, tol).value;
    const double s = sin_qw(t, lambda, params, tol).value;
    const double cs = cos_qw(t, sq * lambda, params, tol).value;
    const double ss = sin_qw(t, sq * lambda, params, tol).value;
    return {c, -sq * ss, s, cs};
}

std::pair<double, double> solve_free(double c1, double c2, double t, double lambda, const HahnParams& params) {
    const FundamentalMatrix phi = fundamental_pair(t, lambda, params);
    return {c1 * phi.phi11 + c2 * phi.phi21, c1 * phi.phi12 + c2 * phi.phi22};
}

VectorSolution::VectorSolution(HahnParams params, std::shared_ptr<const Potentials> potentials, double lambda,
                               double c1, double c2, LatticeGrid grid, std::vector<double> y1, std::vector<double> y2,
                               int iterations, double final_delta, PicardOptions options)
    : params_(params),
      potentials_(std::move(potentials)),
      lambda_(lambda),
      c1_(c1),
      c2_(c2),
      grid_(std::move(grid)),
      y1_(std::move(y1)),
      y2_(std::move(y2)),
      iterations_(iterations),
      final_delta_(final_delta),
      options_(options) {
    const auto n = static_cast<std::size_t>(grid_.depth()) + 1;
    if (y1_.size() != n || y2_.size() != n) {
        throw InvalidParameter("solution arrays must match the lattice size");
    }
}

std::pair<double, double> VectorSolution::value_at(double t) const {
    if (params_.is_fixed_point(t)) {
        return {c1_, c2_};
    }
    if (const auto k = grid_.index_of(t)) {
        return {y1(*k), y2(*k)};
    }
    if (!(t > params_.omega0())) {
        throw InvalidParameter("solutions are evaluated on [omega0, inf) only");
    }
    const VectorSolution fresh = picard_solve(*potentials_, c1_, c2_, lambda_, t, params_, options_);
    return {fresh.y1(0), fresh.y2(0)};
}

double VectorSolution::sup_abs() const noexcept {
    double sup = 0.0;
    for (std::size_t k = 0; k < y1_.size(); ++k) {
        sup = std::max({sup, std::abs(y1_[k]), std::abs(y2_[k])});
    }
    return sup;
}

VectorSolution VectorSolution::with_perturbed_y1(int k, double eps) const {
    VectorSolution copy = *this;
    copy.y1_.at(static_cast<std::size_t>(k)) += eps;
    return copy;
}

namespace {

struct LatticeSamples {
    std::vector<double> p;
    std::vector<double> r;
    double p_limit = 0.0;
    double r_limit = 0.0;
};

LatticeSamples sample_potentials(const Potentials& pot, const LatticeGrid& grid) {
    LatticeSamples s;
    s.p.reserve(grid.points().size());
    s.r.reserve(grid.points().size());
    for (const double t : grid.points()) {
        s.p.push_back(pot.p(t));
        s.r.push_back(pot.r(t));
    }
    s.p_limit = pot.p(grid.omega0());
    s.r_limit = pot.r(grid.omega0());
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(s.p.begin(), s.p.end(), finite) || !std::all_of(s.r.begin(), s.r.end(), finite) ||
        !std::isfinite(s.p_limit) || !std::isfinite(s.r_limit)) {
        throw InvalidParameter("potentials must be finite at every lattice point and at omega0");
    }
    return s;
}

// One Jacobi sweep of the lattice Volterra equations; the segment [omega0, t_K]
// is integrated with the integrand frozen at its omega0 limit.
void volterra_sweep(const LatticeGrid& grid, const LatticeSamples& pot, double q, double lambda, double c1, double c2,
                    const std::vector<double>& y1, const std::vector<double>& y2, std::vector<double>& n1,
                    std::vector<double>& n2) {
    const int depth = grid.depth();
    const double tail = grid.offsets()[static_cast<std::size_t>(depth)];
    CompensatedSum acc1;
    CompensatedSum acc2;
    acc1.add(tail * (lambda - pot.r_limit) * c2);
    acc2.add(tail * q * (pot.p_limit - lambda) * c1);
    n1[static_cast<std::size_t>(depth)] = c1 + acc1.value();
    n2[static_cast<std::size_t>(depth)] = c2 + acc2.value();
    for (int k = depth - 1; k >= 0; --k) {
        const auto i = static_cast<std::size_t>(k);
        const double w = grid.weight(k);
        acc1.add(w * (lambda - pot.r[i]) * y2[i]);
        acc2.add(w * q * (pot.p[i + 1] - lambda) * y1[i + 1]);
        n1[i] = c1 + acc1.value();
        n2[i] = c2 + acc2.value();
    }
}

// Variation of constants on the lattice: the forcing of step j enters as a jump at t_j, which the
// free pair carries to every t_k with k <= j. Coefficients of that jump against (phi1, phi2) come
// from the lattice Wronskian at j + 1.
void four_kernel_sweep(const LatticeGrid& grid, const LatticeSamples& pot, double q, double lambda, double c1,
                       double c2, const std::vector<FundamentalMatrix>& phi, const std::vector<double>& free1,
                       const std::vector<double>& free2, const std::vector<double>& y1, const std::vector<double>& y2,
                       std::vector<double>& n1, std::vector<double>& n2) {
    const int depth = grid.depth();
    const double tail = grid.offsets()[static_cast<std::size_t>(depth)];
    // phi(omega0) is the identity, so the frozen tail jump is its own coefficient vector.
    CompensatedSum alpha1;
    CompensatedSum alpha2;
    alpha1.add(-tail * pot.r_limit * c2);
    alpha2.add(tail * q * pot.p_limit * c1);
    for (int j = depth; j >= 0; --j) {
        const auto i = static_cast<std::size_t>(j);
        if (j < depth) {
            const double w = grid.weight(j);
            const double f1 = -w * pot.r[i] * y2[i];
            const double f2 = w * q * pot.p[i + 1] * y1[i + 1];
            const double d1 = f1 + lambda * w * f2;
            const double d2 = f2;
            const double v1 = d1 - lambda * w * d2;
            const FundamentalMatrix& above = phi[i + 1];
            const FundamentalMatrix& here = phi[i];
            const double w12 = above.phi11 * here.phi22 - above.phi21 * here.phi12;
            alpha1.add((v1 * here.phi22 - above.phi21 * d2) / w12);
            alpha2.add((above.phi11 * d2 - v1 * here.phi12) / w12);
        }
        n1[i] = free1[i] + phi[i].phi11 * alpha1.value() + phi[i].phi21 * alpha2.value();
        n2[i] = free2[i] + phi[i].phi12 * alpha1.value() + phi[i].phi22 * alpha2.value();
    }
}

bool residuals_acceptable(const VectorSolution& y, const Potentials& pot, double tol, double sup) {
    const double lambda = std::abs(y.lambda());
    for (int k = 1; k < y.grid().depth(); ++k) {
        const auto [res1, res2] = residual_at(y, pot, k);
        const auto [noise1, noise2] = residual_noise_at(y, pot, k);
        const double t = y.grid()[k];
        const double coupling = 1.0 + lambda + std::abs(pot.p(t)) + std::abs(pot.r(t));
        const double bound = 10.0 * tol * coupling * (1.0 + sup);
        if (!(std::abs(res1) <= bound + noise1) || !(std::abs(res2) <= bound + noise2)) {
            return false;
        }
    }
    return true;
}

}  // namespace

VectorSolution picard_solve(const Potentials& pot, double c1, double c2, double lambda, double x,
                            const HahnParams& params, const PicardOptions& options) {
    if (!(options.tol > 0.0) || options.max_iter < 1) {
        throw InvalidParameter("picard_solve requires tol > 0 and max_iter >= 1");
    }
    if (!std::isfinite(x) || !(x - params.omega0() > params.fixed_point_tol())) {
        throw InvalidParameter("picard_solve requires a finite x > omega0");
    }
    if (!std::isfinite(lambda) || !std::isfinite(c1) || !std::isfinite(c2)) {
        throw InvalidParameter("lambda and initial data must be finite");
    }
    const int depth = options.depth.value_or(LatticeGrid::depth_for(params));
    LatticeGrid grid(params, x, depth);
    const LatticeSamples samples = sample_potentials(pot, grid);
    const double q = params.q();
    const auto n = static_cast<std::size_t>(depth) + 1;

    std::vector<FundamentalMatrix> phi(n);
    std::vector<double> free1(n);
    std::vector<double> free2(n);
    for (std::size_t k = 0; k < n; ++k) {
        phi[k] = free_matrix(grid[static_cast<int>(k)], lambda, params);
        free1[k] = c1 * phi[k].phi11 + c2 * phi[k].phi21;
        free2[k] = c1 * phi[k].phi12 + c2 * phi[k].phi22;
    }

    std::vector<double> y1 = free1;
    std::vector<double> y2 = free2;
    std::vector<double> n1(n);
    std::vector<double> n2(n);
    auto shared_pot = std::make_shared<const Potentials>(pot);
    double delta = std::numeric_limits<double>::infinity();
    double previous_delta = delta;
    int stalled = 0;
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        if (options.form == PicardForm::volterra) {
            volterra_sweep(grid, samples, q, lambda, c1, c2, y1, y2, n1, n2);
        } else {
            four_kernel_sweep(grid, samples, q, lambda, c1, c2, phi, free1, free2, y1, y2, n1, n2);
        }
        delta = 0.0;
        double sup = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            delta = std::max({delta, std::abs(n1[k] - y1[k]), std::abs(n2[k] - y2[k])});
            sup = std::max({sup, std::abs(n1[k]), std::abs(n2[k])});
        }
        std::swap(y1, n1);
        std::swap(y2, n2);
        if (!std::isfinite(delta) || !std::isfinite(sup)) {
            throw PrecisionLoss("successive approximations overflowed");
        }
        stalled = delta >= previous_delta ? stalled + 1 : 0;
        previous_delta = delta;
        if (delta < options.tol * (1.0 + sup)) {
            VectorSolution solution(params, shared_pot, lambda, c1, c2, grid, y1, y2, iter, delta, options);
            if (residuals_acceptable(solution, pot, options.tol, sup)) {
                return solution;
            }
            if (stalled >= 3 || delta <= 64.0 * kEps * (1.0 + sup)) {
                throw NoConvergence("successive approximations reached rounding level but the system residual check "
                                    "still fails");
            }
        }
    }
    const ConvergenceReport report = convergence_bound(pot, lambda, x, params);
    throw NoConvergence("successive approximations did not converge in " + std::to_string(options.max_iter) +
                        " sweeps (last change " + std::to_string(delta) + ", radius condition " +
                        (report.radius_ok ? "satisfied" : "violated") + ")");
}

double wronskian_at(const VectorSolution& y, const VectorSolution& z, int k) {
    if (k < 1 || k > y.grid().depth() || y.grid().depth() != z.grid().depth() ||
        y.grid().anchor() != z.grid().anchor()) {
        throw InvalidParameter("wronskian_at needs two solutions on one lattice and 1 <= k <= depth");
    }
    return y.y1(k) * z.y2(k - 1) - z.y1(k) * y.y2(k - 1);
}

double wronskian(const VectorSolution& y, const VectorSolution& z, double t, const HahnParams& params) {
    const double back = params.h_inv(t);
    const auto [y1, y2_unused] = y.value_at(t);
    const auto [z1, z2_unused] = z.value_at(t);
    const auto [y1b_unused, y2b] = y.value_at(back);
    const auto [z1b_unused, z2b] = z.value_at(back);
    return y1 * z2b - z1 * y2b;
}

std::pair<double, double> residual_at(const VectorSolution& y, const Potentials& pot, int k) {
    if (k < 1 || k >= y.grid().depth()) {
        throw InvalidParameter("residual_at needs 1 <= k < depth");
    }
    const LatticeGrid& grid = y.grid();
    const double q = y.params().q();
    const double t = grid[k];
    const double lambda = y.lambda();
    // D_{1/q,-omega/q} y2(t_k) = (y2(t_{k-1}) - y2(t_k)) / (t_{k-1} - t_k)
    const double dual = (y.y2(k - 1) - y.y2(k)) / grid.weight(k - 1);
    // D_{q,omega} y1(t_k) = (y1(t_{k+1}) - y1(t_k)) / (t_{k+1} - t_k)
    const double forward = (y.y1(k) - y.y1(k + 1)) / grid.weight(k);
    return {-dual / q + (pot.p(t) - lambda) * y.y1(k), forward + (pot.r(t) - lambda) * y.y2(k)};
}

std::pair<double, double> residual_noise_at(const VectorSolution& y, const Potentials& pot, int k) {
    const LatticeGrid& grid = y.grid();
    const double q = y.params().q();
    const double t = grid[k];
    const double lambda = y.lambda();
    const auto norm = [&y](int j) { return std::max(std::abs(y.y1(j)), std::abs(y.y2(j))); };
    const double n1 = (norm(k - 1) + norm(k)) / (q * grid.weight(k - 1)) + std::abs((pot.p(t) - lambda) * y.y1(k));
    const double n2 = (norm(k) + norm(k + 1)) / grid.weight(k) + std::abs((pot.r(t) - lambda) * y.y2(k));
    return {16.0 * kEps * n1, 16.0 * kEps * n2};
}

std::pair<double, double> residual(const VectorSolution& y, const Potentials& pot, double t,
                                   const HahnParams& params) {
    if (const auto k = y.grid().index_of(t); k && *k >= 1 && *k < y.grid().depth()) {
        return residual_at(y, pot, *k);
    }
    const double q = params.q();
    const double offset = t - params.omega0();
    const double lambda = y.lambda();
    const auto [y1, y2] = y.value_at(t);
    const auto [y1_fwd, y2_fwd_unused] = y.value_at(params.h(t));
    const auto [y1_back_unused, y2_back] = y.value_at(params.h_inv(t));
    const double dual = (y2_back - y2) / ((1.0 / q - 1.0) * offset);
    const double forward = (y1_fwd - y1) / ((q - 1.0) * offset);
    return {-dual / q + (pot.p(t) - lambda) * y1, forward + (pot.r(t) - lambda) * y2};
}

ConvergenceReport convergence_bound(const Potentials& pot, double lambda, double x, const HahnParams& params,
                                    int terms) {
    const LatticeGrid grid(params, x, LatticeGrid::depth_for(params));
    ConvergenceReport report;
    for (const double t : grid.points()) {
        report.sup_p = std::max(report.sup_p, std::abs(pot.p(t)));
        report.sup_r = std::max(report.sup_r, std::abs(pot.r(t)));
        const FundamentalMatrix phi = free_matrix(t, lambda, params);
        report.sup_phi = std::max({report.sup_phi, std::abs(phi.phi11), std::abs(phi.phi12), std::abs(phi.phi21),
                                   std::abs(phi.phi22)});
    }
    const double q = params.q();
    report.a_const = std::max(report.sup_p, report.sup_r);
    report.b_lambda = 2.0 * report.sup_phi * report.sup_phi;
    report.k_lambda = report.sup_phi;
    const double ab = report.a_const * report.b_lambda;
    report.radius_limit =
        ab == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(ab * (1.0 - q));
    report.radius_ok = std::abs(x - params.omega0()) < report.radius_limit;
    const double growth = ab * (1.0 - q) * (x - params.omega0());  // A B (x(1-q) - omega)
    report.limiting_ratio = growth;

    // term_m = K/2 (-1;q)_{m+1} growth^m / (q;q)_m, built by its ratio recurrence.
    double term = 0.5 * report.k_lambda * 2.0;  // m = 0 value: K/2 (-1;q)_1
    double qm = 1.0;
    for (int m = 1; m <= terms; ++m) {
        qm *= q;
        term *= (1.0 + qm) * growth / (1.0 - qm);
        report.bound_terms.push_back(term);
    }
    return report;
}

double lattice_inner_product(const VectorSolution& y, const VectorSolution& z, double a) {
    if (y.grid().depth() != z.grid().depth() || y.grid().anchor() != z.grid().anchor()) {
        throw InvalidParameter("lattice_inner_product needs two solutions on one lattice");
    }
    const auto start = y.grid().index_of(a);
    if (!start) {
        throw InvalidParameter("upper limit a must be a point of the solutions' lattice");
    }
    const int depth = y.grid().depth();
    CompensatedSum sum;
    sum.add(y.grid().offsets()[static_cast<std::size_t>(depth)] * (y.c1() * z.c1() + y.c2() * z.c2()));
    for (int k = depth - 1; k >= *start; --k) {
        sum.add(y.grid().weight(k) * (y.y1(k) * z.y1(k) + y.y2(k) * z.y2(k)));
    }
    return sum.value();
}

}  // namespace qwd
