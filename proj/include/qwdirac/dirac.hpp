#pragma once

#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qwdirac/hahn.hpp"

namespace qwd {

/// Real potentials p, r of the q,omega-Dirac system, continuous at omega0.
struct Potentials {
    RealFunction p;
    RealFunction r;
    /// Both potentials are known to vanish identically.
    bool identically_zero = false;

    static Potentials zero();
    static Potentials constant(double p0, double r0);
    static Potentials polynomial(const Polynomial& p, const Polynomial& r, const HahnParams& params);
};

/// Columns phi1 = (C(t,l), -sqrt(q) S(t, l sqrt(q))) and phi2 = (S(t,l), C(t, l sqrt(q))).
struct FundamentalMatrix {
    double phi11 = 1.0;
    double phi12 = 0.0;
    double phi21 = 0.0;
    double phi22 = 1.0;
};

/// Evaluates the free fundamental pair at t. Throws PrecisionLoss if a component has no trustworthy digits.
[[nodiscard]] FundamentalMatrix fundamental_pair(double t, double lambda, const HahnParams& params,
                                                 double tol = kDefaultSeriesTol);

/// c1 phi1 + c2 phi2: the solution of the free system (p = r = 0) with y(omega0) = (c1, c2).
[[nodiscard]] std::pair<double, double> solve_free(double c1, double c2, double t, double lambda,
                                                   const HahnParams& params);

enum class PicardForm {
    /// y1 = c1 + int (lambda - r) y2, y2 = c2 + q int (p(h(s)) - lambda) y1(h(s)).
    volterra,
    /// Variation-of-constants form built on the free fundamental pair.
    four_kernel,
};

struct PicardOptions {
    double tol = kDefaultPropertyTol;
    int max_iter = 500;
    /// Lattice depth; chosen from q when unset.
    std::optional<int> depth;
    PicardForm form = PicardForm::volterra;
};

/// A solution y = (y1, y2) sampled on the lattice {h^k(x)}.
///
/// Off-lattice values are produced by solving again on the lattice anchored at
/// the requested point; no interpolation is used.
class VectorSolution {
public:
    VectorSolution(HahnParams params, std::shared_ptr<const Potentials> potentials, double lambda, double c1,
                   double c2, LatticeGrid grid, std::vector<double> y1, std::vector<double> y2, int iterations,
                   double final_delta, PicardOptions options);

    [[nodiscard]] const HahnParams& params() const noexcept { return params_; }
    [[nodiscard]] const Potentials& potentials() const noexcept { return *potentials_; }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] double c1() const noexcept { return c1_; }
    [[nodiscard]] double c2() const noexcept { return c2_; }
    [[nodiscard]] const LatticeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> y1() const noexcept { return y1_; }
    [[nodiscard]] std::span<const double> y2() const noexcept { return y2_; }
    [[nodiscard]] double y1(int k) const noexcept { return y1_[static_cast<std::size_t>(k)]; }
    [[nodiscard]] double y2(int k) const noexcept { return y2_[static_cast<std::size_t>(k)]; }
    [[nodiscard]] int iterations() const noexcept { return iterations_; }
    [[nodiscard]] double final_delta() const noexcept { return final_delta_; }
    [[nodiscard]] const PicardOptions& options() const noexcept { return options_; }

    /// (y1(t), y2(t)); (c1, c2) at omega0, stored values on the lattice, a fresh solve elsewhere.
    [[nodiscard]] std::pair<double, double> value_at(double t) const;

    /// max over the lattice of max(|y1|, |y2|).
    [[nodiscard]] double sup_abs() const noexcept;

    /// Copy with y1 at lattice index k shifted by eps.
    [[nodiscard]] VectorSolution with_perturbed_y1(int k, double eps) const;

private:
    HahnParams params_;
    std::shared_ptr<const Potentials> potentials_;
    double lambda_;
    double c1_;
    double c2_;
    LatticeGrid grid_;
    std::vector<double> y1_;
    std::vector<double> y2_;
    int iterations_;
    double final_delta_;
    PicardOptions options_;
};

/// Successive approximation of the q,omega-Dirac system on the lattice of x > omega0,
/// started from the free solution. Throws NoConvergence or PrecisionLoss.
[[nodiscard]] VectorSolution picard_solve(const Potentials& pot, double c1, double c2, double lambda, double x,
                                          const HahnParams& params, const PicardOptions& options = {});

/// W(y, z)(t) = y1(t) z2(h^{-1}(t)) - z1(t) y2(h^{-1}(t)).
[[nodiscard]] double wronskian(const VectorSolution& y, const VectorSolution& z, double t, const HahnParams& params);

/// Wronskian at lattice index k >= 1 of two solutions sharing one lattice.
[[nodiscard]] double wronskian_at(const VectorSolution& y, const VectorSolution& z, int k);

/// Residuals (-(1/q) D_{1/q,-omega/q} y2 + (p - lambda) y1, D_{q,omega} y1 + (r - lambda) y2) at t.
[[nodiscard]] std::pair<double, double> residual(const VectorSolution& y, const Potentials& pot, double t,
                                                 const HahnParams& params);

/// Residuals at lattice index k (1 <= k < depth), using the neighbouring lattice points.
[[nodiscard]] std::pair<double, double> residual_at(const VectorSolution& y, const Potentials& pot, int k);

/// Floating-point noise level of residual_at(y, pot, k) for each component.
[[nodiscard]] std::pair<double, double> residual_noise_at(const VectorSolution& y, const Potentials& pot, int k);

/// Majorant of the successive approximations and the radius condition that makes it summable.
struct ConvergenceReport {
    bool radius_ok = true;
    /// K(l)/2 (-1;q)_{m+1} (A B(l) (x(1-q) - omega))^m / (q;q)_m for m = 1, 2, ...
    std::vector<double> bound_terms;
    double sup_p = 0.0;
    double sup_r = 0.0;
    double sup_phi = 0.0;
    double a_const = 0.0;   // A = max(sup |p|, sup |r|)
    double b_lambda = 0.0;  // B(l) = 2 sup |phi_ij|^2
    double k_lambda = 0.0;  // K(l) for unit initial data |c1| + |c2| = 1
    /// 1 / |A B (1 - q)|; +inf when A B = 0.
    double radius_limit = 0.0;
    /// Limit of bound_terms[m+1] / bound_terms[m]: A B (1 - q)(x - omega0).
    double limiting_ratio = 0.0;
};

[[nodiscard]] ConvergenceReport convergence_bound(const Potentials& pot, double lambda, double x,
                                                  const HahnParams& params, int terms = 80);

/// Jackson-Norlund integral of y^T z over [omega0, a] on the shared lattice of y and z.
[[nodiscard]] double lattice_inner_product(const VectorSolution& y, const VectorSolution& z, double a);

}  // namespace qwd
