#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace qwd {

/// Library-wide default tolerances.
inline constexpr double kDefaultSeriesTol = 1e-12;
inline constexpr double kDefaultPropertyTol = 1e-10;

/// The Hahn parameters (q, omega) with the derived fixed point omega0 = omega / (1 - q).
///
/// All lattice maps are evaluated in offset form, h^k(t) = omega0 + q^k (t - omega0),
/// which is algebraically q^k t + omega [k]_q but keeps omega0 an exact fixed point.
class HahnParams {
public:
    /// Throws InvalidParameter unless 0 < q < 1 and omega > 0.
    HahnParams(double q, double omega);

    [[nodiscard]] double q() const noexcept { return q_; }
    [[nodiscard]] double omega() const noexcept { return omega_; }
    [[nodiscard]] double omega0() const noexcept { return omega0_; }

    /// h(t) = q t + omega.
    [[nodiscard]] double h(double t) const noexcept { return omega0_ + q_ * (t - omega0_); }
    /// h^{-1}(t) = (t - omega) / q.
    [[nodiscard]] double h_inv(double t) const noexcept { return omega0_ + (t - omega0_) / q_; }

    /// Absolute tolerance used to recognise t == omega0.
    [[nodiscard]] double fixed_point_tol() const noexcept;
    [[nodiscard]] bool is_fixed_point(double t) const noexcept;

private:
    double q_;
    double omega_;
    double omega0_;
};

/// [k]_q = (1 - q^k) / (1 - q).
[[nodiscard]] double q_bracket(int k, double q);

/// (q;q)_k = prod_{j=1..k} (1 - q^j), with (q;q)_0 = 1.
[[nodiscard]] double q_pochhammer(double q, int k);

/// k-fold composition of h (k >= 0) or of h^{-1} (k < 0).
[[nodiscard]] double h_apply(const HahnParams& params, double t, int k);

/// The orbit {h^k(anchor)}, k = 0..depth, descending (or ascending) to omega0.
class LatticeGrid {
public:
    LatticeGrid(const HahnParams& params, double anchor, int depth);

    /// Depth with q^K |anchor - omega0| below `relative_tol` |anchor - omega0|, capped at `cap`.
    static int depth_for(const HahnParams& params, double relative_tol = 1e-14, int cap = 400);

    [[nodiscard]] double anchor() const noexcept { return points_.front(); }
    [[nodiscard]] int depth() const noexcept { return static_cast<int>(points_.size()) - 1; }
    [[nodiscard]] std::span<const double> points() const noexcept { return points_; }
    /// t_k - omega0.
    [[nodiscard]] std::span<const double> offsets() const noexcept { return offsets_; }
    /// Jackson-Norlund weight t_k - t_{k+1} = (1 - q)(t_k - omega0).
    [[nodiscard]] double weight(int k) const noexcept { return (1.0 - q_) * offsets_[static_cast<std::size_t>(k)]; }
    [[nodiscard]] double operator[](int k) const noexcept { return points_[static_cast<std::size_t>(k)]; }
    [[nodiscard]] double omega0() const noexcept { return omega0_; }

    /// Index of a grid point equal to t up to a few ulps, if any.
    [[nodiscard]] std::optional<int> index_of(double t) const noexcept;

private:
    double q_;
    double omega0_;
    std::vector<double> points_;
    std::vector<double> offsets_;
};

/// A real function on [omega0, a], optionally declaring its classical derivative at omega0.
struct RealFunction {
    std::function<double(double)> fn;
    std::optional<double> derivative_at_omega0;

    double operator()(double t) const { return fn(t); }

    static RealFunction constant(double c);
};

/// Polynomial with ascending coefficients.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coefficients);

    [[nodiscard]] double operator()(double t) const noexcept;
    [[nodiscard]] double derivative(double t) const noexcept;
    [[nodiscard]] std::span<const double> coefficients() const noexcept { return coeffs_; }
    [[nodiscard]] bool is_zero() const noexcept;

    /// Wraps the polynomial, declaring its derivative at params.omega0().
    [[nodiscard]] RealFunction as_function(const HahnParams& params) const;

private:
    std::vector<double> coeffs_;
};

/// D_{q,omega} f(t); at omega0 the declared derivative or the lattice-limit estimate.
[[nodiscard]] double hahn_derivative(const RealFunction& f, double t, const HahnParams& params);

/// D_{1/q,-omega/q} f(t) = (D_{q,omega} f)(h^{-1}(t)).
[[nodiscard]] double dual_derivative(const RealFunction& f, double t, const HahnParams& params);

/// Result of a truncated lattice series with its condition estimate.
struct SeriesSum {
    double value = 0.0;
    long terms_used = 0;
    double condition = 1.0;
};

/// Jackson-Norlund integral over [omega0, x].
[[nodiscard]] SeriesSum jn_integral_from_fixed_point(const RealFunction& f, double x, const HahnParams& params,
                                                     double tol = kDefaultSeriesTol);

/// Jackson-Norlund integral over [a, b] = F(b) - F(a).
[[nodiscard]] double jn_integral(const RealFunction& f, double a, double b, const HahnParams& params,
                                 double tol = kDefaultSeriesTol);

/// <f, g> over [omega0, a] for real-valued f, g.
[[nodiscard]] double inner_product(const RealFunction& f, const RealFunction& g, const HahnParams& params, double a,
                                   double tol = kDefaultSeriesTol);

/// Vector inner product int y^T z over [omega0, a].
[[nodiscard]] double inner_product(const RealFunction& y1, const RealFunction& y2, const RealFunction& z1,
                                   const RealFunction& z2, const HahnParams& params, double a,
                                   double tol = kDefaultSeriesTol);

/// Product of two real functions; no derivative is declared at omega0.
[[nodiscard]] RealFunction multiply(const RealFunction& f, const RealFunction& g);

}  // namespace qwd
