#include "qwdirac/hahn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "qwdirac/errors.hpp"
#include "qwdirac/summation.hpp"

namespace qwd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr long kSeriesCap = 100000;

}  // namespace

HahnParams::HahnParams(double q, double omega) : q_(q), omega_(omega), omega0_(0.0) {
    if (!(q > 0.0 && q < 1.0)) {
        throw InvalidParameter("q must lie in the open interval (0,1), got " + std::to_string(q));
    }
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw InvalidParameter("omega must be a finite value > 0, got " + std::to_string(omega));
    }
    omega0_ = omega / (1.0 - q);
}

double HahnParams::fixed_point_tol() const noexcept { return 1e-13 * std::max(1.0, std::abs(omega0_)); }

bool HahnParams::is_fixed_point(double t) const noexcept { return std::abs(t - omega0_) <= fixed_point_tol(); }

double q_bracket(int k, double q) {
    if (k < 0) {
        throw InvalidParameter("q_bracket requires k >= 0");
    }
    // Direct finite sum: exact for the small k used in tests, no cancellation in 1 - q^k.
    double sum = 0.0;
    double power = 1.0;
    for (int j = 0; j < k; ++j) {
        sum += power;
        power *= q;
    }
    return sum;
}

double q_pochhammer(double q, int k) {
    if (k < 0) {
        throw InvalidParameter("q_pochhammer requires k >= 0");
    }
    double product = 1.0;
    double power = q;
    for (int j = 1; j <= k; ++j) {
        product *= 1.0 - power;
        power *= q;
    }
    return product;
}

double h_apply(const HahnParams& params, double t, int k) {
    const double factor = std::pow(params.q(), static_cast<double>(k));
    return params.omega0() + factor * (t - params.omega0());
}

LatticeGrid::LatticeGrid(const HahnParams& params, double anchor, int depth)
    : q_(params.q()), omega0_(params.omega0()) {
    if (depth < 1) {
        throw InvalidParameter("lattice depth must be >= 1");
    }
    points_.reserve(static_cast<std::size_t>(depth) + 1);
    offsets_.reserve(static_cast<std::size_t>(depth) + 1);
    double offset = anchor - omega0_;
    for (int k = 0; k <= depth; ++k) {
        offsets_.push_back(offset);
        points_.push_back(k == 0 ? anchor : omega0_ + offset);
        offset *= q_;
    }
}

int LatticeGrid::depth_for(const HahnParams& params, double relative_tol, int cap) {
    const double k = std::ceil(std::log(relative_tol) / std::log(params.q()));
    return std::clamp(static_cast<int>(k), 1, cap);
}

std::optional<int> LatticeGrid::index_of(double t) const noexcept {
    const double off = t - omega0_;
    const double scale = std::max(std::abs(offsets_.front()), std::abs(omega0_));
    for (std::size_t k = 0; k < offsets_.size(); ++k) {
        const double tol = 8.0 * kEps * std::max(std::abs(offsets_[k]), 1e-3 * scale) + 4.0 * kEps * std::abs(omega0_);
        if (std::abs(off - offsets_[k]) <= tol) {
            return static_cast<int>(k);
        }
    }
    return std::nullopt;
}

RealFunction RealFunction::constant(double c) {
    return RealFunction{[c](double) { return c; }, 0.0};
}

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {}

double Polynomial::operator()(double t) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * t + *it;
    }
    return acc;
}

double Polynomial::derivative(double t) const noexcept {
    double acc = 0.0;
    for (std::size_t j = coeffs_.size(); j-- > 1;) {
        acc = acc * t + static_cast<double>(j) * coeffs_[j];
    }
    return acc;
}

bool Polynomial::is_zero() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

RealFunction Polynomial::as_function(const HahnParams& params) const {
    Polynomial copy = *this;
    return RealFunction{[copy](double t) { return copy(t); }, derivative(params.omega0())};
}

namespace {

// f'(omega0) as the limit of D_{q,omega} f along the orbit of omega0 + step,
// accelerated by Richardson extrapolation in the offset s_k = q^k s_0.
double fixed_point_limit(const RealFunction& f, const HahnParams& params) {
    constexpr int kMaxLevels = 48;
    constexpr int kOrder = 4;
    const double q = params.q();
    const double w0 = params.omega0();
    const double step = 0.5 * std::max(1.0, std::abs(w0));

    std::vector<std::array<double, kOrder + 1>> table;
    std::vector<double> diagonal;
    double scale = 0.0;
    double offset = step;
    for (int k = 0; k < kMaxLevels; ++k, offset *= q) {
        const double t = w0 + offset;
        const double ht = w0 + q * offset;
        const double quotient = (f(ht) - f(t)) / ((q - 1.0) * offset);
        if (!std::isfinite(quotient)) {
            break;
        }
        if (k == 0) {
            scale = std::abs(quotient) + std::abs(f(t)) / offset;
        }
        std::array<double, kOrder + 1> row{};
        row[0] = quotient;
        const int order = std::min(k, kOrder);
        for (int j = 1; j <= order; ++j) {
            const double ratio = std::pow(q, -j);  // s_{k-j} / s_k
            row[static_cast<std::size_t>(j)] =
                row[static_cast<std::size_t>(j - 1)] +
                (row[static_cast<std::size_t>(j - 1)] - table.back()[static_cast<std::size_t>(j - 1)]) / (ratio - 1.0);
        }
        table.push_back(row);
        diagonal.push_back(row[static_cast<std::size_t>(order)]);
        if (diagonal.size() >= 3) {
            const double a = diagonal[diagonal.size() - 3];
            const double b = diagonal[diagonal.size() - 2];
            const double c = diagonal.back();
            const double tol = 1e-8 * std::max({std::abs(a), std::abs(b), std::abs(c), scale});
            if (std::abs(a - b) <= tol && std::abs(b - c) <= tol) {
                return c;
            }
        }
    }
    throw FixedPointDerivativeUnavailable(
        "difference quotients along the lattice did not stabilise at the fixed point and no derivative was declared");
}

}  // namespace

double hahn_derivative(const RealFunction& f, double t, const HahnParams& params) {
    if (params.is_fixed_point(t)) {
        if (f.derivative_at_omega0) {
            return *f.derivative_at_omega0;
        }
        return fixed_point_limit(f, params);
    }
    // (q - 1) t + omega written as (q - 1)(t - omega0): no cancellation near omega0.
    return (f(params.h(t)) - f(t)) / ((params.q() - 1.0) * (t - params.omega0()));
}

double dual_derivative(const RealFunction& f, double t, const HahnParams& params) {
    return hahn_derivative(f, params.h_inv(t), params);
}

SeriesSum jn_integral_from_fixed_point(const RealFunction& f, double x, const HahnParams& params, double tol) {
    if (!(tol > 0.0)) {
        throw InvalidParameter("series tolerance must be > 0");
    }
    if (params.is_fixed_point(x)) {
        return {};
    }
    const double q = params.q();
    const double base = x - params.omega0();
    CompensatedSum sum;
    double offset = base;
    int quiet_streak = 0;
    for (long k = 0; k < kSeriesCap; ++k, offset *= q) {
        const double weighted = (1.0 - q) * offset * f(params.omega0() + offset);
        if (!std::isfinite(weighted)) {
            throw SeriesDivergence("Jackson-Norlund series produced a non-finite term at k = " + std::to_string(k));
        }
        sum.add(weighted);
        const double magnitude = std::abs(weighted);
        const bool below_relative = magnitude < tol * (std::abs(sum.value()) + std::numeric_limits<double>::min());
        const bool below_rounding = magnitude < 0.5 * kEps * sum.abs_sum();
        quiet_streak = (magnitude == 0.0 || below_relative || below_rounding) ? quiet_streak + 1 : 0;
        if (quiet_streak >= 3) {
            return {sum.value(), sum.count(), sum.condition()};
        }
    }
    throw SeriesDivergence("Jackson-Norlund series did not stabilise within " + std::to_string(kSeriesCap) + " terms");
}

double jn_integral(const RealFunction& f, double a, double b, const HahnParams& params, double tol) {
    const double low = params.omega0() - params.fixed_point_tol();
    if (a < low || b < low) {
        throw InvalidParameter("Jackson-Norlund integration limits must be >= omega0");
    }
    if (a == b) {
        return 0.0;
    }
    return jn_integral_from_fixed_point(f, b, params, tol).value - jn_integral_from_fixed_point(f, a, params, tol).value;
}

RealFunction multiply(const RealFunction& f, const RealFunction& g) {
    RealFunction product{[f, g](double t) { return f(t) * g(t); }, std::nullopt};
    return product;
}

double inner_product(const RealFunction& f, const RealFunction& g, const HahnParams& params, double a, double tol) {
    if (!(a > params.omega0())) {
        throw InvalidParameter("inner product requires a > omega0");
    }
    return jn_integral_from_fixed_point(multiply(f, g), a, params, tol).value;
}

double inner_product(const RealFunction& y1, const RealFunction& y2, const RealFunction& z1, const RealFunction& z2,
                     const HahnParams& params, double a, double tol) {
    if (!(a > params.omega0())) {
        throw InvalidParameter("inner product requires a > omega0");
    }
    const RealFunction integrand{[=](double t) { return y1(t) * z1(t) + y2(t) * z2(t); }, std::nullopt};
    return jn_integral_from_fixed_point(integrand, a, params, tol).value;
}

}  // namespace qwd
