#pragma once

#include <string_view>

#include "qwdirac/hahn.hpp"

namespace qwd {

enum class TrigKind { cosine, sine };

[[nodiscard]] std::string_view to_string(TrigKind kind) noexcept;

/// A truncated q,omega-trig series value with its accuracy diagnostics.
struct TrigEval {
    double value = 0.0;
    long terms_used = 0;
    /// sum(|terms|) / |value|, >= 1.
    double cancellation = 1.0;
    /// Tail bound plus rounding estimate.
    double est_abs_error = 0.0;
    double abs_sum = 0.0;
    /// Fewer than ~1 significant digit survived (or a term overflowed).
    bool precision_lost = false;
};

/// z = mu (t (1 - q) - omega) = mu (1 - q)(t - omega0).
[[nodiscard]] double combined_argument(double t, double mu, const HahnParams& params) noexcept;

/// Sums the cosine or sine series at combined argument z without throwing on precision loss.
[[nodiscard]] TrigEval evaluate_trig_series(TrigKind kind, double z, double q, double tol = kDefaultSeriesTol);

/// C_{q,omega}(t, mu). Throws PrecisionLoss when the value carries no trustworthy digits.
[[nodiscard]] TrigEval cos_qw(double t, double mu, const HahnParams& params, double tol = kDefaultSeriesTol);

/// S_{q,omega}(t, mu). Throws PrecisionLoss when the value carries no trustworthy digits.
[[nodiscard]] TrigEval sin_qw(double t, double mu, const HahnParams& params, double tol = kDefaultSeriesTol);

/// Convenience: value of C or S, throwing on precision loss.
[[nodiscard]] double trig_value(TrigKind kind, double t, double mu, const HahnParams& params,
                                double tol = kDefaultSeriesTol);

/// Which asymptotic seed a located zero sits next to.
enum class ZeroSeed { q_pow_minus_n, q_pow_minus_n_plus_half };

[[nodiscard]] std::string_view to_string(ZeroSeed seed) noexcept;

struct ZeroReport {
    int n = 0;
    TrigKind kind = TrigKind::sine;
    /// Zero in t for mu = 1.
    double location = 0.0;
    /// Zero in the combined argument.
    double argument = 0.0;
    double bracket_lo = 0.0;  // in t
    double bracket_hi = 0.0;
    double value_lo = 0.0;  // function values at the bracket ends (opposite signs)
    double value_hi = 0.0;
    /// |function(location)|.
    double residual = 0.0;
    /// residual / sum(|terms|).
    double normalized_residual = 0.0;
    ZeroSeed matched_seed = ZeroSeed::q_pow_minus_n;
    /// z / seed - 1 for each candidate seed.
    double deviation_from_q_pow_minus_n = 0.0;
    double deviation_from_q_pow_minus_n_plus_half = 0.0;
};

/// n-th positive zero (n >= 1) of the combined-argument function, refined to relative `tol`.
[[nodiscard]] ZeroReport trig_zero_argument(int n, TrigKind kind, double q, double tol = 1e-13);

/// n-th positive zero in t (mu = 1) of C_{q,omega} or S_{q,omega}.
[[nodiscard]] ZeroReport trig_zero(int n, TrigKind kind, const HahnParams& params, double tol = 1e-13);

}  // namespace qwd
