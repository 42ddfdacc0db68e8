#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qwdirac/dirac.hpp"
#include "qwdirac/hahn.hpp"

namespace qwd {

/// Separated boundary conditions
///   B1(y) = k11 y1(omega0) + k12 y2(omega0) = 0,
///   B2(y) = k21 y1(a) + k22 y2(h^{-1}(a)) = 0.
struct BoundarySpec {
    double k11 = 0.0;
    double k12 = 0.0;
    double k21 = 0.0;
    double k22 = 0.0;
    double a = 0.0;

    /// Throws InvalidParameter when a row vanishes or a is not to the right of omega0.
    void validate(const HahnParams& params) const;
};

/// The two built-in free problems on [omega0, a].
enum class ExampleProblem {
    /// y1(omega0) = 0, y2(h^{-1}(a)) = 0; Delta is a q,omega-cosine (CLI selector "3.2").
    cosine_family,
    /// y2(omega0) = 0, y2(h^{-1}(a)) = 0; Delta is a q,omega-sine (CLI selector "3.3").
    sine_family,
};

[[nodiscard]] BoundarySpec example_boundary(ExampleProblem example, double a);

/// Leading-order eigenvalue of a built-in problem: q^{-n+1} / ((1-q)(a-omega0)) for the
/// cosine family and q^{-n+1/2} / ((1-q)(a-omega0)) for the sine family.
[[nodiscard]] double asymptotic_eigenvalue(int n, ExampleProblem example, const HahnParams& params, double a);

/// Leading-order eigenvalue for any free problem whose Delta reduces to a single trig
/// series; nullopt when Delta mixes an even and an odd series in lambda.
[[nodiscard]] std::optional<double> free_seed(int n, const BoundarySpec& bc, const HahnParams& params);

/// phi(t, lambda) with phi(omega0) = (k12, -k11), sampled on the lattice of h^{-1}(a)
/// (index 0 is h^{-1}(a), index 1 is a).
[[nodiscard]] VectorSolution phi_solution(double lambda, const BoundarySpec& bc, const Potentials& pot,
                                          const HahnParams& params, const PicardOptions& options = {});

/// Delta(lambda) = k21 phi1(a, lambda) + k22 phi2(h^{-1}(a), lambda).
[[nodiscard]] double characteristic(double lambda, const BoundarySpec& bc, const Potentials& pot,
                                    const HahnParams& params, const PicardOptions& options = {});

/// Largest sum of absolute series terms among the free trig series that enter Delta at lambda.
/// Rounding in Delta is of order eps times this value.
[[nodiscard]] double series_growth(double lambda, const BoundarySpec& bc, const HahnParams& params);

struct SpectrumOptions {
    /// Relative width at which a bracket is considered refined.
    double tol_root = 1e-10;
    PicardOptions picard{};
    /// Eigenvalues whose series growth exceeds this are outside the trustworthy range.
    double growth_budget = 1e12;
    /// Throw PrecisionBudgetExceeded instead of recording a warning.
    bool strict_budget = true;
    /// Throw MissedRootSuspected instead of flagging the result.
    bool strict_missed_roots = false;
    /// Also search lambda < 0.
    bool scan_negative = false;
    /// Compute pair orthogonality and norm-identity defects.
    bool diagnostics = true;
};

struct EigenvalueReport {
    int n = 0;
    double lambda = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double delta_residual = 0.0;
    double delta_prime = 0.0;
    /// Rounding level of Delta near lambda.
    double noise_floor = 0.0;
    /// Rounding level of the central-difference Delta'.
    double derivative_noise = 0.0;
    bool sign_change = false;
    bool simple = false;
    double growth = 0.0;
    std::optional<double> asym_seed;
    std::optional<double> rel_dev_from_asym;
    std::optional<double> norm_identity_defect;
};

struct PairDefect {
    int i = 0;
    int j = 0;
    double defect = 0.0;
};

struct SpectrumResult {
    double q = 0.0;
    double omega = 0.0;
    double omega0 = 0.0;
    BoundarySpec bc;
    int n_max = 0;
    std::vector<EigenvalueReport> eigenvalues;
    /// Filled only when negative scanning was requested, ordered by increasing |lambda|.
    std::vector<EigenvalueReport> negative_eigenvalues;
    std::vector<PairDefect> pair_orthogonality;
    std::vector<std::string> warnings;
    bool trivial_root = false;
    bool symmetric = false;
    bool missed_root_suspected = false;
    bool duplicates_merged = false;
    bool escalated = false;
    int scan_points = 0;
};

[[nodiscard]] SpectrumResult find_eigenvalues(int n_max, const BoundarySpec& bc, const Potentials& pot,
                                              const HahnParams& params, const SpectrumOptions& options = {});

/// Normalized Jackson-Norlund inner product of y and z over [omega0, a]; both must share a lattice containing a.
[[nodiscard]] double orthogonality_defect(const VectorSolution& y, const VectorSolution& z, const HahnParams& params,
                                          double a);

/// Relative disagreement between the boundary bracket of lambda-derivatives of phi and
/// the squared norm of phi over [omega0, a]. Throws DerivativeStepUnstable.
[[nodiscard]] double norm_identity_defect(double lambda_n, const BoundarySpec& bc, const Potentials& pot,
                                          const HahnParams& params, const PicardOptions& options = {});

/// Relative disagreement in (lambda - mu) <y, z> = W(y, z)(a) - W(y, z)(omega0) for solutions at
/// distinct lambda sharing the lattice of h^{-1}(a).
[[nodiscard]] double green_bracket_defect(const VectorSolution& y, const VectorSolution& z, double a);

}  // namespace qwd
