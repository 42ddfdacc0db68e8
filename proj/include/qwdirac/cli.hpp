#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qwdirac/spectrum.hpp"

namespace qwd::cli {

enum ExitCode : int {
    kOk = 0,
    kPropertyFailure = 1,
    kBadInput = 2,
    kPrecisionWarning = 3,
    kPrecisionBudget = 4,
    kMissedRoot = 5,
};

/// A potential as given on the command line or in a config file: ascending polynomial coefficients
/// (a constant is a single coefficient).
struct PotentialSpec {
    std::vector<double> coefficients{0.0};
};

struct Tolerances {
    double series = 1e-12;
    double picard = 1e-10;
    double root = 1e-10;
};

/// Everything needed to pose one boundary-value problem.
struct ProblemConfig {
    double q = 0.5;
    double omega = 0.5;
    double a = 0.0;
    double k11 = 0.0;
    double k12 = 0.0;
    double k21 = 0.0;
    double k22 = 0.0;
    PotentialSpec p;
    PotentialSpec r;
    Tolerances tolerances;
    int n_max = 4;

    /// Throws InvalidParameter when (q, omega) or the boundary rows are invalid.
    void validate() const;
    [[nodiscard]] HahnParams params() const;
    [[nodiscard]] BoundarySpec boundary() const;
    [[nodiscard]] Potentials potentials() const;
};

/// Parses a real number, accepting "pi" and "-pi". Throws InvalidParameter.
[[nodiscard]] double parse_real(std::string_view text);

/// Parses "c" or "c0,c1,..." into ascending coefficients. Throws InvalidParameter.
[[nodiscard]] PotentialSpec parse_potential(std::string_view text);

/// Reads a ProblemConfig from JSON text. Throws InvalidParameter.
[[nodiscard]] ProblemConfig parse_problem_config(std::string_view json_text);

/// Serializes a spectrum as JSON text (two-space indent, 17 significant digits, trailing newline).
[[nodiscard]] std::string spectrum_json(const ProblemConfig& config, const SpectrumResult& result);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qwd::cli
