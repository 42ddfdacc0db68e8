#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qwd {

enum class Suite { calculus, trig, solver, spectral, all };

[[nodiscard]] std::optional<Suite> parse_suite(std::string_view name) noexcept;
[[nodiscard]] std::string_view to_string(Suite suite) noexcept;

inline constexpr std::uint64_t kDefaultSeed = 20241017;

struct PropertyResult {
    std::string suite;
    std::string property;
    bool passed = false;
    /// Largest defect over all cases, in the property's own (relative) measure.
    double worst_defect = 0.0;
    double threshold = 0.0;
    int cases = 0;
    std::string note;
};

struct VerifyReport {
    std::uint64_t seed = kDefaultSeed;
    std::vector<PropertyResult> properties;

    [[nodiscard]] bool all_passed() const noexcept;
};

/// Runs the property batch of one suite (or every suite) on inputs drawn from `seed`.
[[nodiscard]] VerifyReport run_verify(Suite suite, std::uint64_t seed = kDefaultSeed);

}  // namespace qwd
