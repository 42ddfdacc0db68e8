#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace qwd {

/// Neumaier-compensated accumulator that also tracks sum(|terms|).
///
/// The ratio abs_sum() / |value()| is the condition number of the sum: it
/// bounds how many digits the terms lost to cancellation.
class CompensatedSum {
public:
    void add(double term) noexcept {
        const double t = sum_ + term;
        if (std::abs(sum_) >= std::abs(term)) {
            compensation_ += (sum_ - t) + term;
        } else {
            compensation_ += (term - t) + sum_;
        }
        sum_ = t;
        abs_sum_ += std::abs(term);
        ++count_;
    }

    CompensatedSum& operator+=(double term) noexcept {
        add(term);
        return *this;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }
    [[nodiscard]] double abs_sum() const noexcept { return abs_sum_; }
    [[nodiscard]] long count() const noexcept { return count_; }

    /// sum(|terms|) / |sum|; 1 for an all-zero sum, +inf for exact cancellation.
    [[nodiscard]] double condition() const noexcept {
        const double v = std::abs(value());
        if (abs_sum_ == 0.0) {
            return 1.0;
        }
        if (v == 0.0) {
            return std::numeric_limits<double>::infinity();
        }
        return std::max(1.0, abs_sum_ / v);
    }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
    double abs_sum_ = 0.0;
    long count_ = 0;
};

}  // namespace qwd
