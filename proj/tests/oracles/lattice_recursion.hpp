#pragma once

#include <cmath>
#include <functional>
#include <vector>

// Reference computations that share no code with the library: trig series summed from
// closed-form terms in extended precision, and the Dirac system marched point by point
// along the lattice from its two difference equations.
namespace qwd::oracle {

inline long double q_shifted_factorial(long double q, int k) {
    long double prod = 1.0L;
    for (int j = 1; j <= k; ++j) prod *= 1.0L - std::pow(q, static_cast<long double>(j));
    return prod;
}

// sum (-1)^n q^{n^2} z^{2n} / (q;q)_{2n}
inline long double cosine_series(long double z, long double q) {
    long double sum = 0.0L;
    for (int n = 0; n < 200; ++n) {
        const long double term = (n % 2 == 0 ? 1.0L : -1.0L) * std::pow(q, static_cast<long double>(n) * n) *
                                 std::pow(z, 2.0L * n) / q_shifted_factorial(q, 2 * n);
        sum += term;
        if (n > 4 && std::fabs(term) < 1e-24L * std::fabs(sum)) break;
    }
    return sum;
}

// sum (-1)^n q^{n(n+1)} z^{2n+1} / (q;q)_{2n+1}
inline long double sine_series(long double z, long double q) {
    long double sum = 0.0L;
    for (int n = 0; n < 200; ++n) {
        const long double term = (n % 2 == 0 ? 1.0L : -1.0L) * std::pow(q, static_cast<long double>(n) * (n + 1)) *
                                 std::pow(z, 2.0L * n + 1.0L) / q_shifted_factorial(q, 2 * n + 1);
        sum += term;
        if (n > 4 && std::fabs(term) < 1e-24L * std::fabs(sum)) break;
    }
    return sum;
}

struct Pair {
    double y1;
    double y2;
};

// c1 (C(t,l), -sqrt(q) S(t, sqrt(q) l)) + c2 (S(t,l), C(t, sqrt(q) l)).
inline Pair free_solution(double c1, double c2, double t, double lambda, double q, double omega) {
    const long double lq = q;
    const long double omega0 = static_cast<long double>(omega) / (1.0L - lq);
    const long double z = static_cast<long double>(lambda) * (1.0L - lq) * (static_cast<long double>(t) - omega0);
    const long double sq = std::sqrt(lq);
    const long double y1 = c1 * cosine_series(z, lq) + c2 * sine_series(z, lq);
    const long double y2 = -c1 * sq * sine_series(sq * z, lq) + c2 * cosine_series(sq * z, lq);
    return {static_cast<double>(y1), static_cast<double>(y2)};
}

struct Marched {
    std::vector<double> t;
    std::vector<double> y1;
    std::vector<double> y2;
};

// Index 0 is x, index depth is the point nearest omega0. The innermost value is the
// first-order Taylor expansion of the solution about omega0.
inline Marched march(const std::function<double(double)>& p, const std::function<double(double)>& r, double c1,
                     double c2, double lambda, double x, double q, double omega, int depth) {
    const long double lq = q;
    const long double omega0 = static_cast<long double>(omega) / (1.0L - lq);
    std::vector<long double> off(static_cast<std::size_t>(depth) + 1);
    off[0] = static_cast<long double>(x) - omega0;
    for (int k = 1; k <= depth; ++k) off[static_cast<std::size_t>(k)] = off[static_cast<std::size_t>(k) - 1] * lq;

    const auto at = [&](int k) { return static_cast<double>(omega0 + off[static_cast<std::size_t>(k)]); };
    std::vector<long double> y1(off.size());
    std::vector<long double> y2(off.size());
    const auto K = static_cast<std::size_t>(depth);
    const double w0 = static_cast<double>(omega0);
    y1[K] = c1 + off[K] * (lambda - r(w0)) * c2;
    y2[K] = c2 + off[K] * lq * (p(w0) - lambda) * c1;
    for (int k = depth - 1; k >= 0; --k) {
        const auto i = static_cast<std::size_t>(k);
        const long double w = (1.0L - lq) * off[i];
        // -(1/q) D_{1/q,-omega/q} y2 + (p - lambda) y1 = 0 at t_{k+1}
        y2[i] = y2[i + 1] + lq * w * (p(at(k + 1)) - lambda) * y1[i + 1];
        // D_{q,omega} y1 + (r - lambda) y2 = 0 at t_k
        y1[i] = y1[i + 1] + w * (lambda - r(at(k))) * y2[i];
    }
    Marched m;
    for (int k = 0; k <= depth; ++k) {
        m.t.push_back(at(k));
        m.y1.push_back(static_cast<double>(y1[static_cast<std::size_t>(k)]));
        m.y2.push_back(static_cast<double>(y2[static_cast<std::size_t>(k)]));
    }
    return m;
}

}  // namespace qwd::oracle
