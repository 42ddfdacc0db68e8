#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles/lattice_recursion.hpp"
#include "qwdirac/dirac.hpp"
#include "qwdirac/errors.hpp"

using namespace qwd;

namespace {

PicardOptions tight() {
    PicardOptions o;
    o.tol = 1e-12;
    return o;
}

double max_gap(const VectorSolution& y, const oracle::Marched& m) {
    double gap = 0.0;
    for (int k = 0; k <= y.grid().depth(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        gap = std::max({gap, std::abs(y.y1(k) - m.y1[i]), std::abs(y.y2(k) - m.y2[i])});
    }
    return gap;
}

}  // namespace

TEST_CASE("fundamental pair is the identity at omega0 and for lambda = 0") {
    const HahnParams p(0.5, 0.5);
    const FundamentalMatrix at_fixed = fundamental_pair(p.omega0(), 3.7, p);
    CHECK(at_fixed.phi11 == 1.0);
    CHECK(at_fixed.phi12 == 0.0);
    CHECK(at_fixed.phi21 == 0.0);
    CHECK(at_fixed.phi22 == 1.0);
    for (const double t : {1.5, 3.0, 8.0}) {
        const FundamentalMatrix m = fundamental_pair(t, 0.0, p);
        CHECK(m.phi11 == 1.0);
        CHECK(m.phi12 == 0.0);
        CHECK(m.phi21 == 0.0);
        CHECK(m.phi22 == 1.0);
    }
}

TEST_CASE("free fundamental pair has unit Wronskian") {
    for (const double q : {0.3, 0.5, 0.7}) {
        const HahnParams p(q, 0.5);
        for (const double lambda : {-1.7, 0.4, 2.3}) {
            const double a = p.omega0() + 1.9;
            const VectorSolution y = picard_solve(Potentials::zero(), 1.0, 0.0, lambda, a, p, tight());
            const VectorSolution z = picard_solve(Potentials::zero(), 0.0, 1.0, lambda, a, p, tight());
            for (int k = 1; k <= y.grid().depth(); k += 5) {
                CHECK(wronskian_at(y, z, k) == doctest::Approx(1.0).epsilon(1e-9));
            }
            CHECK(wronskian(y, z, a, p) == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(wronskian_at(y, y, 3) == 0.0);
        }
    }
}

TEST_CASE("solve_free returns the initial data at omega0") {
    const HahnParams p(0.5, 0.5);
    const auto [a1, a2] = solve_free(1.0, 0.0, p.omega0(), 2.0, p);
    CHECK(a1 == 1.0);
    CHECK(a2 == 0.0);
    const auto [b1, b2] = solve_free(0.0, 1.0, p.omega0(), 2.0, p);
    CHECK(b1 == 0.0);
    CHECK(b2 == 1.0);
}

TEST_CASE("solve_free matches the extended-precision closed form") {
    for (const double q : {0.3, 0.5, 0.7}) {
        const HahnParams p(q, 0.5);
        for (const double t : {p.omega0() + 0.2, p.omega0() + 1.0, p.omega0() + 2.5}) {
            const auto [y1, y2] = solve_free(0.6, -0.8, t, 1.3, p);
            const oracle::Pair ref = oracle::free_solution(0.6, -0.8, t, 1.3, q, 0.5);
            CHECK(y1 == doctest::Approx(ref.y1).epsilon(1e-12));
            CHECK(y2 == doctest::Approx(ref.y2).epsilon(1e-12));
        }
    }
}

TEST_CASE("picard_solve with zero potential reproduces the closed form at every grid point") {
    const HahnParams p(0.5, 0.5);
    const double a = std::numbers::pi;
    const VectorSolution y = picard_solve(Potentials::zero(), 0.3, -0.7, 1.9, a, p, tight());
    for (int k = 0; k <= y.grid().depth(); ++k) {
        const oracle::Pair ref = oracle::free_solution(0.3, -0.7, y.grid()[k], 1.9, 0.5, 0.5);
        CHECK(std::abs(y.y1(k) - ref.y1) <= 1e-10);
        CHECK(std::abs(y.y2(k) - ref.y2) <= 1e-10);
    }
    CHECK(y.iterations() >= 1);
    CHECK(y.final_delta() <= 1e-12 * (1.0 + y.sup_abs()));
}

TEST_CASE("picard_solve matches the pointwise lattice march for constant and polynomial potentials") {
    PicardOptions o = tight();
    o.depth = 40;
    SUBCASE("constant") {
        const HahnParams p(0.5, 0.5);
        const VectorSolution y = picard_solve(Potentials::constant(0.8, -0.3), 1.0, 0.5, 1.2, 2.7, p, o);
        const oracle::Marched m = oracle::march([](double) { return 0.8; }, [](double) { return -0.3; }, 1.0, 0.5,
                                                1.2, 2.7, 0.5, 0.5, 40);
        CHECK(max_gap(y, m) <= 1e-9);
    }
    SUBCASE("polynomial") {
        const HahnParams p(0.7, 0.3);
        const Polynomial pp({0.2, -0.5, 0.1});
        const Polynomial rr({1.0, 0.3});
        const VectorSolution y =
            picard_solve(Potentials::polynomial(pp, rr, p), -0.4, 1.0, -0.9, p.omega0() + 1.5, p, o);
        const oracle::Marched m = oracle::march([&pp](double t) { return pp(t); }, [&rr](double t) { return rr(t); },
                                                -0.4, 1.0, -0.9, p.omega0() + 1.5, 0.7, 0.3, 40);
        CHECK(max_gap(y, m) <= 1e-9);
    }
}

TEST_CASE("r equal to lambda freezes y1 and makes y2 linear in the offset") {
    // Y1 = c1 + int 0 = c1, Y2 = q (p0 - lambda) c1 (t - omega0) when c2 = 0.
    const HahnParams p(0.5, 0.5);
    const double lambda = 1.3;
    const double p0 = 0.4;
    const VectorSolution y = picard_solve(Potentials::constant(p0, lambda), 2.0, 0.0, lambda, 3.0, p, tight());
    for (int k = 0; k <= y.grid().depth(); ++k) {
        CHECK(y.y1(k) == doctest::Approx(2.0).epsilon(1e-12));
        const double offset = y.grid().offsets()[static_cast<std::size_t>(k)];
        CHECK(std::abs(y.y2(k) - 0.5 * (p0 - lambda) * 2.0 * offset) <= 1e-12);
    }
}

TEST_CASE("four-kernel form agrees with the Volterra form") {
    const HahnParams p(0.3, 1.0);
    const Potentials pot = Potentials::polynomial(Polynomial({0.5, 0.2}), Polynomial({-0.3}), p);
    PicardOptions kernel = tight();
    kernel.form = PicardForm::four_kernel;
    const VectorSolution v = picard_solve(pot, 0.7, 0.1, 1.4, p.omega0() + 1.2, p, tight());
    const VectorSolution f = picard_solve(pot, 0.7, 0.1, 1.4, p.omega0() + 1.2, p, kernel);
    for (int k = 0; k <= v.grid().depth(); ++k) {
        CHECK(std::abs(v.y1(k) - f.y1(k)) <= 1e-10);
        CHECK(std::abs(v.y2(k) - f.y2(k)) <= 1e-10);
    }
}

TEST_CASE("solutions are linear in the initial data") {
    const HahnParams p(0.5, 0.5);
    const Potentials pot = Potentials::constant(0.3, 0.6);
    const VectorSolution a = picard_solve(pot, 1.0, 0.0, 0.9, 2.5, p, tight());
    const VectorSolution b = picard_solve(pot, 0.0, 1.0, 0.9, 2.5, p, tight());
    const VectorSolution c = picard_solve(pot, 2.0, -3.0, 0.9, 2.5, p, tight());
    for (int k = 0; k <= a.grid().depth(); ++k) {
        CHECK(std::abs(c.y1(k) - (2.0 * a.y1(k) - 3.0 * b.y1(k))) <= 1e-10);
        CHECK(std::abs(c.y2(k) - (2.0 * a.y2(k) - 3.0 * b.y2(k))) <= 1e-10);
    }
}

TEST_CASE("Wronskian is constant along solutions with potentials") {
    const HahnParams p(0.7, 0.5);
    const Potentials pot = Potentials::polynomial(Polynomial({0.1, 0.4}), Polynomial({-0.2, 0.0, 0.3}), p);
    const VectorSolution y = picard_solve(pot, 0.4, 0.9, -1.1, p.omega0() + 2.0, p, tight());
    const VectorSolution z = picard_solve(pot, -1.0, 0.2, -1.1, p.omega0() + 2.0, p, tight());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int k = 1; k <= y.grid().depth(); ++k) {
        lo = std::min(lo, wronskian_at(y, z, k));
        hi = std::max(hi, wronskian_at(y, z, k));
    }
    CHECK(hi - lo <= 1e-8 * (1.0 + std::abs(hi)));
    // W at omega0 from the initial data.
    CHECK(hi == doctest::Approx(0.4 * 0.2 - (-1.0) * 0.9).epsilon(1e-8));
}

TEST_CASE("residual examples") {
    const HahnParams p(0.5, 0.5);
    const VectorSolution y = picard_solve(Potentials::zero(), 0.5, 0.5, 1.7, 3.0, p, tight());
    for (const int k : {1, 5, 10}) {
        const auto [r1, r2] = residual_at(y, Potentials::zero(), k);
        CHECK(std::abs(r1) <= 1e-9);
        CHECK(std::abs(r2) <= 1e-9);
    }
    const auto [g1, g2] = residual(y, Potentials::zero(), y.grid()[3], p);
    CHECK(std::abs(g1) <= 1e-9);
    CHECK(std::abs(g2) <= 1e-9);

    const VectorSolution one = picard_solve(Potentials::zero(), 1.0, 0.0, 0.0, 3.0, p, tight());
    for (const int k : {1, 7}) {
        const auto [r1, r2] = residual_at(one, Potentials::zero(), k);
        CHECK(r1 == 0.0);
        CHECK(r2 == 0.0);
    }
}

TEST_CASE("perturbing y1 at one point shifts the second residual by the difference quotient") {
    const HahnParams p(0.5, 0.5);
    const VectorSolution y = picard_solve(Potentials::constant(0.2, 0.1), 1.0, 0.0, 0.8, 3.0, p, tight());
    const int k = 4;
    const double eps = 1e-6;
    const double t = y.grid()[k];
    const double before = residual_at(y, Potentials::constant(0.2, 0.1), k).second;
    const double after = residual_at(y.with_perturbed_y1(k, eps), Potentials::constant(0.2, 0.1), k).second;
    CHECK((after - before) == doctest::Approx(-eps / ((p.q() - 1.0) * t + p.omega())).epsilon(1e-6));
}

TEST_CASE("values off the lattice come from a fresh solve") {
    const HahnParams p(0.5, 0.5);
    const VectorSolution y = picard_solve(Potentials::zero(), 1.0, 0.0, 1.0, 3.0, p, tight());
    const auto [v1, v2] = y.value_at(2.2);
    const auto [f1, f2] = solve_free(1.0, 0.0, 2.2, 1.0, p);
    CHECK(v1 == doctest::Approx(f1).epsilon(1e-10));
    CHECK(v2 == doctest::Approx(f2).epsilon(1e-10));
    const auto [o1, o2] = y.value_at(p.omega0());
    CHECK(o1 == 1.0);
    CHECK(o2 == 0.0);
    CHECK(y.value_at(y.grid()[6]).first == y.y1(6));
}

TEST_CASE("solutions approach the initial data at omega0") {
    const HahnParams p(0.5, 0.5);
    const VectorSolution y = picard_solve(Potentials::constant(1.0, -1.0), 0.3, -0.2, 2.0, 3.0, p, tight());
    const int K = y.grid().depth();
    CHECK(std::abs(y.y1(K) - 0.3) <= 1e-12);
    CHECK(std::abs(y.y2(K) - (-0.2)) <= 1e-12);
    double prev = std::abs(y.y1(10) - 0.3);
    for (int k = 11; k <= 20; ++k) {
        const double d = std::abs(y.y1(k) - 0.3);
        CHECK(d <= prev);
        prev = d;
    }
}

TEST_CASE("convergence_bound") {
    const HahnParams p(0.5, 0.5);
    SUBCASE("zero potential") {
        const ConvergenceReport r = convergence_bound(Potentials::zero(), 1.0, 3.0, p);
        CHECK(r.a_const == 0.0);
        CHECK(r.radius_ok);
        for (const double b : r.bound_terms) CHECK(b == 0.0);
    }
    SUBCASE("ratio of successive terms tends to the limiting ratio") {
        const ConvergenceReport r = convergence_bound(Potentials::constant(0.1, 0.05), 0.5, 1.5, p, 200);
        REQUIRE(r.bound_terms.size() >= 2);
        CHECK(r.radius_ok);
        const std::size_t m = r.bound_terms.size() - 1;
        CHECK(r.bound_terms[m] / r.bound_terms[m - 1] == doctest::Approx(r.limiting_ratio).epsilon(1e-6));
        CHECK(r.limiting_ratio < 1.0);
    }
    SUBCASE("large constant potential violates the radius condition") {
        const ConvergenceReport r = convergence_bound(Potentials::constant(500.0, 0.0), 1.0, 3.0, p);
        CHECK_FALSE(r.radius_ok);
        CHECK(r.limiting_ratio > 1.0);
    }
}

TEST_CASE("picard_solve input validation and failures") {
    const HahnParams p(0.5, 0.5);
    PicardOptions bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS((void)picard_solve(Potentials::zero(), 1, 0, 1, 3.0, p, bad), InvalidParameter);
    bad = {};
    bad.max_iter = 0;
    CHECK_THROWS_AS((void)picard_solve(Potentials::zero(), 1, 0, 1, 3.0, p, bad), InvalidParameter);
    CHECK_THROWS_AS((void)picard_solve(Potentials::zero(), 1, 0, 1, p.omega0(), p), InvalidParameter);
    CHECK_THROWS_AS((void)picard_solve(Potentials::zero(), 1, 0, std::nan(""), 3.0, p), InvalidParameter);
    const Potentials singular{{[](double t) { return 1.0 / (t - 2.0); }, std::nullopt}, RealFunction::constant(0.0)};
    CHECK_THROWS_AS((void)picard_solve(singular, 1, 0, 1, 3.0, HahnParams(0.5, 1.0)), InvalidParameter);

    PicardOptions once;
    once.max_iter = 1;
    CHECK_THROWS_AS((void)picard_solve(Potentials::constant(5.0, -5.0), 1, 1, 1, 3.0, p, once), NoConvergence);
}
