#include <doctest.h>

#include <random>

#include "flowlab/donut3.hpp"
#include "flowlab/transport.hpp"

namespace tr = flowlab::transport;
using flowlab::verify::Coords;

namespace {

// int_{-1}^{1} exp(1/(s^2-1)) ds, by composite Simpson on 2e5 panels.
double bump_integral() {
    const int n = 200000;
    const double h = 2.0 / n;
    double s = 0;
    for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
        s += w * tr::bump(-1 + i * h);
    }
    return s * h / 3;
}

Coords constant_field(double, const Coords&) { return {1, 0, 0}; }

double profile(double s) { return std::sin(3 * s) + s * s; }

}  // namespace

TEST_CASE("bump and step values") {
    CHECK(tr::bump(0) == doctest::Approx(std::exp(-1.0)));
    CHECK(tr::bump(1) == 0);
    CHECK(tr::bump(-2) == 0);
    CHECK(tr::bump_derivative(0) == 0);
    CHECK(tr::smooth_step(-1) == 0);
    CHECK(tr::smooth_step(0.5) == doctest::Approx(0.5));
    CHECK(tr::smooth_step(2) == 1);
    double prev = 0;
    for (int i = 1; i < 100; ++i) {
        const double v = tr::smooth_step(i / 100.0);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(bump_integral() == doctest::Approx(0.443993816168).epsilon(1e-9));
}

TEST_CASE("test function derivatives match central differences") {
    const tr::TestFunction h({0.5, 0.4, -0.2, 1.0}, {0.4, 0.3, 0.5, 0.6});
    std::mt19937_64 eng(51);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    const double e = 1e-6;
    for (int i = 0; i < 1000; ++i) {
        const double t = 0.5 + 0.4 * u(eng);
        const Coords x{0.4 + 0.3 * u(eng), -0.2 + 0.5 * u(eng), 1.0 + 0.6 * u(eng)};
        const double fd_t = (h.value(t + e, x) - h.value(t - e, x)) / (2 * e);
        CHECK(std::abs(fd_t - h.dt(t, x)) <= 1e-6 * std::max(1.0, std::abs(fd_t)));
        const Coords g = h.grad(t, x);
        for (int k = 0; k < 3; ++k) {
            Coords p = x, m = x;
            p[k] += e;
            m[k] -= e;
            const double fd = (h.value(t, p) - h.value(t, m)) / (2 * e);
            CHECK(std::abs(fd - g[k]) <= 1e-6 * std::max(1.0, std::abs(fd)));
        }
    }
    CHECK_THROWS_AS(tr::TestFunction({0, 0}, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(tr::TestFunction({0, 0, 0}, {1, 0, 1}), std::invalid_argument);
}

TEST_CASE("zero solution has zero residual") {
    const tr::TestFunction h({0.5, 0.5, 0.5, 0.5}, {0.4, 0.4, 0.4, 0.4});
    const auto r = tr::weak_residual([](double, const Coords&) { return 0.0; }, nullptr, constant_field, h, 1000, 1);
    CHECK(r.estimate == 0);
    CHECK(r.sigma == 0);
    CHECK_THROWS_AS(tr::weak_residual([](double, const Coords&) { return 0.0; }, nullptr, constant_field, h, 0, 1),
                    std::invalid_argument);
}

TEST_CASE("a travelling wave solves the constant-field equation") {
    const auto u0 = [](const Coords& x) { return profile(x[0]); };
    const auto u = [](double t, const Coords& x) { return profile(x[0] - t); };
    // Support inside t > 0, then straddling t = 0 so the initial term counts.
    for (double tc : {0.6, 0.1}) {
        const tr::TestFunction h({tc, 0.3, 0.1, -0.2}, {0.5, 0.4, 0.3, 0.3});
        const auto r = tr::weak_residual(u, u0, constant_field, h, 200000, 3);
        CHECK(std::abs(r.estimate) <= 4 * r.sigma);
        CHECK(r.sigma > 0);
    }
}

TEST_CASE("a non-solution has the predicted residual") {
    // d_t u + a.grad u = 2, so the residual is -2 int h.
    const tr::TestFunction h({0.6, 0.3, 0.1, -0.2}, {0.5, 0.4, 0.3, 0.3});
    const auto u = [](double t, const Coords& x) { return x[0] + t; };
    const auto r = tr::weak_residual(u, nullptr, constant_field, h, 400000, 5);
    const double I = bump_integral();
    const double want = -2 * std::pow(I, 4) * 0.5 * 0.4 * 0.3 * 0.3;
    CHECK(std::abs(r.estimate - want) <= 4 * r.sigma);
    CHECK(std::abs(r.estimate) > 4 * r.sigma);
}

TEST_CASE("residual sigma shrinks like M^-1/2") {
    const tr::TestFunction h({0.6, 0.3, 0.1, -0.2}, {0.5, 0.4, 0.3, 0.3});
    const auto u = [](double t, const Coords& x) { return x[0] + t; };
    double ratio = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto a = tr::weak_residual(u, nullptr, constant_field, h, 20000, seed);
        const auto b = tr::weak_residual(u, nullptr, constant_field, h, 40000, seed + 100);
        ratio += a.sigma / b.sigma;
    }
    CHECK(ratio / 10 >= 1.3);
}

TEST_CASE("results are reproducible at a fixed seed") {
    const tr::TestFunction h({0.6, 0.3, 0.1, -0.2}, {0.5, 0.4, 0.3, 0.3});
    const auto u = [](double t, const Coords& x) { return x[0] * t; };
    const auto a = tr::weak_residual(u, nullptr, constant_field, h, 50000, 9);
    const auto b = tr::weak_residual(u, nullptr, constant_field, h, 50000, 9);
    CHECK(a.estimate == b.estimate);
    CHECK(a.sigma == b.sigma);
}

TEST_CASE("candidate solutions start at u0") {
    for (const auto& sol : {tr::solution_3d(tr::Flow::Phi), tr::solution_3d(tr::Flow::Psi)}) {
        const Coords x{0.3, 0.2, 0.9};
        CHECK(tr::eval_solution(sol, 0, x) == sol.u0(x));
        CHECK(sol.u0(x) == doctest::Approx(0.3));
        const Coords off{0.3, 5, 5};
        CHECK(tr::eval_solution(sol, 2.5, off) == sol.u0(off));
    }
    const auto s2 = tr::solution_2d(tr::Flow::Phi);
    CHECK(tr::eval_solution(s2, 0, {0.4, 0.6, 0}) == doctest::Approx(0.4));
    CHECK(tr::default_u0(2, {3.0, 3.0, 0}) == 0);
}

TEST_CASE("v and w differ by 2 x1 - 1 one period on along the A2 arc") {
    const auto v = tr::solution_3d(tr::Flow::Phi);
    const auto w = tr::solution_3d(tr::Flow::Psi);
    const Coords x{0.25, -1.5, 2.3};
    const double t = flowlab::donut3::kPeriod + 0.1;
    CHECK(std::abs(tr::eval_solution(v, t, x) - tr::eval_solution(w, t, x)) == doctest::Approx(0.5));
}

TEST_CASE("change of variables") {
    const tr::TestFunction h({0.0, 0.5, 0.5, 0.5}, {1.0, 0.3, 0.3, 0.3});
    const flowlab::verify::ProbeBox box{{0, 1}, {0, 1}, {0, 1}};
    const auto id = tr::change_of_variables_check([](const Coords& x) { return x; }, h, box, 10000, 1);
    CHECK(id.lhs == id.rhs);
    // Off-centre so the halving map cannot preserve the integral by symmetry.
    const tr::TestFunction g({0.0, 0.3, 0.3, 0.3}, {1.0, 0.2, 0.2, 0.2});
    const auto half = tr::change_of_variables_check(
        [](const Coords& x) { return Coords{x[0] / 2, x[1] / 2, x[2] / 2}; }, g, box, 100000, 1);
    CHECK(std::abs(half.lhs - half.rhs) > 4 * half.sigma);
    CHECK(half.lhs == doctest::Approx(8 * half.rhs).epsilon(0.05));
}
