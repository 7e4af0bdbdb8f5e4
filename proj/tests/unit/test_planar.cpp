#include <doctest.h>

#include <random>

#include "flowlab/planar_rot.hpp"
#include "oracles/oracles.hpp"

using flowlab::Point2;
namespace pl = flowlab::planar;

namespace {

void check_point(Point2 got, Point2 want, double tol = 1e-12) {
    CHECK(std::abs(got.x1 - want.x1) <= tol);
    CHECK(std::abs(got.x2 - want.x2) <= tol);
}

Point2 random_in(std::mt19937_64& eng, double h1, double h2) {
    std::uniform_real_distribution<double> u1(-h1, h1), u2(-h2, h2);
    return {u1(eng), u2(eng)};
}

}  // namespace

TEST_CASE("field c examples") {
    check_point(pl::field_c(Point2{0.3, 0.1}), {0, 2.4});
    check_point(pl::field_c(Point2{0.25, 0.25}), {0, 0});
    check_point(pl::field_c(Point2{0.7, 0.1}), {0, 0});
}

TEST_CASE("field d examples and the conjugation identity") {
    check_point(pl::field_d(Point2{-0.2, -0.05}), {0, -0.8});
    check_point(pl::field_d(Point2{0.1, 0.2}), {-3.2, 0});
    check_point(pl::field_d(Point2{0.6, 0.1}), {0, 0});
    std::mt19937_64 eng(3);
    for (int i = 0; i < 1000; ++i) {
        const Point2 x = random_in(eng, 0.6, 0.3);
        const auto c = oracle::c_field({x.x1, 2 * x.x2});
        check_point(pl::field_d(x), {c[0], c[1] / 2});
    }
}

TEST_CASE("square rotation examples") {
    check_point(pl::square_rot_flow(0.25, Point2{0.3, 0.1}), {-0.1, 0.3});
    check_point(pl::square_rot_flow(0.125, Point2{0.3, 0.0}), {0.3, 0.3});
    check_point(pl::square_rot_flow(1.0, Point2{0.17, -0.41}), {0.17, -0.41});
    check_point(pl::square_rot_flow(0.4, Point2{0.7, 0.1}), {0.7, 0.1});
}

TEST_CASE("rectangle rotation examples") {
    check_point(pl::rect_rot_flow(0.25, Point2{0.3, 0.1}), {-0.2, 0.15});
    check_point(pl::rect_rot_flow(0.5, Point2{0.3, 0.1}), {-0.3, -0.1});
    check_point(pl::rect_rot_flow(1.0, Point2{-0.33, 0.2}), {-0.33, 0.2});
    check_point(pl::rect_rot_flow(0.3, Point2{0.1, 0.3}), {0.1, 0.3});
}

TEST_CASE("square rotation agrees with an Euler march of c") {
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> ut(0, 1);
    for (int i = 0; i < 40; ++i) {
        const Point2 x = random_in(eng, 0.45, 0.45);
        const double t = ut(eng);
        const auto y = oracle::euler_2d([](double, oracle::P2 p) { return oracle::c_field(p); }, 0, t,
                                        {x.x1, x.x2}, 1e-6);
        const Point2 z = pl::square_rot_flow(t, x);
        // Up to four corner overshoots of size 8 rho dt.
        CHECK(std::abs(z.x1 - y[0]) < 1e-4);
        CHECK(std::abs(z.x2 - y[1]) < 1e-4);
    }
}

TEST_CASE("square rotation group property and level preservation") {
    std::mt19937_64 eng(7);
    std::uniform_real_distribution<double> ut(-3, 3);
    for (int i = 0; i < 10000; ++i) {
        const Point2 x = random_in(eng, 0.5, 0.5);
        const double t1 = ut(eng), t2 = ut(eng);
        const Point2 a = pl::square_rot_flow(t1 + t2, x);
        const Point2 b = pl::square_rot_flow(t1, pl::square_rot_flow(t2, x));
        REQUIRE(std::abs(a.x1 - b.x1) <= 1e-12);
        REQUIRE(std::abs(a.x2 - b.x2) <= 1e-12);
        const double la = std::max(std::abs(a.x1), std::abs(a.x2));
        const double lx = std::max(std::abs(x.x1), std::abs(x.x2));
        REQUIRE(std::abs(la - lx) <= 1e-12);
    }
}

TEST_CASE("square coordinates round trip") {
    std::mt19937_64 eng(9);
    for (int i = 0; i < 1000; ++i) {
        const Point2 x = random_in(eng, 0.5, 0.5);
        const Point2 y = pl::from_square_coords(pl::to_square_coords(x));
        REQUIRE(std::abs(x.x1 - y.x1) <= 1e-15);
        REQUIRE(std::abs(x.x2 - y.x2) <= 1e-15);
    }
}
