#pragma once

#include <cstdint>

#include "flowlab/digits.hpp"
#include "flowlab/geometry.hpp"

// The time-dependent field b on (-inf,1) x R^2 built from rescaled copies of
// the rectangle and square rotations, and its flows chi^(z).
namespace flowlab::depauw {

// t_i = 1 - 2^-i. Stage i runs over [t_i, t_{i+1}).
long double stage_time(int i);
// Stage containing t, for 0 <= t < 1.
int stage_index(long double t);

// Throws std::domain_error for t >= 1.
template <class T>
BasicVec2<T> field_b(T t, BasicVec2<T> p);

template <class T>
struct ChiResult {
    BasicVec2<T> point;
    bool truncated = false;  // part of [z, z+t] lies past t_depth, where the map is frozen
};

// Flow of b from absolute time z to z + t. Requires z < 1 and z + t <= 1.
template <class T>
ChiResult<T> chi_flow(T z, T t, BasicVec2<T> p, int depth = kDefaultDepth);

extern template BasicVec2<double> field_b<double>(double, BasicVec2<double>);
extern template BasicVec2<long double> field_b<long double>(long double, BasicVec2<long double>);
extern template ChiResult<double> chi_flow<double>(double, double, BasicVec2<double>, int);
extern template ChiResult<long double> chi_flow<long double>(long double, long double,
                                                             BasicVec2<long double>, int);

// chi^(0)(1/2, p) for p in (0,1)^2.
Point2 chi_half_closed_form(Point2 p);

struct DyadicSquare {
    int level = 0;
    std::uint64_t index = 1;  // 1 .. 4^level, row by row from the bottom
    Point2 corner;
    double side = 1.0;
};

DyadicSquare containing_square(Point2 p, int level);

// The fiber (0,1) x {x2} at time t_i is the segment (m, m + width) x {n}.
struct FiberBox {
    int level = 0;
    long double m = 0;
    long double n = 0;
    long double width = 1;
};

FiberBox fiber_box_at_stage(const digits::DigitStream& x2, int i);

struct GammaResult {
    digits::DigitStream gamma1;  // odd-position bits of x2
    digits::DigitStream gamma2;  // even-position bits of x2
    Vec2L point;
    bool degenerate = false;
    long double error_bound = 0;  // per coordinate
};

// Throws std::domain_error when x2 is (decidably) dyadic.
GammaResult gamma(const digits::DigitStream& x2, int depth);

// Max pairwise distance of chi^(0)(t_depth, (u, x2)) over evenly spaced u.
long double collapse_diameter(const digits::DigitStream& x2, int depth, int fiber_samples);

// For dyadic x2: whether the image of (x1, x2) at t_depth lies on the
// level-depth grid lines, up to 2^-depth in grid units.
bool skeleton_image_check(double x1, const digits::DigitStream& x2, int depth);

}  // namespace flowlab::depauw
