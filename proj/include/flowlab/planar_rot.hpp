#pragma once

#include <cmath>

#include "flowlab/geometry.hpp"

// Square rotation c on (-1/2,1/2)^2 and its rectangle conjugate d on
// (-1/2,1/2)x(-1/4,1/4), together with their exact flows.
namespace flowlab::planar {

struct SquareCoords {
    double rho = 0.0;    // sup-norm radius
    double theta = 0.0;  // boundary parameter in [0,4), one unit per edge
};

template <class T>
BasicVec2<T> field_c(BasicVec2<T> p) {
    using std::abs;
    const T a1 = abs(p.x1);
    const T a2 = abs(p.x2);
    if (a2 < a1 && a1 < T(0.5)) return {T(0), 8 * p.x1};
    if (a1 < a2 && a2 < T(0.5)) return {-8 * p.x2, T(0)};
    return {T(0), T(0)};
}

// Dp^{-1} c(p(x)) with p(x) = (x1, 2 x2).
template <class T>
BasicVec2<T> field_d(BasicVec2<T> p) {
    const BasicVec2<T> v = field_c(BasicVec2<T>{p.x1, 2 * p.x2});
    return {v.x1, v.x2 / 2};
}

namespace detail {

template <class T>
BasicVec2<T> quarter_turn(BasicVec2<T> y, long long n) {
    switch (((n % 4) + 4) % 4) {
        case 1: return {-y.x2, y.x1};
        case 2: return {-y.x1, -y.x2};
        case 3: return {y.x2, -y.x1};
        default: return y;
    }
}

// Arc length from the corner (rho,-rho), counterclockwise, in [0, 8 rho).
template <class T>
T arc_position(BasicVec2<T> y, T rho) {
    if (y.x1 == rho && y.x2 != -rho) return rho + y.x2;
    if (y.x2 == rho) return 3 * rho - y.x1;
    if (y.x1 == -rho) return 5 * rho - y.x2;
    T u = 7 * rho + y.x1;
    return u >= 8 * rho ? u - 8 * rho : u;
}

template <class T>
BasicVec2<T> arc_point(T u, T rho) {
    if (u < 2 * rho) return {rho, u - rho};
    if (u < 4 * rho) return {3 * rho - u, rho};
    if (u < 6 * rho) return {-rho, 5 * rho - u};
    return {u - 7 * rho, -rho};
}

}  // namespace detail

// Advances the boundary parameter by 4t on each level square. Whole quarter
// turns are applied as exact coordinate swaps.
template <class T>
BasicVec2<T> square_rot_flow(T t, BasicVec2<T> y) {
    using std::abs;
    using std::floor;
    const T rho = std::max(abs(y.x1), abs(y.x2));
    if (!(rho < T(0.5)) || rho == T(0)) return y;
    const T sigma = 4 * t;
    const T whole = floor(sigma);
    const T frac = sigma - whole;
    y = detail::quarter_turn(y, static_cast<long long>(std::fmod(whole, T(4))));
    if (frac == T(0)) return y;
    T u = detail::arc_position(y, rho) + 2 * rho * frac;
    if (u >= 8 * rho) u -= 8 * rho;
    return detail::arc_point(u, rho);
}

template <class T>
BasicVec2<T> rect_rot_flow(T t, BasicVec2<T> x) {
    const BasicVec2<T> y = square_rot_flow(t, BasicVec2<T>{x.x1, 2 * x.x2});
    return {y.x1, y.x2 / 2};
}

SquareCoords to_square_coords(Point2 p);
Point2 from_square_coords(SquareCoords s);

}  // namespace flowlab::planar
