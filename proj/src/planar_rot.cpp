#include "flowlab/planar_rot.hpp"

namespace flowlab::planar {

SquareCoords to_square_coords(Point2 p) {
    const double rho = max_norm(p);
    if (rho == 0.0) return {0.0, 0.0};
    return {rho, detail::arc_position(p, rho) / (2 * rho)};
}

Point2 from_square_coords(SquareCoords s) {
    if (s.rho == 0.0) return {0.0, 0.0};
    double theta = std::fmod(s.theta, 4.0);
    if (theta < 0) theta += 4.0;
    return detail::arc_point(2 * s.rho * theta, s.rho);
}

}  // namespace flowlab::planar
