#include "flowlab/nonauto2.hpp"

#include <stdexcept>

#include "flowlab/depauw.hpp"

namespace flowlab::nonauto2 {

FieldSample field_a2(double t, Point2 p) {
    if (t < 1.0) return {depauw::field_b<double>(t, p), false};
    if (t > 1.0) return {-depauw::field_b<double>(2.0 - t, p), false};
    return {{0.0, 0.0}, true};
}

Vec2 field_a2_tilde(double t, Point2 p) {
    if (t < 1.0) return depauw::field_b<double>(t, p);
    return {0.0, 0.0};
}

Point2 flow_phi2(double t, double alpha, Point2 p, int depth) {
    if (alpha == 1.0) throw std::domain_error("flow_phi2 is not defined from alpha = 1");
    if (alpha > 1.0) return flow_phi2(-t, 2.0 - alpha, p, depth);
    const double horizon = 1.0 - alpha;
    const double s = t <= horizon ? t : 2.0 * horizon - t;
    return depauw::chi_flow<double>(alpha, s, p, depth).point;
}

Point2 flow_psi2(double t, double alpha, Point2 p, int depth, bool preimage_height_in_Z) {
    if (alpha == 1.0) throw std::domain_error("flow_psi2 is not defined from alpha = 1");
    if (alpha > 1.0) return flow_psi2(-t, 2.0 - alpha, p, depth, preimage_height_in_Z);
    if (t <= 1.0 - alpha) return flow_phi2(t, alpha, p, depth);
    const Point2 x0 = flow_phi2(-alpha, alpha, p, depth);
    const bool in_A = x0.x1 > 0 && x0.x1 < 1 && x0.x2 > 0 && x0.x2 < 1 && !preimage_height_in_Z;
    if (!in_A) return flow_phi2(t, alpha, p, depth);
    const Point2 start = flow_phi2(alpha, 0.0, {1.0 - x0.x1, x0.x2}, depth);
    return flow_phi2(t, alpha, start, depth);
}

}  // namespace flowlab::nonauto2
