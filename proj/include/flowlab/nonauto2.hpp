#pragma once

#include "flowlab/geometry.hpp"

// Planar non-autonomous field a(t, x) on [0,2] x [0,1]^2: b for t < 1 and its
// time reflection -b(2 - t, x) for t > 1.
namespace flowlab::nonauto2 {

struct FieldSample {
    Vec2 value;
    bool undefined_slice = false;  // t == 1
};

FieldSample field_a2(double t, Point2 p);
// a for t < 1, zero afterwards.
Vec2 field_a2_tilde(double t, Point2 p);

// phi(t, alpha, x): position at time alpha + t of the trajectory that is at x
// at time alpha. Throws std::domain_error for alpha == 1.
Point2 flow_phi2(double t, double alpha, Point2 p, int depth = kDefaultDepth);

// Agrees with phi until the trajectory reaches time 1; afterwards trajectories
// whose time-0 preimage lies in (0,1)^2 continue on the mirrored orbit.
// preimage_height_in_Z selects the generic branch for the null set A_alpha
// excludes; double inputs cannot decide it.
Point2 flow_psi2(double t, double alpha, Point2 p, int depth = kDefaultDepth,
                 bool preimage_height_in_Z = false);

}  // namespace flowlab::nonauto2
