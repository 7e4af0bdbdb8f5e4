#pragma once

#include <numbers>
#include <string_view>
#include <vector>

#include "flowlab/digits.hpp"
#include "flowlab/geometry.hpp"

// The autonomous field a on the solid torus S = A1 u ... u A7 and the two
// measure-preserving flows it generates.
namespace flowlab::donut3 {

enum class Region { A1, A2, A3, A4, A5, A6, A7, OutsideS, CriticalPlane };

std::string_view region_name(Region r);

inline constexpr double kPeriod = 6.0 + 3.0 * std::numbers::pi;
inline constexpr double kSnap = 1e-9;

// Closed regions with priority A1 > A2 > ... > A7 on shared membranes, so a
// membrane point belongs to the region its forward orbit enters.
Region classify_region(Point3 x);
inline bool in_S(Point3 x) {
    const Region r = classify_region(x);
    return r != Region::OutsideS;
}

Vec3 field_a(Point3 x);
// Same as field_a except (0,0,-1) on A7.
Vec3 field_a_tilde(Point3 x);

Point3 reflect_R3(Point3 x);
Point3 mirror(Point3 x);

struct StopTimes {
    double t_minus = 0;
    double t_plus = 0;
};

// t+ by forward marching to the critical plane, t- by backward marching.
StopTimes stop_times(Point3 x, int depth = kDefaultDepth);

enum class SegmentKind { ChiShifted, CircleArc, SquareRotLift, Vertical, ReflectedChi };

struct OrbitSegment {
    Region region;
    double entry_time;
    double exit_time;
    SegmentKind kind;
};

// Pieces of the orbit of x over [t-(x), t+(x)], times relative to x.
std::vector<OrbitSegment> orbit_segments(Point3 x, int depth = kDefaultDepth);

// Every orbit crosses M1 once per period. x = orbit_point(y, offset), where
// y is that crossing and offset = 1 - t+(x).
struct Anchor {
    Point2 y;
    double offset = 0;
};

Anchor orbit_anchor(Point3 x, int depth = kDefaultDepth);
// Orbit position at orbit time tau in [1 - T, 1]; tau = 0 on M1, tau = 1 on
// the critical plane.
Point3 orbit_point(Point2 y, double tau, int depth = kDefaultDepth);

// Flow between the stopping times. Throws std::domain_error for x outside S
// or t outside [t-(x), t+(x)].
Point3 varphi(double t, Point3 x, int depth = kDefaultDepth);

Point3 involution_h(Point3 x, int depth = kDefaultDepth);

Point3 flow_phi(double t, Point3 x, int depth = kDefaultDepth);
// orbit_in_W selects the periodic branch; double inputs cannot decide W
// membership, so callers with digit data pass it explicitly.
Point3 flow_psi(double t, Point3 x, int depth = kDefaultDepth, bool orbit_in_W = false);

// W membership from the digits of the M1 crossing height.
bool orbit_in_W(const digits::DigitStream& m1_height);

bool is_exceptional_time(Point3 x, double t, double eps, int depth = kDefaultDepth);

// Flow of field_a_tilde on (0,1)^2 x [-1,0) for t in [x3 - 1, 1 + x3]. Going
// backward through the critical plane it must pick a preimage of the collapse;
// y1 is that free choice.
Point3 forced_flow_tilde(double t, Point3 x, double y1, int depth = kDefaultDepth);

}  // namespace flowlab::donut3
