#include "flowlab/donut3.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "flowlab/depauw.hpp"
#include "flowlab/planar_rot.hpp"

namespace flowlab::donut3 {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTau6 = -4.0 - 3.0 * kPi;  // orbit time of M6
constexpr double kTau5 = kTau6 + 1.0;       // orbit time of M5
constexpr double kBottom = 1.0 - kPeriod;   // orbit time of the plane, from below

bool in01(double v) { return v >= -kSnap && v <= 1.0 + kSnap; }
bool in_range(double v, double lo, double hi) { return v >= lo - kSnap && v <= hi + kSnap; }

double radius2(const Point3& x) { return std::hypot(x.x2 + 1.0, x.x3 - 1.0); }
double radius5(const Point3& x) { return std::hypot(x.x2 + 1.0, x.x3 + 2.0); }

// Angle on the upper arc, in [0, pi].
double angle2(const Point3& x) {
    return std::clamp(std::atan2(x.x3 - 1.0, x.x2 + 1.0), 0.0, kPi);
}

// Angle on the lower arc, in [pi, 2 pi].
double angle5(const Point3& x) {
    double th = std::atan2(x.x3 + 2.0, x.x2 + 1.0);
    if (th < kPi / 2) th += 2 * kPi;
    return std::clamp(th, kPi, 2 * kPi);
}

Point2 rotate_about(double t, Point2 p, Point2 centre) {
    return planar::square_rot_flow(t, p - centre) + centre;
}

const Point2 kCentre3{0.5, -2.5};
const Point2 kCentre6{0.5, 0.5};

// chi^(0)(tau, y) for tau in [0, 1].
Point2 chi_from_zero(double tau, Point2 y, int depth) {
    return depauw::chi_flow<double>(0.0, std::clamp(tau, 0.0, 1.0), y, depth).point;
}

// Pulls a point at b-time s back to b-time 0. Times past the truncation horizon
// are frozen, which also covers s = 1 on the critical plane.
Point2 chi_to_zero(double s, Point2 p, int depth) {
    const double z = std::min(std::max(s, 0.0), static_cast<double>(depauw::stage_time(depth)));
    return depauw::chi_flow<double>(z, -z, p, depth).point;
}

Point2 xy(const Point3& x) { return {x.x1, x.x2}; }

struct March {
    double duration = 0;
    bool hit_m1 = false;
    Point2 m1;
    std::vector<OrbitSegment> segments;  // in marching order, times relative to x
};

SegmentKind kind_of(Region r) {
    switch (r) {
        case Region::A1: return SegmentKind::ChiShifted;
        case Region::A2:
        case Region::A5: return SegmentKind::CircleArc;
        case Region::A3:
        case Region::A6: return SegmentKind::SquareRotLift;
        case Region::A4: return SegmentKind::Vertical;
        default: return SegmentKind::ReflectedChi;
    }
}

Region effective_region(const Point3& x) {
    const Region r = classify_region(x);
    if (r == Region::OutsideS) throw std::domain_error("point is outside S");
    return r == Region::CriticalPlane ? Region::A7 : r;
}

// Forward in time until the orbit reaches the critical plane from above.
March march_forward(Point3 p, int depth) {
    March m;
    Region r = effective_region(p);
    while (true) {
        double dt = 0;
        Region next = r;
        bool done = false;
        switch (r) {
            case Region::A7: {
                const double s = 1.0 + std::min(p.x3, 0.0);
                dt = s;
                const Point2 q = chi_to_zero(s, xy(p), depth);
                p = {q.x1, q.x2, -1.0};
                next = Region::A6;
                break;
            }
            case Region::A6: {
                dt = std::clamp(2.0 + p.x3, 0.0, 1.0);
                const Point2 q = rotate_about(-dt / 2, xy(p), kCentre6);
                p = {q.x1, q.x2, -2.0};
                next = Region::A5;
                break;
            }
            case Region::A5: {
                const double rad = std::clamp(radius5(p), 1.0, 2.0);
                dt = rad * (angle5(p) - kPi);
                p = {p.x1, -rad - 1.0, -2.0};
                next = Region::A4;
                break;
            }
            case Region::A4: {
                dt = std::clamp(-p.x3, 0.0, 2.0);
                p = {p.x1, p.x2, 0.0};
                next = Region::A3;
                break;
            }
            case Region::A3: {
                dt = std::clamp(1.0 - p.x3, 0.0, 1.0);
                const Point2 q = rotate_about(dt / 2, xy(p), kCentre3);
                p = {q.x1, q.x2, 1.0};
                next = Region::A2;
                break;
            }
            case Region::A2: {
                const double rad = std::clamp(radius2(p), 1.0, 2.0);
                dt = rad * angle2(p);
                p = {p.x1, rad - 1.0, 1.0};
                m.hit_m1 = true;
                m.m1 = xy(p);
                next = Region::A1;
                break;
            }
            default: {
                dt = std::clamp(p.x3, 0.0, 1.0);
                done = true;
                break;
            }
        }
        if (dt > 0) m.segments.push_back({r, m.duration, m.duration + dt, kind_of(r)});
        m.duration += dt;
        if (done) return m;
        r = next;
    }
}

// Backward in time until the orbit reaches the critical plane from below.
March march_backward(Point3 p, int depth) {
    March m;
    Region r = effective_region(p);
    while (true) {
        double dt = 0;
        Region next = r;
        bool done = false;
        switch (r) {
            case Region::A1: {
                const double x3 = std::clamp(p.x3, 0.0, 1.0);
                dt = 1.0 - x3;
                const Point2 q = chi_to_zero(1.0 - x3, xy(p), depth);
                p = {q.x1, q.x2, 1.0};
                m.hit_m1 = true;
                m.m1 = q;
                next = Region::A2;
                break;
            }
            case Region::A2: {
                const double rad = std::clamp(radius2(p), 1.0, 2.0);
                dt = rad * (kPi - angle2(p));
                p = {p.x1, -rad - 1.0, 1.0};
                next = Region::A3;
                break;
            }
            case Region::A3: {
                dt = std::clamp(p.x3, 0.0, 1.0);
                const Point2 q = rotate_about(-dt / 2, xy(p), kCentre3);
                p = {q.x1, q.x2, 0.0};
                next = Region::A4;
                break;
            }
            case Region::A4: {
                dt = std::clamp(p.x3 + 2.0, 0.0, 2.0);
                p = {p.x1, p.x2, -2.0};
                next = Region::A5;
                break;
            }
            case Region::A5: {
                const double rad = std::clamp(radius5(p), 1.0, 2.0);
                dt = rad * (2 * kPi - angle5(p));
                p = {p.x1, rad - 1.0, -2.0};
                next = Region::A6;
                break;
            }
            case Region::A6: {
                dt = std::clamp(-1.0 - p.x3, 0.0, 1.0);
                const Point2 q = rotate_about(dt / 2, xy(p), kCentre6);
                p = {q.x1, q.x2, -1.0};
                next = Region::A7;
                break;
            }
            default: {
                dt = std::clamp(-p.x3, 0.0, 1.0);
                done = true;
                break;
            }
        }
        if (dt > 0) m.segments.push_back({r, -(m.duration + dt), -m.duration, kind_of(r)});
        m.duration += dt;
        if (done) return m;
        r = next;
    }
}

double reduce_orbit_time(double tau) {
    tau -= std::ceil((tau - 1.0) / kPeriod) * kPeriod;
    if (tau <= kBottom) tau += kPeriod;
    if (tau > 1.0) tau -= kPeriod;
    return tau;
}

Point2 mirror2(Point2 y) { return {1.0 - y.x1, y.x2}; }

}  // namespace

std::string_view region_name(Region r) {
    switch (r) {
        case Region::A1: return "A1";
        case Region::A2: return "A2";
        case Region::A3: return "A3";
        case Region::A4: return "A4";
        case Region::A5: return "A5";
        case Region::A6: return "A6";
        case Region::A7: return "A7";
        case Region::OutsideS: return "OutsideS";
        case Region::CriticalPlane: return "CriticalPlane";
    }
    return "?";
}

Region classify_region(Point3 x) {
    if (!in01(x.x1)) return Region::OutsideS;
    const bool unit = in01(x.x2);
    if (unit && x.x3 > 0.0 && x.x3 <= 1.0 + kSnap) return Region::A1;
    if (x.x3 >= 1.0 - kSnap && in_range(radius2(x), 1.0, 2.0)) return Region::A2;
    const bool low_strip = in_range(x.x2, -3.0, -2.0);
    if (low_strip && in_range(x.x3, 0.0, 1.0)) return Region::A3;
    if (low_strip && in_range(x.x3, -2.0, 0.0)) return Region::A4;
    if (x.x3 <= -2.0 + kSnap && in_range(radius5(x), 1.0, 2.0)) return Region::A5;
    if (unit && in_range(x.x3, -2.0, -1.0)) return Region::A6;
    if (unit && x.x3 >= -1.0 - kSnap && x.x3 < 0.0) return Region::A7;
    if (unit && x.x3 == 0.0) return Region::CriticalPlane;
    return Region::OutsideS;
}

Vec3 field_a(Point3 x) {
    switch (classify_region(x)) {
        case Region::A1: {
            const double s = std::clamp(1.0 - x.x3, 0.0, std::nextafter(1.0, 0.0));
            const Vec2 b = depauw::field_b<double>(s, xy(x));
            return {b.x1, b.x2, -1.0};
        }
        case Region::A2: {
            const double r = radius2(x);
            return {0.0, (x.x3 - 1.0) / r, -(x.x2 + 1.0) / r};
        }
        case Region::A3: {
            const Vec2 c = planar::field_c(xy(x) - kCentre3);
            return {c.x1 / 2, c.x2 / 2, 1.0};
        }
        case Region::A4:
            return {0.0, 0.0, 1.0};
        case Region::A5: {
            const double r = radius5(x);
            return {0.0, (x.x3 + 2.0) / r, -(x.x2 + 1.0) / r};
        }
        case Region::A6: {
            const Vec2 c = planar::field_c(xy(x) - kCentre6);
            return {-c.x1 / 2, -c.x2 / 2, -1.0};
        }
        case Region::A7: {
            // -R3 a(R3 x)
            const double s = std::clamp(1.0 + x.x3, 0.0, std::nextafter(1.0, 0.0));
            const Vec2 b = depauw::field_b<double>(s, xy(x));
            return {-b.x1, -b.x2, -1.0};
        }
        default:
            return {0.0, 0.0, 0.0};
    }
}

Vec3 field_a_tilde(Point3 x) {
    if (classify_region(x) == Region::A7) return {0.0, 0.0, -1.0};
    return field_a(x);
}

Point3 reflect_R3(Point3 x) { return {x.x1, x.x2, -x.x3}; }
Point3 mirror(Point3 x) { return {1.0 - x.x1, x.x2, x.x3}; }

StopTimes stop_times(Point3 x, int depth) {
    return {-march_backward(x, depth).duration, march_forward(x, depth).duration};
}

std::vector<OrbitSegment> orbit_segments(Point3 x, int depth) {
    const March back = march_backward(x, depth);
    const March fwd = march_forward(x, depth);
    std::vector<OrbitSegment> out(back.segments.rbegin(), back.segments.rend());
    // x sits inside one region; its backward and forward pieces are one segment.
    if (!out.empty() && !fwd.segments.empty() && out.back().region == fwd.segments.front().region &&
        out.back().exit_time == 0.0 && fwd.segments.front().entry_time == 0.0) {
        out.back().exit_time = fwd.segments.front().exit_time;
        out.insert(out.end(), fwd.segments.begin() + 1, fwd.segments.end());
    } else {
        out.insert(out.end(), fwd.segments.begin(), fwd.segments.end());
    }
    return out;
}

Anchor orbit_anchor(Point3 x, int depth) {
    if (effective_region(x) == Region::A1) {
        const March back = march_backward(x, depth);
        return {back.m1, 1.0 - std::clamp(x.x3, 0.0, 1.0)};
    }
    const March fwd = march_forward(x, depth);
    return {fwd.m1, 1.0 - fwd.duration};
}

Point3 orbit_point(Point2 y, double tau, int depth) {
    tau = std::clamp(tau, kBottom, 1.0);
    const double r2 = y.x2 + 1.0;
    const double r5 = 2.0 - y.x2;
    const double tau2 = -kPi * r2;
    const double tau3 = tau2 - 1.0;
    const double tau4 = tau3 - 2.0;

    if (tau >= 0.0) {
        const Point2 q = chi_from_zero(tau, y, depth);
        return {q.x1, q.x2, 1.0 - tau};
    }
    if (tau >= tau2) {
        const double th = -tau / r2;
        return {y.x1, r2 * std::cos(th) - 1.0, r2 * std::sin(th) + 1.0};
    }
    if (tau >= tau3) {
        const double s = tau - tau2;
        const Point2 q = rotate_about(s / 2, {y.x1, -y.x2 - 2.0}, kCentre3);
        return {q.x1, q.x2, 1.0 + s};
    }
    if (tau >= tau4) {
        return {1.0 - y.x1, y.x2 - 3.0, tau - tau3};
    }
    if (tau >= kTau5) {
        const double th = std::min(kPi - (tau - tau4) / r5, 2 * kPi);
        return {1.0 - y.x1, r5 * std::cos(th) - 1.0, r5 * std::sin(th) - 2.0};
    }
    if (tau >= kTau6) {
        const double s = tau - kTau5;
        const Point2 q = rotate_about(-s / 2, {1.0 - y.x1, 1.0 - y.x2}, kCentre6);
        return {q.x1, q.x2, -2.0 - s};
    }
    const double s = tau - kTau6;
    const Point2 q = chi_from_zero(-s, y, depth);
    return {q.x1, q.x2, -1.0 - s};
}

Point3 varphi(double t, Point3 x, int depth) {
    const StopTimes st = stop_times(x, depth);
    if (t < st.t_minus - 1e-12 || t > st.t_plus + 1e-12) {
        throw std::domain_error("varphi needs t in [t-(x), t+(x)]");
    }
    if (t == 0.0) return x;
    const Anchor a = orbit_anchor(x, depth);
    return orbit_point(a.y, a.offset + t, depth);
}

Point3 involution_h(Point3 x, int depth) {
    switch (effective_region(x)) {
        case Region::A2:
        case Region::A4:
        case Region::A5:
            return mirror(x);
        case Region::A1: {
            const double s = std::clamp(1.0 - x.x3, 0.0, 1.0);
            const Point2 y = chi_to_zero(s, xy(x), depth);
            const Point2 q = chi_from_zero(s, mirror2(y), depth);
            return {q.x1, q.x2, x.x3};
        }
        case Region::A3: {
            const double s = std::clamp(1.0 - x.x3, 0.0, 1.0);
            const Point2 w = planar::square_rot_flow(s / 2, xy(x) - kCentre3);
            const Point2 q = planar::square_rot_flow(-s / 2, Point2{-w.x1, w.x2}) + kCentre3;
            return {q.x1, q.x2, x.x3};
        }
        case Region::A6: {
            const double s = std::clamp(2.0 + x.x3, 0.0, 1.0);
            const Point2 w = planar::square_rot_flow(-s / 2, xy(x) - kCentre6);
            const Point2 q = planar::square_rot_flow(s / 2, Point2{-w.x1, w.x2}) + kCentre6;
            return {q.x1, q.x2, x.x3};
        }
        default: {
            const double s = std::clamp(1.0 + std::min(x.x3, 0.0), 0.0, 1.0);
            const Point2 y = chi_to_zero(s, xy(x), depth);
            const Point2 q = chi_from_zero(s, mirror2(y), depth);
            return {q.x1, q.x2, x.x3};
        }
    }
}

Point3 flow_phi(double t, Point3 x, int depth) {
    if (t == 0.0 || classify_region(x) == Region::OutsideS) return x;
    const Anchor a = orbit_anchor(x, depth);
    return orbit_point(a.y, reduce_orbit_time(a.offset + t), depth);
}

Point3 flow_psi(double t, Point3 x, int depth, bool orbit_in_W) {
    if (t == 0.0 || classify_region(x) == Region::OutsideS) return x;
    const Anchor a = orbit_anchor(x, depth);
    const double tau = a.offset + t;
    const double reduced = reduce_orbit_time(tau);
    // Each passage through the collapse switches between the orbit of x and
    // the orbit of h(x), so odd period counts land on the mirrored orbit.
    const auto k = static_cast<long long>(std::llround((tau - reduced) / kPeriod));
    const Point2 y = (k % 2 == 0 || orbit_in_W) ? a.y : mirror2(a.y);
    return orbit_point(y, reduced, depth);
}

bool orbit_in_W(const digits::DigitStream& m1_height) {
    return digits::in_Z(m1_height);
}

bool is_exceptional_time(Point3 x, double t, double eps, int depth) {
    const double tp = stop_times(x, depth).t_plus;
    double d = std::fmod(std::fabs(tp - t), kPeriod);
    return std::min(d, kPeriod - d) < eps;
}

Point3 forced_flow_tilde(double t, Point3 x, double y1, int depth) {
    if (!(x.x1 > 0 && x.x1 < 1 && x.x2 > 0 && x.x2 < 1 && x.x3 >= -1 && x.x3 < 0)) {
        throw std::domain_error("forced_flow_tilde needs x in (0,1)^2 x [-1,0)");
    }
    if (t < x.x3 - 1 - 1e-12 || t > 1 + x.x3 + 1e-12) {
        throw std::domain_error("forced_flow_tilde needs t in [x3 - 1, 1 + x3]");
    }
    if (t >= x.x3) return {x.x1, x.x2, x.x3 - t};
    // y2 = gamma^-1(x1, x2): interleave 32 bits of each coordinate.
    const auto a = static_cast<std::uint64_t>(std::ldexp(x.x1, 32));
    const auto b = static_cast<std::uint64_t>(std::ldexp(x.x2, 32));
    std::uint64_t code = 0;
    for (int k = 0; k < 32; ++k) {
        code |= ((a >> (31 - k)) & 1u) << (63 - 2 * k);
        code |= ((b >> (31 - k)) & 1u) << (62 - 2 * k);
    }
    const long double y2 = std::ldexp(static_cast<long double>(code), -64);
    const long double lambda = std::clamp(1.0L + t - x.x3, 0.0L, 1.0L);
    const Vec2L q = depauw::chi_flow<long double>(0.0L, lambda, {static_cast<long double>(y1), y2}, depth).point;
    return {static_cast<double>(q.x1), static_cast<double>(q.x2), x.x3 - t};
}

}  // namespace flowlab::donut3
