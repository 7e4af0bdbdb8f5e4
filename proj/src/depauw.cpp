#include "flowlab/depauw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "flowlab/planar_rot.hpp"

namespace flowlab::depauw {

using digits::DigitStream;

long double stage_time(int i) {
    return 1.0L - std::ldexp(1.0L, -i);
}

int stage_index(long double t) {
    if (!(t >= 0.0L && t < 1.0L)) throw std::domain_error("stage index needs 0 <= t < 1");
    int i = 0;
    while (t >= stage_time(i + 1)) ++i;
    return i;
}

namespace {

template <class T>
struct Cell {
    T k1, k2;
    BasicVec2<T> q;
};

template <class T>
Cell<T> locate(BasicVec2<T> p, int level) {
    const T n = std::ldexp(T(1), level);
    const T s1 = std::ldexp(p.x1, level);
    const T s2 = std::ldexp(p.x2, level);
    const T k1 = std::clamp(std::floor(s1), T(0), n - 1);
    const T k2 = std::clamp(std::floor(s2), T(0), n - 1);
    return {k1, k2, {s1 - k1, s2 - k2}};
}

template <class T>
BasicVec2<T> unlocate(const Cell<T>& c, int level) {
    return {std::ldexp(c.k1 + c.q.x1, -level), std::ldexp(c.k2 + c.q.x2, -level)};
}

template <class T>
bool open_unit(BasicVec2<T> q) {
    return q.x1 > 0 && q.x1 < 1 && q.x2 > 0 && q.x2 < 1;
}

template <class T>
bool closed_unit(BasicVec2<T> q) {
    return q.x1 >= 0 && q.x1 <= 1 && q.x2 >= 0 && q.x2 <= 1;
}

// A full stage in local coordinates.
template <class T>
BasicVec2<T> half_step(BasicVec2<T> q) {
    if (q.x2 == T(0.5)) return {T(0.5), 1 - q.x1};
    const T b = q.x2 > T(0.5) ? T(1) : T(0);
    return {q.x1 / 2 + b / 2, 2 * q.x2 - b};
}

template <class T>
BasicVec2<T> half_step_inverse(BasicVec2<T> r) {
    if (r.x1 == T(0.5)) return {1 - r.x2, T(0.5)};
    const T b = r.x1 > T(0.5) ? T(1) : T(0);
    return {2 * r.x1 - b, (r.x2 + b) / 2};
}

template <class T>
BasicVec2<T> rect_phase(BasicVec2<T> q, T dt) {
    if (q.x2 == T(0.5)) return q;
    const BasicVec2<T> centre{T(0.5), q.x2 < T(0.5) ? T(0.25) : T(0.75)};
    return planar::rect_rot_flow(dt, q - centre) + centre;
}

template <class T>
BasicVec2<T> square_phase(BasicVec2<T> q, T dt) {
    const BasicVec2<T> centre{T(0.5), T(0.5)};
    return planar::square_rot_flow(-dt, q - centre) + centre;
}

// Stage-0 pattern from local time s_from to s_to, both in [0, 1/2].
template <class T>
BasicVec2<T> stage_local(BasicVec2<T> q, T s_from, T s_to) {
    if (!open_unit(q)) return q;
    const T quarter(0.25);
    if (s_from == 0 && s_to == T(0.5)) return half_step(q);
    if (s_from == T(0.5) && s_to == 0) return half_step_inverse(q);
    if (s_to > s_from) {
        if (s_from < quarter) q = rect_phase(q, std::min(s_to, quarter) - s_from);
        if (s_to > quarter) q = square_phase(q, s_to - std::max(s_from, quarter));
    } else {
        if (s_from > quarter) q = square_phase(q, std::max(s_to, quarter) - s_from);
        if (s_to < quarter) q = rect_phase(q, s_to - std::min(s_from, quarter));
    }
    return q;
}

}  // namespace

template <class T>
BasicVec2<T> field_b(T t, BasicVec2<T> p) {
    if (t >= 1) throw std::domain_error("stage index diverges at t >= 1");
    if (t < 0 || !closed_unit(p)) return {T(0), T(0)};
    const int i = stage_index(static_cast<long double>(t));
    const T s = std::ldexp(t - static_cast<T>(stage_time(i)), i);
    const Cell<T> c = locate(p, i);
    if (s < T(0.25)) {
        const T cy = c.q.x2 <= T(0.5) ? T(0.25) : T(0.75);
        return planar::field_d(BasicVec2<T>{c.q.x1 - T(0.5), c.q.x2 - cy});
    }
    return -planar::field_c(BasicVec2<T>{c.q.x1 - T(0.5), c.q.x2 - T(0.5)});
}

template <class T>
ChiResult<T> chi_flow(T z, T t, BasicVec2<T> p, int depth) {
    if (!(z < 1)) throw std::domain_error("chi_flow needs z < 1");
    if (depth < 0 || depth > kMaxDepth) throw std::invalid_argument("depth out of range");
    const T a0 = z;
    T a1 = z + t;
    if (a1 > 1 + T(1e-12)) throw std::domain_error("chi_flow needs t <= 1 - z");
    a1 = std::min(a1, T(1));

    const T horizon = static_cast<T>(stage_time(depth));
    ChiResult<T> out{p, std::max(a0, a1) > horizon};
    if (!closed_unit(p)) return out;

    const T lo = std::max(std::min(a0, a1), T(0));
    const T hi = std::min(std::max(a0, a1), horizon);
    if (!(lo < hi)) return out;

    const int first = stage_index(static_cast<long double>(lo));
    int last = first;
    while (last + 1 < depth && static_cast<T>(stage_time(last + 1)) < hi) ++last;

    auto run_stage = [&](int i, bool forward) {
        const T ti = static_cast<T>(stage_time(i));
        const T tn = static_cast<T>(stage_time(i + 1));
        const T s_lo = std::ldexp(std::max(lo, ti) - ti, i);
        const T s_hi = std::ldexp(std::min(hi, tn) - ti, i);
        if (!(s_lo < s_hi)) return;
        Cell<T> c = locate(out.point, i);
        c.q = forward ? stage_local(c.q, s_lo, s_hi) : stage_local(c.q, s_hi, s_lo);
        out.point = unlocate(c, i);
    };

    if (a1 > a0) {
        for (int i = first; i <= last; ++i) run_stage(i, true);
    } else {
        for (int i = last; i >= first; --i) run_stage(i, false);
    }
    return out;
}

template BasicVec2<double> field_b<double>(double, BasicVec2<double>);
template BasicVec2<long double> field_b<long double>(long double, BasicVec2<long double>);
template ChiResult<double> chi_flow<double>(double, double, BasicVec2<double>, int);
template ChiResult<long double> chi_flow<long double>(long double, long double, BasicVec2<long double>, int);

Point2 chi_half_closed_form(Point2 p) {
    if (!open_unit(p)) throw std::invalid_argument("half-time closed form needs p in (0,1)^2");
    if (p.x2 == 0.5) return {p.x2, 1 - p.x1};
    const double f = std::floor(2 * p.x2);
    return {p.x1 / 2 + f / 2, 2 * p.x2 - f};
}

DyadicSquare containing_square(Point2 p, int level) {
    if (level < 0 || level > kMaxDepth) throw std::invalid_argument("level out of range");
    const Cell<double> c = locate(p, level);
    DyadicSquare sq;
    sq.level = level;
    sq.index = 1 + static_cast<std::uint64_t>(c.k2) * (std::uint64_t{1} << level) + static_cast<std::uint64_t>(c.k1);
    sq.corner = {std::ldexp(c.k1, -level), std::ldexp(c.k2, -level)};
    sq.side = std::ldexp(1.0, -level);
    return sq;
}

namespace {

void require_not_dyadic(const DigitStream& b) {
    if (b.known_tail() && digits::in_Z(b)) {
        throw std::domain_error("x2 = " + b.to_string() + " is dyadic");
    }
}

}  // namespace

FiberBox fiber_box_at_stage(const DigitStream& x2, int i) {
    if (i < 0 || i > kMaxDepth) throw std::invalid_argument("stage out of range");
    const DigitStream b = digits::as_base2(x2);
    require_not_dyadic(b);
    const std::size_t needed = 2 * static_cast<std::size_t>(i) + 1;
    if (b.available() < needed) {
        throw digits::DigitError("insufficient digits: stage " + std::to_string(i) + " needs " +
                                 std::to_string(needed));
    }
    FiberBox box;
    box.level = i;
    box.width = std::ldexp(1.0L, -i);
    for (int k = 1; k <= i; ++k) {
        box.m += std::ldexp(static_cast<long double>(b.digit(2 * k - 1)), -k);
        box.n += std::ldexp(static_cast<long double>(b.digit(2 * k)), -k);
    }
    // The undigested tail b_{2i+1} b_{2i+2} ... sits below the i interleaved bits.
    const std::size_t start = 2 * static_cast<std::size_t>(i) + 1;
    const std::size_t stop = b.known_tail() ? start + 80 : b.available() + 1;
    long double rest = 0;
    for (std::size_t pos = stop - 1; pos >= start; --pos) rest = (rest + b.digit(pos)) / 2;
    if (!b.known_tail()) rest += std::ldexp(1.0L, -static_cast<int>(stop - start) - 1);
    box.n += std::ldexp(rest, -i);
    return box;
}

GammaResult gamma(const DigitStream& x2, int depth) {
    if (depth < 1) throw std::invalid_argument("gamma depth must be positive");
    const DigitStream b = digits::as_base2(x2);
    require_not_dyadic(b);
    GammaResult g;
    auto halves = digits::deinterleave(b, static_cast<std::size_t>(depth));
    g.gamma1 = std::move(halves.first);
    g.gamma2 = std::move(halves.second);
    g.point = {g.gamma1.representative(), g.gamma2.representative()};
    if (b.known_tail()) {
        g.degenerate = digits::has_degenerate_interleave_tail(b);
        g.error_bound = 0;
    } else {
        g.error_bound = std::ldexp(1.0L, -depth);
    }
    return g;
}

long double collapse_diameter(const DigitStream& x2, int depth, int fiber_samples) {
    if (fiber_samples < 2) throw std::invalid_argument("need at least two fiber samples");
    const DigitStream b = digits::as_base2(x2);
    require_not_dyadic(b);
    const long double y = b.representative();
    const long double horizon = stage_time(depth);
    std::vector<Vec2L> pts;
    pts.reserve(static_cast<std::size_t>(fiber_samples));
    for (int j = 0; j < fiber_samples; ++j) {
        const long double u = static_cast<long double>(j + 1) / (fiber_samples + 1);
        pts.push_back(chi_flow<long double>(0.0L, horizon, {u, y}, depth).point);
    }
    long double diam = 0;
    for (std::size_t a = 0; a < pts.size(); ++a) {
        for (std::size_t c = a + 1; c < pts.size(); ++c) diam = std::max(diam, dist(pts[a], pts[c]));
    }
    return diam;
}

bool skeleton_image_check(double x1, const DigitStream& x2, int depth) {
    const DigitStream b = digits::as_base2(x2);
    if (!b.known_tail() || !digits::in_Z(b)) {
        throw std::invalid_argument("skeleton_image_check needs a dyadic x2");
    }
    const Vec2L p = chi_flow<long double>(0.0L, stage_time(depth), {x1, b.representative()}, depth).point;
    const long double slack = std::ldexp(1.0L, -depth);
    for (long double c : {p.x1, p.x2}) {
        const long double s = std::ldexp(c, depth);
        if (std::fabs(s - std::round(s)) <= slack) return true;
    }
    return false;
}

}  // namespace flowlab::depauw
