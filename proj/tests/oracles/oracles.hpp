#pragma once

// Test-only reference computations, written independently of the library's
// closed forms. Used to derive and freeze expected values.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

// First n binary digits of p/q, 0 <= p < q, by long division.
inline std::vector<std::uint8_t> long_division_bits(std::uint64_t p, std::uint64_t q, std::size_t n) {
    std::vector<std::uint8_t> bits;
    for (std::size_t i = 0; i < n; ++i) {
        p *= 2;
        bits.push_back(p >= q ? 1 : 0);
        if (p >= q) p -= q;
    }
    return bits;
}

// (prefix, block) of the eventually periodic binary expansion of p/q.
inline std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> periodic_bits(std::uint64_t p,
                                                                                     std::uint64_t q) {
    std::map<std::uint64_t, std::size_t> seen;
    std::vector<std::uint8_t> bits;
    while (!seen.count(p)) {
        seen[p] = bits.size();
        p *= 2;
        bits.push_back(p >= q ? 1 : 0);
        if (p >= q) p -= q;
    }
    const std::size_t start = seen[p];
    return {std::vector<std::uint8_t>(bits.begin(), bits.begin() + static_cast<long>(start)),
            std::vector<std::uint8_t>(bits.begin() + static_cast<long>(start), bits.end())};
}

inline double bits_value(const std::vector<std::uint8_t>& bits) {
    double v = 0, w = 0.5;
    for (auto b : bits) {
        v += b * w;
        w /= 2;
    }
    return v;
}

using P2 = std::array<double, 2>;
using P3 = std::array<double, 3>;

// Square rotation field, straight from its piecewise definition.
inline P2 c_field(P2 x) {
    const double a1 = std::abs(x[0]), a2 = std::abs(x[1]);
    if (a2 < a1 && a1 < 0.5) return {0, 8 * x[0]};
    if (a1 < a2 && a2 < 0.5) return {-8 * x[1], 0};
    return {0, 0};
}

// Explicit Euler march along the field; the field is constant along each
// edge of a level square, so the error comes from corner overshoot only.
inline P2 euler_2d(const std::function<P2(double, P2)>& f, double t0, double t1, P2 x, double dt) {
    const int steps = static_cast<int>(std::ceil(std::abs(t1 - t0) / dt));
    const double h = (t1 - t0) / steps;
    double t = t0;
    for (int i = 0; i < steps; ++i) {
        const P2 v = f(t, x);
        x = {x[0] + h * v[0], x[1] + h * v[1]};
        t += h;
    }
    return x;
}

// Classical RK4 in R^3 for an autonomous field, stepping until `stop`
// returns true or t_max elapses. Returns the elapsed time.
inline double rk4_until(const std::function<P3(P3)>& f, P3& x, double dt, double t_max,
                        const std::function<bool(const P3&, const P3&)>& stop) {
    auto add = [](P3 a, P3 b, double s) { return P3{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]}; };
    double t = 0;
    while (t < t_max) {
        const P3 k1 = f(x);
        const P3 k2 = f(add(x, k1, dt / 2));
        const P3 k3 = f(add(x, k2, dt / 2));
        const P3 k4 = f(add(x, k3, dt));
        P3 y = x;
        for (int i = 0; i < 3; ++i) y[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        t += dt;
        const bool done = stop(x, y);
        x = y;
        if (done) break;
    }
    return t;
}

}  // namespace oracle
