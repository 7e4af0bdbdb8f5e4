#pragma once

#include <algorithm>
#include <cmath>

namespace flowlab {

inline constexpr int kDefaultDepth = 30;
inline constexpr int kMaxDepth = 50;

template <class T>
struct BasicVec2 {
    T x1{};
    T x2{};

    friend constexpr BasicVec2 operator+(BasicVec2 a, BasicVec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
    friend constexpr BasicVec2 operator-(BasicVec2 a, BasicVec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
    friend constexpr BasicVec2 operator-(BasicVec2 a) { return {-a.x1, -a.x2}; }
    friend constexpr BasicVec2 operator*(T s, BasicVec2 a) { return {s * a.x1, s * a.x2}; }
    friend constexpr bool operator==(BasicVec2 a, BasicVec2 b) = default;
};

using Vec2 = BasicVec2<double>;
using Point2 = Vec2;
using Vec2L = BasicVec2<long double>;

struct Vec3 {
    double x1{};
    double x2{};
    double x3{};

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3}; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x1, s * a.x2, s * a.x3}; }
    friend constexpr bool operator==(Vec3 a, Vec3 b) = default;
};

using Point3 = Vec3;

template <class T>
T max_norm(BasicVec2<T> v) {
    using std::abs;
    return std::max(abs(v.x1), abs(v.x2));
}

inline double max_norm(const Vec3& v) {
    return std::max({std::abs(v.x1), std::abs(v.x2), std::abs(v.x3)});
}

template <class T>
T dist(BasicVec2<T> a, BasicVec2<T> b) {
    using std::hypot;
    return hypot(a.x1 - b.x1, a.x2 - b.x2);
}

inline double dist(const Vec3& a, const Vec3& b) {
    return std::sqrt((a.x1 - b.x1) * (a.x1 - b.x1) + (a.x2 - b.x2) * (a.x2 - b.x2) +
                     (a.x3 - b.x3) * (a.x3 - b.x3));
}

template <class To, class From>
BasicVec2<To> vec_cast(BasicVec2<From> v) {
    return {static_cast<To>(v.x1), static_cast<To>(v.x2)};
}

}  // namespace flowlab
