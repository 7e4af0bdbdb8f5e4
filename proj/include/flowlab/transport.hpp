#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "flowlab/geometry.hpp"
#include "flowlab/verify.hpp"

// Weak solutions of d_t u + <a, grad u> = 0 built from flows, and Monte-Carlo
// residuals against smooth compactly supported test functions.
namespace flowlab::transport {

using verify::Coords;

// exp(1/(s^2 - 1)) on |s| < 1, zero elsewhere.
double bump(double s);
double bump_derivative(double s);
// Smooth step: 0 for s <= 0, 1 for s >= 1.
double smooth_step(double s);

// Product of bumps over the box center +- radius in (t, x1, ..., x_dim).
struct TestFunction {
    std::vector<double> center;
    std::vector<double> radius;

    TestFunction(std::vector<double> c, std::vector<double> r);

    std::size_t space_dim() const { return center.size() - 1; }
    double value(double t, const Coords& x) const;
    double dt(double t, const Coords& x) const;
    Coords grad(double t, const Coords& x) const;
    double t_lo() const { return center[0] - radius[0]; }
    double t_hi() const { return center[0] + radius[0]; }
    verify::ProbeBox space_box() const;
};

// u(t, x) = u0(back(t, x)), where back(t, x) is the time-0 position of the
// trajectory passing through x at time t.
struct CandidateSolution {
    std::size_t dim = 3;
    std::function<double(const Coords&)> u0;
    std::function<Coords(double, const Coords&)> back;
};

double eval_solution(const CandidateSolution& sol, double t, const Coords& x);

// x1 times a smooth cutoff that is 1 on the bounding box of the support of
// the field ([0,1] x [-3,1] x [-4,3] in 3D, [0,1]^2 in 2D).
double default_u0(std::size_t dim, const Coords& x);

enum class Flow { Phi, Psi };

CandidateSolution solution_3d(Flow f, int depth = kDefaultDepth);
CandidateSolution solution_2d(Flow f, int depth = kDefaultDepth);

using ScalarField = std::function<double(double, const Coords&)>;

struct Residual {
    double estimate = 0;
    double sigma = 0;
    std::uint64_t samples = 0;
};

// Monte-Carlo estimate of int int u (d_t h + <a, grad h>) dx dt over
// t >= 0, plus int u0 h(0, .) dx when u0 is given and h reaches t = 0.
// Throws std::invalid_argument for zero samples.
Residual weak_residual(const ScalarField& u, const std::function<double(const Coords&)>& u0,
                       const verify::TimeMap& field, const TestFunction& h, std::uint64_t samples,
                       std::uint64_t seed);

Residual weak_residual(const CandidateSolution& sol, const verify::TimeMap& field,
                       const TestFunction& h, std::uint64_t samples, std::uint64_t seed);

// u = v - w; the initial terms cancel.
Residual weak_residual_difference(const CandidateSolution& v, const CandidateSolution& w,
                                  const verify::TimeMap& field, const TestFunction& h,
                                  std::uint64_t samples, std::uint64_t seed);

struct ChangeOfVariables {
    double lhs = 0;
    double rhs = 0;
    double sigma = 0;
};

// int g(map(x)) dx against int g(y) dy over the container, with g the time
// slice of h at its centre time. Same samples on both sides.
ChangeOfVariables change_of_variables_check(const verify::PointMap& map, const TestFunction& h,
                                            const verify::ProbeBox& container,
                                            std::uint64_t samples, std::uint64_t seed);

}  // namespace flowlab::transport
