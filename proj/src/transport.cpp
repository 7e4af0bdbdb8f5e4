#include "flowlab/transport.hpp"

#include <cmath>
#include <stdexcept>

#include "flowlab/donut3.hpp"
#include "flowlab/nonauto2.hpp"

namespace flowlab::transport {

double bump(double s) {
    if (!(std::abs(s) < 1)) return 0;
    return std::exp(1 / (s * s - 1));
}

double bump_derivative(double s) {
    if (!(std::abs(s) < 1)) return 0;
    const double q = s * s - 1;
    return bump(s) * (-2 * s / (q * q));
}

double smooth_step(double s) {
    if (s <= 0) return 0;
    if (s >= 1) return 1;
    const double a = std::exp(-1 / s);
    const double b = std::exp(-1 / (1 - s));
    return a / (a + b);
}

TestFunction::TestFunction(std::vector<double> c, std::vector<double> r)
    : center(std::move(c)), radius(std::move(r)) {
    if (center.size() != radius.size() || center.size() < 3 || center.size() > 4)
        throw std::invalid_argument("TestFunction needs matching (t, x) centre and radii, dim 2 or 3");
    for (double v : radius)
        if (!(v > 0)) throw std::invalid_argument("TestFunction radii must be positive");
}

namespace {

double coord(std::size_t k, double t, const Coords& x) { return k == 0 ? t : x[k - 1]; }

}  // namespace

double TestFunction::value(double t, const Coords& x) const {
    double v = 1;
    for (std::size_t k = 0; k < center.size() && v != 0; ++k)
        v *= bump((coord(k, t, x) - center[k]) / radius[k]);
    return v;
}

double TestFunction::dt(double t, const Coords& x) const {
    double v = bump_derivative((t - center[0]) / radius[0]) / radius[0];
    for (std::size_t k = 1; k < center.size() && v != 0; ++k)
        v *= bump((x[k - 1] - center[k]) / radius[k]);
    return v;
}

Coords TestFunction::grad(double t, const Coords& x) const {
    std::vector<double> b(center.size()), db(center.size());
    for (std::size_t k = 0; k < center.size(); ++k) {
        const double s = (coord(k, t, x) - center[k]) / radius[k];
        b[k] = bump(s);
        db[k] = bump_derivative(s) / radius[k];
    }
    Coords g{0, 0, 0};
    for (std::size_t j = 1; j < center.size(); ++j) {
        double v = db[j];
        for (std::size_t k = 0; k < center.size(); ++k)
            if (k != j) v *= b[k];
        g[j - 1] = v;
    }
    return g;
}

verify::ProbeBox TestFunction::space_box() const {
    std::vector<verify::Interval> ax;
    for (std::size_t k = 1; k < center.size(); ++k)
        ax.push_back({center[k] - radius[k], center[k] + radius[k]});
    return verify::ProbeBox(std::move(ax));
}

double eval_solution(const CandidateSolution& sol, double t, const Coords& x) {
    if (t == 0) return sol.u0(x);
    return sol.u0(sol.back(t, x));
}

double default_u0(std::size_t dim, const Coords& x) {
    static constexpr double lo3[3] = {0, -3, -4}, hi3[3] = {1, 1, 3};
    static constexpr double lo2[2] = {0, 0}, hi2[2] = {1, 1};
    constexpr double margin = 0.5;
    const double* lo = dim == 3 ? lo3 : lo2;
    const double* hi = dim == 3 ? hi3 : hi2;
    double cut = 1;
    for (std::size_t k = 0; k < dim; ++k)
        cut *= smooth_step((x[k] - lo[k] + margin) / margin) * smooth_step((hi[k] + margin - x[k]) / margin);
    return x[0] * cut;
}

CandidateSolution solution_3d(Flow f, int depth) {
    CandidateSolution s;
    s.dim = 3;
    s.u0 = [](const Coords& x) { return default_u0(3, x); };
    s.back = [f, depth](double t, const Coords& x) {
        const Point3 p{x[0], x[1], x[2]};
        const Point3 q = f == Flow::Phi ? donut3::flow_phi(-t, p, depth) : donut3::flow_psi(-t, p, depth);
        return Coords{q.x1, q.x2, q.x3};
    };
    return s;
}

CandidateSolution solution_2d(Flow f, int depth) {
    CandidateSolution s;
    s.dim = 2;
    s.u0 = [](const Coords& x) { return default_u0(2, x); };
    s.back = [f, depth](double t, const Coords& x) {
        // The flows are not defined from alpha = 1, a null time slice.
        if (t == 1.0) t = std::nextafter(1.0, 0.0);
        const Point2 p{x[0], x[1]};
        const Point2 q = f == Flow::Phi ? nonauto2::flow_phi2(-t, t, p, depth)
                                        : nonauto2::flow_psi2(-t, t, p, depth);
        return Coords{q.x1, q.x2, 0};
    };
    return s;
}

namespace {

struct Moments {
    double sum = 0;
    double sum2 = 0;
};

Residual combine(const std::vector<Moments>& shards, double volume, std::uint64_t n) {
    double s = 0, s2 = 0;
    for (const auto& m : shards) {
        s += m.sum;
        s2 += m.sum2;
    }
    const double mean = s / static_cast<double>(n);
    const double var = std::max(0.0, s2 / static_cast<double>(n) - mean * mean);
    return {volume * mean, volume * std::sqrt(var / static_cast<double>(n)), n};
}

}  // namespace

Residual weak_residual(const ScalarField& u, const std::function<double(const Coords&)>& u0,
                       const verify::TimeMap& field, const TestFunction& h, std::uint64_t samples,
                       std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("weak_residual needs samples");
    const verify::ProbeBox space = h.space_box();
    const std::size_t dim = h.space_dim();
    const double t0 = std::max(0.0, h.t_lo());
    const double t1 = h.t_hi();

    Residual bulk{0, 0, samples};
    if (t1 > t0) {
        const auto shards = verify::run_shards<Moments>(
            samples, seed, [&](verify::Rng& rng, std::uint64_t count, Moments& m) {
                for (std::uint64_t i = 0; i < count; ++i) {
                    const double t = rng.uniform(t0, t1);
                    const Coords x = space.sample(rng);
                    const double uv = u(t, x);
                    if (uv == 0) continue;
                    const Coords a = field(t, x);
                    const Coords g = h.grad(t, x);
                    double adv = h.dt(t, x);
                    for (std::size_t k = 0; k < dim; ++k) adv += a[k] * g[k];
                    const double f = uv * adv;
                    m.sum += f;
                    m.sum2 += f * f;
                }
            });
        bulk = combine(shards, (t1 - t0) * space.volume(), samples);
    }
    if (!u0 || h.t_lo() >= 0) return bulk;

    const auto shards = verify::run_shards<Moments>(
        samples, seed ^ 0x9e3779b97f4a7c15ULL, [&](verify::Rng& rng, std::uint64_t count, Moments& m) {
            for (std::uint64_t i = 0; i < count; ++i) {
                const Coords x = space.sample(rng);
                const double f = u0(x) * h.value(0.0, x);
                m.sum += f;
                m.sum2 += f * f;
            }
        });
    const Residual init = combine(shards, space.volume(), samples);
    return {bulk.estimate + init.estimate, std::hypot(bulk.sigma, init.sigma), 2 * samples};
}

Residual weak_residual(const CandidateSolution& sol, const verify::TimeMap& field,
                       const TestFunction& h, std::uint64_t samples, std::uint64_t seed) {
    return weak_residual([&sol](double t, const Coords& x) { return eval_solution(sol, t, x); },
                         sol.u0, field, h, samples, seed);
}

Residual weak_residual_difference(const CandidateSolution& v, const CandidateSolution& w,
                                  const verify::TimeMap& field, const TestFunction& h,
                                  std::uint64_t samples, std::uint64_t seed) {
    return weak_residual(
        [&](double t, const Coords& x) { return eval_solution(v, t, x) - eval_solution(w, t, x); },
        nullptr, field, h, samples, seed);
}

ChangeOfVariables change_of_variables_check(const verify::PointMap& map, const TestFunction& h,
                                            const verify::ProbeBox& container,
                                            std::uint64_t samples, std::uint64_t seed) {
    if (samples == 0) throw std::invalid_argument("change_of_variables_check needs samples");
    struct Acc {
        double l = 0, r = 0, d2 = 0;
    };
    const double tc = h.center[0];
    const auto shards =
        verify::run_shards<Acc>(samples, seed, [&](verify::Rng& rng, std::uint64_t count, Acc& a) {
            for (std::uint64_t i = 0; i < count; ++i) {
                const Coords x = container.sample(rng);
                const double gl = h.value(tc, map(x));
                const double gr = h.value(tc, x);
                a.l += gl;
                a.r += gr;
                a.d2 += (gl - gr) * (gl - gr);
            }
        });
    double l = 0, r = 0, d2 = 0;
    for (const auto& a : shards) {
        l += a.l;
        r += a.r;
        d2 += a.d2;
    }
    const double n = static_cast<double>(samples);
    const double vol = container.volume();
    const double md = (l - r) / n;
    const double var = std::max(0.0, d2 / n - md * md);
    return {vol * l / n, vol * r / n, vol * std::sqrt(var / n)};
}

}  // namespace flowlab::transport
