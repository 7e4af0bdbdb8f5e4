#include "flowlab/suites.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "flowlab/depauw.hpp"
#include "flowlab/digits.hpp"
#include "flowlab/donut3.hpp"
#include "flowlab/nonauto2.hpp"
#include "flowlab/planar_rot.hpp"
#include "flowlab/transport.hpp"

namespace flowlab::suites {

using verify::CheckReport;
using verify::Coords;
using verify::ProbeBox;
using verify::Rng;
using verify::SuiteReport;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kT = donut3::kPeriod;

std::uint64_t capped(const SuiteConfig& cfg, std::uint64_t nominal) {
    return std::max<std::uint64_t>(1, std::min(cfg.samples, nominal));
}

// Distinct sub-seed per check so reordering checks does not shift streams.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double sup2(Point2 a, Point2 b) { return std::max(std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2)); }
double sup3(Point3 a, Point3 b) {
    return std::max({std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2), std::abs(a.x3 - b.x3)});
}

Coords c3(Point3 p) { return {p.x1, p.x2, p.x3}; }
Point3 p3(const Coords& c) { return {c[0], c[1], c[2]}; }
Coords c2(Point2 p) { return {p.x1, p.x2, 0}; }
Point2 p2(const Coords& c) { return {c[0], c[1]}; }

// Passes when the wrapped check fails, for deliberate counterexamples.
CheckReport expect_failure(const std::string& name, const CheckReport& inner) {
    std::ostringstream notes;
    notes << "negative control: statistic " << inner.statistic << " must exceed tolerance "
          << inner.tolerance;
    return verify::make_report(name, std::max(0.0, inner.tolerance - std::abs(inner.statistic)), 0.0,
                               inner.samples, inner.seed, notes.str());
}

void append(SuiteReport& r, std::vector<CheckReport> checks) {
    for (auto& c : checks) r.checks.push_back(std::move(c));
}

SuiteReport start(const std::string& name, const SuiteConfig& cfg) {
    SuiteReport r;
    r.suite = name;
    r.seed = cfg.seed;
    r.params = {{"samples", cfg.samples}, {"depth", cfg.depth}, {"seed", cfg.seed}};
    return r;
}

Point2 in_square(Rng& rng) { return {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)}; }

}  // namespace

namespace sampling {

Point3 point_in_S(Rng& rng) {
    for (;;) {
        const Point3 x = p3(container3().sample(rng));
        const auto r = donut3::classify_region(x);
        if (r != donut3::Region::OutsideS && r != donut3::Region::CriticalPlane) return x;
    }
}

Point3 point_in_A2_lower(Rng& rng, double x1) {
    const double r = rng.uniform(1.0 + 1e-6, 2.0 - 1e-6);
    const double th = rng.uniform(kPi / 2, kPi - 1e-6);
    return {x1, r * std::cos(th) - 1.0, r * std::sin(th) + 1.0};
}

std::vector<std::uint8_t> random_bits(Rng& rng, std::size_t n) {
    std::vector<std::uint8_t> b(n);
    for (auto& d : b) d = static_cast<std::uint8_t>(rng.bits() >> 63);
    return b;
}

const std::vector<ProbeBox>& probes3() {
    static const std::vector<ProbeBox> p{
        {{0.1, 0.6}, {0.2, 0.7}, {0.1, 0.6}},      // A1
        {{0.2, 0.9}, {-2.0, -0.5}, {1.2, 2.5}},    // A2
        {{0.0, 1.0}, {-3.0, -2.0}, {-1.5, 0.5}},   // A4, A3
        {{0.3, 0.8}, {0.1, 0.9}, {-0.9, -0.2}},    // A7
        {{0.0, 1.0}, {-1.5, 0.5}, {-3.5, -2.2}},   // A5
        {{0.1, 0.9}, {0.1, 0.9}, {-1.8, -1.1}},    // A6
    };
    return p;
}

const std::vector<ProbeBox>& probes2() {
    static const std::vector<ProbeBox> p{
        {{0.1, 0.6}, {0.2, 0.5}},
        {{0.3, 0.9}, {0.55, 0.95}},
        {{0.0, 0.25}, {0.0, 1.0}},
    };
    return p;
}

}  // namespace sampling

// ---------------------------------------------------------------- planar

SuiteReport planar_suite(const SuiteConfig& cfg) {
    SuiteReport r = start("planar", cfg);
    const std::uint64_t n = capped(cfg, 10000);
    using planar::rect_rot_flow;
    using planar::square_rot_flow;

    r.checks.push_back(verify::deviation_sweep(
        "xi_c_quarter_turn",
        [](Rng& g) -> std::optional<double> {
            const Point2 x = in_square(g);
            return sup2(square_rot_flow(0.25, x), {-x.x2, x.x1});
        },
        n, sub_seed(cfg.seed, 1), 1e-12));
    r.checks.push_back(verify::deviation_sweep(
        "xi_d_quarter_turn",
        [](Rng& g) -> std::optional<double> {
            const Point2 x{g.uniform(-0.5, 0.5), g.uniform(-0.25, 0.25)};
            return sup2(rect_rot_flow(0.25, x), {-2 * x.x2, x.x1 / 2});
        },
        n, sub_seed(cfg.seed, 2), 1e-12));
    r.checks.push_back(verify::deviation_sweep(
        "xi_c_period",
        [](Rng& g) -> std::optional<double> {
            const Point2 x = in_square(g);
            return sup2(square_rot_flow(1.0, x), x);
        },
        n, sub_seed(cfg.seed, 3), 1e-12));
    r.checks.push_back(verify::deviation_sweep(
        "xi_c_group",
        [](Rng& g) -> std::optional<double> {
            const Point2 x = in_square(g);
            const double t1 = g.uniform(-2, 2), t2 = g.uniform(-2, 2);
            return sup2(square_rot_flow(t1 + t2, x), square_rot_flow(t1, square_rot_flow(t2, x)));
        },
        n, sub_seed(cfg.seed, 4), 1e-12));
    r.checks.push_back(verify::deviation_sweep(
        "xi_c_level",
        [](Rng& g) -> std::optional<double> {
            const Point2 x = in_square(g);
            const Point2 y = square_rot_flow(g.uniform(-3, 3), x);
            return std::abs(std::max(std::abs(y.x1), std::abs(y.x2)) -
                            std::max(std::abs(x.x1), std::abs(x.x2)));
        },
        n, sub_seed(cfg.seed, 5), 1e-12));

    const ProbeBox sq{{-0.5, 0.5}, {-0.5, 0.5}};
    const ProbeBox rect{{-0.5, 0.5}, {-0.25, 0.25}};
    append(r, verify::mc_preimage_volume(
                  "xi_c_measure", [](const Coords& x) { return c2(square_rot_flow(0.3, p2(x))); },
                  {ProbeBox{{-0.4, 0.1}, {0.0, 0.3}}, ProbeBox{{0.1, 0.45}, {-0.45, -0.1}}}, sq,
                  cfg.samples, sub_seed(cfg.seed, 6)));
    append(r, verify::mc_preimage_volume(
                  "xi_d_measure", [](const Coords& x) { return c2(rect_rot_flow(0.3, p2(x))); },
                  {ProbeBox{{-0.4, 0.1}, {0.0, 0.2}}, ProbeBox{{0.1, 0.45}, {-0.2, -0.05}}}, rect,
                  cfg.samples, sub_seed(cfg.seed, 7)));

    const std::uint64_t m = capped(cfg, 2000);
    r.checks.push_back(verify::ode_residual(
        "xi_c_ode", 2, [](double t, const Coords& x) { return c2(square_rot_flow(t, p2(x))); },
        [](double, const Coords& p) { return c2(planar::field_c(p2(p))); },
        [](Rng& g) { return verify::TrajectorySample{c2(in_square(g)), g.uniform(0, 1)}; }, m,
        sub_seed(cfg.seed, 8)));
    r.checks.push_back(verify::ode_residual(
        "xi_d_ode", 2, [](double t, const Coords& x) { return c2(rect_rot_flow(t, p2(x))); },
        [](double, const Coords& p) { return c2(planar::field_d(p2(p))); },
        [](Rng& g) {
            return verify::TrajectorySample{Coords{g.uniform(-0.5, 0.5), g.uniform(-0.25, 0.25), 0},
                                            g.uniform(0, 1)};
        },
        m, sub_seed(cfg.seed, 9)));
    r.checks.push_back(verify::flux_divergence(
        "c_flux_square", [](const Coords& p) { return c2(planar::field_c(p2(p))); },
        ProbeBox{{-0.37, 0.21}, {-0.13, 0.44}}, 512));
    r.checks.push_back(verify::flux_divergence(
        "d_flux_rectangle", [](const Coords& p) { return c2(planar::field_d(p2(p))); },
        ProbeBox{{-0.6, 0.3}, {-0.1, 0.3}}, 512));
    return r;
}

// ---------------------------------------------------------------- depauw

SuiteReport depauw_suite(const SuiteConfig& cfg) {
    SuiteReport r = start("depauw", cfg);
    const int depth = cfg.depth;
    const std::uint64_t n = capped(cfg, 10000);

    // Half-time formula away from a band around the level <= 2 grid lines.
    r.checks.push_back(verify::deviation_sweep(
        "half_time_formula",
        [depth](Rng& g) -> std::optional<double> {
            const Point2 x{g.uniform(), g.uniform()};
            for (double v : {x.x1, x.x2}) {
                const double q = v * 4;
                if (std::abs(q - std::round(q)) < 4e-6) return std::nullopt;
            }
            return sup2(depauw::chi_flow<double>(0.0, 0.5, x, depth).point,
                        depauw::chi_half_closed_form(x));
        },
        n, sub_seed(cfg.seed, 1), 1e-9));

    r.checks.push_back(verify::deviation_sweep(
        "shifted_group",
        [depth](Rng& g) -> std::optional<double> {
            const double z = g.uniform(-0.5, 0.95);
            const double t2 = g.uniform(-0.5, 1.0 - z);
            const double t1 = g.uniform(-0.5, 1.0 - z - t2);
            const Point2 x{g.uniform(), g.uniform()};
            const Point2 lhs =
                depauw::chi_flow<double>(z + t2, t1, depauw::chi_flow<double>(z, t2, x, depth).point, depth)
                    .point;
            return sup2(lhs, depauw::chi_flow<double>(z, t1 + t2, x, depth).point);
        },
        n, sub_seed(cfg.seed, 2), 1e-9));

    for (double t : {0.3, 0.6, 0.8}) {
        append(r, verify::mc_preimage_volume(
                      "chi_measure_t" + std::to_string(t).substr(0, 3),
                      [t, depth](const Coords& x) {
                          return c2(depauw::chi_flow<double>(0.0, t, p2(x), depth).point);
                      },
                      sampling::probes2(), sampling::container2(), cfg.samples,
                      sub_seed(cfg.seed, 3 + static_cast<std::uint64_t>(t * 10))));
    }

    // Fiber collapse for random 60-bit heights.
    for (int N : {10, 20, 30}) {
        if (N > depth) continue;
        r.checks.push_back(verify::deviation_sweep(
            "fiber_collapse_N" + std::to_string(N),
            [N](Rng& g) -> std::optional<double> {
                const auto x2 = digits::DigitStream::truncated(2, sampling::random_bits(g, 60));
                return static_cast<double>(depauw::collapse_diameter(x2, N, 16)) /
                       (std::sqrt(2.0) * std::ldexp(1.0, -N));
            },
            capped(cfg, 100), sub_seed(cfg.seed, 20 + static_cast<std::uint64_t>(N)), 1.0));
    }

    // gamma against the flow at t_N.
    const int N = std::min(20, depth);
    r.checks.push_back(verify::deviation_sweep(
        "gamma_flow_oracle",
        [N](Rng& g) -> std::optional<double> {
            const auto x2 = digits::DigitStream::truncated(2, sampling::random_bits(g, 60));
            const auto gm = depauw::gamma(x2, N);
            const long double u = g.uniform(1e-9, 1 - 1e-9);
            const Vec2L q = depauw::chi_flow<long double>(0.0L, depauw::stage_time(N),
                                                          {u, x2.representative()}, N)
                                .point;
            const long double d = std::hypot(q.x1 - gm.point.x1, q.x2 - gm.point.x2);
            return static_cast<double>(d) / (std::sqrt(2.0) * std::ldexp(1.0, -N + 1));
        },
        capped(cfg, 1000), sub_seed(cfg.seed, 40), 1.0));

    // Base-4 intervals of level i map onto the 4^i dyadic squares of level i.
    {
        std::uint64_t bad = 0, tried = 0;
        Rng g(sub_seed(cfg.seed, 41));
        for (int i = 1; i <= 5; ++i) {
            std::set<std::pair<long double, long double>> corners;
            const std::uint64_t count = 1ULL << (2 * i);
            for (std::uint64_t k = 0; k < count; ++k) {
                std::vector<std::uint8_t> d4(static_cast<std::size_t>(i));
                for (int j = 0; j < i; ++j) d4[static_cast<std::size_t>(i - 1 - j)] = static_cast<std::uint8_t>((k >> (2 * j)) & 3);
                const auto s2 = digits::base4_to_base2(digits::DigitStream::terminating(4, d4));
                const auto [odd, even] = digits::deinterleave(s2, static_cast<std::size_t>(i));
                const long double cx = odd.value(static_cast<std::size_t>(i));
                const long double cy = even.value(static_cast<std::size_t>(i));
                corners.insert({cx, cy});
                const long double side = std::ldexp(1.0L, -i);
                // Heights inside the interval land in that square at t_i.
                for (int s = 0; s < 4; ++s) {
                    ++tried;
                    const long double x2 = (static_cast<long double>(k) + g.uniform(0.01, 0.99)) *
                                           std::ldexp(1.0L, -2 * i);
                    const Vec2L q = depauw::chi_flow<long double>(
                                        0.0L, depauw::stage_time(i), {g.uniform(0.01, 0.99), x2}, i)
                                        .point;
                    if (q.x1 < cx || q.x1 > cx + side || q.x2 < cy || q.x2 > cy + side) ++bad;
                }
            }
            if (corners.size() != count) bad += count - corners.size();
        }
        r.checks.push_back(verify::make_report("gamma_square_identity", static_cast<double>(bad), 0.0,
                                               tried, sub_seed(cfg.seed, 41),
                                               "levels 1..5, all base-4 intervals"));
    }

    // Zero normal component of b on the edges of active dyadic squares.
    r.checks.push_back(verify::deviation_sweep(
        "b_normal_flux_zero",
        [](Rng& g) -> std::optional<double> {
            const double t = g.uniform(0, depauw::stage_time(12));
            const int i = depauw::stage_index(t);
            const double side = std::ldexp(1.0, -i);
            const auto k = static_cast<double>(g.bits() % (1ULL << i));
            const double along = g.uniform();
            const double edge = k * side;
            // Vertical edge x1 = edge and horizontal edge x2 = edge.
            const double n1 = depauw::field_b<double>(t, {edge, along}).x1;
            const double n2 = depauw::field_b<double>(t, {along, edge}).x2;
            return std::max(std::abs(n1), std::abs(n2));
        },
        n, sub_seed(cfg.seed, 42), 0.0));
    return r;
}

// ---------------------------------------------------------------- donut3

SuiteReport donut3_suite(const SuiteConfig& cfg) {
    SuiteReport r = start("donut3", cfg);
    const int depth = cfg.depth;
    const std::uint64_t n = capped(cfg, 1000);
    const double collapse_tol = std::max(1e-9, std::sqrt(2.0) * std::ldexp(1.0, -depth));

    r.checks.push_back(verify::deviation_sweep(
        "period",
        [depth](Rng& g) -> std::optional<double> {
            const auto st = donut3::stop_times(sampling::point_in_S(g), depth);
            return std::abs(st.t_plus - st.t_minus - kT);
        },
        n, sub_seed(cfg.seed, 1), 1e-9));

    r.checks.push_back(verify::deviation_sweep(
        "stop_times_x1_independent",
        [depth](Rng& g) -> std::optional<double> {
            Point3 x = sampling::point_in_S(g);
            x.x1 = 0.2;
            Point3 y = x;
            y.x1 = 0.7;
            const auto a = donut3::stop_times(x, depth);
            const auto b = donut3::stop_times(y, depth);
            return std::max(std::abs(a.t_plus - b.t_plus), std::abs(a.t_minus - b.t_minus));
        },
        n, sub_seed(cfg.seed, 2), 1e-9));

    r.checks.push_back(verify::deviation_sweep(
        "endpoints_on_critical_plane",
        [depth](Rng& g) -> std::optional<double> {
            const Point3 x = sampling::point_in_S(g);
            const auto st = donut3::stop_times(x, depth);
            const Point3 a = donut3::varphi(st.t_plus, x, depth);
            const Point3 b = donut3::varphi(st.t_minus, x, depth);
            return std::max({sup3(a, b), std::abs(a.x3), std::abs(b.x3)});
        },
        n, sub_seed(cfg.seed, 3), collapse_tol));

    r.checks.push_back(verify::deviation_sweep(
        "m1_passage",
        [depth](Rng& g) -> std::optional<double> {
            const Point3 x = sampling::point_in_S(g);
            const auto st = donut3::stop_times(x, depth);
            return std::abs(donut3::varphi(st.t_plus - 1.0, x, depth).x3 - 1.0);
        },
        n, sub_seed(cfg.seed, 4), 1e-9));

    for (int which = 0; which < 2; ++which) {
        const bool psi = which == 1;
        const std::string tag = psi ? "psi" : "phi";
        auto flow = [psi, depth](double t, Point3 x) {
            return psi ? donut3::flow_psi(t, x, depth) : donut3::flow_phi(t, x, depth);
        };
        r.checks.push_back(verify::deviation_sweep(
            "group_" + tag,
            [flow, depth](Rng& g) -> std::optional<double> {
                const Point3 x = sampling::point_in_S(g);
                const double t1 = g.uniform(-2 * kT, 2 * kT), t2 = g.uniform(-2 * kT, 2 * kT);
                if (donut3::is_exceptional_time(x, t2, 1e-6, depth) ||
                    donut3::is_exceptional_time(x, t1 + t2, 1e-6, depth))
                    return std::nullopt;
                return sup3(flow(t1 + t2, x), flow(t1, flow(t2, x)));
            },
            n, sub_seed(cfg.seed, 5 + static_cast<std::uint64_t>(which)), 1e-8));
        r.checks.push_back(verify::deviation_sweep(
            "inverse_" + tag,
            [flow, depth](Rng& g) -> std::optional<double> {
                const Point3 x = sampling::point_in_S(g);
                const double t = g.uniform(-2 * kT, 2 * kT);
                if (donut3::is_exceptional_time(x, t, 1e-6, depth)) return std::nullopt;
                return sup3(flow(-t, flow(t, x)), x);
            },
            n, sub_seed(cfg.seed, 7 + static_cast<std::uint64_t>(which)), 1e-8));
        for (double t : {0.5, 3.0, kT + 1}) {
            append(r, verify::mc_preimage_volume(
                          "measure_" + tag + "_t" + (t > 10 ? std::string("T+1") : std::to_string(t).substr(0, 3)),
                          [flow, t](const Coords& x) { return c3(flow(t, p3(x))); }, sampling::probes3(),
                          sampling::container3(), cfg.samples,
                          sub_seed(cfg.seed, 10 + static_cast<std::uint64_t>(t * 10) + 100 * static_cast<std::uint64_t>(which))));
        }
        r.checks.push_back(verify::ode_residual(
            "ode_" + tag, 3, [flow](double t, const Coords& x) { return c3(flow(t, p3(x))); },
            [](double, const Coords& p) { return c3(donut3::field_a(p3(p))); },
            [](Rng& g) { return verify::TrajectorySample{c3(sampling::point_in_S(g)), g.uniform(-kT, kT)}; },
            capped(cfg, 2000), sub_seed(cfg.seed, 20 + static_cast<std::uint64_t>(which))));
    }

    r.checks.push_back(verify::deviation_sweep(
        "h_involution",
        [depth](Rng& g) -> std::optional<double> {
            const Point3 x = sampling::point_in_S(g);
            const Point3 hx = donut3::involution_h(x, depth);
            const double tp = std::abs(donut3::stop_times(hx, depth).t_plus - donut3::stop_times(x, depth).t_plus);
            // x3 must be preserved bit for bit; any change fails the check.
            const double x3 = hx.x3 == x.x3 ? 0.0 : 1.0;
            return std::max({sup3(donut3::involution_h(hx, depth), x), tp, x3});
        },
        n, sub_seed(cfg.seed, 30), 1e-8));

    r.checks.push_back(verify::deviation_sweep(
        "two_distinct_flows",
        [depth](Rng& g) -> std::optional<double> {
            const Point3 x = sampling::point_in_A2_lower(g, g.uniform(0.01, 0.99));
            const double t = g.uniform(kT, kT + kPi);
            return std::max(std::abs(donut3::flow_phi(t, x, depth).x1 - x.x1),
                            std::abs(donut3::flow_psi(t, x, depth).x1 - (1 - x.x1)));
        },
        n, sub_seed(cfg.seed, 31), 1e-8));

    auto field = [](const Coords& p) { return c3(donut3::field_a(p3(p))); };
    r.checks.push_back(verify::flux_divergence("flux_inside_A4", field, {{0.1, 0.9}, {-2.9, -2.1}, {-1.7, -0.3}}));
    r.checks.push_back(verify::flux_divergence("flux_across_critical_plane", field,
                                               {{0.13, 0.71}, {0.22, 0.87}, {-0.3, 0.4}}));
    r.checks.push_back(verify::flux_divergence("flux_across_M1", field, {{0.2, 0.8}, {0.1, 0.6}, {0.7, 1.3}}));
    r.checks.push_back(verify::flux_divergence("flux_across_A3_A4", field, {{0.1, 0.9}, {-2.8, -2.3}, {-0.4, 0.3}}));

    append(r, {expect_failure("counterexample_rejected",
                              verify::mc_preimage_volume(
                                  "halving_map",
                                  [](const Coords& x) { return Coords{x[0] / 2, x[1] / 2, x[2] / 2}; },
                                  {ProbeBox{{0.1, 0.4}, {-1, 0}, {0.5, 1}}}, sampling::container3(),
                                  capped(cfg, 100000), sub_seed(cfg.seed, 40))[0])});
    return r;
}

// ---------------------------------------------------------------- nonauto2

SuiteReport nonauto2_suite(const SuiteConfig& cfg) {
    SuiteReport r = start("nonauto2", cfg);
    const int depth = cfg.depth;
    const std::uint64_t n = capped(cfg, 1000);
    using nonauto2::flow_phi2;
    using nonauto2::flow_psi2;

    auto near1 = [](double s) { return std::abs(s - 1.0) < 1e-6; };
    for (int which = 0; which < 2; ++which) {
        const bool psi = which == 1;
        const std::string tag = psi ? "psi2" : "phi2";
        auto flow = [psi, depth](double t, double a, Point2 x) {
            return psi ? flow_psi2(t, a, x, depth) : flow_phi2(t, a, x, depth);
        };
        r.checks.push_back(verify::deviation_sweep(
            "group_" + tag,
            [flow, near1](Rng& g) -> std::optional<double> {
                const double a = g.uniform(-0.5, 2.5);
                const double t1 = g.uniform(-2, 2), t2 = g.uniform(-2, 2);
                if (near1(a) || near1(a + t2) || near1(a + t1 + t2)) return std::nullopt;
                const Point2 x{g.uniform(), g.uniform()};
                return sup2(flow(t1, a + t2, flow(t2, a, x)), flow(t1 + t2, a, x));
            },
            n, sub_seed(cfg.seed, 1 + static_cast<std::uint64_t>(which)), 1e-8));

        const std::vector<std::pair<double, double>> times{{0.7, 0.0}, {2.0, 0.0}, {1.5, 0.25}};
        for (const auto& [t, a] : times) {
            std::ostringstream nm;
            nm << "measure_" << tag << "_t" << t << "_a" << a;
            append(r, verify::mc_preimage_volume(
                          nm.str(), [flow, t = t, a = a](const Coords& x) { return c2(flow(t, a, p2(x))); },
                          sampling::probes2(), sampling::container2(), cfg.samples,
                          sub_seed(cfg.seed, 10 + static_cast<std::uint64_t>(t * 10 + a * 100) + 1000 * static_cast<std::uint64_t>(which))));
        }

        // alpha rides in the unused third slot so the field can see it.
        r.checks.push_back(verify::ode_residual(
            "ode_" + tag, 2,
            [flow](double t, const Coords& x) {
                Coords y = c2(flow(t, x[2], p2(x)));
                y[2] = x[2];
                return y;
            },
            [](double t, const Coords& p) { return c2(nonauto2::field_a2(p[2] + t, p2(p)).value); },
            [near1](Rng& g) {
                for (;;) {
                    const double a = g.uniform(-0.2, 2.2);
                    const double s = g.uniform(0.0, 2.0);
                    if (near1(a) || std::abs(s - 1.0) < 1e-3) continue;
                    return verify::TrajectorySample{Coords{g.uniform(), g.uniform(), a}, s - a};
                }
            },
            capped(cfg, 2000), sub_seed(cfg.seed, 20 + static_cast<std::uint64_t>(which))));
    }

    r.checks.push_back(verify::deviation_sweep(
        "psi2_equals_phi2_before_collapse",
        [depth](Rng& g) -> std::optional<double> {
            const double a = g.uniform(-0.5, 0.99);
            const double t = g.uniform(-1, 1 - a);
            const Point2 x{g.uniform(), g.uniform()};
            const Point2 p = flow_phi2(t, a, x, depth), q = flow_psi2(t, a, x, depth);
            return (p.x1 == q.x1 && p.x2 == q.x2) ? 0.0 : 1.0;
        },
        n, sub_seed(cfg.seed, 30), 0.0));

    r.checks.push_back(verify::deviation_sweep(
        "psi2_mirrors_after_collapse",
        [depth](Rng& g) -> std::optional<double> {
            const Point2 x{g.uniform(0.01, 0.99), g.uniform(0.01, 0.99)};
            const double t = g.uniform(2.0, 4.0);
            return std::max(sup2(flow_phi2(t, 0.0, x, depth), x),
                            sup2(flow_psi2(t, 0.0, x, depth), {1 - x.x1, x.x2}));
        },
        n, sub_seed(cfg.seed, 31), 1e-12));

    // Doubles carry 53 bits of the fiber height, enough for 20 stages.
    const int N = std::min(depth, 20);
    r.checks.push_back(verify::deviation_sweep(
        "fiber_collapse_at_time_1",
        [N](Rng& g) -> std::optional<double> {
            const double a = g.uniform(-0.5, 0.9);
            const double x2 = g.uniform();
            Point2 first{};
            double diam = 0;
            for (int k = 0; k < 16; ++k) {
                const Point2 xa = flow_phi2(a, 0.0, {(k + 0.5) / 16, x2}, N);
                const Point2 q = flow_phi2(1 - a, a, xa, N);
                if (k == 0) first = q;
                diam = std::max(diam, std::hypot(q.x1 - first.x1, q.x2 - first.x2));
            }
            return diam / (std::sqrt(2.0) * std::ldexp(1.0, -N));
        },
        capped(cfg, 200), sub_seed(cfg.seed, 32), 1.0));

    for (int k = 0; k < 3; ++k) {
        const double t = 0.17 + 0.61 * k;  // skips the t = 1 slice
        r.checks.push_back(verify::flux_divergence(
            "flux_slice_t" + std::to_string(t).substr(0, 4),
            [t](const Coords& p) { return c2(nonauto2::field_a2(t, p2(p)).value); },
            ProbeBox{{0.11 + 0.1 * k, 0.83}, {0.07, 0.61 + 0.1 * k}}, 512));
    }
    return r;
}

// ---------------------------------------------------------------- transport

namespace {

void transport_dim(SuiteReport& r, const SuiteConfig& cfg, int dim) {
    using transport::Flow;
    using transport::TestFunction;
    const int depth = cfg.depth;
    const std::string d = dim == 3 ? "3d" : "2d";
    const auto v = dim == 3 ? transport::solution_3d(Flow::Phi, depth) : transport::solution_2d(Flow::Phi, depth);
    const auto w = dim == 3 ? transport::solution_3d(Flow::Psi, depth) : transport::solution_2d(Flow::Psi, depth);
    const verify::TimeMap field =
        dim == 3 ? verify::TimeMap([](double, const Coords& p) { return c3(donut3::field_a(p3(p))); })
                 : verify::TimeMap([](double t, const Coords& p) { return c2(nonauto2::field_a2(t, p2(p)).value); });

    std::vector<TestFunction> hs;
    if (dim == 3) {
        hs.emplace_back(std::vector<double>{0.2, 0.5, 0.5, 0.5}, std::vector<double>{0.9, 0.45, 0.45, 0.45});
        hs.emplace_back(std::vector<double>{kT + 1.5, 0.5, -1.0, 1.5}, std::vector<double>{1.4, 0.45, 1.4, 0.9});
        hs.emplace_back(std::vector<double>{3.0, 0.5, -2.5, -0.5}, std::vector<double>{2.0, 0.45, 0.45, 1.2});
    } else {
        hs.emplace_back(std::vector<double>{0.3, 0.5, 0.5}, std::vector<double>{0.6, 0.45, 0.45});
        hs.emplace_back(std::vector<double>{1.5, 0.5, 0.5}, std::vector<double>{1.0, 0.45, 0.45});
        hs.emplace_back(std::vector<double>{3.0, 0.5, 0.5}, std::vector<double>{0.9, 0.45, 0.45});
    }
    const std::uint64_t m = capped(cfg, 200000);
    auto report = [&](const std::string& name, const transport::Residual& res, std::uint64_t seed) {
        std::ostringstream notes;
        notes << "estimate " << res.estimate << ", sigma " << res.sigma;
        return verify::make_report(name, res.estimate, 4 * res.sigma, res.samples, seed, notes.str());
    };
    for (std::size_t k = 0; k < hs.size(); ++k) {
        const std::uint64_t s = sub_seed(cfg.seed, 100 * static_cast<std::uint64_t>(dim) + k);
        const std::string hk = "_h" + std::to_string(k + 1);
        r.checks.push_back(report("weak_residual_v_" + d + hk, transport::weak_residual(v, field, hs[k], m, s), s));
        r.checks.push_back(report("weak_residual_w_" + d + hk, transport::weak_residual(w, field, hs[k], m, s + 1), s + 1));
        r.checks.push_back(report("weak_residual_v_minus_w_" + d + hk,
                                  transport::weak_residual_difference(v, w, field, hs[k], m, s + 2), s + 2));
    }

    // |v - w| = |2 x1 - 1| = 0.5 on probes with x1 = 0.25.
    const std::uint64_t n = capped(cfg, 1000);
    r.checks.push_back(verify::deviation_sweep(
        "sup_probe_v_minus_w_" + d,
        [&, dim](Rng& g) -> std::optional<double> {
            Coords x;
            double t;
            if (dim == 3) {
                const double rr = g.uniform(1.0 + 1e-6, 2.0 - 1e-6);
                const double th = g.uniform(kPi / 2, kPi - 1e-3);
                x = {0.25, rr * std::cos(th) - 1, rr * std::sin(th) + 1};
                // Backward time past one period, still inside the arc.
                t = kT + g.uniform(0.01, 0.99) * rr * (kPi - th);
            } else {
                x = {0.25, g.uniform(0.01, 0.99), 0};
                t = g.uniform(2.0, 4.0);
            }
            return std::max(0.0, 0.5 - std::abs(transport::eval_solution(v, t, x) - transport::eval_solution(w, t, x)));
        },
        n, sub_seed(cfg.seed, 200 + static_cast<std::uint64_t>(dim)), 1e-12));

    r.checks.push_back(verify::deviation_sweep(
        "initial_difference_zero_" + d,
        [&, dim](Rng& g) -> std::optional<double> {
            const Coords x = dim == 3 ? sampling::container3().sample(g) : sampling::container2().sample(g);
            return std::abs(transport::eval_solution(v, 0.0, x) - transport::eval_solution(w, 0.0, x));
        },
        n, sub_seed(cfg.seed, 210 + static_cast<std::uint64_t>(dim)), 0.0));

    // The forward-composed candidate is not a solution; the residual must see it.
    {
        const std::uint64_t s = sub_seed(cfg.seed, 220 + static_cast<std::uint64_t>(dim));
        transport::Residual res;
        if (dim == 3) {
            const TestFunction h({0.3, 0.5, -2.5, -1.0}, {0.25, 0.4, 0.4, 0.6});
            auto u0 = [](const Coords& x) { return x[2]; };
            res = transport::weak_residual(
                [depth](double t, const Coords& x) { return donut3::flow_phi(t, p3(x), depth).x3; }, u0,
                field, h, m, s);
        } else {
            const TestFunction h({0.1, 0.3, 0.2}, {0.3, 0.2, 0.15});
            auto u0 = [](const Coords& x) { return x[1]; };
            res = transport::weak_residual(
                [depth](double t, const Coords& x) { return nonauto2::flow_phi2(t, 0.0, p2(x), depth).x2; }, u0,
                field, h, m, s);
        }
        r.checks.push_back(expect_failure("negative_control_" + d, report("wrong_direction", res, s)));
    }

    if (dim == 3) {
        const TestFunction g({0.0, 0.5, -1.0, 0.0}, {1.0, 0.5, 2.0, 3.0});
        const std::uint64_t s = sub_seed(cfg.seed, 230);
        for (int which = 0; which < 2; ++which) {
            const double t = which == 0 ? 3.0 : kT + 1;
            const auto cv = transport::change_of_variables_check(
                [which, t, depth](const Coords& x) {
                    return c3(which == 0 ? donut3::flow_phi(t, p3(x), depth) : donut3::flow_psi(t, p3(x), depth));
                },
                g, sampling::container3(), m, s + static_cast<std::uint64_t>(which));
            std::ostringstream notes;
            notes << "lhs " << cv.lhs << ", rhs " << cv.rhs << ", sigma " << cv.sigma;
            r.checks.push_back(verify::make_report(which == 0 ? "change_of_variables_phi" : "change_of_variables_psi",
                                                   cv.lhs - cv.rhs, 4 * cv.sigma, m, s + static_cast<std::uint64_t>(which),
                                                   notes.str()));
        }
    }
}

}  // namespace

SuiteReport transport_suite(const SuiteConfig& cfg, int dim) {
    SuiteReport r = start("transport", cfg);
    r.params["dim"] = dim;
    if (dim == 0 || dim == 3) transport_dim(r, cfg, 3);
    if (dim == 0 || dim == 2) transport_dim(r, cfg, 2);
    return r;
}

// ---------------------------------------------------------------- nonexistence

namespace {

constexpr double kForcedTime = -1.5;

BoxCountProfile profile(double x3, const std::vector<std::array<double, 2>>& pts) {
    BoxCountProfile p;
    p.x3 = x3;
    for (int e = 4; e <= 8; ++e) p.areas.push_back(verify::box_count_area(pts, std::ldexp(1.0, -e)));
    for (std::size_t k = 0; k + 1 < p.areas.size(); ++k) p.ratios.push_back(p.areas[k + 1] / p.areas[k]);
    return p;
}

std::vector<std::array<double, 2>> slice_images(double x3, std::uint64_t points, std::uint64_t seed,
                                                const std::function<Point3(Point3)>& map) {
    struct Acc {
        std::vector<std::array<double, 2>> pts;
    };
    const auto shards = verify::run_shards<Acc>(points, seed, [&](Rng& g, std::uint64_t count, Acc& a) {
        a.pts.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            const Point3 q = map({g.uniform(1e-9, 1 - 1e-9), g.uniform(1e-9, 1 - 1e-9), x3});
            a.pts.push_back({q.x1, q.x2});
        }
    });
    std::vector<std::array<double, 2>> pts;
    for (const auto& a : shards) pts.insert(pts.end(), a.pts.begin(), a.pts.end());
    return pts;
}

}  // namespace

BoxCountProfile forced_profile(double x3, double y1, std::uint64_t points, std::uint64_t seed, int depth) {
    return profile(x3, slice_images(x3, points, seed, [=](Point3 x) {
                       return donut3::forced_flow_tilde(kForcedTime, x, y1, depth);
                   }));
}

BoxCountProfile control_profile(double x3, std::uint64_t points, std::uint64_t seed, int depth) {
    return profile(x3, slice_images(x3, points, seed, [=](Point3 x) {
                       return donut3::flow_phi(kForcedTime, x, depth);
                   }));
}

SuiteReport nonexistence_suite(const SuiteConfig& cfg) {
    SuiteReport r = start("nonexistence", cfg);
    const std::uint64_t forced_n = capped(cfg, 100000);
    // The control image fills the square, so saturating the finest grid
    // (65536 cells) takes more points than the forced curve needs.
    const std::uint64_t control_n = 4 * forced_n;
    const double slices[] = {-0.95, -0.8, -0.65, -0.55};
    double forced_worst = 0, control_worst = 1e300;
    std::ostringstream fn, cn;
    for (std::size_t k = 0; k < std::size(slices); ++k) {
        const auto f = forced_profile(slices[k], 0.5, forced_n, sub_seed(cfg.seed, 1 + k), cfg.depth);
        const auto c = control_profile(slices[k], control_n, sub_seed(cfg.seed, 11 + k), cfg.depth);
        fn << "x3=" << slices[k] << ":";
        cn << "x3=" << slices[k] << ":";
        for (double q : f.ratios) {
            forced_worst = std::max(forced_worst, q);
            fn << " " << q;
        }
        for (double q : c.ratios) {
            control_worst = std::min(control_worst, q);
            cn << " " << q;
        }
        fn << "; ";
        cn << "; ";
    }
    // Forced images: every halving ratio <= 0.6.
    r.checks.push_back(verify::make_report("forced_area_collapse", std::max(0.0, forced_worst - 0.6), 0.0,
                                           forced_n * std::size(slices), sub_seed(cfg.seed, 1),
                                           "max ratio " + std::to_string(forced_worst) + "; " + fn.str()));
    // Measure-preserving control: every ratio >= 0.9.
    r.checks.push_back(verify::make_report("control_area_kept", std::max(0.0, 0.9 - control_worst), 0.0,
                                           control_n * std::size(slices), sub_seed(cfg.seed, 11),
                                           "min ratio " + std::to_string(control_worst) + "; " + cn.str()));
    return r;
}

// ---------------------------------------------------------------- registry

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"planar",   "depauw",    "donut3",
                                                "nonauto2", "transport", "nonexistence"};
    return names;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
    if (name == "planar") return planar_suite(cfg);
    if (name == "depauw") return depauw_suite(cfg);
    if (name == "donut3") return donut3_suite(cfg);
    if (name == "nonauto2") return nonauto2_suite(cfg);
    if (name == "transport") return transport_suite(cfg);
    if (name == "nonexistence") return nonexistence_suite(cfg);
    if (name == "all") {
        SuiteReport all = start("all", cfg);
        for (const auto& n : suite_names()) {
            SuiteReport s = run_suite(n, cfg);
            for (auto& c : s.checks) {
                c.name = n + "/" + c.name;
                all.checks.push_back(std::move(c));
            }
        }
        return all;
    }
    throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace flowlab::suites
