#include <doctest.h>

#include <cstdlib>
#include <limits>

#include "flowlab/verify.hpp"

namespace vf = flowlab::verify;
using vf::Coords;
using vf::ProbeBox;

namespace {

const ProbeBox kUnit{{0, 1}, {0, 1}, {0, 1}};

Coords identity(const Coords& x) { return x; }

// Reflection through the centre of the unit cube.
Coords flip(const Coords& x) { return {1 - x[0], 1 - x[1], 1 - x[2]}; }

}  // namespace

TEST_CASE("probe boxes") {
    const ProbeBox b{{0, 2}, {1, 1.5}, {-1, 1}};
    CHECK(b.dim() == 3);
    CHECK(b.volume() == 2.0);
    CHECK(b.contains({1, 1.2, 0}));
    CHECK_FALSE(b.contains({1, 2, 0}));
    vf::Rng rng(1, 0);
    for (int i = 0; i < 1000; ++i) CHECK(b.contains(b.sample(rng)));
}

TEST_CASE("rng streams are independent and reproducible") {
    vf::Rng a(5, 0), b(5, 0), c(5, 1);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.bits();
        CHECK(x == b.bits());
        differs = differs || x != c.bits();
    }
    CHECK(differs);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        CHECK(u >= 0);
        CHECK(u < 1);
    }
}

TEST_CASE("report pass rule") {
    CHECK(vf::make_report("a", -0.5, 0.5, 1, 1).passed);
    CHECK_FALSE(vf::make_report("a", 0.6, 0.5, 1, 1).passed);
    CHECK_FALSE(vf::make_report("a", std::nan(""), 1, 1, 1).passed);
    CHECK_FALSE(vf::make_report("a", std::numeric_limits<double>::infinity(), 1, 1, 1).passed);
}

TEST_CASE("preimage volume: identity and reflection pass, halving fails") {
    const std::vector<ProbeBox> probes{{{0.1, 0.4}, {0.2, 0.7}, {0.5, 0.9}}, {{0.6, 0.8}, {0.0, 0.3}, {0.1, 0.2}}};
    for (const auto& r : vf::mc_preimage_volume("id", identity, probes, kUnit, 200000, 3)) CHECK(r.passed);
    const auto flipped = vf::mc_preimage_volume("flip", flip, probes, kUnit, 200000, 3);
    REQUIRE(flipped.size() == 2);
    CHECK(flipped[0].name == "flip/probe0");
    for (const auto& r : flipped) CHECK(r.passed);

    const auto half = vf::mc_preimage_volume(
        "half", [](const Coords& x) { return Coords{x[0] / 2, x[1] / 2, x[2] / 2}; },
        {{{0.1, 0.4}, {0.1, 0.4}, {0.1, 0.4}}}, kUnit, 200000, 3);
    REQUIRE(half.size() == 1);
    CHECK(half[0].name == "half");
    CHECK_FALSE(half[0].passed);
    // The preimage is 8 times the probe.
    CHECK(half[0].statistic == doctest::Approx(7 * 0.027).epsilon(0.05));
}

TEST_CASE("isometries pass with statistic below sigma on average") {
    const std::vector<ProbeBox> probes{{{0.1, 0.4}, {0.2, 0.7}, {0.5, 0.9}}};
    int below = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto r = vf::mc_preimage_volume("flip", flip, probes, kUnit, 50000, seed)[0];
        CHECK(r.passed);
        below += std::abs(r.statistic) <= r.tolerance / 4 ? 1 : 0;
    }
    CHECK(below >= 5);
}

TEST_CASE("samples escaping the container are an error") {
    const auto shift = [](const Coords& x) { return Coords{x[0] + 2, x[1], x[2]}; };
    CHECK_THROWS_WITH_AS(vf::mc_preimage_volume("shift", shift, {{{0, 1}, {0, 1}, {0, 1}}}, kUnit, 1000, 1),
                         doctest::Contains("container too small"), std::runtime_error);
}

TEST_CASE("flux through boxes") {
    const auto constant = [](const Coords&) { return Coords{1, -2, 0.5}; };
    CHECK(vf::flux_divergence("c", constant, {{0, 1}, {0, 2}, {-1, 1}}).statistic <= 1e-12);
    const auto rot = [](const Coords& x) { return Coords{-x[1], x[0], 0}; };
    CHECK(vf::flux_divergence("r", rot, {{0.1, 0.5}, {-0.3, 0.2}, {0, 1}}).passed);
    const auto source = [](const Coords& x) { return Coords{x[0], x[1], x[2]}; };
    const auto r = vf::flux_divergence("s", source, {{0, 1}, {0, 1}, {0, 1}});
    CHECK_FALSE(r.passed);
    CHECK(r.statistic == doctest::Approx(3.0));
    const auto planar = [](const Coords& x) { return Coords{x[0], -x[1], 0}; };
    CHECK(vf::flux_divergence("p", planar, {{0, 1}, {0, 1}}).passed);
}

TEST_CASE("deviation sweep counts skips") {
    const auto r = vf::deviation_sweep(
        "d",
        [](vf::Rng& rng) -> std::optional<double> {
            const double u = rng.uniform();
            if (u < 0.5) return std::nullopt;
            return 1e-10 * u;
        },
        1000, 7, 1e-9);
    CHECK(r.passed);
    CHECK(r.statistic <= 1e-10);
    CHECK(r.notes.find("skipped") != std::string::npos);
    const auto all = vf::deviation_sweep("d", [](vf::Rng&) -> std::optional<double> { return std::nullopt; }, 10, 7, 1);
    CHECK_FALSE(all.passed);
    CHECK(std::isinf(all.statistic));
}

TEST_CASE("ode residual of an exact rotation") {
    const auto flow = [](double t, const Coords& x) {
        return Coords{x[0] * std::cos(t) - x[1] * std::sin(t), x[0] * std::sin(t) + x[1] * std::cos(t), 0};
    };
    const auto field = [](double, const Coords& x) { return Coords{-x[1], x[0], 0}; };
    const auto sampler = [](vf::Rng& rng) { return vf::TrajectorySample{{rng.uniform(), rng.uniform(), 0}, rng.uniform(0, 3)}; };
    const auto r = vf::ode_residual("rot", 2, flow, field, sampler, 2000, 1);
    CHECK(r.passed);
    CHECK(r.statistic <= 1e-8);
    const auto wrong = [](double, const Coords& x) { return Coords{x[1], -x[0], 0}; };
    CHECK_FALSE(vf::ode_residual("rot", 2, flow, wrong, sampler, 2000, 1).passed);
}

TEST_CASE("box counting") {
    std::vector<std::array<double, 2>> square, line;
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j < 200; ++j) square.push_back({(i + 0.5) / 200, (j + 0.5) / 200});
    for (int i = 0; i < 4000; ++i) line.push_back({(i + 0.5) / 4000, 0.3});
    CHECK(vf::box_count_area(square, 1.0 / 16) == doctest::Approx(1.0));
    CHECK(vf::box_count_area(line, 1.0 / 64) == doctest::Approx(1.0 / 64));
    CHECK_THROWS(vf::box_count_area(std::vector<std::array<double, 2>>(10), 0.1));
}

TEST_CASE("reports round-trip through json") {
    vf::SuiteReport s;
    s.suite = "x";
    s.seed = 42;
    s.params = {{"samples", 100}};
    s.checks.push_back(vf::make_report("a/b", 1.25e-13, 1e-12, 100, 42, "n"));
    s.checks.push_back(vf::make_report("inf", std::numeric_limits<double>::infinity(), 1, 0, 42));
    s.checks.push_back(vf::make_report("odd", 0.1 + 0.2, 0.3, 3, 42));
    const auto j = vf::to_json(s);
    const auto back = vf::suite_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.suite == "x");
    CHECK(back.seed == 42);
    CHECK(back.params == s.params);
    REQUIRE(back.checks.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(back.checks[k].name == s.checks[k].name);
        CHECK(back.checks[k].statistic == s.checks[k].statistic);
        CHECK(back.checks[k].tolerance == s.checks[k].tolerance);
        CHECK(back.checks[k].passed == s.checks[k].passed);
        CHECK(back.checks[k].samples == s.checks[k].samples);
        CHECK(back.checks[k].notes == s.checks[k].notes);
    }
    CHECK_FALSE(back.all_passed());
}

TEST_CASE("shard results do not depend on the worker count") {
    const auto sum = [] {
        const auto shards = vf::run_shards<double>(100000, 11, [](vf::Rng& rng, std::uint64_t n, double& acc) {
            for (std::uint64_t i = 0; i < n; ++i) acc += rng.uniform();
        });
        double s = 0;
        for (double v : shards) s += v;
        return s;
    };
    setenv("FLOWLAB_THREADS", "1", 1);
    CHECK(vf::worker_count() == 1);
    const double one = sum();
    setenv("FLOWLAB_THREADS", "4", 1);
    const double many = sum();
    unsetenv("FLOWLAB_THREADS");
    CHECK(one == many);
}
