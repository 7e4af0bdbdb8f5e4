#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace flowlab::verify {

// Points of R^2 or R^3; 2D callers leave the last slot at zero.
using Coords = std::array<double, 3>;
using PointMap = std::function<Coords(const Coords&)>;
using TimeMap = std::function<Coords(double, const Coords&)>;

// Uniform doubles from the top 53 bits of mt19937_64, seeded through
// seed_seq so every (seed, stream) pair is an independent, portable stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
    std::uint64_t bits() { return eng_(); }
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 eng_;
};

struct Interval {
    double lo = 0;
    double hi = 0;
    double length() const { return hi - lo; }
};

struct ProbeBox {
    std::vector<Interval> axes;

    ProbeBox() = default;
    ProbeBox(std::initializer_list<Interval> ax);
    explicit ProbeBox(std::vector<Interval> ax);

    std::size_t dim() const { return axes.size(); }
    double volume() const;
    bool contains(const Coords& x) const;
    Coords sample(Rng& rng) const;
};

struct CheckReport {
    std::string name;
    double statistic = 0;
    double tolerance = 0;
    bool passed = false;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::string notes;
};

// passed = |statistic| <= tolerance, false for NaN.
CheckReport make_report(std::string name, double statistic, double tolerance, std::uint64_t samples,
                        std::uint64_t seed, std::string notes = {});

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    nlohmann::json params = nlohmann::json::object();
    std::vector<CheckReport> checks;

    bool all_passed() const;
};

nlohmann::json to_json(const CheckReport& r);
nlohmann::json to_json(const SuiteReport& r);
CheckReport check_from_json(const nlohmann::json& j);
SuiteReport suite_from_json(const nlohmann::json& j);

// Worker threads for sampling: hardware concurrency, capped by FLOWLAB_THREADS.
int worker_count();

// Samples are split over a fixed number of shards, each with its own stream,
// so results do not depend on how many workers run them.
inline constexpr int kShards = 64;

template <class Acc>
std::vector<Acc> run_shards(std::uint64_t total, std::uint64_t seed,
                            const std::function<void(Rng&, std::uint64_t, Acc&)>& body);

// |P| against the volume of the preimage of P, estimated by sampling the
// container. Throws std::runtime_error if a sample leaves the container.
std::vector<CheckReport> mc_preimage_volume(const std::string& name, const PointMap& map,
                                            const std::vector<ProbeBox>& probes,
                                            const ProbeBox& container, std::uint64_t n,
                                            std::uint64_t seed);

// Net outward flux through the boundary of a 2D or 3D box, midpoint rule with
// n and 2n points per edge; the tolerance comes from the gap between the two.
CheckReport flux_divergence(const std::string& name, const PointMap& field, const ProbeBox& box,
                            int n = 64);

// Max deviation over trials; a trial returning nullopt was excluded by a guard.
CheckReport deviation_sweep(const std::string& name,
                            const std::function<std::optional<double>(Rng&)>& trial,
                            std::uint64_t n, std::uint64_t seed, double tolerance);

struct TrajectorySample {
    Coords x;
    double t = 0;
};

// Central difference of flow(., x) at t against field(t, flow(t, x)).
// Samples where the field along the stencil jumps by more than `jump` sit on a
// piece seam and are skipped.
CheckReport ode_residual(const std::string& name, std::size_t dim, const TimeMap& flow,
                         const TimeMap& field,
                         const std::function<TrajectorySample(Rng&)>& sampler, std::uint64_t n,
                         std::uint64_t seed, double h = 1e-6, double jump = 1e-3,
                         double tolerance = 1e-4);

// Occupied h-grid cells times h^2. Needs at least 1000 points.
double box_count_area(const std::vector<std::array<double, 2>>& pts, double h);

}  // namespace flowlab::verify

#include "flowlab/verify_impl.hpp"
