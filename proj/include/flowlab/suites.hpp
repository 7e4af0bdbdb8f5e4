#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowlab/geometry.hpp"
#include "flowlab/verify.hpp"

// Named verification suites run by `flowlab verify <suite>`.
namespace flowlab::suites {

struct SuiteConfig {
    std::uint64_t seed = 42;
    // Monte-Carlo sample count; identity and sweep checks use
    // min(samples, their nominal count).
    std::uint64_t samples = 1000000;
    int depth = kDefaultDepth;
};

// planar, depauw, donut3, nonauto2, transport, nonexistence.
const std::vector<std::string>& suite_names();

// Throws std::invalid_argument for an unknown name. "all" runs every suite
// and prefixes check names with the suite name.
verify::SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg);

verify::SuiteReport planar_suite(const SuiteConfig& cfg);
verify::SuiteReport depauw_suite(const SuiteConfig& cfg);
verify::SuiteReport donut3_suite(const SuiteConfig& cfg);
verify::SuiteReport nonauto2_suite(const SuiteConfig& cfg);
verify::SuiteReport transport_suite(const SuiteConfig& cfg, int dim = 0);  // 0: both
verify::SuiteReport nonexistence_suite(const SuiteConfig& cfg);

// Shared by the suites and the acceptance binary.
namespace sampling {

// Uniform in S by rejection from its bounding box, avoiding the critical plane.
Point3 point_in_S(verify::Rng& rng);
// (x1, r cos(theta) - 1, r sin(theta) + 1) with theta in [pi/2, pi], so x2 <= -1.
Point3 point_in_A2_lower(verify::Rng& rng, double x1);
// Random 60-bit binary stream for a fiber height.
std::vector<std::uint8_t> random_bits(verify::Rng& rng, std::size_t n);

inline const verify::ProbeBox& container3() {
    static const verify::ProbeBox box{{0, 1}, {-3, 1}, {-4, 3}};
    return box;
}
inline const verify::ProbeBox& container2() {
    static const verify::ProbeBox box{{0, 1}, {0, 1}};
    return box;
}
const std::vector<verify::ProbeBox>& probes3();
const std::vector<verify::ProbeBox>& probes2();

}  // namespace sampling

// Box-counting areas of a slice image at h = 2^-4 ... 2^-8.
struct BoxCountProfile {
    double x3 = 0;
    std::vector<double> areas;
    std::vector<double> ratios;  // areas[k+1] / areas[k]
};

// Images of `points` random (x1, x2) at height x3 under the forced flow
// (with free parameter y1) and under the measure-preserving flow.
BoxCountProfile forced_profile(double x3, double y1, std::uint64_t points, std::uint64_t seed, int depth);
BoxCountProfile control_profile(double x3, std::uint64_t points, std::uint64_t seed, int depth);

}  // namespace flowlab::suites
