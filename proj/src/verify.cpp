#include "flowlab/verify.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace flowlab::verify {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    eng_.seed(seq);
}

ProbeBox::ProbeBox(std::initializer_list<Interval> ax) : ProbeBox(std::vector<Interval>(ax)) {}

ProbeBox::ProbeBox(std::vector<Interval> ax) : axes(std::move(ax)) {
    if (axes.empty() || axes.size() > 3) throw std::invalid_argument("ProbeBox needs 1 to 3 axes");
    for (const auto& a : axes)
        if (!(a.hi > a.lo)) throw std::invalid_argument("ProbeBox axis with non-positive length");
}

double ProbeBox::volume() const {
    double v = 1;
    for (const auto& a : axes) v *= a.length();
    return v;
}

bool ProbeBox::contains(const Coords& x) const {
    for (std::size_t k = 0; k < axes.size(); ++k)
        if (!(x[k] >= axes[k].lo && x[k] <= axes[k].hi)) return false;
    return true;
}

Coords ProbeBox::sample(Rng& rng) const {
    Coords x{0, 0, 0};
    for (std::size_t k = 0; k < axes.size(); ++k) x[k] = rng.uniform(axes[k].lo, axes[k].hi);
    return x;
}

CheckReport make_report(std::string name, double statistic, double tolerance, std::uint64_t samples,
                        std::uint64_t seed, std::string notes) {
    CheckReport r;
    r.name = std::move(name);
    r.statistic = statistic;
    r.tolerance = tolerance;
    r.passed = std::abs(statistic) <= tolerance;
    r.samples = samples;
    r.seed = seed;
    r.notes = std::move(notes);
    return r;
}

bool SuiteReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

namespace {

// JSON has no infinities; keep them as strings so reports round-trip.
nlohmann::json number(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double read_number(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

nlohmann::json to_json(const CheckReport& r) {
    return {{"name", r.name},       {"statistic", number(r.statistic)},
            {"tolerance", number(r.tolerance)}, {"passed", r.passed},
            {"samples", r.samples}, {"seed", r.seed},
            {"notes", r.notes}};
}

nlohmann::json to_json(const SuiteReport& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"suite", r.suite}, {"seed", r.seed}, {"params", r.params}, {"checks", checks}};
}

CheckReport check_from_json(const nlohmann::json& j) {
    CheckReport r;
    r.name = j.at("name").get<std::string>();
    r.statistic = read_number(j.at("statistic"));
    r.tolerance = read_number(j.at("tolerance"));
    r.passed = j.at("passed").get<bool>();
    r.samples = j.at("samples").get<std::uint64_t>();
    r.seed = j.value("seed", std::uint64_t{0});
    r.notes = j.value("notes", std::string{});
    return r;
}

SuiteReport suite_from_json(const nlohmann::json& j) {
    SuiteReport r;
    r.suite = j.at("suite").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.params = j.value("params", nlohmann::json::object());
    for (const auto& c : j.at("checks")) r.checks.push_back(check_from_json(c));
    return r;
}

int worker_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("FLOWLAB_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

std::vector<CheckReport> mc_preimage_volume(const std::string& name, const PointMap& map,
                                            const std::vector<ProbeBox>& probes,
                                            const ProbeBox& container, std::uint64_t n,
                                            std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("mc_preimage_volume needs samples");
    struct Acc {
        std::vector<std::uint64_t> hits;
        std::uint64_t escaped = 0;
    };
    const auto shards = run_shards<Acc>(n, seed, [&](Rng& rng, std::uint64_t count, Acc& acc) {
        acc.hits.assign(probes.size(), 0);
        for (std::uint64_t i = 0; i < count; ++i) {
            const Coords y = map(container.sample(rng));
            if (!container.contains(y)) {
                ++acc.escaped;
                continue;
            }
            for (std::size_t j = 0; j < probes.size(); ++j)
                if (probes[j].contains(y)) ++acc.hits[j];
        }
    });
    std::vector<std::uint64_t> hits(probes.size(), 0);
    std::uint64_t escaped = 0;
    for (const auto& a : shards) {
        escaped += a.escaped;
        for (std::size_t j = 0; j < a.hits.size(); ++j) hits[j] += a.hits[j];
    }
    if (escaped > 0)
        throw std::runtime_error("container too small: " + std::to_string(escaped) +
                                 " samples left it");

    const double vol = container.volume();
    std::vector<CheckReport> out;
    for (std::size_t j = 0; j < probes.size(); ++j) {
        const double p = probes[j].volume() / vol;
        const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
        const double est = static_cast<double>(hits[j]) / static_cast<double>(n) * vol;
        std::ostringstream notes;
        notes << "probe volume " << probes[j].volume() << ", estimate " << est;
        const std::string nm = probes.size() == 1 ? name : name + "/probe" + std::to_string(j);
        out.push_back(make_report(nm, std::abs(est - probes[j].volume()), 4 * sigma * vol, n, seed,
                                  notes.str()));
    }
    return out;
}

namespace {

struct FaceFlux {
    double value = 0;
    double sup = 0;  // sup |F.n| on the face
};

// Outward flux through the face x_axis = at, midpoint rule with m cells per edge.
FaceFlux face_flux(const PointMap& field, const ProbeBox& box, std::size_t axis, double at,
                   double sign, int m) {
    std::vector<std::size_t> others;
    for (std::size_t k = 0; k < box.dim(); ++k)
        if (k != axis) others.push_back(k);
    FaceFlux f;
    Coords x{0, 0, 0};
    x[axis] = at;
    const auto cell = [&](std::size_t k) { return box.axes[k].length() / m; };
    double area = 1;
    for (auto k : others) area *= cell(k);
    const int m2 = others.size() == 2 ? m : 1;
    for (int i = 0; i < m; ++i) {
        x[others[0]] = box.axes[others[0]].lo + (i + 0.5) * cell(others[0]);
        for (int j = 0; j < m2; ++j) {
            if (others.size() == 2) x[others[1]] = box.axes[others[1]].lo + (j + 0.5) * cell(others[1]);
            const double fn = sign * field(x)[axis];
            f.value += fn * area;
            f.sup = std::max(f.sup, std::abs(fn));
        }
    }
    return f;
}

}  // namespace

CheckReport flux_divergence(const std::string& name, const PointMap& field, const ProbeBox& box,
                            int n) {
    if (box.dim() < 2) throw std::invalid_argument("flux_divergence needs a 2D or 3D box");
    if (n < 1) throw std::invalid_argument("flux_divergence needs n >= 1");
    double net = 0, tol = 0, scale = 0;
    std::uint64_t evals = 0;
    for (std::size_t k = 0; k < box.dim(); ++k) {
        for (int side = 0; side < 2; ++side) {
            const double at = side ? box.axes[k].hi : box.axes[k].lo;
            const double sign = side ? 1.0 : -1.0;
            const FaceFlux coarse = face_flux(field, box, k, at, sign, n);
            const FaceFlux fine = face_flux(field, box, k, at, sign, 2 * n);
            net += fine.value;
            scale += std::abs(fine.value);
            // The coarse/fine gap bounds the fine error for both the O(h^2)
            // smooth part and the O(h) cells cut by a discontinuity line.
            tol += 4 * std::abs(fine.value - coarse.value);
            evals += static_cast<std::uint64_t>(std::pow(n, box.dim() - 1) * (1 + std::pow(2, box.dim() - 1)));
        }
    }
    tol += 1e-12 * (1 + scale);
    std::ostringstream notes;
    notes << "midpoint rule, " << n << " and " << 2 * n << " cells per edge";
    return make_report(name, std::abs(net), tol, evals, 0, notes.str());
}

CheckReport deviation_sweep(const std::string& name,
                            const std::function<std::optional<double>(Rng&)>& trial,
                            std::uint64_t n, std::uint64_t seed, double tolerance) {
    struct Acc {
        double worst = 0;
        std::uint64_t skipped = 0;
        bool nan = false;
    };
    const auto shards = run_shards<Acc>(n, seed, [&](Rng& rng, std::uint64_t count, Acc& acc) {
        for (std::uint64_t i = 0; i < count; ++i) {
            const auto d = trial(rng);
            if (!d) {
                ++acc.skipped;
                continue;
            }
            if (std::isnan(*d)) acc.nan = true;
            acc.worst = std::max(acc.worst, *d);
        }
    });
    double worst = 0;
    std::uint64_t skipped = 0;
    bool nan = false;
    for (const auto& a : shards) {
        worst = std::max(worst, a.worst);
        skipped += a.skipped;
        nan = nan || a.nan;
    }
    if (nan) worst = std::numeric_limits<double>::quiet_NaN();
    std::ostringstream notes;
    notes << skipped << " of " << n << " trials skipped by guard";
    if (skipped == n && n > 0) {
        notes << "; nothing checked";
        worst = std::numeric_limits<double>::infinity();
    }
    return make_report(name, worst, tolerance, n, seed, notes.str());
}

CheckReport ode_residual(const std::string& name, std::size_t dim, const TimeMap& flow,
                         const TimeMap& field,
                         const std::function<TrajectorySample(Rng&)>& sampler, std::uint64_t n,
                         std::uint64_t seed, double h, double jump, double tolerance) {
    struct Acc {
        double worst = 0;
        std::uint64_t used = 0;
        bool nan = false;
    };
    auto sup = [dim](const Coords& a, const Coords& b) {
        double m = 0;
        for (std::size_t k = 0; k < dim; ++k) m = std::max(m, std::abs(a[k] - b[k]));
        return m;
    };
    const auto shards = run_shards<Acc>(n, seed, [&](Rng& rng, std::uint64_t count, Acc& acc) {
        for (std::uint64_t i = 0; i < count; ++i) {
            const TrajectorySample s = sampler(rng);
            const Coords p0 = flow(s.t, s.x);
            const Coords pm = flow(s.t - h, s.x);
            const Coords pp = flow(s.t + h, s.x);
            const Coords f0 = field(s.t, p0);
            if (sup(field(s.t - h, pm), f0) > jump || sup(field(s.t + h, pp), f0) > jump) continue;
            Coords cd{0, 0, 0};
            for (std::size_t k = 0; k < dim; ++k) cd[k] = (pp[k] - pm[k]) / (2 * h);
            const double r = sup(cd, f0);
            if (std::isnan(r)) acc.nan = true;
            acc.worst = std::max(acc.worst, r);
            ++acc.used;
        }
    });
    double worst = 0;
    std::uint64_t used = 0;
    bool nan = false;
    for (const auto& a : shards) {
        worst = std::max(worst, a.worst);
        used += a.used;
        nan = nan || a.nan;
    }
    std::ostringstream notes;
    notes << used << " of " << n << " samples used, " << n - used << " skipped at piece seams";
    if (nan) worst = std::numeric_limits<double>::quiet_NaN();
    if (4 * used < n) {
        notes << "; too few usable samples";
        worst = std::numeric_limits<double>::infinity();
    }
    return make_report(name, worst, tolerance, n, seed, notes.str());
}

double box_count_area(const std::vector<std::array<double, 2>>& pts, double h) {
    if (pts.size() < 1000) throw std::invalid_argument("box_count_area needs at least 1000 points");
    if (!(h > 0)) throw std::invalid_argument("box_count_area needs h > 0");
    std::unordered_set<std::uint64_t> cells;
    cells.reserve(pts.size());
    for (const auto& p : pts) {
        const auto i = static_cast<std::int64_t>(std::floor(p[0] / h));
        const auto j = static_cast<std::int64_t>(std::floor(p[1] / h));
        cells.insert((static_cast<std::uint64_t>(i) << 32) ^ static_cast<std::uint32_t>(j));
    }
    return static_cast<double>(cells.size()) * h * h;
}

}  // namespace flowlab::verify
