#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "flowlab/depauw.hpp"
#include "flowlab/digits.hpp"
#include "flowlab/donut3.hpp"
#include "flowlab/nonauto2.hpp"
#include "flowlab/planar_rot.hpp"
#include "flowlab/suites.hpp"

namespace flowlab::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Write to a sibling temp file, then rename over the target.
void write_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
        f << text;
        if (!f.flush()) throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-")
        out << text;
    else
        write_atomic(path, text);
}

std::vector<double> parse_point(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("bad coordinate '" + item + "' in --x");
        }
    }
    return v;
}

struct Options {
    std::string suite;
    std::uint64_t seed = 42;
    std::uint64_t samples = 1000000;
    int depth = kDefaultDepth;
    int dim = 0;
    std::string out_path;

    std::string field = "donut3";
    std::string flow = "phi";
    std::string x;
    double t0 = 0, t1 = 1, dt = 0.01, alpha = 0;

    std::string name = "b";
    int grid = 16;
    double t = 0.1, x3 = 0.5;

    std::string x2;
    int base = 2;
};

int cmd_verify(const Options& o, std::ostream& out) {
    const auto& names = suites::suite_names();
    if (o.suite != "all" && std::find(names.begin(), names.end(), o.suite) == names.end())
        throw UsageError("unknown suite '" + o.suite + "'");
    suites::SuiteConfig cfg{o.seed, o.samples, o.depth};
    verify::SuiteReport rep = o.suite == "transport" ? suites::transport_suite(cfg, o.dim)
                                                     : suites::run_suite(o.suite, cfg);
    emit(o.out_path, verify::to_json(rep).dump(2) + "\n", out);
    return rep.all_passed() ? 0 : 1;
}

int cmd_trace(const Options& o, std::ostream& out) {
    const std::vector<double> x = parse_point(o.x);
    if (!(o.dt > 0)) throw UsageError("--dt must be positive");
    if (!(o.t1 >= o.t0)) throw UsageError("--t1 must not precede --t0");
    std::function<std::string(double)> row;
    std::string header;
    if (o.field == "donut3") {
        if (x.size() != 3) throw UsageError("donut3 needs --x x1,x2,x3");
        if (o.flow != "phi" && o.flow != "psi") throw UsageError("--flow must be phi or psi");
        const Point3 p{x[0], x[1], x[2]};
        header = "t,x1,x2,x3,region";
        row = [&, p](double t) {
            const Point3 q = o.flow == "phi" ? donut3::flow_phi(t, p, o.depth) : donut3::flow_psi(t, p, o.depth);
            return fmt(q.x1) + "," + fmt(q.x2) + "," + fmt(q.x3) + "," +
                   std::string(donut3::region_name(donut3::classify_region(q)));
        };
    } else if (o.field == "nonauto2" || o.field == "c" || o.field == "d" || o.field == "b") {
        if (x.size() != 2) throw UsageError(o.field + " needs --x x1,x2");
        if (o.field == "nonauto2" && o.alpha == 1.0) throw UsageError("--alpha 1 is not a valid start time");
        const Point2 p{x[0], x[1]};
        header = "t,x1,x2,region";
        row = [&, p](double t) {
            Point2 q;
            if (o.field == "nonauto2")
                q = o.flow == "psi" ? nonauto2::flow_psi2(t, o.alpha, p, o.depth)
                                    : nonauto2::flow_phi2(t, o.alpha, p, o.depth);
            else if (o.field == "c")
                q = planar::square_rot_flow(t, p);
            else if (o.field == "d")
                q = planar::rect_rot_flow(t, p);
            else
                q = depauw::chi_flow<double>(o.alpha, t, p, o.depth).point;
            const bool inside = o.field == "c"   ? std::max(std::abs(q.x1), std::abs(q.x2)) < 0.5
                                : o.field == "d" ? std::abs(q.x1) < 0.5 && std::abs(q.x2) < 0.25
                                                 : q.x1 >= 0 && q.x1 <= 1 && q.x2 >= 0 && q.x2 <= 1;
            return fmt(q.x1) + "," + fmt(q.x2) + "," + (inside ? "support" : "outside");
        };
    } else {
        throw UsageError("unknown field '" + o.field + "'");
    }
    std::ostringstream csv;
    csv << header << "\n";
    const auto steps = static_cast<long long>(std::floor((o.t1 - o.t0) / o.dt * (1 + 1e-12)));
    for (long long k = 0; k <= steps; ++k) {
        const double t = o.t0 + static_cast<double>(k) * o.dt;
        if (t >= o.t1) break;
        csv << fmt(t) << "," << row(t) << "\n";
    }
    csv << fmt(o.t1) << "," << row(o.t1) << "\n";
    emit(o.out_path, csv.str(), out);
    return 0;
}

int cmd_field(const Options& o, std::ostream& out) {
    if (o.grid < 1) throw UsageError("--grid must be positive");
    std::ostringstream csv;
    const int n = o.grid;
    auto mid = [n](int i, double lo, double hi) { return lo + (hi - lo) * (i + 0.5) / n; };
    if (o.name == "a" || o.name == "a_tilde") {
        csv << "x1,x2,x3,v1,v2,v3,region\n";
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Point3 p{mid(i, 0, 1), mid(j, -3, 1), o.x3};
                const Vec3 v = o.name == "a" ? donut3::field_a(p) : donut3::field_a_tilde(p);
                csv << fmt(p.x1) << "," << fmt(p.x2) << "," << fmt(p.x3) << "," << fmt(v.x1) << ","
                    << fmt(v.x2) << "," << fmt(v.x3) << ","
                    << donut3::region_name(donut3::classify_region(p)) << "\n";
            }
    } else if (o.name == "b" || o.name == "a2" || o.name == "a2_tilde") {
        if (o.name == "b" && !(o.t < 1)) throw UsageError("field b needs --t < 1");
        csv << "t,x1,x2,v1,v2\n";
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Point2 p{mid(i, 0, 1), mid(j, 0, 1)};
                const Vec2 v = o.name == "b"    ? depauw::field_b<double>(o.t, p)
                               : o.name == "a2" ? nonauto2::field_a2(o.t, p).value
                                                : nonauto2::field_a2_tilde(o.t, p);
                csv << fmt(o.t) << "," << fmt(p.x1) << "," << fmt(p.x2) << "," << fmt(v.x1) << ","
                    << fmt(v.x2) << "\n";
            }
    } else if (o.name == "c" || o.name == "d") {
        csv << "x1,x2,v1,v2\n";
        const double h2 = o.name == "c" ? 0.5 : 0.25;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Point2 p{mid(i, -0.5, 0.5), mid(j, -h2, h2)};
                const Vec2 v = o.name == "c" ? planar::field_c(p) : planar::field_d(p);
                csv << fmt(p.x1) << "," << fmt(p.x2) << "," << fmt(v.x1) << "," << fmt(v.x2) << "\n";
            }
    } else {
        throw UsageError("unknown field name '" + o.name + "'");
    }
    emit(o.out_path, csv.str(), out);
    return 0;
}

int cmd_gamma(const Options& o, std::ostream& out) {
    if (o.base != 2 && o.base != 4) throw UsageError("--base must be 2 or 4");
    digits::DigitStream x2;
    try {
        x2 = digits::as_base2(digits::DigitStream::parse(o.x2, o.base));
    } catch (const digits::DigitError& e) {
        throw UsageError(e.what());
    }
    const auto g = depauw::gamma(x2, o.depth);
    // Flow oracle: one fiber point pushed to t_depth.
    const Vec2L q = depauw::chi_flow<long double>(0.0L, depauw::stage_time(o.depth),
                                                  {0.5L, x2.representative()}, o.depth)
                        .point;
    const long double dist = std::hypot(q.x1 - g.point.x1, q.x2 - g.point.x2);
    nlohmann::json j{{"x2", x2.to_string()},
                     {"depth", o.depth},
                     {"gamma1", g.gamma1.to_string()},
                     {"gamma2", g.gamma2.to_string()},
                     {"point", {static_cast<double>(g.point.x1), static_cast<double>(g.point.x2)}},
                     {"degenerate", g.degenerate},
                     {"error_bound", static_cast<double>(g.error_bound)},
                     {"oracle_point", {static_cast<double>(q.x1), static_cast<double>(q.x2)}},
                     {"oracle_distance", static_cast<double>(dist)},
                     {"oracle_bound", std::sqrt(2.0) * std::ldexp(1.0, -o.depth + 1)}};
    emit(o.out_path, j.dump(2) + "\n", out);
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"flowlab: flows of non-smooth divergence-free fields", "flowlab"};
    app.require_subcommand(1);
    Options o;

    auto* verify = app.add_subcommand("verify", "Run a verification suite and emit a JSON report");
    verify->add_option("suite", o.suite, "all|planar|depauw|donut3|nonauto2|transport|nonexistence")->required();
    verify->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    verify->add_option("--samples", o.samples, "Monte-Carlo sample count")->capture_default_str()->check(CLI::PositiveNumber);
    verify->add_option("--depth", o.depth, "Stage truncation depth")->capture_default_str()->check(CLI::Range(1, kMaxDepth));
    verify->add_option("--dim", o.dim, "transport only: 2, 3 or 0 for both")->check(CLI::IsMember({0, 2, 3}));
    verify->add_option("--json", o.out_path, "Report path (default stdout)");

    auto* trace = app.add_subcommand("trace", "Trace one trajectory to CSV");
    trace->add_option("--field", o.field, "donut3|nonauto2|b|c|d")->capture_default_str();
    trace->add_option("--flow", o.flow, "phi|psi")->capture_default_str();
    trace->add_option("--x", o.x, "Start point, comma separated")->required();
    trace->add_option("--t0", o.t0)->capture_default_str();
    trace->add_option("--t1", o.t1)->capture_default_str();
    trace->add_option("--dt", o.dt)->capture_default_str();
    trace->add_option("--alpha", o.alpha, "Start time (nonauto2) or shift (b)")->capture_default_str();
    trace->add_option("--depth", o.depth)->capture_default_str()->check(CLI::Range(1, kMaxDepth));
    trace->add_option("--csv", o.out_path, "Output path (default stdout)");

    auto* field = app.add_subcommand("field", "Sample a field on a grid to CSV");
    field->add_option("--name", o.name, "a|a_tilde|b|a2|a2_tilde|c|d")->capture_default_str();
    field->add_option("--grid", o.grid)->capture_default_str();
    field->add_option("--t", o.t)->capture_default_str();
    field->add_option("--x3", o.x3, "Slice height for a and a_tilde")->capture_default_str();
    field->add_option("--csv", o.out_path, "Output path (default stdout)");

    auto* gamma = app.add_subcommand("gamma", "Collapsing map of a fiber height");
    gamma->add_option("--x2", o.x2, "Digit string, e.g. 0.(0110) or 0.0101...")->required();
    gamma->add_option("--depth", o.depth)->capture_default_str()->check(CLI::Range(1, kMaxDepth));
    gamma->add_option("--base", o.base)->capture_default_str();
    gamma->add_option("--json", o.out_path, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "flowlab: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*verify) return cmd_verify(o, out);
        if (*trace) return cmd_trace(o, out);
        if (*field) return cmd_field(o, out);
        if (*gamma) return cmd_gamma(o, out);
    } catch (const UsageError& e) {
        err << "flowlab: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "flowlab: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "flowlab: error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace flowlab::cli
