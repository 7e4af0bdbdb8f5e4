#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "flowlab/donut3.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "flowlab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = flowlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

std::vector<double> row_numbers(const std::string& row) {
    std::vector<double> v;
    std::istringstream in(row);
    for (std::string cell; std::getline(in, cell, ',');) {
        try {
            v.push_back(std::stod(cell));
        } catch (const std::exception&) {
        }
    }
    return v;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

TEST_CASE("verify planar passes and reports json") {
    const auto r = run({"verify", "planar", "--seed", "7", "--samples", "20000"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["suite"] == "planar");
    CHECK(j["seed"] == 7);
    CHECK(j["params"]["samples"] == 20000);
    CHECK(j["params"]["depth"] == 30);
    REQUIRE(j["checks"].size() > 5);
    bool quarter = false;
    for (const auto& c : j["checks"]) {
        CHECK(c["passed"] == true);
        quarter = quarter || c["name"].get<std::string>().find("quarter") != std::string::npos;
        CHECK(c.contains("statistic"));
        CHECK(c.contains("tolerance"));
        CHECK(c.contains("samples"));
        CHECK(c.contains("notes"));
    }
    CHECK(quarter);
}

TEST_CASE("identical runs give byte-identical reports") {
    const auto a = run({"verify", "nonauto2", "--seed", "3", "--samples", "5000"});
    const auto b = run({"verify", "nonauto2", "--seed", "3", "--samples", "5000"});
    CHECK(a.out == b.out);
    CHECK(a.code == b.code);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({"verify", "bogus"}).code == 2);
    CHECK(run({"verify"}).code == 2);
    CHECK(run({"trace", "--field", "nope", "--x", "0.3,0.4,1"}).code == 2);
    CHECK(run({"trace", "--field", "donut3", "--x", "0.3,0.4"}).code == 2);
    CHECK(run({"gamma", "--x2", "0.2"}).code == 2);
    CHECK(run({"gamma", "--x2", "0.01"}).code == 2);
    CHECK(run({}).code == 2);
}

TEST_CASE("gamma of 2/5") {
    const auto r = run({"gamma", "--x2", "0.(0110)", "--depth", "20"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["point"][0].get<double>() == doctest::Approx(1.0 / 3).epsilon(1e-9));
    CHECK(j["point"][1].get<double>() == doctest::Approx(2.0 / 3).epsilon(1e-9));
    CHECK(j["gamma1"] == "0.(rep=01)");
    CHECK(j["gamma2"] == "0.(rep=10)");
    CHECK(j["degenerate"] == false);
    CHECK(j["oracle_distance"].get<double>() <= j["oracle_bound"].get<double>());
}

TEST_CASE("trace closes the donut orbit after one period") {
    const double T = flowlab::donut3::kPeriod;
    const auto r = run({"trace", "--field", "donut3", "--x", "0.3,0.4,1", "--t0", "0", "--t1", fmt(T), "--dt", "0.01"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() > 1000);
    CHECK(rows.front() == "t,x1,x2,x3,region");
    const auto first = row_numbers(rows[1]);
    const auto last = row_numbers(rows.back());
    REQUIRE(first.size() == 4);
    REQUIRE(last.size() == 4);
    CHECK(last[0] == doctest::Approx(T));
    for (int k = 1; k < 4; ++k) CHECK(std::abs(last[k] - first[k]) <= 1e-6);
}

TEST_CASE("trace over 16 time units ends at the orbit point of t = 16 - T") {
    const double T = flowlab::donut3::kPeriod;
    const auto a = run({"trace", "--field", "donut3", "--x", "0.3,0.4,1", "--t0", "0", "--t1", "16", "--dt", "0.01"});
    const auto b = run({"trace", "--field", "donut3", "--x", "0.3,0.4,1", "--t0", "0", "--t1", fmt(16 - T), "--dt", "0.01"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    const auto la = row_numbers(lines(a.out).back()), lb = row_numbers(lines(b.out).back());
    for (int k = 1; k < 4; ++k) CHECK(std::abs(la[k] - lb[k]) <= 1e-6);
}

TEST_CASE("trace csv headers") {
    const auto r = run({"trace", "--field", "nonauto2", "--x", "0.3,0.6", "--alpha", "0", "--t1", "0.5", "--dt", "0.1"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    CHECK(rows.front() == "t,x1,x2,region");
    CHECK(rows.size() == 7);
}

TEST_CASE("field sampler") {
    const auto r = run({"field", "--name", "b", "--grid", "4", "--t", "0.1"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    CHECK(rows.size() == 17);
    CHECK(rows.front().rfind("t,x1,x2", 0) == 0);
}

TEST_CASE("reports are written atomically to the requested path") {
    const auto dir = std::filesystem::temp_directory_path() / "flowlab_cli_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "report.json";
    std::filesystem::remove(path);
    const auto r = run({"verify", "planar", "--samples", "2000", "--json", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    const auto text = read_file(path);
    CHECK(nlohmann::json::parse(text)["suite"] == "planar");
    for (const auto& e : std::filesystem::directory_iterator(dir))
        CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
    std::filesystem::remove_all(dir);
}
