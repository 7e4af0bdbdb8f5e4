#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <tuple>

#include "flowlab/depauw.hpp"
#include "flowlab/digits.hpp"
#include "flowlab/donut3.hpp"
#include "flowlab/nonauto2.hpp"
#include "flowlab/planar_rot.hpp"
#include "flowlab/suites.hpp"
#include "flowlab/transport.hpp"
#include "flowlab/verify.hpp"

namespace py = pybind11;
using namespace flowlab;

namespace {

using P2 = std::array<double, 2>;
using P3 = std::array<double, 3>;

Point2 pt(const P2& p) { return {p[0], p[1]}; }
Point3 pt(const P3& p) { return {p[0], p[1], p[2]}; }
P2 tup(Point2 p) { return {p.x1, p.x2}; }
P3 tup(Point3 p) { return {p.x1, p.x2, p.x3}; }

digits::DigitStream stream(const std::string& s, int base) {
    return digits::as_base2(digits::DigitStream::parse(s, base));
}

}  // namespace

PYBIND11_MODULE(_flowlab, m) {
    m.doc() = "Measure-preserving flows of divergence-free fields and their numerical checks";
    m.attr("PERIOD") = donut3::kPeriod;
    m.attr("DEFAULT_DEPTH") = kDefaultDepth;

    py::register_exception<digits::DigitError>(m, "DigitError", PyExc_ValueError);

    // digits
    m.def("in_Z", [](const std::string& s, int base) { return digits::in_Z(digits::DigitStream::parse(s, base)); },
          py::arg("digits"), py::arg("base") = 2, "Whether the digit string is an endpoint of a dyadic interval");
    m.def("normalize_digits", [](const std::string& s, int base) { return stream(s, base).normalized().to_string(); },
          py::arg("digits"), py::arg("base") = 2);
    m.def("digits_value", [](const std::string& s, int base) {
        return static_cast<double>(digits::DigitStream::parse(s, base).representative());
    }, py::arg("digits"), py::arg("base") = 2);

    // planar rotations
    m.def("field_c", [](const P2& p) { return tup(planar::field_c(pt(p))); });
    m.def("field_d", [](const P2& p) { return tup(planar::field_d(pt(p))); });
    m.def("square_rot_flow", [](double t, const P2& p) { return tup(planar::square_rot_flow(t, pt(p))); });
    m.def("rect_rot_flow", [](double t, const P2& p) { return tup(planar::rect_rot_flow(t, pt(p))); });

    // staged field b
    m.def("stage_time", [](int i) { return static_cast<double>(depauw::stage_time(i)); });
    m.def("field_b", [](double t, const P2& p) { return tup(depauw::field_b<double>(t, pt(p))); });
    m.def("chi_flow", [](double z, double t, const P2& p, int depth) {
        const auto r = depauw::chi_flow<double>(z, t, pt(p), depth);
        return std::make_tuple(tup(r.point), r.truncated);
    }, py::arg("z"), py::arg("t"), py::arg("p"), py::arg("depth") = kDefaultDepth,
          "Flow of b from absolute time z to z + t; returns (point, truncated)");
    m.def("chi_half_closed_form", [](const P2& p) { return tup(depauw::chi_half_closed_form(pt(p))); });
    m.def("gamma", [](const std::string& x2, int depth, int base) {
        const auto g = depauw::gamma(stream(x2, base), depth);
        py::dict d;
        d["point"] = P2{static_cast<double>(g.point.x1), static_cast<double>(g.point.x2)};
        d["gamma1"] = g.gamma1.to_string();
        d["gamma2"] = g.gamma2.to_string();
        d["degenerate"] = g.degenerate;
        d["error_bound"] = static_cast<double>(g.error_bound);
        return d;
    }, py::arg("x2"), py::arg("depth") = kDefaultDepth, py::arg("base") = 2);
    m.def("collapse_diameter", [](const std::string& x2, int depth, int samples) {
        return static_cast<double>(depauw::collapse_diameter(stream(x2, 2), depth, samples));
    }, py::arg("x2"), py::arg("depth"), py::arg("fiber_samples") = 16);

    // 3D autonomous field
    m.def("classify_region", [](const P3& x) { return std::string(donut3::region_name(donut3::classify_region(pt(x)))); });
    m.def("field_a", [](const P3& x) { return tup(donut3::field_a(pt(x))); });
    m.def("field_a_tilde", [](const P3& x) { return tup(donut3::field_a_tilde(pt(x))); });
    m.def("stop_times", [](const P3& x, int depth) {
        const auto s = donut3::stop_times(pt(x), depth);
        return std::make_tuple(s.t_minus, s.t_plus);
    }, py::arg("x"), py::arg("depth") = kDefaultDepth);
    m.def("varphi", [](double t, const P3& x, int depth) { return tup(donut3::varphi(t, pt(x), depth)); },
          py::arg("t"), py::arg("x"), py::arg("depth") = kDefaultDepth);
    m.def("flow_phi", [](double t, const P3& x, int depth) { return tup(donut3::flow_phi(t, pt(x), depth)); },
          py::arg("t"), py::arg("x"), py::arg("depth") = kDefaultDepth);
    m.def("flow_psi", [](double t, const P3& x, int depth, bool in_w) {
        return tup(donut3::flow_psi(t, pt(x), depth, in_w));
    }, py::arg("t"), py::arg("x"), py::arg("depth") = kDefaultDepth, py::arg("orbit_in_W") = false);
    m.def("involution_h", [](const P3& x, int depth) { return tup(donut3::involution_h(pt(x), depth)); },
          py::arg("x"), py::arg("depth") = kDefaultDepth);
    m.def("is_exceptional_time", [](const P3& x, double t, double eps) {
        return donut3::is_exceptional_time(pt(x), t, eps);
    }, py::arg("x"), py::arg("t"), py::arg("eps") = 1e-6);
    m.def("forced_flow_tilde", [](double t, const P3& x, double y1, int depth) {
        return tup(donut3::forced_flow_tilde(t, pt(x), y1, depth));
    }, py::arg("t"), py::arg("x"), py::arg("y1") = 0.5, py::arg("depth") = kDefaultDepth);

    // 2D non-autonomous field
    m.def("field_a2", [](double t, const P2& p) {
        const auto s = nonauto2::field_a2(t, pt(p));
        return std::make_tuple(tup(s.value), s.undefined_slice);
    });
    m.def("field_a2_tilde", [](double t, const P2& p) { return tup(nonauto2::field_a2_tilde(t, pt(p))); });
    m.def("flow_phi2", [](double t, double alpha, const P2& p, int depth) {
        return tup(nonauto2::flow_phi2(t, alpha, pt(p), depth));
    }, py::arg("t"), py::arg("alpha"), py::arg("p"), py::arg("depth") = kDefaultDepth);
    m.def("flow_psi2", [](double t, double alpha, const P2& p, int depth, bool in_z) {
        return tup(nonauto2::flow_psi2(t, alpha, pt(p), depth, in_z));
    }, py::arg("t"), py::arg("alpha"), py::arg("p"), py::arg("depth") = kDefaultDepth,
          py::arg("preimage_height_in_Z") = false);

    // transport
    m.def("solution_value", [](const std::string& flow, int dim, double t, const P3& x) {
        const auto f = flow == "psi" ? transport::Flow::Psi : transport::Flow::Phi;
        if (flow != "phi" && flow != "psi") throw py::value_error("flow must be 'phi' or 'psi'");
        if (dim != 2 && dim != 3) throw py::value_error("dim must be 2 or 3");
        const auto sol = dim == 3 ? transport::solution_3d(f) : transport::solution_2d(f);
        return transport::eval_solution(sol, t, {x[0], x[1], x[2]});
    }, py::arg("flow"), py::arg("dim"), py::arg("t"), py::arg("x"),
          "u0 transported backward along phi or psi; 2D points ignore the third coordinate");

    // verification
    m.def("box_count_area", [](const std::vector<P2>& pts, double h) { return verify::box_count_area(pts, h); });
    m.def("suite_names", &suites::suite_names);
    m.def("_run_suite_json", [](const std::string& name, std::uint64_t seed, std::uint64_t samples, int depth) {
        suites::SuiteConfig cfg;
        cfg.seed = seed;
        cfg.samples = samples;
        cfg.depth = depth;
        verify::SuiteReport r;
        {
            py::gil_scoped_release release;
            r = suites::run_suite(name, cfg);
        }
        return verify::to_json(r).dump();
    });
}
