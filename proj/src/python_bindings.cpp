#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "json.hpp"

#include "metricdeform/analysis.hpp"
#include "metricdeform/besov.hpp"
#include "metricdeform/deform.hpp"
#include "metricdeform/generators.hpp"
#include "metricdeform/json_io.hpp"
#include "metricdeform/verify.hpp"

namespace py = pybind11;
namespace md = metricdeform;
using nlohmann::json;

namespace {

md::DeformedSpace transform_by_name(const md::FiniteMetricMeasureSpace& space,
                                    const std::string& kind, double sigma, unsigned threads) {
    md::TransformOptions opts;
    opts.threads = threads;
    if (kind == "sphericalize") return md::sphericalize(space, sigma, opts);
    if (kind == "flatten") return md::flatten(space, sigma, opts);
    if (kind == "invert") return md::invert(space, sigma, opts);
    throw std::invalid_argument("unknown transform '" + kind + "'");
}

md::GeneratorSpec spec_from_json_text(const std::string& text) {
    return md::generator_spec_from_json(json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_metricdeform, m) {
    m.doc() = "Deformations of finite metric measure spaces";

    py::class_<md::FiniteMetricMeasureSpace>(m, "Space")
        .def_static(
            "from_json",
            [](const std::string& text) { return md::space_from_json(json::parse(text)); },
            py::arg("text"))
        .def_static(
            "build",
            [](std::vector<std::string> ids, std::vector<double> distances,
               std::vector<double> masses, std::size_t base, bool unbounded_truncation) {
                return md::build_space(std::move(ids), std::move(distances), std::move(masses),
                                       base, unbounded_truncation);
            },
            py::arg("ids"), py::arg("distances"), py::arg("masses"), py::arg("base") = 0,
            py::arg("unbounded_truncation") = false)
        .def("__len__", &md::FiniteMetricMeasureSpace::size)
        .def("id_of", &md::FiniteMetricMeasureSpace::id_of)
        .def("distance", &md::FiniteMetricMeasureSpace::distance)
        .def("mass", &md::FiniteMetricMeasureSpace::mass)
        .def("radius_of", &md::FiniteMetricMeasureSpace::radius_of)
        .def_property_readonly("base", &md::FiniteMetricMeasureSpace::base)
        .def_property_readonly("max_radius", &md::FiniteMetricMeasureSpace::max_radius)
        .def_property_readonly("total_mass", &md::FiniteMetricMeasureSpace::total_mass)
        .def_property_readonly("unbounded_truncation",
                               &md::FiniteMetricMeasureSpace::unbounded_truncation)
        .def("ball_mass", &md::FiniteMetricMeasureSpace::ball_mass, py::arg("center"),
             py::arg("radius"))
        .def("to_json", [](const md::FiniteMetricMeasureSpace& s) {
            return md::space_to_json(s).dump(2);
        });

    py::class_<md::DeformedSpace>(m, "DeformedSpace")
        .def("__len__", &md::DeformedSpace::size)
        .def("dhat", &md::DeformedSpace::dhat_at)
        .def("id_of", &md::DeformedSpace::id_of)
        .def("source_radius", &md::DeformedSpace::source_radius)
        .def_readonly("retained", &md::DeformedSpace::retained)
        .def_readonly("nuhat", &md::DeformedSpace::nuhat)
        .def_readonly("rho", &md::DeformedSpace::rho)
        .def_readonly("sigma", &md::DeformedSpace::sigma)
        .def_readonly("kappa", &md::DeformedSpace::kappa)
        .def_readonly("kappa_finite", &md::DeformedSpace::kappa_finite)
        .def("to_json", [](const md::DeformedSpace& d) { return md::deformed_to_json(d).dump(2); });

    m.def(
        "generate",
        [](const std::string& spec_text) { return md::generate(spec_from_json_text(spec_text)); },
        py::arg("spec_json"), "Build a test-family space from a generator spec JSON string");
    m.def("transform", &transform_by_name, py::arg("space"), py::arg("kind"),
          py::arg("sigma") = 1.0, py::arg("threads") = 0u);
    m.def(
        "besov_energy",
        [](const md::FiniteMetricMeasureSpace& space, const std::vector<double>& u, double p,
           double theta) {
            const md::BesovEnergy e = md::besov_energy(space, u, md::BesovParams{p, theta});
            return py::make_tuple(e.power, e.root);
        },
        py::arg("space"), py::arg("u"), py::arg("p") = 2.0, py::arg("theta") = 0.5);
    m.def(
        "besov_energy_deformed",
        [](const md::DeformedSpace& d, const std::vector<double>& u, double p, double theta) {
            const md::BesovEnergy e = md::besov_energy(d, u, md::BesovParams{p, theta});
            return py::make_tuple(e.power, e.root);
        },
        py::arg("deformed"), py::arg("u"), py::arg("p") = 2.0, py::arg("theta") = 0.5);
    m.def(
        "standard_test_fields",
        [](const md::FiniteMetricMeasureSpace& space, std::uint64_t seed) {
            return md::standard_test_fields(space, seed);
        },
        py::arg("space"), py::arg("seed") = 0u);
    m.def(
        "verify_all_json",
        [](const md::FiniteMetricMeasureSpace& space, const std::string& kind, double sigma,
           double p, double theta, bool allow_sigma_mismatch, std::uint64_t seed,
           unsigned threads) {
            const md::DeformedSpace d = transform_by_name(space, kind, sigma, threads);
            json arr = json::array();
            for (const auto& r : md::check_sandwich_and_bounds(space, d))
                arr.push_back(md::report_to_json(r));
            const auto fields = md::standard_test_fields(space, seed);
            for (const auto& r : md::check_energy_comparability(space, d, fields,
                                                                md::BesovParams{p, theta},
                                                                allow_sigma_mismatch))
                arr.push_back(md::report_to_json(r));
            arr.push_back(md::report_to_json(md::check_doubling_preservation(d)));
            for (const auto& r : md::check_ball_volume_regimes(d))
                arr.push_back(md::report_to_json(r));
            arr.push_back(md::report_to_json(md::check_perfectness_preservation(d)));
            return arr.dump(2);
        },
        py::arg("space"), py::arg("kind"), py::arg("sigma") = 1.0, py::arg("p") = 2.0,
        py::arg("theta") = 0.5, py::arg("allow_sigma_mismatch") = false, py::arg("seed") = 0u,
        py::arg("threads") = 0u);
    m.def(
        "duality_json",
        [](const md::FiniteMetricMeasureSpace& space, double sigma, const std::string& direction,
           unsigned threads) {
            const md::DualityDirection dir =
                direction == "sphere-then-flatten" ? md::DualityDirection::SphereThenFlatten
                : direction == "flatten-then-sphere"
                    ? md::DualityDirection::FlattenThenSphere
                    : throw std::invalid_argument("unknown direction '" + direction + "'");
            json arr = json::array();
            for (const auto& r : md::duality_report(space, sigma, dir, threads))
                arr.push_back(md::report_to_json(r));
            return arr.dump(2);
        },
        py::arg("space"), py::arg("sigma"), py::arg("direction"), py::arg("threads") = 0u);
}
