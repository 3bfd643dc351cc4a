#include "afc/config.hpp"
#include "afc/presets.hpp"
#include "afc/runner.hpp"
#include "afc/scenario.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace afc;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

py::dict validity_dict(py::dict d, const Validity& v) {
    d["valid"] = v.valid;
    d["note"] = v.note;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Atomic frequency comb quantum memory simulator (C++ core)";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<ToothShape>(m, "ToothShape")
        .value("SQUARE", ToothShape::Square)
        .value("GAUSSIAN", ToothShape::Gaussian);

    py::class_<CombParams>(m, "CombParams")
        .def(py::init([](double depth, double spacing_hz, double finesse, double bandwidth_hz, ToothShape shape,
                         double background) {
                 CombParams c{depth, spacing_hz, finesse, shape, bandwidth_hz, background};
                 c.validate();
                 return c;
             }),
             py::arg("depth"), py::arg("spacing_hz"), py::arg("finesse"), py::arg("bandwidth_hz"),
             py::arg("shape") = ToothShape::Square, py::arg("background") = 0.0)
        .def_readwrite("depth", &CombParams::peak_depth)
        .def_readwrite("spacing_hz", &CombParams::spacing_hz)
        .def_readwrite("finesse", &CombParams::finesse)
        .def_readwrite("shape", &CombParams::shape)
        .def_readwrite("bandwidth_hz", &CombParams::bandwidth_hz)
        .def_readwrite("background", &CombParams::background_depth)
        .def_property_readonly("average_depth", &CombParams::average_depth)
        .def_property_readonly("delay_s", &CombParams::echo_delay_s);

    py::class_<CavityParams>(m, "CavityParams")
        .def(py::init([](double r1, double r2, double epsilon, double fsr_hz, double detuning_hz) {
                 CavityParams c{r1, r2, epsilon, fsr_hz, detuning_hz};
                 c.validate();
                 return c;
             }),
             py::arg("r1") = 0.73, py::arg("r2") = 1.0, py::arg("epsilon") = 0.0, py::arg("fsr_hz") = 500e6,
             py::arg("detuning_hz") = 0.0)
        .def_readwrite("r1", &CavityParams::r1)
        .def_readwrite("r2", &CavityParams::r2)
        .def_readwrite("epsilon", &CavityParams::epsilon)
        .def_readwrite("fsr_hz", &CavityParams::fsr_hz)
        .def_readwrite("detuning_hz", &CavityParams::detuning_hz)
        .def_property_readonly("empty_finesse", &CavityParams::empty_finesse)
        .def_property_readonly("empty_linewidth_hz", &CavityParams::empty_linewidth_hz);

    py::class_<SechPulseParams>(m, "SechPulseParams")
        .def(py::init([](double rabi_max_hz, double duration_s, double chirp_hz, double truncation_s) {
                 SechPulseParams p{rabi_max_hz, duration_s, chirp_hz, truncation_s, 0.0};
                 p.validate();
                 return p;
             }),
             py::arg("rabi_max_hz") = 250e3, py::arg("duration_s") = 5e-6, py::arg("chirp_hz") = 1.2e6,
             py::arg("truncation_s") = std::numeric_limits<double>::infinity())
        .def_readwrite("rabi_max_hz", &SechPulseParams::rabi_max_hz)
        .def_readwrite("duration_s", &SechPulseParams::duration_s)
        .def_readwrite("chirp_hz", &SechPulseParams::chirp_hz)
        .def_readwrite("truncation_s", &SechPulseParams::truncation_s);

    m.def("eta_deph_square", &eta_deph_square, py::arg("finesse"));
    m.def("eta_deph_gaussian", &eta_deph_gaussian, py::arg("finesse"));
    m.def("eta_single_pass", py::overload_cast<double, double>(&eta_single_pass), py::arg("d_tilde"), py::arg("finesse"));
    m.def("optimal_finesse", &optimal_finesse, py::arg("depth"));
    m.def("impedance_match_reflectivity", &impedance_match_reflectivity, py::arg("d_tilde"));
    m.def("impedance_match_depth", &impedance_match_depth, py::arg("reflectivity"));
    m.def("eta_cavity_finite_depth", &eta_cavity_finite_depth, py::arg("d_tilde"));
    m.def(
        "eta_cavity_loss",
        [](double d, double eps) {
            const auto f = eta_cavity_loss(d, eps);
            return py::make_tuple(f.value, f.validity.valid);
        },
        py::arg("d_tilde"), py::arg("epsilon"), "Returns (value, valid).");
    m.def(
        "eta_cavity",
        [](double d, double finesse, double eps) {
            const auto f = eta_cavity(d, finesse, eps);
            return py::make_tuple(f.value, f.validity.valid);
        },
        py::arg("d_tilde"), py::arg("finesse"), py::arg("epsilon"), "Returns (value, valid).");
    m.def(
        "eta_spin_dephasing", [](double gamma_hz, double t_sw) { return eta_spin_dephasing(SpinParams{gamma_hz}, t_sw); },
        py::arg("gamma_hz"), py::arg("t_sw"));
    m.def(
        "total_budget",
        [](double eta_2l, double eta_t, double eta_sw, double overlap) {
            const auto b = total_budget(eta_2l, eta_t, eta_sw, overlap);
            py::dict d;
            d["eta_2l"] = b.eta_2l;
            d["eta_t"] = b.eta_t;
            d["eta_sw"] = b.eta_sw;
            d["overlap"] = b.overlap;
            d["eta_total"] = b.eta_total;
            return validity_dict(d, b.validity);
        },
        py::arg("eta_2l"), py::arg("eta_t"), py::arg("eta_sw"), py::arg("overlap") = 1.0);

    m.def(
        "comb_profile",
        [](const CombParams& comb, std::size_t points, double span_hz) {
            const FrequencyGrid grid(points, span_hz);
            const auto p = make_comb(comb, grid);
            std::vector<double> f(grid.size());
            for (std::size_t i = 0; i < f.size(); ++i) f[i] = grid.frequency(i);
            return py::make_tuple(to_array(f), to_array(p.depth));
        },
        py::arg("comb"), py::arg("points") = std::size_t{1} << 18, py::arg("span_hz") = 80e6,
        "Returns (frequency_hz, depth) arrays.");

    m.def(
        "run_two_level",
        [](const CombParams& comb, double fwhm_s, double center_s, double detuning_hz,
           std::optional<CavityParams> cavity, std::size_t points, double span_hz) {
            const auto r = run_two_level(comb, PulseSpec{fwhm_s, center_s, detuning_hz}, cavity, GridSpec{points, span_hz});
            py::dict d;
            d["efficiency"] = r.efficiency;
            d["analytic"] = r.analytic;
            d["analytic_general"] = r.analytic_general;
            d["relative_deviation"] = r.relative_deviation;
            d["delay_s"] = r.delay_s;
            d["echo_peak_s"] = r.echo_peak_s;
            d["time_step_s"] = r.input.grid.dt();
            return validity_dict(d, r.validity);
        },
        py::arg("comb"), py::arg("fwhm_s") = 1.5e-6, py::arg("center_s") = 10e-6, py::arg("detuning_hz") = 0.0,
        py::arg("cavity") = py::none(), py::arg("points") = std::size_t{1} << 18, py::arg("span_hz") = 80e6);

    m.def(
        "transfer_probability",
        [](double detuning_hz, const SechPulseParams& p) {
            return integrate_bloch(detuning_hz, ControlPulse::sech(p)).transfer_probability();
        },
        py::arg("detuning_hz"), py::arg("pulse"));
    m.def(
        "control_transfer_efficiency",
        [](const SechPulseParams& p, double input_fwhm_s, const std::string& weighting, double bandwidth_hz,
           std::size_t samples) {
            ControlSettings s;
            s.pulse = p;
            s.uniform_bandwidth_hz = bandwidth_hz;
            s.samples = samples;
            if (weighting == "spectrum") s.weighting = Weighting::PulseSpectrum;
            else if (weighting == "uniform") s.weighting = Weighting::Uniform;
            else throw DomainError("weighting", "weighting: 'spectrum' or 'uniform' required, got '" + weighting + "'");
            PulseSpec input;
            input.fwhm_s = input_fwhm_s;
            return control_transfer_efficiency(s, input);
        },
        py::arg("pulse"), py::arg("input_fwhm_s") = 1.5e-6, py::arg("weighting") = "spectrum",
        py::arg("bandwidth_hz") = 1e6, py::arg("samples") = 241);

    m.def(
        "optimize_cavity_design",
        [](double depth, double epsilon, double max_finesse, bool single_pass, std::size_t steps) {
            const auto r = optimize_cavity_design(depth, epsilon, max_finesse,
                                                  single_pass ? DesignMode::SinglePass : DesignMode::Cavity, steps);
            std::vector<double> f, eta;
            for (const auto& row : r.table) {
                f.push_back(row.finesse);
                eta.push_back(row.eta);
            }
            py::dict d;
            d["finesse"] = r.best.finesse;
            d["eta"] = r.best.eta;
            d["d_tilde"] = r.best.d_tilde;
            d["r1"] = r.best.r1;
            d["boundary"] = r.boundary;
            d["scan_finesse"] = to_array(f);
            d["scan_eta"] = to_array(eta);
            return d;
        },
        py::arg("depth"), py::arg("epsilon") = 0.0, py::arg("max_finesse") = 20.0, py::arg("single_pass") = false,
        py::arg("steps") = 1901);

    m.def("presets", [] {
        std::vector<std::string> names;
        for (const auto& p : presets()) names.emplace_back(p.name);
        return names;
    });
    m.def(
        "run_config",
        [](const std::string& name_or_text) {
            const auto* p = find_preset(name_or_text);
            const auto cfg = p ? parse_config_text(std::string(p->text), std::string(p->name))
                               : parse_config_text(name_or_text, "text");
            RunOutput out;
            {
                py::gil_scoped_release release;
                out = execute(cfg);
            }
            py::dict d;
            for (const auto& r : out.results) d[py::str(r.key)] = r.value;
            return validity_dict(d, out.validity);
        },
        py::arg("preset_or_ini"), "Runs a bundled preset (by name) or INI text; returns the result values.");
}
