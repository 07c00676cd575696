#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qcarpet/render.hpp"

namespace py = pybind11;
using namespace qcarpet;

namespace {

py::array_t<double> grid_values(const DensityGrid& grid) {
    py::array_t<double> out(
        {static_cast<py::ssize_t>(grid.spec.nt), static_cast<py::ssize_t>(grid.spec.nz)});
    std::copy(grid.values.begin(), grid.values.end(), out.mutable_data());
    return out;
}

py::array_t<std::complex<double>> modeset_coeffs(const ModeSet& set) {
    py::array_t<std::complex<double>> out({static_cast<py::ssize_t>(set.size())});
    std::copy(set.coeffs.begin(), set.coeffs.end(), out.mutable_data());
    return out;
}

py::array_t<double> modeset_energies(const ModeSet& set) {
    py::array_t<double> out({static_cast<py::ssize_t>(set.size())});
    for (std::size_t i = 0; i < set.size(); ++i) out.mutable_data()[i] = set.modes[i].energy;
    return out;
}

py::array_t<double> autocorr_array(const ModeSet& set, py::array_t<double> times) {
    const auto buf = times.request();
    std::span<const double> span(static_cast<const double*>(buf.ptr),
                                 static_cast<std::size_t>(buf.size));
    const auto trace = autocorrelation(set, span);
    py::array_t<double> out({static_cast<py::ssize_t>(trace.size()), py::ssize_t{2}});
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out.mutable_data()[2 * i] = trace[i].t;
        out.mutable_data()[2 * i + 1] = trace[i].value;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Eigenmode quantum-carpet solver for a particle in a 1-D box";

    py::enum_<ModelKind>(m, "ModelKind")
        .value("Schrodinger", ModelKind::Schrodinger)
        .value("DiracExact", ModelKind::DiracExact)
        .value("DiracSlightRel", ModelKind::DiracSlightRel)
        .value("DiracNonRelLimit", ModelKind::DiracNonRelLimit)
        .value("KleinGordon", ModelKind::KleinGordon);

    py::enum_<KgBranch>(m, "KgBranch")
        .value("Particle", KgBranch::Particle)
        .value("Antiparticle", KgBranch::Antiparticle);

    py::class_<PhysicalParams>(m, "PhysicalParams")
        .def(py::init<>())
        .def_static("natural", &PhysicalParams::natural, py::arg("box_length") = 1.0,
                    py::arg("q") = 1.0, py::arg("q_prime") = 1.0)
        .def_readwrite("box_length", &PhysicalParams::box_length)
        .def_readwrite("q", &PhysicalParams::q)
        .def_readwrite("q_prime", &PhysicalParams::q_prime)
        .def_readwrite("t_rev_sch", &PhysicalParams::t_rev_sch)
        .def_readwrite("kg_rest_energy", &PhysicalParams::kg_rest_energy)
        .def_property_readonly("rest_energy_dirac", &PhysicalParams::rest_energy_dirac)
        .def_property_readonly("rest_energy_kg", &PhysicalParams::rest_energy_kg)
        .def("validate", &PhysicalParams::validate);

    py::class_<PacketSpec>(m, "PacketSpec")
        .def(py::init<>())
        .def_readwrite("center", &PacketSpec::center)
        .def_readwrite("width", &PacketSpec::width)
        .def_readwrite("momentum", &PacketSpec::momentum)
        .def_readwrite("m_min", &PacketSpec::m_min)
        .def_readwrite("m_max", &PacketSpec::m_max);

    py::class_<ModeDescriptor>(m, "ModeDescriptor")
        .def_readonly("n", &ModeDescriptor::n)
        .def_readonly("k", &ModeDescriptor::k)
        .def_readonly("energy", &ModeDescriptor::energy)
        .def_readonly("momentum_p", &ModeDescriptor::momentum_p)
        .def_readonly("phase_delta", &ModeDescriptor::phase_delta);

    py::class_<ModeSet>(m, "ModeSet")
        .def_readonly("model", &ModeSet::model)
        .def_readonly("params", &ModeSet::params)
        .def_readonly("modes", &ModeSet::modes)
        .def_property_readonly("coeffs", &modeset_coeffs)
        .def_property_readonly("energies", &modeset_energies)
        .def_property_readonly("size", &ModeSet::size)
        .def("weighted_mean_index", &ModeSet::weighted_mean_index)
        .def("default_central_index", &ModeSet::default_central_index);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def_readwrite("nz", &GridSpec::nz)
        .def_readwrite("nt", &GridSpec::nt)
        .def_readwrite("t_max", &GridSpec::t_max);

    py::class_<DensityGrid>(m, "DensityGrid")
        .def_readonly("spec", &DensityGrid::spec)
        .def_readonly("model", &DensityGrid::model)
        .def_readonly("q_value", &DensityGrid::q_value)
        .def_readonly("box_length", &DensityGrid::box_length)
        .def_readonly("t_end", &DensityGrid::t_end)
        .def_readonly("norm0", &DensityGrid::norm0)
        .def_property_readonly("values", &grid_values)
        .def("peak", &DensityGrid::peak)
        .def("row_integral", &DensityGrid::row_integral)
        .def("max_row_norm_deviation", &DensityGrid::max_row_norm_deviation);

    py::class_<GridComparison>(m, "GridComparison")
        .def_readonly("max_abs", &GridComparison::max_abs)
        .def_readonly("rms", &GridComparison::rms);

    py::class_<RevivalPeak>(m, "RevivalPeak")
        .def_readonly("t", &RevivalPeak::t)
        .def_readonly("value", &RevivalPeak::value);

    py::class_<ColorMap>(m, "ColorMap")
        .def(py::init([](const std::string& name, double gamma) {
                 return ColorMap{colormap_from_string(name), gamma};
             }),
             py::arg("name") = "grayscale", py::arg("gamma") = 0.5);

    // spectrum
    m.def("schrodinger_energy", &schrodinger_energy, py::arg("n"), py::arg("params"));
    m.def("dirac_energy", &dirac_energy, py::arg("n"), py::arg("params"));
    m.def("dirac_momentum", &dirac_momentum, py::arg("n"), py::arg("params"));
    m.def("dirac_phase", &dirac_phase, py::arg("momentum_p"));
    m.def("kg_energy", &kg_energy, py::arg("n"), py::arg("branch"), py::arg("params"));
    m.def("limit_energy", &limit_energy, py::arg("n"), py::arg("kind"), py::arg("params"));
    m.def("limit_momentum", &limit_momentum, py::arg("n"), py::arg("kind"), py::arg("params"));

    // packet
    m.def("build_schrodinger_coeffs", &build_schrodinger_coeffs, py::arg("spec"), py::arg("params"));
    m.def("build_dirac_coeffs", &build_dirac_coeffs, py::arg("spec"), py::arg("params"), py::arg("kind"));
    m.def("build_kg_coeffs", &build_kg_coeffs, py::arg("spec"), py::arg("params"));
    m.def("build_modeset", &build_modeset, py::arg("kind"), py::arg("spec"), py::arg("params"));

    // evolution
    m.def("wavefunction_at", &wavefunction_at, py::arg("modeset"), py::arg("z"), py::arg("t"));
    m.def("density_grid", &density_grid, py::arg("modeset"), py::arg("spec"), py::arg("threads") = 0);
    m.def("density_grid_over", &density_grid_over, py::arg("modeset"), py::arg("nz"),
          py::arg("nt"), py::arg("t_end"), py::arg("threads") = 0);
    m.def("double_sum_oracle", &double_sum_oracle, py::arg("modeset"), py::arg("spec"));
    m.def("autocorrelation", &autocorr_array, py::arg("modeset"), py::arg("times"),
          "returns an (N, 2) array of (t, A) samples");
    m.def("analytic_revival_time",
          py::overload_cast<ModelKind, const PhysicalParams&, int>(&analytic_revival_time),
          py::arg("model"), py::arg("params"), py::arg("n0"));
    m.def("analytic_revival_time",
          py::overload_cast<const ModeSet&>(&analytic_revival_time), py::arg("modeset"));
    m.def(
        "detect_revivals",
        [](py::array_t<double> trace, double threshold) {
            const auto buf = trace.request();
            if (buf.ndim != 2 || buf.shape[1] != 2) {
                throw std::invalid_argument("trace must be an (N, 2) array of (t, A)");
            }
            std::vector<AutocorrSample> samples(static_cast<std::size_t>(buf.shape[0]));
            const auto* data = static_cast<const double*>(buf.ptr);
            for (std::size_t i = 0; i < samples.size(); ++i) {
                samples[i] = {data[2 * i], data[2 * i + 1]};
            }
            return detect_revivals(samples, threshold);
        },
        py::arg("trace"), py::arg("threshold") = 0.9);
    m.def("compare_grids", &compare_grids, py::arg("a"), py::arg("b"));

    // render
    m.def("write_pgm", &write_pgm, py::arg("grid"), py::arg("path"), py::arg("gamma") = 0.5);
    m.def("write_png", &write_png, py::arg("grid"), py::arg("colormap"), py::arg("path"));
    m.def("write_grid_csv", py::overload_cast<const DensityGrid&, const std::filesystem::path&>(&write_csv),
          py::arg("grid"), py::arg("path"));
    m.def("read_grid_csv", &read_grid_csv, py::arg("path"));

    py::register_exception<DegeneratePacketError>(m, "DegeneratePacketError", PyExc_ValueError);
    py::register_exception<CsvParseError>(m, "CsvParseError", PyExc_ValueError);
}
