#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "magpair/scenario.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace magpair;

namespace {

DipoleSpec make_dipole(std::vector<double> energies,
                       py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>
                           moments,
                       double hermiticity_tol) {
    if (moments.ndim() != 3) throw std::invalid_argument("moments must have shape (d, d, 3)");
    const int d = static_cast<int>(energies.size());
    auto buf = moments.unchecked<3>();
    if (buf.shape(0) != d || buf.shape(1) != d || buf.shape(2) != 3)
        throw std::invalid_argument("moments must have shape (d, d, 3) matching len(energies)");
    std::vector<CVec3> ms(static_cast<size_t>(d) * d);
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int i = 0; i < 3; ++i) ms[static_cast<size_t>(x) * d + y][i] = buf(x, y, i);
    return DipoleSpec(std::move(energies), std::move(ms), hermiticity_tol);
}

}  // namespace

PYBIND11_MODULE(_magpair, m) {
    m.doc() = "Field-induced magnetic dipole-dipole interaction between two multi-level dipoles";

    py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
    py::register_exception<ExtrapolationError>(m, "ExtrapolationError", PyExc_ArithmeticError);

    py::class_<PhysicalConstants>(m, "PhysicalConstants")
        .def(py::init<>())
        .def_readwrite("mu0", &PhysicalConstants::mu0)
        .def_readwrite("hbar", &PhysicalConstants::hbar)
        .def_readwrite("c", &PhysicalConstants::c)
        .def_static("si", &PhysicalConstants::si)
        .def_static("dimensionless", &PhysicalConstants::dimensionless)
        .def("validate", &PhysicalConstants::validate)
        .def("__repr__", [](const PhysicalConstants& c) {
            return "PhysicalConstants(mu0=" + std::to_string(c.mu0) +
                   ", hbar=" + std::to_string(c.hbar) + ", c=" + std::to_string(c.c) + ")";
        });

    py::class_<Tolerances>(m, "Tolerances")
        .def(py::init<>())
        .def_readwrite("hermiticity_rel", &Tolerances::hermiticity_rel)
        .def_readwrite("unit_vector_abs", &Tolerances::unit_vector_abs)
        .def_readwrite("pairing_rel", &Tolerances::pairing_rel)
        .def_readwrite("self_adjoint_rel", &Tolerances::self_adjoint_rel)
        .def_readwrite("resonance_rel", &Tolerances::resonance_rel)
        .def_readwrite("angular_oracle_rel", &Tolerances::angular_oracle_rel)
        .def_readwrite("pv_oracle_rel", &Tolerances::pv_oracle_rel);

    py::class_<Bilinears>(m, "Bilinears")
        .def_readonly("dot", &Bilinears::dot)
        .def_readonly("radial", &Bilinears::radial);
    m.def("bilinear_form", &bilinear_form, "m1"_a, "m2"_a, "e_r"_a,
          "unit_tol"_a = Tolerances{}.unit_vector_abs);

    py::class_<DipoleSpec>(m, "DipoleSpec")
        .def(py::init(&make_dipole), "energies"_a, "moments"_a,
             "hermiticity_tol"_a = Tolerances{}.hermiticity_rel,
             "energies: level energies; moments: complex array of shape (d, d, 3)")
        .def_property_readonly("dim", &DipoleSpec::dim)
        .def("energy", &DipoleSpec::energy, "x"_a)
        .def_property_readonly("energies", &DipoleSpec::energies)
        .def("moment", [](const DipoleSpec& s, int x, int y) { return CVec3(s.moment(x, y)); },
             "x"_a, "y"_a)
        .def_property_readonly("moment_scale", &DipoleSpec::moment_scale);

    m.def("transition_frequency", &transition_frequency, "spec"_a, "y"_a, "x"_a, "consts"_a);

    py::class_<PairGeometry>(m, "PairGeometry")
        .def(py::init<double, const RVec3&, double>(), "r"_a, "e_r"_a,
             "unit_tol"_a = Tolerances{}.unit_vector_abs)
        .def_static("from_positions", &PairGeometry::from_positions, "x1"_a, "x2"_a)
        .def_readonly("r", &PairGeometry::r)
        .def_readonly("e_r", &PairGeometry::e_r);

    py::class_<BracketPair>(m, "BracketPair")
        .def_readonly("b_dot", &BracketPair::b_dot)
        .def_readonly("b_rad", &BracketPair::b_rad)
        .def_readonly("eta", &BracketPair::eta);
    m.def("j_brackets", &j_brackets, "eta"_a);
    m.def("k_brackets", &k_brackets, "eta"_a);

    m.def("j_coupling", &j_coupling, "omega"_a, "geom"_a, "m1"_a, "m2"_a, "consts"_a);
    m.def("j_coupling_oracle", &j_coupling_oracle, "omega"_a, "geom"_a, "m1"_a, "m2"_a, "consts"_a,
          "quad_points"_a = 64);

    py::class_<RegulatorPlan>(m, "RegulatorPlan")
        .def(py::init<>())
        .def_readwrite("epsilons", &RegulatorPlan::epsilons)
        .def_readwrite("eta_max", &RegulatorPlan::eta_max)
        .def_readwrite("extrapolation_order", &RegulatorPlan::extrapolation_order)
        .def_readwrite("tolerance", &RegulatorPlan::tolerance)
        .def("validate", &RegulatorPlan::validate)
        .def_static("refined", &RegulatorPlan::refined);

    py::class_<PvResult>(m, "PvResult")
        .def_readonly("value", &PvResult::value)
        .def_readonly("error_estimate", &PvResult::error_estimate)
        .def_readonly("regulated", &PvResult::regulated);

    m.def("k_kernel", &k_kernel, "omega"_a, "geom"_a, "m1"_a, "m2"_a, "consts"_a);
    m.def("k_kernel_oracle", &k_kernel_oracle, "omega"_a, "geom"_a, "m1"_a, "m2"_a, "consts"_a,
          "plan"_a = RegulatorPlan{});
    m.def("xi_coefficient", &xi_coefficient, "omega"_a, "geom"_a, "m1"_a, "m2"_a, "consts"_a,
          "plan"_a = RegulatorPlan{});
    m.def("lambda_coefficient", &lambda_coefficient, "omega"_a, "geom"_a, "m1"_a, "m2"_a, "consts"_a);

    py::class_<MemoryKernelResult>(m, "MemoryKernelResult")
        .def_readonly("value", &MemoryKernelResult::value)
        .def_readonly("error_estimate", &MemoryKernelResult::error_estimate)
        .def_readonly("epsilons", &MemoryKernelResult::epsilons)
        .def_readonly("regulated", &MemoryKernelResult::regulated)
        .def_readonly("converged", &MemoryKernelResult::converged);
    m.def("memory_kernel", &memory_kernel, "s"_a, "geom"_a, "m1"_a, "m2"_a, "consts"_a,
          "plan"_a = RegulatorPlan{});

    py::enum_<TermClass>(m, "TermClass")
        .value("PermanentPermanent", TermClass::PermanentPermanent)
        .value("Mixed", TermClass::Mixed)
        .value("Resonant", TermClass::Resonant)
        .value("NonResonant", TermClass::NonResonant)
        .value("CounterRotating", TermClass::CounterRotating);
    m.def("term_class_label", &term_class_label, "c"_a);
    m.def("classify", &classify, "d1"_a, "d2"_a, "y"_a, "x"_a, "u"_a, "v"_a, "consts"_a,
          "resonance_tol"_a = Tolerances{}.resonance_rel);
    m.def("g_principal", &g_principal, "d1"_a, "d2"_a, "geom"_a, "y"_a, "x"_a, "u"_a, "v"_a,
          "consts"_a);
    m.def("g_dissipative", &g_dissipative, "d1"_a, "d2"_a, "geom"_a, "y"_a, "x"_a, "u"_a, "v"_a,
          "consts"_a);

    py::class_<CouplingTensor::Entry>(m, "CouplingEntry")
        .def_readonly("y", &CouplingTensor::Entry::y)
        .def_readonly("x", &CouplingTensor::Entry::x)
        .def_readonly("u", &CouplingTensor::Entry::u)
        .def_readonly("v", &CouplingTensor::Entry::v)
        .def_readonly("g_principal", &CouplingTensor::Entry::g_principal)
        .def_readonly("g_dissipative", &CouplingTensor::Entry::g_dissipative)
        .def_readonly("term_class", &CouplingTensor::Entry::term_class);
    py::class_<CouplingTensor>(m, "CouplingTensor")
        .def_property_readonly("dim1", &CouplingTensor::dim1)
        .def_property_readonly("dim2", &CouplingTensor::dim2)
        .def_property_readonly("dense", &CouplingTensor::dense)
        .def_property_readonly("entries", &CouplingTensor::entries)
        .def("at", &CouplingTensor::at, "y"_a, "x"_a, "u"_a, "v"_a,
             py::return_value_policy::reference_internal);
    m.def("coupling_tensor", &coupling_tensor, "d1"_a, "d2"_a, "geom"_a, "consts"_a,
          "tol"_a = Tolerances{});

    py::class_<HamiltonianMatrix>(m, "HamiltonianMatrix")
        .def_readonly("dim1", &HamiltonianMatrix::dim1)
        .def_readonly("dim2", &HamiltonianMatrix::dim2)
        .def_readonly("matrix", &HamiltonianMatrix::matrix)
        .def("basis_index", &HamiltonianMatrix::basis_index, "x1"_a, "x2"_a)
        .def("basis_levels", &HamiltonianMatrix::basis_levels, "i"_a)
        .def("basis_label", &HamiltonianMatrix::basis_label, "i"_a);

    py::class_<AssembleOptions>(m, "AssembleOptions")
        .def(py::init<>())
        .def_readwrite("include_dissipative", &AssembleOptions::include_dissipative);

    m.def("assemble", &assemble, "d1"_a, "d2"_a, "geom"_a, "consts"_a,
          "options"_a = AssembleOptions{}, "tol"_a = Tolerances{});
    m.def("classical_hamiltonian", &classical_hamiltonian, "d1"_a, "d2"_a, "geom"_a, "consts"_a);

    py::class_<DickeScan>(m, "DickeScan")
        .def_readonly("points", &DickeScan::points)
        .def_readonly("small_r_slope", &DickeScan::small_r_slope);
    m.def("dicke_deviation", &dicke_deviation, "d1"_a, "d2"_a, "e_r"_a, "consts"_a, "radii"_a);
    m.def("rwa_filter", &rwa_filter, "h"_a, "d1"_a, "d2"_a, "consts"_a,
          "resonance_tol"_a = Tolerances{}.resonance_rel);

    py::enum_<UnitMode>(m, "UnitMode")
        .value("SI", UnitMode::SI)
        .value("Dimensionless", UnitMode::Dimensionless);

    py::enum_<SweepAxis>(m, "SweepAxis")
        .value("None_", SweepAxis::None)
        .value("Distance", SweepAxis::Distance)
        .value("Detuning", SweepAxis::Detuning)
        .value("FrequencyRatio", SweepAxis::FrequencyRatio)
        .value("OrientationAngle", SweepAxis::OrientationAngle);

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("axis", &SweepSpec::axis)
        .def_readwrite("min", &SweepSpec::min)
        .def_readwrite("max", &SweepSpec::max)
        .def_readwrite("points", &SweepSpec::points)
        .def_readwrite("log_spacing", &SweepSpec::log_spacing);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_readonly("unit_mode", &ScenarioConfig::unit_mode)
        .def_readonly("constants", &ScenarioConfig::constants)
        .def_readonly("dipole1", &ScenarioConfig::dipole1)
        .def_readonly("dipole2", &ScenarioConfig::dipole2)
        .def_readonly("geometry", &ScenarioConfig::geometry);

    py::class_<RunSummary>(m, "RunSummary")
        .def_readonly("files", &RunSummary::files)
        .def_readonly("flagged_rows", &RunSummary::flagged_rows)
        .def_readonly("dicke_slope", &RunSummary::dicke_slope)
        .def_readonly("manifest_text", &RunSummary::manifest_text);

    py::class_<OracleCheckRow>(m, "OracleCheckRow")
        .def_readonly("quantity", &OracleCheckRow::quantity)
        .def_readonly("where", &OracleCheckRow::where)
        .def_readonly("closed", &OracleCheckRow::closed)
        .def_readonly("oracle", &OracleCheckRow::oracle)
        .def_readonly("rel_err", &OracleCheckRow::rel_err)
        .def_readonly("pass_", &OracleCheckRow::pass)
        .def_readonly("status", &OracleCheckRow::status);

    m.def("load_scenario", &load_scenario, "path"_a);
    m.def("parse_scenario", &parse_scenario, "text"_a, "origin"_a = std::string("<string>"));
    m.def("to_dimensionless", &to_dimensionless, "config"_a);
    m.def("sweep_grid", &sweep_grid, "sweep"_a);
    m.def("scenario_config_hash", &scenario_config_hash, "config"_a);
    m.def("run_scenario", &run_scenario, "config"_a, "out_dir"_a, "threads"_a = 1);
    m.def("oracle_check", &oracle_check, "config"_a);
}
