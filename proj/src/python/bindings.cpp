#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dirac_ps/cli.hpp"
#include "dirac_ps/error.hpp"
#include "dirac_ps/fields_solution.hpp"
#include "dirac_ps/oracle.hpp"
#include "dirac_ps/specfun.hpp"
#include "dirac_ps/spectra.hpp"
#include "dirac_ps/susy_radial.hpp"

namespace py = pybind11;
using namespace dirac_ps;

namespace {

oracle::ReducedPotential make_potential(const std::string& kind, double alpha, double charge_term) {
    if (kind == "ps-log") return oracle::ReducedPotential::ps_log(charge_term);
    if (kind == "inverse-radius") return oracle::ReducedPotential::inverse_radius(alpha, charge_term);
    if (kind == "none") return oracle::ReducedPotential::none();
    throw DomainError("potential must be 'ps-log', 'inverse-radius' or 'none'");
}

py::tuple term_tuple(const KTerm& t) {
    return py::make_tuple(t.coeff, t.power, t.kind == BesselKind::k0 ? 0 : 1,
                          py::make_tuple(t.scale.num(), t.scale.den()));
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact Dirac-Pauli bound states in a filament field";

    auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<KinematicsError>(m, "KinematicsError", domain.ptr());
    py::register_exception<RangeError>(m, "RangeError", PyExc_ArithmeticError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    m.def("bessel_k0", &specfun::bessel_k0, py::arg("x"));
    m.def("bessel_k1", &specfun::bessel_k1, py::arg("x"));

    py::class_<spectra::SpectrumParams>(m, "SpectrumParams")
        .def(py::init([](double mass, double g, double mu0, double omega, double L) {
                 spectra::SpectrumParams p{mass, g, mu0, omega, L};
                 p.validate();
                 return p;
             }),
             py::arg("m") = 1.0, py::arg("g") = 1.0, py::arg("mu0") = 1.0, py::arg("omega") = 1.0,
             py::arg("L") = 2.0 * 3.14159265358979323846)
        .def_static("from_current", &spectra::SpectrumParams::from_current, py::arg("m"), py::arg("g"),
                    py::arg("mu0"), py::arg("current"), py::arg("L"))
        .def_readwrite("m", &spectra::SpectrumParams::m)
        .def_readwrite("g", &spectra::SpectrumParams::g)
        .def_readwrite("mu0", &spectra::SpectrumParams::mu0)
        .def_readwrite("omega", &spectra::SpectrumParams::omega)
        .def_readwrite("L", &spectra::SpectrumParams::L);

    m.def("coupling_lambda_tilde", &spectra::coupling_lambda_tilde);
    m.def("principal_number", &spectra::principal_number, py::arg("n"), py::arg("k"));
    m.def("reduced_eigenvalue", &spectra::reduced_eigenvalue, py::arg("n"), py::arg("k"));
    m.def("relativistic_energy", &spectra::relativistic_energy, py::arg("m"), py::arg("lambda_tilde"),
          py::arg("kappa"), py::arg("N"));
    m.def("quasirel_energy", &spectra::quasirel_energy, py::arg("m"), py::arg("lambda_tilde"), py::arg("kappa"),
          py::arg("N"));
    m.def("nonrel_energy", &spectra::nonrel_energy, py::arg("lambda_tilde"), py::arg("M"), py::arg("N"));
    m.def("nonrel_energy_shifted", &spectra::nonrel_energy_shifted, py::arg("m"), py::arg("lambda_tilde"),
          py::arg("kappa"), py::arg("N"));
    m.def("quantized_kappa", &spectra::quantized_kappa, py::arg("L"), py::arg("Ntilde"));

    py::class_<KExpr>(m, "KExpr")
        .def("__call__", [](const KExpr& e, double r) { return evaluate(e, r); })
        .def("terms",
             [](const KExpr& e) {
                 py::list out;
                 for (const auto& t : e.terms()) out.append(term_tuple(t));
                 return out;
             })
        .def("is_zero", [](const KExpr& e, double tol) { return is_zero(e, tol); }, py::arg("tol") = kCancellationTol)
        .def("__str__", [](const KExpr& e) { return to_string(e); })
        .def("__repr__", [](const KExpr& e) { return "KExpr(" + to_string(e) + ")"; });

    py::class_<susy::RadialPair>(m, "RadialPair")
        .def_readonly("first", &susy::RadialPair::first)
        .def_readonly("second", &susy::RadialPair::second)
        .def("is_zero", [](const susy::RadialPair& p, double tol) { return susy::is_zero(p, tol); },
             py::arg("tol") = kCancellationTol)
        .def("__call__", [](const susy::RadialPair& p, double r) {
            return py::make_tuple(evaluate(p.first, r), evaluate(p.second, r));
        });

    py::class_<susy::RadialSpinorExpr>(m, "RadialSpinorExpr")
        .def_readonly("phi", &susy::RadialSpinorExpr::phi)
        .def_readonly("n", &susy::RadialSpinorExpr::n)
        .def_readonly("k", &susy::RadialSpinorExpr::k)
        .def_readonly("eps_tilde", &susy::RadialSpinorExpr::eps_tilde);

    m.def("ground_state", &susy::ground_state, py::arg("k"));
    m.def("excited_state", &susy::excited_state, py::arg("n"), py::arg("k"));
    m.def("lowering_apply", py::overload_cast<int, const susy::RadialPair&>(&susy::lowering_apply));
    m.def("raising_apply", py::overload_cast<int, const susy::RadialPair&>(&susy::raising_apply));
    m.def("hamiltonian_apply", &susy::hamiltonian_apply);
    m.def("combine", &susy::combine, py::arg("a"), py::arg("b"), py::arg("ca"), py::arg("cb"));
    m.def("norm_squared", &susy::norm_squared);
    m.def("inner_product", &susy::inner_product);
    m.def("normalized", &susy::normalized);
    m.def("unitary_equivalence_check", &susy::unitary_equivalence_check, py::arg("x1"), py::arg("x2"));

    m.def(
        "lowest_eigenvalues",
        [](int k, int count, double h, double r_max, const std::string& potential, double alpha, double charge_term) {
            const auto grid = oracle::RadialGrid::with_extent(h, r_max);
            const auto hm = oracle::discretize(k, make_potential(potential, alpha, charge_term), grid);
            return oracle::lowest_eigenvalues(hm, count);
        },
        py::arg("k"), py::arg("count"), py::arg("h") = 0.01, py::arg("r_max") = 40.0, py::arg("potential") = "ps-log",
        py::arg("alpha") = 0.0, py::arg("charge_term") = 0.0);
    m.def(
        "eigenvector_for",
        [](int k, double eigenvalue, double h, double r_max) {
            const auto hm = oracle::discretize(k, oracle::ReducedPotential::ps_log(),
                                               oracle::RadialGrid::with_extent(h, r_max));
            const auto s = oracle::eigenvector_for(hm, eigenvalue);
            py::dict d;
            d["eigenvalue"] = s.eigenvalue;
            d["residual"] = s.residual;
            d["r"] = s.r;
            d["phi1"] = s.phi1;
            d["phi2"] = s.phi2;
            return d;
        },
        py::arg("k"), py::arg("eigenvalue"), py::arg("h") = 0.01, py::arg("r_max") = 40.0);
    m.def(
        "convergence_study",
        [](int k, int n, const std::vector<double>& hs) {
            std::vector<oracle::RadialGrid> grids;
            const int N = spectra::principal_number(n, k);
            for (double h : hs) grids.push_back(oracle::RadialGrid::for_level(h, N));
            const auto st = oracle::convergence_study(k, n, grids);
            py::dict d;
            d["h"] = st.h;
            d["eigenvalues"] = st.eigenvalues;
            d["target"] = st.target;
            d["order"] = st.order;
            d["reliable"] = st.reliable;
            d["extrapolated"] = st.extrapolated;
            d["extrapolated_error"] = st.extrapolated_error;
            return d;
        },
        py::arg("k"), py::arg("n"), py::arg("hs") = std::vector<double>{0.04, 0.02, 0.01});

    m.def(
        "field_strengths",
        [](double omega, double x1, double x2) {
            const auto f = fields::field_strengths(omega, x1, x2);
            return py::make_tuple(f.E_vec, f.B_vec);
        },
        py::arg("omega"), py::arg("x1"), py::arg("x2"));
    m.def("clifford_defect", &fields::clifford_defect);

    py::class_<fields::BispinorSolution>(m, "BispinorSolution")
        .def_readonly("n", &fields::BispinorSolution::n)
        .def_readonly("k", &fields::BispinorSolution::k)
        .def_readonly("N", &fields::BispinorSolution::N)
        .def_readonly("Ntilde", &fields::BispinorSolution::Ntilde)
        .def_readonly("E", &fields::BispinorSolution::E)
        .def_readonly("kappa", &fields::BispinorSolution::kappa)
        .def_readonly("scale_factor", &fields::BispinorSolution::scale_factor)
        .def_readonly("normalization", &fields::BispinorSolution::normalization)
        .def_readonly("angular", &fields::BispinorSolution::angular)
        .def("__call__", [](const fields::BispinorSolution& s, const fields::SpacetimePoint& x) {
            return fields::evaluate(s, x);
        });

    m.def("assemble_bispinor", &fields::assemble_bispinor, py::arg("params"), py::arg("n"), py::arg("k"),
          py::arg("Ntilde") = 0);
    m.def("probability_density", &fields::probability_density, py::arg("sol"), py::arg("x1"), py::arg("x2"));
    m.def("dirac_residual", &fields::dirac_residual, py::arg("sol"), py::arg("params"), py::arg("x"),
          py::arg("h") = fields::kDefaultStep);
    m.def(
        "dirac_residual_study",
        [](const fields::BispinorSolution& s, const spectra::SpectrumParams& p, const fields::SpacetimePoint& x,
           double h) {
            const auto st = fields::dirac_residual_study(s, p, x, h);
            py::dict d;
            d["at_h"] = st.at_h;
            d["at_half_h"] = st.at_half_h;
            d["extrapolated"] = st.extrapolated;
            d["ratio"] = st.ratio;
            return d;
        },
        py::arg("sol"), py::arg("params"), py::arg("x"), py::arg("h") = fields::kDefaultStep);
    m.def("reflect_solution", &fields::reflect_solution);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<const char*> argv{cli::kProgramName};
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command-line front end; returns (exit_code, stdout, stderr).");

    m.attr("__version__") = cli::kVersion;
}
