#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "icct/demo.hpp"
#include "icct/dimer.hpp"
#include "icct/fit.hpp"
#include "icct/heom.hpp"
#include "icct/icc.hpp"
#include "icct/model.hpp"
#include "icct/rates.hpp"
#include "icct/scan.hpp"
#include "icct/units.hpp"
#include "icct/walk.hpp"

namespace py = pybind11;
using namespace icct;

PYBIND11_MODULE(_icct, m) {
    m.doc() = "excitonic coherence transport core";

    py::register_exception<Error>(m, "IcctError");

    m.attr("HBAR_CM1_FS") = units::hbar;
    m.attr("KB_CM1_PER_K") = units::k_B;
    m.def("thermal_energy", &units::thermal_energy, py::arg("temperature"));

    py::class_<SiteHamiltonian>(m, "SiteHamiltonian")
        .def(py::init([](const Matrix& h) { return SiteHamiltonian(h); }), py::arg("matrix"))
        .def_readonly("matrix", &SiteHamiltonian::h)
        .def_readonly("labels", &SiteHamiltonian::labels);

    m.def("fmo_hamiltonian", &fmo_hamiltonian);
    m.def("fmo_hamiltonian8", &fmo_hamiltonian8, py::arg("site8_energy"));
    m.def("dimer_hamiltonian", &dimer_hamiltonian, py::arg("theta"), py::arg("delta_e"));
    m.def(
        "dimer_from_sites",
        [](double e1, double e2, double j) {
            const DimerParams p = dimer_from_sites(e1, e2, j);
            return py::make_tuple(p.theta, p.delta_e);
        },
        py::arg("e1"), py::arg("e2"), py::arg("j"));

    py::class_<ExcitonBasis>(m, "ExcitonBasis")
        .def_readonly("energies", &ExcitonBasis::energies)
        .def_readonly("states", &ExcitonBasis::states);
    m.def("exciton_basis", &exciton_basis, py::arg("h"));

    py::class_<IccDecomposition>(m, "IccDecomposition")
        .def_readonly("couplings", &IccDecomposition::couplings)
        .def_readonly("donor_states", &IccDecomposition::donor_states)
        .def_readonly("acceptor_states", &IccDecomposition::acceptor_states);
    m.def(
        "icc_decompose",
        [](const SiteHamiltonian& h, const std::vector<int>& donor, const std::vector<int>& acceptor) {
            return icc_decompose(h, ComplexPartition{donor, acceptor});
        },
        py::arg("h"), py::arg("donor"), py::arg("acceptor"),
        "coupling-channel decomposition; site indices are 0-based here");
    m.def("site_weights", &site_weights, py::arg("state"));

    m.def("p_thermal", &p_thermal, py::arg("theta"), py::arg("delta_e"), py::arg("temperature"));
    m.def("p_coherent", &p_coherent, py::arg("theta"), py::arg("initial_site"));

    py::class_<DrudeBath>(m, "DrudeBath")
        .def(py::init([](double lam, double tau, double temp, std::optional<Matrix> corr) {
                 DrudeBath b{lam, tau, temp};
                 if (corr) b.site_correlation = *corr;
                 return b;
             }),
             py::arg("reorganization"), py::arg("correlation_time"), py::arg("temperature"),
             py::arg("site_correlation") = std::nullopt)
        .def_readonly("reorganization", &DrudeBath::reorganization)
        .def_readonly("correlation_time", &DrudeBath::correlation_time)
        .def_readonly("temperature", &DrudeBath::temperature);

    py::class_<HeomOptions>(m, "HeomOptions")
        .def(py::init([](int depth, int matsubara, double dt, int output_stride, bool terminator) {
                 HeomOptions o;
                 o.depth = depth;
                 o.matsubara = matsubara;
                 o.dt = dt;
                 o.output_stride = output_stride;
                 o.terminator = terminator;
                 return o;
             }),
             py::arg("depth") = 6, py::arg("matsubara") = 1, py::arg("dt") = 0.5,
             py::arg("output_stride") = 2, py::arg("terminator") = true)
        .def_readonly("depth", &HeomOptions::depth)
        .def_readonly("matsubara", &HeomOptions::matsubara);

    py::class_<PropagationResult>(m, "PropagationResult")
        .def_readonly("times", &PropagationResult::times)
        .def_readonly("states", &PropagationResult::states)
        .def_readonly("warnings", &PropagationResult::warnings)
        .def("population", &PropagationResult::population, py::arg("site"))
        .def("trace", &PropagationResult::trace);

    m.def(
        "propagate",
        [](const SiteHamiltonian& h, const DrudeBath& bath, int initial_site, double t_final,
           const HeomOptions& options) {
            const Hierarchy hier = build_hierarchy(h, bath, options);
            return propagate(hier, DensityMatrix::site_state(static_cast<int>(h.h.rows()), initial_site),
                             t_final);
        },
        py::arg("h"), py::arg("bath"), py::arg("initial_site"), py::arg("t_final"),
        py::arg("options") = HeomOptions{}, py::call_guard<py::gil_scoped_release>());
    m.def(
        "unitary_propagate",
        [](const SiteHamiltonian& h, int initial_site, double t_final, double dt) {
            return unitary_propagate(h, DensityMatrix::site_state(static_cast<int>(h.h.rows()), initial_site),
                                     t_final, dt);
        },
        py::arg("h"), py::arg("initial_site"), py::arg("t_final"), py::arg("dt") = 1.0);
    m.def("exciton_coherence", &exciton_coherence, py::arg("result"), py::arg("h"), py::arg("a") = 0,
          py::arg("b") = 1);
    m.def(
        "coherence_time",
        [](const std::vector<double>& t, const std::vector<double>& v, double t_min) {
            const CoherenceFit f = coherence_time(t, v, t_min);
            return py::make_tuple(f.tau, f.amplitude, f.offset);
        },
        py::arg("times"), py::arg("values"), py::arg("t_min") = 100.0);

    py::class_<ChainSpec>(m, "ChainSpec")
        .def(py::init([](double gap, double intra, double probe, double coupling) {
                 return ChainSpec{gap, intra, probe, coupling};
             }),
             py::arg("site_gap") = 120.0, py::arg("intra_coupling") = -87.7,
             py::arg("probe_coupling") = 1.0, py::arg("coupling") = 15.0)
        .def("chain_hamiltonian", &ChainSpec::chain_hamiltonian, py::arg("n_dimers"));

    py::class_<RateTable>(m, "RateTable")
        .def_readonly("times", &RateTable::times)
        .def_readonly("probability", &RateTable::probability)
        .def_readonly("mean_time", &RateTable::mean_time)
        .def_readonly("mean_time_sq", &RateTable::mean_time_sq)
        .def_readonly("tail_rate", &RateTable::tail_rate)
        .def_readonly("parameters", &RateTable::parameters);

    py::class_<ExtractionOptions>(m, "ExtractionOptions")
        .def(py::init([](double t_sim, int n_dimers, int depth) {
                 ExtractionOptions o;
                 o.t_sim = t_sim;
                 o.n_dimers = n_dimers;
                 o.heom.depth = depth;
                 return o;
             }),
             py::arg("t_sim") = 1600.0, py::arg("n_dimers") = 3, py::arg("depth") = 5);
    m.def("extract_rates", &extract_rates, py::arg("chain"), py::arg("bath"),
          py::arg("options") = ExtractionOptions{}, py::call_guard<py::gil_scoped_release>());
    m.def("save_rate_table", &save_rate_table, py::arg("table"), py::arg("path"));
    m.def("load_rate_table", &load_rate_table, py::arg("path"));

    py::class_<RatchetMoments>(m, "RatchetMoments")
        .def_readonly("mean_n", &RatchetMoments::mean_n)
        .def_readonly("var_n", &RatchetMoments::var_n)
        .def_readonly("drift", &RatchetMoments::drift)
        .def_readonly("diffusion", &RatchetMoments::diffusion)
        .def_readonly("delta_pi", &RatchetMoments::delta_pi);
    m.def(
        "analytic_moments",
        [](const RateTable& t, double t_total) { return analytic_moments(t, t_total); }, py::arg("table"),
        py::arg("t_total"));

    py::class_<McWalk>(m, "McWalk")
        .def_readonly("mean_n", &McWalk::mean_n)
        .def_readonly("var_n", &McWalk::var_n)
        .def_readonly("se_mean", &McWalk::se_mean)
        .def_readonly("se_var", &McWalk::se_var)
        .def_readonly("histogram", &McWalk::histogram);
    m.def(
        "monte_carlo_walk",
        [](const RateTable& t, long long n_traj, double t_total, uint64_t seed) {
            WalkOptions o;
            o.n_traj = n_traj;
            o.t_total = t_total;
            o.seed = seed;
            return monte_carlo_walk(t, o);
        },
        py::arg("table"), py::arg("n_traj") = 5000, py::arg("t_total") = 1e6, py::arg("seed") = 12345,
        py::call_guard<py::gil_scoped_release>());
}
