// Python bindings for the environment-assisted shortcut toolkit. The
// extension exposes the main operations with numpy interop; the `easta`
// package wraps it.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "easta/branching.hpp"
#include "easta/config.hpp"
#include "easta/experiments.hpp"
#include "easta/verify.hpp"
#include "easta/version.hpp"

namespace py = pybind11;
using namespace easta;

namespace {

RunConfig config_from_string(const std::string& config_json) {
    if (config_json.empty()) {
        return RunConfig::defaults();
    }
    return RunConfig::from_json(nlohmann::json::parse(config_json));
}

py::dict table_to_dict(const ResultTable& table) {
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(table.rows.size()),
                         static_cast<Eigen::Index>(table.columns.size()));
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        for (Eigen::Index c = 0; c < rows.cols(); ++c) {
            rows(r, c) = table.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
    }
    py::dict out;
    out["columns"] = table.columns;
    out["rows"] = rows;
    out["metadata"] = table.metadata;
    out["csv"] = table.to_csv();
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Environment-assisted shortcuts to adiabaticity: C++ core";
    m.attr("__version__") = kVersion;

    // Configuration problems are bad user input, not runtime faults.
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    // --- numerics ---
    m.def("hermitian_eig",
          [](const Matrix& h) {
              const EigResult eig = hermitian_eig(h);
              return py::make_tuple(eig.values, eig.vectors);
          },
          py::arg("h"), "Eigenvalues (ascending) and orthonormal eigenvectors");
    m.def("unitary_step", &unitary_step, py::arg("h"), py::arg("dt"),
          "exp(-i H dt) for Hermitian H (hbar = 1)");
    m.def("spectral_norm", &spectral_norm, py::arg("a"));
    m.def("unitarity_defect", &unitarity_defect, py::arg("a"));
    m.def("hermiticity_defect", &hermiticity_defect, py::arg("a"));
    m.def("integrate_grid",
          [](const RealVector& samples, double dt) { return integrate_grid(samples, dt); },
          py::arg("samples"), py::arg("dt"), "Composite trapezoid on a uniform grid");

    // --- model ---
    py::class_<DriveSchedule>(m, "DriveSchedule")
        .def(py::init([](const std::string& kind, double B, double tau,
                         std::vector<double> samples) {
                 return DriveSchedule{schedule_kind_from_string(kind), B, tau,
                                      std::move(samples)};
             }),
             py::arg("kind") = "cosine-squared", py::arg("B") = 1.0, py::arg("tau") = 1.0,
             py::arg("samples") = std::vector<double>{})
        .def_readonly("B", &DriveSchedule::B)
        .def_readonly("tau", &DriveSchedule::tau)
        .def_property_readonly("kind",
                               [](const DriveSchedule& s) { return to_string(s.kind); });
    m.def("schedule_value", &schedule_value, py::arg("schedule"), py::arg("t"));
    m.def("qubit_hamiltonian", &qubit_hamiltonian, py::arg("B"), py::arg("J"),
          "(B/2) sigma_x + (J/2) sigma_z");

    py::class_<HamiltonianPath>(m, "HamiltonianPath")
        .def_readonly("times", &HamiltonianPath::times)
        .def_readonly("dim", &HamiltonianPath::dim)
        .def("steps", &HamiltonianPath::steps)
        .def("dt", &HamiltonianPath::dt)
        .def("sample", [](const HamiltonianPath& p, std::size_t k) { return p.samples.at(k); },
             py::arg("k"));
    m.def("build_path",
          [](const DriveSchedule& s, std::size_t steps) { return build_path(s, steps); },
          py::arg("schedule"), py::arg("steps"));
    m.def("path_from_samples",
          [](const std::vector<Matrix>& samples, double t_end) {
              if (samples.size() < 3) {
                  throw ContractError("path_from_samples: need at least 3 samples");
              }
              HamiltonianPath path;
              path.samples = samples;
              path.dim = samples.front().rows();
              path.times.resize(samples.size());
              const auto steps = static_cast<double>(samples.size() - 1);
              for (std::size_t k = 0; k < samples.size(); ++k) {
                  path.times[k] = t_end * static_cast<double>(k) / steps;
                  if (!is_hermitian(samples[k])) {
                      throw ContractError("path_from_samples: samples must be Hermitian");
                  }
              }
              return path;
          },
          py::arg("samples"), py::arg("t_end"),
          "Uniform-grid path from explicit Hermitian samples (midpoints are averaged)");

    py::class_<EigenFrame>(m, "EigenFrame")
        .def_readonly("times", &EigenFrame::times)
        .def_readonly("gap_min", &EigenFrame::gap_min)
        .def_readonly("dim", &EigenFrame::dim)
        .def("points", &EigenFrame::points)
        .def("energies", [](const EigenFrame& f, std::size_t k) { return f.energies.at(k); },
             py::arg("k"))
        .def("vectors", [](const EigenFrame& f, std::size_t k) { return f.vectors.at(k); },
             py::arg("k"));
    m.def("eigenframe",
          [](const HamiltonianPath& p) { return eigenframe(p); }, py::arg("path"));

    // --- propagation ---
    py::class_<PropagationResult>(m, "PropagationResult")
        .def_readonly("times", &PropagationResult::times)
        .def_readonly("dim", &PropagationResult::dim)
        .def_readonly("max_unitarity_defect", &PropagationResult::max_unitarity_defect)
        .def_readonly("method", &PropagationResult::method)
        .def("points", &PropagationResult::points)
        .def("unitary",
             [](const PropagationResult& r, std::size_t k) { return r.unitaries.at(k); },
             py::arg("k"));
    m.def("propagate", &propagate, py::arg("path"));
    m.def("evolved_eigenstate", &evolved_eigenstate, py::arg("result"), py::arg("frame"),
          py::arg("n"), py::arg("k"));

    // --- shortcuts ---
    py::class_<PhaseRecord>(m, "PhaseRecord")
        .def_readonly("max_radial_residual", &PhaseRecord::max_radial_residual)
        .def("total", &PhaseRecord::total, py::arg("k"), py::arg("n"))
        .def("totals", &PhaseRecord::totals, py::arg("k"))
        .def("dynamical", [](const PhaseRecord& p, std::size_t k) { return p.dynamical.at(k); },
             py::arg("k"))
        .def("geometric", [](const PhaseRecord& p, std::size_t k) { return p.geometric.at(k); },
             py::arg("k"));
    m.def("adiabatic_phases", &adiabatic_phases, py::arg("frame"));

    m.def("cd_hamiltonian",
          [](const EigenFrame& frame, std::size_t k) {
              double defect = 0.0;
              Matrix h = cd_hamiltonian(frame, k, &defect);
              return py::make_tuple(h, defect);
          },
          py::arg("frame"), py::arg("k"),
          "Counterdiabatic field and its pre-symmetrization defect");
    m.def("cd_unitary", &cd_unitary, py::arg("frame"), py::arg("phases"), py::arg("k"));
    m.def("easta_unitary", &easta_unitary, py::arg("result"), py::arg("frame"),
          py::arg("phases"), py::arg("k"),
          "Environment unitary forcing every branch through the adiabatic manifold");
    m.def("embed_env_unitary", &embed_env_unitary, py::arg("u_prime"), py::arg("env_basis"));
    m.def("env_hamiltonian",
          [](const PropagationResult& r, const EigenFrame& f, const PhaseRecord& p,
             std::size_t k, double route_tol) { return env_hamiltonian(r, f, p, k, route_tol); },
          py::arg("result"), py::arg("frame"), py::arg("phases"), py::arg("k"),
          py::arg("route_tol") = 5e-4);
    m.def("similarity_map", &similarity_map, py::arg("frame"), py::arg("phases"), py::arg("k"));

    py::class_<EnvControlMap>(m, "EnvControlMap")
        .def_readonly("matrix", &EnvControlMap::matrix)
        .def_readonly("target_gram_defect", &EnvControlMap::target_gram_defect)
        .def_readonly("unitarity_defect", &EnvControlMap::unitarity_defect);
    m.def("generalized_env_unitary", &generalized_env_unitary, py::arg("result"),
          py::arg("frame"), py::arg("targets"), py::arg("k"),
          "Environment unitary for arbitrary control targets kappa_m(t_k)");

    py::class_<CostCurve>(m, "CostCurve")
        .def_readonly("times", &CostCurve::times)
        .def_readonly("instantaneous", &CostCurve::instantaneous)
        .def_readonly("cumulative", &CostCurve::cumulative)
        .def_readonly("tau", &CostCurve::tau)
        .def("total", &CostCurve::total);
    m.def("process_cost", &process_cost, py::arg("norm_samples"), py::arg("dt"),
          py::arg("tau"));

    // --- branching ---
    py::class_<BranchingState>(m, "BranchingState")
        .def_readonly("probabilities", &BranchingState::probabilities)
        .def_readonly("system_kets", &BranchingState::system_kets)
        .def_readonly("environment_kets", &BranchingState::environment_kets)
        .def_readonly("joint", &BranchingState::joint)
        .def_readonly("even", &BranchingState::even)
        .def("branches", &BranchingState::branches)
        .def("dim_system", &BranchingState::dim_system)
        .def("dim_environment", &BranchingState::dim_environment);
    m.def("make_branching", &make_branching, py::arg("probabilities"),
          py::arg("system_kets"), py::arg("environment_kets"));
    m.def("even_branching", &even_branching, py::arg("frame"), py::arg("dim_env"));
    m.def("apply_joint", &apply_joint, py::arg("u_system"), py::arg("u_env"),
          py::arg("joint"));
    m.def("reduced_system_state", &reduced_system_state, py::arg("joint"), py::arg("d_s"),
          py::arg("d_e"));
    m.def("bare_branch_overlap", &bare_branch_overlap, py::arg("result"), py::arg("frame"),
          py::arg("n"), py::arg("k"));
    m.def("easta_branch_overlap", &easta_branch_overlap, py::arg("evolved_joint"),
          py::arg("state"), py::arg("frame"), py::arg("n"), py::arg("k"));
    m.def("uneven_map", &uneven_map, py::arg("probabilities"), py::arg("result"),
          py::arg("frame"), py::arg("phases"), py::arg("k"));

    py::class_<DefectDecomposition>(m, "DefectDecomposition")
        .def_readonly("left_direct", &DefectDecomposition::left_direct)
        .def_readonly("right_direct", &DefectDecomposition::right_direct)
        .def_readonly("left_closed", &DefectDecomposition::left_closed)
        .def_readonly("right_closed", &DefectDecomposition::right_closed);
    m.def("unitarity_defect_decomposition", &unitarity_defect_decomposition,
          py::arg("probabilities"), py::arg("result"), py::arg("frame"), py::arg("phases"),
          py::arg("k"));

    py::class_<EvenEmbedding>(m, "EvenEmbedding")
        .def_readonly("denominator", &EvenEmbedding::denominator)
        .def_readonly("multiplicities", &EvenEmbedding::multiplicities)
        .def_readonly("max_residual", &EvenEmbedding::max_residual);
    m.def("embed_even",
          [](const Eigen::VectorXd& p, double tol) { return embed_even(p, tol); },
          py::arg("probabilities"), py::arg("tolerance") = 1e-9);

    // --- experiments / verification ---
    m.def("random_gapped_path", &random_gapped_path, py::arg("dim"), py::arg("steps"),
          py::arg("tau"), py::arg("seed"), py::arg("min_gap") = 0.1);
    m.def("run_experiment",
          [](const std::string& name, const std::string& config_json, std::uint64_t seed) {
              const RunConfig cfg = config_from_string(config_json);
              if (name == "figure-overlap") return table_to_dict(figure_overlap(cfg, seed));
              if (name == "figure-cost") return table_to_dict(figure_cost(cfg, seed));
              if (name == "sweep-tau") return table_to_dict(sweep_tau(cfg, seed));
              throw ConfigError("run_experiment: unknown experiment '" + name + "'");
          },
          py::arg("name"), py::arg("config_json") = "", py::arg("seed") = 1,
          "Run figure-overlap / figure-cost / sweep-tau; returns columns, rows, metadata");
    m.def("run_verify",
          [](const std::string& config_json, std::uint64_t seed) {
              const RunConfig cfg = config_from_string(config_json);
              const VerifyReport report = run_verify(cfg, seed);
              const py::object loads = py::module_::import("json").attr("loads");
              return loads(report.to_json().dump());
          },
          py::arg("config_json") = "", py::arg("seed") = 1,
          "Run the invariant suite; returns the verdict report as a dict");
    m.def("default_config_json",
          []() { return RunConfig::defaults().canonical(); },
          "Canonical JSON of the built-in default configuration");
}
