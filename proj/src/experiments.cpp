#include "easta/experiments.hpp"

#include <cmath>
#include <sstream>

#include "easta/version.hpp"

namespace easta {

namespace {

constexpr double kPi = 3.14159265358979323846;

void attach_metadata(ResultTable& table, const RunConfig& cfg, std::uint64_t seed,
                     const std::string& command, int steps) {
    table.metadata["command"] = command;
    table.metadata["config"] = cfg.canonical();
    table.metadata["config_hash"] = cfg.hash();
    table.metadata["grid_steps"] = std::to_string(steps);
    table.metadata["seed"] = std::to_string(seed);
    table.metadata["version"] = kVersion;
}

bool probabilities_even(const std::vector<double>& p) {
    const double target = 1.0 / static_cast<double>(p.size());
    for (double x : p) {
        if (std::abs(x - target) > 1e-12) return false;
    }
    return true;
}

} // namespace

Pipeline run_pipeline(const DriveSchedule& schedule, std::size_t steps) {
    Pipeline pipe;
    pipe.path = build_path(schedule, steps);
    pipe.frame = eigenframe(pipe.path);
    pipe.phases = adiabatic_phases(pipe.frame);
    pipe.prop = propagate(pipe.path);
    return pipe;
}

ResultTable figure_overlap(const RunConfig& cfg, std::uint64_t seed) {
    if (cfg.model.dim != 2) {
        throw ConfigError("figure-overlap: only the two-level drive model is schedule-driven; "
                          "set model.dim = 2");
    }
    if (!probabilities_even(cfg.branching.probabilities)) {
        throw ConfigError("figure-overlap: transport through the adiabatic manifold requires "
                          "even branch probabilities; use 'verify' for the uneven diagnostic");
    }
    if (static_cast<int>(cfg.branching.probabilities.size()) != cfg.model.dim) {
        throw ConfigError("figure-overlap: branch count must equal the system dimension");
    }

    const auto pipe = run_pipeline(cfg.model.drive(), static_cast<std::size_t>(cfg.model.steps));
    const BranchingState state = even_branching(pipe.frame, cfg.branching.dim_environment);

    ResultTable table;
    table.columns.push_back("t_over_tau");
    for (Eigen::Index n = 0; n < pipe.frame.dim; ++n) {
        table.columns.push_back("bare_overlap_" + std::to_string(n));
    }
    for (Eigen::Index n = 0; n < pipe.frame.dim; ++n) {
        table.columns.push_back("easta_overlap_" + std::to_string(n));
    }

    for (std::size_t k = 0; k < pipe.frame.points(); ++k) {
        std::vector<double> row;
        row.push_back(pipe.frame.times[k] / cfg.model.tau);
        for (Eigen::Index n = 0; n < pipe.frame.dim; ++n) {
            row.push_back(bare_branch_overlap(pipe.prop, pipe.frame, n, k));
        }
        const Matrix w = embed_env_unitary(easta_unitary(pipe.prop, pipe.frame, pipe.phases, k),
                                           state.environment_kets);
        const Vector evolved = apply_joint(pipe.prop.unitaries[k], w, state.joint);
        for (Eigen::Index n = 0; n < pipe.frame.dim; ++n) {
            row.push_back(easta_branch_overlap(evolved, state, pipe.frame, n, k));
        }
        table.add_row(std::move(row));
    }
    attach_metadata(table, cfg, seed, "figure-overlap", cfg.model.steps);
    return table;
}

ResultTable figure_cost(const RunConfig& cfg, std::uint64_t seed) {
    if (cfg.model.dim != 2) {
        throw ConfigError("figure-cost: only the two-level drive model is schedule-driven; "
                          "set model.dim = 2");
    }
    const auto pipe = run_pipeline(cfg.model.drive(), static_cast<std::size_t>(cfg.model.steps));
    const double route_tol = cfg.tolerance("route_agreement", 5e-4);

    const Eigen::Index points = static_cast<Eigen::Index>(pipe.frame.points());
    RealVector cd_norms(points);
    RealVector env_norms(points);
    for (Eigen::Index k = 0; k < points; ++k) {
        cd_norms(k) = spectral_norm(cd_hamiltonian(pipe.frame, static_cast<std::size_t>(k)));
        env_norms(k) = spectral_norm(env_hamiltonian(pipe.prop, pipe.frame, pipe.phases,
                                                     static_cast<std::size_t>(k), route_tol));
    }
    const CostCurve cd = process_cost(cd_norms, pipe.frame.dt(), cfg.model.tau);
    const CostCurve env = process_cost(env_norms, pipe.frame.dt(), cfg.model.tau);

    ResultTable table;
    table.columns = {"t_over_tau", "cost_cd", "cost_env", "abs_difference"};
    for (Eigen::Index k = 0; k < points; ++k) {
        table.add_row({pipe.frame.times[static_cast<std::size_t>(k)] / cfg.model.tau,
                       cd.cumulative(k), env.cumulative(k),
                       std::abs(cd.cumulative(k) - env.cumulative(k))});
    }
    attach_metadata(table, cfg, seed, "figure-cost", cfg.model.steps);
    return table;
}

ResultTable sweep_tau(const RunConfig& cfg, std::uint64_t seed) {
    if (cfg.model.dim != 2) {
        throw ConfigError("sweep-tau: only the two-level drive model is schedule-driven; "
                          "set model.dim = 2");
    }
    ResultTable table;
    table.columns = {"tau", "cost_cd_total", "cost_env_total"};
    const double route_tol = cfg.tolerance("route_agreement", 5e-4);

    for (double tau : cfg.sweep.tau_values) {
        DriveSchedule schedule = cfg.model.drive();
        schedule.tau = tau;
        const auto pipe = run_pipeline(schedule, static_cast<std::size_t>(cfg.model.steps));
        const Eigen::Index points = static_cast<Eigen::Index>(pipe.frame.points());
        RealVector cd_norms(points);
        RealVector env_norms(points);
        for (Eigen::Index k = 0; k < points; ++k) {
            cd_norms(k) = spectral_norm(cd_hamiltonian(pipe.frame, static_cast<std::size_t>(k)));
            env_norms(k) = spectral_norm(env_hamiltonian(pipe.prop, pipe.frame, pipe.phases,
                                                         static_cast<std::size_t>(k), route_tol));
        }
        const double cd_total = process_cost(cd_norms, pipe.frame.dt(), tau).total();
        const double env_total = process_cost(env_norms, pipe.frame.dt(), tau).total();
        table.add_row({tau, cd_total, env_total});
    }
    attach_metadata(table, cfg, seed, "sweep-tau", cfg.model.steps);
    return table;
}

std::uint64_t NormalStream::next_u64() {
    // splitmix64
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double NormalStream::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on uniforms in (0, 1].
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * (1.0 / 9007199254740992.0);
    const double u2 = static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
}

Matrix random_hermitian(Eigen::Index dim, NormalStream& rng) {
    Matrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            g(i, j) = Complex(rng.next(), rng.next());
        }
    }
    return 0.5 * (g + g.adjoint());
}

Matrix random_unitary(Eigen::Index dim, NormalStream& rng) {
    Matrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            g(i, j) = Complex(rng.next(), rng.next());
        }
    }
    const Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity so Q is deterministic given the stream.
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Complex d = r(j, j);
        if (std::abs(d) > 0.0) {
            q.col(j) *= d / std::abs(d);
        }
    }
    return q;
}

HamiltonianPath random_gapped_path(Eigen::Index dim, std::size_t steps, double tau,
                                   std::uint64_t seed, double min_gap) {
    NormalStream rng(seed);
    constexpr int kMaxAttempts = 1000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const Matrix a = random_hermitian(dim, rng);
        const Matrix b = random_hermitian(dim, rng);
        auto builder = [a, b, tau](double t) -> Matrix {
            return a + std::sin(kPi * t / tau) * b;
        };
        HamiltonianPath path = build_path(builder, tau, steps);
        bool gapped = true;
        for (const Matrix& h : path.samples) {
            const EigResult eig = hermitian_eig(h);
            if (smallest_gap(eig.values) < min_gap) {
                gapped = false;
                break;
            }
        }
        if (gapped) {
            return path;
        }
    }
    std::ostringstream msg;
    msg << "random_gapped_path: no gapped sample after " << kMaxAttempts
        << " attempts (dim " << dim << ", min gap " << min_gap << ")";
    throw ConsistencyError(msg.str());
}

} // namespace easta
