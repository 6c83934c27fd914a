#include "easta/shortcuts.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

namespace easta {

namespace {

// d/dt of the gauge-fixed eigenvectors: central differences inside the
// grid, one-sided second-order stencils at the ends.
Matrix frame_derivative(const EigenFrame& frame, std::size_t k) {
    const std::size_t last = frame.points() - 1;
    if (last < 2) {
        throw ContractError("frame derivative needs at least 3 grid points");
    }
    if (k > last) {
        throw ContractError("frame derivative: grid index out of range");
    }
    const double dt = frame.dt();
    if (k == 0) {
        return (-3.0 * frame.vectors[0] + 4.0 * frame.vectors[1] - frame.vectors[2]) / (2.0 * dt);
    }
    if (k == last) {
        return (3.0 * frame.vectors[last] - 4.0 * frame.vectors[last - 1] + frame.vectors[last - 2]) /
               (2.0 * dt);
    }
    return (frame.vectors[k + 1] - frame.vectors[k - 1]) / (2.0 * dt);
}

Vector phase_factors(const PhaseRecord& phases, std::size_t k, Eigen::Index dim) {
    Vector out(dim);
    for (Eigen::Index n = 0; n < dim; ++n) {
        out(n) = std::exp(Complex(0.0, -phases.total(k, n)));
    }
    return out;
}

// Columns psi_n(t_k) = e^{-i f_n(t_k)} |n(t_k)>.
Matrix transported_states(const EigenFrame& frame, const PhaseRecord& phases, std::size_t k) {
    return frame.vectors[k] * phase_factors(phases, k, frame.dim).asDiagonal();
}

void check_grid_index(std::size_t k, std::size_t points, const char* who) {
    if (k >= points) {
        std::ostringstream msg;
        msg << who << ": grid index " << k << " out of range (" << points << " nodes)";
        throw ContractError(msg.str());
    }
}

} // namespace

PhaseRecord adiabatic_phases(const EigenFrame& frame) {
    const std::size_t points = frame.points();
    const Eigen::Index dim = frame.dim;
    const double dt = frame.dt();

    // Connection integrand per node/level. The exact <n|d_t n> is purely
    // imaginary; Im of the stencil is its real content, Re is radial
    // finite-difference noise kept as a diagnostic.
    std::vector<RealVector> connection(points, RealVector(dim));
    double radial = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
        const Matrix dv = frame_derivative(frame, k);
        for (Eigen::Index n = 0; n < dim; ++n) {
            const Complex nd = frame.vectors[k].col(n).dot(dv.col(n));
            connection[k](n) = nd.imag();
            radial = std::max(radial, std::abs(nd.real()));
        }
    }

    PhaseRecord record;
    record.max_radial_residual = radial;
    record.dynamical.assign(points, RealVector::Zero(dim));
    record.geometric.assign(points, RealVector::Zero(dim));
    for (std::size_t k = 1; k < points; ++k) {
        record.dynamical[k] =
            record.dynamical[k - 1] + 0.5 * dt * (frame.energies[k - 1] + frame.energies[k]);
        record.geometric[k] =
            record.geometric[k - 1] + 0.5 * dt * (connection[k - 1] + connection[k]);
    }
    return record;
}

Matrix cd_hamiltonian(const EigenFrame& frame, std::size_t k, double* presym_defect) {
    check_grid_index(k, frame.points(), "cd_hamiltonian");
    const Matrix dv = frame_derivative(frame, k);
    const Matrix& v = frame.vectors[k];

    Matrix h = Matrix::Zero(frame.dim, frame.dim);
    for (Eigen::Index n = 0; n < frame.dim; ++n) {
        const Complex nd = v.col(n).dot(dv.col(n));
        h += Complex(0.0, 1.0) *
             (dv.col(n) * v.col(n).adjoint() - nd * (v.col(n) * v.col(n).adjoint()));
    }
    const double defect = hermiticity_defect(h);
    if (presym_defect != nullptr) {
        *presym_defect = defect;
    }
    return 0.5 * (h + h.adjoint());
}

Matrix cd_unitary(const EigenFrame& frame, const PhaseRecord& phases, std::size_t k) {
    check_grid_index(k, frame.points(), "cd_unitary");
    // sum_n e^{-i f_n} |n(t_k)><n(t_0)|
    return transported_states(frame, phases, k) * frame.vectors[0].adjoint();
}

Matrix easta_unitary(const PropagationResult& result, const EigenFrame& frame,
                     const PhaseRecord& phases, std::size_t k) {
    check_grid_index(k, frame.points(), "easta_unitary");
    if (result.dim != frame.dim) {
        throw ContractError("easta_unitary: frame and propagation dimensions differ");
    }
    // inner(n, m) = <n(0)| U^dag |m(t)>; row m of the output adds e^{-i f_m}.
    const Matrix inner = frame.vectors[0].adjoint() * result.unitaries[k].adjoint() * frame.vectors[k];
    return phase_factors(phases, k, frame.dim).asDiagonal() * inner.transpose();
}

Matrix embed_env_unitary(const Matrix& u_prime, const Matrix& env_basis) {
    if (u_prime.rows() != u_prime.cols()) {
        throw ContractError("embed_env_unitary: U' must be square");
    }
    if (env_basis.cols() != u_prime.rows() || env_basis.rows() < env_basis.cols()) {
        throw ContractError(
            "embed_env_unitary: need one environment basis column per branch, with "
            "register dimension >= branch count");
    }
    const double gram =
        (env_basis.adjoint() * env_basis - Matrix::Identity(env_basis.cols(), env_basis.cols()))
            .cwiseAbs()
            .maxCoeff();
    if (gram > kUnitaryTol) {
        throw ContractError("embed_env_unitary: environment basis columns are not orthonormal");
    }
    const Eigen::Index d = env_basis.rows();
    return env_basis * u_prime * env_basis.adjoint() +
           (Matrix::Identity(d, d) - env_basis * env_basis.adjoint());
}

Matrix env_hamiltonian(const PropagationResult& result, const EigenFrame& frame,
                       const PhaseRecord& phases, std::size_t k, double route_tol,
                       double* route_disagreement) {
    check_grid_index(k, frame.points(), "env_hamiltonian");
    const std::size_t last = frame.points() - 1;

    // Closed form: entry (i, j) = <psi_j| H_CD |psi_i>.
    const Matrix hcd = cd_hamiltonian(frame, k);
    const Matrix psi = transported_states(frame, phases, k);
    const Matrix closed = (psi.adjoint() * hcd * psi).transpose();

    // Cross-check: i (dU'/dt) U'^dag with the same stencils as everywhere
    // else. Kept independent of the closed form on purpose.
    const auto uprime = [&](std::size_t kk) { return easta_unitary(result, frame, phases, kk); };
    Matrix du;
    const double dt = frame.dt();
    if (k == 0) {
        du = (-3.0 * uprime(0) + 4.0 * uprime(1) - uprime(2)) / (2.0 * dt);
    } else if (k == last) {
        du = (3.0 * uprime(last) - 4.0 * uprime(last - 1) + uprime(last - 2)) / (2.0 * dt);
    } else {
        du = (uprime(k + 1) - uprime(k - 1)) / (2.0 * dt);
    }
    const Matrix fd = Complex(0.0, 1.0) * du * uprime(k).adjoint();

    const double disagreement = spectral_norm(closed - fd);
    if (route_disagreement != nullptr) {
        *route_disagreement = disagreement;
    }
    const double bound = route_tol * (1.0 + spectral_norm(closed));
    if (disagreement > bound) {
        std::ostringstream msg;
        msg << "env_hamiltonian: closed-form and derivative routes disagree by "
            << disagreement << " (bound " << bound << ") at grid index " << k;
        throw ConsistencyError(msg.str());
    }
    return closed;
}

Matrix similarity_map(const EigenFrame& frame, const PhaseRecord& phases, std::size_t k) {
    check_grid_index(k, frame.points(), "similarity_map");
    // Row j = psi_j(t_k) transposed without conjugation; unitary because the
    // psi_j are orthonormal.
    return transported_states(frame, phases, k).transpose();
}

EnvControlMap generalized_env_unitary(const PropagationResult& result,
                                      const EigenFrame& frame,
                                      const std::vector<Vector>& targets,
                                      std::size_t k) {
    check_grid_index(k, result.points(), "generalized_env_unitary");
    const Eigen::Index dim = frame.dim;
    if (static_cast<Eigen::Index>(targets.size()) != dim) {
        throw ContractError("generalized_env_unitary: need one target per system level");
    }
    Matrix t(dim, dim);
    for (Eigen::Index m = 0; m < dim; ++m) {
        if (targets[m].size() != dim) {
            throw ContractError("generalized_env_unitary: target dimension mismatch");
        }
        t.col(m) = targets[m];
    }

    EnvControlMap map;
    map.target_gram_defect =
        (t.adjoint() * t - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
    // out(m, n) = <n(0)| U^dag |kappa_m>
    const Matrix inner = frame.vectors[0].adjoint() * result.unitaries[k].adjoint() * t;
    map.matrix = inner.transpose();
    map.unitarity_defect = unitarity_defect(map.matrix);
    if (map.target_gram_defect > 1e-8) {
        std::cerr << "warning: generalized_env_unitary targets are not orthonormal "
                  << "(gram defect " << map.target_gram_defect << "); output unitarity defect "
                  << map.unitarity_defect << "\n";
    }
    return map;
}

CostCurve process_cost(const RealVector& norm_samples, double dt, double tau) {
    if (norm_samples.size() < 2) {
        throw ContractError("process_cost: need at least 2 samples");
    }
    if (!(tau > 0.0)) {
        throw ContractError("process_cost: tau must be positive");
    }
    if (norm_samples.minCoeff() < 0.0) {
        throw ContractError("process_cost: norms must be nonnegative");
    }
    CostCurve curve;
    curve.tau = tau;
    curve.instantaneous = norm_samples;
    curve.cumulative = cumulative_trapezoid(norm_samples, dt) / tau;
    curve.times.resize(norm_samples.size());
    for (Eigen::Index kk = 0; kk < norm_samples.size(); ++kk) {
        curve.times[static_cast<std::size_t>(kk)] = static_cast<double>(kk) * dt;
    }
    return curve;
}

} // namespace easta
