#include "easta/branching.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace easta {

namespace {

// System-major joint layout: joint[s * d_E + e]. Mapped as a d_E x d_S
// column-major matrix, column s holds the environment block of system
// index s.
Eigen::Map<const Matrix> as_matrix(const Vector& joint, Eigen::Index d_s, Eigen::Index d_e) {
    if (joint.size() != d_s * d_e) {
        throw ContractError("joint vector size does not match d_S * d_E");
    }
    return Eigen::Map<const Matrix>(joint.data(), d_e, d_s);
}

void check_probabilities(const Eigen::VectorXd& p) {
    if (p.size() < 1) {
        throw ContractError("branching: need at least one branch");
    }
    for (Eigen::Index n = 0; n < p.size(); ++n) {
        if (!(p(n) >= 0.0) || p(n) > 1.0 + 1e-12) {
            throw ContractError("branching: probabilities must lie in [0, 1]");
        }
    }
    if (std::abs(p.sum() - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "branching: probabilities sum to " << p.sum() << ", not 1";
        throw ContractError(msg.str());
    }
}

} // namespace

BranchingState make_branching(const Eigen::VectorXd& probabilities,
                              const Matrix& system_kets,
                              const Matrix& environment_kets) {
    check_probabilities(probabilities);
    const Eigen::Index n_branches = probabilities.size();
    if (system_kets.cols() != n_branches || environment_kets.cols() != n_branches) {
        throw ContractError("make_branching: need one system and one environment ket per branch");
    }
    if (environment_kets.rows() < n_branches) {
        throw ContractError("make_branching: environment dimension must be >= branch count");
    }
    const double env_gram =
        (environment_kets.adjoint() * environment_kets - Matrix::Identity(n_branches, n_branches))
            .cwiseAbs()
            .maxCoeff();
    if (env_gram > kUnitaryTol) {
        throw ContractError("make_branching: environment kets are not orthonormal");
    }
    for (Eigen::Index n = 0; n < n_branches; ++n) {
        if (std::abs(system_kets.col(n).norm() - 1.0) > kUnitaryTol) {
            throw ContractError("make_branching: system kets must be normalized");
        }
    }

    BranchingState state;
    state.probabilities = probabilities;
    state.system_kets = system_kets;
    state.environment_kets = environment_kets;
    const Eigen::Index d_s = system_kets.rows();
    const Eigen::Index d_e = environment_kets.rows();
    state.joint = Vector::Zero(d_s * d_e);
    for (Eigen::Index n = 0; n < n_branches; ++n) {
        const double amp = std::sqrt(probabilities(n));
        for (Eigen::Index s = 0; s < d_s; ++s) {
            state.joint.segment(s * d_e, d_e) += amp * system_kets(s, n) * environment_kets.col(n);
        }
    }
    if (std::abs(state.joint.norm() - 1.0) > kUnitaryTol) {
        throw ContractError("make_branching: joint state failed to normalize; "
                            "system kets are likely not orthogonal across branches");
    }
    const double spread = (probabilities.array() - 1.0 / static_cast<double>(n_branches))
                              .abs()
                              .maxCoeff();
    state.even = spread <= 1e-12;
    return state;
}

BranchingState even_branching(const EigenFrame& frame, Eigen::Index dim_env) {
    if (dim_env < frame.dim) {
        throw ContractError("even_branching: environment dimension must be >= system dimension");
    }
    const Eigen::Index n = frame.dim;
    const Eigen::VectorXd p = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    const Matrix env = Matrix::Identity(dim_env, dim_env).leftCols(n);
    return make_branching(p, frame.vectors[0], env);
}

Vector apply_joint(const Matrix& u_system, const Matrix& u_env, const Vector& joint) {
    const Eigen::Index d_s = u_system.rows();
    const Eigen::Index d_e = u_env.rows();
    if (u_system.cols() != d_s || u_env.cols() != d_e) {
        throw ContractError("apply_joint: operators must be square");
    }
    const auto m = as_matrix(joint, d_s, d_e);
    const Matrix evolved = u_env * m * u_system.transpose();
    return Eigen::Map<const Vector>(evolved.data(), joint.size());
}

Matrix reduced_system_state(const Vector& joint, Eigen::Index d_s, Eigen::Index d_e) {
    if (std::abs(joint.norm() - 1.0) > kUnitaryTol) {
        throw ContractError("reduced_system_state: joint vector must be normalized");
    }
    const auto m = as_matrix(joint, d_s, d_e);
    // rho_{s,s'} = sum_e joint[s,e] conj(joint[s',e])
    return (m.adjoint() * m).transpose();
}

double bare_branch_overlap(const PropagationResult& result, const EigenFrame& frame,
                           Eigen::Index n, std::size_t k) {
    if (n < 0 || n >= frame.dim || k >= frame.points()) {
        throw ContractError("bare_branch_overlap: index out of range");
    }
    const Complex ov = frame.vectors[k].col(n).dot(result.unitaries[k] * frame.vectors[0].col(n));
    return std::abs(ov);
}

double easta_branch_overlap(const Vector& evolved_joint, const BranchingState& state,
                            const EigenFrame& frame, Eigen::Index n, std::size_t k) {
    if (n < 0 || n >= state.branches() || k >= frame.points()) {
        throw ContractError("easta_branch_overlap: index out of range");
    }
    if (state.dim_system() != frame.dim) {
        throw ContractError("easta_branch_overlap: frame and state dimensions differ");
    }
    const auto m = as_matrix(evolved_joint, state.dim_system(), state.dim_environment());
    // chi_n = (I (x) <E_n|) |joint>, the system ket riding branch n.
    const Vector chi = (state.environment_kets.col(n).adjoint() * m).transpose();
    const double weight = chi.norm();
    if (weight < 1e-14) {
        throw ContractError("easta_branch_overlap: branch carries no weight");
    }
    return std::abs(frame.vectors[k].col(n).dot(chi)) / weight;
}

Matrix uneven_map(const Eigen::VectorXd& probabilities, const PropagationResult& result,
                  const EigenFrame& frame, const PhaseRecord& phases, std::size_t k) {
    check_probabilities(probabilities);
    if (probabilities.size() != frame.dim) {
        throw ContractError("uneven_map: branch count must equal the system dimension");
    }
    for (Eigen::Index n = 0; n < probabilities.size(); ++n) {
        if (probabilities(n) <= 0.0) {
            throw ContractError("uneven_map: probabilities must be strictly positive; "
                                "drop zero-weight branches first");
        }
    }
    Matrix m = easta_unitary(result, frame, phases, k);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            // Exact 1 when p_i == p_j, so even inputs reproduce easta_unitary
            // bit for bit.
            if (probabilities(i) != probabilities(j)) {
                m(i, j) *= std::sqrt(probabilities(i) / probabilities(j));
            }
        }
    }
    return m;
}

DefectDecomposition unitarity_defect_decomposition(const Eigen::VectorXd& probabilities,
                                                   const PropagationResult& result,
                                                   const EigenFrame& frame,
                                                   const PhaseRecord& phases,
                                                   std::size_t k) {
    const Matrix m = uneven_map(probabilities, result, frame, phases, k);
    const Eigen::Index n = m.rows();
    const Matrix identity = Matrix::Identity(n, n);

    DefectDecomposition d;
    d.left_direct = m * m.adjoint() - identity;
    d.right_direct = m.adjoint() * m - identity;

    // phi_k = U(t)|k(0)>, psi_k = e^{-i f_k}|k(t)>.
    const Matrix phi = result.unitaries[k] * frame.vectors[0];
    Matrix psi(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        psi.col(j) = std::exp(Complex(0.0, -phases.total(k, j))) * frame.vectors[k].col(j);
    }

    d.left_closed = Matrix::Zero(n, n);
    d.right_closed = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Matrix big_d = -identity;
        Matrix big_dc = -identity;
        for (Eigen::Index kk = 0; kk < n; ++kk) {
            big_d += (probabilities(i) / probabilities(kk)) * phi.col(kk) * phi.col(kk).adjoint();
            big_dc += (probabilities(kk) / probabilities(i)) * psi.col(kk) * psi.col(kk).adjoint();
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            d.left_closed(i, j) =
                std::sqrt(probabilities(j) / probabilities(i)) * psi.col(j).dot(big_d * psi.col(i));
            d.right_closed(i, j) =
                std::sqrt(probabilities(i) / probabilities(j)) * phi.col(j).dot(big_dc * phi.col(i));
        }
    }
    return d;
}

EvenEmbedding embed_even(const Eigen::VectorXd& probabilities, double tolerance) {
    check_probabilities(probabilities);
    if (!(tolerance >= 0.0)) {
        throw ContractError("embed_even: tolerance must be nonnegative");
    }
    for (Eigen::Index n = 0; n < probabilities.size(); ++n) {
        if (probabilities(n) <= 0.0) {
            throw ContractError("embed_even: probabilities must be strictly positive");
        }
    }
    constexpr int kMaxDenominator = 10000;
    double best = std::numeric_limits<double>::infinity();
    for (int d = 1; d <= kMaxDenominator; ++d) {
        EvenEmbedding emb;
        emb.denominator = d;
        emb.multiplicities.resize(probabilities.size());
        long long total = 0;
        double residual = 0.0;
        bool feasible = true;
        for (Eigen::Index n = 0; n < probabilities.size(); ++n) {
            const long long kn = std::llround(probabilities(n) * d);
            if (kn < 1) {
                feasible = false;
                break;
            }
            emb.multiplicities[n] = static_cast<int>(kn);
            total += kn;
            residual = std::max(residual,
                                std::abs(probabilities(n) - static_cast<double>(kn) / d));
        }
        if (!feasible || total != d) {
            continue;
        }
        best = std::min(best, residual);
        if (residual <= tolerance) {
            emb.max_residual = residual;
            return emb;
        }
    }
    std::ostringstream msg;
    msg << "embed_even: no denominator <= " << kMaxDenominator << " reaches tolerance "
        << tolerance << " (best achievable residual " << best << ")";
    throw ContractError(msg.str());
}

} // namespace easta
