#pragma once

#include <cstddef>
#include <vector>

#include "easta/model.hpp"
#include "easta/numerics.hpp"
#include "easta/propagation.hpp"
#include "easta/shortcuts.hpp"

namespace easta {

/// Joint system-environment state of the form
///   |psi_SE> = sum_n sqrt(p_n) |n> (x) |E_n>,
/// with orthonormal environment records per branch. "Even" when every
/// p_n = 1/N. The joint amplitude vector is system-major:
/// joint[s * d_E + e].
struct BranchingState {
    Eigen::VectorXd probabilities;  // N entries, sum 1
    Matrix system_kets;             // d_S x N columns |n>
    Matrix environment_kets;        // d_E x N orthonormal columns |E_n>
    Vector joint;                   // d_S * d_E amplitudes
    bool even = false;

    Eigen::Index branches() const { return probabilities.size(); }
    Eigen::Index dim_system() const { return system_kets.rows(); }
    Eigen::Index dim_environment() const { return environment_kets.rows(); }
};

BranchingState make_branching(const Eigen::VectorXd& probabilities,
                              const Matrix& system_kets,
                              const Matrix& environment_kets);

/// Even state over the frame's initial eigenbasis with a computational
/// environment register of dimension dim_env >= d_S.
BranchingState even_branching(const EigenFrame& frame, Eigen::Index dim_env);

/// (U_S (x) U_E) applied to a system-major joint vector.
Vector apply_joint(const Matrix& u_system, const Matrix& u_env, const Vector& joint);

/// Partial trace over the environment of |joint><joint|.
Matrix reduced_system_state(const Vector& joint, Eigen::Index d_s, Eigen::Index d_e);

/// |<n(t_k)| U(t_k) |n(t_0)>|: how far the bare drive strays from the
/// adiabatic manifold on level n.
double bare_branch_overlap(const PropagationResult& result, const EigenFrame& frame,
                           Eigen::Index n, std::size_t k);

/// Overlap of branch n of an evolved joint state with the transported
/// eigenstate |n(t_k)>, extracted by projecting the environment onto
/// |E_n(0)>. Equals one exactly when the branch rides the adiabatic
/// manifold.
double easta_branch_overlap(const Vector& evolved_joint, const BranchingState& state,
                            const EigenFrame& frame, Eigen::Index n, std::size_t k);

/// The candidate environment map for arbitrary branch probabilities:
///   M_{m,n} = sqrt(p_m / p_n) e^{-i f_m} <n(t_0)| U(t_k)^dag |m(t_k)>.
/// Generally non-unitary; reduces to easta_unitary exactly for even p.
/// Requires every p_n > 0 and branch count equal to the system dimension.
Matrix uneven_map(const Eigen::VectorXd& probabilities, const PropagationResult& result,
                  const EigenFrame& frame, const PhaseRecord& phases, std::size_t k);

/// Direct unitarity defects of M next to their closed forms:
///   M M^dag - I = sum_{i,j} sqrt(p_j/p_i) <psi_j| D_i |psi_i> |E_i><E_j|,
///       D_i = sum_k (p_i/p_k) |phi_k><phi_k| - I,
///   M^dag M - I = sum_{i,j} sqrt(p_i/p_j) <phi_j| Dc_i |phi_i> |E_i><E_j|,
///       Dc_i = sum_k (p_k/p_i) |psi_k><psi_k| - I,
/// with phi_k = U(t_k)|k(0)> and psi_k = e^{-i f_k}|k(t_k)>. The direct and
/// closed forms agree to discretization accuracy; both vanish for even p.
struct DefectDecomposition {
    Matrix left_direct;   // M M^dag - I
    Matrix right_direct;  // M^dag M - I
    Matrix left_closed;
    Matrix right_closed;
};

DefectDecomposition unitarity_defect_decomposition(const Eigen::VectorXd& probabilities,
                                                   const PropagationResult& result,
                                                   const EigenFrame& frame,
                                                   const PhaseRecord& phases,
                                                   std::size_t k);

/// Smallest denominator D <= 10^4 with p_n ~ k_n / D within tolerance.
/// The even state over D fine-grained branches (branch n repeated k_n
/// times) then represents the original uneven state.
struct EvenEmbedding {
    int denominator = 0;
    std::vector<int> multiplicities;
    double max_residual = 0.0;
};

EvenEmbedding embed_even(const Eigen::VectorXd& probabilities, double tolerance);

} // namespace easta
