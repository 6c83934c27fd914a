#pragma once

#include <cstddef>
#include <vector>

#include "easta/model.hpp"
#include "easta/numerics.hpp"
#include "easta/propagation.hpp"

namespace easta {

/// Accumulated adiabatic phases f_n(t_k), hbar = 1.
///
/// f_n combines the dynamical part (running trapezoid of E_n) with the
/// geometric part (running trapezoid of Im<n|d_t n>, the connection of the
/// gauge-fixed frame). In the parallel-transport gauge the geometric part
/// vanishes for any Hamiltonian; it is computed explicitly regardless so a
/// frame in any other gauge still yields the correct phases.
struct PhaseRecord {
    std::vector<RealVector> dynamical;  // [node](level)
    std::vector<RealVector> geometric;
    // Largest |Re<n|d_t n>| seen while building the record. The exact
    // derivative of a normalized family is tangent; this radial residual is
    // pure finite-difference noise, O(dt^2), and is kept as a diagnostic.
    double max_radial_residual = 0.0;

    double total(std::size_t k, Eigen::Index n) const {
        return dynamical[k](n) + geometric[k](n);
    }
    RealVector totals(std::size_t k) const { return dynamical[k] + geometric[k]; }
};

PhaseRecord adiabatic_phases(const EigenFrame& frame);

/// Counterdiabatic field at node k:
///   H_CD = i sum_n (|d_t n><n| - <n|d_t n> |n><n|),
/// with d_t from central differences (one-sided second-order at the grid
/// ends). The assembled matrix is symmetrized; the pre-symmetrization
/// defect, a discretization diagnostic, is written to *presym_defect when
/// given.
Matrix cd_hamiltonian(const EigenFrame& frame, std::size_t k,
                      double* presym_defect = nullptr);

/// Transitionless transport unitary sum_n e^{-i f_n(t_k)} |n(t_k)><n(t_0)|.
Matrix cd_unitary(const EigenFrame& frame, const PhaseRecord& phases, std::size_t k);

/// The unique environment unitary that steers every branch of an even
/// branching state through the adiabatic manifold:
///   U'_{m,n} = e^{-i f_m(t_k)} <n(t_0)| U(t_k)^dag |m(t_k)>.
/// Unitarity rests on the branch basis being complete, so the branch count
/// equals the system dimension here by construction.
Matrix easta_unitary(const PropagationResult& result, const EigenFrame& frame,
                     const PhaseRecord& phases, std::size_t k);

/// Embed an N x N environment unitary into a d_E-dimensional register
/// (d_E >= N): env_basis carries the branch subspace, the orthogonal
/// complement is left untouched.
Matrix embed_env_unitary(const Matrix& u_prime, const Matrix& env_basis);

/// Driving field on the environment that generates U'(t).
///
/// Primary route: the closed form sum_{i,j} <psi_j|H_CD|psi_i> |E_i><E_j|
/// with psi_i = e^{-i f_i}|i(t)>. Cross-check route: i (dU'/dt) U'^dag by
/// finite differences of easta_unitary. The two must agree within
/// route_tol * (1 + ||H_env||); disagreement raises ConsistencyError. The
/// measured disagreement is written to *route_disagreement when given.
Matrix env_hamiltonian(const PropagationResult& result, const EigenFrame& frame,
                       const PhaseRecord& phases, std::size_t k,
                       double route_tol = 5e-4, double* route_disagreement = nullptr);

/// Unitary change of frame S with S conj(H_CD) S^dag = H_env (entrywise
/// conjugate). Row j is the transported branch state psi_j(t_k) transposed
/// without conjugation; for real frames this is the plain bra.
Matrix similarity_map(const EigenFrame& frame, const PhaseRecord& phases, std::size_t k);

struct EnvControlMap {
    Matrix matrix;
    double target_gram_defect = 0.0;  // max-entry |T^dag T - I|
    double unitarity_defect = 0.0;    // ||U' U'^dag - I||
};

/// Environment unitary realizing an arbitrary control target: given desired
/// states kappa_m(t_k), U'_{m,n} = <n(t_0)| U(t_k)^dag |kappa_m(t_k)>.
/// Orthonormal targets give a unitary; non-orthonormal targets produce a
/// warning and a reported defect rather than an error.
EnvControlMap generalized_env_unitary(const PropagationResult& result,
                                      const EigenFrame& frame,
                                      const std::vector<Vector>& targets,
                                      std::size_t k);

/// Instantaneous control norms and the running cost
/// C(t_k) = (1/tau) * trapezoid of ||H|| up to t_k.
struct CostCurve {
    std::vector<double> times;
    RealVector instantaneous;
    RealVector cumulative;
    double tau = 0.0;

    double total() const { return cumulative(cumulative.size() - 1); }
};

CostCurve process_cost(const RealVector& norm_samples, double dt, double tau);

} // namespace easta
