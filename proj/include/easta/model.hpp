#pragma once

#include <functional>
#include <string>
#include <vector>

#include "easta/numerics.hpp"

namespace easta {

enum class ScheduleKind { CosineSquared, Linear, Constant, CustomSampled };

ScheduleKind schedule_kind_from_string(const std::string& name);
std::string to_string(ScheduleKind kind);

// Drive field J(t) on [0, tau]. The cosine-squared kind is
// J(t) = B cos^2(pi t / 2 tau), so J(0) = B and J(tau) = 0.
struct DriveSchedule {
    ScheduleKind kind = ScheduleKind::CosineSquared;
    double B = 1.0;
    double tau = 1.0;
    std::vector<double> samples;  // CustomSampled only: uniform over [0, tau]
};

// J(t) for the given kind; throws ContractError outside [0, tau].
double schedule_value(const DriveSchedule& s, double t);

// (B/2) sigma_x + (J/2) sigma_z
Matrix qubit_hamiltonian(double B, double J);

// Uniform time grid t_0 = 0 ... t_K with one Hermitian sample per node.
struct HamiltonianPath {
    std::vector<double> times;
    std::vector<Matrix> samples;
    Eigen::Index dim = 0;
    // Optional midpoint evaluator; when absent, midpoints are sample
    // averages (custom-sampled drives).
    std::function<Matrix(double)> builder;

    std::size_t steps() const { return times.size() - 1; }
    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
    double t_end() const { return times.back(); }
    Matrix midpoint(std::size_t k) const;  // H at t_k + dt/2
};

HamiltonianPath build_path(const DriveSchedule& s, std::size_t steps);
HamiltonianPath build_path(const std::function<Matrix(double)>& builder,
                           double t_end, std::size_t steps);

// Instantaneous eigensystem over the grid. Eigenvector phases are fixed by
// discrete parallel transport: <n(t_k)|n(t_{k+1})> real positive, with the
// first node pinned by making each column's largest-magnitude entry real
// positive.
struct EigenFrame {
    std::vector<double> times;
    std::vector<RealVector> energies;  // ascending per node
    std::vector<Matrix> vectors;       // gauge-fixed orthonormal columns
    double gap_min = 0.0;
    Eigen::Index dim = 0;

    std::size_t points() const { return times.size(); }
    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

EigenFrame eigenframe(const HamiltonianPath& path);

// Same, applying the given unit-modulus phases to the first-node
// eigenvectors before transport. Downstream observables must not depend on
// this choice; the verify suite re-runs with a rotated convention.
EigenFrame eigenframe(const HamiltonianPath& path, const Vector& first_node_phases);

} // namespace easta
