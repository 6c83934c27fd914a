#pragma once

#include <string>
#include <vector>

#include "easta/model.hpp"
#include "easta/numerics.hpp"

namespace easta {

// Exact time-ordered evolution under the bare drive, one unitary per grid
// node, U(t_0) = I.
struct PropagationResult {
    std::vector<double> times;
    std::vector<Matrix> unitaries;
    Eigen::Index dim = 0;
    double max_unitarity_defect = 0.0;
    std::string method = "midpoint-exponential";

    std::size_t points() const { return times.size(); }
    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

// Midpoint-exponential stepping (commutator-free, second order):
// U(t_{k+1}) = exp(-i H(t_k + dt/2) dt) U(t_k). The accumulated unitarity
// defect is monitored and raises ConsistencyError instead of being polished
// away; a growing defect means the grid is too coarse for the drive.
PropagationResult propagate(const HamiltonianPath& path);

// U(t_k) |n(t_0)>, normalized.
Vector evolved_eigenstate(const PropagationResult& result, const EigenFrame& frame,
                          Eigen::Index n, std::size_t k);

} // namespace easta
