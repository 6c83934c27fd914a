#include "easta/propagation.hpp"

#include <algorithm>
#include <sstream>

namespace easta {

namespace {
constexpr double kStepDefectLimit = 1e-8;
}

PropagationResult propagate(const HamiltonianPath& path) {
    if (path.times.size() < 3) {
        throw ContractError("propagate: path needs at least 2 steps");
    }
    PropagationResult result;
    result.times = path.times;
    result.dim = path.dim;
    result.unitaries.reserve(path.times.size());
    result.unitaries.push_back(Matrix::Identity(path.dim, path.dim));

    const double dt = path.dt();
    for (std::size_t k = 0; k + 1 < path.times.size(); ++k) {
        Matrix u = unitary_step(path.midpoint(k), dt) * result.unitaries.back();
        const double defect = unitarity_defect(u);
        if (defect > kStepDefectLimit) {
            std::ostringstream msg;
            msg << "propagate: unitarity defect " << defect << " at step " << k + 1
                << " exceeds " << kStepDefectLimit
                << "; the grid is too coarse for this drive, increase steps";
            throw ConsistencyError(msg.str());
        }
        result.max_unitarity_defect = std::max(result.max_unitarity_defect, defect);
        result.unitaries.push_back(std::move(u));
    }
    return result;
}

Vector evolved_eigenstate(const PropagationResult& result, const EigenFrame& frame,
                          Eigen::Index n, std::size_t k) {
    if (k >= result.points() || n < 0 || n >= frame.dim) {
        throw ContractError("evolved_eigenstate: index out of range");
    }
    if (result.dim != frame.dim) {
        throw ContractError("evolved_eigenstate: frame and propagation dimensions differ");
    }
    Vector v = result.unitaries[k] * frame.vectors[0].col(n);
    return v / v.norm();
}

} // namespace easta
