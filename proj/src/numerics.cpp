#include "easta/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace easta {

double hermiticity_defect(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw ContractError("hermiticity_defect: matrix must be square");
    }
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw ContractError("unitarity_defect: matrix must be square");
    }
    const Matrix gram = a * a.adjoint();
    return spectral_norm(gram - Matrix::Identity(a.rows(), a.cols()));
}

bool is_hermitian(const Matrix& a, double tol) {
    return a.rows() == a.cols() && hermiticity_defect(a) <= tol;
}

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    // Largest singular value via the Gram matrix; fine at these dimensions.
    const Matrix gram = a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw ConsistencyError("spectral_norm: eigensolver failed");
    }
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

EigResult hermitian_eig(const Matrix& h) {
    if (h.rows() != h.cols()) {
        throw ContractError("hermitian_eig: matrix must be square");
    }
    const double defect = hermiticity_defect(h);
    if (defect > kHermitianTol) {
        std::ostringstream msg;
        msg << "hermitian_eig: input is not Hermitian (max-entry defect " << defect << ")";
        throw ContractError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) {
        throw ConsistencyError("hermitian_eig: eigensolver failed to converge");
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

Matrix unitary_step(const Matrix& h, double dt) {
    if (!std::isfinite(dt)) {
        throw ContractError("unitary_step: dt must be finite");
    }
    const EigResult eig = hermitian_eig(h);
    Vector phases(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        phases(i) = std::exp(Complex(0.0, -eig.values(i) * dt));
    }
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

double integrate_grid(const std::vector<double>& samples, double dt) {
    if (samples.size() < 2) {
        throw ContractError("integrate_grid: need at least 2 samples");
    }
    double acc = 0.0;
    for (std::size_t k = 1; k < samples.size(); ++k) {
        acc += 0.5 * dt * (samples[k - 1] + samples[k]);
    }
    return acc;
}

double integrate_grid(const RealVector& samples, double dt) {
    std::vector<double> v(samples.data(), samples.data() + samples.size());
    return integrate_grid(v, dt);
}

RealVector cumulative_trapezoid(const RealVector& samples, double dt) {
    if (samples.size() < 2) {
        throw ContractError("cumulative_trapezoid: need at least 2 samples");
    }
    RealVector out(samples.size());
    out(0) = 0.0;
    for (Eigen::Index k = 1; k < samples.size(); ++k) {
        out(k) = out(k - 1) + 0.5 * dt * (samples(k - 1) + samples(k));
    }
    return out;
}

double smallest_gap(const RealVector& ascending) {
    if (ascending.size() < 2) {
        return std::numeric_limits<double>::infinity();
    }
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 1; i < ascending.size(); ++i) {
        gap = std::min(gap, ascending(i) - ascending(i - 1));
    }
    return gap;
}

} // namespace easta
