#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "easta/errors.hpp"

namespace easta {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Contract tolerances shared across the library (hbar = 1 everywhere).
inline constexpr double kHermitianTol = 1e-12;  // max-entry |A - A^dag|
inline constexpr double kUnitaryTol = 1e-10;    // ||A A^dag - I||

// max-entry |A - A^dag|
double hermiticity_defect(const Matrix& a);

// ||A A^dag - I|| in the spectral norm
double unitarity_defect(const Matrix& a);

bool is_hermitian(const Matrix& a, double tol = kHermitianTol);

// Largest singular value. For Hermitian A this is max |eigenvalue|.
double spectral_norm(const Matrix& a);

struct EigResult {
    RealVector values;  // ascending
    Matrix vectors;     // orthonormal columns, vectors.col(k) <-> values[k]
};

// Dense Hermitian eigendecomposition. Throws ContractError if the input is
// not Hermitian within kHermitianTol.
EigResult hermitian_eig(const Matrix& h);

// exp(-i H dt) for Hermitian H, via the eigendecomposition. Exactly unitary
// up to roundoff; the dimensions here never warrant scaling-and-squaring.
Matrix unitary_step(const Matrix& h, double dt);

// Composite trapezoid of >= 2 uniformly spaced samples.
double integrate_grid(const std::vector<double>& samples, double dt);
double integrate_grid(const RealVector& samples, double dt);

// Running trapezoid: out[k] = integral of samples[0..k], out[0] = 0.
RealVector cumulative_trapezoid(const RealVector& samples, double dt);

// Smallest gap between adjacent ascending eigenvalues; +inf for a single
// level.
double smallest_gap(const RealVector& ascending);

// Gap below this is reported degenerate; callers decide whether to error.
inline double degeneracy_threshold(double h_norm) { return 1e-9 * (1.0 + h_norm); }

} // namespace easta
