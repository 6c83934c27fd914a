#pragma once

#include <cmath>

#include "easta/branching.hpp"
#include "easta/experiments.hpp"

namespace easta::testing {

// Fine-grid (K = 20000) reference value for the minimum ground-level overlap
// of the bare cosine drive at B = 1, tau = 1, frozen as the regression
// baseline. The default K = 2000 run lands within ~2e-9 of it.
inline constexpr double kBareOverlapMinReference = 0.928282725867;

inline const Pipeline& default_pipeline() {
    static const Pipeline pipe = run_pipeline(DriveSchedule{}, 2000);
    return pipe;
}

// Independent Kronecker products for joint-state oracles; kept separate from
// the library's reshaped application path on purpose.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

inline Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix pauli_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

} // namespace easta::testing
