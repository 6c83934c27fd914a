#include <doctest.h>

#include <cmath>

#include "easta/experiments.hpp"
#include "easta/numerics.hpp"
#include "test_helpers.hpp"

using namespace easta;
using namespace easta::testing;

TEST_CASE("hermitian_eig on Pauli-z") {
    const EigResult eig = hermitian_eig(pauli_z());
    CHECK(eig.values(0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(eig.values(1) == doctest::Approx(1.0).epsilon(1e-14));
    // eigenvalue -1 belongs to |1>, +1 to |0>
    CHECK(std::abs(eig.vectors(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(eig.vectors(0, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eig flags the degenerate identity") {
    const Matrix id = Matrix::Identity(2, 2);
    const EigResult eig = hermitian_eig(id);
    CHECK(eig.values(0) == doctest::Approx(1.0));
    CHECK(eig.values(1) == doctest::Approx(1.0));
    CHECK(smallest_gap(eig.values) < degeneracy_threshold(1.0));
}

TEST_CASE("hermitian_eig matches the two-level closed form at the start of the drive") {
    const EigResult eig = hermitian_eig(qubit_hamiltonian(1.0, 1.0));
    const double level = std::sqrt(2.0) / 2.0;
    CHECK(eig.values(0) == doctest::Approx(-level).epsilon(1e-12));
    CHECK(eig.values(1) == doctest::Approx(level).epsilon(1e-12));
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
    Matrix a(2, 2);
    a << 1, 2, 3, 4;
    CHECK_THROWS_AS(hermitian_eig(a), ContractError);
}

TEST_CASE("eigendecomposition reconstructs random Hermitians") {
    NormalStream rng(11);
    for (Eigen::Index dim = 2; dim <= 8; ++dim) {
        const Matrix h = random_hermitian(dim, rng);
        const EigResult eig = hermitian_eig(h);
        const Matrix recon =
            eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
        CHECK(spectral_norm(recon - h) <= 1e-9 * (1.0 + spectral_norm(h)));
        const double ortho =
            (eig.vectors.adjoint() * eig.vectors - Matrix::Identity(dim, dim))
                .cwiseAbs()
                .maxCoeff();
        CHECK(ortho <= 1e-10);
        // residual per eigenpair
        for (Eigen::Index n = 0; n < dim; ++n) {
            const Vector r = h * eig.vectors.col(n) - eig.values(n) * eig.vectors.col(n);
            CHECK(r.norm() <= 1e-10 * spectral_norm(h) + 1e-12);
        }
    }
}

TEST_CASE("unitary_step basics") {
    const Matrix zero = Matrix::Zero(2, 2);
    CHECK(spectral_norm(unitary_step(zero, 0.73) - Matrix::Identity(2, 2)) <= 1e-14);

    // exp(-i pi sigma_z) = -I
    const Matrix u = unitary_step(pauli_z(), 3.14159265358979323846);
    CHECK(spectral_norm(u + Matrix::Identity(2, 2)) <= 1e-12);

    CHECK_THROWS_AS(unitary_step(pauli_z(), std::nan("")), ContractError);
}

TEST_CASE("unitary_step stays unitary and composes on commuting arguments") {
    NormalStream rng(21);
    for (int rep = 0; rep < 8; ++rep) {
        const Matrix h = random_hermitian(3 + rep % 3, rng);
        const Matrix u = unitary_step(h, 0.19);
        CHECK(unitarity_defect(u) <= 1e-12);
        const Matrix ab = unitary_step(h, 0.37) * unitary_step(h, 0.41);
        CHECK(spectral_norm(ab - unitary_step(h, 0.78)) <= 1e-10);
    }
}

TEST_CASE("spectral_norm reference values") {
    CHECK(spectral_norm(Matrix::Identity(5, 5)) == doctest::Approx(1.0).epsilon(1e-13));
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = -3.0;
    CHECK(spectral_norm(d) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(spectral_norm(Complex(-0.4, 0.0) * pauli_y()) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("spectral_norm is submultiplicative on random pairs") {
    NormalStream rng(31);
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix a = random_hermitian(4, rng);
        const Matrix b = random_hermitian(4, rng);
        CHECK(spectral_norm(a * b) <= spectral_norm(a) * spectral_norm(b) + 1e-10);
    }
}

TEST_CASE("integrate_grid trapezoid") {
    SUBCASE("constant") {
        const std::vector<double> ones(11, 1.0);
        CHECK(integrate_grid(ones, 0.1) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("linear is exact") {
        std::vector<double> f(1001);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>(i) / 1000.0;
        CHECK(integrate_grid(f, 1.0 / 1000.0) == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("cos^2 against the analytic antiderivative") {
        // integral of cos^2(pi t / 2) over [0, 1] = 1/2
        std::vector<double> f(2001);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double t = static_cast<double>(i) / 2000.0;
            const double c = std::cos(1.5707963267948966 * t);
            f[i] = c * c;
        }
        CHECK(std::abs(integrate_grid(f, 1.0 / 2000.0) - 0.5) <= 1e-6);
    }
    SUBCASE("too few samples") {
        CHECK_THROWS_AS(integrate_grid(std::vector<double>{1.0}, 0.1), ContractError);
    }
}

TEST_CASE("cumulative_trapezoid matches integrate_grid at the end") {
    RealVector f(101);
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        f(i) = std::sin(0.05 * static_cast<double>(i));
    }
    const RealVector c = cumulative_trapezoid(f, 0.05);
    CHECK(c(0) == 0.0);
    CHECK(c(f.size() - 1) == doctest::Approx(integrate_grid(f, 0.05)).epsilon(1e-14));
}
