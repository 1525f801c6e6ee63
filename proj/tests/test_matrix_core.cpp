#include <doctest.h>

#include "support.hpp"

using namespace lsz;
using lsz::test::diag;
using lsz::test::dist;
using lsz::test::pauli_x;

TEST_CASE("kron of identities and diagonals")
{
    CHECK(dist(kron(identity(2), identity(2)), identity(4)) == 0.0);
    CHECK(dist(kron(diag({1, 2}), diag({3, 4})), diag({3, 4, 6, 8})) == 0.0);
    Vector e0 = Vector::Zero(4);
    e0(0) = 1.0;
    const Vector image = kron(pauli_x(), pauli_x()) * e0;
    Vector expected = Vector::Zero(4);
    expected(3) = 1.0;
    CHECK((image - expected).norm() == 0.0);
}

TEST_CASE("kron shape and index layout")
{
    Rng rng(3);
    const Matrix a = random_complex_gaussian(2, 3, rng);
    const Matrix b = random_complex_gaussian(4, 5, rng);
    const Matrix k = kron(a, b);
    CHECK(k.rows() == 8);
    CHECK(k.cols() == 15);
    CHECK(std::abs(k(1 * 4 + 2, 2 * 5 + 3) - a(1, 2) * b(2, 3)) < 1e-15);
}

TEST_CASE("vec stacks rows")
{
    Vector expected = Vector::Zero(4);
    expected(1) = 1.0;
    CHECK((vec(lsz::test::ket_bra(2, 0, 1)) - expected).norm() == 0.0);

    Vector id(4);
    id << 1, 0, 0, 1;
    CHECK((vec(identity(2)) - id).norm() == 0.0);
}

TEST_CASE("vec(ABC) = (A kron C^T) vec(B)")
{
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Index d = 2 + trial % 3;
        const Matrix a = random_complex_gaussian(d, d, rng);
        const Matrix b = random_complex_gaussian(d, d, rng);
        const Matrix c = random_complex_gaussian(d, d, rng);
        CHECK((vec(a * b * c) - kron(a, c.transpose()) * vec(b)).norm() <= 1e-12 * (1.0 + (a * b * c).norm()));
    }
}

TEST_CASE("unvec inverts vec and rejects bad lengths")
{
    Rng rng(5);
    const Matrix a = random_complex_gaussian(3, 2, rng);
    CHECK(dist(unvec(vec(a), 3, 2), a) == 0.0);
    CHECK_THROWS_AS(unvec(Vector::Zero(5), 2, 2), std::invalid_argument);
}

TEST_CASE("operator norm and hermiticity")
{
    CHECK(operator_norm(diag({1, -3, 2})) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(is_hermitian(pauli_x()));
    Matrix nonHermitian = lsz::test::ket_bra(2, 0, 1);
    CHECK_FALSE(is_hermitian(nonHermitian));
    CHECK(hermiticity_residual(nonHermitian) == doctest::Approx(1.0));
}

TEST_CASE("eig_hermitian on the reference examples")
{
    const auto d01 = eig_hermitian(diag({0, 1}));
    REQUIRE(d01.size() == 2);
    CHECK(d01.eigenvalues[0] == doctest::Approx(0.0));
    CHECK(d01.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(dist(d01.projectors[0], diag({1, 0})) < 1e-12);

    const auto id = eig_hermitian(identity(2));
    REQUIRE(id.size() == 1);
    CHECK(id.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(dist(id.projectors[0], identity(2)) < 1e-12);
    CHECK(id.rank(0) == 2);

    const auto x = eig_hermitian(pauli_x());
    REQUIRE(x.size() == 2);
    CHECK(x.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(x.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(dist(x.projectors[0], 0.5 * (identity(2) - pauli_x())) < 1e-12);
    CHECK(dist(x.projectors[1], 0.5 * (identity(2) + pauli_x())) < 1e-12);
}

TEST_CASE("eig_hermitian invariants on random matrices with degeneracies")
{
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const Index d = 2 + trial % 5;
        const Matrix u = random_unitary(d, rng);
        Eigen::VectorXd values(d);
        for (Index i = 0; i < d; ++i) values(i) = static_cast<double>((i * 7 + trial) % 3);  // forced repeats
        const Matrix a = u * values.cast<Complex>().asDiagonal() * u.adjoint();
        const auto e = eig_hermitian(0.5 * (a + a.adjoint()));
        Matrix sum = Matrix::Zero(d, d);
        for (std::size_t k = 0; k < e.size(); ++k) {
            const Matrix& p = e.projectors[k];
            CHECK(hermiticity_residual(p) <= 1e-10);
            CHECK(dist(p * p, p) <= 1e-10);
            for (std::size_t l = k + 1; l < e.size(); ++l) CHECK(operator_norm(p * e.projectors[l]) <= 1e-10);
            if (k + 1 < e.size()) CHECK(e.eigenvalues[k + 1] - e.eigenvalues[k] > e.groupingTolerance);
            sum += p;
        }
        CHECK(dist(sum, identity(d)) <= 1e-10);
        CHECK(dist(e.reconstruct(), a) <= 1e-9);
    }
}

TEST_CASE("eig_hermitian rejects non-hermitian input with its residual")
{
    Matrix a = lsz::test::ket_bra(2, 0, 1);
    try {
        eig_hermitian(a);
        FAIL("expected NonHermitianError");
    } catch (const NonHermitianError& e) {
        CHECK(e.residual() == doctest::Approx(1.0));
    }
}

TEST_CASE("matfunc")
{
    const Matrix a = diag({0, 1});
    const auto e = eig_hermitian(a);
    CHECK(dist(matfunc(e, [](double v) { return v; }), a) < 1e-14);
    CHECK(dist(matfunc(e, [](double v) { return std::exp(v); }), diag({1.0, std::exp(1.0)})) < 1e-14);
    CHECK_THROWS_AS(matfunc(e, [](double v) { return std::log(v); }), std::domain_error);

    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix g = random_complex_gaussian(4, 4, rng);
        const Matrix psd = g * g.adjoint();
        const Matrix root = matfunc(eig_hermitian(psd), [](double v) { return std::sqrt(std::max(0.0, v)); });
        CHECK(dist(root * root, psd) <= 1e-10 * (1.0 + operator_norm(psd)));
    }
}

TEST_CASE("make_decomposition sorts and merges")
{
    const auto e = make_decomposition({0.5, 0.1, 0.5 + 1e-12}, {diag({1, 0, 0}), diag({0, 1, 0}), diag({0, 0, 1})});
    REQUIRE(e.size() == 2);
    CHECK(e.eigenvalues[0] == doctest::Approx(0.1));
    CHECK(e.rank(1) == 2);
}

TEST_CASE("superoperator_matrix matches the vec identity")
{
    Rng rng(29);
    const Matrix x = random_complex_gaussian(3, 3, rng);
    const Matrix y = random_complex_gaussian(3, 3, rng);
    const Matrix m = superoperator_matrix(3, [&](const Matrix& a) { return Matrix(x * a * y); });
    CHECK(dist(m, kron(x, y.transpose())) <= 1e-12);
}

TEST_CASE("hermitian_eigenvalues ascending")
{
    const auto v = hermitian_eigenvalues(diag({3, -1, 2}));
    REQUIRE(v.size() == 3);
    CHECK(v[0] == doctest::Approx(-1));
    CHECK(v[1] == doctest::Approx(2));
    CHECK(v[2] == doctest::Approx(3));
}
