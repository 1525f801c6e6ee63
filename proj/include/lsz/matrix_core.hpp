// Dense complex linear algebra shared by every other module.
//
// Vectorization convention (used everywhere in the library):
//
//     vec(|i><j|) = |i> (x) |j>
//
// i.e. row-major stacking, so that vec(A B C) = (A (x) C^T) vec(B).  All
// superoperator matrices (Lindbladians, discriminants, Omega powers) are
// expressed in this basis; column i*d + j of such a matrix is the image of
// the matrix unit |i><j|.

#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lsz {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kDefaultGroupingTolerance = 1e-9;

/// Raised when a routine that needs a hermitian matrix receives one that is
/// not; carries ||A - A^dagger||.
class NonHermitianError : public std::invalid_argument {
public:
    NonHermitianError(const std::string& what, double residual)
        : std::invalid_argument(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

Matrix identity(Index d);

/// Tensor product; (A (x) B)(i*rB + k, j*cB + l) = A(i,j) B(k,l).
Matrix kron(const Matrix& a, const Matrix& b);

Vector vec(const Matrix& a);
Matrix unvec(const Vector& v, Index rows, Index cols);

/// Largest singular value.
double operator_norm(const Matrix& a);

/// ||A - A^dagger|| in operator norm.
double hermiticity_residual(const Matrix& a);

/// ||A - A^dagger|| <= 1e-12 * max(1, ||A||).
bool is_hermitian(const Matrix& a);

/// Materializes a linear map on d x d matrices as a d^2 x d^2 matrix in the
/// vec basis above.
Matrix superoperator_matrix(Index d, const std::function<Matrix(const Matrix&)>& map);

/// Eigenvalues of a hermitian matrix merged into degenerate clusters.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;  // strictly increasing
    std::vector<Matrix> projectors;   // orthogonal, one per eigenvalue
    double groupingTolerance = kDefaultGroupingTolerance;

    Index dimension() const;
    std::size_t size() const { return eigenvalues.size(); }
    Index rank(std::size_t k) const;
    Matrix reconstruct() const;
};

/// Eigenvalues closer than `groupingTolerance` (chained) share one projector.
/// Throws NonHermitianError if A fails the hermiticity check.
SpectralDecomposition eig_hermitian(const Matrix& a,
                                    double groupingTolerance = kDefaultGroupingTolerance);

/// Builds a decomposition from explicit (value, projector) pairs, sorting and
/// merging values that fall within the tolerance.
SpectralDecomposition make_decomposition(std::vector<double> values, std::vector<Matrix> projectors,
                                         double groupingTolerance = kDefaultGroupingTolerance);

/// sum_k f(e_k) P_k.  Throws std::domain_error if f is not finite at some e_k.
Matrix matfunc(const SpectralDecomposition& d, const std::function<double(double)>& f);

/// Plain (unclustered) eigenvalues of a hermitian matrix, ascending.
std::vector<double> hermitian_eigenvalues(const Matrix& a);

}  // namespace lsz
