#include "lsz/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace lsz {

Matrix identity(Index d) { return Matrix::Identity(d, d); }

Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Vector vec(const Matrix& a)
{
    Vector v(a.size());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
    }
    return v;
}

Matrix unvec(const Vector& v, Index rows, Index cols)
{
    if (rows <= 0 || cols <= 0 || v.size() != rows * cols) {
        std::ostringstream msg;
        msg << "unvec: vector of length " << v.size() << " cannot be reshaped to " << rows << "x" << cols;
        throw std::invalid_argument(msg.str());
    }
    Matrix a(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) a(i, j) = v(i * cols + j);
    }
    return a;
}

double operator_norm(const Matrix& a)
{
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

double hermiticity_residual(const Matrix& a)
{
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    return operator_norm(a - a.adjoint());
}

bool is_hermitian(const Matrix& a)
{
    if (a.rows() != a.cols()) return false;
    return hermiticity_residual(a) <= 1e-12 * std::max(1.0, operator_norm(a));
}

Matrix superoperator_matrix(Index d, const std::function<Matrix(const Matrix&)>& map)
{
    Matrix out(d * d, d * d);
    Matrix unit = Matrix::Zero(d, d);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            unit(i, j) = 1.0;
            out.col(i * d + j) = vec(map(unit));
            unit(i, j) = 0.0;
        }
    }
    return out;
}

Index SpectralDecomposition::dimension() const
{
    return projectors.empty() ? 0 : projectors.front().rows();
}

Index SpectralDecomposition::rank(std::size_t k) const
{
    return static_cast<Index>(std::llround(projectors.at(k).trace().real()));
}

Matrix SpectralDecomposition::reconstruct() const
{
    Matrix out = Matrix::Zero(dimension(), dimension());
    for (std::size_t k = 0; k < size(); ++k) out += eigenvalues[k] * projectors[k];
    return out;
}

SpectralDecomposition eig_hermitian(const Matrix& a, double groupingTolerance)
{
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw std::invalid_argument("eig_hermitian: matrix must be square and non-empty");
    }
    if (!is_hermitian(a)) {
        const double residual = hermiticity_residual(a);
        std::ostringstream msg;
        msg << "eig_hermitian: matrix is not hermitian (||A - A^dagger|| = " << residual << ")";
        throw NonHermitianError(msg.str(), residual);
    }
    const Matrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();

    SpectralDecomposition out;
    out.groupingTolerance = groupingTolerance;
    const Index n = sym.rows();
    Index start = 0;
    while (start < n) {
        Index stop = start + 1;
        while (stop < n && values(stop) - values(stop - 1) <= groupingTolerance) ++stop;
        Matrix projector = Matrix::Zero(n, n);
        double mean = 0.0;
        for (Index k = start; k < stop; ++k) {
            projector += vectors.col(k) * vectors.col(k).adjoint();
            mean += values(k);
        }
        out.eigenvalues.push_back(mean / static_cast<double>(stop - start));
        out.projectors.push_back(0.5 * (projector + projector.adjoint()));
        start = stop;
    }
    return out;
}

SpectralDecomposition make_decomposition(std::vector<double> values, std::vector<Matrix> projectors,
                                         double groupingTolerance)
{
    if (values.size() != projectors.size() || values.empty()) {
        throw std::invalid_argument("make_decomposition: need one projector per value");
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return values[x] < values[y]; });

    SpectralDecomposition out;
    out.groupingTolerance = groupingTolerance;
    for (std::size_t idx : order) {
        if (!out.eigenvalues.empty() && values[idx] - out.eigenvalues.back() <= groupingTolerance) {
            // merged cluster: weight the representative by rank
            const double r0 = out.projectors.back().trace().real();
            const double r1 = projectors[idx].trace().real();
            out.eigenvalues.back() = (r0 * out.eigenvalues.back() + r1 * values[idx]) / (r0 + r1);
            out.projectors.back() += projectors[idx];
        } else {
            out.eigenvalues.push_back(values[idx]);
            out.projectors.push_back(projectors[idx]);
        }
    }
    return out;
}

Matrix matfunc(const SpectralDecomposition& d, const std::function<double(double)>& f)
{
    Matrix out = Matrix::Zero(d.dimension(), d.dimension());
    for (std::size_t k = 0; k < d.size(); ++k) {
        const double value = f(d.eigenvalues[k]);
        if (!std::isfinite(value)) {
            std::ostringstream msg;
            msg << "matfunc: function undefined at eigenvalue " << d.eigenvalues[k];
            throw std::domain_error(msg.str());
        }
        out += value * d.projectors[k];
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const Matrix& a)
{
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

}  // namespace lsz
