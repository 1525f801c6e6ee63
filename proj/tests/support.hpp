#pragma once

#include <cmath>

#include "lsz/davies.hpp"
#include "lsz/random_instances.hpp"

namespace lsz::test {

inline Matrix pauli_x()
{
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix pauli_z()
{
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline Matrix diag(std::initializer_list<double> values)
{
    Matrix m = Matrix::Zero(static_cast<Index>(values.size()), static_cast<Index>(values.size()));
    Index i = 0;
    for (double v : values) {
        m(i, i) = v;
        ++i;
    }
    return m;
}

inline Matrix ket_bra(Index d, Index i, Index j)
{
    Matrix m = Matrix::Zero(d, d);
    m(i, j) = 1.0;
    return m;
}

/// H = diag(0, 1), beta = 1, one coupling S = X, Metropolis.
inline DaviesInstance qubit1()
{
    DaviesInstance inst;
    inst.hamiltonian = eig_hermitian(diag({0.0, 1.0}));
    inst.beta = 1.0;
    inst.couplings = {{pauli_x(), 1.0}};
    return inst;
}

inline double dist(const Matrix& a, const Matrix& b) { return operator_norm(a - b); }

}  // namespace lsz::test
