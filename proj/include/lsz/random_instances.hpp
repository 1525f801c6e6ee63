// Seeded generators for test and benchmark instances.  Every generator is a
// pure function of the engine state, so equal seeds give equal instances.

#pragma once

#include <random>

#include "lsz/davies.hpp"

namespace lsz {

using Rng = std::mt19937_64;

Matrix random_complex_gaussian(Index rows, Index cols, Rng& rng);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
Matrix random_unitary(Index d, Rng& rng);
Matrix random_hermitian(Index d, Rng& rng);
/// sign(A) for a random hermitian A; a hermitian reflection.
Matrix random_reflection(Index d, Rng& rng);
/// Full-rank density matrix with eigenvalues bounded away from zero.
Matrix random_density(Index d, Rng& rng);

struct DaviesOptions {
    Index dimension = 3;
    std::size_t couplings = 1;
    double betaMax = 4.0;
    /// Negative: draw beta uniformly from [0, betaMax].
    double beta = -1.0;
    bool randomFilter = true;
};

/// H with eigenvalues uniform in [0, 1] in a random basis, reflection
/// couplings, random positive weights and a random filter.
DaviesInstance random_davies(const DaviesOptions& opt, Rng& rng);

/// sigma random; each term samples X = A / ||A|| and keeps X(theta) =
/// Lambda_theta(X) at every Bohr frequency of -ln(sigma), with Metropolis
/// rates min(1, e^{-theta}).
CanonicalLindbladian random_canonical(Index d, std::size_t terms, Rng& rng);

/// Kraus operators sqrt(w G) X(theta) of a random canonical Lindbladian plus
/// A0 = sqrt(I - sum w G X^dag X); detailed balanced w.r.t. the same sigma.
QuantumChannel random_db_channel(Index d, std::size_t terms, Rng& rng, Matrix* sigma = nullptr);

}  // namespace lsz
