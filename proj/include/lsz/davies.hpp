// Davies generators: Gibbs states, Bohr frequencies, jump operators and
// filter functions.

#pragma once

#include <utility>
#include <vector>

#include "lsz/lindblad.hpp"

namespace lsz {

enum class FilterKind { Metropolis, Glauber };

/// Pairwise energy differences of a Hamiltonian.  `frequencies` is sorted,
/// closed under exact negation and always contains 0.
struct BohrGrid {
    std::vector<double> frequencies;
    /// indexSets[i] = J_w for w = frequencies[i]: pairs (k, l) of eigenvalue
    /// indices with e_k - e_l = w.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> indexSets;

    std::size_t size() const { return frequencies.size(); }
    /// Index of the frequency within `tol` of w; throws if there is none.
    std::size_t index_of(double w, double tol = kDefaultGroupingTolerance) const;
    std::size_t negation(std::size_t i) const { return frequencies.size() - 1 - i; }
};

BohrGrid bohr_grid(const SpectralDecomposition& h);

/// S(w) = sum_{(k,l) in J_w} P_k S P_l, one entry per grid frequency.
std::vector<Matrix> jump_operators(const SpectralDecomposition& h, const BohrGrid& grid, const Matrix& s);

/// Rate for a Bohr frequency of the dimensionless Hamiltonian beta*H.
/// Metropolis: min(1, e^{-w}).  Glauber: 1 / (1 + e^{w}).
double filter_eval(FilterKind kind, double omegaH);

struct Coupling {
    Matrix s;
    double weight = 1.0;
};

struct DaviesInstance {
    SpectralDecomposition hamiltonian;
    double beta = 1.0;
    std::vector<Coupling> couplings;
    FilterKind filter = FilterKind::Metropolis;
    /// Rescale Glauber rates by their maximum over the grid, so the largest is 1.
    bool normalizeGlauber = false;
    /// Give the w = 0 jumps zero rate (pure dephasing off).
    bool dropZeroFrequency = false;

    Index dimension() const { return hamiltonian.dimension(); }
    Matrix hamiltonian_matrix() const { return hamiltonian.reconstruct(); }
    /// Rate table for the grid of this instance's Hamiltonian.
    std::vector<double> rates(const BohrGrid& grid) const;
    /// Throws std::invalid_argument on a violated invariant.  Reflection
    /// couplings (S^2 = I) are only demanded when `requireReflections`.
    void validate(bool requireReflections = false) const;
    bool has_reflection_couplings() const;
};

ReferenceState gibbs_state(const SpectralDecomposition& h, double beta);

/// Canonical form of the Davies generator w.r.t. its Gibbs state.  Every
/// grid frequency appears in every term (jumps may be zero).
CanonicalLindbladian davies_lindbladian(const DaviesInstance& inst);

/// dim {A : [A, M] = 0 for all M in ops}.
Index commutant_dimension(const std::vector<Matrix>& ops);

}  // namespace lsz
