// Embedding a general detailed-balanced Lindbladian as a Davies generator
// with reflection couplings on system (x) ancilla.
//
// The ancilla qubit is the outer (slowest) tensor factor: an enlarged basis
// index is anc * d + i.

#pragma once

#include "lsz/walk.hpp"

namespace lsz {

/// X = sum_w X(w) of a canonical term.  Throws if ||X|| > 1 + 1e-10.
Matrix assemble_X(const CanonicalTerm& term);

/// Lambda_theta(A) = sum_{(k,l) in J_theta} P_k A P_l over the Bohr grid of h.
/// Throws if theta is not on that grid.
Matrix projector_lambda(const SpectralDecomposition& h, double theta, const Matrix& a);
/// Same, with h = -ln(sigma).
Matrix projector_lambda(const ReferenceState& ref, double theta, const Matrix& a);

struct ReflectionBlockEncoding {
    Matrix x;
    int ancillaQubits = 1;
    Matrix s;  // [[X, sqrt(I - X^2)], [sqrt(I - X^2), -X]]

    Index system_dimension() const { return x.rows(); }
    /// (<0| (x) I) S (|0> (x) I)
    Matrix top_left() const;
    double reflection_residual() const;  // ||S^2 - I||
    double hermiticity() const;          // ||S - S^dagger||
};

/// Throws if X is not hermitian or ||X|| > 1 + 1e-10.
ReflectionBlockEncoding reflection_block_encoding(const Matrix& x);

/// S(c, theta) for the enlarged Bohr frequencies (c, theta), c in {0, 1, 2}.
/// Frequency index c * n + i, with theta = grid.frequencies[i].
struct ExtendedJumps {
    BohrGrid grid;                 // Bohr grid of the frequency Hamiltonian
    std::vector<Matrix> jumps;     // 3 * grid.size() operators on 2d dims

    std::size_t size() const { return jumps.size(); }
    std::size_t index(int c, std::size_t theta) const { return static_cast<std::size_t>(c) * grid.size() + theta; }
    /// (c, theta) -> (c, -theta)
    std::size_t negation(std::size_t i) const;
    double adjoint_residual() const;      // max ||S(c,-theta) - S(c,theta)^dagger||
    double completeness_residual() const; // ||sum S^dagger S - I||
};

ExtendedJumps extended_jump_operators(const ReflectionBlockEncoding& enc, const SpectralDecomposition& h);

struct ReductionReport {
    Index systemDim = 0;
    Index enlargedDim = 0;         // 2 d
    Index walkDim = 0;
    Index extendedFrequencies = 0; // 3 * (grid size)
    std::size_t terms = 0;
    double maxXNorm = 0.0;
    double assembleResidual = 0.0;        // max ||Lambda_theta(X) - X(theta)||
    double blockEncodingResidual = 0.0;   // max ||top-left(S) - X||
    double reflectionResidual = 0.0;      // max ||S^2 - I||
    double extendedAdjointResidual = 0.0;
    double extendedCompletenessResidual = 0.0;
    double isometryResidual = 0.0;        // enlarged T
    double restrictedQResidual = 0.0;     // ||T0^dag R T0 - Q||
    double scale = 1.0;                   // combination factor c with T^dag R T = c Q
};

struct ReductionResult {
    ReductionReport report;
    /// Walk on the enlarged space with T restricted to ancilla-zero inputs.
    WalkEmbedding walk;
    /// T^dag R T of the restricted walk (equals the direct Q up to `scale`).
    Matrix restrictedQ;
};

/// Builds the enlarged walk and compares its ancilla-zero block to
/// discriminant_matrix(cl).  Throws if some ||X|| > 1.
ReductionResult reduce_to_davies(const CanonicalLindbladian& cl, CombineMode mode = CombineMode::StatePrep);

}  // namespace lsz
