// Purely dissipative Lindbladians, their canonical detailed-balanced form,
// and quantum channels.

#pragma once

#include <optional>
#include <vector>

#include "lsz/matrix_core.hpp"
#include "lsz/superop.hpp"

namespace lsz {

/// L(rho) = sum_i L_i rho L_i^dagger - 1/2 {L_i^dagger L_i, rho}
struct Lindbladian {
    std::vector<Matrix> jumpOps;
    Index dimension = 0;

    Lindbladian() = default;
    Lindbladian(std::vector<Matrix> ops, Index d);
};

Matrix apply_schrodinger(const Lindbladian& l, const Matrix& rho);
Matrix apply_heisenberg(const Lindbladian& l, const Matrix& o);

/// Lhat with Lhat vec(rho) = vec(L(rho)).
Matrix lindblad_matrix(const Lindbladian& l);

/// Threshold on check_detailed_balance() below which L counts as detailed balanced.
inline constexpr double kDetailedBalanceThreshold = 1e-8;

/// ||Omega o L* - L o Omega|| over all matrix units, in operator norm of the
/// d^2 x d^2 difference.
double check_detailed_balance(const Lindbladian& l, const ReferenceState& ref, const WeightFunction& f);

/// ||L(sigma)|| (operator norm).
double fixed_point_residual(const Lindbladian& l, const Matrix& sigma);

/// top - (second largest eigenvalue, multiplicities counted).  Throws if
/// `top` is not the largest eigenvalue to 1e-9 or M is 1x1.
double spectral_gap(const Matrix& m, double topEigenvalue);

/// One jump of a canonical term, X(omega) with rate G(omega).  `omega` is a
/// Bohr frequency of the term's frequency Hamiltonian; the modular exponent
/// theta (Delta_sigma X = e^{-theta} X) is frequencyScale * omega.
struct CanonicalJump {
    double omega = 0.0;
    Matrix x;
    double rate = 0.0;
};

struct CanonicalTerm {
    double weight = 1.0;
    std::vector<CanonicalJump> jumps;  // sorted by omega

    /// Index of the jump at -omega of jump i (throws if absent).
    std::size_t negation(std::size_t i, double tol = kDefaultGroupingTolerance) const;
};

/// Residuals of every canonical-form invariant; all must be within tolerance.
struct CanonicalCheck {
    double weightSumResidual = 0.0;     // |sum w - 1|
    double adjointPairResidual = 0.0;   // max ||X(-w) - X(w)^dagger||
    double modularResidual = 0.0;       // max ||Delta X(w) - e^{-theta} X(w)||
    double kmsResidual = 0.0;           // max relative |G(w) - e^{-theta} G(-w)|
    bool negationClosed = true;
    bool ratesNonnegative = true;
    bool weightsInRange = true;

    bool ok() const;
};

/// Convex combination of canonical terms sharing one reference state.
///
/// For a generic detailed-balanced Lindbladian the frequency Hamiltonian is
/// h = -ln sigma with scale 1.  For a Davies generator it is the system
/// Hamiltonian H with scale beta, so that distinct Bohr frequencies of H stay
/// distinct even at beta = 0.
struct CanonicalLindbladian {
    ReferenceState reference;
    SpectralDecomposition frequencyHamiltonian;
    double frequencyScale = 1.0;
    std::vector<CanonicalTerm> terms;

    Lindbladian lindbladian() const;
    CanonicalCheck check() const;
    /// Throws std::invalid_argument describing the first failed invariant.
    void validate() const;
};

struct QuantumChannel {
    std::vector<Matrix> krausOps;

    Index dimension() const { return krausOps.empty() ? 0 : krausOps.front().rows(); }
    /// ||sum A_i^dagger A_i - I||
    double completeness_residual() const;
};

/// That vec(T(rho)) = That vec(rho).
Matrix channel_matrix(const QuantumChannel& t);

/// Jump operators equal to the Kraus operators, so that L = T - I.
/// Throws if the Kraus completeness residual exceeds 1e-10.
Lindbladian channel_to_lindbladian(const QuantumChannel& t);

}  // namespace lsz
