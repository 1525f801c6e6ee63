// Szegedy-type walk for a detailed-balanced generator: the isometry T, the
// reflection R with T^dag R T = Q, and the walk unitary W = R (2 T T^dag - I).
//
// Register order, slowest index first:
//
//     sys2 (D) | sys1 (D) | freq (F) | filter (2) | add (2) [| coupling (M) [| theta (2)]]
//
// sys2 is the first tensor factor of the vec basis (the row index of rho), so
// T's D^2 input columns are exactly the vec basis vectors |i>|j>.
// The frequency register is a qudit whose basis states are labelled by the
// family's frequencies; the sign flip F permutes them via `negation`.

#pragma once

#include <limits>
#include <string>
#include <vector>

#include "lsz/davies.hpp"

namespace lsz {

/// Jumps J(w) with rates G(w), indexed by a negation-closed frequency set.
/// Reflection couplings give sum_w J(w)^dag J(w) = I, which makes T an
/// isometry.
struct JumpFamily {
    Index dim = 0;
    std::vector<Matrix> jumps;
    std::vector<double> rates;
    std::vector<std::size_t> negation;
    std::vector<std::string> labels;

    std::size_t size() const { return jumps.size(); }
    /// Throws on inconsistent sizes, a non-involutive negation or G outside [0, 1].
    void validate() const;
    /// ||sum_w J(w)^dag J(w) - I||
    double completeness_residual() const;
};

JumpFamily family_from_term(const CanonicalTerm& term, double tol = kDefaultGroupingTolerance);

/// R|i> = sign[i] |target[i]>.  Every reflection used by the walk is of this
/// form, so it is stored without materializing an N x N matrix.
class SignedPermutation {
public:
    SignedPermutation() = default;
    SignedPermutation(std::vector<Index> target, std::vector<double> sign);
    static SignedPermutation identity(Index n);

    Index size() const { return static_cast<Index>(target_.size()); }
    Index target(Index i) const { return target_[static_cast<std::size_t>(i)]; }
    double sign(Index i) const { return sign_[static_cast<std::size_t>(i)]; }

    /// R * a
    Matrix apply(const Matrix& a) const;
    Matrix dense() const;
    double trace() const;
    /// R^2 = I (so R = R^dagger, R being real orthogonal).
    bool is_involution() const;

private:
    std::vector<Index> target_;
    std::vector<double> sign_;
};

struct RegisterLayout {
    Index sys2Dim = 0;
    Index sys1Dim = 0;
    Index freqDim = 0;
    Index filterDim = 2;
    Index addDim = 2;
    Index couplingDim = 1;  // > 1 after combine_couplings
    Index thetaDim = 1;     // 2 in paper-theta mode

    Index total() const { return sys2Dim * sys1Dim * freqDim * filterDim * addDim * couplingDim * thetaDim; }
    Index input_dim() const { return sys2Dim * sys1Dim; }
};

struct Embedding {
    RegisterLayout layout;
    Matrix t;
    SignedPermutation r;
};

/// R = I (x) I (x) I (x) |0><0| (x) I  +  I (x) I (x) F (x) |1><1| (x) X
SignedPermutation build_reflection_R(const RegisterLayout& layout, const std::vector<std::size_t>& negation);

/// T = (T0 (x) |0> + T1 (x) |1>) / sqrt(2) with
///   T0 = sum_w J(w) (x) I (x) |w> (x) g(w),   T1 = sum_w I (x) conj(J(w)) (x) |w> (x) g(w),
///   g(w) = sqrt(1 - G(w)) |0> + sqrt(G(w)) |1>.
Embedding build_isometry_single(const JumpFamily& family);

/// The same T assembled from explicit gates, W Phi^dag (S (x) I) Phi on
/// initialized ancillas, with Phi = sum_k P_k (x) (pointer shift by -e_k) on a
/// pointer register holding energy sums.  Rows are mapped back to the
/// Bohr-qudit layout; `leakage` is the norm of amplitude left on pointer
/// values outside the Bohr grid.
struct CircuitIsometry {
    Matrix t;
    double leakage = 0.0;
    Index pointerDim = 0;
};
CircuitIsometry build_isometry_via_circuit(const SpectralDecomposition& h, const Matrix& s,
                                           const std::vector<double>& rates);

enum class CombineMode { StatePrep, PaperTheta };

/// Factor c with T^dag R' T = c * sum_a w_a Q^a: 1 in state-prep mode, 1/M in paper-theta mode.
double combine_scale(CombineMode mode, std::size_t couplings);

/// state-prep:  T = sum_a sqrt(w_a) T^a (x) |a>,                        R' = R (x) I
/// paper-theta: T = M^{-1/2} sum_a T^a (x) |a> (x) (cos t_a |0> + sin t_a |1>),
///              cos(2 t_a) = w_a,                                       R' = R (x) I (x) Z
Embedding combine_couplings(const std::vector<Embedding>& parts, const std::vector<double>& weights,
                            CombineMode mode);

class WalkEmbedding {
public:
    /// Throws std::invalid_argument unless T^dag T = I and R^2 = I to 1e-10.
    explicit WalkEmbedding(Embedding embedding);

    const RegisterLayout& layout() const { return embedding_.layout; }
    const Matrix& t() const { return embedding_.t; }
    const SignedPermutation& r() const { return embedding_.r; }
    Index dimension() const { return embedding_.t.rows(); }

    double isometry_residual() const { return isometryResidual_; }
    /// T^dag R T
    Matrix encoded_block() const;
    /// W * v without forming W.
    Matrix apply(const Matrix& v) const;
    /// Dense Pi = T T^dag and W = R (2 Pi - I); intended for small layouts.
    Matrix projector() const;
    Matrix unitary() const;

private:
    Embedding embedding_;
    double isometryResidual_ = 0.0;
};

WalkEmbedding build_walk_unitary(Matrix t, SignedPermutation r, RegisterLayout layout = {});

/// Walk for every term of a canonical Lindbladian whose jump families are
/// complete (reflection couplings), combined with the term weights.
WalkEmbedding build_walk(const CanonicalLindbladian& cl, CombineMode mode = CombineMode::StatePrep);

struct WalkSpectrum {
    Index dimB = 0;
    Index dimBperp = 0;
    std::vector<double> phasesB;          // measured eigenphases on B, ascending
    std::vector<double> expectedPhasesB;  // +-arccos(lambda_j(Q)), ascending
    bool countsMatch = false;
    double phaseMatchError = std::numeric_limits<double>::infinity();
    double invarianceResidual = 0.0;      // ||(I - V V^dag) W V||
    Index phaseZeroMultiplicityB = 0;
    double phaseGap = 0.0;                // second smallest |phase| on B
    // W = -R on B-perp, so only phases 0 and pi occur there.
    Index bperpPhaseZero = 0;
    Index bperpPhasePi = 0;
    // Only filled when a purification is supplied.
    double fixedPointResidual = std::numeric_limits<double>::quiet_NaN();          // ||W T psi - T psi||
    double fixedPointEigenvectorDistance = std::numeric_limits<double>::quiet_NaN();
};

/// Eigenphases of W on B = span(T, R T) against the prediction from Q.
/// Throws if ||T^dag R T - Q|| > 1e-8.  `purified` (optional, length D^2) is
/// compared to the phase-0 eigenvector when that eigenspace is one-dimensional.
WalkSpectrum walk_spectrum(const WalkEmbedding& walk, const Matrix& q, const Vector* purified = nullptr);

struct GapCheck {
    double delta = 0.0;   // 1 - lambda_2(Q)
    double theta = 0.0;   // arccos(1 - delta)
    double bound = 0.0;   // sqrt(2 delta)
    bool holds = false;   // theta >= bound - 1e-12
};

/// Throws if the top eigenvalue of Q differs from 1 by more than 1e-8.
GapCheck gap_amplification_check(const Matrix& q);

}  // namespace lsz
